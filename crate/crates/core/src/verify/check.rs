//! Per-space conclusion checks.

use super::{Outcome, TheoremId, Violation};
use crate::algebra::{axpy, vec_digits, AffineFlat, CoordinateCounter, Elem, Mat, Subspace};
use crate::error::{Error, Result};
use crate::opspace::{Direction, OperatorSpace};
use crate::solver::{
    decompose_special, solve_compatible_maps, CompatMode, MapClass, OperatorMap, SolutionSpace,
};

/// Above this many classes modulo local maps only the basis is decomposed.
const CLASS_LIMIT: u64 = 256;

pub(crate) fn check_space(id: TheoremId, space: &OperatorSpace) -> Result<Outcome> {
    let mut out = Outcome::default();
    match id {
        TheoremId::Qrc2a | TheoremId::Qrc2b | TheoremId::Qrc2c if space.is_special(1) => {
            out.bump("special_type_1");
            return Ok(out);
        }
        TheoremId::Qrc2c if space.is_special(2) => {
            out.bump("special_type_2");
            return Ok(out);
        }
        TheoremId::DescF3 => return desc_f3(space),
        _ => {}
    }
    let rank_one = evaluations(space, 1);
    let rank_two = evaluations(space, 2);
    let affine_lines: Vec<_> = rank_one
        .iter()
        .filter(|(_, fl)| !fl.is_linear())
        .cloned()
        .collect();
    let skip = match id {
        TheoremId::QrcDeg1 if rank_one.is_empty() => Some("no_rank_one_evaluation"),
        TheoremId::QrcDeg2 if rank_two.is_empty() => Some("no_rank_two_evaluation"),
        TheoremId::QrcAff3 if affine_lines.is_empty() => Some("no_affine_line_evaluation"),
        _ => None,
    };
    if let Some(key) = skip {
        out.bump(key);
        return Ok(out);
    }
    let mode = if id.is_quasi() {
        CompatMode::QuasiRangeAny
    } else {
        CompatMode::Range
    };
    for &class in id.classes() {
        let sols = solve_compatible_maps(space, &mode, class)?;
        match id {
            TheoremId::QrcDeg1 => degenerate_rank_one(space, &sols, &rank_one, &mut out)?,
            TheoremId::QrcDeg2 => degenerate_rank_two(&sols, &rank_two, &mut out)?,
            TheoremId::QrcAff2 => {
                if sols.iter().all(SolutionSpace::all_local) {
                    out.bump("all_local");
                } else if !rank_one.is_empty() {
                    out.bump("rank_one_evaluation");
                } else {
                    out.violations.push(first_nonlocal(
                        space,
                        &sols,
                        "non-local map and dim Sx >= 2 for every x",
                    ));
                }
            }
            TheoremId::QrcAff3 => affine_line(space, &sols, &affine_lines, &mut out)?,
            _ => {
                if sols.iter().all(SolutionSpace::all_local) {
                    out.bump("all_local");
                } else {
                    out.violations
                        .push(first_nonlocal(space, &sols, "non-local compatible map"));
                }
            }
        }
    }
    Ok(out)
}

/// Normalized `x` with `dim Sx = dim`, with `Sx`.
fn evaluations(space: &OperatorSpace, dim: usize) -> Vec<(Vec<Elem>, AffineFlat)> {
    Direction::all(space.field(), space.p())
        .into_iter()
        .filter_map(|x| {
            let fl = space.apply_to_vector(x.vector()).ok()?;
            (fl.dim() == dim).then(|| (x.into_vec(), fl))
        })
        .collect()
}

fn first_nonlocal(space: &OperatorSpace, sols: &[SolutionSpace], detail: &str) -> Violation {
    let sol = sols
        .iter()
        .find(|s| !s.all_local())
        .expect("some solution space is non-local");
    Violation::new(space, sol.class(), detail)
        .with_map(sol.witness().expect("non-local"))
        .with_direction(sol.direction())
}

/// Representatives of the non-zero classes of solutions modulo local maps,
/// or just a basis of them when there are too many.
fn nonlocal_classes(sol: &SolutionSpace) -> Vec<OperatorMap> {
    let basis = sol.nonlocal_basis();
    let fp = sol.space().field().prime_subfield();
    let count = (fp.q() as u64)
        .checked_pow(basis.len() as u32)
        .unwrap_or(u64::MAX);
    if count > CLASS_LIMIT {
        return basis;
    }
    let coeffs: Vec<Vec<u8>> = basis.iter().map(OperatorMap::coefficients).collect();
    let len = OperatorMap::coefficient_len(sol.space(), sol.class());
    CoordinateCounter::new(fp.q(), basis.len())
        .filter(|c| c.iter().any(|&x| x != 0))
        .map(|c| {
            let mut v = vec![0; len];
            for (&ci, b) in c.iter().zip(&coeffs) {
                axpy(fp, &mut v, ci, b);
            }
            OperatorMap::from_coefficients(sol.space(), sol.class(), &v)
                .expect("solution coefficients")
        })
        .collect()
}

fn degenerate_rank_one(
    space: &OperatorSpace,
    sols: &[SolutionSpace],
    xs: &[(Vec<Elem>, AffineFlat)],
    out: &mut Outcome,
) -> Result<()> {
    let mut range: Option<SolutionSpace> = None;
    for sol in sols.iter().filter(|s| !s.all_local()) {
        out.bump("nonlocal_solution_spaces");
        let d = sol.direction().expect("quasi solve");
        for f in nonlocal_classes(sol) {
            for (x, _) in xs {
                let r = decompose_special(&f, x, d)?;
                let fail = |why: &str| {
                    Violation::new(space, sol.class(), why)
                        .with_map(&f)
                        .with_direction(Some(d))
                        .at(x)
                };
                let c = match r.classification {
                    Some(c) if r.feasible && r.verified => c,
                    _ => {
                        out.violations
                            .push(fail("no decomposition F = local + φ(s(x))"));
                        continue;
                    }
                };
                if c.nonlinear_endomorphism() {
                    out.bump("branch_a");
                    if range.is_none() {
                        range = Some(
                            solve_compatible_maps(space, &CompatMode::Range, sol.class())?
                                .remove(0),
                        );
                    }
                    if !range.as_ref().expect("just solved").contains(&f) {
                        out.violations.push(fail(
                            "non-linear endomorphism branch but F is not range-compatible",
                        ));
                    }
                } else if c.d_equals_sx {
                    out.bump("branch_b");
                } else {
                    out.violations.push(fail(
                        "φ is not a non-linear endomorphism of Sx and D differs from Sx",
                    ));
                }
            }
        }
    }
    Ok(())
}

fn degenerate_rank_two(
    sols: &[SolutionSpace],
    xs: &[(Vec<Elem>, AffineFlat)],
    out: &mut Outcome,
) -> Result<()> {
    for sol in sols.iter().filter(|s| !s.all_local()) {
        out.bump("nonlocal_solution_spaces");
        let d = sol.direction().expect("quasi solve");
        for f in nonlocal_classes(sol) {
            for (x, _) in xs {
                let r = decompose_special(&f, x, d)?;
                let fail = |why: &str| {
                    Violation::new(sol.space(), sol.class(), why)
                        .with_map(&f)
                        .with_direction(Some(d))
                        .at(x)
                };
                match r.classification {
                    Some(c) if r.feasible && r.verified => {
                        if !c.d_inside_sx {
                            out.violations.push(fail("D is not contained in Sx"));
                        } else if !c.rank_one_projection_off_line() {
                            out.violations.push(fail(
                                "φ is not a rank-one projection with eigenspaces off D",
                            ));
                        } else {
                            out.bump("rank_one_projection");
                        }
                    }
                    _ => out
                        .violations
                        .push(fail("no decomposition F = local + φ(s(x))")),
                }
            }
        }
    }
    Ok(())
}

/// Coefficient vector of the map whose `block`-th value is `value` and every other value zero.
fn block_coefficients(
    space: &OperatorSpace,
    class: MapClass,
    block: usize,
    value: &[Elem],
) -> Vec<u8> {
    let f = space.field();
    let width = space.n() * f.k() as usize;
    let mut c = vec![0; OperatorMap::coefficient_len(space, class)];
    c[block * width..(block + 1) * width].copy_from_slice(&vec_digits(f, value));
    c
}

/// Every solution lies in the sum of the local maps and the span of `family`.
fn covered(sol: &SolutionSpace, family: &[Vec<u8>]) -> Result<bool> {
    let fp = sol.coefficient_space().field();
    let len = sol.coefficient_space().ambient_dim();
    let target = sol
        .local_subspace()
        .sum(&Subspace::span(fp, len, family)?)?;
    Ok(sol.coefficient_space().is_subspace_of(&target))
}

fn affine_line(
    space: &OperatorSpace,
    sols: &[SolutionSpace],
    xs: &[(Vec<Elem>, AffineFlat)],
    out: &mut Outcome,
) -> Result<()> {
    let field = space.field();
    let k = field.k() as usize;
    for sol in sols.iter().filter(|s| !s.all_local()) {
        out.bump("nonlocal_solution_spaces");
        let class = sol.class();
        let d = sol.direction().expect("quasi solve");
        let witness = sol.witness().expect("non-local");
        for (x, flat) in xs {
            let fail = |why: &str| {
                Violation::new(space, class, why)
                    .with_map(witness)
                    .with_direction(Some(d))
                    .at(x)
            };
            if field.q() != 3 {
                out.violations.push(fail("field order is not 3"));
            }
            let meets = field.elements().any(|t| {
                flat.contains(
                    &d.vector()
                        .iter()
                        .map(|&y| field.mul(t, y))
                        .collect::<Vec<_>>(),
                )
            });
            if !meets {
                out.violations.push(fail("D0 does not meet Sx"));
            }
            let w = flat.linear_span();
            let scaled: Vec<Vec<Elem>> = w
                .basis_vectors()
                .flat_map(|b| {
                    (0..k).map(move |e| {
                        b.iter()
                            .map(|&y| field.mul(field.basis_elem(e), y))
                            .collect()
                    })
                })
                .collect();
            let blocks = OperatorMap::generator_count(space, class) + class.has_base() as usize;
            let values_in_w: Vec<Vec<u8>> = (0..blocks)
                .flat_map(|b| {
                    scaled
                        .iter()
                        .map(move |v| block_coefficients(space, class, b, v))
                })
                .collect();
            if !covered(sol, &values_in_w)? {
                out.violations
                    .push(fail("F minus a local map does not take values in Vect(Sx)"));
            }
            if space.n() > 2 {
                let basis: Vec<Vec<Elem>> = w.basis_vectors().map(<[Elem]>::to_vec).collect();
                let mut family = Vec::new();
                for a in &basis {
                    for bi in 0..basis.len() {
                        for e in 0..k {
                            let lambda = field.basis_elem(e);
                            let psi = OperatorMap::from_fn(space, class, |s: &Mat| {
                                let c = w
                                    .coordinates(&s.mul_vec(field, x))
                                    .expect("s(x) lies in Vect(Sx)");
                                let coef = field.mul(lambda, c[bi]);
                                a.iter().map(|&y| field.mul(coef, y)).collect()
                            })?;
                            family.push(psi.coefficients());
                        }
                    }
                }
                if !covered(sol, &family)? {
                    out.violations.push(fail(
                        "F is not local plus ψ(s(x)) for an endomorphism ψ of Vect(Sx)",
                    ));
                }
            }
            out.bump("affine_line_checks");
        }
    }
    Ok(())
}

/// Matrices `[[a, *], [1-a, *]]` of `Mat_{2,p}(F3)`.
pub fn desc_f3_space(p: usize) -> Result<OperatorSpace> {
    if p < 2 {
        return Err(Error::domain("the described space needs p ≥ 2"));
    }
    let f3 = crate::algebra::FieldSpec::f3();
    let mut shift = Mat::unit(2, p, 0, 0);
    shift.set(1, 0, 2);
    let mut translations = vec![shift];
    for i in 0..2 {
        for j in 1..p {
            translations.push(Mat::unit(2, p, i, j));
        }
    }
    OperatorSpace::affine(f3, 2, p, &Mat::unit(2, p, 1, 0), &translations)
}

/// The maps `(m) ↦ (m11, 0)` and `(m) ↦ (0, m2j)` for `j ≥ 2`.
pub(crate) fn desc_f3_family(space: &OperatorSpace) -> Result<Vec<OperatorMap>> {
    let mut out = vec![OperatorMap::from_fn(space, MapClass::Affine, |s| {
        vec![s.get(0, 0), 0]
    })?];
    for j in 1..space.p() {
        out.push(OperatorMap::from_fn(space, MapClass::Affine, |s| {
            vec![0, s.get(1, j)]
        })?);
    }
    Ok(out)
}

fn desc_f3(space: &OperatorSpace) -> Result<Outcome> {
    let mut out = Outcome::default();
    let d0 = Direction::new(space.field(), &[1, 1])?;
    let sol = solve_compatible_maps(space, &CompatMode::QuasiRange(d0.clone()), MapClass::Affine)?
        .remove(0);
    let family = desc_f3_family(space)?;
    let fail = |why: String| Violation::new(space, MapClass::Affine, why).with_direction(Some(&d0));
    for g in &family {
        if !sol.contains(g) {
            out.violations
                .push(fail("a described map is not quasi-range-compatible".into()).with_map(g));
        }
    }
    let expected = sol.local_dim() + 1 + (space.p() - 1);
    if sol.dim() != expected {
        out.violations.push(fail(format!(
            "solution dimension {} instead of {expected}",
            sol.dim()
        )));
    }
    let coeffs: Vec<Vec<u8>> = family.iter().map(OperatorMap::coefficients).collect();
    if !covered(&sol, &coeffs)? {
        out.violations
            .push(fail("a solution is not local plus a described map".into()));
    }
    *out.stats.entry("solution_dim").or_default() += sol.dim() as u64;
    *out.stats.entry("local_dim").or_default() += sol.local_dim() as u64;
    Ok(out)
}
