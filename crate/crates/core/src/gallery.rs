//! The explicit extremal examples: one constructor per family, each bundled
//! with the properties it is claimed to have.

use serde::Serialize;

use crate::algebra::{Elem, FieldSpec, Mat, Subspace};
use crate::error::{Error, Result};
use crate::opspace::{Direction, OperatorSpace};
use crate::solver::{solve_compatible_maps, CompatMode, MapClass, OperatorMap};
use crate::verify::TheoremId;

/// Identifier and parameter constraints of a gallery family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CaseInfo {
    pub name: &'static str,
    pub constraints: &'static str,
    /// Smallest parameters at which the codimension sits exactly one above the bound.
    pub minimal: (usize, usize, &'static str),
}

pub const CASES: [CaseInfo; 8] = [
    CaseInfo {
        name: "affine-f2",
        constraints: "field F2, n >= 2, p >= 1",
        minimal: (2, 1, "F2"),
    },
    CaseInfo {
        name: "affine-big",
        constraints: "q > 2, n >= 2, p >= 2",
        minimal: (2, 2, "F3"),
    },
    CaseInfo {
        name: "qrc-hom-1",
        constraints: "any field, n >= 2, p >= 1 (one above the bound only when q > 2)",
        minimal: (2, 1, "F3"),
    },
    CaseInfo {
        name: "qrc-hom-f2",
        constraints: "field F2, n >= 2, p >= 1",
        minimal: (2, 1, "F2"),
    },
    CaseInfo {
        name: "alternating",
        constraints: "any field, n >= 3, p >= 2 (one above the bound only when q > 2)",
        minimal: (3, 2, "F3"),
    },
    CaseInfo {
        name: "sym2-f3",
        constraints: "field F3, n = p = 2",
        minimal: (2, 2, "F3"),
    },
    CaseInfo {
        name: "field-ext",
        constraints: "field F2 or F3 (F4 and F9 name the extension), n = p = 2 (one above the bound only over F3)",
        minimal: (2, 2, "F3"),
    },
    CaseInfo {
        name: "f2-5param",
        constraints: "field F2, n >= 3, p >= 2",
        minimal: (3, 2, "F2"),
    },
];

pub fn list_cases() -> &'static [CaseInfo] {
    &CASES
}

/// A constructed example with its claims.
#[derive(Debug, Clone)]
pub struct GalleryCase {
    pub name: &'static str,
    pub n: usize,
    pub p: usize,
    pub field: FieldSpec,
    pub space: OperatorSpace,
    pub map: OperatorMap,
    pub direction: Option<Direction>,
    pub class: MapClass,
    pub expected_codim: usize,
    /// The statement whose codimension bound this case exceeds by exactly one.
    pub bound_exceeded: Option<TheoremId>,
}

impl GalleryCase {
    pub fn mode(&self) -> CompatMode {
        match &self.direction {
            Some(d) => CompatMode::QuasiRange(d.clone()),
            None => CompatMode::Range,
        }
    }
}

fn require(ok: bool, name: &str, constraints: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} needs {constraints}")))
    }
}

/// `base ∨ Mat_{n-r, p-c}` for a base block of `r` rows and `c` columns.
fn extend(base: &OperatorSpace, n: usize, p: usize) -> Result<OperatorSpace> {
    base.vee(&OperatorSpace::full(
        base.field(),
        n - base.n(),
        p - base.p(),
    ))
}

fn padded(v: &[Elem], n: usize) -> Vec<Elem> {
    let mut out = v.to_vec();
    out.resize(n, 0);
    out
}

pub fn build_case(name: &str, n: usize, p: usize, field: FieldSpec) -> Result<GalleryCase> {
    let info = CASES
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| Error::domain(format!("unknown gallery case {name:?}")))?;
    let q = field.q();
    let c = info.constraints;
    let (space, map_fn, direction, class, codim, bound): (
        OperatorSpace,
        Box<dyn Fn(&Mat) -> Vec<Elem>>,
        Option<Direction>,
        MapClass,
        usize,
        Option<TheoremId>,
    ) = match name {
        "affine-f2" => {
            require(q == 2 && n >= 2 && p >= 1, name, c)?;
            let mut offset = Mat::zeros(n, p);
            offset.set(1, 0, 1);
            let mut trans = vec![Mat::unit(n, p, 0, 0)];
            for i in 0..n {
                for j in 1..p {
                    trans.push(Mat::unit(n, p, i, j));
                }
            }
            let space = OperatorSpace::affine(field, n, p, &offset, &trans)?;
            let f = move |m: &Mat| padded(&[0, field.add(m.get(0, 0), 1)], n);
            (
                space,
                Box::new(f),
                None,
                MapClass::Affine,
                n - 1,
                Some(TheoremId::AffGen),
            )
        }
        "affine-big" => {
            require(q > 2 && n >= 2 && p >= 2, name, c)?;
            let offset = Mat::unit(n, p, 0, 0);
            let mut trans = Vec::new();
            for i in 0..n {
                for j in 1..p {
                    trans.push(Mat::unit(n, p, i, j));
                }
            }
            let space = OperatorSpace::affine(field, n, p, &offset, &trans)?;
            let f = move |m: &Mat| padded(&[m.get(1, 1)], n);
            (
                space,
                Box::new(f),
                None,
                MapClass::Affine,
                n,
                Some(TheoremId::AffBig),
            )
        }
        "qrc-hom-1" => {
            require(n >= 2 && p >= 1, name, c)?;
            let space = extend(&OperatorSpace::full(field, 1, 1), n, p)?;
            let f = move |m: &Mat| padded(&[0, m.get(0, 0)], n);
            let bound = (q > 2).then_some(TheoremId::QrcHom);
            (
                space,
                Box::new(f),
                Some(Direction::unit(n, 0)),
                MapClass::Linear,
                n - 1,
                bound,
            )
        }
        "qrc-hom-f2" => {
            require(q == 2 && n >= 2 && p >= 1, name, c)?;
            let space = extend(&OperatorSpace::full(field, 2, 1), n, p)?;
            let f = move |m: &Mat| padded(&[m.get(0, 0)], n);
            let d = Direction::new(field, &padded(&[1, 1], n))?;
            (
                space,
                Box::new(f),
                Some(d),
                MapClass::Linear,
                n - 2,
                Some(TheoremId::QrcHom),
            )
        }
        "alternating" => {
            require(n >= 3 && p >= 2, name, c)?;
            let space = extend(&alternating_base(field)?, n, p)?;
            let f = move |m: &Mat| padded(&[field.neg(m.get(2, 0)), field.neg(m.get(2, 1))], n);
            let bound = (q > 2).then_some(TheoremId::Qrc2b);
            (
                space,
                Box::new(f),
                Some(Direction::unit(n, 2)),
                MapClass::Linear,
                2 * n - 3,
                bound,
            )
        }
        "sym2-f3" => {
            require(q == 3 && n == 2 && p == 2, name, c)?;
            let space = symmetric_2x2(field)?;
            let f = move |m: &Mat| vec![field.sub(m.get(1, 1), m.get(0, 0)), 0];
            (
                space,
                Box::new(f),
                Some(Direction::unit(2, 1)),
                MapClass::Linear,
                1,
                Some(TheoremId::Qrc2b),
            )
        }
        "field-ext" => {
            let base = match q {
                2 | 4 => FieldSpec::f2(),
                3 | 9 => FieldSpec::f3(),
                _ => return Err(Error::domain(format!("{name} needs {c}"))),
            };
            require(n == 2 && p == 2, name, c)?;
            let space = regular_representation(base)?;
            let bound = (base.q() == 3).then_some(TheoremId::Lin2);
            let f = move |m: &Mat| vec![m.get(0, 0), 0];
            return finish(
                name,
                2,
                2,
                base,
                space,
                Box::new(f),
                None,
                MapClass::Linear,
                2,
                bound,
            );
        }
        "f2-5param" => {
            require(q == 2 && n >= 3 && p >= 2, name, c)?;
            let base = five_parameter_f2()?;
            let space = extend(&base, n, p)?;
            let f = move |m: &Mat| padded(&[field.add(m.get(0, 0), m.get(0, 1))], n);
            let d = Direction::new(field, &padded(&[1, 0, 1], n))?;
            (
                space,
                Box::new(f),
                Some(d),
                MapClass::Linear,
                2 * n - 5,
                Some(TheoremId::Qrc2c),
            )
        }
        _ => unreachable!("names come from CASES"),
    };
    finish(
        name, n, p, field, space, map_fn, direction, class, codim, bound,
    )
}

#[allow(clippy::too_many_arguments)]
fn finish(
    name: &str,
    n: usize,
    p: usize,
    field: FieldSpec,
    space: OperatorSpace,
    map_fn: Box<dyn Fn(&Mat) -> Vec<Elem>>,
    direction: Option<Direction>,
    class: MapClass,
    expected_codim: usize,
    bound_exceeded: Option<TheoremId>,
) -> Result<GalleryCase> {
    let map = OperatorMap::from_fn(&space, class, map_fn)?;
    let name = CASES
        .iter()
        .find(|c| c.name == name)
        .expect("known case")
        .name;
    Ok(GalleryCase {
        name,
        n,
        p,
        field,
        space,
        map,
        direction,
        class,
        expected_codim,
        bound_exceeded,
    })
}

/// `[[a, b], [b, c]]`.
pub fn symmetric_2x2(field: FieldSpec) -> Result<OperatorSpace> {
    let mut b = Mat::zeros(2, 2);
    b.set(0, 1, 1);
    b.set(1, 0, 1);
    OperatorSpace::linear_span(
        field,
        2,
        2,
        &[Mat::unit(2, 2, 0, 0), b, Mat::unit(2, 2, 1, 1)],
    )
}

/// `[[0, -a], [a, 0], [b, c]]`.
fn alternating_base(field: FieldSpec) -> Result<OperatorSpace> {
    let mut a = Mat::zeros(3, 2);
    a.set(0, 1, field.neg(1));
    a.set(1, 0, 1);
    OperatorSpace::linear_span(
        field,
        3,
        2,
        &[a, Mat::unit(3, 2, 2, 0), Mat::unit(3, 2, 2, 1)],
    )
}

/// `[[a, b], [b, c], [e, f]]`.
fn five_parameter_f2() -> Result<OperatorSpace> {
    let f2 = FieldSpec::f2();
    let mut b = Mat::zeros(3, 2);
    b.set(0, 1, 1);
    b.set(1, 0, 1);
    OperatorSpace::linear_span(
        f2,
        3,
        2,
        &[
            Mat::unit(3, 2, 0, 0),
            b,
            Mat::unit(3, 2, 1, 1),
            Mat::unit(3, 2, 2, 0),
            Mat::unit(3, 2, 2, 1),
        ],
    )
}

/// Multiplications by the elements of the quadratic extension `K[x]/(m)`, in
/// the basis `{1, x}`, where `m` is the fixed modulus of the order-`q²` field.
pub fn regular_representation(base: FieldSpec) -> Result<OperatorSpace> {
    let ext = FieldSpec::new(base.p(), 2)?;
    let m = ext.modulus().expect("degree-2 field has a modulus");
    // x² = -(m0 + m1 x)
    let (c0, c1) = (base.neg(m[0]), base.neg(m[1]));
    // mult by 1 is the identity; mult by x sends 1 ↦ x and x ↦ c0 + c1 x
    let mut by_x = Mat::zeros(2, 2);
    by_x.set(1, 0, 1);
    by_x.set(0, 1, c0);
    by_x.set(1, 1, c1);
    OperatorSpace::linear_span(base, 2, 2, &[Mat::identity(2), by_x])
}

/// One verified claim of a gallery case.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseCheck {
    pub claim: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub name: String,
    pub n: usize,
    pub p: usize,
    pub field: String,
    pub codim: usize,
    pub nonlocal: bool,
    pub checks: Vec<CaseCheck>,
}

impl CaseReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn in_image(field: FieldSpec, s: &Mat, v: &[Elem]) -> bool {
    Subspace::row_space(field, &s.transpose()).contains(v)
}

/// Every `s` on which the case's condition is imposed satisfies `F(s) ∈ im s`.
fn pointwise_compatible(case: &GalleryCase) -> (bool, String) {
    let f = case.field;
    for s in case.space.elements() {
        let image = Subspace::row_space(f, &s.transpose());
        if case
            .direction
            .as_ref()
            .is_some_and(|d| image.contains(d.vector()))
        {
            continue;
        }
        let v = case.map.evaluate(&s).expect("element of the space");
        if !image.contains(&v) {
            return (false, format!("F({s:?}) = {v:?} is outside the image"));
        }
    }
    (true, format!("{} elements checked", case.space.size()))
}

fn min_evaluation_dim(space: &OperatorSpace) -> usize {
    Direction::all(space.field(), space.p())
        .iter()
        .map(|x| space.apply_to_vector(x.vector()).expect("length p").dim())
        .min()
        .unwrap_or(0)
}

/// Re-derives every claim of the case by direct computation.
pub fn check_case(case: &GalleryCase) -> CaseReport {
    let mut checks = Vec::new();
    let mut push = |claim: &str, passed: bool, detail: String| {
        checks.push(CaseCheck {
            claim: claim.to_string(),
            passed,
            detail,
        })
    };
    let mode = case.mode();
    let (ok, detail) = pointwise_compatible(case);
    push(&format!("{mode} compatible"), ok, detail);

    let member = solve_compatible_maps(&case.space, &mode, case.class)
        .map(|sols| sols[0].contains(&case.map))
        .unwrap_or(false);
    push("in the solver's solution space", member, String::new());

    let nonlocal = !case.map.is_local();
    push("non-local", nonlocal, String::new());

    let codim = case.space.codim();
    push(
        "codimension",
        codim == case.expected_codim,
        format!("codim {codim}, expected {}", case.expected_codim),
    );

    if let Some(t) = case.bound_exceeded {
        let bound = t.codim_bound(case.n, case.field.q());
        push(
            &format!("one above the {t} bound"),
            codim as i64 == bound + 1,
            format!("bound {bound}"),
        );
    }

    let f = case.field;
    match case.name {
        "affine-f2" => {
            let linear = case.map.linear_part();
            let bad = linear
                .space()
                .elements()
                .find(|t| !in_image(f, t, &linear.evaluate(t).expect("translation element")));
            push(
                "linear part is not range-compatible",
                bad.is_some(),
                bad.map(|t| format!("at {t:?}")).unwrap_or_default(),
            );
        }
        "alternating" => {
            let d = min_evaluation_dim(&alternating_base(f).expect("fixed space"));
            push(
                "dim SX >= 2 for every X != 0 on the base block",
                d >= 2,
                format!("minimum {d}"),
            );
            let d = min_evaluation_dim(&case.space);
            push(
                "dim SX >= 2 for every X != 0",
                d >= 2,
                format!("minimum {d}"),
            );
        }
        "sym2-f3" => {
            let w = case.space.special_type_witness(1);
            push("not special of type 1", w.is_none(), format!("{w:?}"));
        }
        "field-ext" => {
            let all_invertible = case.space.elements().all(|m| m.is_zero() || m.rank(f) == 2);
            push(
                "every non-zero element is invertible",
                all_invertible,
                String::new(),
            );
        }
        "f2-5param" => {
            let base = five_parameter_f2().expect("fixed space");
            let exact = Direction::all(f, 2)
                .iter()
                .all(|x| base.apply_to_vector(x.vector()).expect("length 2").dim() == 3);
            push(
                "dim TX = 3 for every X != 0 on the base block",
                exact,
                String::new(),
            );
            let d = min_evaluation_dim(&case.space);
            push(
                "dim TX >= 3 for every X != 0",
                d >= 3,
                format!("minimum {d}"),
            );
        }
        _ => {}
    }

    CaseReport {
        name: case.name.to_string(),
        n: case.n,
        p: case.p,
        field: case.field.name(),
        codim,
        nonlocal,
        checks,
    }
}
