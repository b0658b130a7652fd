use std::cmp::Ordering;

use serde::Serialize;

use super::map::OperatorMap;
use super::solve::DEFAULT_ELEMENT_GUARD;
use super::MapClass;
use crate::algebra::{
    axpy, kernel, solve_system, vec_compose, vec_digits, AffineFlat, Elem, FieldSpec, Mat, Subspace,
};
use crate::error::Result;
use crate::opspace::{Direction, OperatorSpace};

/// Candidate `φ` tables enumerated before falling back to a single solve.
const CANDIDATE_GUARD: u128 = 1 << 16;

/// Structure of the additive map `φ` on `W = 𝒮x`.
///
/// Ranks and eigenspaces are taken over the prime subfield.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub phi_k_linear: bool,
    pub phi_endomorphism_of_sx: bool,
    pub phi_is_projection: bool,
    pub phi_rank: usize,
    /// For projections: kernel and image both differ from the line.
    pub eigenspaces_differ_from_d: Option<bool>,
    pub d_inside_sx: bool,
    pub d_equals_sx: bool,
}

impl Classification {
    /// `φ` is an endomorphism of `W` that is not linear over the field.
    pub fn nonlinear_endomorphism(&self) -> bool {
        self.phi_endomorphism_of_sx && !self.phi_k_linear
    }

    /// `φ` is a rank-one projection of `W` whose eigenspaces avoid the line.
    pub fn rank_one_projection_off_line(&self) -> bool {
        self.phi_is_projection && self.phi_rank == 1 && self.eigenspaces_differ_from_d == Some(true)
    }
}

/// A decomposition `F(s) = φ(s(x)) + s(x')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionReport {
    pub feasible: bool,
    pub x: Vec<Elem>,
    pub x_prime: Vec<Elem>,
    /// Prime-subfield basis `λ^e w_j` of `W`.
    pub sx_basis: Vec<Vec<Elem>>,
    /// `φ` on `sx_basis`.
    pub phi: Vec<Vec<Elem>>,
    pub classification: Option<Classification>,
    /// The identity re-checked on every element of the space.
    pub verified: bool,
}

struct Setup {
    field: FieldSpec,
    n: usize,
    w: Subspace,
    sx_basis: Vec<Vec<Elem>>,
    /// `(generator, F(generator), coords of generator(x) in sx_basis)`.
    gens: Vec<(Mat, Vec<Elem>, Vec<u8>)>,
}

impl Setup {
    fn sx_coords(&self, v: &[Elem]) -> Option<Vec<u8>> {
        let c = self.w.coordinates(v)?;
        Some(
            c.iter()
                .flat_map(|&x| self.field.digits(x).iter().copied())
                .collect(),
        )
    }

    fn apply_phi(&self, phi: &[Vec<Elem>], u: &[u8]) -> Vec<Elem> {
        let mut out = vec![0; self.n];
        for (&ul, pl) in u.iter().zip(phi) {
            axpy(self.field, &mut out, ul, pl);
        }
        out
    }
}

/// Solves `F(s) = φ(s(x)) + s(x')` for an additive `φ` on `W = 𝒮x` and
/// `x' ∈ F_q^p`, then classifies `φ`.
///
/// Among all solutions the chosen one prefers, in order: `φ = 0`, `φ` an
/// endomorphism of `W`, (when `dim W = 2`) `φ` a rank-one projection with
/// eigenspaces off the line, then the least `x'` and the least `φ`.
pub fn decompose_special(
    map: &OperatorMap,
    x: &[Elem],
    d: &Direction,
) -> Result<DecompositionReport> {
    let space = map.space();
    let field = space.field();
    let fp = field.prime_subfield();
    let k = field.k() as usize;
    let (n, p) = (space.n(), space.p());
    let additive = if map.class().is_additive() {
        map.clone()
    } else {
        map.to_class(MapClass::Additive)?
    };
    let w = space.apply_to_vector(x)?.space().clone();
    let sx_basis: Vec<Vec<Elem>> = w
        .basis_vectors()
        .flat_map(|b| {
            (0..k).map(move |e| {
                b.iter()
                    .map(|&y| field.mul(field.basis_elem(e), y))
                    .collect()
            })
        })
        .collect();
    let gens: Vec<(Mat, Vec<Elem>, Vec<u8>)> = additive
        .generator_values()
        .iter()
        .enumerate()
        .map(|(g, v)| {
            (
                OperatorMap::generator(space, MapClass::Additive, g),
                v.clone(),
            )
        })
        .map(|(t, v)| {
            let tx = t.mul_vec(field, x);
            let c = w.coordinates(&tx).expect("t(x) lies in Sx");
            let u = c
                .iter()
                .flat_map(|&y| field.digits(y).iter().copied())
                .collect();
            (t, v, u)
        })
        .collect();
    let setup = Setup {
        field,
        n,
        w: w.clone(),
        sx_basis,
        gens,
    };
    let wk = setup.sx_basis.len();
    let nk = n * k;
    let phi_len = wk * nk;

    // prime-subfield unknowns: φ tables, then the digits of x'
    let unknowns = phi_len + p * k;
    let mut rows: Vec<Vec<u8>> = Vec::new();
    let mut rhs: Vec<u8> = Vec::new();
    for (t, value, u) in &setup.gens {
        let target = vec_digits(field, value);
        let xprime_cols: Vec<Vec<u8>> = (0..p)
            .flat_map(|j| {
                let col = t.column(j);
                (0..k).map(move |f| {
                    let scaled: Vec<Elem> = col
                        .iter()
                        .map(|&c| field.mul(field.basis_elem(f), c))
                        .collect();
                    vec_digits(field, &scaled)
                })
            })
            .collect();
        for pos in 0..nk {
            let mut row = vec![0u8; unknowns];
            for (l, &ul) in u.iter().enumerate() {
                row[l * nk + pos] = ul;
            }
            for (jf, col) in xprime_cols.iter().enumerate() {
                row[phi_len + jf] = col[pos];
            }
            rows.push(row);
            rhs.push(target[pos]);
        }
    }
    let infeasible = || DecompositionReport {
        feasible: false,
        x: x.to_vec(),
        x_prime: vec![0; p],
        sx_basis: setup.sx_basis.clone(),
        phi: Vec::new(),
        classification: None,
        verified: false,
    };
    let a = Mat::from_rows(unknowns, &rows)?;
    let Some(flat) = solve_system(fp, &a, &rhs)? else {
        return Ok(infeasible());
    };

    let project = |v: &[u8]| v[..phi_len].to_vec();
    let phi_space = Subspace::span(fp, phi_len, flat.space().basis_vectors().map(project))?;
    let phi_flat = AffineFlat::new(phi_space, project(flat.offset()))?;
    let decode =
        |v: &[u8]| -> Vec<Vec<Elem>> { v.chunks(nk).map(|c| vec_compose(field, c)).collect() };

    let candidates: Vec<Vec<Vec<Elem>>> = if phi_flat.space().size() <= CANDIDATE_GUARD {
        phi_flat.elements().map(|v| decode(&v)).collect()
    } else {
        let mut out = vec![decode(phi_flat.offset())];
        if let Some(endo) = endomorphism_solution(&setup, &a, &rhs, phi_len)? {
            out.push(decode(&endo));
        }
        out
    };

    let mut best: Option<(Key, Vec<Vec<Elem>>, Vec<Elem>, Classification)> = None;
    for phi in candidates {
        let Some(x_prime) = least_x_prime(&setup, &phi, p) else {
            continue;
        };
        let class = classify(&setup, &phi, d);
        let key = Key {
            nonzero: phi.iter().any(|v| v.iter().any(|&c| c != 0)),
            not_endo: !class.phi_endomorphism_of_sx,
            not_good_projection: setup.w.dim() == 2 && !class.rank_one_projection_off_line(),
            x_prime: x_prime.clone(),
            phi: phi.concat(),
        };
        if best
            .as_ref()
            .is_none_or(|(b, ..)| key.cmp(b) == Ordering::Less)
        {
            best = Some((key, phi, x_prime, class));
        }
    }
    let Some((_, phi, x_prime, class)) = best else {
        return Ok(infeasible());
    };
    let verified = verify(space, map, &setup, &phi, x, &x_prime);
    Ok(DecompositionReport {
        feasible: true,
        x: x.to_vec(),
        x_prime,
        sx_basis: setup.sx_basis.clone(),
        phi,
        classification: Some(class),
        verified,
    })
}

#[derive(PartialEq, Eq, PartialOrd, Ord)]
struct Key {
    nonzero: bool,
    not_endo: bool,
    not_good_projection: bool,
    x_prime: Vec<Elem>,
    phi: Vec<Elem>,
}

/// Least solution of the same system with every `φ` value forced into `W`.
fn endomorphism_solution(
    setup: &Setup,
    a: &Mat,
    rhs: &[u8],
    phi_len: usize,
) -> Result<Option<Vec<u8>>> {
    let field = setup.field;
    let fp = field.prime_subfield();
    let nk = setup.n * field.k() as usize;
    let w_digits = Subspace::span(fp, nk, setup.sx_basis.iter().map(|b| vec_digits(field, b)))?;
    let ann = w_digits.annihilator();
    let mut rows = a.row_vecs();
    let mut b = rhs.to_vec();
    for l in 0..setup.sx_basis.len() {
        for r in 0..ann.rows() {
            let mut row = vec![0u8; a.cols()];
            row[l * nk..(l + 1) * nk].copy_from_slice(ann.row(r));
            rows.push(row);
            b.push(0);
        }
    }
    let m = Mat::from_rows(a.cols(), &rows)?;
    Ok(solve_system(fp, &m, &b)?.map(|flat| flat.offset()[..phi_len].to_vec()))
}

/// Least `x'` over the field with `s(x') = F(s) - φ(s(x))` on every generator.
fn least_x_prime(setup: &Setup, phi: &[Vec<Elem>], p: usize) -> Option<Vec<Elem>> {
    let field = setup.field;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for (t, value, u) in &setup.gens {
        let pv = setup.apply_phi(phi, u);
        for r in 0..setup.n {
            rows.push(t.row(r).to_vec());
            rhs.push(field.sub(value[r], pv[r]));
        }
    }
    let a = Mat::from_rows(p, &rows).ok()?;
    solve_system(field, &a, &rhs)
        .ok()?
        .map(|flat| flat.offset().to_vec())
}

fn classify(setup: &Setup, phi: &[Vec<Elem>], d: &Direction) -> Classification {
    let field = setup.field;
    let fp = field.prime_subfield();
    let k = field.k() as usize;
    let nk = setup.n * k;
    let wk = setup.sx_basis.len();

    // φ(λ^e w_j) = λ^e φ(w_j)
    let phi_k_linear = (0..wk).all(|l| {
        let (j, e) = (l / k, l % k);
        let base = &phi[j * k];
        let lam = field.basis_elem(e);
        phi[l]
            .iter()
            .zip(base)
            .all(|(&a, &b)| a == field.mul(lam, b))
    });
    let coords: Vec<Option<Vec<u8>>> = phi.iter().map(|v| setup.sx_coords(v)).collect();
    let endo = coords.iter().all(Option::is_some);
    let is_projection = endo
        && coords
            .iter()
            .zip(phi)
            .all(|(u, v)| &setup.apply_phi(phi, u.as_ref().expect("endomorphism")) == v);
    let image =
        Subspace::span(fp, nk, phi.iter().map(|v| vec_digits(field, v))).expect("equal lengths");
    let line = Subspace::span(
        fp,
        nk,
        (0..k).map(|e| {
            let v: Vec<Elem> = d
                .vector()
                .iter()
                .map(|&c| field.mul(field.basis_elem(e), c))
                .collect();
            vec_digits(field, &v)
        }),
    )
    .expect("equal lengths");
    let eigen = is_projection.then(|| {
        let table = Mat::from_rows(
            nk,
            &phi.iter().map(|v| vec_digits(field, v)).collect::<Vec<_>>(),
        )
        .expect("equal lengths");
        let ker_coords = kernel(fp, &table.transpose());
        let ker = Subspace::span(
            fp,
            nk,
            ker_coords.basis_vectors().map(|u| {
                let v = setup.apply_phi(&setup.sx_basis, u);
                vec_digits(field, &v)
            }),
        )
        .expect("equal lengths");
        ker != line && image != line
    });
    let w = &setup.w;
    Classification {
        phi_k_linear,
        phi_endomorphism_of_sx: endo,
        phi_is_projection: is_projection,
        phi_rank: image.dim(),
        eigenspaces_differ_from_d: eigen,
        d_inside_sx: w.contains(d.vector()),
        d_equals_sx: w.dim() == 1 && w.contains(d.vector()),
    }
}

fn verify(
    space: &OperatorSpace,
    map: &OperatorMap,
    setup: &Setup,
    phi: &[Vec<Elem>],
    x: &[Elem],
    x_prime: &[Elem],
) -> bool {
    if space.size() > DEFAULT_ELEMENT_GUARD {
        return false;
    }
    let field = setup.field;
    space.elements().all(|s| {
        let Some(u) = setup.sx_coords(&s.mul_vec(field, x)) else {
            return false;
        };
        let mut expected = setup.apply_phi(phi, &u);
        let sx = s.mul_vec(field, x_prime);
        for (a, b) in expected.iter_mut().zip(sx) {
            *a = field.add(*a, b);
        }
        map.evaluate(&s).map(|v| v == expected).unwrap_or(false)
    })
}
