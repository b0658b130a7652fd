use super::map::{local_space, OperatorMap};
use super::{CompatMode, MapClass};
use crate::algebra::{axpy, kernel, CoordinateCounter, Elem, FieldSpec, Mat, Subspace};
use crate::error::{Error, Result};
use crate::opspace::{Direction, OperatorSpace};

/// Default bound on the number of operator-space elements a solve may visit.
pub const DEFAULT_ELEMENT_GUARD: u128 = 1 << 20;

/// All compatible maps of one class on one space for one constraint.
///
/// Dimensions are over the prime subfield, the field the coefficients live in.
#[derive(Debug, Clone)]
pub struct SolutionSpace {
    space: OperatorSpace,
    class: MapClass,
    direction: Option<Direction>,
    coefficient_space: Subspace,
    local_subspace: Subspace,
    witness: Option<OperatorMap>,
}

impl SolutionSpace {
    pub fn space(&self) -> &OperatorSpace {
        &self.space
    }

    pub fn class(&self) -> MapClass {
        self.class
    }

    /// The line of the quasi condition, or `None` for the range condition.
    pub fn direction(&self) -> Option<&Direction> {
        self.direction.as_ref()
    }

    pub fn coefficient_space(&self) -> &Subspace {
        &self.coefficient_space
    }

    pub fn local_subspace(&self) -> &Subspace {
        &self.local_subspace
    }

    pub fn dim(&self) -> usize {
        self.coefficient_space.dim()
    }

    pub fn local_dim(&self) -> usize {
        self.local_subspace.dim()
    }

    pub fn all_local(&self) -> bool {
        self.witness.is_none()
    }

    /// A non-local member, absent iff every member is local.
    pub fn witness(&self) -> Option<&OperatorMap> {
        self.witness.as_ref()
    }

    pub fn contains(&self, map: &OperatorMap) -> bool {
        map.space() == &self.space
            && map.class() == self.class
            && self.coefficient_space.contains(&map.coefficients())
    }

    /// The member with the given coordinates in the echelon basis of the solution space.
    pub fn member(&self, coords: &[Elem]) -> OperatorMap {
        let c = self.coefficient_space.combine(coords);
        OperatorMap::from_coefficients(&self.space, self.class, &c).expect("solution coefficients")
    }

    /// Echelon basis of the solution space as maps.
    pub fn basis_maps(&self) -> Vec<OperatorMap> {
        self.coefficient_space
            .basis_vectors()
            .map(|c| {
                OperatorMap::from_coefficients(&self.space, self.class, c)
                    .expect("solution coefficients")
            })
            .collect()
    }

    /// Members modulo local maps: one echelon basis vector per independent non-local direction.
    pub fn nonlocal_basis(&self) -> Vec<OperatorMap> {
        let mut residuals = Subspace::zero(
            self.coefficient_space.field(),
            self.coefficient_space.ambient_dim(),
        );
        let mut out = Vec::new();
        for v in self.coefficient_space.basis_vectors() {
            let r = self.local_subspace.reduce(v);
            let r2 = residuals.reduce(&r);
            if r2.iter().any(|&x| x != 0) {
                residuals = residuals
                    .sum(&Subspace::span(residuals.field(), r.len(), [&r]).expect("same length"))
                    .expect("same ambient");
                out.push(
                    OperatorMap::from_coefficients(&self.space, self.class, &r)
                        .expect("solution coefficients"),
                );
            }
        }
        out
    }
}

/// Incrementally maintained fully reduced echelon basis over a prime field.
struct Accumulator {
    fp: FieldSpec,
    rows: Vec<Vec<u8>>,
    pivots: Vec<usize>,
    target_rank: usize,
}

impl Accumulator {
    fn new(fp: FieldSpec, target_rank: usize) -> Self {
        Accumulator {
            fp,
            rows: Vec::new(),
            pivots: Vec::new(),
            target_rank,
        }
    }

    fn saturated(&self) -> bool {
        self.rows.len() >= self.target_rank
    }

    fn insert(&mut self, mut v: Vec<u8>) {
        let f = self.fp;
        for (row, &piv) in self.rows.iter().zip(&self.pivots) {
            let c = v[piv];
            if c != 0 {
                axpy(f, &mut v, f.neg(c), row);
            }
        }
        let Some(piv) = v.iter().position(|&x| x != 0) else {
            return;
        };
        let inv = f.recip(v[piv]);
        for x in v.iter_mut() {
            *x = f.mul(inv, *x);
        }
        for row in self.rows.iter_mut() {
            let c = row[piv];
            if c != 0 {
                axpy(f, row, f.neg(c), &v);
            }
        }
        self.rows.push(v);
        self.pivots.push(piv);
    }

    fn kernel(&self, len: usize) -> Subspace {
        let m = Mat::from_rows(len, &self.rows).expect("rows of the coefficient length");
        kernel(self.fp, &m)
    }
}

/// Writes the prime-subfield rows of `a · F(s) = 0` into `out`.
fn constraint_rows(
    field: FieldSpec,
    class: MapClass,
    n: usize,
    len: usize,
    coords: &[Elem],
    ann: &Mat,
    out: &mut Vec<Vec<u8>>,
) {
    let k = field.k() as usize;
    // multiplier of each unknown block in F(s)
    let mut kappa: Vec<Elem> = Vec::with_capacity(len / (n * k));
    if class.has_base() {
        kappa.push(1);
    }
    if class.is_additive() {
        for &c in coords {
            kappa.extend_from_slice(field.digits(c));
        }
    } else {
        kappa.extend_from_slice(coords);
    }
    for a in 0..ann.rows() {
        let arow = ann.row(a);
        let mut rows = vec![vec![0u8; len]; k];
        for (b, &kb) in kappa.iter().enumerate() {
            if kb == 0 {
                continue;
            }
            for (r, &ar) in arow.iter().enumerate() {
                let ka = field.mul(kb, ar);
                if ka == 0 {
                    continue;
                }
                for e in 0..k {
                    let val = field.mul(ka, field.basis_elem(e));
                    let col = (b * n + r) * k + e;
                    for (o, &d) in field.digits(val).iter().enumerate() {
                        rows[o][col] = d;
                    }
                }
            }
        }
        out.extend(rows);
    }
}

/// All compatible maps under the default element guard.
pub fn solve_compatible_maps(
    space: &OperatorSpace,
    mode: &CompatMode,
    class: MapClass,
) -> Result<Vec<SolutionSpace>> {
    solve_with_guard(space, mode, class, DEFAULT_ELEMENT_GUARD)
}

/// One [`SolutionSpace`] per line of the mode (a single one for range and
/// single-line modes), in the order of [`CompatMode::expand`].
///
/// Every element of the space is visited once and shared between lines; a
/// line stops collecting constraints once its solutions are known to be
/// exactly the local maps.
pub fn solve_with_guard(
    space: &OperatorSpace,
    mode: &CompatMode,
    class: MapClass,
    guard: u128,
) -> Result<Vec<SolutionSpace>> {
    OperatorMap::check_class(space, class)?;
    let size = space.size();
    if size > guard {
        return Err(Error::resource(
            format!(
                "elements of a {}-dimensional operator space over {}",
                space.dim(),
                space.field()
            ),
            size,
            guard,
        ));
    }
    let field = space.field();
    let fp = field.prime_subfield();
    let n = space.n();
    let directions = mode.expand(field, n);
    if let Some(Some(d)) = directions.first() {
        if d.dim() != n {
            return Err(Error::domain(format!(
                "direction of length {} for codomain dimension {n}",
                d.dim()
            )));
        }
    }
    let len = OperatorMap::coefficient_len(space, class);
    let loc = local_space(space, class)?;
    let target = len - loc.dim();
    let mut accs: Vec<Accumulator> = directions
        .iter()
        .map(|_| Accumulator::new(fp, target))
        .collect();

    let mut rows = Vec::new();
    for coords in CoordinateCounter::new(field.q(), space.dim()) {
        if accs.iter().all(Accumulator::saturated) {
            break;
        }
        let s = space.element(&coords);
        let image = Subspace::row_space(field, &s.transpose());
        if image.dim() == n {
            continue;
        }
        rows.clear();
        for (d, acc) in directions.iter().zip(accs.iter_mut()) {
            if acc.saturated() || d.as_ref().is_some_and(|d| image.contains(d.vector())) {
                continue;
            }
            if rows.is_empty() {
                constraint_rows(
                    field,
                    class,
                    n,
                    len,
                    &coords,
                    &image.annihilator(),
                    &mut rows,
                );
            }
            for r in &rows {
                acc.insert(r.clone());
                if acc.saturated() {
                    break;
                }
            }
        }
    }

    Ok(directions
        .into_iter()
        .zip(accs)
        .map(|(direction, acc)| {
            let sol = if acc.saturated() {
                loc.clone()
            } else {
                acc.kernel(len)
            };
            let witness = sol
                .basis_vectors()
                .map(|v| loc.reduce(v))
                .find(|r| r.iter().any(|&x| x != 0))
                .map(|r| {
                    OperatorMap::from_coefficients(space, class, &r).expect("solution coefficients")
                });
            SolutionSpace {
                space: space.clone(),
                class,
                direction,
                coefficient_space: sol,
                local_subspace: loc.clone(),
                witness,
            }
        })
        .collect())
}
