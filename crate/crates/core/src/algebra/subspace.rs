//! Linear subspaces of `F_q^d` in canonical reduced echelon form, and their cosets.

use std::fmt;

use super::field::{Elem, FieldSpec};
use super::matrix::{axpy, rref_in_place, vec_add, Mat};
use crate::error::{Error, Result};

/// A linear subspace of `F_q^d`, stored as its reduced row echelon basis.
///
/// Two subspaces are equal as sets exactly when their bases are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: FieldSpec,
    basis: Mat,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            basis: Mat::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldSpec, ambient: usize) -> Self {
        Subspace {
            field,
            basis: Mat::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of the rows of `m`.
    pub fn row_space(field: FieldSpec, m: &Mat) -> Self {
        let mut b = m.clone();
        let pivots = rref_in_place(field, &mut b);
        Subspace {
            field,
            basis: b.top_rows(pivots.len()),
            pivots,
        }
    }

    /// The span of the given vectors, all of length `ambient`.
    pub fn span<I, V>(field: FieldSpec, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Elem]>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for v in vectors {
            let v = v.as_ref();
            if v.len() != ambient {
                return Err(Error::domain(format!(
                    "vector of length {} in ambient dimension {ambient}",
                    v.len()
                )));
            }
            data.extend_from_slice(v);
            rows += 1;
        }
        Ok(Self::row_space(field, &Mat::from_vec(rows, ambient, data)?))
    }

    /// Wraps a basis that is already in reduced echelon form.
    pub(crate) fn from_rref_unchecked(field: FieldSpec, basis: Mat, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(basis.rows(), pivots.len());
        Subspace {
            field,
            basis,
            pivots,
        }
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim() - self.dim()
    }

    /// Reduced echelon basis, one row per basis vector.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_vectors(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        (0..self.dim()).map(move |i| self.basis.row(i))
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates that are not pivots, in increasing order.
    pub fn free_coordinates(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient_dim()];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient_dim()).filter(|&c| !is_pivot[c]).collect()
    }

    /// Subtracts the basis multiples that clear every pivot coordinate of `v`.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let mut r = v.to_vec();
        self.reduce_in_place(&mut r);
        r
    }

    pub fn reduce_in_place(&self, v: &mut [Elem]) {
        debug_assert_eq!(v.len(), self.ambient_dim());
        for (i, &c) in self.pivots.iter().enumerate() {
            let a = v[c];
            if a != 0 {
                axpy(self.field, v, self.field.neg(a), self.basis.row(i));
            }
        }
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.ambient_dim() && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the echelon basis (its pivot entries), if `v` lies in the space.
    pub fn coordinates(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        if self.contains(v) {
            Some(self.pivots.iter().map(|&c| v[c]).collect())
        } else {
            None
        }
    }

    /// The vector with the given basis coordinates.
    pub fn combine(&self, coords: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(coords.len(), self.dim());
        let mut out = vec![0; self.ambient_dim()];
        for (i, &c) in coords.iter().enumerate() {
            axpy(self.field, &mut out, c, self.basis.row(i));
        }
        out
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field || self.ambient_dim() != other.ambient_dim() {
            Err(Error::domain(format!(
                "subspaces of {}^{} and {}^{} cannot be combined",
                self.field,
                self.ambient_dim(),
                other.field,
                other.ambient_dim()
            )))
        } else {
            Ok(())
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Subspace::span(
            self.field,
            self.ambient_dim(),
            self.basis_vectors().chain(other.basis_vectors()),
        )
    }

    /// Intersection, computed as the annihilator of the sum of annihilators.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let a = self.annihilator();
        let b = other.annihilator();
        let rows = a.row_vecs().into_iter().chain(b.row_vecs());
        let joint = Subspace::span(self.field, self.ambient_dim(), rows)?;
        Ok(Subspace::row_space(self.field, &joint.annihilator()))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.field == other.field
            && self.ambient_dim() == other.ambient_dim()
            && self.basis_vectors().all(|v| other.contains(v))
    }

    /// A full-row-rank `(d - dim) x d` matrix in reduced echelon form whose
    /// kernel is exactly this space.
    pub fn annihilator(&self) -> Mat {
        let d = self.ambient_dim();
        let free = self.free_coordinates();
        let f = self.field;
        // one kernel vector per free column of the echelon basis
        let mut k = Mat::zeros(free.len(), d);
        for (r, &j) in free.iter().enumerate() {
            k.set(r, j, 1);
            for (i, &pc) in self.pivots.iter().enumerate() {
                k.set(r, pc, f.neg(self.basis.get(i, j)));
            }
        }
        let mut out = k;
        let pivots = rref_in_place(f, &mut out);
        debug_assert_eq!(pivots.len(), free.len());
        out
    }

    /// The space `{v : a.v = 0 for all a in self}` (same as `row_space(annihilator)`).
    pub fn orthogonal(&self) -> Subspace {
        Subspace::row_space(self.field, &self.annihilator())
    }

    /// Number of vectors, `q^dim`.
    pub fn size(&self) -> u128 {
        (self.field.q() as u128).pow(self.dim() as u32)
    }

    /// All vectors of the space, ordered lexicographically by basis coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        CoordinateCounter::new(self.field.q(), self.dim()).map(move |c| self.combine(&c))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace({}^{}, dim {}, basis {:?})",
            self.field,
            self.ambient_dim(),
            self.dim(),
            self.basis
        )
    }
}

/// The right kernel `{x : m x = 0}`.
pub fn kernel(field: FieldSpec, m: &Mat) -> Subspace {
    Subspace::row_space(field, m).orthogonal()
}

/// Lexicographic odometer over `{0..q}^len`; the last coordinate moves fastest.
#[derive(Debug, Clone)]
pub struct CoordinateCounter {
    q: u8,
    current: Option<Vec<Elem>>,
}

impl CoordinateCounter {
    pub fn new(q: u8, len: usize) -> Self {
        CoordinateCounter {
            q,
            current: Some(vec![0; len]),
        }
    }
}

impl Iterator for CoordinateCounter {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        let mut i = nxt.len();
        let mut done = true;
        while i > 0 {
            i -= 1;
            if nxt[i] + 1 < self.q {
                nxt[i] += 1;
                done = false;
                break;
            }
            nxt[i] = 0;
        }
        if !done {
            self.current = Some(nxt);
        }
        Some(cur)
    }
}

/// A coset `offset + space`, with the offset fully reduced against the space.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineFlat {
    space: Subspace,
    offset: Vec<Elem>,
}

impl AffineFlat {
    pub fn new(space: Subspace, offset: Vec<Elem>) -> Result<Self> {
        if offset.len() != space.ambient_dim() {
            return Err(Error::domain(
                "offset length differs from ambient dimension",
            ));
        }
        for &x in &offset {
            space.field().check(x)?;
        }
        let offset = space.reduce(&offset);
        Ok(AffineFlat { space, offset })
    }

    pub fn linear(space: Subspace) -> Self {
        let d = space.ambient_dim();
        AffineFlat {
            space,
            offset: vec![0; d],
        }
    }

    pub fn point(field: FieldSpec, v: Vec<Elem>) -> Self {
        AffineFlat {
            space: Subspace::zero(field, v.len()),
            offset: v,
        }
    }

    /// The translation space.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn offset(&self) -> &[Elem] {
        &self.offset
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.space.ambient_dim()
    }

    /// True when the flat contains the origin.
    pub fn is_linear(&self) -> bool {
        self.offset.iter().all(|&x| x == 0)
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.ambient_dim() && {
            let f = self.field();
            let diff: Vec<Elem> = v
                .iter()
                .zip(&self.offset)
                .map(|(&a, &b)| f.sub(a, b))
                .collect();
            self.space.contains(&diff)
        }
    }

    /// The smallest linear subspace containing the flat.
    pub fn linear_span(&self) -> Subspace {
        if self.is_linear() {
            self.space.clone()
        } else {
            Subspace::span(
                self.field(),
                self.ambient_dim(),
                self.space
                    .basis_vectors()
                    .map(|v| v.to_vec())
                    .chain(std::iter::once(self.offset.clone())),
            )
            .expect("same ambient dimension")
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let f = self.field();
        self.space
            .elements()
            .map(move |v| vec_add(f, &v, &self.offset))
    }
}

impl fmt::Debug for AffineFlat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineFlat({:?} + {:?})", self.offset, self.space)
    }
}

/// All solutions of `a x = b`, or `None` when the system is inconsistent.
pub fn solve_system(field: FieldSpec, a: &Mat, b: &[Elem]) -> Result<Option<AffineFlat>> {
    if b.len() != a.rows() {
        return Err(Error::domain(format!(
            "right-hand side of length {} for a system with {} equations",
            b.len(),
            a.rows()
        )));
    }
    let cols = a.cols();
    let mut aug = Mat::zeros(a.rows(), cols + 1);
    for i in 0..a.rows() {
        aug.row_mut(i)[..cols].copy_from_slice(a.row(i));
        aug.set(i, cols, b[i]);
    }
    let pivots = rref_in_place(field, &mut aug);
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![0; cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(i, cols);
    }
    let space = kernel(field, a);
    Ok(Some(AffineFlat::new(space, x)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_vectors(f: FieldSpec, d: usize) -> Vec<Vec<Elem>> {
        CoordinateCounter::new(f.q(), d).collect()
    }

    #[test]
    fn intersection_in_f2_cubed() {
        let f2 = FieldSpec::f2();
        let x = Subspace::span(f2, 3, [[1, 0, 0], [0, 1, 0]]).unwrap();
        let y = Subspace::span(f2, 3, [[0, 1, 0], [0, 0, 1]]).unwrap();
        let i = x.intersect(&y).unwrap();
        // oracle: enumerate the 8 vectors
        let common: Vec<_> = brute_vectors(f2, 3)
            .into_iter()
            .filter(|v| x.contains(v) && y.contains(v))
            .collect();
        assert_eq!(common.len(), 2);
        assert_eq!(i, Subspace::span(f2, 3, [[0, 1, 0]]).unwrap());
        assert_eq!(x.intersect(&x).unwrap(), x);
        assert_eq!(x.sum(&Subspace::zero(f2, 3)).unwrap(), x);
        assert!(x.sum(&Subspace::zero(f2, 4)).is_err());
    }

    #[test]
    fn annihilator_cases() {
        let f2 = FieldSpec::f2();
        assert_eq!(Subspace::full(f2, 3).annihilator().rows(), 0);
        assert_eq!(Subspace::zero(f2, 3).annihilator(), Mat::identity(3));
        let w = Subspace::span(f2, 3, [[1, 1, 0]]).unwrap();
        let a = w.annihilator();
        assert_eq!(
            a,
            Mat::from_rows(3, &[vec![1, 1, 0], vec![0, 0, 1]]).unwrap()
        );
        // oracle: dual vectors killing w
        let killers: Vec<_> = brute_vectors(f2, 3)
            .into_iter()
            .filter(|a| (a[0] + a[1]) % 2 == 0)
            .collect();
        assert_eq!(killers.len(), 4);
        assert_eq!(
            Subspace::span(f2, 3, &killers).unwrap(),
            Subspace::row_space(f2, &a)
        );
    }

    #[test]
    fn solve_examples() {
        let f3 = FieldSpec::f3();
        let id = Mat::identity(2);
        let flat = solve_system(f3, &id, &[2, 1]).unwrap().unwrap();
        assert_eq!(flat.dim(), 0);
        assert_eq!(flat.offset(), &[2, 1]);
        assert!(solve_system(f3, &Mat::zeros(1, 2), &[1]).unwrap().is_none());
        let a = Mat::from_rows(2, &[vec![1, 2]]).unwrap();
        let flat = solve_system(f3, &a, &[1]).unwrap().unwrap();
        let brute: Vec<_> = brute_vectors(f3, 2)
            .into_iter()
            .filter(|v| (v[0] + 2 * v[1]) % 3 == 1)
            .collect();
        assert_eq!(flat.dim(), 1);
        assert_eq!(brute.len(), 3);
        assert!(brute.iter().all(|v| flat.contains(v)));
        assert!(flat.contains(&[1, 0]));
        let homog = solve_system(f3, &a, &[0]).unwrap().unwrap();
        assert!(homog.is_linear());
    }

    #[test]
    fn counter_order() {
        let all: Vec<_> = CoordinateCounter::new(3, 2).collect();
        assert_eq!(all.len(), 9);
        assert_eq!(all[0], vec![0, 0]);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(CoordinateCounter::new(2, 0).count(), 1);
    }

    #[test]
    fn flat_canonical_offset() {
        let f3 = FieldSpec::f3();
        let s = Subspace::span(f3, 2, [[1, 1]]).unwrap();
        let a = AffineFlat::new(s.clone(), vec![2, 0]).unwrap();
        let b = AffineFlat::new(s, vec![0, 1]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.offset()[0], 0);
        assert_eq!(a.elements().count(), 3);
    }
}
