//! Spaces of `n x p` matrices as flats of the row-major flattening `F_q^{np}`,
//! with trace-form duality, quotients, the block constructions `A ∨ B` and
//! `A ∐ B`, and special-type detection.

use std::fmt;

use crate::algebra::{
    nonzero_vectors, vec_add, AffineFlat, CoordinateCounter, Elem, FieldSpec, Mat, Subspace,
};
use crate::error::{Error, Result};

/// A linear or affine space of `n x p` matrices (operators `F_q^p -> F_q^n`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OperatorSpace {
    n: usize,
    p: usize,
    flat: AffineFlat,
}

impl OperatorSpace {
    pub fn new(n: usize, p: usize, flat: AffineFlat) -> Result<Self> {
        if flat.ambient_dim() != n * p {
            return Err(Error::domain(format!(
                "flat of ambient dimension {} does not describe {n}x{p} matrices",
                flat.ambient_dim()
            )));
        }
        Ok(OperatorSpace { n, p, flat })
    }

    /// The whole of `Mat_{n,p}(F_q)`.
    pub fn full(field: FieldSpec, n: usize, p: usize) -> Self {
        OperatorSpace {
            n,
            p,
            flat: AffineFlat::linear(Subspace::full(field, n * p)),
        }
    }

    pub fn zero(field: FieldSpec, n: usize, p: usize) -> Self {
        OperatorSpace {
            n,
            p,
            flat: AffineFlat::linear(Subspace::zero(field, n * p)),
        }
    }

    /// The linear span of the given matrices.
    pub fn linear_span(field: FieldSpec, n: usize, p: usize, mats: &[Mat]) -> Result<Self> {
        Self::affine(field, n, p, &Mat::zeros(n, p), mats)
    }

    /// `offset + span(translations)`.
    pub fn affine(
        field: FieldSpec,
        n: usize,
        p: usize,
        offset: &Mat,
        translations: &[Mat],
    ) -> Result<Self> {
        for m in translations.iter().chain(std::iter::once(offset)) {
            if m.rows() != n || m.cols() != p {
                return Err(Error::domain(format!(
                    "{}x{} matrix in a space of {n}x{p} matrices",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let space = Subspace::span(field, n * p, translations.iter().map(|m| m.as_slice()))?;
        let flat = AffineFlat::new(space, offset.as_slice().to_vec())?;
        Ok(OperatorSpace { n, p, flat })
    }

    /// Linear space of matrices given as a subspace of the flattening.
    pub fn from_subspace(n: usize, p: usize, s: Subspace) -> Result<Self> {
        Self::new(n, p, AffineFlat::linear(s))
    }

    #[inline]
    pub fn field(&self) -> FieldSpec {
        self.flat.field()
    }

    /// Number of rows (dimension of the codomain).
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of columns (dimension of the domain).
    #[inline]
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn flat(&self) -> &AffineFlat {
        &self.flat
    }

    /// The translation vector space.
    pub fn translation_space(&self) -> &Subspace {
        self.flat.space()
    }

    /// The linear space with the same translation space.
    pub fn translation(&self) -> OperatorSpace {
        OperatorSpace {
            n: self.n,
            p: self.p,
            flat: AffineFlat::linear(self.flat.space().clone()),
        }
    }

    pub fn dim(&self) -> usize {
        self.flat.dim()
    }

    pub fn codim(&self) -> usize {
        self.n * self.p - self.dim()
    }

    pub fn is_linear(&self) -> bool {
        self.flat.is_linear()
    }

    /// Number of elements, `q^dim`.
    pub fn size(&self) -> u128 {
        self.translation_space().size()
    }

    /// The canonical point `s0` of the flat (zero for linear spaces).
    pub fn offset(&self) -> Mat {
        self.to_mat(self.flat.offset())
    }

    /// Echelon basis of the translation space, as matrices.
    pub fn translation_basis(&self) -> Vec<Mat> {
        self.translation_space()
            .basis_vectors()
            .map(|v| self.to_mat(v))
            .collect()
    }

    pub(crate) fn to_mat(&self, v: &[Elem]) -> Mat {
        Mat::from_vec(self.n, self.p, v.to_vec()).expect("flattened length n*p")
    }

    pub fn contains(&self, s: &Mat) -> bool {
        s.rows() == self.n && s.cols() == self.p && self.flat.contains(s.as_slice())
    }

    /// Coordinates of `s - s0` in the translation basis, if `s` lies in the space.
    pub fn coordinates(&self, s: &Mat) -> Option<Vec<Elem>> {
        if s.rows() != self.n || s.cols() != self.p {
            return None;
        }
        let f = self.field();
        let diff: Vec<Elem> = s
            .as_slice()
            .iter()
            .zip(self.flat.offset())
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        self.translation_space().coordinates(&diff)
    }

    /// `s0 + sum c_i t_i`.
    pub fn element(&self, coords: &[Elem]) -> Mat {
        let v = vec_add(
            self.field(),
            &self.translation_space().combine(coords),
            self.flat.offset(),
        );
        self.to_mat(&v)
    }

    /// Every element, ordered lexicographically by translation coordinates.
    pub fn elements(&self) -> impl Iterator<Item = Mat> + '_ {
        CoordinateCounter::new(self.field().q(), self.dim()).map(move |c| self.element(&c))
    }

    fn check_same_field(&self, other: &OperatorSpace) -> Result<()> {
        if self.field() != other.field() {
            Err(Error::domain(format!(
                "operator spaces over {} and {} cannot be combined",
                self.field(),
                other.field()
            )))
        } else {
            Ok(())
        }
    }

    fn require_linear(&self, what: &str) -> Result<()> {
        if self.is_linear() {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} needs a linear operator space; pass the translation space explicitly"
            )))
        }
    }

    /// `S⊥ = {T in Mat_{p,n} : tr(T A) = 0 for all A in S}`.
    pub fn orthogonal_complement(&self) -> Result<OperatorSpace> {
        self.require_linear("orthogonal complement")?;
        let (n, p) = (self.n, self.p);
        let f = self.field();
        // tr(T A) = sum_{i,j} T[j][i] A[i][j], so the complement is the dot-product
        // annihilator of the flattening, read back with transposed indexing.
        let ann = self.translation_space().annihilator();
        let mats: Vec<Mat> = ann
            .row_vecs()
            .into_iter()
            .map(|w| {
                let mut t = Mat::zeros(p, n);
                for i in 0..n {
                    for j in 0..p {
                        t.set(j, i, w[i * p + j]);
                    }
                }
                t
            })
            .collect();
        OperatorSpace::linear_span(f, p, n, &mats)
    }

    /// `{T y : T in self}` for a vector `y` of the domain.
    pub fn perp_image(&self, y: &[Elem]) -> Result<Subspace> {
        if y.len() != self.p {
            return Err(Error::domain(
                "vector length differs from the domain dimension",
            ));
        }
        let f = self.field();
        Subspace::span(
            f,
            self.n,
            self.translation_basis()
                .iter()
                .map(|t| t.mul_vec(f, y))
                .chain(std::iter::once(self.offset().mul_vec(f, y))),
        )
    }

    /// `{s(x) : s in self}` as a flat of `F_q^n`.
    pub fn apply_to_vector(&self, x: &[Elem]) -> Result<AffineFlat> {
        if x.len() != self.p {
            return Err(Error::domain(
                "vector length differs from the domain dimension",
            ));
        }
        let f = self.field();
        let space = Subspace::span(
            f,
            self.n,
            self.translation_basis().iter().map(|t| t.mul_vec(f, x)),
        )?;
        AffineFlat::new(space, self.offset().mul_vec(f, x))
    }

    /// First normalized `x` (lexicographic) with `dim S x = i`.
    pub fn special_type_witness(&self, i: usize) -> Option<Vec<Elem>> {
        Direction::all(self.field(), self.p)
            .into_iter()
            .map(Direction::into_vec)
            .find(|x| {
                self.apply_to_vector(x)
                    .map(|fl| fl.dim() == i)
                    .unwrap_or(false)
            })
    }

    pub fn is_special(&self, i: usize) -> bool {
        self.special_type_witness(i).is_some()
    }

    /// `S mod V0 = {π ∘ s}` together with the projection `π`.
    pub fn quotient_space(&self, v0: &Subspace) -> Result<(OperatorSpace, Projection)> {
        if v0.field() != self.field() || v0.ambient_dim() != self.n {
            return Err(Error::domain("quotient subspace must live in the codomain"));
        }
        let proj = Projection::new(v0.clone());
        let m = proj.target_dim();
        let f = self.field();
        let offset = proj.apply_to_matrix(&self.offset());
        let trans: Vec<Mat> = self
            .translation_basis()
            .iter()
            .map(|t| proj.apply_to_matrix(t))
            .collect();
        let q = OperatorSpace::affine(f, m, self.p, &offset, &trans)?;
        Ok((q, proj))
    }

    /// `A ∨ B = {[A C; 0 B]}` with a free corner block `C`.
    pub fn vee(&self, other: &OperatorSpace) -> Result<OperatorSpace> {
        self.check_same_field(other)?;
        self.require_linear("the ∨ construction")?;
        other.require_linear("the ∨ construction")?;
        let f = self.field();
        let (m, n1) = (self.n, self.p);
        let (p2, q2) = (other.n, other.p);
        let (rows, cols) = (m + p2, n1 + q2);
        let mut gens = Vec::new();
        for a in self.translation_basis() {
            let mut g = Mat::zeros(rows, cols);
            for i in 0..m {
                for j in 0..n1 {
                    g.set(i, j, a.get(i, j));
                }
            }
            gens.push(g);
        }
        for b in other.translation_basis() {
            let mut g = Mat::zeros(rows, cols);
            for i in 0..p2 {
                for j in 0..q2 {
                    g.set(m + i, n1 + j, b.get(i, j));
                }
            }
            gens.push(g);
        }
        for i in 0..m {
            for j in 0..q2 {
                gens.push(Mat::unit(rows, cols, i, n1 + j));
            }
        }
        OperatorSpace::linear_span(f, rows, cols, &gens)
    }

    /// `A ∐ B = {[A B]}` (column concatenation); affine operands are allowed.
    pub fn coprod(&self, other: &OperatorSpace) -> Result<OperatorSpace> {
        self.check_same_field(other)?;
        if self.n != other.n {
            return Err(Error::domain(format!(
                "∐ needs equal row counts, got {} and {}",
                self.n, other.n
            )));
        }
        let f = self.field();
        let (n, pa, pb) = (self.n, self.p, other.p);
        let offset = hconcat(&self.offset(), &other.offset());
        let mut gens = Vec::new();
        for a in self.translation_basis() {
            gens.push(hconcat(&a, &Mat::zeros(n, pb)));
        }
        for b in other.translation_basis() {
            gens.push(hconcat(&Mat::zeros(n, pa), &b));
        }
        OperatorSpace::affine(f, n, pa + pb, &offset, &gens)
    }
}

impl fmt::Debug for OperatorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OperatorSpace({}x{} over {}, dim {}, offset {:?}, basis {:?})",
            self.n,
            self.p,
            self.field(),
            self.dim(),
            self.offset(),
            self.translation_basis()
        )
    }
}

/// `[A B]`.
pub fn hconcat(a: &Mat, b: &Mat) -> Mat {
    debug_assert_eq!(a.rows(), b.rows());
    let mut out = Mat::zeros(a.rows(), a.cols() + b.cols());
    for i in 0..a.rows() {
        out.row_mut(i)[..a.cols()].copy_from_slice(a.row(i));
        out.row_mut(i)[a.cols()..].copy_from_slice(b.row(i));
    }
    out
}

/// The canonical projection `F_q^n -> F_q^n / V0`, realized on the non-pivot
/// coordinates of `V0`'s echelon basis in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Projection {
    kernel: Subspace,
    kept: Vec<usize>,
}

impl Projection {
    pub fn new(kernel: Subspace) -> Self {
        let kept = kernel.free_coordinates();
        Projection { kernel, kept }
    }

    pub fn kernel(&self) -> &Subspace {
        &self.kernel
    }

    pub fn source_dim(&self) -> usize {
        self.kernel.ambient_dim()
    }

    pub fn target_dim(&self) -> usize {
        self.kept.len()
    }

    pub fn apply(&self, v: &[Elem]) -> Vec<Elem> {
        let r = self.kernel.reduce(v);
        self.kept.iter().map(|&c| r[c]).collect()
    }

    /// A preimage of `w`: `w` placed on the kept coordinates.
    pub fn lift(&self, w: &[Elem]) -> Vec<Elem> {
        let mut v = vec![0; self.source_dim()];
        for (&c, &x) in self.kept.iter().zip(w) {
            v[c] = x;
        }
        v
    }

    /// Applies the projection to every column.
    pub fn apply_to_matrix(&self, m: &Mat) -> Mat {
        let mut out = Mat::zeros(self.target_dim(), m.cols());
        for j in 0..m.cols() {
            let col = self.apply(&m.column(j));
            for (i, &x) in col.iter().enumerate() {
                out.set(i, j, x);
            }
        }
        out
    }
}

/// A line of `F_q^n`, represented by its generator whose first nonzero entry is 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Direction {
    vector: Vec<Elem>,
}

impl Direction {
    /// Normalizes any nonzero vector.
    pub fn new(field: FieldSpec, v: &[Elem]) -> Result<Self> {
        for &x in v {
            field.check(x)?;
        }
        let lead = v
            .iter()
            .copied()
            .find(|&x| x != 0)
            .ok_or_else(|| Error::domain("a direction needs a nonzero vector"))?;
        let inv = field.recip(lead);
        Ok(Direction {
            vector: v.iter().map(|&x| field.mul(inv, x)).collect(),
        })
    }

    /// All `(q^n - 1)/(q - 1)` directions in lexicographic order.
    pub fn all(field: FieldSpec, n: usize) -> Vec<Direction> {
        nonzero_vectors(field, n)
            .filter(|v| v.iter().find(|&&x| x != 0) == Some(&1))
            .map(|vector| Direction { vector })
            .collect()
    }

    /// The `i`-th standard basis vector of `F_q^n`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut vector = vec![0; n];
        vector[i] = 1;
        Direction { vector }
    }

    pub fn vector(&self) -> &[Elem] {
        &self.vector
    }

    pub fn into_vec(self) -> Vec<Elem> {
        self.vector
    }

    pub fn dim(&self) -> usize {
        self.vector.len()
    }

    pub fn line(&self, field: FieldSpec) -> Subspace {
        Subspace::span(field, self.vector.len(), [&self.vector]).expect("length matches")
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction{:?}", self.vector)
    }
}
