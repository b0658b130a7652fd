//! Exact arithmetic in small finite fields and canonical linear algebra.

mod enumerate;
mod field;
mod matrix;
mod subspace;

pub use enumerate::{
    enumerate_cosets, enumerate_subspaces, gaussian_binomial, sample_coset_with, sample_subspace,
    sample_subspace_with, SubspaceIter, DEFAULT_ENUMERATION_GUARD,
};
pub use field::{is_irreducible, Elem, FieldOp, FieldSpec, SUPPORTED_ORDERS};
pub use matrix::{
    axpy, dot, vec_add, vec_compose, vec_digits, vec_scale, vec_sub, Mat, RowEchelon,
};
pub use subspace::{kernel, solve_system, AffineFlat, CoordinateCounter, Subspace};

/// Every nonzero vector of `F_q^d` in lexicographic order.
pub(crate) fn nonzero_vectors(field: FieldSpec, d: usize) -> impl Iterator<Item = Vec<Elem>> {
    CoordinateCounter::new(field.q(), d).filter(|v| v.iter().any(|&x| x != 0))
}
