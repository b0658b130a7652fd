//! Deterministic enumeration and seeded sampling of subspaces and cosets.
//!
//! Subspaces come out ordered by pivot pattern (lexicographic combinations of
//! pivot columns), then by the free entries of the reduced echelon basis read
//! row by row, left to right, in lexicographic order. This order is part of the
//! external contract: sweeps and reports depend on it.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{Elem, FieldSpec};
use super::matrix::Mat;
use super::subspace::{AffineFlat, CoordinateCounter, Subspace};
use crate::error::{Error, Result};

/// Default bound on the number of items an enumeration may produce.
pub const DEFAULT_ENUMERATION_GUARD: u128 = 1_000_000;

/// Number of `k`-dimensional subspaces of `F_q^d`.
pub fn gaussian_binomial(d: usize, k: usize, q: u64) -> u128 {
    if k > d {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((d - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// Iterator over every `k`-dimensional subspace of `F_q^d`, each exactly once.
pub struct SubspaceIter {
    field: FieldSpec,
    d: usize,
    patterns: Box<dyn Iterator<Item = Vec<usize>> + Send>,
    current: Option<PatternState>,
}

struct PatternState {
    pivots: Vec<usize>,
    /// `(row, column)` of every free entry, row-major.
    free: Vec<(usize, usize)>,
    counter: CoordinateCounter,
}

impl PatternState {
    fn new(d: usize, q: u8, pivots: Vec<usize>) -> Self {
        let mut free = Vec::new();
        for (r, &c) in pivots.iter().enumerate() {
            for j in c + 1..d {
                if !pivots.contains(&j) {
                    free.push((r, j));
                }
            }
        }
        let counter = CoordinateCounter::new(q, free.len());
        PatternState {
            pivots,
            free,
            counter,
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        loop {
            if let Some(state) = self.current.as_mut() {
                if let Some(values) = state.counter.next() {
                    let k = state.pivots.len();
                    let mut basis = Mat::zeros(k, self.d);
                    for (r, &c) in state.pivots.iter().enumerate() {
                        basis.set(r, c, 1);
                    }
                    for (&(r, j), &v) in state.free.iter().zip(&values) {
                        basis.set(r, j, v);
                    }
                    return Some(Subspace::from_rref_unchecked(
                        self.field,
                        basis,
                        state.pivots.clone(),
                    ));
                }
            }
            let pivots = self.patterns.next()?;
            self.current = Some(PatternState::new(self.d, self.field.q(), pivots));
        }
    }
}

/// Every `k`-dimensional subspace of `F_q^d`, refusing when the count exceeds `guard`.
pub fn enumerate_subspaces(
    field: FieldSpec,
    d: usize,
    k: usize,
    guard: u128,
) -> Result<SubspaceIter> {
    if k > d {
        return Err(Error::domain(format!(
            "no {k}-dimensional subspaces of a {d}-dimensional space"
        )));
    }
    let count = gaussian_binomial(d, k, field.q() as u64);
    if count > guard {
        return Err(Error::resource(
            format!("{k}-dimensional subspaces of {field}^{d}"),
            count,
            guard,
        ));
    }
    Ok(SubspaceIter {
        field,
        d,
        patterns: Box::new((0..d).combinations(k)),
        current: None,
    })
}

/// One canonical flat per coset of `space`, the origin-containing coset first.
pub fn enumerate_cosets(
    space: &Subspace,
    guard: u128,
) -> Result<impl Iterator<Item = AffineFlat> + '_> {
    let field = space.field();
    let free = space.free_coordinates();
    let count = (field.q() as u128).pow(free.len() as u32);
    if count > guard {
        return Err(Error::resource(
            format!(
                "cosets of a codimension-{} subspace of {field}^{}",
                free.len(),
                space.ambient_dim()
            ),
            count,
            guard,
        ));
    }
    let d = space.ambient_dim();
    Ok(
        CoordinateCounter::new(field.q(), free.len()).map(move |vals| {
            let mut offset = vec![0; d];
            for (&c, &v) in free.iter().zip(&vals) {
                offset[c] = v;
            }
            AffineFlat::new(space.clone(), offset).expect("offset has ambient length")
        }),
    )
}

/// A uniformly random `k`-dimensional subspace of `F_q^d`, drawn as the row
/// space of a uniformly random full-rank `k x d` matrix.
pub fn sample_subspace_with<R: Rng + ?Sized>(
    field: FieldSpec,
    d: usize,
    k: usize,
    rng: &mut R,
) -> Result<Subspace> {
    if k > d {
        return Err(Error::domain(format!(
            "cannot sample a {k}-dimensional subspace of {field}^{d}"
        )));
    }
    loop {
        let data: Vec<Elem> = (0..k * d).map(|_| rng.gen_range(0..field.q())).collect();
        let m = Mat::from_vec(k, d, data)?;
        let s = Subspace::row_space(field, &m);
        if s.dim() == k {
            return Ok(s);
        }
    }
}

/// Seeded variant of [`sample_subspace_with`].
pub fn sample_subspace(field: FieldSpec, d: usize, k: usize, seed: u64) -> Result<Subspace> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_subspace_with(field, d, k, &mut rng)
}

/// A uniformly random coset of `space`.
pub fn sample_coset_with<R: Rng + ?Sized>(space: &Subspace, rng: &mut R) -> AffineFlat {
    let q = space.field().q();
    let offset: Vec<Elem> = (0..space.ambient_dim())
        .map(|_| rng.gen_range(0..q))
        .collect();
    AffineFlat::new(space.clone(), offset).expect("offset has ambient length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{HashMap, HashSet};

    /// Independent product formula: prod_{i<k} (q^d - q^i) / (q^k - q^i).
    fn ordered_basis_count(d: usize, k: usize, q: u128) -> u128 {
        let num: u128 = (0..k).map(|i| q.pow(d as u32) - q.pow(i as u32)).product();
        let den: u128 = (0..k).map(|i| q.pow(k as u32) - q.pow(i as u32)).product();
        num / den
    }

    #[test]
    fn stated_counts() {
        let f2 = FieldSpec::f2();
        assert_eq!(
            enumerate_subspaces(f2, 4, 2, DEFAULT_ENUMERATION_GUARD)
                .unwrap()
                .count(),
            35
        );
        assert_eq!(
            enumerate_subspaces(f2, 4, 0, DEFAULT_ENUMERATION_GUARD)
                .unwrap()
                .count(),
            1
        );
        let f3 = FieldSpec::f3();
        assert_eq!(
            enumerate_subspaces(f3, 6, 5, DEFAULT_ENUMERATION_GUARD)
                .unwrap()
                .count(),
            364
        );
        assert_eq!(gaussian_binomial(6, 4, 3), 11011);
    }

    #[test]
    fn counts_match_product_formula() {
        for q in [2u8, 3] {
            let f = FieldSpec::from_order(q).unwrap();
            for d in 0..=8 {
                for k in 0..=d {
                    let expected = ordered_basis_count(d, k, q as u128);
                    assert_eq!(gaussian_binomial(d, k, q as u64), expected);
                    if expected <= 20_000 {
                        let all: Vec<_> = enumerate_subspaces(f, d, k, DEFAULT_ENUMERATION_GUARD)
                            .unwrap()
                            .collect();
                        assert_eq!(all.len() as u128, expected, "d={d} k={k} q={q}");
                        let distinct: HashSet<_> = all.iter().collect();
                        assert_eq!(distinct.len(), all.len());
                        for s in &all {
                            assert_eq!(&Subspace::row_space(f, s.basis()), s);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn order_is_by_pivot_pattern_first() {
        let f2 = FieldSpec::f2();
        let all: Vec<_> = enumerate_subspaces(f2, 3, 1, 100).unwrap().collect();
        let firsts: Vec<_> = all.iter().map(|s| s.pivots()[0]).collect();
        assert_eq!(firsts, vec![0, 0, 0, 0, 1, 1, 2]);
        assert_eq!(all[0].basis().row(0), &[1, 0, 0]);
        assert_eq!(all[1].basis().row(0), &[1, 0, 1]);
    }

    #[test]
    fn guard_is_an_error() {
        let f3 = FieldSpec::f3();
        let err = enumerate_subspaces(f3, 8, 4, 1000).err().unwrap();
        assert!(
            matches!(err, Error::Resource { count, .. } if count == gaussian_binomial(8, 4, 3))
        );
    }

    #[test]
    fn coset_counts() {
        let f2 = FieldSpec::f2();
        let f3 = FieldSpec::f3();
        assert_eq!(
            enumerate_cosets(&Subspace::full(f3, 3), 100)
                .unwrap()
                .count(),
            1
        );
        let cosets: Vec<_> = enumerate_cosets(&Subspace::zero(f2, 2), 100)
            .unwrap()
            .collect();
        assert_eq!(cosets.len(), 4);
        assert!(cosets[0].is_linear());
        let line = Subspace::span(f3, 2, [[1, 2]]).unwrap();
        let cosets: Vec<_> = enumerate_cosets(&line, 100).unwrap().collect();
        assert_eq!(cosets.len(), 3);
        let distinct: HashSet<_> = cosets.iter().collect();
        assert_eq!(distinct.len(), 3);
        assert!(enumerate_cosets(&Subspace::zero(f3, 10), 100).is_err());
    }

    #[test]
    fn sampling_edges() {
        let f5 = FieldSpec::from_order(5).unwrap();
        assert_eq!(sample_subspace(f5, 4, 4, 7).unwrap(), Subspace::full(f5, 4));
        assert_eq!(sample_subspace(f5, 4, 0, 7).unwrap(), Subspace::zero(f5, 4));
        assert_eq!(
            sample_subspace(f5, 4, 2, 9).unwrap(),
            sample_subspace(f5, 4, 2, 9).unwrap()
        );
    }

    #[test]
    fn sampling_is_uniform_chi_square() {
        let f2 = FieldSpec::f2();
        let all: Vec<_> = enumerate_subspaces(f2, 4, 2, 100).unwrap().collect();
        let index: HashMap<_, _> = all
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut counts = vec![0u64; all.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let draws = 100_000u64;
        for _ in 0..draws {
            let s = sample_subspace_with(f2, 4, 2, &mut rng).unwrap();
            counts[index[&s]] += 1;
        }
        let expected = draws as f64 / all.len() as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 34 degrees of freedom: mean 34, sd sqrt(68); 5 sigma above the mean
        let bound = 34.0 + 5.0 * 68f64.sqrt();
        assert!(chi2 < bound, "chi2 = {chi2}");
        for &c in &counts {
            assert!((c as f64 - expected).abs() < 5.0 * expected.sqrt());
        }
    }
}
