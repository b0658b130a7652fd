use std::collections::BTreeSet;

use super::map::OperatorMap;
use super::{CompatMode, MapClass};
use crate::algebra::{CoordinateCounter, Elem, Mat};
use crate::error::{Error, Result};
use crate::opspace::{Direction, OperatorSpace};

/// Default bound on the number of candidate maps the oracle enumerates.
pub const DEFAULT_ORACLE_GUARD: u128 = 1 << 16;

/// Coefficient vectors of every compatible map for one line (or the range condition).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleSet {
    pub direction: Option<Direction>,
    pub maps: BTreeSet<Vec<u8>>,
}

fn rank(m: &Mat, f: crate::algebra::FieldSpec) -> usize {
    m.rank(f)
}

fn with_column(s: &Mat, v: &[Elem]) -> Mat {
    let mut out = Mat::zeros(s.rows(), s.cols() + 1);
    for i in 0..s.rows() {
        out.row_mut(i)[..s.cols()].copy_from_slice(s.row(i));
        out.set(i, s.cols(), v[i]);
    }
    out
}

/// Enumerates every map of the class and keeps those satisfying the condition
/// pointwise, testing `v ∈ im s` as `rank [s | v] = rank s`.
pub fn oracle_enumerate_maps(
    space: &OperatorSpace,
    mode: &CompatMode,
    class: MapClass,
) -> Result<Vec<OracleSet>> {
    OperatorMap::check_class(space, class)?;
    let field = space.field();
    let len = OperatorMap::coefficient_len(space, class);
    let count = (field.p() as u128)
        .checked_pow(len as u32)
        .unwrap_or(u128::MAX);
    if count > DEFAULT_ORACLE_GUARD {
        return Err(Error::resource(
            "candidate maps for the oracle",
            count,
            DEFAULT_ORACLE_GUARD,
        ));
    }
    let elements: Vec<(Mat, usize)> = space
        .elements()
        .map(|s| {
            let r = rank(&s, field);
            (s, r)
        })
        .collect();
    let directions = mode.expand(field, space.n());
    let applies: Vec<Vec<bool>> = directions
        .iter()
        .map(|direction| {
            elements
                .iter()
                .map(|(s, r)| match direction {
                    None => true,
                    Some(d) => rank(&with_column(s, d.vector()), field) != *r,
                })
                .collect()
        })
        .collect();
    let mut sets: Vec<OracleSet> = directions
        .into_iter()
        .map(|direction| OracleSet {
            direction,
            maps: BTreeSet::new(),
        })
        .collect();
    for c in CoordinateCounter::new(field.p(), len) {
        let map = OperatorMap::from_coefficients(space, class, &c).expect("valid coefficients");
        for (set, applies) in sets.iter_mut().zip(&applies) {
            let compatible = elements.iter().zip(applies).all(|((s, r), &a)| {
                !a || rank(
                    &with_column(s, &map.evaluate(s).expect("element of the space")),
                    field,
                ) == *r
            });
            if compatible {
                set.maps.insert(c.clone());
            }
        }
    }
    Ok(sets)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;

    #[test]
    fn zero_space_has_one_map() {
        let s = OperatorSpace::zero(FieldSpec::f2(), 2, 1);
        let sets = oracle_enumerate_maps(&s, &CompatMode::Range, MapClass::Linear).unwrap();
        assert_eq!(sets[0].maps.len(), 1);
    }

    #[test]
    fn single_unit_column() {
        let f2 = FieldSpec::f2();
        let s = OperatorSpace::linear_span(f2, 2, 1, &[Mat::unit(2, 1, 0, 0)]).unwrap();
        let sets = oracle_enumerate_maps(&s, &CompatMode::Range, MapClass::Linear).unwrap();
        let expected: BTreeSet<Vec<u8>> = [vec![0, 0], vec![1, 0]].into_iter().collect();
        assert_eq!(sets[0].maps, expected);
    }

    #[test]
    fn guard_trips() {
        let s = OperatorSpace::full(FieldSpec::f3(), 3, 3);
        assert!(matches!(
            oracle_enumerate_maps(&s, &CompatMode::Range, MapClass::Linear),
            Err(Error::Resource { .. })
        ));
    }
}
