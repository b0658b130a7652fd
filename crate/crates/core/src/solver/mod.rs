//! Compatible maps on operator spaces: representation, exact solution spaces,
//! locality, quotient and splitting transport, and decomposition of non-local maps.

mod decompose;
mod map;
mod oracle;
mod solve;
mod transport;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::FieldSpec;
use crate::error::{Error, Result};
use crate::opspace::Direction;

pub use decompose::{decompose_special, Classification, DecompositionReport};
pub use map::{evaluate_map, is_local, local_map, local_map_in, local_space, OperatorMap};
pub use oracle::{oracle_enumerate_maps, OracleSet, DEFAULT_ORACLE_GUARD};
pub use solve::{solve_compatible_maps, solve_with_guard, SolutionSpace, DEFAULT_ELEMENT_GUARD};
pub use transport::{coprod_map, induced_quotient_map, split_columns};

/// Which maps are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapClass {
    /// Linear over the base field, on a linear space.
    Linear,
    /// Additive (linear over the prime subfield), on a linear space.
    Additive,
    Affine,
    /// Constant plus an additive map of the translation space.
    SemiAffine,
}

impl MapClass {
    pub const ALL: [MapClass; 4] = [
        MapClass::Linear,
        MapClass::Additive,
        MapClass::Affine,
        MapClass::SemiAffine,
    ];

    /// Carries a free constant term.
    pub fn has_base(self) -> bool {
        matches!(self, MapClass::Affine | MapClass::SemiAffine)
    }

    /// Linear part is only required to be additive.
    pub fn is_additive(self) -> bool {
        matches!(self, MapClass::Additive | MapClass::SemiAffine)
    }

    pub fn is_contained_in(self, other: MapClass) -> bool {
        (!self.has_base() || other.has_base()) && (!self.is_additive() || other.is_additive())
    }

    pub fn name(self) -> &'static str {
        match self {
            MapClass::Linear => "linear",
            MapClass::Additive => "additive",
            MapClass::Affine => "affine",
            MapClass::SemiAffine => "semiaffine",
        }
    }
}

impl fmt::Display for MapClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MapClass::ALL
            .into_iter()
            .find(|c| {
                c.name().eq_ignore_ascii_case(s)
                    || (s.eq_ignore_ascii_case("semi-affine") && *c == MapClass::SemiAffine)
            })
            .ok_or_else(|| Error::domain(format!("unknown map class {s:?}")))
    }
}

/// Where the condition `F(s) ∈ im s` is imposed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CompatMode {
    /// At every `s`.
    Range,
    /// At every `s` whose image does not contain the line.
    QuasiRange(Direction),
    /// One quasi solve per line of the codomain.
    QuasiRangeAny,
}

impl CompatMode {
    /// The lines this mode stands for; `None` means the range condition.
    pub fn expand(&self, field: FieldSpec, n: usize) -> Vec<Option<Direction>> {
        match self {
            CompatMode::Range => vec![None],
            CompatMode::QuasiRange(d) => vec![Some(d.clone())],
            CompatMode::QuasiRangeAny => Direction::all(field, n).into_iter().map(Some).collect(),
        }
    }
}

impl fmt::Display for CompatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompatMode::Range => f.write_str("range"),
            CompatMode::QuasiRange(d) => {
                let v: Vec<String> = d.vector().iter().map(|x| x.to_string()).collect();
                write!(f, "quasi:{}", v.join(","))
            }
            CompatMode::QuasiRangeAny => f.write_str("quasi-any"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_lattice() {
        use MapClass::*;
        assert!(Linear.is_contained_in(SemiAffine));
        assert!(Additive.is_contained_in(SemiAffine));
        assert!(Linear.is_contained_in(Affine));
        assert!(!Additive.is_contained_in(Affine));
        assert!(!Affine.is_contained_in(Additive));
        assert_eq!("SemiAffine".parse::<MapClass>().unwrap(), SemiAffine);
        assert!("bogus".parse::<MapClass>().is_err());
    }

    #[test]
    fn mode_expansion_is_lexicographic() {
        let f2 = FieldSpec::f2();
        let ds = CompatMode::QuasiRangeAny.expand(f2, 2);
        let vs: Vec<_> = ds
            .iter()
            .map(|d| d.as_ref().unwrap().vector().to_vec())
            .collect();
        assert_eq!(vs, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(CompatMode::Range.expand(f2, 2), vec![None]);
    }
}
