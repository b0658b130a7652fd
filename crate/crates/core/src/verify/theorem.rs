use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::FieldSpec;
use crate::error::{Error, Result};
use crate::solver::MapClass;

/// A verifiable statement: a codimension bound with side conditions and a conclusion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TheoremId {
    /// Range-compatible linear maps on a full operator space are local.
    Total,
    /// Range-compatible linear maps, codim ≤ n−2.
    Lin1,
    /// Range-compatible additive maps, codim ≤ n−2.
    Hom,
    /// Range-compatible linear maps, codim ≤ 2n−3 (2n−4 over F2), p ≥ 2.
    Lin2,
    /// Range-compatible affine and semi-affine maps on affine spaces, codim ≤ n−2.
    AffGen,
    /// Range-compatible affine maps, codim ≤ n−1, q > 2.
    AffBig,
    /// Quasi-range-compatible additive maps, codim ≤ n−2 (n−3 over F2).
    QrcHom,
    /// Non-local quasi maps on spaces with a rank-one evaluation decompose.
    QrcDeg1,
    /// Over F2, non-local quasi maps with a rank-two evaluation decompose through a projection.
    QrcDeg2,
    /// q > 3, n = 2, codim ≤ 1: special type 1 or all quasi linear maps local.
    Qrc2a,
    /// q > 2, codim ≤ 2n−4: special type 1 or all quasi additive maps local.
    Qrc2b,
    /// q = 2, codim ≤ 2n−6: special type 1 or 2, or all quasi additive maps local.
    Qrc2c,
    /// Quasi affine maps on affine spaces, codim ≤ n−2 (n−3 over F2).
    QrcAff1,
    /// Affine spaces of codim exactly n−1: all quasi affine maps local or a rank-one evaluation.
    QrcAff2,
    /// Affine spaces of codim n−1 with a non-linear rank-one evaluation: structure of non-local maps.
    QrcAff3,
    /// The explicit solution family on the distinguished affine space over F3 with n = 2.
    DescF3,
}

impl TheoremId {
    pub const ALL: [TheoremId; 16] = [
        TheoremId::Total,
        TheoremId::Lin1,
        TheoremId::Hom,
        TheoremId::Lin2,
        TheoremId::AffGen,
        TheoremId::AffBig,
        TheoremId::QrcHom,
        TheoremId::QrcDeg1,
        TheoremId::QrcDeg2,
        TheoremId::Qrc2a,
        TheoremId::Qrc2b,
        TheoremId::Qrc2c,
        TheoremId::QrcAff1,
        TheoremId::QrcAff2,
        TheoremId::QrcAff3,
        TheoremId::DescF3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TheoremId::Total => "TOTAL",
            TheoremId::Lin1 => "LIN1",
            TheoremId::Hom => "HOM",
            TheoremId::Lin2 => "LIN2",
            TheoremId::AffGen => "AFF_GEN",
            TheoremId::AffBig => "AFF_BIG",
            TheoremId::QrcHom => "QRC_HOM",
            TheoremId::QrcDeg1 => "QRC_DEG1",
            TheoremId::QrcDeg2 => "QRC_DEG2",
            TheoremId::Qrc2a => "QRC2A",
            TheoremId::Qrc2b => "QRC2B",
            TheoremId::Qrc2c => "QRC2C",
            TheoremId::QrcAff1 => "QRC_AFF1",
            TheoremId::QrcAff2 => "QRC_AFF2",
            TheoremId::QrcAff3 => "QRC_AFF3",
            TheoremId::DescF3 => "DESC_F3",
        }
    }

    /// Sweeps affine flats rather than linear subspaces.
    pub fn is_affine(self) -> bool {
        matches!(
            self,
            TheoremId::AffGen
                | TheoremId::AffBig
                | TheoremId::QrcAff1
                | TheoremId::QrcAff2
                | TheoremId::QrcAff3
                | TheoremId::DescF3
        )
    }

    /// Imposes the quasi condition for every line rather than the range condition.
    pub fn is_quasi(self) -> bool {
        !matches!(
            self,
            TheoremId::Total
                | TheoremId::Lin1
                | TheoremId::Hom
                | TheoremId::Lin2
                | TheoremId::AffGen
                | TheoremId::AffBig
        )
    }

    /// Map classes whose solution spaces are checked.
    pub fn classes(self) -> &'static [MapClass] {
        match self {
            TheoremId::Total | TheoremId::Lin1 | TheoremId::Lin2 | TheoremId::Qrc2a => {
                &[MapClass::Linear]
            }
            TheoremId::Hom
            | TheoremId::QrcHom
            | TheoremId::QrcDeg1
            | TheoremId::QrcDeg2
            | TheoremId::Qrc2b
            | TheoremId::Qrc2c => &[MapClass::Additive],
            TheoremId::AffGen => &[MapClass::Affine, MapClass::SemiAffine],
            TheoremId::AffBig
            | TheoremId::QrcAff1
            | TheoremId::QrcAff2
            | TheoremId::QrcAff3
            | TheoremId::DescF3 => &[MapClass::Affine],
        }
    }

    /// Largest codimension the statement covers for `n` rows over a field of order `q`;
    /// negative when no space qualifies.
    pub fn codim_bound(self, n: usize, q: u8) -> i64 {
        let n = n as i64;
        let f2 = q == 2;
        match self {
            TheoremId::Total => 0,
            TheoremId::Lin1 | TheoremId::Hom | TheoremId::AffGen => n - 2,
            TheoremId::Lin2 | TheoremId::QrcDeg1 => 2 * n - if f2 { 4 } else { 3 },
            TheoremId::AffBig | TheoremId::QrcAff2 | TheoremId::QrcAff3 | TheoremId::DescF3 => {
                n - 1
            }
            TheoremId::QrcHom | TheoremId::QrcAff1 => n - if f2 { 3 } else { 2 },
            TheoremId::QrcDeg2 => 2 * n - 5,
            TheoremId::Qrc2a => 2 * n - 3,
            TheoremId::Qrc2b => 2 * n - 4,
            TheoremId::Qrc2c => 2 * n - 6,
        }
    }

    /// Smallest codimension swept; the statements about the critical codimension
    /// apply only there.
    pub fn min_codim(self, n: usize, q: u8) -> usize {
        match self {
            TheoremId::QrcAff2 | TheoremId::QrcAff3 | TheoremId::DescF3 => {
                self.codim_bound(n, q).max(0) as usize
            }
            _ => 0,
        }
    }

    /// Checks the side conditions on the field and dimensions.
    pub fn check_hypotheses(self, n: usize, p: usize, field: FieldSpec) -> Result<()> {
        let q = field.q();
        let fail = |why: &str| Err(Error::domain(format!("{} requires {why}", self.name())));
        if n == 0 || p == 0 {
            return fail("positive dimensions");
        }
        match self {
            TheoremId::Lin2 if p < 2 => fail("p ≥ 2"),
            TheoremId::AffBig | TheoremId::Qrc2b if q <= 2 => {
                fail("a field with more than 2 elements")
            }
            TheoremId::QrcDeg2 | TheoremId::Qrc2c if q != 2 => fail("the field F2"),
            TheoremId::Qrc2a if q <= 3 || n != 2 => {
                fail("a field with more than 3 elements and n = 2")
            }
            TheoremId::QrcAff2 if !((n >= 3 && q > 2) || (n >= 2 && q > 3)) => {
                fail("n ≥ 3 with q > 2, or n ≥ 2 with q > 3")
            }
            TheoremId::QrcAff3 if n < 2 || q <= 2 => {
                fail("n ≥ 2 and a field with more than 2 elements")
            }
            TheoremId::DescF3 if q != 3 || n != 2 || p < 2 => fail("the field F3, n = 2 and p ≥ 2"),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        TheoremId::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| Error::domain(format!("unknown theorem id {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for t in TheoremId::ALL {
            assert_eq!(t.name().parse::<TheoremId>().unwrap(), t);
        }
        assert_eq!("qrc-aff1".parse::<TheoremId>().unwrap(), TheoremId::QrcAff1);
        assert!("nope".parse::<TheoremId>().is_err());
    }

    #[test]
    fn bounds() {
        assert_eq!(TheoremId::QrcHom.codim_bound(4, 2), 1);
        assert_eq!(TheoremId::QrcHom.codim_bound(3, 3), 1);
        assert_eq!(TheoremId::Lin2.codim_bound(3, 3), 3);
        assert_eq!(TheoremId::Lin2.codim_bound(2, 2), 0);
        assert_eq!(TheoremId::Qrc2c.codim_bound(3, 2), 0);
        assert_eq!(TheoremId::QrcAff1.codim_bound(3, 2), 0);
    }

    #[test]
    fn hypotheses() {
        let f2 = FieldSpec::f2();
        let f5 = FieldSpec::from_order(5).unwrap();
        assert!(TheoremId::Qrc2a.check_hypotheses(2, 2, f5).is_ok());
        assert!(TheoremId::Qrc2a.check_hypotheses(3, 2, f5).is_err());
        assert!(TheoremId::AffBig.check_hypotheses(3, 2, f2).is_err());
        assert!(TheoremId::QrcAff2
            .check_hypotheses(2, 2, FieldSpec::f3())
            .is_err());
        assert!(TheoremId::QrcAff2
            .check_hypotheses(3, 2, FieldSpec::f3())
            .is_ok());
        assert!(TheoremId::DescF3
            .check_hypotheses(2, 3, FieldSpec::f3())
            .is_ok());
    }
}
