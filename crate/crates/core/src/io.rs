//! JSON documents for operator spaces and maps.
//!
//! Matrices are row-major arrays of canonical field elements. Writing is
//! canonical: the basis is the reduced echelon basis of the translation
//! space and the offset is the reduced representative, present only for
//! non-linear spaces.

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, FieldSpec, Mat};
use crate::error::{Error, Result};
use crate::opspace::{Direction, OperatorSpace};
use crate::solver::{MapClass, OperatorMap};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub p: u8,
    pub k: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u8>>,
}

impl FieldDocument {
    pub fn from_field(f: FieldSpec) -> Self {
        FieldDocument {
            p: f.p(),
            k: f.k(),
            modulus: f.modulus().map(<[u8]>::to_vec),
        }
    }

    pub fn to_field(&self) -> Result<FieldSpec> {
        let f = FieldSpec::new(self.p, self.k)?;
        if let Some(m) = &self.modulus {
            if f.modulus() != Some(m.as_slice()) {
                return Err(Error::domain(format!(
                    "{f} is implemented with modulus {:?}, not {m:?}",
                    f.modulus().unwrap_or(&[])
                )));
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDocument {
    pub field: FieldDocument,
    pub n: usize,
    pub p_cols: usize,
    pub basis: Vec<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<Vec<Vec<Elem>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<Elem>>,
}

fn rows_of(m: &Mat) -> Vec<Vec<Elem>> {
    m.row_vecs()
}

fn mat_of(field: FieldSpec, n: usize, p: usize, rows: &[Vec<Elem>]) -> Result<Mat> {
    if rows.len() != n {
        return Err(Error::domain(format!(
            "matrix with {} rows, expected {n}",
            rows.len()
        )));
    }
    let m = Mat::from_rows(p, rows)?;
    for &x in m.as_slice() {
        field.check(x)?;
    }
    Ok(m)
}

impl SpaceDocument {
    pub fn from_space(space: &OperatorSpace, direction: Option<&Direction>) -> Self {
        SpaceDocument {
            field: FieldDocument::from_field(space.field()),
            n: space.n(),
            p_cols: space.p(),
            basis: space.translation_basis().iter().map(rows_of).collect(),
            offset: (!space.is_linear()).then(|| rows_of(&space.offset())),
            direction: direction.map(|d| d.vector().to_vec()),
        }
    }

    pub fn to_space(&self) -> Result<OperatorSpace> {
        let f = self.field.to_field()?;
        let (n, p) = (self.n, self.p_cols);
        let basis = self
            .basis
            .iter()
            .map(|m| mat_of(f, n, p, m))
            .collect::<Result<Vec<_>>>()?;
        let offset = match &self.offset {
            Some(m) => mat_of(f, n, p, m)?,
            None => Mat::zeros(n, p),
        };
        OperatorSpace::affine(f, n, p, &offset, &basis)
    }

    pub fn direction(&self) -> Result<Option<Direction>> {
        let f = self.field.to_field()?;
        match &self.direction {
            None => Ok(None),
            Some(v) if v.len() != self.n => Err(Error::domain(format!(
                "direction of length {} for codomain dimension {}",
                v.len(),
                self.n
            ))),
            Some(v) => Direction::new(f, v).map(Some),
        }
    }

    /// Canonical form of this document.
    pub fn canonical(&self) -> Result<SpaceDocument> {
        Ok(SpaceDocument::from_space(
            &self.to_space()?,
            self.direction()?.as_ref(),
        ))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<SpaceDocument> {
        serde_json::from_str(text)
            .map_err(|e| Error::domain(format!("invalid space document: {e}")))
    }
}

/// A map by its class and prime-subfield coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapDocument {
    pub class: MapClass,
    pub coefficients: Vec<u8>,
    pub base_value: Vec<Elem>,
    pub generator_values: Vec<Vec<Elem>>,
}

impl MapDocument {
    pub fn from_map(map: &OperatorMap) -> Self {
        MapDocument {
            class: map.class(),
            coefficients: map.coefficients(),
            base_value: map.base_value().to_vec(),
            generator_values: map.generator_values().to_vec(),
        }
    }

    pub fn to_map(&self, space: &OperatorSpace) -> Result<OperatorMap> {
        OperatorMap::from_coefficients(space, self.class, &self.coefficients)
    }
}
