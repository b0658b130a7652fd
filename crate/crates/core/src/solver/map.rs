use std::fmt;

use super::MapClass;
use crate::algebra::{
    solve_system, vec_add, vec_compose, vec_digits, vec_sub, Elem, FieldSpec, Mat, Subspace,
};
use crate::error::{Error, Result};
use crate::opspace::OperatorSpace;

/// A map `F: 𝒮 -> F_q^n` of a fixed class, stored by its value at the canonical
/// point `s0` and the values of its linear part on the generators of the
/// translation space.
///
/// Generators are the translation basis `t_i` for [`MapClass::Linear`] and
/// [`MapClass::Affine`], and the prime-subfield basis `λ^e t_i` (`i`-major,
/// `e`-minor) for [`MapClass::Additive`] and [`MapClass::SemiAffine`].
#[derive(Clone, PartialEq, Eq)]
pub struct OperatorMap {
    space: OperatorSpace,
    class: MapClass,
    base_value: Vec<Elem>,
    generator_values: Vec<Vec<Elem>>,
}

impl OperatorMap {
    pub(crate) fn check_class(space: &OperatorSpace, class: MapClass) -> Result<()> {
        if !class.has_base() && !space.is_linear() {
            return Err(Error::domain(format!(
                "{class} maps need a linear operator space; use the affine or semiaffine class"
            )));
        }
        Ok(())
    }

    /// Number of generators of the linear part.
    pub fn generator_count(space: &OperatorSpace, class: MapClass) -> usize {
        if class.is_additive() {
            space.dim() * space.field().k() as usize
        } else {
            space.dim()
        }
    }

    /// Length of the coefficient vector over the prime subfield.
    pub fn coefficient_len(space: &OperatorSpace, class: MapClass) -> usize {
        let blocks = Self::generator_count(space, class) + class.has_base() as usize;
        blocks * space.n() * space.field().k() as usize
    }

    /// The `g`-th generator of the translation space for this class.
    pub fn generator(space: &OperatorSpace, class: MapClass, g: usize) -> Mat {
        let f = space.field();
        let basis = space.translation_space().basis();
        let (i, scalar) = if class.is_additive() {
            let k = f.k() as usize;
            (g / k, f.basis_elem(g % k))
        } else {
            (g, 1)
        };
        let v: Vec<Elem> = basis.row(i).iter().map(|&a| f.mul(scalar, a)).collect();
        Mat::from_vec(space.n(), space.p(), v).expect("flattened length n*p")
    }

    /// Samples `f` at `s0` and at `s0 + g` for every generator `g`.
    pub fn from_fn<F>(space: &OperatorSpace, class: MapClass, mut f: F) -> Result<Self>
    where
        F: FnMut(&Mat) -> Vec<Elem>,
    {
        Self::check_class(space, class)?;
        let field = space.field();
        let s0 = space.offset();
        let base_value = if class.has_base() {
            f(&s0)
        } else {
            vec![0; space.n()]
        };
        let generator_values = (0..Self::generator_count(space, class))
            .map(|g| {
                let t = Self::generator(space, class, g);
                let value = f(&s0.add(field, &t));
                vec_sub(field, &value, &base_value)
            })
            .collect();
        let map = OperatorMap {
            space: space.clone(),
            class,
            base_value,
            generator_values,
        };
        map.check_values()?;
        Ok(map)
    }

    fn check_values(&self) -> Result<()> {
        let f = self.field();
        let n = self.space.n();
        for v in std::iter::once(&self.base_value).chain(&self.generator_values) {
            if v.len() != n {
                return Err(Error::domain(format!(
                    "map value of length {} for codomain dimension {n}",
                    v.len()
                )));
            }
            for &x in v {
                f.check(x)?;
            }
        }
        Ok(())
    }

    pub fn zero(space: &OperatorSpace, class: MapClass) -> Result<Self> {
        Self::from_fn(space, class, |_| vec![0; space.n()])
    }

    /// Decodes a prime-subfield coefficient vector: base block first (affine
    /// classes only), then one block per generator, digits innermost.
    pub fn from_coefficients(
        space: &OperatorSpace,
        class: MapClass,
        coeffs: &[u8],
    ) -> Result<Self> {
        Self::check_class(space, class)?;
        let expected = Self::coefficient_len(space, class);
        if coeffs.len() != expected {
            return Err(Error::domain(format!(
                "expected {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        let f = space.field();
        let p = f.p();
        if let Some(&bad) = coeffs.iter().find(|&&c| c >= p) {
            return Err(Error::domain(format!(
                "coefficient {bad} outside the prime field F{p}"
            )));
        }
        let block = space.n() * f.k() as usize;
        let mut blocks = coeffs.chunks(block).map(|c| vec_compose(f, c));
        let base_value = if class.has_base() {
            blocks.next().expect("length checked")
        } else {
            vec![0; space.n()]
        };
        Ok(OperatorMap {
            space: space.clone(),
            class,
            base_value,
            generator_values: blocks.collect(),
        })
    }

    pub fn coefficients(&self) -> Vec<u8> {
        let f = self.field();
        let mut out = Vec::with_capacity(Self::coefficient_len(&self.space, self.class));
        if self.class.has_base() {
            out.extend(vec_digits(f, &self.base_value));
        }
        for v in &self.generator_values {
            out.extend(vec_digits(f, v));
        }
        out
    }

    pub fn space(&self) -> &OperatorSpace {
        &self.space
    }

    pub fn class(&self) -> MapClass {
        self.class
    }

    pub fn field(&self) -> FieldSpec {
        self.space.field()
    }

    /// `F(s0)`; zero for linear classes.
    pub fn base_value(&self) -> &[Elem] {
        &self.base_value
    }

    pub fn generator_values(&self) -> &[Vec<Elem>] {
        &self.generator_values
    }

    /// `F(s)`; errors when `s` is not in the space.
    pub fn evaluate(&self, s: &Mat) -> Result<Vec<Elem>> {
        let coords = self
            .space
            .coordinates(s)
            .ok_or_else(|| Error::domain(format!("{s:?} is not in the operator space")))?;
        Ok(self.evaluate_coords(&coords))
    }

    /// `F(s0 + sum c_i t_i)`.
    pub fn evaluate_coords(&self, coords: &[Elem]) -> Vec<Elem> {
        let f = self.field();
        let mut out = self.base_value.clone();
        if self.class.is_additive() {
            let k = f.k() as usize;
            for (i, &c) in coords.iter().enumerate() {
                for (e, &d) in f.digits(c).iter().enumerate() {
                    crate::algebra::axpy(f, &mut out, d, &self.generator_values[i * k + e]);
                }
            }
        } else {
            for (&c, v) in coords.iter().zip(&self.generator_values) {
                crate::algebra::axpy(f, &mut out, c, v);
            }
        }
        out
    }

    /// Re-encodes the same map in a wider class.
    pub fn to_class(&self, target: MapClass) -> Result<Self> {
        if !self.class.is_contained_in(target) {
            return Err(Error::domain(format!(
                "a {} map cannot in general be re-encoded as {target}",
                self.class
            )));
        }
        Self::from_fn(&self.space, target, |s| {
            self.evaluate(s).expect("sampled inside the space")
        })
    }

    /// The linear part `s ↦ F(s0 + s) - F(s0)` on the translation space.
    pub fn linear_part(&self) -> OperatorMap {
        let class = if self.class.is_additive() {
            MapClass::Additive
        } else {
            MapClass::Linear
        };
        OperatorMap {
            space: self.space.translation(),
            class,
            base_value: vec![0; self.space.n()],
            generator_values: self.generator_values.clone(),
        }
    }

    /// The lexicographically least `x` with `F(s) = s(x)` on the whole space, if any.
    pub fn local_vector(&self) -> Option<Vec<Elem>> {
        let f = self.field();
        let (n, p) = (self.space.n(), self.space.p());
        let mut rows: Vec<Vec<Elem>> = Vec::new();
        let mut rhs = Vec::new();
        let mut push = |m: &Mat, value: &[Elem]| {
            for r in 0..n {
                rows.push(m.row(r).to_vec());
                rhs.push(value[r]);
            }
        };
        if self.class.has_base() {
            push(&self.space.offset(), &self.base_value);
        }
        for (g, value) in self.generator_values.iter().enumerate() {
            push(&Self::generator(&self.space, self.class, g), value);
        }
        let a = Mat::from_rows(p, &rows).expect("rows of length p");
        solve_system(f, &a, &rhs)
            .expect("consistent shapes")
            .map(|flat| flat.offset().to_vec())
    }

    pub fn is_local(&self) -> bool {
        self.local_vector().is_some()
    }

    /// Pointwise sum; both maps must share space and class.
    pub fn add(&self, other: &OperatorMap) -> Result<OperatorMap> {
        if self.space != other.space || self.class != other.class {
            return Err(Error::domain(
                "maps on different spaces or classes cannot be added",
            ));
        }
        let f = self.field();
        Ok(OperatorMap {
            space: self.space.clone(),
            class: self.class,
            base_value: vec_add(f, &self.base_value, &other.base_value),
            generator_values: self
                .generator_values
                .iter()
                .zip(&other.generator_values)
                .map(|(a, b)| vec_add(f, a, b))
                .collect(),
        })
    }
}

impl fmt::Debug for OperatorMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorMap")
            .field("class", &self.class)
            .field("base_value", &self.base_value)
            .field("generator_values", &self.generator_values)
            .finish()
    }
}

/// `s ↦ s(x)`, in the Linear class on linear spaces and Affine otherwise.
pub fn local_map(space: &OperatorSpace, x: &[Elem]) -> Result<OperatorMap> {
    let class = if space.is_linear() {
        MapClass::Linear
    } else {
        MapClass::Affine
    };
    local_map_in(space, class, x)
}

/// `s ↦ s(x)` encoded in the given class.
pub fn local_map_in(space: &OperatorSpace, class: MapClass, x: &[Elem]) -> Result<OperatorMap> {
    if x.len() != space.p() {
        return Err(Error::domain(
            "vector length differs from the domain dimension",
        ));
    }
    let f = space.field();
    OperatorMap::from_fn(space, class, |s| s.mul_vec(f, x))
}

/// Coefficient vectors of all local maps of the class, over the prime subfield.
pub fn local_space(space: &OperatorSpace, class: MapClass) -> Result<Subspace> {
    let f = space.field();
    let mut gens = Vec::new();
    for j in 0..space.p() {
        for e in 0..f.k() as usize {
            let mut x = vec![0; space.p()];
            x[j] = f.basis_elem(e);
            gens.push(local_map_in(space, class, &x)?.coefficients());
        }
    }
    Subspace::span(
        f.prime_subfield(),
        OperatorMap::coefficient_len(space, class),
        gens,
    )
}

/// `F(s) = s(x)` for some `x`, together with the least such `x`.
pub fn is_local(map: &OperatorMap) -> (bool, Option<Vec<Elem>>) {
    let x = map.local_vector();
    (x.is_some(), x)
}

/// `F(s)`.
pub fn evaluate_map(map: &OperatorMap, s: &Mat) -> Result<Vec<Elem>> {
    map.evaluate(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> FieldSpec {
        FieldSpec::from_order(4).unwrap()
    }

    #[test]
    fn zero_vector_gives_zero_map() {
        let s = OperatorSpace::full(FieldSpec::f3(), 2, 2);
        let m = local_map(&s, &[0, 0]).unwrap();
        assert!(m.coefficients().iter().all(|&c| c == 0));
    }

    #[test]
    fn local_map_extracts_column() {
        let f3 = FieldSpec::f3();
        let s = OperatorSpace::full(f3, 2, 2);
        let m = local_map(&s, &[1, 0]).unwrap();
        for a in s.elements() {
            assert_eq!(m.evaluate(&a).unwrap(), a.column(0));
        }
    }

    #[test]
    fn evaluation_round_trips_through_coefficients() {
        let f = f4();
        let s = OperatorSpace::affine(
            f,
            2,
            2,
            &Mat::unit(2, 2, 1, 0),
            &[Mat::unit(2, 2, 0, 0), Mat::unit(2, 2, 1, 1)],
        )
        .unwrap();
        // an arbitrary semi-affine map: Frobenius on the (1,1) entry plus a constant
        let m = OperatorMap::from_fn(&s, MapClass::SemiAffine, |a| {
            let x = a.get(0, 0);
            vec![f.mul(x, x), f.add(a.get(1, 1), 3)]
        })
        .unwrap();
        let back =
            OperatorMap::from_coefficients(&s, MapClass::SemiAffine, &m.coefficients()).unwrap();
        assert_eq!(back, m);
        assert_eq!(m.evaluate(&s.offset()).unwrap(), m.base_value());
        for a in s.elements() {
            let x = a.get(0, 0);
            assert_eq!(
                m.evaluate(&a).unwrap(),
                vec![f.mul(x, x), f.add(a.get(1, 1), 3)]
            );
        }
        assert!(m.evaluate(&Mat::zeros(2, 2)).is_err());
    }

    #[test]
    fn additive_map_is_not_field_linear() {
        let f = f4();
        let s = OperatorSpace::linear_span(f, 1, 1, &[Mat::identity(1)]).unwrap();
        let frob = OperatorMap::from_fn(&s, MapClass::Additive, |a| {
            let x = a.get(0, 0);
            vec![f.mul(x, x)]
        })
        .unwrap();
        let t = Mat::identity(1);
        let lambda = 2; // the generator x of F4
        let lt = t.scale(f, lambda);
        assert_eq!(frob.evaluate(&lt).unwrap(), frob.generator_values()[1]);
        assert_ne!(
            frob.evaluate(&lt).unwrap(),
            vec![f.mul(lambda, frob.evaluate(&t).unwrap()[0])]
        );
        assert!(frob.to_class(MapClass::Linear).is_err());
        assert!(!frob.is_local());
    }

    #[test]
    fn linear_class_rejects_affine_space() {
        let s = OperatorSpace::affine(FieldSpec::f2(), 1, 1, &Mat::identity(1), &[]).unwrap();
        assert!(OperatorMap::zero(&s, MapClass::Linear).is_err());
        assert!(OperatorMap::zero(&s, MapClass::Affine).is_ok());
    }

    #[test]
    fn local_space_dimensions() {
        let f3 = FieldSpec::f3();
        let full = OperatorSpace::full(f3, 3, 2);
        assert_eq!(local_space(&full, MapClass::Linear).unwrap().dim(), 2);
        let zero = OperatorSpace::zero(f3, 3, 2);
        assert_eq!(local_space(&zero, MapClass::Linear).unwrap().dim(), 0);
        let f2 = FieldSpec::f2();
        let t = OperatorSpace::zero(f2, 3, 1)
            .coprod(&OperatorSpace::full(f2, 3, 1))
            .unwrap();
        assert_eq!(local_space(&t, MapClass::Linear).unwrap().dim(), 1);
        let f = f4();
        assert_eq!(
            local_space(&OperatorSpace::full(f, 2, 2), MapClass::Additive)
                .unwrap()
                .dim(),
            4
        );
    }

    #[test]
    fn local_vector_round_trip() {
        let f = FieldSpec::from_order(5).unwrap();
        let s = OperatorSpace::full(f, 2, 3);
        let m = local_map(&s, &[1, 4, 2]).unwrap();
        assert_eq!(m.local_vector(), Some(vec![1, 4, 2]));
        // with a nontrivial common kernel the least representative is returned
        let t =
            OperatorSpace::linear_span(f, 2, 2, &[Mat::unit(2, 2, 0, 0), Mat::unit(2, 2, 1, 0)])
                .unwrap();
        let m = local_map(&t, &[3, 4]).unwrap();
        assert_eq!(m.local_vector(), Some(vec![3, 0]));
        assert_eq!(
            is_local(&OperatorMap::zero(&t, MapClass::Linear).unwrap()),
            (true, Some(vec![0, 0]))
        );
    }
}
