use super::map::OperatorMap;
use super::CompatMode;
use crate::algebra::{kernel, solve_system, vec_add, Elem, Mat, Subspace};
use crate::error::{Error, Result};
use crate::opspace::OperatorSpace;

fn columns(m: &Mat, from: usize, to: usize) -> Mat {
    let mut out = Mat::zeros(m.rows(), to - from);
    for i in 0..m.rows() {
        out.row_mut(i).copy_from_slice(&m.row(i)[from..to]);
    }
    out
}

/// The map `π∘s ↦ π(F(s))` on `𝒮 mod V0`, where `π` kills `V0`.
///
/// Well defined exactly when the linear part sends every translation `t` with
/// `im t ⊆ V0` into `V0`; otherwise the error names such a `t`. Quasi modes
/// additionally need the line outside `V0`.
pub fn induced_quotient_map(
    map: &OperatorMap,
    v0: &Subspace,
    mode: &CompatMode,
) -> Result<(OperatorSpace, OperatorMap)> {
    let space = map.space();
    let f = space.field();
    match mode {
        CompatMode::Range => {}
        CompatMode::QuasiRange(d) => {
            if v0.contains(d.vector()) {
                return Err(Error::domain(format!(
                    "the line {d:?} lies inside the quotiented subspace"
                )));
            }
        }
        CompatMode::QuasiRangeAny => {
            return Err(Error::domain(
                "the quotient of a quasi map needs a specific line",
            ));
        }
    }
    let (quotient, proj) = space.quotient_space(v0)?;
    let basis = space.translation_basis();
    let projected: Vec<Vec<Elem>> = basis
        .iter()
        .map(|t| proj.apply_to_matrix(t).into_vec())
        .collect();
    let m = quotient.n() * quotient.p();
    // columns are the projected translation generators
    let mut system = Mat::zeros(m, basis.len());
    for (i, v) in projected.iter().enumerate() {
        for (r, &x) in v.iter().enumerate() {
            system.set(r, i, x);
        }
    }

    // translations collapsing to zero, as a prime-subfield spanning set
    let collapsed = kernel(f, &system);
    let linear = map.linear_part();
    for c in collapsed.basis_vectors() {
        for e in 0..f.k() as usize {
            let lambda = f.basis_elem(e);
            let mut t = Mat::zeros(space.n(), space.p());
            for (i, &ci) in c.iter().enumerate() {
                t.add_scaled(f, f.mul(lambda, ci), &basis[i]);
            }
            let value = linear.evaluate(&t).expect("translation element");
            if !v0.contains(&value) {
                return Err(Error::domain(format!(
                    "no induced map: the translation {t:?} has image inside the subspace but its value {value:?} does not"
                )));
            }
        }
    }

    let s0 = space.offset();
    let s0_proj = proj.apply_to_matrix(&s0).into_vec();
    let induced = OperatorMap::from_fn(&quotient, map.class(), |q| {
        let rhs: Vec<Elem> = q
            .as_slice()
            .iter()
            .zip(&s0_proj)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        let coords = solve_system(f, &system, &rhs)
            .expect("consistent shapes")
            .expect("quotient element lifts");
        let mut s = s0.clone();
        for (i, &ci) in coords.offset().iter().enumerate() {
            s.add_scaled(f, ci, &basis[i]);
        }
        proj.apply(&map.evaluate(&s).expect("lifted element"))
    })?;
    Ok((quotient, induced))
}

/// `f ∐ g : [A B] ↦ f(A) + g(B)` on `𝒜 ∐ ℬ`.
pub fn coprod_map(f: &OperatorMap, g: &OperatorMap) -> Result<OperatorMap> {
    if f.class() != g.class() {
        return Err(Error::domain(format!(
            "cannot join a {} map with a {} map",
            f.class(),
            g.class()
        )));
    }
    let space = f.space().coprod(g.space())?;
    let field = space.field();
    let pa = f.space().p();
    let p = space.p();
    OperatorMap::from_fn(&space, f.class(), |m| {
        let a = f.evaluate(&columns(m, 0, pa)).expect("left block");
        let b = g.evaluate(&columns(m, pa, p)).expect("right block");
        vec_add(field, &a, &b)
    })
}

/// Splits `[A B]` back into its blocks.
pub fn split_columns(m: &Mat, left: usize) -> (Mat, Mat) {
    (columns(m, 0, left), columns(m, left, m.cols()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FieldSpec;
    use crate::opspace::{hconcat, Direction};
    use crate::solver::{local_map, solve_compatible_maps, MapClass};

    #[test]
    fn local_maps_descend_to_local_maps() {
        let f3 = FieldSpec::f3();
        let s = OperatorSpace::full(f3, 1, 1)
            .vee(&OperatorSpace::full(f3, 2, 1))
            .unwrap();
        let x = vec![2, 1];
        let m = local_map(&s, &x).unwrap();
        let v0 = Direction::unit(3, 2).line(f3);
        let (q, induced) = induced_quotient_map(&m, &v0, &CompatMode::Range).unwrap();
        assert_eq!(induced.space(), &q);
        for a in q.elements() {
            assert_eq!(induced.evaluate(&a).unwrap(), a.mul_vec(f3, &x));
        }
    }

    #[test]
    fn affine_obstruction_is_reported() {
        // first column (?, 1, 0), F(M) = (0, M11 + 1, 0): the translation E11 has image span e1
        let f2 = FieldSpec::f2();
        let mut offset = Mat::zeros(3, 2);
        offset.set(1, 0, 1);
        let mut trans = vec![Mat::unit(3, 2, 0, 0)];
        for i in 0..3 {
            trans.push(Mat::unit(3, 2, i, 1));
        }
        let s = OperatorSpace::affine(f2, 3, 2, &offset, &trans).unwrap();
        let map =
            OperatorMap::from_fn(&s, MapClass::Affine, |m| vec![0, f2.add(m.get(0, 0), 1), 0])
                .unwrap();
        let v0 = Direction::unit(3, 0).line(f2);
        let err = induced_quotient_map(&map, &v0, &CompatMode::Range).unwrap_err();
        assert!(err.to_string().contains("no induced map"));
    }

    #[test]
    fn quasi_requires_line_outside() {
        let f2 = FieldSpec::f2();
        let s = OperatorSpace::full(f2, 2, 1);
        let m = local_map(&s, &[1]).unwrap();
        let d = Direction::unit(2, 0);
        assert!(induced_quotient_map(&m, &d.line(f2), &CompatMode::QuasiRange(d.clone())).is_err());
    }

    #[test]
    fn coprod_of_local_maps_is_local() {
        let f5 = FieldSpec::from_order(5).unwrap();
        let a = OperatorSpace::full(f5, 2, 1);
        let b =
            OperatorSpace::linear_span(f5, 2, 2, &[Mat::unit(2, 2, 0, 1), Mat::unit(2, 2, 1, 0)])
                .unwrap();
        let f = local_map(&a, &[3]).unwrap();
        let g = local_map(&b, &[1, 4]).unwrap();
        let h = coprod_map(&f, &g).unwrap();
        assert_eq!(h.local_vector(), Some(vec![3, 1, 4]));
        let sol = solve_compatible_maps(h.space(), &CompatMode::Range, MapClass::Linear).unwrap();
        assert!(sol[0].contains(&h));
    }

    #[test]
    fn split_round_trip() {
        let m = Mat::from_rows(3, &[vec![1, 2, 0], vec![0, 1, 1]]).unwrap();
        let (a, b) = split_columns(&m, 1);
        assert_eq!(hconcat(&a, &b), m);
    }
}
