//! Dense matrices over a [`FieldSpec`] and Gauss-Jordan elimination.

use std::fmt;

use super::field::{Elem, FieldSpec};
use crate::error::{Error, Result};

/// Row-major dense matrix of canonical field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// The elementary matrix with a single 1 at `(i, j)`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(i, j, 1);
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::domain(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    /// Builds a matrix from equal-length rows; `cols` is needed for the zero-row case.
    pub fn from_rows(cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::domain(format!(
                    "row of length {} in a matrix with {cols} columns",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Ok(Mat {
            rows: rows.len(),
            cols,
            data,
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [Elem] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Row-major flattening.
    pub fn as_slice(&self) -> &[Elem] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Elem> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul_vec(&self, f: FieldSpec, x: &[Elem]) -> Vec<Elem> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| dot(f, self.row(i), x)).collect()
    }

    pub fn mul(&self, f: FieldSpec, other: &Mat) -> Result<Mat> {
        if self.cols != other.rows {
            return Err(Error::domain("matrix product shape mismatch"));
        }
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a != 0 {
                    axpy(f, out.row_mut(i), a, other.row(l));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, f: FieldSpec, other: &Mat) -> Mat {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, f: FieldSpec, c: Elem) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f.mul(c, a)).collect(),
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, f: FieldSpec, c: Elem, other: &Mat) {
        axpy(f, &mut self.data, c, &other.data);
    }

    /// Gauss-Jordan elimination to the unique reduced row echelon form.
    pub fn rref(&self, f: FieldSpec) -> RowEchelon {
        let mut m = self.clone();
        let pivots = rref_in_place(f, &mut m);
        RowEchelon {
            rank: pivots.len(),
            matrix: m,
            pivots,
        }
    }

    pub fn rank(&self, f: FieldSpec) -> usize {
        self.rref(f).rank
    }

    /// The first `rows` rows.
    pub fn top_rows(&self, rows: usize) -> Mat {
        Mat {
            rows,
            cols: self.cols,
            data: self.data[..rows * self.cols].to_vec(),
        }
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Result of [`Mat::rref`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowEchelon {
    /// Same shape as the input; zero rows trail.
    pub matrix: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Reduces in place and returns pivot columns.
pub(crate) fn rref_in_place(f: FieldSpec, m: &mut Mat) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                m.data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.recip(m.get(r, c));
        if inv != 1 {
            for v in m.row_mut(r)[c..].iter_mut() {
                *v = f.mul(inv, *v);
            }
        }
        let pivot_row: Vec<Elem> = m.row(r)[c..].to_vec();
        for i in 0..rows {
            if i != r {
                let factor = m.get(i, c);
                if factor != 0 {
                    let neg = f.neg(factor);
                    axpy(f, &mut m.row_mut(i)[c..], neg, &pivot_row);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// `y += a * x`.
#[inline]
pub fn axpy(f: FieldSpec, y: &mut [Elem], a: Elem, x: &[Elem]) {
    debug_assert_eq!(y.len(), x.len());
    if a == 0 {
        return;
    }
    for (yi, &xi) in y.iter_mut().zip(x) {
        if xi != 0 {
            *yi = f.add(*yi, f.mul(a, xi));
        }
    }
}

#[inline]
pub fn dot(f: FieldSpec, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn vec_add(f: FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

pub fn vec_sub(f: FieldSpec, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
}

pub fn vec_scale(f: FieldSpec, c: Elem, a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|&x| f.mul(c, x)).collect()
}

/// Prime-subfield coordinates of a vector, digits innermost.
pub fn vec_digits(f: FieldSpec, v: &[Elem]) -> Vec<u8> {
    v.iter()
        .flat_map(|&x| f.digits(x).iter().copied())
        .collect()
}

/// Inverse of [`vec_digits`].
pub fn vec_compose(f: FieldSpec, digits: &[u8]) -> Vec<Elem> {
    digits
        .chunks(f.k() as usize)
        .map(|d| f.compose(d))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_small_cases() {
        let f2 = FieldSpec::f2();
        let z = Mat::zeros(3, 4);
        assert_eq!(z.rref(f2).rank, 0);
        let id = Mat::identity(3);
        let e = id.rref(FieldSpec::f3());
        assert_eq!(e.matrix, id);
        assert_eq!(e.rank, 3);
        assert_eq!(e.pivots, vec![0, 1, 2]);
        let m = Mat::from_rows(2, &[vec![1, 1], vec![1, 1]]).unwrap();
        let e = m.rref(f2);
        assert_eq!(
            e.matrix,
            Mat::from_rows(2, &[vec![1, 1], vec![0, 0]]).unwrap()
        );
        assert_eq!(e.rank, 1);
    }

    #[test]
    fn rref_is_idempotent_over_f5() {
        let f5 = FieldSpec::from_order(5).unwrap();
        let m = Mat::from_rows(4, &[vec![2, 4, 1, 3], vec![1, 2, 0, 4], vec![3, 1, 1, 2]]).unwrap();
        let r = m.rref(f5);
        assert_eq!(r.matrix.rref(f5).matrix, r.matrix);
    }

    #[test]
    fn product_and_transpose() {
        let f3 = FieldSpec::f3();
        let a = Mat::from_rows(2, &[vec![1, 2], vec![0, 1]]).unwrap();
        let b = Mat::from_rows(2, &[vec![2, 0], vec![1, 1]]).unwrap();
        let c = a.mul(f3, &b).unwrap();
        assert_eq!(c, Mat::from_rows(2, &[vec![1, 2], vec![1, 1]]).unwrap());
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.mul_vec(f3, &[1, 1]), vec![0, 1]);
        assert!(Mat::from_vec(2, 2, vec![0; 3]).is_err());
    }
}
