//! Dense matrices over `BigRational` with exact row reduction.

use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{c, CMat};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn shape_err(expected: String, got: String) -> Error {
    Error::ShapeMismatch { expected, got }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Q>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Q::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Q>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(shape_err(format!("{cols} columns"), format!("{} columns", bad.len())));
        }
        Ok(QMatrix { rows: rows.len(), cols, data: rows.iter().flatten().cloned().collect() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Q>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        QMatrix { rows, cols, data }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    pub fn mul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.cols != rhs.rows {
            return Err(shape_err(format!("{} rows", self.cols), format!("{} rows", rhs.rows)));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(Q::zero(), |acc, k| acc + &self[(i, k)] * &rhs[(k, j)])
        }))
    }

    pub fn mul_vec(&self, v: &[Q]) -> Result<Vec<Q>> {
        if self.cols != v.len() {
            return Err(shape_err(format!("length {}", self.cols), format!("length {}", v.len())));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(Q::zero(), |acc, (a, b)| acc + a * b))
            .collect())
    }

    pub fn add(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(shape_err(format!("{}x{}", self.rows, self.cols), format!("{}x{}", rhs.rows, rhs.cols)));
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, s: &Q) -> QMatrix {
        QMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * s).collect() }
    }

    /// Horizontal concatenation `[self | rhs]`.
    pub fn hstack(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.rows != rhs.rows {
            return Err(shape_err(format!("{} rows", self.rows), format!("{} rows", rhs.rows)));
        }
        Ok(Self::from_fn(self.rows, self.cols + rhs.cols, |i, j| {
            if j < self.cols { self[(i, j)].clone() } else { rhs[(i, j - self.cols)].clone() }
        }))
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, col)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, col)].recip();
            for j in col..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in col..m.cols {
                        let d = &f * &m[(r, j)];
                        m[(i, j)] -= d;
                    }
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : self·x = 0}`, one vector per free column.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![Q::zero(); self.cols];
                v[f] = Q::one();
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = -r[(i, f)].clone();
                }
                v
            })
            .collect()
    }

    /// Row-space basis in reduced form.
    pub fn row_space(&self) -> QMatrix {
        let (r, pivots) = self.rref();
        Self::from_fn(pivots.len(), self.cols, |i, j| r[(i, j)].clone())
    }

    pub fn determinant(&self) -> Result<Q> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let mut m = self.clone();
        let mut det = Q::one();
        for col in 0..m.cols {
            let Some(p) = (col..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                return Ok(Q::zero());
            };
            if p != col {
                m.swap_rows(p, col);
                det = -det;
            }
            let pivot = m[(col, col)].clone();
            det *= &pivot;
            for i in col + 1..m.rows {
                if !m[(i, col)].is_zero() {
                    let f = &m[(i, col)] / &pivot;
                    for j in col..m.cols {
                        let d = &f * &m[(col, j)];
                        m[(i, j)] -= d;
                    }
                }
            }
        }
        Ok(det)
    }

    /// Exact inverse, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let (r, pivots) = self.hstack(&Self::identity(n)).expect("same rows").rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Exact value of every `f64` entry.
    pub fn from_f64(m: &crate::linalg::RMat) -> QMatrix {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Q::from_float(m[(i, j)]).expect("finite entry"))
    }

    pub fn sub(&self, rhs: &QMatrix) -> Result<QMatrix> {
        self.add(&rhs.scale(&q(-1)))
    }

    pub fn to_f64(&self) -> crate::linalg::RMat {
        crate::linalg::RMat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_f64().unwrap_or(f64::NAN))
    }

    pub fn to_complex(&self) -> CMat {
        CMat::from_fn(self.rows, self.cols, |i, j| c(self[(i, j)].to_f64().unwrap_or(f64::NAN), 0.0))
    }

    pub fn max_abs(&self) -> Q {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_and_nullspace() {
        let m = QMatrix::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]).unwrap();
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn determinant_examples() {
        let m = QMatrix::from_i64(&[&[2, 1], &[7, 4]]).unwrap();
        assert_eq!(m.determinant().unwrap(), q(1));
        let s = QMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 3]]).unwrap();
        assert_eq!(s.determinant().unwrap(), q(-3));
        assert!(matches!(
            QMatrix::zeros(2, 3).determinant(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn inverse_examples() {
        let m = QMatrix::from_i64(&[&[2, 1], &[7, 4]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, QMatrix::from_i64(&[&[4, -1], &[-7, 2]]).unwrap());
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap().inverse().is_none());
        let y = crate::linalg::RMat::from_element(1, 1, 0.1);
        assert_eq!(QMatrix::from_f64(&y).to_f64(), y);
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(-3i64..=3, 12)) {
            let rows: Vec<Vec<Q>> = entries.chunks(4).map(|r| r.iter().map(|&x| q(x)).collect()).collect();
            let m = QMatrix::from_rows(&rows).unwrap();
            prop_assert_eq!(m.rank() + m.nullspace().len(), 4);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn determinant_is_multiplicative(a in proptest::collection::vec(-4i64..=4, 9),
                                         b in proptest::collection::vec(-4i64..=4, 9)) {
            let ma = QMatrix::from_fn(3, 3, |i, j| q(a[3 * i + j]));
            let mb = QMatrix::from_fn(3, 3, |i, j| q(b[3 * i + j]));
            let lhs = ma.mul(&mb).unwrap().determinant().unwrap();
            prop_assert_eq!(lhs, ma.determinant().unwrap() * mb.determinant().unwrap());
        }
    }
}
