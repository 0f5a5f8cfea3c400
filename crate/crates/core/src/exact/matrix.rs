//! Dense matrices over Q(i) with exact Gaussian elimination.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{GaussianRational, Rational};
use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<GaussianRational>,
}

/// Result of row reduction: the reduced row echelon form and its pivot columns.
#[derive(Clone, Debug)]
pub struct RowEchelon {
    pub rref: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![GaussianRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = GaussianRational::one();
        }
        m
    }

    pub fn diagonal(entries: &[GaussianRational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Convenience constructor from integer rows; panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| GaussianRational::from_int(v)).collect()).collect())
            .expect("rectangular integer rows")
    }

    pub fn from_columns(cols: &[Vec<GaussianRational>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(GaussianRational::is_zero)
    }

    pub fn row(&self, i: usize) -> &[GaussianRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<GaussianRational> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &GaussianRational) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn mul_vec(&self, v: &[GaussianRational]) -> Vec<GaussianRational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = GaussianRational::zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &ExactMatrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)].clone();
            }
        }
        m
    }

    /// Reduced row echelon form with pivots chosen left to right.
    pub fn row_echelon(&self) -> RowEchelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv();
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let delta = &f * &m[(r, j)];
                            m[(i, j)] = &m[(i, j)] - &delta;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        RowEchelon { rref: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.row_echelon().pivots.len()
    }

    pub fn det(&self) -> Result<GaussianRational, Error> {
        if !self.is_square() {
            return Err(Error::Shape(format!("determinant of a {}x{} matrix", self.rows, self.cols)));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(GaussianRational::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m[(c, c)].clone();
            det = &det * &pivot;
            let inv = pivot.inv();
            for i in c + 1..n {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = &m[(i, c)] * &inv;
                for j in c..n {
                    if !m[(c, j)].is_zero() {
                        let delta = &f * &m[(c, j)];
                        m[(i, j)] = &m[(i, j)] - &delta;
                    }
                }
            }
        }
        Ok(det)
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let RowEchelon { rref, pivots } = self.row_echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussianRational::zero(); self.cols];
                v[f] = GaussianRational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -&rref[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        if !self.is_square() {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n));
        let RowEchelon { rref, pivots } = aug.row_echelon();
        if pivots.len() < n || (n > 0 && pivots[n - 1] >= n) {
            return Err(Error::Singular);
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        let rows: Vec<usize> = (0..n).collect();
        Ok(rref.submatrix(&rows, &cols))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl std::ops::Index<(usize, usize)> for ExactMatrix {
    type Output = GaussianRational;
    fn index(&self, (i, j): (usize, usize)) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut GaussianRational {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = ExactMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }
}

impl Add<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn add(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sum shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&ExactMatrix> for &ExactMatrix {
    type Output = ExactMatrix;
    fn sub(self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix difference shape mismatch");
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
        }
        write!(f, "]")
    }
}

/// Serializes as a list of rows; real entries as rational strings, others as
/// `{"re","im"}` objects.
impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Entry<'a>(&'a GaussianRational);
        impl Serialize for Entry<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                if self.0.im.is_zero() {
                    self.0.re.serialize(s)
                } else {
                    self.0.serialize(s)
                }
            }
        }
        let mut seq = serializer.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            let row: Vec<Entry<'_>> = self.row(i).iter().map(Entry).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<GaussianRational>>::deserialize(deserializer)?;
        ExactMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Rank over the field of fractions.
pub fn mat_rank(m: &ExactMatrix) -> usize {
    m.rank()
}

pub fn mat_det(m: &ExactMatrix) -> Result<GaussianRational, Error> {
    m.det()
}

pub fn mat_kernel(m: &ExactMatrix) -> Vec<Vec<GaussianRational>> {
    m.kernel()
}

/// Builds an integer matrix from `Rational` rows; used by tests and parsers.
pub fn rational_rows(rows: &[Vec<Rational>]) -> Result<ExactMatrix, Error> {
    ExactMatrix::from_rows(rows.iter().map(|r| r.iter().cloned().map(GaussianRational::real).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(v: i64) -> GaussianRational {
        GaussianRational::from_int(v)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&ExactMatrix::identity(2)), 2);
        assert_eq!(mat_rank(&ExactMatrix::zeros(3, 4)), 0);
        assert_eq!(mat_rank(&ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn det_examples() {
        assert_eq!(mat_det(&ExactMatrix::identity(5)).unwrap(), g(1));
        assert_eq!(mat_det(&ExactMatrix::diagonal(&[g(2), g(3)])).unwrap(), g(6));
        assert_eq!(mat_det(&ExactMatrix::from_int_rows(&[&[0, 1], &[1, 0]])).unwrap(), g(-1));
        assert!(matches!(mat_det(&ExactMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn kernel_examples() {
        assert!(mat_kernel(&ExactMatrix::identity(3)).is_empty());
        assert_eq!(mat_kernel(&ExactMatrix::zeros(2, 2)).len(), 2);
        let k = mat_kernel(&ExactMatrix::from_int_rows(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], g(0));
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn complex_determinant() {
        let i = GaussianRational::i();
        let m = ExactMatrix::diagonal(&[i.clone(), i.clone()]);
        assert_eq!(m.det().unwrap(), g(-1));
    }

    #[test]
    fn inverse_roundtrip() {
        let m = ExactMatrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, ExactMatrix::identity(2));
        assert!(matches!(ExactMatrix::from_int_rows(&[&[1, 2], &[2, 4]]).inverse(), Err(Error::Singular)));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(-3i64..=3, rows * cols).prop_map(move |v| {
            let rows_v: Vec<Vec<GaussianRational>> =
                v.chunks(cols).map(|c| c.iter().map(|&x| g(x)).collect()).collect();
            ExactMatrix::from_rows(rows_v).unwrap()
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in (1usize..5, 1usize..6).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            let k = m.kernel();
            prop_assert_eq!(m.rank() + k.len(), m.cols());
            for v in &k {
                prop_assert!(m.mul_vec(v).iter().all(GaussianRational::is_zero));
            }
        }

        #[test]
        fn det_multiplicative((a, b) in (1usize..5).prop_flat_map(|n| (small_matrix(n, n), small_matrix(n, n)))) {
            let lhs = (&a * &b).det().unwrap();
            let rhs = &a.det().unwrap() * &b.det().unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
