use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::symalg::Rational;

use super::SymMatError;

/// A dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl QMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j { Rational::one() } else { Rational::zero() }
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        QMatrix { rows, cols, entries }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self, SymMatError> {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(SymMatError::ShapeMismatch);
        }
        Ok(QMatrix { rows: nrows, cols: ncols, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v.into())).collect())
                .collect(),
        )
        .expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        self.entries[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> QMatrix {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &QMatrix) -> Result<QMatrix, SymMatError> {
        if self.rows != other.rows {
            return Err(SymMatError::ShapeMismatch);
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.at(i, j).clone() } else { other.at(i, j - self.cols).clone() }
        }))
    }

    /// Block-diagonal composition `diag(self, other)`.
    pub fn block_diag(&self, other: &QMatrix) -> QMatrix {
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.at(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.at(i - self.rows, j - self.cols).clone()
            } else {
                Rational::zero()
            }
        })
    }

    /// The submatrix of the listed rows and columns (0-based).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.at(rows[i], cols[j]).clone())
    }

    /// Reduced row echelon form together with the pivot columns.
    fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m.at(i, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.entries.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = Rational::one() / m.at(row, col).clone();
            for j in col..m.cols {
                let v = m.at(row, j) * &inv;
                m.set(row, j, v);
            }
            for i in 0..m.rows {
                if i != row && !m.at(i, col).is_zero() {
                    let factor = m.at(i, col).clone();
                    for j in col..m.cols {
                        let v = m.at(i, j) - &(m.at(row, j) * &factor);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// A basis of the right null space. Each vector is scaled to primitive
    /// integer entries with positive first nonzero entry, so the basis is
    /// deterministic; `self * b = 0` holds exactly for every member.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r.at(i, free).clone();
            }
            normalize_primitive(&mut v);
            basis.push(v);
        }
        basis
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n)).expect("same row count");
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }
}

/// Scales a rational vector to primitive integer form with the first
/// nonzero entry positive.
fn normalize_primitive(v: &mut [Rational]) {
    let mut denom_lcm = BigInt::one();
    for x in v.iter() {
        denom_lcm = denom_lcm.lcm(x.denom());
    }
    let mut numer_gcd = BigInt::zero();
    for x in v.iter() {
        numer_gcd = numer_gcd.gcd(&(x.numer() * &denom_lcm / x.denom()));
    }
    if numer_gcd.is_zero() {
        return;
    }
    let scale = Rational::new(denom_lcm, numer_gcd);
    for x in v.iter_mut() {
        *x *= &scale;
    }
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: Self) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        QMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut sum = Rational::zero();
            for k in 0..self.cols {
                sum += self.at(i, k) * rhs.at(k, j);
            }
            sum
        })
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_identity_block() {
        let x0 = QMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(x0.rank(), 2);
        assert_eq!(QMatrix::zero(3, 2).rank(), 0);
    }

    #[test]
    fn kernel_of_row_vector_is_primitive() {
        let x = QMatrix::from_i64_rows(&[&[2, 3]]);
        let basis = x.kernel_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(
            basis[0],
            vec![Rational::from_integer(3.into()), Rational::from_integer((-2).into())]
        );
        // X * b = 0
        let b = QMatrix::from_rows(vec![basis[0].clone()]).unwrap().transpose();
        let prod = &x * &b;
        assert!(prod.at(0, 0).is_zero());
    }

    #[test]
    fn kernel_of_invertible_is_empty_and_of_zero_is_full() {
        let m = QMatrix::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert!(m.kernel_basis().is_empty());
        let z = QMatrix::zero(2, 2);
        assert_eq!(z.kernel_basis().len(), 2);
    }

    #[test]
    fn rank_plus_nullity_is_cols() {
        let samples = [
            QMatrix::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6]]),
            QMatrix::from_i64_rows(&[&[0, 1], &[1, 0], &[1, 1]]),
            QMatrix::zero(2, 5),
        ];
        for m in samples {
            assert_eq!(m.rank() + m.kernel_basis().len(), m.cols());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_i64_rows(&[&[2, 1], &[5, 3]]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        let singular = QMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(singular.inverse().is_none());
    }
}
