//! Exact linear algebra over polynomials, localized elements and plain
//! rationals: determinants, minors, adjugate solves, rank and kernel bases.

mod qmat;

pub use qmat::QMatrix;

use std::collections::BTreeMap;
use std::ops::Mul;

use num_traits::One;

use crate::symalg::{
    factor_minor_product, minor_poly, IndexSet, LocalizedElement, Polynomial, Rational, Variable,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymMatError {
    #[error("matrix shapes do not match")]
    ShapeMismatch,
    #[error("matrix is not square")]
    NotSquare,
    #[error("coefficient matrix specializes to determinant zero")]
    SingularSpecialization,
    #[error("operation requires rational entries")]
    NonRationalEntry,
    #[error("operation requires polynomial entries")]
    NonPolynomialEntry,
    #[error("adjugate solve produced a determinant outside the minor-localized ring")]
    NonMinorDeterminant,
}

/// A dense matrix of localized elements; polynomials and rationals embed.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LocalizedElement>,
}

impl SymMatrix {
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> LocalizedElement,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        SymMatrix { rows, cols, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j { LocalizedElement::one() } else { LocalizedElement::zero() }
        })
    }

    /// The generic `r x s` matrix of X-variables.
    pub fn generic_x(r: usize, s: usize) -> Self {
        Self::from_fn(r, s, |i, j| Variable::x(i + 1, j + 1).into())
    }

    /// The generic `s x r` matrix of Y-variables.
    pub fn generic_y(s: usize, r: usize) -> Self {
        Self::from_fn(s, r, |i, j| Variable::y(i + 1, j + 1).into())
    }

    pub fn from_rational(m: &QMatrix) -> Self {
        Self::from_fn(m.rows(), m.cols(), |i, j| m.at(i, j).clone().into())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &LocalizedElement {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.entries[i * self.cols + j]
    }

    /// The submatrix with all rows and the 1-based columns in `set`.
    pub fn columns(&self, set: &IndexSet) -> SymMatrix {
        let idx = set.indices();
        Self::from_fn(self.rows, idx.len(), |i, j| self.at(i, idx[j] - 1).clone())
    }

    /// Converts to a rational matrix; fails on any non-constant entry.
    pub fn to_rational(&self) -> Result<QMatrix, SymMatError> {
        let mut out = QMatrix::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let c = self.at(i, j).as_rational().ok_or(SymMatError::NonRationalEntry)?;
                out.set(i, j, c);
            }
        }
        Ok(out)
    }

    /// Converts to a polynomial grid; fails on any entry with denominator.
    fn to_polynomials(&self) -> Result<Vec<Vec<Polynomial>>, SymMatError> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| {
                        self.at(i, j)
                            .as_polynomial()
                            .cloned()
                            .ok_or(SymMatError::NonPolynomialEntry)
                    })
                    .collect()
            })
            .collect()
    }

    /// Exact determinant: cofactor expansion up to dimension 4, fraction-free
    /// Bareiss elimination above.
    pub fn det(&self) -> Result<LocalizedElement, SymMatError> {
        if self.rows != self.cols {
            return Err(SymMatError::NotSquare);
        }
        if self.rows <= 4 {
            Ok(self.det_cofactor_unchecked())
        } else {
            Ok(self.det_bareiss_unchecked())
        }
    }

    /// Determinant by cofactor expansion along the first column.
    pub fn det_cofactor(&self) -> Result<LocalizedElement, SymMatError> {
        if self.rows != self.cols {
            return Err(SymMatError::NotSquare);
        }
        Ok(self.det_cofactor_unchecked())
    }

    fn det_cofactor_unchecked(&self) -> LocalizedElement {
        let n = self.rows;
        if n == 0 {
            return LocalizedElement::one();
        }
        if n == 1 {
            return self.at(0, 0).clone();
        }
        let mut det = LocalizedElement::zero();
        for i in 0..n {
            if self.at(i, 0).is_zero() {
                continue;
            }
            let sub = Self::from_fn(n - 1, n - 1, |a, b| {
                let row = if a < i { a } else { a + 1 };
                self.at(row, b + 1).clone()
            });
            let term = &sub.det_cofactor_unchecked() * self.at(i, 0);
            det = if i % 2 == 0 { &det + &term } else { &det - &term };
        }
        det
    }

    /// Determinant by fraction-free Bareiss elimination. Each row's
    /// denominator is cleared first (and divided back at the end), so all
    /// intermediate arithmetic happens on polynomials with exact divisions.
    pub fn det_bareiss(&self) -> Result<LocalizedElement, SymMatError> {
        if self.rows != self.cols {
            return Err(SymMatError::NotSquare);
        }
        Ok(self.det_bareiss_unchecked())
    }

    fn det_bareiss_unchecked(&self) -> LocalizedElement {
        let n = self.rows;
        if n == 0 {
            return LocalizedElement::one();
        }
        // Clear denominators row by row, tracking the product divided back.
        let mut cleared_total: BTreeMap<IndexSet, u32> = BTreeMap::new();
        let mut grid: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut row_den: BTreeMap<IndexSet, u32> = BTreeMap::new();
            for j in 0..n {
                for (set, &e) in self.at(i, j).denominator_factors() {
                    let entry = row_den.entry(set.clone()).or_insert(0);
                    *entry = (*entry).max(e);
                }
            }
            let row: Vec<Polynomial> = (0..n)
                .map(|j| {
                    let el = self.at(i, j);
                    let mut p = el.numerator().clone();
                    for (set, &e) in &row_den {
                        let deficit = e - el.denominator_factors().get(set).copied().unwrap_or(0);
                        if deficit > 0 {
                            p = &p * &minor_poly(set).pow(deficit);
                        }
                    }
                    p
                })
                .collect();
            for (set, e) in row_den {
                *cleared_total.entry(set).or_insert(0) += e;
            }
            grid.push(row);
        }
        LocalizedElement::new(bareiss_det_poly(grid), cleared_total)
    }

    /// Exact rank; entries must be rational constants.
    pub fn rank(&self) -> Result<usize, SymMatError> {
        Ok(self.to_rational()?.rank())
    }

    /// Basis of the right null space; entries must be rational constants.
    pub fn kernel_basis(&self) -> Result<Vec<Vec<Rational>>, SymMatError> {
        Ok(self.to_rational()?.kernel_basis())
    }
}

impl Mul for &SymMatrix {
    type Output = SymMatrix;
    fn mul(self, rhs: Self) -> SymMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        SymMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            let mut sum = LocalizedElement::zero();
            for k in 0..self.cols {
                sum = &sum + &(self.at(i, k) * rhs.at(k, j));
            }
            sum
        })
    }
}

/// Fraction-free Bareiss determinant of a polynomial grid. Pivots are the
/// first structurally nonzero entry in column order; row swaps flip the sign.
fn bareiss_det_poly(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one();
    }
    let mut sign = 1i32;
    let mut prev_pivot = Polynomial::one();
    for k in 0..n - 1 {
        let Some(pivot_row) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Polynomial::zero();
        };
        if pivot_row != k {
            m.swap(pivot_row, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[k][k] * &m[i][j]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev_pivot)
                    .expect("Bareiss division is exact by the Sylvester identity");
            }
            m[i][k] = Polynomial::zero();
        }
        prev_pivot = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 { -&det } else { det }
}

/// The minor of `x` on the 1-based columns in `set`: the determinant of the
/// square submatrix they select. For the generic X matrix this reproduces
/// the chart minor polynomial.
pub fn minor(x: &SymMatrix, set: &IndexSet) -> Result<Polynomial, SymMatError> {
    let sub = x.columns(set);
    let det = sub.det()?;
    det.as_polynomial().cloned().ok_or(SymMatError::NonPolynomialEntry)
}

/// Solves `M * R = B` by the adjugate: `R = adj(M) * B / det(M)`, keeping
/// every entry in the localized ring with denominator `det(M)` to the first
/// power. `M` must have polynomial entries whose determinant is a rational
/// multiple of a product of chart minors (for chart construction it is a
/// single minor on the nose).
pub fn adjugate_solve(m: &SymMatrix, b: &SymMatrix) -> Result<SymMatrix, SymMatError> {
    if m.rows() != m.cols() {
        return Err(SymMatError::NotSquare);
    }
    if b.rows() != m.rows() {
        return Err(SymMatError::ShapeMismatch);
    }
    let grid = m.to_polynomials()?;
    let n = m.rows();
    let det = bareiss_det_poly(grid.clone());
    if det.is_zero() {
        return Err(SymMatError::SingularSpecialization);
    }
    let (scalar, den) = factor_minor_product(&det).ok_or(SymMatError::NonMinorDeterminant)?;
    // adj(M)_{ij} = (-1)^{i+j} det(M with row j, column i deleted)
    let adj = SymMatrix::from_fn(n, n, |i, j| {
        let sub: Vec<Vec<Polynomial>> = (0..n)
            .filter(|&a| a != j)
            .map(|a| {
                (0..n)
                    .filter(|&c| c != i)
                    .map(|c| grid[a][c].clone())
                    .collect()
            })
            .collect();
        let cof = bareiss_det_poly(sub);
        let signed = if (i + j) % 2 == 0 { cof } else { -&cof };
        signed.into()
    });
    let product = &adj * b;
    let inv_scalar = Rational::one() / scalar;
    Ok(SymMatrix::from_fn(n, b.cols(), |i, j| {
        let scaled = product.at(i, j) * &LocalizedElement::from(inv_scalar.clone());
        let mut total_den = scaled.denominator_factors().clone();
        for (set, &e) in &den {
            *total_den.entry(set.clone()).or_insert(0) += e;
        }
        LocalizedElement::new(scaled.numerator().clone(), total_den)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xv(i: usize, j: usize) -> LocalizedElement {
        Variable::x(i, j).into()
    }

    #[test]
    fn det_of_identity() {
        assert_eq!(SymMatrix::identity(3).det().unwrap(), LocalizedElement::one());
    }

    #[test]
    fn det_of_generic_two_by_two() {
        let m = SymMatrix::from_fn(2, 2, |i, j| xv(i + 1, j + 1));
        let expected: LocalizedElement = minor_poly(&IndexSet::new(vec![1, 2]).unwrap()).into();
        assert_eq!(m.det().unwrap(), expected);
    }

    #[test]
    fn bareiss_matches_cofactor_on_generic_matrices() {
        for n in 1..=4 {
            let m = SymMatrix::from_fn(n, n, |i, j| {
                // mix of variables and constants
                if (i + j) % 3 == 0 {
                    LocalizedElement::from(Rational::from_integer((i as i64 - j as i64).into()))
                } else {
                    xv(i + 1, j + 1)
                }
            });
            assert_eq!(m.det_bareiss().unwrap(), m.det_cofactor().unwrap(), "dimension {n}");
        }
    }

    #[test]
    fn det_is_multiplicative_on_rational_matrices() {
        let a = SymMatrix::from_rational(&QMatrix::from_i64_rows(&[&[2, 1, 0], &[1, -1, 3], &[0, 2, 5]]));
        let b = SymMatrix::from_rational(&QMatrix::from_i64_rows(&[&[1, 0, 2], &[0, 1, 1], &[4, -2, 1]]));
        let prod = &a * &b;
        let lhs = prod.det().unwrap().as_rational().unwrap();
        let rhs = a.det().unwrap().as_rational().unwrap() * b.det().unwrap().as_rational().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn minor_of_specialized_base_point() {
        // X0 = [I_2 | 0] at r=2, s=3: leading minor 1, any minor using the
        // zero column vanishes.
        let x0 = SymMatrix::from_rational(&QMatrix::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]));
        let lead = minor(&x0, &IndexSet::new(vec![1, 2]).unwrap()).unwrap();
        assert_eq!(lead, Polynomial::one());
        let degenerate = minor(&x0, &IndexSet::new(vec![2, 3]).unwrap()).unwrap();
        assert!(degenerate.is_zero());
    }

    #[test]
    fn generic_minor_agrees_with_leibniz_expansion() {
        // Two independent routes to the same polynomial.
        let x = SymMatrix::generic_x(2, 3);
        for set in IndexSet::all(3, 2) {
            assert_eq!(minor(&x, &set).unwrap(), minor_poly(&set));
        }
    }

    #[test]
    fn adjugate_solve_identity_returns_rhs() {
        let b = SymMatrix::from_fn(2, 1, |i, _| xv(1, i + 1));
        let solved = adjugate_solve(&SymMatrix::identity(2), &b).unwrap();
        assert_eq!(solved, b);
    }

    #[test]
    fn adjugate_solve_single_equation() {
        // x11 * t = 1 - x12*y21  =>  t = (1 - x12*y21)/x11
        let m = SymMatrix::from_fn(1, 1, |_, _| xv(1, 1));
        let rhs_poly = &Polynomial::one()
            - &(&Polynomial::var(Variable::x(1, 2)) * &Polynomial::var(Variable::y(2, 1)));
        let b = SymMatrix::from_fn(1, 1, |_, _| rhs_poly.clone().into());
        let solved = adjugate_solve(&m, &b).unwrap();
        let set = IndexSet::new(vec![1]).unwrap();
        assert_eq!(solved.at(0, 0).denominator_factors().get(&set), Some(&1));
        // multiply back
        let back = &m * &solved;
        assert_eq!(back.at(0, 0), b.at(0, 0));
    }

    #[test]
    fn adjugate_solve_rejects_singular() {
        let m = SymMatrix::from_rational(&QMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]));
        let b = SymMatrix::identity(2);
        assert_eq!(adjugate_solve(&m, &b), Err(SymMatError::SingularSpecialization));
    }

    #[test]
    fn bareiss_reproduces_integer_determinants() {
        // Seeded integer matrices; the oracle is the hand-written 3x3 rule.
        let samples: [[[i64; 3]; 3]; 4] = [
            [[2, -1, 3], [0, 4, 1], [5, 2, -2]],
            [[1, 1, 1], [1, 2, 3], [1, 4, 9]],
            [[0, 0, 1], [0, 1, 0], [1, 0, 0]],
            [[3, 0, 0], [0, 0, 0], [0, 0, 7]],
        ];
        for rows in samples {
            let naive = rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]);
            let m = SymMatrix::from_rational(&QMatrix::from_i64_rows(&[
                &rows[0], &rows[1], &rows[2],
            ]));
            let det = m.det_bareiss().unwrap().as_rational().unwrap();
            assert_eq!(det, Rational::from_integer(naive.into()));
        }
    }

    #[test]
    fn det_is_alternating_and_multilinear_in_rows() {
        let m = SymMatrix::from_fn(3, 3, |i, j| xv(i + 1, j + 1));
        let swapped = SymMatrix::from_fn(3, 3, |i, j| {
            let row = match i {
                0 => 1,
                1 => 0,
                other => other,
            };
            m.at(row, j).clone()
        });
        assert_eq!(swapped.det().unwrap(), -&m.det().unwrap());

        // scaling one row scales the determinant
        let scaled = SymMatrix::from_fn(3, 3, |i, j| {
            if i == 1 {
                m.at(i, j) * &LocalizedElement::from(Rational::from_integer(7.into()))
            } else {
                m.at(i, j).clone()
            }
        });
        let expected = &m.det().unwrap() * &Rational::from_integer(7.into()).into();
        assert_eq!(scaled.det().unwrap(), expected);
    }

    #[test]
    fn rank_requires_rational_entries() {
        let m = SymMatrix::from_fn(1, 1, |_, _| xv(1, 1));
        assert_eq!(m.rank(), Err(SymMatError::NonRationalEntry));
        let z = SymMatrix::from_rational(&QMatrix::zero(2, 2));
        assert_eq!(z.rank().unwrap(), 0);
        assert_eq!(z.kernel_basis().unwrap().len(), 2);
    }
}
