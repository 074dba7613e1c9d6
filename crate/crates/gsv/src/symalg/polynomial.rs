use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::variable::Variable;
use super::{Rational, SymAlgError};

/// An exact sparse multivariate polynomial over the rationals.
///
/// Terms are kept in a map ordered by the graded lexicographic monomial
/// order, with no zero coefficients, so equal polynomials are structurally
/// equal and format identically.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Polynomial { terms }
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(v: Variable) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(v), Rational::one());
        Polynomial { terms }
    }

    pub fn from_integer(n: i64) -> Self {
        Polynomial::constant(Rational::from_integer(n.into()))
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, combining
    /// duplicates and dropping zeros.
    pub fn from_terms(pairs: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in pairs {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the polynomial is a rational constant (possibly zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Iterates terms in descending monomial order (leading term first).
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    /// Leading `(monomial, coefficient)` in the graded lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// All variables occurring in some term.
    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        let mut seen: Vec<Variable> = self
            .terms
            .keys()
            .flat_map(|m| m.variables().collect::<Vec<_>>())
            .collect();
        seen.sort();
        seen.dedup();
        seen.into_iter()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut result = Polynomial::one();
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. Uses leading-term reduction, which terminates because the
    /// monomial order is a well-order.
    pub fn try_exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&(Rational::one() / c)));
        }
        let (dm, dc) = divisor.leading_term().unwrap();
        let mut rem = self.clone();
        let mut quotient = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.try_div(dm)?;
            let qc = rc / dc;
            // rem -= (qc * qm) * divisor, in place
            for (m, c) in &divisor.terms {
                rem.add_term(qm.mul(m), -(&qc * c));
            }
            quotient.add_term(qm, qc);
        }
        Some(quotient)
    }

    /// Exact division, erroring when `divisor` does not divide `self`.
    /// A `NotDivisible` escaping fraction-free elimination signals a bug.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial, SymAlgError> {
        self.try_exact_div(divisor).ok_or(SymAlgError::NotDivisible)
    }

    /// Formal partial derivative with respect to `v`.
    pub fn derivative(&self, v: Variable) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            if let Some((k, dm)) = m.derivative(v) {
                out.add_term(dm, c * &k);
            }
        }
        out
    }

    /// Evaluates at a rational point. Every variable occurring in the
    /// polynomial must be assigned.
    pub fn eval(&self, assignment: &BTreeMap<Variable, Rational>) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.iter() {
                let val = assignment
                    .get(&var)
                    .unwrap_or_else(|| panic!("unassigned variable {var}"));
                for _ in 0..e {
                    v *= val;
                }
            }
            total += v;
        }
        total
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        if rhs.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        if rhs.is_zero() {
            return self.clone();
        }
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some(c) = self.as_constant() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.as_constant() {
            return self.scale(&c);
        }
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl From<Variable> for Polynomial {
    fn from(v: Variable) -> Self {
        Polynomial::var(v)
    }
}

impl From<Rational> for Polynomial {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, j: usize) -> Polynomial {
        Polynomial::var(Variable::x(i, j))
    }

    fn y(j: usize, i: usize) -> Polynomial {
        Polynomial::var(Variable::y(j, i))
    }

    #[test]
    fn additive_inverse_cancels() {
        let p = x(1, 1);
        let sum = &p + &(-&p);
        assert!(sum.is_zero());
    }

    #[test]
    fn difference_of_squares() {
        let prod = &(&x(1, 1) + &x(1, 2)) * &(&x(1, 1) - &x(1, 2));
        let expected = &(&x(1, 1) * &x(1, 1)) - &(&x(1, 2) * &x(1, 2));
        assert_eq!(prod, expected);
    }

    #[test]
    fn base_point_satisfies_defining_equation() {
        // x11*y11 + x12*y21 - 1 vanishes at X0 = (1, 0), Y0 = (1, 0)^T.
        let eq = &(&(&x(1, 1) * &y(1, 1)) + &(&x(1, 2) * &y(2, 1))) - &Polynomial::one();
        let mut point = BTreeMap::new();
        point.insert(Variable::x(1, 1), Rational::one());
        point.insert(Variable::x(1, 2), Rational::zero());
        point.insert(Variable::y(1, 1), Rational::one());
        point.insert(Variable::y(2, 1), Rational::zero());
        assert!(eq.eval(&point).is_zero());
    }

    #[test]
    fn exact_div_difference_of_squares() {
        let a = &(&x(1, 1) * &x(1, 1)) - &(&x(1, 2) * &x(1, 2));
        let b = &x(1, 1) - &x(1, 2);
        let q = a.exact_div(&b).unwrap();
        assert_eq!(q, &x(1, 1) + &x(1, 2));
    }

    #[test]
    fn exact_div_by_one_is_identity() {
        let a = &(&x(1, 1) * &y(2, 1)) + &Polynomial::from_integer(7);
        assert_eq!(a.exact_div(&Polynomial::one()).unwrap(), a);
    }

    #[test]
    fn exact_div_detects_remainder() {
        let a = &x(1, 1) + &Polynomial::one();
        let b = x(1, 2);
        assert_eq!(a.exact_div(&b), Err(SymAlgError::NotDivisible));
    }

    #[test]
    fn derivative_of_product_term() {
        let p = &x(1, 1) * &y(2, 1);
        assert_eq!(p.derivative(Variable::y(2, 1)), x(1, 1));
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert!(Polynomial::from_integer(42).derivative(Variable::x(1, 1)).is_zero());
    }

    #[test]
    fn derivative_product_rule() {
        let p = &x(1, 1) + &y(1, 1);
        let q = &(&x(1, 1) * &x(1, 1)) + &y(2, 1);
        let v = Variable::x(1, 1);
        let lhs = (&p * &q).derivative(v);
        let rhs = &(&p.derivative(v) * &q) + &(&p * &q.derivative(v));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn mixed_partials_commute() {
        let p = &(&x(1, 1) * &y(1, 1)) * &(&x(1, 2) + &y(1, 1));
        let (u, v) = (Variable::x(1, 1), Variable::y(1, 1));
        assert_eq!(p.derivative(u).derivative(v), p.derivative(v).derivative(u));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let p = &x(1, 1) + &Polynomial::one();
        let mut q = Polynomial::one();
        for _ in 0..5 {
            q = &q * &p;
        }
        assert_eq!(p.pow(5), q);
        assert_eq!(p.pow(0), Polynomial::one());
    }
}
