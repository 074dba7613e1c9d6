use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::minors::{factor_minor_product, minor_poly, IndexSet};
use super::polynomial::Polynomial;
use super::variable::Variable;
use super::{Rational, SymAlgError};

/// An element of the coordinate ring localized at the chart minors: a
/// polynomial numerator over a formal product of minor powers.
///
/// The denominator is stored as exponents keyed by minor index sets, never
/// expanded unless needed, and equality is decided by cross-multiplication.
/// Since distinct minors of the generic matrix are distinct irreducible
/// polynomials, greedy cancellation after each operation yields a canonical
/// reduced form without a general gcd.
#[derive(Debug, Clone, Eq)]
pub struct LocalizedElement {
    numerator: Polynomial,
    denominator: BTreeMap<IndexSet, u32>,
}

impl LocalizedElement {
    pub fn new(numerator: Polynomial, denominator: BTreeMap<IndexSet, u32>) -> Self {
        let mut el = LocalizedElement { numerator, denominator };
        el.normalize();
        el
    }

    pub fn zero() -> Self {
        Polynomial::zero().into()
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    /// Denominator exponents by minor index set.
    pub fn denominator_factors(&self) -> &BTreeMap<IndexSet, u32> {
        &self.denominator
    }

    /// The denominator expanded to a polynomial.
    pub fn denominator_poly(&self) -> Polynomial {
        expand(&self.denominator)
    }

    /// The underlying polynomial, when the denominator is trivial.
    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.denominator.is_empty().then_some(&self.numerator)
    }

    /// The underlying rational constant, if the element is one.
    pub fn as_rational(&self) -> Option<Rational> {
        self.denominator.is_empty().then(|| self.numerator.as_constant()).flatten()
    }

    /// Cancels minors dividing the numerator and drops zero exponents.
    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.denominator.clear();
            return;
        }
        self.denominator.retain(|_, e| *e > 0);
        let sets: Vec<IndexSet> = self.denominator.keys().cloned().collect();
        for set in sets {
            let minor = minor_poly(&set);
            let e = self.denominator.get_mut(&set).unwrap();
            while *e > 0 {
                match self.numerator.try_exact_div(&minor) {
                    Some(q) => {
                        self.numerator = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
            if *e == 0 {
                self.denominator.remove(&set);
            }
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let den = self.denominator.iter().map(|(s, e)| (s.clone(), e * n)).collect();
        LocalizedElement::new(self.numerator.pow(n), den)
    }

    /// Exact division. The divisor's numerator must be a rational multiple
    /// of a product of minor powers, otherwise the quotient would leave the
    /// localized ring.
    pub fn div(&self, rhs: &Self) -> Result<Self, SymAlgError> {
        if rhs.is_zero() {
            return Err(SymAlgError::DivisionByZero);
        }
        let (c, extra) =
            factor_minor_product(&rhs.numerator).ok_or(SymAlgError::NonMinorDenominator)?;
        let mut num = self.numerator.scale(&(Rational::one() / c));
        num = &num * &expand(&rhs.denominator);
        let mut den = self.denominator.clone();
        for (set, e) in extra {
            *den.entry(set).or_insert(0) += e;
        }
        Ok(LocalizedElement::new(num, den))
    }

    /// Quotient-rule formal partial derivative.
    pub fn derivative(&self, v: Variable) -> Self {
        let dnum = self.numerator.derivative(v);
        if self.denominator.is_empty() {
            return dnum.into();
        }
        // (n/Пm^e)' = (n'·Пm − n·Σ e_I m_I'·П_{K≠I} m_K) / Пm^{e+1}
        let product = expand_once(&self.denominator);
        let mut lhs = &dnum * &product;
        for (set, &e) in &self.denominator {
            let dminor = minor_poly(set).derivative(v);
            if dminor.is_zero() {
                continue;
            }
            let others: BTreeMap<IndexSet, u32> = self
                .denominator
                .keys()
                .filter(|k| *k != set)
                .map(|k| (k.clone(), 1))
                .collect();
            let term = &(&self.numerator * &dminor).scale(&Rational::from_integer(e.into()))
                * &expand(&others);
            lhs = &lhs - &term;
        }
        let den = self.denominator.iter().map(|(s, e)| (s.clone(), e + 1)).collect();
        LocalizedElement::new(lhs, den)
    }

    /// Evaluates at a rational point; the point must avoid the zero locus of
    /// every denominator minor.
    pub fn eval(&self, assignment: &BTreeMap<Variable, Rational>) -> Result<Rational, SymAlgError> {
        let mut value = self.numerator.eval(assignment);
        for (set, &e) in &self.denominator {
            let m = minor_poly(set).eval(assignment);
            if m.is_zero() {
                return Err(SymAlgError::DenominatorVanishes(set.clone()));
            }
            for _ in 0..e {
                value /= &m;
            }
        }
        Ok(value)
    }
}

/// Expands an exponent map to the product polynomial.
fn expand(factors: &BTreeMap<IndexSet, u32>) -> Polynomial {
    let mut p = Polynomial::one();
    for (set, &e) in factors {
        p = &p * &minor_poly(set).pow(e);
    }
    p
}

/// Product of the distinct minors of an exponent map, each to the first power.
fn expand_once(factors: &BTreeMap<IndexSet, u32>) -> Polynomial {
    let mut p = Polynomial::one();
    for set in factors.keys() {
        p = &p * &minor_poly(set);
    }
    p
}

/// Brings two elements over their least common denominator: returns the
/// cross-multiplied numerators and the common exponent map.
fn over_common_denominator(
    a: &LocalizedElement,
    b: &LocalizedElement,
) -> (Polynomial, Polynomial, BTreeMap<IndexSet, u32>) {
    let mut common: BTreeMap<IndexSet, u32> = a.denominator.clone();
    for (set, &e) in &b.denominator {
        let entry = common.entry(set.clone()).or_insert(0);
        *entry = (*entry).max(e);
    }
    let scale = |el: &LocalizedElement| -> Polynomial {
        let extra: BTreeMap<IndexSet, u32> = common
            .iter()
            .map(|(s, &e)| (s.clone(), e - el.denominator.get(s).copied().unwrap_or(0)))
            .filter(|(_, e)| *e > 0)
            .collect();
        &el.numerator * &expand(&extra)
    };
    (scale(a), scale(b), common)
}

/// Equality by exact cross-multiplication over the common denominator.
impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        let (lhs, rhs, _) = over_common_denominator(self, other);
        lhs == rhs
    }
}

impl Add for &LocalizedElement {
    type Output = LocalizedElement;
    fn add(self, rhs: Self) -> LocalizedElement {
        let (a, b, common) = over_common_denominator(self, rhs);
        LocalizedElement::new(&a + &b, common)
    }
}

impl Sub for &LocalizedElement {
    type Output = LocalizedElement;
    fn sub(self, rhs: Self) -> LocalizedElement {
        self + &(-rhs)
    }
}

impl Mul for &LocalizedElement {
    type Output = LocalizedElement;
    fn mul(self, rhs: Self) -> LocalizedElement {
        let mut den = self.denominator.clone();
        for (set, &e) in &rhs.denominator {
            *den.entry(set.clone()).or_insert(0) += e;
        }
        LocalizedElement::new(&self.numerator * &rhs.numerator, den)
    }
}

impl Neg for &LocalizedElement {
    type Output = LocalizedElement;
    fn neg(self) -> LocalizedElement {
        LocalizedElement {
            numerator: -&self.numerator,
            denominator: self.denominator.clone(),
        }
    }
}

impl From<Polynomial> for LocalizedElement {
    fn from(numerator: Polynomial) -> Self {
        LocalizedElement { numerator, denominator: BTreeMap::new() }
    }
}

impl From<Rational> for LocalizedElement {
    fn from(c: Rational) -> Self {
        Polynomial::constant(c).into()
    }
}

impl From<Variable> for LocalizedElement {
    fn from(v: Variable) -> Self {
        Polynomial::var(v).into()
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator.is_empty() {
            return write!(f, "{}", self.numerator);
        }
        if self.numerator.num_terms() > 1 {
            write!(f, "({})", self.numerator)?;
        } else {
            write!(f, "{}", self.numerator)?;
        }
        write!(f, "/")?;
        for (i, (set, &e)) in self.denominator.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            let minor = minor_poly(set);
            if minor.num_terms() > 1 {
                write!(f, "({minor})")?;
            } else {
                write!(f, "{minor}")?;
            }
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Polynomial {
    /// Substitutes localized expressions for variables; variables absent
    /// from the map stay themselves.
    pub fn substitute(&self, map: &BTreeMap<Variable, LocalizedElement>) -> LocalizedElement {
        let mut total = LocalizedElement::zero();
        for (mono, coeff) in self.terms() {
            let mut term: LocalizedElement = Polynomial::constant(coeff.clone()).into();
            for (v, e) in mono.iter() {
                let base = match map.get(&v) {
                    Some(el) => el.clone(),
                    None => v.into(),
                };
                term = &term * &base.pow(e);
            }
            total = &total + &term;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xp(i: usize, j: usize) -> Polynomial {
        Polynomial::var(Variable::x(i, j))
    }

    fn yp(j: usize, i: usize) -> Polynomial {
        Polynomial::var(Variable::y(j, i))
    }

    fn set(indices: &[usize]) -> IndexSet {
        IndexSet::new(indices.to_vec()).unwrap()
    }

    /// (1 - x12*y21)/x11, the solved expression of the first chart at r=1, s=2.
    fn solved_r1s2() -> LocalizedElement {
        let num = &Polynomial::one() - &(&xp(1, 2) * &yp(2, 1));
        LocalizedElement::new(num, BTreeMap::from([(set(&[1]), 1)]))
    }

    #[test]
    fn subtraction_of_self_is_zero() {
        let a = solved_r1s2();
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplying_by_denominator_cancels() {
        let a = solved_r1s2();
        let x11: LocalizedElement = xp(1, 1).into();
        let prod = &a * &x11;
        let expected: LocalizedElement = (&Polynomial::one() - &(&xp(1, 2) * &yp(2, 1))).into();
        assert_eq!(prod, expected);
        assert!(prod.denominator_factors().is_empty());
    }

    #[test]
    fn gluing_product_is_minus_one() {
        // (-x12/x11) * (x11/x12) = -1, the r=1,s=2 gluing computation.
        let a = LocalizedElement::new(-&xp(1, 2), BTreeMap::from([(set(&[1]), 1)]));
        let b = LocalizedElement::new(xp(1, 1), BTreeMap::from([(set(&[2]), 1)]));
        let prod = &a * &b;
        assert_eq!(prod, Rational::from_integer((-1).into()).into());
    }

    #[test]
    fn division_by_minor_product_stays_in_ring() {
        let a = solved_r1s2();
        let x11: LocalizedElement = xp(1, 1).into();
        let quotient = a.div(&x11).unwrap();
        assert_eq!(quotient.denominator_factors().get(&set(&[1])), Some(&2));
    }

    #[test]
    fn division_by_general_polynomial_is_rejected() {
        let a = LocalizedElement::one();
        let b: LocalizedElement = (&xp(1, 1) + &Polynomial::one()).into();
        assert_eq!(a.div(&b), Err(SymAlgError::NonMinorDenominator));
    }

    #[test]
    fn quotient_rule_derivative() {
        // d/dx11 of (1 - x12*y21)/x11 = -(1 - x12*y21)/x11^2
        let a = solved_r1s2();
        let d = a.derivative(Variable::x(1, 1));
        let expected = LocalizedElement::new(
            -&(&Polynomial::one() - &(&xp(1, 2) * &yp(2, 1))),
            BTreeMap::from([(set(&[1]), 2)]),
        );
        assert_eq!(d, expected);
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let a = solved_r1s2();
        let cubed = &(&a * &a) * &a;
        assert_eq!(a.pow(3), cubed);
        assert_eq!(a.pow(0), LocalizedElement::one());
    }

    #[test]
    fn eval_matches_numerator_over_denominator() {
        let a = solved_r1s2();
        let assignment = BTreeMap::from([
            (Variable::x(1, 1), Rational::new(2.into(), 3.into())),
            (Variable::x(1, 2), Rational::new(5.into(), 7.into())),
            (Variable::y(2, 1), Rational::new((-1).into(), 4.into())),
        ]);
        let direct = a.eval(&assignment).unwrap();
        let num = a.numerator().eval(&assignment);
        let den = a.denominator_poly().eval(&assignment);
        assert_eq!(direct, num / den);
    }

    #[test]
    fn eval_rejects_vanishing_denominator() {
        let a = solved_r1s2();
        let assignment = BTreeMap::from([
            (Variable::x(1, 1), Rational::zero()),
            (Variable::x(1, 2), Rational::one()),
            (Variable::y(2, 1), Rational::one()),
        ]);
        assert!(matches!(a.eval(&assignment), Err(SymAlgError::DenominatorVanishes(_))));
    }

    #[test]
    fn substitute_solved_expression_kills_defining_equation() {
        // x11*y11 + x12*y21 - 1 with y11 -> (1 - x12*y21)/x11 vanishes.
        let eq = &(&(&xp(1, 1) * &yp(1, 1)) + &(&xp(1, 2) * &yp(2, 1))) - &Polynomial::one();
        let map = BTreeMap::from([(Variable::y(1, 1), solved_r1s2())]);
        assert!(eq.substitute(&map).is_zero());
    }
}
