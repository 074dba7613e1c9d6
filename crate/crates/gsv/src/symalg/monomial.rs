use std::cmp::Ordering;
use std::fmt;

use super::variable::Variable;
use super::Rational;

/// A power product of variables, stored sparsely as `(variable, exponent)`
/// pairs sorted by the global variable order. Zero exponents are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<(Variable, u32)>,
}

impl Monomial {
    /// The empty power product (the monomial `1`).
    pub fn one() -> Self {
        Monomial { exponents: Vec::new() }
    }

    /// A single variable to the first power.
    pub fn var(v: Variable) -> Self {
        Monomial { exponents: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs,
    /// merging duplicates and dropping zero exponents.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Variable, u32)>) -> Self {
        let mut exps: Vec<(Variable, u32)> = Vec::new();
        for (v, e) in pairs {
            if e == 0 {
                continue;
            }
            match exps.binary_search_by_key(&v, |&(w, _)| w) {
                Ok(i) => exps[i].1 += e,
                Err(i) => exps.insert(i, (v, e)),
            }
        }
        Monomial { exponents: exps }
    }

    pub fn is_one(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.exponents.iter().map(|&(_, e)| e).sum()
    }

    pub fn exponent_of(&self, v: Variable) -> u32 {
        self.exponents
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.exponents[i].1)
            .unwrap_or(0)
    }

    /// Iterates `(variable, exponent)` pairs in ascending variable order.
    pub fn iter(&self) -> impl Iterator<Item = (Variable, u32)> + '_ {
        self.exponents.iter().copied()
    }

    /// All variables occurring with positive exponent.
    pub fn variables(&self) -> impl Iterator<Item = Variable> + '_ {
        self.exponents.iter().map(|&(v, _)| v)
    }

    /// Product of two monomials: exponents add.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut exps = Vec::with_capacity(self.exponents.len() + other.exponents.len());
        let (mut a, mut b) = (self.exponents.iter().peekable(), other.exponents.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    Ordering::Less => {
                        exps.push((va, ea));
                        a.next();
                    }
                    Ordering::Greater => {
                        exps.push((vb, eb));
                        b.next();
                    }
                    Ordering::Equal => {
                        exps.push((va, ea + eb));
                        a.next();
                        b.next();
                    }
                },
                (Some(&&p), None) => {
                    exps.push(p);
                    a.next();
                }
                (None, Some(&&p)) => {
                    exps.push(p);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { exponents: exps }
    }

    /// Exact quotient, or `None` when some exponent of `other` exceeds ours.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut exps = self.exponents.clone();
        for &(v, e) in &other.exponents {
            let i = exps.binary_search_by_key(&v, |&(w, _)| w).ok()?;
            if exps[i].1 < e {
                return None;
            }
            exps[i].1 -= e;
        }
        exps.retain(|&(_, e)| e > 0);
        Some(Monomial { exponents: exps })
    }

    /// Formal partial derivative: returns `(coefficient, monomial)` of
    /// `d(self)/dv`, or `None` when `v` does not occur.
    pub fn derivative(&self, v: Variable) -> Option<(Rational, Monomial)> {
        let i = self.exponents.binary_search_by_key(&v, |&(w, _)| w).ok()?;
        let e = self.exponents[i].1;
        let mut exps = self.exponents.clone();
        if e == 1 {
            exps.remove(i);
        } else {
            exps[i].1 = e - 1;
        }
        Some((Rational::from_integer(e.into()), Monomial { exponents: exps }))
    }
}

/// Graded lexicographic order: total degree first, then lexicographic with
/// earlier variables in the global order more significant.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.total_degree().cmp(&other.total_degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // Walk variables in ascending global order; the first position where
        // the exponents differ decides, larger exponent wins.
        let (mut a, mut b) = (self.exponents.iter().peekable(), other.exponents.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(&&(va, ea)), Some(&&(vb, eb))) => match va.cmp(&vb) {
                    // `self` has a positive exponent on an earlier variable.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        match ea.cmp(&eb) {
                            Ordering::Equal => {}
                            ord => return ord,
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (None, None) => return Ordering::Equal,
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        for (i, (v, e)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
