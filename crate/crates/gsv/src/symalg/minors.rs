use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use super::polynomial::Polynomial;
use super::variable::Variable;
use super::{Rational, SymAlgError};

/// A set of `r` distinct column indices of the generic X matrix, stored
/// sorted. Index sets label the minors that cut out the affine charts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Builds an index set, sorting the input; indices must be 1-based and
    /// pairwise distinct.
    pub fn new(mut indices: Vec<usize>) -> Result<Self, SymAlgError> {
        indices.sort_unstable();
        if indices.is_empty() || indices[0] == 0 || indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(SymAlgError::InvalidIndexSet);
        }
        Ok(IndexSet { indices })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, idx: usize) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn max(&self) -> usize {
        *self.indices.last().unwrap()
    }

    /// The complementary indices within `1..=s`, in increasing order.
    pub fn complement(&self, s: usize) -> Vec<usize> {
        (1..=s).filter(|i| !self.contains(*i)).collect()
    }

    /// All `r`-element subsets of `{1..s}` in lexicographic order.
    pub fn all(s: usize, r: usize) -> Vec<IndexSet> {
        (1..=s)
            .combinations(r)
            .map(|v| IndexSet { indices: v })
            .collect()
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.indices.iter().join(","))
    }
}

/// The minor of the generic X matrix on columns `set`: the determinant of
/// the `r x r` submatrix with rows `1..=r` and the given columns, expanded
/// by the Leibniz sum. Cardinality of the set fixes `r`.
pub fn minor_poly(set: &IndexSet) -> Polynomial {
    let r = set.len();
    let cols = set.indices();
    let mut terms = Vec::new();
    for perm in (0..r).permutations(r) {
        let sign = permutation_sign(&perm);
        let mono = super::monomial::Monomial::from_pairs(
            (0..r).map(|i| (Variable::x(i + 1, cols[perm[i]]), 1)),
        );
        terms.push((mono, Rational::from_integer(sign.into())));
    }
    Polynomial::from_terms(terms)
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inversions = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 { 1 } else { -1 }
}

/// Tries to write `p` as `c * prod_I minor_I^{e_I}` with `c` a nonzero
/// rational. Candidate index sets are read off the X-variables of `p`: the
/// largest row index fixes the cardinality, the occurring columns the pool.
///
/// Returns the constant and the exponent map, or `None` when `p` is not of
/// that shape (in particular when any Y-variable occurs).
pub fn factor_minor_product(p: &Polynomial) -> Option<(Rational, BTreeMap<IndexSet, u32>)> {
    if p.is_zero() {
        return None;
    }
    if let Some(c) = p.as_constant() {
        return Some((c, BTreeMap::new()));
    }
    let vars: Vec<Variable> = p.variables().collect();
    if vars.iter().any(|v| !v.is_x()) {
        return None;
    }
    let r = vars.iter().map(|v| v.row).max().unwrap();
    let cols: Vec<usize> = vars.iter().map(|v| v.col).sorted().dedup().collect();
    if cols.len() < r {
        return None;
    }
    let mut rem = p.clone();
    let mut exponents = BTreeMap::new();
    for cand in cols.into_iter().combinations(r) {
        let set = IndexSet::new(cand).expect("distinct sorted columns");
        let minor = minor_poly(&set);
        let mut e = 0u32;
        while let Some(q) = rem.try_exact_div(&minor) {
            rem = q;
            e += 1;
        }
        if e > 0 {
            exponents.insert(set, e);
        }
    }
    rem.as_constant().map(|c| (c, exponents))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xv(i: usize, j: usize) -> Polynomial {
        Polynomial::var(Variable::x(i, j))
    }

    #[test]
    fn index_set_sorts_and_rejects_duplicates() {
        let set = IndexSet::new(vec![3, 1]).unwrap();
        assert_eq!(set.indices(), &[1, 3]);
        assert!(IndexSet::new(vec![2, 2]).is_err());
        assert!(IndexSet::new(vec![]).is_err());
        assert!(IndexSet::new(vec![0, 1]).is_err());
    }

    #[test]
    fn all_subsets_lexicographic() {
        let sets = IndexSet::all(3, 2);
        let displayed: Vec<String> = sets.iter().map(|s| s.to_string()).collect();
        assert_eq!(displayed, ["{1,2}", "{1,3}", "{2,3}"]);
    }

    #[test]
    fn single_column_minor_is_the_variable() {
        let set = IndexSet::new(vec![2]).unwrap();
        assert_eq!(minor_poly(&set), xv(1, 2));
    }

    #[test]
    fn two_by_two_minor_expands() {
        let set = IndexSet::new(vec![1, 2]).unwrap();
        let expected = &(&xv(1, 1) * &xv(2, 2)) - &(&xv(1, 2) * &xv(2, 1));
        assert_eq!(minor_poly(&set), expected);
    }

    #[test]
    fn factor_recognizes_scaled_minor_power() {
        let set = IndexSet::new(vec![1, 2]).unwrap();
        let minor = minor_poly(&set);
        let p = (&minor * &minor).scale(&Rational::new(3.into(), 2.into()));
        let (c, exps) = factor_minor_product(&p).unwrap();
        assert_eq!(c, Rational::new(3.into(), 2.into()));
        assert_eq!(exps.get(&set), Some(&2));
    }

    #[test]
    fn factor_rejects_non_products() {
        let p = &xv(1, 1) + &Polynomial::one();
        assert!(factor_minor_product(&p).is_none());
        let q = Polynomial::var(Variable::y(1, 1));
        assert!(factor_minor_product(&q).is_none());
    }
}
