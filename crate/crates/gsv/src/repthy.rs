//! The group-theoretic layer: the `GL(r) x GL(s)` action, base point and
//! stabilizer, constructive orbit witnesses, Weyl-group action, torus
//! characters, and the zero-sum certificate for the canonical weight.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::symalg::{Rational, Variable};
use crate::symmat::QMatrix;
use crate::variety::{chart_atlas, contains, GSVSpec, Point, VarietyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RepthyError {
    #[error("group element shapes do not match the spec")]
    ShapeMismatch,
    #[error("group element has a singular factor")]
    SingularGroupElement,
    #[error("point does not satisfy X*Y = I")]
    NotOnVariety,
    #[error("orbit witness complement [Y|Z] is singular")]
    DegenerateComplement,
    #[error("permutation is not a bijection")]
    InvalidPermutation,
    #[error("tangent weights sum to a nonzero character")]
    NonTrivialCanonicalWeight,
    #[error("a canonical form carries a nonzero torus weight on chart {0}")]
    NonTrivialSigmaWeight(String),
}

impl From<VarietyError> for RepthyError {
    fn from(e: VarietyError) -> Self {
        match e {
            VarietyError::NotOnVariety => RepthyError::NotOnVariety,
            _ => RepthyError::ShapeMismatch,
        }
    }
}

/// An element `(A, B)` of `GL(r) x GL(s)`; both factors are checked to be
/// invertible at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    a: QMatrix,
    b: QMatrix,
}

impl GroupElement {
    pub fn new(a: QMatrix, b: QMatrix) -> Result<Self, RepthyError> {
        if a.rows() != a.cols() || b.rows() != b.cols() {
            return Err(RepthyError::ShapeMismatch);
        }
        if a.inverse().is_none() || b.inverse().is_none() {
            return Err(RepthyError::SingularGroupElement);
        }
        Ok(GroupElement { a, b })
    }

    pub fn identity(spec: &GSVSpec) -> Self {
        GroupElement { a: QMatrix::identity(spec.r()), b: QMatrix::identity(spec.s()) }
    }

    pub fn a(&self) -> &QMatrix {
        &self.a
    }

    pub fn b(&self) -> &QMatrix {
        &self.b
    }

    /// Group multiplication `(A1*A2, B1*B2)`.
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { a: &self.a * &other.a, b: &self.b * &other.b }
    }
}

/// The action `X -> A X B^{-1}`, `Y -> B Y A^{-1}`. It preserves membership:
/// `(A X B^{-1})(B Y A^{-1}) = A (X Y) A^{-1} = I` whenever `X Y = I`.
pub fn act(g: &GroupElement, p: &Point) -> Result<Point, RepthyError> {
    if g.a.rows() != p.x.rows() || g.b.rows() != p.x.cols() {
        return Err(RepthyError::ShapeMismatch);
    }
    let a_inv = g.a.inverse().expect("checked at construction");
    let b_inv = g.b.inverse().expect("checked at construction");
    Ok(Point::new(&(&g.a * &p.x) * &b_inv, &(&g.b * &p.y) * &a_inv))
}

/// The base point `v = (X0, Y0)` with `X0 = [I_r | 0]` and `Y0 = [I_r; 0]`.
pub fn base_point(spec: &GSVSpec) -> Point {
    let (r, s) = (spec.r(), spec.s());
    let delta = |i: usize, j: usize| if i == j { Rational::one() } else { Rational::zero() };
    Point::new(QMatrix::from_fn(r, s, delta), QMatrix::from_fn(s, r, delta))
}

/// Membership in `H = Stab(v)`: true iff `act(g, v) = v`, equivalently iff
/// `B` has the block form `[[A, 0], [0, D]]`. Both characterizations are
/// computed and must agree.
pub fn in_stabilizer(spec: &GSVSpec, g: &GroupElement) -> Result<bool, RepthyError> {
    let (r, s) = (spec.r(), spec.s());
    if g.a.rows() != r || g.b.rows() != s {
        return Err(RepthyError::ShapeMismatch);
    }
    let v = base_point(spec);
    let fixes = act(g, &v)? == v;
    let mut block_form = true;
    for i in 0..s {
        for j in 0..s {
            let entry = g.b.at(i, j);
            let expected_zero = (i < r) != (j < r);
            if expected_zero && !entry.is_zero() {
                block_form = false;
            }
            if i < r && j < r && entry != g.a.at(i, j) {
                block_form = false;
            }
        }
    }
    assert_eq!(fixes, block_form, "stabilizer characterizations must coincide");
    Ok(fixes)
}

/// Constructs `g = (I_r, [Y | Z])` with `act(g, v) = p`, where the columns
/// of `Z` form the kernel basis of `X`. Since `X*Y = I` and `X*Z = 0`, the
/// first `r` rows of `B^{-1}` are exactly `X`, so the witness maps the base
/// point onto `p`. The postcondition is verified by exact multiplication.
pub fn orbit_witness(spec: &GSVSpec, p: &Point) -> Result<GroupElement, RepthyError> {
    if !contains(spec, p)? {
        return Err(RepthyError::NotOnVariety);
    }
    let kernel = p.x.kernel_basis();
    let mut b = p.y.clone();
    for vec in &kernel {
        let col = QMatrix::from_rows(vec![vec.clone()]).expect("kernel vector").transpose();
        b = b.hstack(&col).expect("row counts agree");
    }
    let g = GroupElement::new(QMatrix::identity(spec.r()), b)
        .map_err(|_| RepthyError::DegenerateComplement)?;
    let image = act(&g, &base_point(spec))?;
    assert_eq!(&image, p, "orbit witness must reproduce the point exactly");
    Ok(g)
}

/// A Weyl-group element: a pair of permutations acting on row/column
/// indices. Stored 0-based; `sigma` permutes `{0..r-1}`, `tau` `{0..s-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

impl WeylElement {
    pub fn new(sigma: Vec<usize>, tau: Vec<usize>) -> Result<Self, RepthyError> {
        if !is_permutation(&sigma) || !is_permutation(&tau) {
            return Err(RepthyError::InvalidPermutation);
        }
        Ok(WeylElement { sigma, tau })
    }

    pub fn identity(spec: &GSVSpec) -> Self {
        WeylElement { sigma: (0..spec.r()).collect(), tau: (0..spec.s()).collect() }
    }

    /// The permutation matrix pair `(P_sigma, P_tau)` as a group element,
    /// with `P[i][j] = 1` iff `i = perm(j)`.
    pub fn to_group_element(&self) -> GroupElement {
        GroupElement {
            a: permutation_matrix(&self.sigma),
            b: permutation_matrix(&self.tau),
        }
    }
}

fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &i in perm {
        if i >= perm.len() || seen[i] {
            return false;
        }
        seen[i] = true;
    }
    true
}

fn permutation_matrix(perm: &[usize]) -> QMatrix {
    QMatrix::from_fn(perm.len(), perm.len(), |i, j| {
        if i == perm[j] { Rational::one() } else { Rational::zero() }
    })
}

/// The Weyl action: `sigma` permutes the rows of X (sending row `k` to row
/// `sigma(k)`) and the columns of Y; `tau` permutes the columns of X and the
/// rows of Y. Coincides with `act` on the permutation matrix pair.
pub fn weyl_act(w: &WeylElement, p: &Point) -> Result<Point, RepthyError> {
    if w.sigma.len() != p.x.rows() || w.tau.len() != p.x.cols() {
        return Err(RepthyError::ShapeMismatch);
    }
    let sigma_inv = invert_permutation(&w.sigma);
    let tau_inv = invert_permutation(&w.tau);
    let x = QMatrix::from_fn(p.x.rows(), p.x.cols(), |i, j| {
        p.x.at(sigma_inv[i], tau_inv[j]).clone()
    });
    let y = QMatrix::from_fn(p.y.rows(), p.y.cols(), |j, i| {
        p.y.at(tau_inv[j], sigma_inv[i]).clone()
    });
    Ok(Point::new(x, y))
}

fn invert_permutation(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// A character of the maximal torus of `GL(r) x GL(s)`, written additively:
/// `alpha` holds the exponents of `a_1..a_r`, `beta` of `b_1..b_s`.
/// "Weight 1" is the zero vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Character {
    pub alpha: Vec<i64>,
    pub beta: Vec<i64>,
}

impl Character {
    pub fn zero(spec: &GSVSpec) -> Self {
        Character { alpha: vec![0; spec.r()], beta: vec![0; spec.s()] }
    }

    pub fn add(&self, other: &Character) -> Character {
        Character {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            beta: self.beta.iter().zip(&other.beta).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0) && self.beta.iter().all(|&b| b == 0)
    }
}

/// A character of the restricted torus `T_H` (the diagonal torus compatible
/// with the stabilizer, `b_i = a_i` for `i <= r`): `alpha` of length `r`,
/// `delta` of length `s - r` for the remaining diagonal entries.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RestrictedCharacter {
    pub alpha: Vec<i64>,
    pub delta: Vec<i64>,
}

impl RestrictedCharacter {
    pub fn zero(spec: &GSVSpec) -> Self {
        RestrictedCharacter { alpha: vec![0; spec.r()], delta: vec![0; spec.s() - spec.r()] }
    }

    pub fn add(&self, other: &RestrictedCharacter) -> RestrictedCharacter {
        RestrictedCharacter {
            alpha: self.alpha.iter().zip(&other.alpha).map(|(a, b)| a + b).collect(),
            delta: self.delta.iter().zip(&other.delta).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(&self) -> RestrictedCharacter {
        RestrictedCharacter {
            alpha: self.alpha.iter().map(|&a| -a).collect(),
            delta: self.delta.iter().map(|&d| -d).collect(),
        }
    }

    pub fn scale(&self, n: i64) -> RestrictedCharacter {
        RestrictedCharacter {
            alpha: self.alpha.iter().map(|&a| n * a).collect(),
            delta: self.delta.iter().map(|&d| n * d).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.iter().all(|&a| a == 0) && self.delta.iter().all(|&d| d == 0)
    }

    /// Flat integer vector `alpha ++ delta`, the JSON form.
    pub fn concat(&self) -> Vec<i64> {
        self.alpha.iter().chain(self.delta.iter()).copied().collect()
    }
}

impl fmt::Display for RestrictedCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(alpha {:?}, delta {:?})", self.alpha, self.delta)
    }
}

/// The weight of a coordinate under the maximal torus: `x_{ij}` scales by
/// `a_i / b_j`, `y_{ji}` by `b_j / a_i`.
pub fn coordinate_weight(spec: &GSVSpec, v: Variable) -> Character {
    let mut c = Character::zero(spec);
    match v.kind {
        crate::symalg::VarKind::X => {
            c.alpha[v.row - 1] += 1;
            c.beta[v.col - 1] -= 1;
        }
        crate::symalg::VarKind::Y => {
            c.alpha[v.col - 1] -= 1;
            c.beta[v.row - 1] += 1;
        }
    }
    c
}

/// Restriction to `T_H`: fold `beta_i` into `alpha_i` for `i <= r`, rename
/// the trailing `beta` entries to `delta`.
pub fn restrict(spec: &GSVSpec, c: &Character) -> RestrictedCharacter {
    let r = spec.r();
    RestrictedCharacter {
        alpha: (0..r).map(|i| c.alpha[i] + c.beta[i]).collect(),
        delta: c.beta[r..].to_vec(),
    }
}

/// A multiset of restricted characters, the `T_H`-weights of a module.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightMultiset {
    counts: BTreeMap<RestrictedCharacter, usize>,
}

impl WeightMultiset {
    pub fn insert(&mut self, c: RestrictedCharacter) {
        *self.counts.entry(c).or_insert(0) += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn multiplicity(&self, c: &RestrictedCharacter) -> usize {
        self.counts.get(c).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&RestrictedCharacter, usize)> {
        self.counts.iter().map(|(c, &n)| (c, n))
    }

    /// Sum of all members with multiplicity.
    pub fn character_sum(&self, spec: &GSVSpec) -> RestrictedCharacter {
        let mut sum = RestrictedCharacter::zero(spec);
        for (c, n) in self.iter() {
            sum = sum.add(&c.scale(n as i64));
        }
        sum
    }

    /// True when the multiset equals its own negation.
    pub fn is_self_reciprocal(&self) -> bool {
        self.iter().all(|(c, n)| self.multiplicity(&c.neg()) == n)
    }
}

/// The `T_H`-weights of a stable complement of `h` in `g`: the `gl(r)`
/// factor `{(C, 0)}` contributes `alpha_i - alpha_j` for all `i, j <= r`
/// (with the `r` zero weights included); the off-diagonal blocks of `gl(s)`
/// contribute `alpha_i - delta_k` and `delta_k - alpha_i`. The total count
/// is `2rs - r^2`, the dimension of the variety.
pub fn tangent_weights(spec: &GSVSpec) -> WeightMultiset {
    let (r, s) = (spec.r(), spec.s());
    let mut weights = WeightMultiset::default();
    for i in 0..r {
        for j in 0..r {
            let mut c = RestrictedCharacter::zero(spec);
            c.alpha[i] += 1;
            c.alpha[j] -= 1;
            weights.insert(c);
        }
    }
    for i in 0..r {
        for k in 0..s - r {
            let mut p = RestrictedCharacter::zero(spec);
            p.alpha[i] += 1;
            p.delta[k] -= 1;
            weights.insert(p.clone());
            weights.insert(p.neg());
        }
    }
    weights
}

/// Splits the tangent weights into the proof's cancelling families and
/// checks each: the `gl(r)` weights pair `(i,j)` against `(j,i)`, and the
/// two off-diagonal blocks are exact negatives of one another.
pub fn reciprocal_pairing_ok(spec: &GSVSpec) -> bool {
    let (r, s) = (spec.r(), spec.s());
    let mut top_left = WeightMultiset::default();
    for i in 0..r {
        for j in 0..r {
            let mut c = RestrictedCharacter::zero(spec);
            c.alpha[i] += 1;
            c.alpha[j] -= 1;
            top_left.insert(c);
        }
    }
    let mut p_block = WeightMultiset::default();
    let mut q_block = WeightMultiset::default();
    for i in 0..r {
        for k in 0..s - r {
            let mut c = RestrictedCharacter::zero(spec);
            c.alpha[i] += 1;
            c.delta[k] -= 1;
            p_block.insert(c.clone());
            q_block.insert(c.neg());
        }
    }
    let q_negated = {
        let mut m = WeightMultiset::default();
        for (c, n) in q_block.iter() {
            for _ in 0..n {
                m.insert(c.neg());
            }
        }
        m
    };
    top_left.is_self_reciprocal() && p_block == q_negated
}

/// Sum of the tangent weights; the certified claim is that it is the zero
/// character ("weight 1" multiplicatively), with the cancelling-pair
/// decomposition verified along the way.
pub fn canonical_weight(spec: &GSVSpec) -> Result<RestrictedCharacter, RepthyError> {
    let weights = tangent_weights(spec);
    let sum = weights.character_sum(spec);
    if !sum.is_zero() {
        return Err(RepthyError::NonTrivialCanonicalWeight);
    }
    Ok(sum)
}

/// The `T_H`-weight of the canonical form on chart `I`: the sum of the free
/// coordinates' restricted weights minus `r` times the weight of the chart
/// minor. Checked to vanish on every chart of the atlas, and cross-checked
/// against the zero sum of `canonical_weight`.
pub fn sigma_weight_check(spec: &GSVSpec) -> Result<(), RepthyError> {
    let r = spec.r() as i64;
    for chart in chart_atlas(spec) {
        let mut total = RestrictedCharacter::zero(spec);
        for &v in chart.free_coords() {
            total = total.add(&restrict(spec, &coordinate_weight(spec, v)));
        }
        // weight of the minor on I: every row index once, minus the columns in I
        let mut minor_char = Character::zero(spec);
        for i in 0..spec.r() {
            minor_char.alpha[i] += 1;
        }
        for &j in chart.index_set().indices() {
            minor_char.beta[j - 1] -= 1;
        }
        total = total.add(&restrict(spec, &minor_char).scale(-r));
        if !total.is_zero() {
            return Err(RepthyError::NonTrivialSigmaWeight(chart.index_set().to_string()));
        }
    }
    canonical_weight(spec)?;
    Ok(())
}

/// Weight report payload, the JSON surface of this module.
#[derive(Debug, Clone, Serialize)]
pub struct WeightReport {
    pub spec: GSVSpec,
    #[serde(rename = "tangentWeightCount")]
    pub tangent_weight_count: usize,
    #[serde(rename = "canonicalWeight")]
    pub canonical_weight: Vec<i64>,
    pub pairing: String,
    pub verdict: String,
}

pub fn weight_report(spec: &GSVSpec) -> WeightReport {
    let weights = tangent_weights(spec);
    let sum = weights.character_sum(spec);
    let pairing_ok = reciprocal_pairing_ok(spec);
    let sigma_ok = sigma_weight_check(spec).is_ok();
    let ok = sum.is_zero()
        && pairing_ok
        && sigma_ok
        && weights.total() == spec.dimension();
    WeightReport {
        spec: *spec,
        tangent_weight_count: weights.total(),
        canonical_weight: sum.concat(),
        pairing: if pairing_ok { "RECIPROCAL_PAIRS_OK" } else { "PAIRING_BROKEN" }.to_string(),
        verdict: if ok { "THEOREM1_OK" } else { "FAILED" }.to_string(),
    }
}

// ---------------------------------------------------------------------------
// Seeded random generation for round-trip and membership checks. Integer
// entries in [-5, 5], rejection-sampled for invertibility, keep the exact
// arithmetic small.

pub fn random_invertible(rng: &mut impl Rng, n: usize) -> QMatrix {
    loop {
        let m = QMatrix::from_fn(n, n, |_, _| {
            Rational::from_integer(rng.gen_range(-5i64..=5).into())
        });
        if m.inverse().is_some() {
            return m;
        }
    }
}

pub fn random_group_element(rng: &mut impl Rng, spec: &GSVSpec) -> GroupElement {
    GroupElement {
        a: random_invertible(rng, spec.r()),
        b: random_invertible(rng, spec.s()),
    }
}

/// A random point of the variety, produced by acting on the base point.
pub fn random_on_variety_point(rng: &mut impl Rng, spec: &GSVSpec) -> Point {
    let g = random_group_element(rng, spec);
    act(&g, &base_point(spec)).expect("shapes match by construction")
}

/// A random element of the stabilizer: `(A, diag(A, D))`.
pub fn random_stabilizer_element(rng: &mut impl Rng, spec: &GSVSpec) -> GroupElement {
    let a = random_invertible(rng, spec.r());
    let b = if spec.s() > spec.r() {
        let d = random_invertible(rng, spec.s() - spec.r());
        a.block_diag(&d)
    } else {
        a.clone()
    };
    GroupElement { a, b }
}

/// A random element violating the stabilizer block form (so it moves `v`).
/// Only meaningful for `r < s`; for `r = s` every `(A, A)` stabilizes.
pub fn random_non_stabilizer_element(rng: &mut impl Rng, spec: &GSVSpec) -> GroupElement {
    loop {
        let g = random_group_element(rng, spec);
        if !in_stabilizer(spec, &g).expect("shapes match") {
            return g;
        }
    }
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    // Fisher-Yates
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}
