//! The model of `GSV(r,s)`: defining equations, membership, dimension and
//! smoothness checks, chart construction, and the Stiefel/sphere special
//! cases.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::symalg::{IndexSet, LocalizedElement, Polynomial, Rational, Variable};
use crate::symmat::{adjugate_solve, QMatrix, SymMatError, SymMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("spec requires 1 <= r <= s")]
    InvalidSpec,
    #[error("point shape does not match the spec")]
    ShapeMismatch,
    #[error("point does not satisfy X*Y = I")]
    NotOnVariety,
    #[error("rows are not orthonormal: X*X^T differs from I")]
    NotOrthonormalRows,
    #[error("invalid rational matrix encoding: {0}")]
    BadEncoding(String),
    #[error(transparent)]
    Mat(#[from] SymMatError),
}

/// The size parameters of a generalised affine Stiefel variety.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GSVSpec {
    r: usize,
    s: usize,
}

impl GSVSpec {
    pub fn new(r: usize, s: usize) -> Result<Self, VarietyError> {
        if r < 1 || r > s {
            return Err(VarietyError::InvalidSpec);
        }
        Ok(GSVSpec { r, s })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Dimension of the variety: `rs + r(s-r) = 2rs - r^2`, the number of
    /// free coordinates of every chart. (The codimension in the ambient
    /// `2rs`-dimensional affine space is `r^2`.) Saturates for absurd
    /// sizes, so budget gates stay sound.
    pub fn dimension(&self) -> usize {
        let rs = self.r.saturating_mul(self.s);
        rs.saturating_mul(2).saturating_sub(self.r.saturating_mul(self.r))
    }

    /// Number of charts in the atlas: `C(s, r)`, saturating on overflow.
    pub fn chart_count(&self) -> usize {
        binomial(self.s, self.r)
    }

    /// The ambient coordinates in the global order: X entries row-major,
    /// then Y entries row-major.
    pub fn ambient_variables(&self) -> Vec<Variable> {
        let mut vars = Vec::with_capacity(2 * self.r * self.s);
        for i in 1..=self.r {
            for j in 1..=self.s {
                vars.push(Variable::x(i, j));
            }
        }
        for j in 1..=self.s {
            for i in 1..=self.r {
                vars.push(Variable::y(j, i));
            }
        }
        vars
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut value = 1usize;
    for i in 0..k.min(n - k) {
        match value.checked_mul(n - i) {
            Some(product) => value = product / (i + 1),
            None => return usize::MAX,
        }
    }
    value
}

/// A candidate point `(X, Y)`; membership in the variety is a property
/// (`contains`), not an invariant of the type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point {
    pub x: QMatrix,
    pub y: QMatrix,
}

impl Point {
    pub fn new(x: QMatrix, y: QMatrix) -> Self {
        Point { x, y }
    }

    pub fn shape_matches(&self, spec: &GSVSpec) -> bool {
        self.x.rows() == spec.r()
            && self.x.cols() == spec.s()
            && self.y.rows() == spec.s()
            && self.y.cols() == spec.r()
    }

    /// The variable assignment sending each ambient coordinate to the
    /// point's entry, for evaluating symbolic expressions at the point.
    pub fn assignment(&self) -> BTreeMap<Variable, Rational> {
        let mut map = BTreeMap::new();
        for i in 0..self.x.rows() {
            for j in 0..self.x.cols() {
                map.insert(Variable::x(i + 1, j + 1), self.x.at(i, j).clone());
            }
        }
        for j in 0..self.y.rows() {
            for i in 0..self.y.cols() {
                map.insert(Variable::y(j + 1, i + 1), self.y.at(j, i).clone());
            }
        }
        map
    }
}

/// Serialization form of a point: rational entries as `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointJson {
    pub r: usize,
    pub s: usize,
    #[serde(rename = "X")]
    pub x: Vec<Vec<String>>,
    #[serde(rename = "Y")]
    pub y: Vec<Vec<String>>,
}

impl PointJson {
    pub fn encode(spec: &GSVSpec, p: &Point) -> Self {
        let render = |m: &QMatrix| {
            (0..m.rows())
                .map(|i| (0..m.cols()).map(|j| m.at(i, j).to_string()).collect())
                .collect()
        };
        PointJson { r: spec.r(), s: spec.s(), x: render(&p.x), y: render(&p.y) }
    }

    pub fn decode(&self) -> Result<(GSVSpec, Point), VarietyError> {
        let spec = GSVSpec::new(self.r, self.s)?;
        let parse = |grid: &[Vec<String>]| -> Result<QMatrix, VarietyError> {
            let rows = grid
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| {
                            cell.parse::<Rational>()
                                .map_err(|e| VarietyError::BadEncoding(format!("{cell:?}: {e}")))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            QMatrix::from_rows(rows).map_err(|_| VarietyError::BadEncoding("ragged matrix".into()))
        };
        let p = Point::new(parse(&self.x)?, parse(&self.y)?);
        if !p.shape_matches(&spec) {
            return Err(VarietyError::ShapeMismatch);
        }
        Ok((spec, p))
    }
}

/// The `r x r` grid of defining polynomials: entry `(i,k)` is
/// `sum_j x_{ij} y_{jk} - delta_{ik}`.
pub fn defining_equations(spec: &GSVSpec) -> Vec<Vec<Polynomial>> {
    let (r, s) = (spec.r(), spec.s());
    (1..=r)
        .map(|i| {
            (1..=r)
                .map(|k| {
                    let mut p = Polynomial::zero();
                    for j in 1..=s {
                        p = &p
                            + &(&Polynomial::var(Variable::x(i, j))
                                * &Polynomial::var(Variable::y(j, k)));
                    }
                    if i == k {
                        p = &p - &Polynomial::one();
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Exact membership test: `X*Y = I_r` over the rationals.
pub fn contains(spec: &GSVSpec, p: &Point) -> Result<bool, VarietyError> {
    if !p.shape_matches(spec) {
        return Err(VarietyError::ShapeMismatch);
    }
    Ok((&p.x * &p.y).is_identity())
}

/// Rank of the `r^2 x 2rs` Jacobian of the defining equations at an
/// on-variety point. Equals `r^2` everywhere on the variety, which is the
/// smoothness certificate.
pub fn jacobian_rank_at(spec: &GSVSpec, p: &Point) -> Result<usize, VarietyError> {
    if !contains(spec, p)? {
        return Err(VarietyError::NotOnVariety);
    }
    let equations = defining_equations(spec);
    let vars = spec.ambient_variables();
    let assignment = p.assignment();
    let flat: Vec<&Polynomial> = equations.iter().flatten().collect();
    let jac = QMatrix::from_fn(flat.len(), vars.len(), |e, v| {
        flat[e].derivative(vars[v]).eval(&assignment)
    });
    Ok(jac.rank())
}

/// An affine chart: on the locus where the minor on `set` is invertible,
/// the Y-rows indexed by `set` are solved rationally in the remaining
/// coordinates.
#[derive(Debug, Clone)]
pub struct Chart {
    set: IndexSet,
    free_coords: Vec<Variable>,
    solved: BTreeMap<Variable, LocalizedElement>,
}

impl Chart {
    pub fn index_set(&self) -> &IndexSet {
        &self.set
    }

    /// The free coordinates in the fixed chart order: all X entries
    /// row-major, then the Y entries of rows outside the index set,
    /// row-major. Jacobian signs depend on this order being stable.
    pub fn free_coords(&self) -> &[Variable] {
        &self.free_coords
    }

    /// Solved expressions for the Y-variables in rows of the index set.
    pub fn solved(&self) -> &BTreeMap<Variable, LocalizedElement> {
        &self.solved
    }

    /// Substitutes the solved expressions into every defining equation and
    /// checks that all of them vanish identically.
    pub fn solves_defining_equations(&self, spec: &GSVSpec) -> bool {
        defining_equations(spec)
            .iter()
            .flatten()
            .all(|eq| eq.substitute(&self.solved).is_zero())
    }
}

/// Builds the chart for the minor on `set`: solves
/// `X_I * Y_I = I - X_{I^c} * Y_{I^c}` for the Y-rows in `set` by the
/// adjugate, so every solved entry has denominator exactly that minor.
pub fn build_chart(spec: &GSVSpec, set: &IndexSet) -> Result<Chart, VarietyError> {
    let (r, s) = (spec.r(), spec.s());
    if set.len() != r || set.max() > s {
        return Err(VarietyError::ShapeMismatch);
    }
    let x = SymMatrix::generic_x(r, s);
    let m = x.columns(set);
    let complement = set.complement(s);
    // I_r - X_{I^c} * Y_{I^c}
    let mut b = SymMatrix::identity(r);
    if !complement.is_empty() {
        let x_c = SymMatrix::from_fn(r, complement.len(), |i, j| {
            Variable::x(i + 1, complement[j]).into()
        });
        let y_c = SymMatrix::from_fn(complement.len(), r, |j, k| {
            Variable::y(complement[j], k + 1).into()
        });
        let prod = &x_c * &y_c;
        b = SymMatrix::from_fn(r, r, |i, k| b.at(i, k) - prod.at(i, k));
    }
    let solved_rows = adjugate_solve(&m, &b)?;
    let mut solved = BTreeMap::new();
    for (a, &j) in set.indices().iter().enumerate() {
        for k in 1..=r {
            solved.insert(Variable::y(j, k), solved_rows.at(a, k - 1).clone());
        }
    }
    let mut free_coords = Vec::with_capacity(spec.dimension());
    for i in 1..=r {
        for j in 1..=s {
            free_coords.push(Variable::x(i, j));
        }
    }
    for j in 1..=s {
        if !set.contains(j) {
            for i in 1..=r {
                free_coords.push(Variable::y(j, i));
            }
        }
    }
    Ok(Chart { set: set.clone(), free_coords, solved })
}

/// One chart per `r`-subset of `{1..s}`, in lexicographic order.
pub fn chart_atlas(spec: &GSVSpec) -> Vec<Chart> {
    IndexSet::all(spec.s(), spec.r())
        .iter()
        .map(|set| build_chart(spec, set).expect("atlas index sets are valid"))
        .collect()
}

/// Embeds a matrix with orthonormal rows as the point `(X, X^T)`; this is
/// the Stiefel locus `X*Y = X*X^T = I`, and for a `1 x (n+1)` unit vector
/// the rational points of the n-sphere.
pub fn stiefel_embed(x: &QMatrix) -> Result<Point, VarietyError> {
    let y = x.transpose();
    if !(x * &y).is_identity() {
        return Err(VarietyError::NotOrthonormalRows);
    }
    Ok(Point::new(x.clone(), y))
}
