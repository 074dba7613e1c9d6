use std::fmt;

/// Which generic matrix a coordinate belongs to.
///
/// The global variable order is all `X` entries (row-major) before all `Y`
/// entries (row-major); the derived `Ord` on `(kind, row, col)` realises it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    X,
    Y,
}

/// A coordinate of the ambient space: an entry `x_{ij}` of the generic
/// `r x s` matrix or an entry `y_{ji}` of the generic `s x r` matrix.
///
/// Indices are 1-based, matching the usual double-index notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Variable {
    pub kind: VarKind,
    pub row: usize,
    pub col: usize,
}

impl Variable {
    /// The entry `x_{row,col}` of the generic X matrix.
    pub fn x(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "variable indices are 1-based");
        Variable { kind: VarKind::X, row, col }
    }

    /// The entry `y_{row,col}` of the generic Y matrix.
    pub fn y(row: usize, col: usize) -> Self {
        assert!(row >= 1 && col >= 1, "variable indices are 1-based");
        Variable { kind: VarKind::Y, row, col }
    }

    /// True for X-matrix entries.
    pub fn is_x(&self) -> bool {
        self.kind == VarKind::X
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letter = match self.kind {
            VarKind::X => 'x',
            VarKind::Y => 'y',
        };
        write!(f, "{}{}_{}", letter, self.row, self.col)
    }
}
