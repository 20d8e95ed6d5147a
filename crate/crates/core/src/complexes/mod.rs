//! Finite truncations of universal covers: Cayley 2-complex balls, grid
//! products and cusped balls.

mod ball;
mod cusped;
mod export;
mod grid;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentations::OracleError;

pub use ball::{build_ball, build_ball_with_budget, BallComplex, Edge, Face, Vertex};
pub use cusped::{build_cusped_ball, build_cusped_ball_with_budget, CuspedBall, HoroVertex};
pub use export::{export_complex, CellRecord, ComplexExport, EXPORT_SCHEMA_VERSION};
pub use grid::{build_grid_product, GridCell, GridProductComplex, ProductCell};

/// Default cap on the number of vertices a construction may create.
pub const DEFAULT_VERTEX_BUDGET: usize = 250_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("vertex budget of {0} exceeded")]
    VertexBudget(usize),
    #[error("grid dimension must be positive")]
    ZeroGridDimension,
    #[error("grid side length must be positive")]
    ZeroGridSide,
    #[error("grid product would have {cells} cells, above the budget {budget}")]
    CellBudget { cells: usize, budget: usize },
    #[error("ambient oracle `{0}` is not complete; cusped balls need abelian or finite")]
    IncompleteAmbientOracle(String),
    #[error("peripheral `{0}` needs a complete oracle (abelian or finite)")]
    IncompletePeripheralOracle(String),
}

/// Deck-group orbit of a cell. Two cells with equal labels are translates of
/// each other.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum OrbitLabel {
    Vertex,
    Generator { index: usize },
    Relator { index: usize },
    /// Grid cube with the given direction mask times a base cell.
    Product { mask: u32, base: Box<OrbitLabel> },
    /// Cell added by a horoball construction, identified up to translation
    /// by its peripheral and a canonical shape string.
    Horo { peripheral: usize, shape: String },
}

impl fmt::Display for OrbitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbitLabel::Vertex => write!(f, "v"),
            OrbitLabel::Generator { index } => write!(f, "g{index}"),
            OrbitLabel::Relator { index } => write!(f, "r{index}"),
            OrbitLabel::Product { mask, base } => write!(f, "q{mask:b}x{base}"),
            OrbitLabel::Horo { peripheral, shape } => write!(f, "h{peripheral}[{shape}]"),
        }
    }
}

/// A finite regular CW complex with integer incidence numbers.
pub trait CellComplex {
    fn top_dimension(&self) -> usize;

    fn cell_count(&self, dim: usize) -> usize;

    /// Boundary of a cell as (face id, incidence) pairs, merged and without
    /// zero entries. Empty for vertices.
    fn cell_boundary(&self, dim: usize, cell: usize) -> Vec<(usize, i64)>;

    fn orbit_label(&self, dim: usize, cell: usize) -> OrbitLabel;

    /// Membership in the horoball subcomplex; always `false` outside cusped
    /// balls.
    fn is_horoball(&self, _dim: usize, _cell: usize) -> bool {
        false
    }

    /// Word radius of the underlying ball, when there is one.
    fn truncation_radius(&self) -> Option<usize> {
        None
    }
}

/// Sums signed entries with equal ids and drops zeros; result sorted by id.
pub(crate) fn merge_incidences(raw: impl IntoIterator<Item = (usize, i64)>) -> Vec<(usize, i64)> {
    let mut acc: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
    for (id, s) in raw {
        *acc.entry(id).or_insert(0) += s;
    }
    acc.into_iter().filter(|&(_, s)| s != 0).collect()
}

/// Checks `∂∘∂ = 0` on every cell of dimension ≥ 2. Returns the first
/// offending (dimension, cell).
pub fn check_boundary_squared(c: &dyn CellComplex) -> Result<(), (usize, usize)> {
    for dim in 2..=c.top_dimension() {
        for cell in 0..c.cell_count(dim) {
            let mut acc = std::collections::BTreeMap::<usize, i64>::new();
            for (face, s) in c.cell_boundary(dim, cell) {
                for (ridge, t) in c.cell_boundary(dim - 1, face) {
                    *acc.entry(ridge).or_insert(0) += s * t;
                }
            }
            if acc.values().any(|&v| v != 0) {
                return Err((dim, cell));
            }
        }
    }
    Ok(())
}

/// Distinct orbit labels among cells of one dimension, optionally skipping
/// horoball cells.
pub fn orbit_labels(
    c: &dyn CellComplex,
    dim: usize,
    skip_horoball: bool,
) -> std::collections::BTreeSet<OrbitLabel> {
    (0..c.cell_count(dim))
        .filter(|&i| !(skip_horoball && c.is_horoball(dim, i)))
        .map(|i| c.orbit_label(dim, i))
        .collect()
}
