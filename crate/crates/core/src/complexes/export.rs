use serde::{Deserialize, Serialize};

use super::{CellComplex, OrbitLabel};

pub const EXPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellRecord {
    pub id: usize,
    pub label: OrbitLabel,
    /// `[face id, incidence]` pairs.
    pub boundary: Vec<(usize, i64)>,
    #[serde(skip_serializing_if = "std::ops::Not::not", default)]
    pub horoball: bool,
}

/// JSON-ready view of a complex of dimension at most 2; higher cells go to
/// `higher`, indexed by dimension minus 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexExport {
    pub schema_version: u32,
    pub vertices: Vec<CellRecord>,
    pub edges: Vec<CellRecord>,
    pub faces: Vec<CellRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub higher: Vec<Vec<CellRecord>>,
}

fn records(c: &dyn CellComplex, dim: usize) -> Vec<CellRecord> {
    (0..c.cell_count(dim))
        .map(|id| CellRecord {
            id,
            label: c.orbit_label(dim, id),
            boundary: c.cell_boundary(dim, id),
            horoball: c.is_horoball(dim, id),
        })
        .collect()
}

pub fn export_complex(c: &dyn CellComplex) -> ComplexExport {
    ComplexExport {
        schema_version: EXPORT_SCHEMA_VERSION,
        vertices: records(c, 0),
        edges: records(c, 1),
        faces: records(c, 2),
        higher: (3..=c.top_dimension()).map(|d| records(c, d)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_ball;
    use crate::presentations::{parse_presentation, WordOracle};

    #[test]
    fn export_round_trips() {
        let z5 = parse_presentation("gens: a\nrel: aaaaa").unwrap();
        let b = build_ball(&z5, 5, WordOracle::FiniteEnumeration { bound: 5 }).unwrap();
        let e = export_complex(&b);
        let text = serde_json::to_string(&e).unwrap();
        assert!(text.starts_with("{\"schema_version\":1,"));
        let back: ComplexExport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, e);
        assert_eq!(e.faces[0].boundary.len(), 5);
    }
}
