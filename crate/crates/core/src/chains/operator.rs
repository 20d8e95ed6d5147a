use crate::complexes::CellComplex;
use crate::scalar::Scalar;

use super::{ChainError, SparseChain};

/// `∂_k` as a sparse integer matrix stored by columns: rows are
/// `(k-1)`-cells, columns are `k`-cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryOperator {
    dim: usize,
    rows: usize,
    columns: Vec<Vec<(usize, i64)>>,
}

impl BoundaryOperator {
    pub fn from_complex(complex: &dyn CellComplex, dim: usize) -> Result<Self, ChainError> {
        if dim == 0 {
            return Err(ChainError::DimensionZero);
        }
        Ok(Self {
            dim,
            rows: complex.cell_count(dim - 1),
            columns: (0..complex.cell_count(dim))
                .map(|c| complex.cell_boundary(dim, c))
                .collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, c: usize) -> &[(usize, i64)] {
        &self.columns[c]
    }

    pub fn apply<S: Scalar>(&self, c: &SparseChain<S>) -> Result<SparseChain<S>, ChainError> {
        if c.dim() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                got: c.dim(),
            });
        }
        let mut out = SparseChain::zero(self.dim - 1);
        for (&id, v) in c.entries() {
            let col = self
                .columns
                .get(id)
                .ok_or(ChainError::CellOutOfRange { dim: self.dim, id })?;
            for &(r, s) in col {
                out.add_at(r, v.clone() * S::from_int(s));
            }
        }
        Ok(out)
    }

    /// Rows of the matrix, `rows[r] = [(column, entry)]`.
    pub fn transpose_rows(&self) -> Vec<Vec<(usize, i64)>> {
        let mut rows = vec![Vec::new(); self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, s) in col {
                rows[r].push((c, s));
            }
        }
        rows
    }

    /// `self ∘ next` is zero, where `next` is `∂_{k+1}`.
    pub fn composes_to_zero(&self, next: &BoundaryOperator) -> bool {
        next.columns.iter().all(|col| {
            let mut acc = std::collections::BTreeMap::<usize, i64>::new();
            for &(mid, s) in col {
                for &(r, t) in &self.columns[mid] {
                    *acc.entry(r).or_insert(0) += s * t;
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }

    /// Rank over the rationals by exact elimination.
    pub fn rank(&self) -> usize {
        crate::lpcore::exact_rank(self.rows, &self.columns)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_ball;
    use crate::presentations::{parse_presentation, WordOracle};

    #[test]
    fn torus_ball_operators_compose_to_zero() {
        let p = parse_presentation("gens: a b\nrel: abAB").unwrap();
        let b = build_ball(&p, 3, WordOracle::AbelianNormalForm).unwrap();
        let d1 = BoundaryOperator::from_complex(&b, 1).unwrap();
        let d2 = BoundaryOperator::from_complex(&b, 2).unwrap();
        assert!(d1.composes_to_zero(&d2));
        assert_eq!(d2.cols(), b.faces().len());
        // the ball is contractible: rank ∂₁ = V - 1 and ∂₂ is injective
        assert_eq!(d1.rank(), b.vertices().len() - 1);
        assert_eq!(d2.rank(), b.faces().len());
    }
}
