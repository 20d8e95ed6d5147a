//! Products of the regular cube grid on `[0, k]ⁿ` with a ball complex.

use std::collections::HashMap;

use super::{merge_incidences, BallComplex, CellComplex, ComplexError, OrbitLabel};

/// Cube `position + [0,1]^mask` of the grid.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridCell {
    pub position: Vec<usize>,
    pub mask: u32,
}

impl GridCell {
    pub fn dimension(&self) -> usize {
        self.mask.count_ones() as usize
    }
}

/// Product cell `grid × base`, with the grid cell given by its index among
/// grid cells of its dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ProductCell {
    pub grid_dim: usize,
    pub grid: usize,
    pub base_dim: usize,
    pub base: usize,
}

#[derive(Clone, Debug)]
pub struct GridProductComplex {
    n: usize,
    k: usize,
    base: BallComplex,
    grid_cells: Vec<Vec<GridCell>>,
    grid_index: HashMap<GridCell, usize>,
    cells: Vec<Vec<ProductCell>>,
    cell_index: HashMap<ProductCell, usize>,
}

/// Default cap on the total number of product cells.
pub const DEFAULT_CELL_BUDGET: usize = 2_000_000;

pub fn build_grid_product(base: &BallComplex, n: usize, k: usize) -> Result<GridProductComplex, ComplexError> {
    GridProductComplex::new(base, n, k, DEFAULT_CELL_BUDGET)
}

fn grid_positions(n: usize, k: usize, mask: u32) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(n)];
    for i in 0..n {
        let top = if mask & (1 << i) != 0 { k } else { k + 1 };
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..top).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

impl GridProductComplex {
    pub fn new(base: &BallComplex, n: usize, k: usize, cell_budget: usize) -> Result<Self, ComplexError> {
        if n == 0 {
            return Err(ComplexError::ZeroGridDimension);
        }
        if k == 0 {
            return Err(ComplexError::ZeroGridSide);
        }
        if n > 8 {
            return Err(ComplexError::CellBudget {
                cells: usize::MAX,
                budget: cell_budget,
            });
        }
        let mut grid_cells = vec![Vec::new(); n + 1];
        for mask in 0u32..(1 << n) {
            let d = mask.count_ones() as usize;
            for position in grid_positions(n, k, mask) {
                grid_cells[d].push(GridCell { position, mask });
            }
        }
        let grid_index = grid_cells
            .iter()
            .flat_map(|cells| cells.iter().enumerate().map(|(i, c)| (c.clone(), i)))
            .collect();

        let total: usize = (0..=n + 1)
            .map(|d| {
                (0..=d.min(2))
                    .filter(|&b| d - b <= n)
                    .map(|b| grid_cells[d - b].len() * base.cell_count(b))
                    .sum::<usize>()
            })
            .sum();
        if total > cell_budget {
            return Err(ComplexError::CellBudget {
                cells: total,
                budget: cell_budget,
            });
        }
        let mut cells = vec![Vec::new(); n + 2];
        let mut cell_index = HashMap::new();
        for (d, bucket) in cells.iter_mut().enumerate() {
            for base_dim in 0..=d.min(2) {
                let grid_dim = d - base_dim;
                if grid_dim > n {
                    continue;
                }
                for b in 0..base.cell_count(base_dim) {
                    for g in 0..grid_cells[grid_dim].len() {
                        let cell = ProductCell {
                            grid_dim,
                            grid: g,
                            base_dim,
                            base: b,
                        };
                        cell_index.insert(cell, bucket.len());
                        bucket.push(cell);
                    }
                }
            }
        }
        Ok(Self {
            n,
            k,
            base: base.clone(),
            grid_cells,
            grid_index,
            cells,
            cell_index,
        })
    }

    pub fn grid_dimension(&self) -> usize {
        self.n
    }

    pub fn side(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> &BallComplex {
        &self.base
    }

    pub fn grid_cells(&self, dim: usize) -> &[GridCell] {
        &self.grid_cells[dim]
    }

    pub fn product_cell(&self, dim: usize, cell: usize) -> ProductCell {
        self.cells[dim][cell]
    }

    pub fn index_of(&self, cell: ProductCell) -> Option<usize> {
        self.cell_index.get(&cell).copied()
    }

    /// Boundary of a grid cube: the face at `x_i = 1` minus the face at
    /// `x_i = 0`, with sign `(-1)^r` for the `r`-th direction.
    pub fn grid_boundary(&self, dim: usize, cell: usize) -> Vec<(usize, i64)> {
        let c = &self.grid_cells[dim][cell];
        let mut out = Vec::new();
        for (r, i) in (0..self.n).filter(|i| c.mask & (1 << i) != 0).enumerate() {
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let mask = c.mask & !(1 << i);
            let low = GridCell {
                position: c.position.clone(),
                mask,
            };
            let mut high = low.clone();
            high.position[i] += 1;
            out.push((self.grid_index[&high], sign));
            out.push((self.grid_index[&low], -sign));
        }
        out
    }
}

impl CellComplex for GridProductComplex {
    fn truncation_radius(&self) -> Option<usize> {
        Some(self.base.radius())
    }

    fn top_dimension(&self) -> usize {
        self.n + 1
    }

    fn cell_count(&self, dim: usize) -> usize {
        self.cells.get(dim).map_or(0, Vec::len)
    }

    /// `∂(a × b) = ∂a × b + (-1)^{dim a} a × ∂b`.
    fn cell_boundary(&self, dim: usize, cell: usize) -> Vec<(usize, i64)> {
        let pc = self.cells[dim][cell];
        let mut raw = Vec::new();
        if pc.grid_dim > 0 {
            for (g, s) in self.grid_boundary(pc.grid_dim, pc.grid) {
                let face = ProductCell {
                    grid_dim: pc.grid_dim - 1,
                    grid: g,
                    ..pc
                };
                raw.push((self.cell_index[&face], s));
            }
        }
        if pc.base_dim > 0 {
            let sign = if pc.grid_dim % 2 == 0 { 1 } else { -1 };
            for (b, s) in self.base.cell_boundary(pc.base_dim, pc.base) {
                let face = ProductCell {
                    base_dim: pc.base_dim - 1,
                    base: b,
                    ..pc
                };
                raw.push((self.cell_index[&face], sign * s));
            }
        }
        merge_incidences(raw)
    }

    fn orbit_label(&self, dim: usize, cell: usize) -> OrbitLabel {
        let pc = self.cells[dim][cell];
        OrbitLabel::Product {
            mask: self.grid_cells[pc.grid_dim][pc.grid].mask,
            base: Box::new(self.base.orbit_label(pc.base_dim, pc.base)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_ball, check_boundary_squared};
    use crate::presentations::{parse_presentation, WordOracle};

    fn z_ball(r: usize) -> BallComplex {
        let z = parse_presentation("gens: a").unwrap();
        build_ball(&z, r, WordOracle::FreeReduction).unwrap()
    }

    #[test]
    fn product_counts() {
        let g = build_grid_product(&z_ball(2), 1, 1).unwrap();
        assert_eq!(g.cell_count(0), 2 * 5);
        assert_eq!(g.cell_count(1), 5 + 2 * 4);
        assert_eq!(g.cell_count(2), 4);
        assert!(check_boundary_squared(&g).is_ok());
        let g = build_grid_product(&z_ball(3), 1, 3).unwrap();
        assert_eq!(g.cell_count(2), 3 * 6);
    }

    #[test]
    fn two_dimensional_grid_is_a_chain_complex() {
        let g = build_grid_product(&z_ball(2), 2, 2).unwrap();
        assert_eq!(g.top_dimension(), 3);
        assert_eq!(g.cell_count(3), 4 * 4);
        assert!(check_boundary_squared(&g).is_ok());
        let z2 = parse_presentation("gens: a b\nrel: abAB").unwrap();
        let b = build_ball(&z2, 2, WordOracle::AbelianNormalForm).unwrap();
        let g = build_grid_product(&b, 1, 2).unwrap();
        assert!(check_boundary_squared(&g).is_ok());
    }

    #[test]
    fn zero_side_is_rejected() {
        assert_eq!(
            build_grid_product(&z_ball(1), 1, 0).unwrap_err(),
            ComplexError::ZeroGridSide
        );
        assert_eq!(
            build_grid_product(&z_ball(1), 0, 1).unwrap_err(),
            ComplexError::ZeroGridDimension
        );
    }
}
