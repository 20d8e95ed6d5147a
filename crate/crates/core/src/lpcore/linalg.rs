//! Exact rank and kernel computations for sparse integer matrices.

use num_traits::{One, Zero};

use crate::scalar::Rational;

/// Reduced row echelon form of the dense matrix with the given columns;
/// returns the rows and the pivot column of each nonzero row.
fn echelon(rows: usize, columns: &[Vec<(usize, i64)>]) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let cols = columns.len();
    let mut m = vec![vec![Rational::zero(); cols]; rows];
    for (c, col) in columns.iter().enumerate() {
        for &(r, v) in col {
            m[r][c] += Rational::from_integer(v.into());
        }
    }
    let mut pivots = Vec::new();
    let mut top = 0;
    for c in 0..cols {
        let Some(p) = (top..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(top, p);
        let inv = Rational::one() / m[top][c].clone();
        let nz: Vec<usize> = (c..cols).filter(|&k| !m[top][k].is_zero()).collect();
        for &k in &nz {
            m[top][k] = &m[top][k] * &inv;
        }
        for r in 0..rows {
            if r == top || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone();
            for &k in &nz {
                let d = &f * &m[top][k];
                m[r][k] -= d;
            }
        }
        pivots.push(c);
        top += 1;
        if top == rows {
            break;
        }
    }
    m.truncate(top);
    (m, pivots)
}

pub fn exact_rank(rows: usize, columns: &[Vec<(usize, i64)>]) -> usize {
    echelon(rows, columns).1.len()
}

/// A nonzero vector `x` with `M x = 0`, if one exists. The first free
/// column gets coefficient 1.
pub fn kernel_vector(rows: usize, columns: &[Vec<(usize, i64)>]) -> Option<Vec<Rational>> {
    let (m, pivots) = echelon(rows, columns);
    let free = (0..columns.len()).find(|c| !pivots.contains(c))?;
    let mut x = vec![Rational::zero(); columns.len()];
    x[free] = Rational::one();
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = -m[r][free].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel() {
        // columns (1,1), (2,2), (0,1)
        let cols = vec![vec![(0, 1), (1, 1)], vec![(0, 2), (1, 2)], vec![(1, 1)]];
        assert_eq!(exact_rank(2, &cols), 2);
        let k = kernel_vector(2, &cols).unwrap();
        assert_eq!(k, vec![Rational::from_integer((-2).into()), Rational::one(), Rational::zero()]);
        let id = vec![vec![(0, 1)], vec![(1, 1)]];
        assert_eq!(kernel_vector(2, &id), None);
    }
}
