//! Finitely generated abelian groups `Zⁿ / L` with a canonical normal form.

use super::word::Word;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("integer overflow while reducing the relation lattice")]
pub struct LatticeOverflow;

/// Quotient of `Zⁿ` by a lattice kept in row-echelon form with positive
/// pivots. Reducing a vector so that each pivot coordinate lies in
/// `[0, pivot)` yields a unique representative of its coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianQuotient {
    rank: usize,
    basis: Vec<(usize, Vec<i64>)>,
}

impl AbelianQuotient {
    pub fn new(rank: usize, relations: &[Vec<i64>]) -> Result<Self, LatticeOverflow> {
        let mut rows: Vec<Vec<i64>> = relations
            .iter()
            .filter(|r| r.iter().any(|&x| x != 0))
            .cloned()
            .collect();
        let mut basis = Vec::new();
        for col in 0..rank {
            loop {
                let Some(pivot_idx) = rows
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| r[col] != 0)
                    .min_by_key(|(_, r)| r[col].unsigned_abs())
                    .map(|(i, _)| i)
                else {
                    break;
                };
                let pivot = rows[pivot_idx].clone();
                let mut done = true;
                for (i, row) in rows.iter_mut().enumerate() {
                    if i == pivot_idx || row[col] == 0 {
                        continue;
                    }
                    let factor = row[col] / pivot[col];
                    for (x, &p) in row.iter_mut().zip(&pivot) {
                        *x = x
                            .checked_sub(factor.checked_mul(p).ok_or(LatticeOverflow)?)
                            .ok_or(LatticeOverflow)?;
                    }
                    if row[col] != 0 {
                        done = false;
                    }
                }
                if done {
                    let mut pivot = rows.swap_remove(pivot_idx);
                    if pivot[col] < 0 {
                        pivot.iter_mut().for_each(|x| *x = -*x);
                    }
                    basis.push((col, pivot));
                    rows.retain(|r| r.iter().any(|&x| x != 0));
                    break;
                }
            }
        }
        Ok(Self { rank, basis })
    }

    /// Abelianization of a presentation: `Z^|S|` modulo the exponent-sum
    /// vectors of the given relators.
    pub fn from_relators(rank: usize, relators: &[Word]) -> Result<Self, LatticeOverflow> {
        let rows: Vec<Vec<i64>> = relators.iter().map(|r| r.exponent_sums(rank)).collect();
        Self::new(rank, &rows)
    }

    /// Same quotient with extra relations added.
    pub fn extend(&self, extra: &[Vec<i64>]) -> Result<Self, LatticeOverflow> {
        let mut rows: Vec<Vec<i64>> = self.basis.iter().map(|(_, r)| r.clone()).collect();
        rows.extend(extra.iter().cloned());
        Self::new(self.rank, &rows)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn reduce(&self, v: &[i64]) -> Vec<i64> {
        let mut v = v.to_vec();
        for (col, row) in &self.basis {
            let q = v[*col].div_euclid(row[*col]);
            if q != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x -= q * r;
                }
            }
        }
        v
    }

    pub fn normal_form(&self, w: &Word) -> Vec<i64> {
        self.reduce(&w.exponent_sums(self.rank))
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        if self.basis.len() < self.rank {
            return None;
        }
        self.basis
            .iter()
            .try_fold(1u64, |acc, (c, r)| acc.checked_mul(r[*c] as u64))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_quotient() {
        let z5 = AbelianQuotient::new(1, &[vec![5]]).unwrap();
        assert_eq!(z5.reduce(&[6]), vec![1]);
        assert_eq!(z5.reduce(&[-1]), vec![4]);
        assert_eq!(z5.order(), Some(5));
    }

    #[test]
    fn mixed_relations_are_canonical() {
        // Z^2 / <(2, 4), (0, 6)> has order 12
        let g = AbelianQuotient::new(2, &[vec![2, 4], vec![0, 6], vec![4, 2]]).unwrap();
        assert_eq!(g.reduce(&[2, 4]), vec![0, 0]);
        assert_eq!(g.reduce(&[4, 2]), vec![0, 0]);
        assert_eq!(g.reduce(&[3, 1]), g.reduce(&[1, -3]));
        assert_ne!(g.reduce(&[1, 0]), g.reduce(&[0, 1]));
    }

    #[test]
    fn free_abelian() {
        let g = AbelianQuotient::new(2, &[]).unwrap();
        assert_eq!(g.order(), None);
        assert_eq!(g.reduce(&[-3, 7]), vec![-3, 7]);
    }
}
