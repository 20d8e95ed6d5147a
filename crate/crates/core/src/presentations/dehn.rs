//! Dehn's algorithm and the piece-length small cancellation test.

use num_rational::Ratio;

use super::presentation::Presentation;
use super::word::Word;

/// Symmetrized relator set: every cyclic rotation of every relator and of
/// its inverse, deduplicated, in deterministic order.
pub fn symmetrized_relators(p: &Presentation) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for r in p.relators() {
        for base in [r.clone(), r.inverse()] {
            for rot in base.rotations() {
                if !out.contains(&rot) {
                    out.push(rot);
                }
            }
        }
    }
    out
}

fn common_prefix(a: &[i32], b: &[i32]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Largest ratio `|piece| / |relator|` over the symmetrized relator set, where
/// a piece is a common prefix of two distinct symmetrized relators. `None`
/// when there are no relators.
pub fn max_piece_ratio(p: &Presentation) -> Option<Ratio<usize>> {
    let sym = symmetrized_relators(p);
    let mut best: Option<Ratio<usize>> = None;
    for (i, r) in sym.iter().enumerate() {
        let longest = sym
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, s)| common_prefix(r.letters(), s.letters()))
            .max()
            .unwrap_or(0);
        let ratio = Ratio::new(longest, r.len());
        best = Some(best.map_or(ratio, |b| b.max(ratio)));
    }
    best
}

/// Metric small cancellation condition `C'(λ)`: every piece of a relator
/// `r` is strictly shorter than `λ|r|`.
pub fn satisfies_c_prime(p: &Presentation, lambda: Ratio<usize>) -> bool {
    match max_piece_ratio(p) {
        None => true,
        Some(r) => r < lambda,
    }
}

/// Greedy Dehn reduction: replaces any subword that is more than half of a
/// symmetrized relator by the inverse of the complementary part, until no
/// such subword remains.
#[derive(Clone, Debug)]
pub struct DehnReducer {
    relators: Vec<Word>,
}

impl DehnReducer {
    pub fn new(p: &Presentation) -> Self {
        Self {
            relators: symmetrized_relators(p),
        }
    }

    /// Minimal length decrease of one reduction step: `2k - n` where `k` is
    /// the shortest matched prefix length `⌊n/2⌋ + 1` of a relator of length
    /// `n`. `None` without relators.
    pub fn min_step_decrease(p: &Presentation) -> Option<usize> {
        p.relators()
            .iter()
            .map(|r| 2 * (r.len() / 2 + 1) - r.len())
            .min()
    }

    pub fn reduce(&self, w: &Word) -> Word {
        let mut current = w.free_reduce();
        'outer: loop {
            let letters = current.letters().to_vec();
            for start in 0..letters.len() {
                for r in &self.relators {
                    let n = r.len();
                    let max_k = n.min(letters.len() - start);
                    let matched = common_prefix(&letters[start..start + max_k], r.letters());
                    if 2 * matched > n {
                        let complement = Word::new(r.letters()[matched..].to_vec()).inverse();
                        let mut next = letters[..start].to_vec();
                        next.extend_from_slice(complement.letters());
                        next.extend_from_slice(&letters[start + matched..]);
                        current = Word::new(next).free_reduce();
                        continue 'outer;
                    }
                }
            }
            return current;
        }
    }

    /// `true` when `w` reduces to the empty word (so `w = 1` in the group).
    pub fn is_trivial(&self, w: &Word) -> bool {
        self.reduce(w).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn genus2() -> Presentation {
        parse_presentation("gens: a b c d\nrel: abABcdCD").unwrap()
    }

    #[test]
    fn surface_group_is_c_prime_sixth() {
        let p = genus2();
        assert_eq!(max_piece_ratio(&p), Some(Ratio::new(1, 8)));
        assert!(satisfies_c_prime(&p, Ratio::new(1, 6)));
        let z2 = parse_presentation("gens: a b\nrel: abAB").unwrap();
        assert!(!satisfies_c_prime(&z2, Ratio::new(1, 6)));
    }

    #[test]
    fn dehn_reduces_relator_conjugates() {
        let p = genus2();
        let d = DehnReducer::new(&p);
        let r = p.relators()[0].clone();
        assert!(d.is_trivial(&r));
        assert!(d.is_trivial(&r.rotate(3).inverse()));
        let conj = Word::generator(2).concat(&r).concat(&Word::generator(2).inverse());
        assert!(d.is_trivial(&conj));
        assert!(!d.is_trivial(&p.parse_word("abAB").unwrap()));
        // five letters of the relator become the inverse of the other three
        let w = p.parse_word("abABc").unwrap();
        assert_eq!(d.reduce(&w), p.parse_word("dcD").unwrap());
        assert_eq!(DehnReducer::min_step_decrease(&p), Some(2));
    }
}
