//! Todd–Coxeter coset enumeration (HLT strategy) over the trivial subgroup.
//!
//! A successful run yields the full multiplication table of a finite
//! presented group; elements are numbered in breadth-first order from the
//! identity, letters tried in slot order.

use std::collections::VecDeque;

use super::presentation::Presentation;
use super::word::{letter_slot, slot_letter, Word};

const UNDEFINED: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EnumerationError {
    #[error("coset enumeration exceeded {0} cosets")]
    CosetLimit(usize),
}

/// Right-regular action of a finite group on itself, from a completed
/// coset table. Element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    generator_count: usize,
    table: Vec<Vec<usize>>,
    representatives: Vec<Word>,
}

impl FiniteGroup {
    /// Enumerates `⟨S | R⟩`, failing if more than `coset_limit` cosets
    /// are ever defined.
    pub fn enumerate(p: &Presentation, coset_limit: usize) -> Result<Self, EnumerationError> {
        let mut e = Enumerator::new(p.generator_count(), coset_limit);
        let relators: Vec<Vec<usize>> = p
            .relators()
            .iter()
            .map(|r| r.letters().iter().map(|&l| letter_slot(l)).collect())
            .collect();
        let mut c = 0;
        while c < e.table.len() {
            if e.is_live(c) {
                for r in &relators {
                    e.scan_and_fill(c, r)?;
                    if !e.is_live(c) {
                        break;
                    }
                }
                if e.is_live(c) {
                    for x in 0..e.slots {
                        if e.table[c][x] == UNDEFINED {
                            e.define(c, x)?;
                        }
                    }
                }
            }
            c += 1;
        }
        Ok(e.compact(p.generator_count()))
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    /// `element · letter`.
    pub fn act(&self, element: usize, letter: i32) -> usize {
        self.table[element][letter_slot(letter)]
    }

    pub fn apply(&self, element: usize, w: &Word) -> usize {
        w.letters().iter().fold(element, |e, &l| self.act(e, l))
    }

    pub fn element_of(&self, w: &Word) -> usize {
        self.apply(0, w)
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.apply(a, &self.representatives[b])
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.element_of(&self.representatives[a].inverse())
    }

    /// Breadth-first shortlex-style representative word of an element.
    pub fn representative(&self, element: usize) -> &Word {
        &self.representatives[element]
    }

    /// Subgroup generated by the given words, as a sorted element list.
    pub fn subgroup(&self, generators: &[Word]) -> Vec<usize> {
        let gens: Vec<usize> = generators.iter().map(|w| self.element_of(w)).collect();
        let mut member = vec![false; self.order()];
        member[0] = true;
        let mut queue = VecDeque::from([0usize]);
        while let Some(h) = queue.pop_front() {
            for &g in &gens {
                for next in [self.multiply(h, g), self.multiply(h, self.inverse(g))] {
                    if !member[next] {
                        member[next] = true;
                        queue.push_back(next);
                    }
                }
            }
        }
        (0..self.order()).filter(|&e| member[e]).collect()
    }
}

struct Enumerator {
    slots: usize,
    limit: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Enumerator {
    fn new(generator_count: usize, limit: usize) -> Self {
        let slots = 2 * generator_count;
        Self {
            slots,
            limit,
            table: vec![vec![UNDEFINED; slots]],
            parent: vec![0],
            queue: VecDeque::new(),
        }
    }

    fn is_live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) -> Result<usize, EnumerationError> {
        if self.table.len() >= self.limit {
            return Err(EnumerationError::CosetLimit(self.limit));
        }
        let d = self.table.len();
        self.table.push(vec![UNDEFINED; self.slots]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(d)
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = c;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            self.queue.push_back(drop);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(g) = self.queue.pop_front() {
            for x in 0..self.slots {
                let d = self.table[g][x];
                if d == UNDEFINED {
                    continue;
                }
                if self.table[d][x ^ 1] == g {
                    self.table[d][x ^ 1] = UNDEFINED;
                }
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != UNDEFINED {
                    let t = self.table[mu][x];
                    self.merge(nu, t);
                } else if self.table[nu][x ^ 1] != UNDEFINED {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, r: &[usize]) -> Result<(), EnumerationError> {
        loop {
            let (mut f, mut i) = (c, 0usize);
            let (mut b, mut j) = (c, r.len());
            while i < j && self.table[f][r[i]] != UNDEFINED {
                f = self.table[f][r[i]];
                i += 1;
            }
            if i == j {
                if f != c {
                    self.coincidence(f, c);
                }
                return Ok(());
            }
            while j > i && self.table[b][r[j - 1] ^ 1] != UNDEFINED {
                b = self.table[b][r[j - 1] ^ 1];
                j -= 1;
            }
            if j == i {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][r[i]] = b;
                self.table[b][r[i] ^ 1] = f;
                return Ok(());
            }
            self.define(f, r[i])?;
        }
    }

    fn compact(mut self, generator_count: usize) -> FiniteGroup {
        let mut index = vec![UNDEFINED; self.table.len()];
        let mut order = vec![0usize];
        let mut representatives = vec![Word::empty()];
        index[0] = 0;
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for x in 0..self.slots {
                let d = self.rep(self.table[c][x]);
                if index[d] == UNDEFINED {
                    index[d] = order.len();
                    order.push(d);
                    let mut w = representatives[head].clone();
                    w.push(slot_letter(x));
                    representatives.push(w);
                }
            }
            head += 1;
        }
        let table = order
            .iter()
            .map(|&c| {
                (0..self.slots)
                    .map(|x| {
                        let d = self.table[c][x];
                        index[self.rep(d)]
                    })
                    .collect()
            })
            .collect();
        FiniteGroup {
            generator_count,
            table,
            representatives,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::parse_presentation;

    fn order_of(text: &str) -> usize {
        FiniteGroup::enumerate(&parse_presentation(text).unwrap(), 10_000)
            .unwrap()
            .order()
    }

    #[test]
    fn small_group_orders() {
        assert_eq!(order_of("gens: a\nrel: aaaaa"), 5);
        assert_eq!(order_of("gens: a b\nrel: aa\nrel: bbb\nrel: abab"), 6);
        assert_eq!(order_of("gens: a b\nrel: aa\nrel: bb\nrel: abab"), 4);
        // quaternion group
        assert_eq!(order_of("gens: a b\nrel: aaaa\nrel: aaBB\nrel: abaB"), 8);
        // A5 as the (2,3,5) triangle group
        assert_eq!(order_of("gens: a b\nrel: aa\nrel: bbb\nrel: ababababab"), 60);
    }

    #[test]
    fn infinite_group_hits_limit() {
        let p = parse_presentation("gens: a b\nrel: abAB").unwrap();
        assert!(FiniteGroup::enumerate(&p, 500).is_err());
    }

    #[test]
    fn table_is_a_group_action() {
        let p = parse_presentation("gens: a b\nrel: aa\nrel: bbb\nrel: abab").unwrap();
        let g = FiniteGroup::enumerate(&p, 1000).unwrap();
        for e in 0..g.order() {
            for r in p.relators() {
                assert_eq!(g.apply(e, r), e);
            }
            assert_eq!(g.element_of(g.representative(e)), e);
            assert_eq!(g.multiply(e, g.inverse(e)), 0);
        }
        let sub = g.subgroup(&[Word::generator(1)]);
        assert_eq!(sub.len(), 3);
    }
}
