//! Balls in the Cayley 2-complex of a finite presentation.

use std::collections::HashMap;

use serde::Serialize;

use super::{merge_incidences, CellComplex, ComplexError, OrbitLabel, DEFAULT_VERTEX_BUDGET};
use crate::presentations::{
    letter_generator, letter_slot, slot_letter, OracleKey, PreparedOracle, Presentation, Word,
    WordOracle,
};

const UNDEFINED: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    /// Geodesic representative, read along the breadth-first tree.
    pub word: Word,
    pub distance: usize,
}

/// Edge `source → source · generator`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Edge {
    pub id: usize,
    pub source: usize,
    pub target: usize,
    pub generator: usize,
}

/// Relator disc attached along the loop of `relator` read from `base`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    pub id: usize,
    pub base: usize,
    pub relator: usize,
    /// Loop order; sign `-1` means the edge is traversed backwards.
    pub boundary: Vec<(usize, i64)>,
}

/// Radius-`R` ball around the identity in the universal cover of the
/// presentation complex.
#[derive(Clone, Debug)]
pub struct BallComplex {
    presentation: Presentation,
    oracle: WordOracle,
    oracle_complete: bool,
    radius: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    faces: Vec<Face>,
    /// `neighbors[v][slot]`: endpoint of the edge leaving `v` with that
    /// letter, if present in the ball.
    neighbors: Vec<Vec<Option<usize>>>,
    /// `out_edge[v][g]`: id of the edge `(v, g)`.
    out_edge: Vec<Vec<Option<usize>>>,
}

pub fn build_ball(p: &Presentation, radius: usize, oracle: WordOracle) -> Result<BallComplex, ComplexError> {
    build_ball_with_budget(p, radius, oracle, DEFAULT_VERTEX_BUDGET)
}

pub fn build_ball_with_budget(
    p: &Presentation,
    radius: usize,
    oracle: WordOracle,
    vertex_budget: usize,
) -> Result<BallComplex, ComplexError> {
    let prepared = PreparedOracle::new(oracle, p)?;
    let mut b = Builder::new(&prepared, 2 * p.generator_count(), vertex_budget);
    b.generate(radius)?;
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .flat_map(|r| r.rotations())
        .map(|r| r.letters().iter().map(|&l| letter_slot(l)).collect())
        .collect();
    b.close(&relators);
    Ok(b.finish(p, oracle, prepared.is_complete(), radius))
}

struct Builder<'a> {
    oracle: &'a PreparedOracle,
    slots: usize,
    budget: usize,
    words: Vec<Word>,
    parent: Vec<usize>,
    nbr: Vec<Vec<usize>>,
    keys: HashMap<OracleKey, usize>,
}

impl<'a> Builder<'a> {
    fn new(oracle: &'a PreparedOracle, slots: usize, budget: usize) -> Self {
        Self {
            oracle,
            slots,
            budget,
            words: Vec::new(),
            parent: Vec::new(),
            nbr: Vec::new(),
            keys: HashMap::new(),
        }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn add_vertex(&mut self, w: Word, key: OracleKey) -> Result<usize, ComplexError> {
        if self.words.len() >= self.budget {
            return Err(ComplexError::VertexBudget(self.budget));
        }
        let id = self.words.len();
        self.words.push(w);
        self.parent.push(id);
        self.nbr.push(vec![UNDEFINED; self.slots]);
        self.keys.insert(key, id);
        Ok(id)
    }

    fn lookup(&mut self, key: &OracleKey) -> Option<usize> {
        let v = *self.keys.get(key)?;
        Some(self.find(v))
    }

    fn neighbor(&mut self, v: usize, x: usize) -> Option<usize> {
        let t = self.nbr[v][x];
        if t == UNDEFINED {
            None
        } else {
            Some(self.find(t))
        }
    }

    /// Records `v · slot_letter(x) = t`. Returns `true` if anything changed.
    fn link(&mut self, v: usize, x: usize, t: usize) -> bool {
        let (v, t) = (self.find(v), self.find(t));
        let mut changed = false;
        for (a, s, b) in [(v, x, t), (t, x ^ 1, v)] {
            let a = self.find(a);
            let b = self.find(b);
            match self.neighbor(a, s) {
                None => {
                    self.nbr[a][s] = b;
                    changed = true;
                }
                Some(u) if u != b => {
                    self.merge(u, b);
                    changed = true;
                }
                Some(_) => {}
            }
        }
        changed
    }

    /// Identifies two vertices and everything their neighbor tables force.
    fn merge(&mut self, a: usize, b: usize) {
        let mut stack = vec![(a, b)];
        while let Some((a, b)) = stack.pop() {
            let (a, b) = (self.find(a), self.find(b));
            if a == b {
                continue;
            }
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            for x in 0..self.slots {
                let Some(t) = self.neighbor(drop, x) else { continue };
                match self.neighbor(keep, x) {
                    None => self.nbr[keep][x] = t,
                    Some(u) if u != t => stack.push((u, t)),
                    Some(_) => {}
                }
            }
        }
    }

    fn generate(&mut self, radius: usize) -> Result<(), ComplexError> {
        let root = self.add_vertex(Word::empty(), self.oracle.key(&Word::empty()))?;
        let mut layer = vec![root];
        for _ in 0..radius {
            let mut next = Vec::new();
            for &v in &layer {
                for x in 0..self.slots {
                    let v = self.find(v);
                    if self.neighbor(v, x).is_some() {
                        continue;
                    }
                    let mut w = self.words[v].clone();
                    w.push(slot_letter(x));
                    let w = w.free_reduce();
                    let key = self.oracle.key(&w);
                    let t = match self.lookup(&key) {
                        Some(t) => t,
                        None => {
                            let t = self.add_vertex(w, key)?;
                            next.push(t);
                            t
                        }
                    };
                    self.link(v, x, t);
                }
            }
            layer = next;
        }
        for v in 0..self.words.len() {
            for x in 0..self.slots {
                let v = self.find(v);
                if self.neighbor(v, x).is_some() {
                    continue;
                }
                let mut w = self.words[v].clone();
                w.push(slot_letter(x));
                let key = self.oracle.key(&w.free_reduce());
                if let Some(t) = self.lookup(&key) {
                    self.link(v, x, t);
                }
            }
        }
        Ok(())
    }

    /// Relator scans at every vertex until neither deductions nor
    /// coincidences occur.
    fn close(&mut self, relators: &[Vec<usize>]) {
        loop {
            let mut changed = false;
            for v in 0..self.words.len() {
                for r in relators {
                    if self.find(v) != v {
                        break;
                    }
                    changed |= self.scan(v, r);
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn scan(&mut self, v: usize, r: &[usize]) -> bool {
        let n = r.len();
        let (mut f, mut i) = (v, 0);
        while i < n {
            match self.neighbor(f, r[i]) {
                Some(t) => {
                    f = t;
                    i += 1;
                }
                None => break,
            }
        }
        if i == n {
            if f != self.find(v) {
                self.merge(f, v);
                return true;
            }
            return false;
        }
        let (mut b, mut j) = (self.find(v), n);
        while j > i {
            match self.neighbor(b, r[j - 1] ^ 1) {
                Some(t) => {
                    b = t;
                    j -= 1;
                }
                None => break,
            }
        }
        if j == i {
            if self.find(f) != self.find(b) {
                self.merge(f, b);
                return true;
            }
            false
        } else if j == i + 1 {
            self.link(f, r[i], b)
        } else {
            false
        }
    }

    fn finish(mut self, p: &Presentation, oracle: WordOracle, complete: bool, radius: usize) -> BallComplex {
        let root = self.find(0);
        let mut index = HashMap::new();
        let mut order = vec![root];
        let mut vertices = vec![Vertex {
            id: 0,
            word: Word::empty(),
            distance: 0,
        }];
        index.insert(root, 0usize);
        let mut head = 0;
        while head < order.len() {
            let c = order[head];
            for x in 0..self.slots {
                if let Some(t) = self.neighbor(c, x) {
                    if !index.contains_key(&t) {
                        index.insert(t, order.len());
                        let mut w = vertices[head].word.clone();
                        w.push(slot_letter(x));
                        vertices.push(Vertex {
                            id: order.len(),
                            word: w,
                            distance: vertices[head].distance + 1,
                        });
                        order.push(t);
                    }
                }
            }
            head += 1;
        }
        let neighbors: Vec<Vec<Option<usize>>> = order
            .iter()
            .map(|&c| {
                (0..self.slots)
                    .map(|x| self.neighbor(c, x).map(|t| index[&t]))
                    .collect()
            })
            .collect();
        BallComplex::assemble(p.clone(), oracle, complete, radius, vertices, neighbors)
    }
}

impl BallComplex {
    fn assemble(
        presentation: Presentation,
        oracle: WordOracle,
        oracle_complete: bool,
        radius: usize,
        vertices: Vec<Vertex>,
        neighbors: Vec<Vec<Option<usize>>>,
    ) -> Self {
        let gens = presentation.generator_count();
        let layer = |a: usize, b: usize| vertices[a].distance.max(vertices[b].distance);
        let mut raw_edges: Vec<(usize, usize, usize, usize)> = Vec::new();
        for v in 0..vertices.len() {
            for g in 0..gens {
                if let Some(t) = neighbors[v][2 * g] {
                    raw_edges.push((layer(v, t), v, g, t));
                }
            }
        }
        raw_edges.sort_unstable();
        let mut out_edge = vec![vec![None; gens]; vertices.len()];
        let edges: Vec<Edge> = raw_edges
            .into_iter()
            .enumerate()
            .map(|(id, (_, source, generator, target))| {
                out_edge[source][generator] = Some(id);
                Edge {
                    id,
                    source,
                    target,
                    generator,
                }
            })
            .collect();

        let mut raw_faces = Vec::new();
        for v in 0..vertices.len() {
            for (ri, r) in presentation.relators().iter().enumerate() {
                let mut cur = v;
                let mut far = vertices[v].distance;
                let mut boundary = Vec::with_capacity(r.len());
                let mut complete = true;
                for &l in r.letters() {
                    let g = letter_generator(l);
                    let step = if l > 0 {
                        out_edge[cur][g].map(|e| (e, 1, edges[e].target))
                    } else {
                        neighbors[cur][2 * g + 1]
                            .and_then(|prev| out_edge[prev][g].map(|e| (e, -1, prev)))
                    };
                    match step {
                        Some((e, s, next)) => {
                            boundary.push((e, s));
                            cur = next;
                            far = far.max(vertices[cur].distance);
                        }
                        None => {
                            complete = false;
                            break;
                        }
                    }
                }
                if complete && cur == v {
                    raw_faces.push((far, v, ri, boundary));
                }
            }
        }
        raw_faces.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        let faces = raw_faces
            .into_iter()
            .enumerate()
            .map(|(id, (_, base, relator, boundary))| Face {
                id,
                base,
                relator,
                boundary,
            })
            .collect();

        Self {
            presentation,
            oracle,
            oracle_complete,
            radius,
            vertices,
            edges,
            faces,
            neighbors,
            out_edge,
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn oracle(&self) -> WordOracle {
        self.oracle
    }

    /// `true` when the oracle used for identification was complete, so
    /// distinct vertices are distinct group elements.
    pub fn oracle_complete(&self) -> bool {
        self.oracle_complete
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// `v · letter` if that vertex lies in the ball.
    pub fn step(&self, v: usize, letter: i32) -> Option<usize> {
        self.neighbors[v][letter_slot(letter)]
    }

    /// Endpoint of the path reading `w` from `v`, if it stays in the ball.
    pub fn walk(&self, v: usize, w: &Word) -> Option<usize> {
        w.letters().iter().try_fold(v, |cur, &l| self.step(cur, l))
    }

    /// Signed edges of the path reading `w` from `v`.
    pub fn path_edges(&self, v: usize, w: &Word) -> Option<Vec<(usize, i64)>> {
        let mut cur = v;
        let mut out = Vec::with_capacity(w.len());
        for &l in w.letters() {
            let g = letter_generator(l);
            if l > 0 {
                let e = self.out_edge[cur][g]?;
                out.push((e, 1));
                cur = self.edges[e].target;
            } else {
                let prev = self.step(cur, l)?;
                let e = self.out_edge[prev][g]?;
                out.push((e, -1));
                cur = prev;
            }
        }
        Some(out)
    }

    /// Id of the edge `(v, generator)`.
    pub fn edge_from(&self, v: usize, generator: usize) -> Option<usize> {
        self.out_edge[v][generator]
    }

    /// Vertex ids at exactly the given distance, in id order.
    pub fn sphere(&self, distance: usize) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.distance == distance)
            .map(|v| v.id)
            .collect()
    }

    /// Label sequence of a face boundary, read as a word.
    pub fn face_word(&self, face: usize) -> Word {
        Word::new(
            self.faces[face]
                .boundary
                .iter()
                .map(|&(e, s)| (self.edges[e].generator as i32 + 1) * s as i32)
                .collect(),
        )
    }

    pub fn max_face_length(&self) -> usize {
        self.faces.iter().map(|f| f.boundary.len()).max().unwrap_or(0)
    }
}

impl CellComplex for BallComplex {
    fn truncation_radius(&self) -> Option<usize> {
        Some(self.radius)
    }

    fn top_dimension(&self) -> usize {
        2
    }

    fn cell_count(&self, dim: usize) -> usize {
        match dim {
            0 => self.vertices.len(),
            1 => self.edges.len(),
            2 => self.faces.len(),
            _ => 0,
        }
    }

    fn cell_boundary(&self, dim: usize, cell: usize) -> Vec<(usize, i64)> {
        match dim {
            1 => {
                let e = &self.edges[cell];
                merge_incidences([(e.target, 1), (e.source, -1)])
            }
            2 => merge_incidences(self.faces[cell].boundary.iter().copied()),
            _ => Vec::new(),
        }
    }

    fn orbit_label(&self, dim: usize, cell: usize) -> OrbitLabel {
        match dim {
            0 => OrbitLabel::Vertex,
            1 => OrbitLabel::Generator {
                index: self.edges[cell].generator,
            },
            _ => OrbitLabel::Relator {
                index: self.faces[cell].relator,
            },
        }
    }
}
