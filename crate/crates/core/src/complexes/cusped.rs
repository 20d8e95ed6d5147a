//! Balls in a cusped space: the Cayley 2-complex ball with a truncated
//! combinatorial horoball attached along every peripheral coset it meets.
//!
//! Horoball over a coset `gH`: vertices `(x, d)` for members `x` and depths
//! `0 ≤ d ≤ D`, with `(x, 0)` the base vertex itself; horizontal edges at
//! depth `d` join members at peripheral distance at most `2^d` (at depth 0
//! only distance 1); vertical edges join `(x, d)` and `(x, d + 1)`; every
//! simple loop of length 3 to 5 that is not entirely at depth 0 bounds a
//! 2-cell. Cells all of whose vertices have depth at least 1 form the
//! horoball subcomplex.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{
    build_ball_with_budget, merge_incidences, BallComplex, CellComplex, ComplexError, OrbitLabel,
    DEFAULT_VERTEX_BUDGET,
};
use crate::presentations::{
    AbelianQuotient, OracleKey, PreparedOracle, RelativePresentation, Word, WordOracle,
};

/// Vertex `(member, depth)` of the horoball over a coset, depth ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoroVertex {
    pub coset: usize,
    pub member: usize,
    pub depth: usize,
}

#[derive(Clone, Debug)]
struct Coset {
    peripheral: usize,
    members: Vec<usize>,
    /// Local node `(j, d)` is `d * members.len() + j`.
    edges: BTreeMap<(usize, usize), usize>,
}

#[derive(Clone, Debug)]
struct ExtraCell {
    boundary: Vec<(usize, i64)>,
    label: OrbitLabel,
    horoball: bool,
}

#[derive(Clone, Debug)]
pub struct CuspedBall {
    base: BallComplex,
    depth: usize,
    cosets: Vec<Coset>,
    horo_vertices: Vec<HoroVertex>,
    /// Global id of `(coset, member index, depth ≥ 1)` is
    /// `horo_offset[coset] + (depth - 1) * members + member index`.
    horo_offset: Vec<usize>,
    extra_edges: Vec<ExtraCell>,
    extra_faces: Vec<ExtraCell>,
}

pub fn build_cusped_ball(rp: &RelativePresentation, radius: usize, depth: usize) -> Result<CuspedBall, ComplexError> {
    build_cusped_ball_with_budget(rp, radius, depth, DEFAULT_VERTEX_BUDGET)
}

/// Translation-invariant text for a relative element key.
fn render_key(k: &OracleKey) -> String {
    match k {
        OracleKey::Vector(v) => {
            let parts: Vec<String> = v.iter().map(i64::to_string).collect();
            format!("({})", parts.join(","))
        }
        OracleKey::Element(e) => format!("#{e}"),
        OracleKey::Word(w) => format!("{:?}", w.letters()),
    }
}

enum CosetKeyer {
    Abelian(AbelianQuotient),
    Finite(Vec<usize>),
}

pub fn build_cusped_ball_with_budget(
    rp: &RelativePresentation,
    radius: usize,
    depth: usize,
    vertex_budget: usize,
) -> Result<CuspedBall, ComplexError> {
    let p = rp.ambient();
    let oracle_kind = rp.ambient_oracle().unwrap_or(WordOracle::FreeReduction);
    let oracle = PreparedOracle::new(oracle_kind, p)?;
    let complete_kind = matches!(
        oracle_kind,
        WordOracle::AbelianNormalForm | WordOracle::FiniteEnumeration { .. }
    );
    if !complete_kind && !rp.peripherals().is_empty() {
        return Err(ComplexError::IncompleteAmbientOracle(oracle_kind.to_string()));
    }
    for per in rp.peripherals() {
        if !matches!(
            per.oracle,
            WordOracle::AbelianNormalForm | WordOracle::FiniteEnumeration { .. }
        ) {
            return Err(ComplexError::IncompletePeripheralOracle(per.name.clone()));
        }
    }
    let base = build_ball_with_budget(p, radius, oracle_kind, vertex_budget)?;
    let nv = base.vertices().len();
    let words: Vec<&Word> = base.vertices().iter().map(|v| &v.word).collect();

    let mut cosets: Vec<Coset> = Vec::new();
    let mut distance_tables = Vec::new();
    for (pi, per) in rp.peripherals().iter().enumerate() {
        let keyer = match (oracle.abelian_quotient(), oracle.finite_group()) {
            (Some(a), _) => {
                let extra: Vec<Vec<i64>> = per
                    .generators
                    .iter()
                    .map(|w| w.exponent_sums(p.generator_count()))
                    .collect();
                CosetKeyer::Abelian(a.extend(&extra).map_err(crate::presentations::OracleError::from)?)
            }
            (None, Some(g)) => CosetKeyer::Finite(g.subgroup(&per.generators)),
            (None, None) => return Err(ComplexError::IncompleteAmbientOracle(oracle_kind.to_string())),
        };
        let coset_key = |w: &Word| -> OracleKey {
            match &keyer {
                CosetKeyer::Abelian(a) => OracleKey::Vector(a.normal_form(w)),
                CosetKeyer::Finite(h) => {
                    let g = oracle.finite_group().expect("finite engine");
                    let e = g.element_of(w);
                    OracleKey::Element(h.iter().map(|&x| g.multiply(e, x)).min().unwrap_or(e))
                }
            }
        };
        let mut by_key: HashMap<OracleKey, usize> = HashMap::new();
        for (v, w) in words.iter().enumerate() {
            let k = coset_key(w);
            let ci = *by_key.entry(k).or_insert_with(|| {
                cosets.push(Coset {
                    peripheral: pi,
                    members: Vec::new(),
                    edges: BTreeMap::new(),
                });
                cosets.len() - 1
            });
            cosets[ci].members.push(v);
        }
        distance_tables.push(peripheral_distances(&oracle, &per.generators, 1usize << depth.min(20)));
    }

    let mut horo_vertices = Vec::new();
    let mut horo_offset = Vec::with_capacity(cosets.len());
    for (ci, c) in cosets.iter().enumerate() {
        horo_offset.push(nv + horo_vertices.len());
        for d in 1..=depth {
            for &member in &c.members {
                horo_vertices.push(HoroVertex {
                    coset: ci,
                    member,
                    depth: d,
                });
            }
        }
        if nv + horo_vertices.len() > vertex_budget {
            return Err(ComplexError::VertexBudget(vertex_budget));
        }
    }

    let mut cb = CuspedBall {
        base,
        depth,
        cosets,
        horo_vertices,
        horo_offset,
        extra_edges: Vec::new(),
        extra_faces: Vec::new(),
    };
    for ci in 0..cb.cosets.len() {
        let pi = cb.cosets[ci].peripheral;
        let per = &rp.peripherals()[pi];
        cb.attach_horoball(ci, &oracle, &per.generators, &distance_tables[pi]);
    }
    Ok(cb)
}

/// Word length in the peripheral generators, for elements up to `limit`.
fn peripheral_distances(oracle: &PreparedOracle, gens: &[Word], limit: usize) -> HashMap<OracleKey, usize> {
    let mut dist = HashMap::new();
    dist.insert(oracle.key(&Word::empty()), 0);
    let mut queue = VecDeque::from([(Word::empty(), 0usize)]);
    let steps: Vec<Word> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    while let Some((w, d)) = queue.pop_front() {
        if d == limit {
            continue;
        }
        for s in &steps {
            let next = w.concat(s).free_reduce();
            let k = oracle.key(&next);
            if !dist.contains_key(&k) {
                dist.insert(k, d + 1);
                queue.push_back((next, d + 1));
            }
        }
    }
    dist
}

fn canonical_edge_shape(prefix: &str, forward: &str, backward: &str) -> String {
    let key = if forward <= backward { forward } else { backward };
    format!("{prefix}:{key}")
}

impl CuspedBall {
    fn attach_horoball(
        &mut self,
        ci: usize,
        oracle: &PreparedOracle,
        gens: &[Word],
        dist: &HashMap<OracleKey, usize>,
    ) {
        let nv = self.base.vertices().len();
        let ne = self.base.edges().len();
        let depth = self.depth;
        let members = self.cosets[ci].members.clone();
        let m = members.len();
        let pi = self.cosets[ci].peripheral;
        let word = |j: usize| &self.base.vertices()[members[j]].word;
        let rel_key = |a: usize, b: usize| oracle.key(&word(a).inverse().concat(word(b)).free_reduce());
        let single_letters: Vec<(OracleKey, i32)> = gens
            .iter()
            .filter(|g| g.len() == 1)
            .flat_map(|g| {
                let l = g.letters()[0];
                [(oracle.key(g), l), (oracle.key(&g.inverse()), -l)]
            })
            .collect();
        let global = |j: usize, d: usize| -> usize {
            if d == 0 {
                members[j]
            } else {
                self.horo_offset[ci] + (d - 1) * m + j
            }
        };

        let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut new_edges: Vec<ExtraCell> = Vec::new();
        let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); m * (depth + 1)];
        let mut add = |a: usize, b: usize, id: usize, adjacency: &mut Vec<Vec<usize>>| {
            edges.insert((a.min(b), a.max(b)), id);
            adjacency[a].push(b);
            adjacency[b].push(a);
        };
        for d in 0..=depth {
            let reach = 1usize << d;
            for a in 0..m {
                for b in a + 1..m {
                    let k = rel_key(a, b);
                    let Some(&h) = dist.get(&k) else { continue };
                    if h == 0 || h > reach {
                        continue;
                    }
                    let (la, lb) = (d * m + a, d * m + b);
                    if d == 0 {
                        let reused = single_letters
                            .iter()
                            .find(|(key, _)| *key == k)
                            .and_then(|&(_, l)| self.base.path_edges(members[a], &Word::new(vec![l])));
                        if let Some(path) = reused {
                            add(la, lb, path[0].0, &mut adjacency);
                            continue;
                        }
                    }
                    let shape = canonical_edge_shape(
                        &format!("e{d}"),
                        &render_key(&k),
                        &render_key(&rel_key(b, a)),
                    );
                    let id = ne + self.extra_edges.len() + new_edges.len();
                    new_edges.push(ExtraCell {
                        boundary: merge_incidences([(global(b, d), 1), (global(a, d), -1)]),
                        label: OrbitLabel::Horo { peripheral: pi, shape },
                        horoball: d >= 1,
                    });
                    add(la, lb, id, &mut adjacency);
                }
            }
        }
        for d in 0..depth {
            for j in 0..m {
                let id = ne + self.extra_edges.len() + new_edges.len();
                new_edges.push(ExtraCell {
                    boundary: merge_incidences([(global(j, d + 1), 1), (global(j, d), -1)]),
                    label: OrbitLabel::Horo {
                        peripheral: pi,
                        shape: format!("v{d}"),
                    },
                    horoball: d >= 1,
                });
                add(d * m + j, (d + 1) * m + j, id, &mut adjacency);
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }

        let mut new_faces = Vec::new();
        for cycle in short_cycles(&adjacency, 5) {
            if cycle.iter().all(|&x| x < m) {
                continue;
            }
            let nodes: Vec<(usize, usize)> = cycle.iter().map(|&x| (x % m, x / m)).collect();
            let mut boundary = Vec::with_capacity(cycle.len());
            for t in 0..cycle.len() {
                let (a, b) = (cycle[t], cycle[(t + 1) % cycle.len()]);
                let id = edges[&(a.min(b), a.max(b))];
                let source = self.edge_source(id, &new_edges, ne);
                let ga = global(nodes[t].0, nodes[t].1);
                boundary.push((id, if source == ga { 1 } else { -1 }));
            }
            let shape = canonical_loop_shape(&nodes, |a, b| render_key(&rel_key(a, b)));
            new_faces.push(ExtraCell {
                boundary,
                label: OrbitLabel::Horo { peripheral: pi, shape },
                horoball: nodes.iter().all(|&(_, d)| d >= 1),
            });
        }
        let _ = nv;
        self.cosets[ci].edges = edges;
        self.extra_edges.extend(new_edges);
        self.extra_faces.extend(new_faces);
    }

    fn edge_source(&self, id: usize, pending: &[ExtraCell], ne: usize) -> usize {
        let cell = if id < ne {
            return self.base.edges()[id].source;
        } else if id - ne < self.extra_edges.len() {
            &self.extra_edges[id - ne]
        } else {
            &pending[id - ne - self.extra_edges.len()]
        };
        cell.boundary
            .iter()
            .find(|&&(_, s)| s == -1)
            .map(|&(v, _)| v)
            .expect("edge has a source")
    }

    pub fn base(&self) -> &BallComplex {
        &self.base
    }

    pub fn depth_limit(&self) -> usize {
        self.depth
    }

    pub fn coset_count(&self) -> usize {
        self.cosets.len()
    }

    /// Base vertices of a coset, in id order.
    pub fn coset_members(&self, coset: usize) -> &[usize] {
        &self.cosets[coset].members
    }

    pub fn coset_peripheral(&self, coset: usize) -> usize {
        self.cosets[coset].peripheral
    }

    /// Cosets a base vertex belongs to.
    pub fn cosets_of(&self, v: usize) -> Vec<usize> {
        (0..self.cosets.len())
            .filter(|&c| self.cosets[c].members.binary_search(&v).is_ok())
            .collect()
    }

    pub fn horo_vertices(&self) -> &[HoroVertex] {
        &self.horo_vertices
    }

    /// Global id of member `j` of a coset at depth `d`.
    pub fn vertex_at(&self, coset: usize, j: usize, d: usize) -> usize {
        if d == 0 {
            self.cosets[coset].members[j]
        } else {
            self.horo_offset[coset] + (d - 1) * self.cosets[coset].members.len() + j
        }
    }

    pub fn vertex_depth(&self, v: usize) -> usize {
        let nv = self.base.vertices().len();
        if v < nv {
            0
        } else {
            self.horo_vertices[v - nv].depth
        }
    }

    /// Coset owning a vertex of depth ≥ 1.
    pub fn vertex_coset(&self, v: usize) -> Option<usize> {
        let nv = self.base.vertices().len();
        v.checked_sub(nv).map(|i| self.horo_vertices[i].coset)
    }

    /// Oriented edge of a coset's horoball between members `a` at depth `da`
    /// and `b` at depth `db`, as `(edge id, sign)` for traversal from the
    /// first to the second.
    pub fn horo_edge(&self, coset: usize, a: (usize, usize), b: (usize, usize)) -> Option<(usize, i64)> {
        let m = self.cosets[coset].members.len();
        let (la, lb) = (a.1 * m + a.0, b.1 * m + b.0);
        let id = *self.cosets[coset].edges.get(&(la.min(lb), la.max(lb)))?;
        let from = self.vertex_at(coset, a.0, a.1);
        let source = self.edge_source(id, &[], self.base.edges().len());
        Some((id, if source == from { 1 } else { -1 }))
    }

    /// Vertex ids of the 0-cells of a cell of any dimension.
    pub fn cell_vertices(&self, dim: usize, cell: usize) -> Vec<usize> {
        match dim {
            0 => vec![cell],
            _ => {
                let mut out: Vec<usize> = self
                    .cell_boundary(dim, cell)
                    .into_iter()
                    .flat_map(|(f, _)| self.cell_vertices(dim - 1, f))
                    .collect();
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }
}

/// Simple cycles of length 3 to `max_len`, each listed once starting at its
/// smallest node.
fn short_cycles(adjacency: &[Vec<usize>], max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(max_len);
    for s in 0..adjacency.len() {
        path.clear();
        path.push(s);
        extend_cycles(adjacency, s, max_len, &mut path, &mut out);
    }
    out
}

fn extend_cycles(adjacency: &[Vec<usize>], s: usize, max_len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let last = *path.last().expect("nonempty path");
    for &next in &adjacency[last] {
        if next == s && path.len() >= 3 && path[1] < last {
            out.push(path.clone());
        } else if next > s && !path.contains(&next) && path.len() < max_len {
            path.push(next);
            extend_cycles(adjacency, s, max_len, path, out);
            path.pop();
        }
    }
}

/// Lexicographically least reading of a loop over all starting points and
/// both directions, with positions relative to the starting vertex.
fn canonical_loop_shape(nodes: &[(usize, usize)], rel: impl Fn(usize, usize) -> String) -> String {
    let n = nodes.len();
    let mut best: Option<String> = None;
    for start in 0..n {
        for dir in [1isize, -1] {
            let origin = nodes[start].0;
            let parts: Vec<String> = (0..n)
                .map(|t| {
                    let idx = (start as isize + dir * t as isize).rem_euclid(n as isize) as usize;
                    let (j, d) = nodes[idx];
                    format!("{d}{}", rel(origin, j))
                })
                .collect();
            let s = parts.join(" ");
            if best.as_ref().is_none_or(|b| s < *b) {
                best = Some(s);
            }
        }
    }
    best.unwrap_or_default()
}

impl CellComplex for CuspedBall {
    fn truncation_radius(&self) -> Option<usize> {
        Some(self.base.radius())
    }

    fn top_dimension(&self) -> usize {
        2
    }

    fn cell_count(&self, dim: usize) -> usize {
        match dim {
            0 => self.base.cell_count(0) + self.horo_vertices.len(),
            1 => self.base.cell_count(1) + self.extra_edges.len(),
            2 => self.base.cell_count(2) + self.extra_faces.len(),
            _ => 0,
        }
    }

    fn cell_boundary(&self, dim: usize, cell: usize) -> Vec<(usize, i64)> {
        let nb = self.base.cell_count(dim);
        if cell < nb {
            return self.base.cell_boundary(dim, cell);
        }
        match dim {
            1 => self.extra_edges[cell - nb].boundary.clone(),
            2 => merge_incidences(self.extra_faces[cell - nb].boundary.iter().copied()),
            _ => Vec::new(),
        }
    }

    fn orbit_label(&self, dim: usize, cell: usize) -> OrbitLabel {
        let nb = self.base.cell_count(dim);
        if cell < nb {
            return self.base.orbit_label(dim, cell);
        }
        match dim {
            0 => {
                let hv = &self.horo_vertices[cell - nb];
                OrbitLabel::Horo {
                    peripheral: self.cosets[hv.coset].peripheral,
                    shape: format!("d{}", hv.depth),
                }
            }
            1 => self.extra_edges[cell - nb].label.clone(),
            _ => self.extra_faces[cell - nb].label.clone(),
        }
    }

    fn is_horoball(&self, dim: usize, cell: usize) -> bool {
        let nb = self.base.cell_count(dim);
        if cell < nb {
            return false;
        }
        match dim {
            0 => true,
            1 => self.extra_edges[cell - nb].horoball,
            _ => self.extra_faces[cell - nb].horoball,
        }
    }
}
