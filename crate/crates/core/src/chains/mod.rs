//! Chains and cochains over a finite cell complex, with the cellular
//! boundary and coboundary, ℓ¹ and per-orbit sup norms.

mod operator;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::complexes::{CellComplex, OrbitLabel};
use crate::scalar::Scalar;

pub use operator::BoundaryOperator;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("the boundary of a 0-chain is not defined")]
    DimensionZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cell {id} does not exist in dimension {dim}")]
    CellOutOfRange { dim: usize, id: usize },
}

/// Finite formal sum of `dim`-cells; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseChain<S> {
    dim: usize,
    entries: BTreeMap<usize, S>,
}

impl<S: Scalar> SparseChain<S> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
        }
    }

    /// Sums repeated ids and drops zero coefficients.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut c = Self::zero(dim);
        for (id, v) in entries {
            c.add_at(id, v);
        }
        c
    }

    pub fn cell(dim: usize, id: usize, coefficient: S) -> Self {
        Self::from_entries(dim, [(id, coefficient)])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<usize, S> {
        &self.entries
    }

    pub fn get(&self, id: usize) -> S {
        self.entries.get(&id).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn add_at(&mut self, id: usize, v: S) {
        if v.is_negligible() {
            return;
        }
        let slot = self.entries.entry(id).or_insert_with(S::zero);
        *slot = slot.clone() + v;
        if slot.is_negligible() {
            self.entries.remove(&id);
        }
    }

    /// `self + factor · other`.
    pub fn add_scaled(&self, other: &Self, factor: &S) -> Result<Self, ChainError> {
        if other.dim != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        let mut out = self.clone();
        for (&id, v) in &other.entries {
            out.add_at(id, v.clone() * factor.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &S) -> Self {
        Self::from_entries(
            self.dim,
            self.entries.iter().map(|(&id, v)| (id, v.clone() * factor.clone())),
        )
    }

    pub fn l1_norm(&self) -> S {
        self.entries.values().fold(S::zero(), |acc, v| acc + v.abs())
    }

    /// Rejects ids outside the complex.
    pub fn validate(&self, complex: &dyn CellComplex) -> Result<(), ChainError> {
        let n = complex.cell_count(self.dim);
        match self.entries.keys().find(|&&id| id >= n) {
            Some(&id) => Err(ChainError::CellOutOfRange { dim: self.dim, id }),
            None => Ok(()),
        }
    }

    /// `{"dim": k, "entries": {"id": "p/q"}}`.
    pub fn to_literal(&self) -> Value {
        let entries: Map<String, Value> = self
            .entries
            .iter()
            .map(|(id, v)| (id.to_string(), Value::String(v.render())))
            .collect();
        json!({ "dim": self.dim, "entries": entries })
    }

    pub fn from_literal(v: &Value) -> Option<Self> {
        let dim = v.get("dim")?.as_u64()? as usize;
        let mut out = Self::zero(dim);
        for (id, val) in v.get("entries")?.as_object()? {
            out.add_at(id.parse().ok()?, S::parse_rendered(val.as_str()?)?);
        }
        Some(out)
    }
}

/// Value of a cochain on cells without an explicit entry.
#[derive(Clone, Debug, PartialEq)]
pub enum CochainDefault<S> {
    ZeroOutside,
    /// Orbit-constant: each cell takes the value of its orbit label (zero
    /// for labels not listed). These are exactly the pulled-back equivariant
    /// cochains.
    OrbitConstant(BTreeMap<OrbitLabel, S>),
}

/// Real-valued function on `dim`-cells: explicit entries over a default rule.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseCochain<S> {
    dim: usize,
    entries: BTreeMap<usize, S>,
    default: CochainDefault<S>,
}

/// Per-orbit supremum of absolute values, with the overall maximum.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSupNorm<S> {
    pub per_orbit: BTreeMap<OrbitLabel, S>,
    pub global: S,
}

/// Result of a cocycle check; `witness` is a `(dim + 1)`-cell where `δa` is
/// nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCheck {
    pub is_cocycle: bool,
    pub witness: Option<usize>,
}

impl<S: Scalar> SparseCochain<S> {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
            default: CochainDefault::ZeroOutside,
        }
    }

    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, S)>) -> Self {
        let entries = entries
            .into_iter()
            .filter(|(_, v)| !v.is_negligible())
            .collect();
        Self {
            dim,
            entries,
            default: CochainDefault::ZeroOutside,
        }
    }

    /// Equivariant cochain taking `values[label]` on every cell of that orbit.
    pub fn orbit_constant(dim: usize, values: BTreeMap<OrbitLabel, S>) -> Self {
        Self {
            dim,
            entries: BTreeMap::new(),
            default: CochainDefault::OrbitConstant(values),
        }
    }

    /// Explicit entries win over the default rule.
    pub fn with_entry(mut self, id: usize, v: S) -> Self {
        self.entries.insert(id, v);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &BTreeMap<usize, S> {
        &self.entries
    }

    pub fn default_rule(&self) -> &CochainDefault<S> {
        &self.default
    }

    pub fn is_orbit_constant(&self) -> bool {
        matches!(self.default, CochainDefault::OrbitConstant(_)) && self.entries.is_empty()
    }

    pub fn value(&self, complex: &dyn CellComplex, cell: usize) -> S {
        if let Some(v) = self.entries.get(&cell) {
            return v.clone();
        }
        match &self.default {
            CochainDefault::ZeroOutside => S::zero(),
            CochainDefault::OrbitConstant(map) => map
                .get(&complex.orbit_label(self.dim, cell))
                .cloned()
                .unwrap_or_else(S::zero),
        }
    }

    /// All values on the complex as explicit entries.
    pub fn materialize(&self, complex: &dyn CellComplex) -> Self {
        Self::from_entries(
            self.dim,
            (0..complex.cell_count(self.dim)).map(|c| (c, self.value(complex, c))),
        )
    }

    /// `⟨a, c⟩`, summed over the support of `c`.
    pub fn pairing(&self, complex: &dyn CellComplex, c: &SparseChain<S>) -> Result<S, ChainError> {
        if c.dim() != self.dim {
            return Err(ChainError::DimensionMismatch {
                expected: self.dim,
                got: c.dim(),
            });
        }
        Ok(c
            .entries()
            .iter()
            .fold(S::zero(), |acc, (&id, v)| acc + self.value(complex, id) * v.clone()))
    }

    pub fn orbit_sup_norm(&self, complex: &dyn CellComplex) -> OrbitSupNorm<S> {
        let mut per_orbit: BTreeMap<OrbitLabel, S> = BTreeMap::new();
        let mut global = S::zero();
        for c in 0..complex.cell_count(self.dim) {
            let v = self.value(complex, c).abs();
            let slot = per_orbit
                .entry(complex.orbit_label(self.dim, c))
                .or_insert_with(S::zero);
            if v > *slot {
                *slot = v.clone();
            }
            if v > global {
                global = v;
            }
        }
        OrbitSupNorm { per_orbit, global }
    }

    /// Largest absolute value over the cells of the complex.
    pub fn sup_norm(&self, complex: &dyn CellComplex) -> S {
        self.orbit_sup_norm(complex).global
    }

    pub fn to_literal(&self) -> Value {
        let entries: Map<String, Value> = self
            .entries
            .iter()
            .map(|(id, v)| (id.to_string(), Value::String(v.render())))
            .collect();
        let default = match &self.default {
            CochainDefault::ZeroOutside => Value::String("zero".into()),
            CochainDefault::OrbitConstant(map) => {
                let m: Map<String, Value> = map
                    .iter()
                    .map(|(l, v)| (l.to_string(), Value::String(v.render())))
                    .collect();
                json!({ "orbit_constant": m })
            }
        };
        json!({ "dim": self.dim, "entries": entries, "default": default })
    }
}

/// `∂c`, an error for 0-chains.
pub fn boundary<S: Scalar>(complex: &dyn CellComplex, c: &SparseChain<S>) -> Result<SparseChain<S>, ChainError> {
    if c.dim() == 0 {
        return Err(ChainError::DimensionZero);
    }
    c.validate(complex)?;
    let mut out = SparseChain::zero(c.dim() - 1);
    for (&id, v) in c.entries() {
        for (face, s) in complex.cell_boundary(c.dim(), id) {
            out.add_at(face, v.clone() * S::from_int(s));
        }
    }
    Ok(out)
}

/// `δa` with explicit entries on every `(dim + 1)`-cell; `(δa)(σ) = a(∂σ)`.
pub fn coboundary<S: Scalar>(complex: &dyn CellComplex, a: &SparseCochain<S>) -> SparseCochain<S> {
    let d = a.dim() + 1;
    SparseCochain::from_entries(
        d,
        (0..complex.cell_count(d)).map(|cell| {
            let v = complex
                .cell_boundary(d, cell)
                .into_iter()
                .fold(S::zero(), |acc, (face, s)| acc + a.value(complex, face) * S::from_int(s));
            (cell, v)
        }),
    )
}

pub fn l1_norm<S: Scalar>(c: &SparseChain<S>) -> S {
    c.l1_norm()
}

pub fn orbit_sup_norm<S: Scalar>(complex: &dyn CellComplex, a: &SparseCochain<S>) -> OrbitSupNorm<S> {
    a.orbit_sup_norm(complex)
}

/// Checks `δa = 0` on every `(dim + 1)`-cell; vacuous without such cells.
pub fn is_cocycle<S: Scalar>(complex: &dyn CellComplex, a: &SparseCochain<S>) -> CocycleCheck {
    let d = a.dim() + 1;
    for cell in 0..complex.cell_count(d) {
        let v = complex
            .cell_boundary(d, cell)
            .into_iter()
            .fold(S::zero(), |acc, (face, s)| acc + a.value(complex, face) * S::from_int(s));
        if !v.is_negligible() {
            return CocycleCheck {
                is_cocycle: false,
                witness: Some(cell),
            };
        }
    }
    CocycleCheck {
        is_cocycle: true,
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{build_ball, BallComplex};
    use crate::presentations::{parse_presentation, WordOracle};
    use crate::scalar::{q, qi, Rational};
    use num_traits::Signed;

    fn z2(r: usize) -> BallComplex {
        let p = parse_presentation("gens: a b\nrel: abAB").unwrap();
        build_ball(&p, r, WordOracle::AbelianNormalForm).unwrap()
    }

    fn z(r: usize) -> BallComplex {
        build_ball(&parse_presentation("gens: a").unwrap(), r, WordOracle::FreeReduction).unwrap()
    }

    #[test]
    fn face_boundaries() {
        let b = z2(2);
        let f = SparseChain::cell(2, 0, qi(1));
        let df = boundary(&b, &f).unwrap();
        assert_eq!(df.l1_norm(), qi(4));
        // faces at the identity and at A share the edge (1, b)
        let a = b.step(0, -1).unwrap();
        let fa = b.faces().iter().find(|x| x.base == a).unwrap().id;
        let f0 = b.faces().iter().find(|x| x.base == 0).unwrap().id;
        let two = SparseChain::from_entries(2, [(f0, qi(1)), (fa, qi(1))]);
        let d2 = boundary(&b, &two).unwrap();
        assert_eq!(d2.support_size(), 6);
        assert_eq!(d2.l1_norm(), qi(6));
        assert!(boundary(&b, &SparseChain::<Rational>::zero(2)).unwrap().is_zero());
        assert_eq!(
            boundary(&b, &SparseChain::<Rational>::zero(0)).unwrap_err(),
            ChainError::DimensionZero
        );
    }

    #[test]
    fn distance_coboundary_on_z() {
        let b = z(3);
        let u = SparseCochain::from_entries(
            0,
            b.vertices().iter().map(|v| (v.id, qi(v.distance as i64))),
        );
        let du = coboundary(&b, &u);
        assert_eq!(du.entries().len(), b.edges().len());
        assert!(du.entries().values().all(|v| v.abs() == qi(1)));
        let n = du.orbit_sup_norm(&b);
        assert_eq!(n.global, qi(1));
        assert_eq!(n.per_orbit[&OrbitLabel::Generator { index: 0 }], qi(1));
        assert!(is_cocycle(&b, &du).is_cocycle);
    }

    #[test]
    fn norms_and_cocycle_witness() {
        let c = SparseChain::from_entries(2, [(0, q(3, 2)), (1, q(-1, 2))]);
        assert_eq!(c.l1_norm(), qi(2));
        let b = z2(2);
        let vals = SparseCochain::from_entries(1, [(0, qi(1)), (1, qi(-5)), (2, qi(2))]);
        assert_eq!(vals.sup_norm(&b), qi(5));
        let e = b.faces()[0].boundary[0].0;
        let single = SparseCochain::from_entries(1, [(e, qi(1))]);
        let check = is_cocycle(&b, &single);
        assert!(!check.is_cocycle);
        assert_eq!(check.witness, Some(0));
        assert!(is_cocycle(&b, &SparseCochain::from_entries(2, [(0, qi(7))])).is_cocycle);
    }

    #[test]
    fn orbit_constant_values_follow_labels() {
        let b = z2(2);
        let mut vals = BTreeMap::new();
        vals.insert(OrbitLabel::Generator { index: 0 }, qi(2));
        vals.insert(OrbitLabel::Generator { index: 1 }, qi(-3));
        let a = SparseCochain::orbit_constant(1, vals);
        for e in b.edges() {
            let expect = if e.generator == 0 { qi(2) } else { qi(-3) };
            assert_eq!(a.value(&b, e.id), expect);
        }
        let da = coboundary(&b, &a);
        assert!(da.entries().is_empty());
        assert_eq!(a.sup_norm(&b), qi(3));
    }

    #[test]
    fn literals_round_trip() {
        let c = SparseChain::from_entries(1, [(3, q(-2, 3)), (0, qi(1))]);
        let lit = c.to_literal();
        assert_eq!(lit.to_string(), r#"{"dim":1,"entries":{"0":"1/1","3":"-2/3"}}"#);
        assert_eq!(SparseChain::<Rational>::from_literal(&lit), Some(c));
    }
}
