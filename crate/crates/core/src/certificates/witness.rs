//! Non-vanishing witness on the product of an `n`-dimensional cube grid
//! with a ball of an infinite group.
//!
//! With `u` the word distance from the identity and `α = δu`, the cocycle
//! `β` takes the value `α(f)` on `(top cube) × f` and 0 elsewhere. On the box
//! chain `c = q × p` (all top cubes times a geodesic of length `k`) it gives
//! `β(c) = k^{n+1}` while `‖∂c‖₁ = 2(n+1)kⁿ`, so every primitive has sup norm
//! at least `k / (2(n+1))`.

use num_traits::Pow;

use crate::chains::{boundary, coboundary, SparseChain, SparseCochain};
use crate::complexes::{build_grid_product, BallComplex, GridProductComplex, ProductCell};
use crate::lpcore::LpBudget;
use crate::report::CertificateReport;
use crate::scalar::{qi, Extended, Rational};

use super::iso::{iso_constant, IsoCertificate};
use super::CertificateError;

#[derive(Clone, Debug)]
pub struct WitnessReport {
    pub n: usize,
    pub k: usize,
    pub beta_value: Rational,
    pub boundary_norm: Rational,
    /// `min{‖μ‖∞ : δμ = β}` on the truncation.
    pub min_primitive: Extended<Rational>,
    pub expected_beta: Rational,
    pub expected_boundary: Rational,
    pub lower_bound: Rational,
    pub chain: SparseChain<Rational>,
    pub certificate: IsoCertificate,
}

/// Base vertex `0` to the lowest-id vertex at distance `k`, as signed edges.
fn geodesic(base: &BallComplex, k: usize) -> Option<Vec<(usize, i64)>> {
    let end = *base.sphere(k).first()?;
    base.path_edges(0, &base.vertices()[end].word)
}

/// The cocycle `β` on `(n+1)`-cells of the product.
pub fn product_cocycle(product: &GridProductComplex, alpha: &SparseCochain<Rational>) -> SparseCochain<Rational> {
    let n = product.grid_dimension();
    let base = product.base();
    let entries = (0..product.grid_cells(n).len()).flat_map(|g| {
        (0..base.edges().len()).filter_map(move |e| {
            let cell = ProductCell {
                grid_dim: n,
                grid: g,
                base_dim: 1,
                base: e,
            };
            product.index_of(cell).map(|id| (id, alpha.value(base, e)))
        })
    });
    SparseCochain::from_entries(n + 1, entries.collect::<Vec<_>>())
}

pub fn product_witness(n: usize, k: usize, base: &BallComplex, budget: LpBudget) -> Result<WitnessReport, CertificateError> {
    if n == 0 || k == 0 {
        return Err(CertificateError::InvalidParameter("n and k must be positive".into()));
    }
    if !base.oracle_complete() {
        return Err(CertificateError::IncompleteOracle(base.oracle().to_string()));
    }
    if base.radius() < k {
        return Err(CertificateError::BaseTooSmall(format!("radius {} below k = {k}", base.radius())));
    }
    let path = geodesic(base, k)
        .ok_or_else(|| CertificateError::BaseTooSmall(format!("no vertex at distance {k}; the group looks finite")))?;

    let u = SparseCochain::from_entries(0, base.vertices().iter().map(|v| (v.id, qi(v.distance as i64))));
    let alpha = coboundary(base, &u);
    let product = build_grid_product(base, n, k)?;
    let beta = product_cocycle(&product, &alpha);

    let cubes = product.grid_cells(n).len();
    let mut entries = Vec::with_capacity(cubes * path.len());
    for g in 0..cubes {
        for &(e, s) in &path {
            let cell = ProductCell {
                grid_dim: n,
                grid: g,
                base_dim: 1,
                base: e,
            };
            let id = product.index_of(cell).ok_or(CertificateError::Inconsistent("box cell missing from the product"))?;
            entries.push((id, qi(s)));
        }
    }
    let chain = SparseChain::from_entries(n + 1, entries);
    let beta_value = beta.pairing(&product, &chain)?;
    let boundary_norm = boundary(&product, &chain)?.l1_norm();
    let certificate = iso_constant(&product, &beta, budget)?;

    let kq = qi(k as i64);
    let nq = qi(n as i64 + 1);
    Ok(WitnessReport {
        n,
        k,
        beta_value,
        boundary_norm,
        min_primitive: certificate.lambda.clone(),
        expected_beta: Pow::pow(kq.clone(), n as u32 + 1),
        expected_boundary: qi(2) * nq.clone() * Pow::pow(kq.clone(), n as u32),
        lower_bound: kq / (qi(2) * nq),
        chain,
        certificate,
    })
}

impl WitnessReport {
    pub fn report(&self) -> CertificateReport {
        let mut r = CertificateReport::new("witness").with_radius(self.certificate.radius);
        r.set_value(&self.min_primitive);
        r.witness_chain = Some(self.chain.to_literal());
        r.primitive = self.certificate.primitive.as_ref().map(|m| m.to_literal());
        r.detail("n", self.n);
        r.detail("k", self.k);
        r.detail("lp_pivots", self.certificate.solution.pivots);
        r.check_eq("beta(c) = k^(n+1)", &self.expected_beta, &self.beta_value);
        r.check_eq("|dc|_1 = 2(n+1)k^n", &self.expected_boundary, &self.boundary_norm);
        r.check_at_least("min primitive >= k/(2(n+1))", &self.lower_bound, &self.min_primitive);
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_ball;
    use crate::corpus;
    use crate::presentations::WordOracle;
    use crate::scalar::q;

    fn z(r: usize) -> BallComplex {
        build_ball(&corpus::presentation("z").unwrap(), r, WordOracle::FreeReduction).unwrap()
    }

    #[test]
    fn exact_numbers() {
        for (n, k, beta, bd, lb) in [(1, 1, 1, 4, q(1, 4)), (1, 3, 9, 12, q(3, 4)), (2, 2, 8, 24, q(1, 3))] {
            let w = product_witness(n, k, &z(k), LpBudget::default()).unwrap();
            assert_eq!(w.beta_value, qi(beta));
            assert_eq!(w.boundary_norm, qi(bd));
            assert_eq!(w.lower_bound, lb);
            assert!(w.report().passed(), "{:?}", w.report().assertions);
        }
    }

    #[test]
    fn preconditions() {
        assert!(matches!(product_witness(1, 3, &z(2), LpBudget::default()), Err(CertificateError::BaseTooSmall(_))));
        let z5 = build_ball(&corpus::presentation("z5").unwrap(), 4, corpus::oracle("z5").unwrap()).unwrap();
        assert!(matches!(product_witness(1, 3, &z5, LpBudget::default()), Err(CertificateError::BaseTooSmall(_))));
        assert!(matches!(product_witness(0, 1, &z(1), LpBudget::default()), Err(CertificateError::InvalidParameter(_))));
    }
}
