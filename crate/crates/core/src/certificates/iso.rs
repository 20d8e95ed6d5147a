//! Truncated isoperimetric constants of cocycles and their bounded
//! primitives, from one LP and its dual.

use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::chains::{boundary, coboundary, is_cocycle, OrbitSupNorm, SparseChain, SparseCochain};
use crate::complexes::{CellComplex, OrbitLabel};
use crate::lpcore::{solve_with_budget, LpBudget, LpProblem, LpSolution, LpStatus, Relation, Sense};
use crate::presentations::{DehnReducer, Presentation};
use crate::report::CertificateReport;
use crate::scalar::{Extended, Rational};

use super::CertificateError;

/// `Λ_R = max{α(c) : ‖∂c‖₁ ≤ 1} = min{‖μ‖∞ : δμ = α}` on one truncation.
#[derive(Clone, Debug)]
pub struct IsoCertificate {
    pub degree: usize,
    pub radius: Option<usize>,
    pub lambda: Extended<Rational>,
    /// Minimizing primitive, absent when `Λ_R = ∞`.
    pub primitive: Option<SparseCochain<Rational>>,
    pub primitive_norm: Option<OrbitSupNorm<Rational>>,
    /// Maximizing chain with `‖∂c‖₁ ≤ 1`; when `Λ_R = ∞`, a cycle `z` with
    /// `α(z) > 0`.
    pub witness: SparseChain<Rational>,
    pub witness_value: Rational,
    pub witness_boundary_norm: Rational,
    /// Primitives forced to vanish on horoball cells.
    pub relative: bool,
    /// Set by [`comparison_class`]: the cocycle is equivariant.
    pub represents_ordinary_class: bool,
    pub problem: LpProblem<Rational>,
    pub solution: LpSolution<Rational>,
}

/// The 2-cochain equal to 1 on every relator disc and 0 elsewhere.
pub fn area_cocycle(p: &Presentation) -> SparseCochain<Rational> {
    SparseCochain::orbit_constant(
        2,
        (0..p.relators().len())
            .map(|index| (OrbitLabel::Relator { index }, Rational::one()))
            .collect(),
    )
}

/// Upper bound on `Λ_R` for a cocycle of sup norm `sup` over a presentation
/// whose Dehn algorithm shortens words by at least `d` per relator used:
/// fillings have area at most `|w| / d`. `None` without relators.
pub fn dehn_filling_constant(p: &Presentation, sup: &Rational) -> Option<Rational> {
    DehnReducer::min_step_decrease(p).map(|d| sup / Rational::from_integer((d as i64).into()))
}

pub fn iso_constant(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    budget: LpBudget,
) -> Result<IsoCertificate, CertificateError> {
    iso_lp(complex, alpha, false, budget)
}

/// Relative variant: chains avoid horoball cells, only non-horoball rows of
/// `∂c` are charged, and the primitive vanishes on horoball cells.
pub fn iso_constant_relative(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    budget: LpBudget,
) -> Result<IsoCertificate, CertificateError> {
    iso_lp(complex, alpha, true, budget)
}

/// [`iso_constant`] for an equivariant cocycle, which represents the image
/// of an ordinary class.
pub fn comparison_class(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    budget: LpBudget,
) -> Result<IsoCertificate, CertificateError> {
    if !alpha.is_orbit_constant() {
        return Err(CertificateError::NotOrbitConstant);
    }
    let mut cert = iso_constant(complex, alpha, budget)?;
    cert.represents_ordinary_class = true;
    Ok(cert)
}

fn iso_lp(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    relative: bool,
    budget: LpBudget,
) -> Result<IsoCertificate, CertificateError> {
    let k = alpha.dim();
    if k == 0 || k > complex.top_dimension() {
        return Err(CertificateError::Degree(k));
    }
    let check = is_cocycle(complex, alpha);
    if !check.is_cocycle {
        return Err(CertificateError::NotCocycle {
            cell: check.witness.unwrap_or(0),
        });
    }
    let skip = |dim: usize, cell: usize| relative && complex.is_horoball(dim, cell);
    if let Some(cell) = (0..complex.cell_count(k)).find(|&f| skip(k, f) && !alpha.value(complex, f).is_zero()) {
        return Err(CertificateError::NonzeroOnHoroball { cell });
    }
    let cells: Vec<usize> = (0..complex.cell_count(k)).filter(|&f| !skip(k, f)).collect();
    // Rows of (k-1)-cells outside every boundary only force p = n, so they
    // are left out, and μ vanishes there.
    let faces_n = complex.cell_count(k - 1);
    let mut touched = vec![false; faces_n];
    for &f in &cells {
        for (e, _) in complex.cell_boundary(k, f) {
            touched[e] = true;
        }
    }
    let mut row_of = vec![None; faces_n];
    let mut kept_rows = Vec::new();
    for e in (0..faces_n).filter(|&e| touched[e] && !skip(k - 1, e)) {
        row_of[e] = Some(kept_rows.len());
        kept_rows.push(e);
    }

    let mut lp = LpProblem::new(Sense::Maximize);
    let mut coeffs: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); kept_rows.len()];
    for &f in &cells {
        let var = lp.add_free(format!("c{f}"), alpha.value(complex, f));
        for (e, s) in complex.cell_boundary(k, f) {
            if let Some(r) = row_of[e] {
                coeffs[r].push((var, Rational::from_integer(s.into())));
            }
        }
    }
    let mut norm_row = Vec::with_capacity(2 * kept_rows.len());
    for (r, &e) in kept_rows.iter().enumerate() {
        let p = lp.add_nonneg(format!("p{e}"), Rational::zero());
        let n = lp.add_nonneg(format!("n{e}"), Rational::zero());
        coeffs[r].push((p, -Rational::one()));
        coeffs[r].push((n, Rational::one()));
        norm_row.push((p, Rational::one()));
        norm_row.push((n, Rational::one()));
    }
    for row in coeffs {
        lp.add_constraint(row, Relation::Eq, Rational::zero());
    }
    lp.add_constraint(norm_row, Relation::Le, Rational::one());

    let solution = solve_with_budget(&lp, budget)?;
    let chain_of = |x: &[Rational]| {
        SparseChain::from_entries(k, cells.iter().enumerate().map(|(i, &f)| (f, x[i].clone())))
    };
    let (lambda, witness, primitive) = match solution.status {
        LpStatus::Optimal => {
            let mu = SparseCochain::from_entries(
                k - 1,
                kept_rows.iter().enumerate().map(|(r, &e)| (e, solution.dual[r].clone())),
            );
            (
                Extended::Finite(solution.objective.clone()),
                chain_of(&solution.primal),
                Some(mu),
            )
        }
        LpStatus::Unbounded => {
            let ray = solution.ray.as_ref().ok_or(CertificateError::Inconsistent("unbounded LP without a ray"))?;
            (Extended::PosInfinity, chain_of(ray), None)
        }
        LpStatus::Infeasible => return Err(CertificateError::Inconsistent("the zero chain is always feasible")),
    };

    let witness_value = alpha.pairing(complex, &witness)?;
    let dw = boundary(complex, &witness)?;
    let witness_boundary_norm = dw
        .entries()
        .iter()
        .filter(|(&e, _)| !skip(k - 1, e))
        .fold(Rational::zero(), |acc, (_, v)| acc + v.abs());

    let primitive_norm = match &primitive {
        Some(mu) => {
            verify_primitive(complex, alpha, mu, &cells)?;
            let norm = mu.orbit_sup_norm(complex);
            if Extended::Finite(norm.global.clone()) != lambda {
                return Err(CertificateError::Inconsistent("primitive sup norm differs from the LP value"));
            }
            Some(norm)
        }
        None => {
            if !dw.entries().keys().all(|&e| skip(k - 1, e)) || !witness_value.is_positive() {
                return Err(CertificateError::Inconsistent("unbounded direction is not a positive cycle"));
            }
            None
        }
    };

    Ok(IsoCertificate {
        degree: k,
        radius: complex.truncation_radius(),
        lambda,
        primitive,
        primitive_norm,
        witness,
        witness_value,
        witness_boundary_norm,
        relative,
        represents_ordinary_class: false,
        problem: lp,
        solution,
    })
}

/// `δμ = α` on every cell the LP quantified over.
fn verify_primitive(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    mu: &SparseCochain<Rational>,
    cells: &[usize],
) -> Result<(), CertificateError> {
    let dmu = coboundary(complex, mu);
    match cells.iter().find(|&&f| dmu.value(complex, f) != alpha.value(complex, f)) {
        Some(_) => Err(CertificateError::Inconsistent("LP dual is not a primitive")),
        None => Ok(()),
    }
}

/// `min{t : δμ = α, -t ≤ μ ≤ t}` solved directly, as an independent check
/// of the value found by [`iso_constant`]. `∞` when no primitive exists.
pub fn iso_constant_dual_route(
    complex: &dyn CellComplex,
    alpha: &SparseCochain<Rational>,
    budget: LpBudget,
) -> Result<Extended<Rational>, CertificateError> {
    let k = alpha.dim();
    if k == 0 || k > complex.top_dimension() {
        return Err(CertificateError::Degree(k));
    }
    let mut lp = LpProblem::new(Sense::Minimize);
    let t = lp.add_nonneg("t", Rational::one());
    let mut mu = vec![None; complex.cell_count(k - 1)];
    for f in 0..complex.cell_count(k) {
        let mut row = Vec::new();
        for (e, s) in complex.cell_boundary(k, f) {
            let var = *mu[e].get_or_insert_with(|| lp.add_free(format!("mu{e}"), Rational::zero()));
            row.push((var, Rational::from_integer(s.into())));
        }
        lp.add_constraint(row, Relation::Eq, alpha.value(complex, f));
    }
    for m in mu.into_iter().flatten() {
        lp.add_constraint(vec![(m, Rational::one()), (t, -Rational::one())], Relation::Le, Rational::zero());
        lp.add_constraint(vec![(m, Rational::one()), (t, Rational::one())], Relation::Ge, Rational::zero());
    }
    let solution = solve_with_budget(&lp, budget)?;
    match solution.status {
        LpStatus::Optimal => Ok(Extended::Finite(solution.objective)),
        LpStatus::Infeasible => Ok(Extended::PosInfinity),
        LpStatus::Unbounded => Err(CertificateError::Inconsistent("norm minimization is bounded below")),
    }
}

impl IsoCertificate {
    pub fn report(&self, kind: &str) -> CertificateReport {
        let mut r = CertificateReport::new(kind).with_radius(self.radius);
        r.set_value(&self.lambda);
        r.witness_chain = Some(self.witness.to_literal());
        r.primitive = self.primitive.as_ref().map(|m| m.to_literal());
        r.detail("degree", self.degree);
        r.detail("relative", self.relative);
        r.detail("represents_ordinary_class", self.represents_ordinary_class);
        r.detail("witness_value", self.witness_value.to_string());
        r.detail("witness_boundary_norm", self.witness_boundary_norm.to_string());
        r.detail("lp_pivots", self.solution.pivots);
        r.detail("lp_variables", self.problem.variables.len());
        r.detail("lp_constraints", self.problem.constraints.len());
        if let Some(n) = &self.primitive_norm {
            let per: serde_json::Map<String, serde_json::Value> = n
                .per_orbit
                .iter()
                .map(|(l, v)| (l.to_string(), json!(v.to_string())))
                .collect();
            r.detail("primitive_orbit_sup", per);
        }
        let lp_ok = self.solution.check(&self.problem);
        r.check("lp certificate", "valid", lp_ok.clone().err().unwrap_or_else(|| "valid".into()), lp_ok.is_ok());
        match &self.lambda {
            Extended::Finite(l) => {
                let norm = self.primitive_norm.as_ref().map(|n| n.global.clone()).unwrap_or_else(Rational::zero);
                r.check_eq("primitive sup norm = lambda", l, &norm);
                r.check_eq("witness value = lambda", l, &self.witness_value);
            }
            Extended::PosInfinity => {
                r.check("witness is a cycle with positive value", "> 0", self.witness_value.to_string(), self.witness_value.is_positive());
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_ball;
    use crate::corpus;
    use crate::scalar::{q, qi};

    fn ball(name: &str, r: usize) -> crate::complexes::BallComplex {
        build_ball(&corpus::presentation(name).unwrap(), r, corpus::oracle(name).unwrap()).unwrap()
    }

    #[test]
    fn zero_cocycle_has_zero_constant() {
        let b = ball("z2", 2);
        let c = iso_constant(&b, &SparseCochain::zero(2), LpBudget::default()).unwrap();
        assert_eq!(c.lambda, Extended::Finite(qi(0)));
        assert!(c.primitive.unwrap().entries().is_empty());
    }

    #[test]
    fn z2_area_values() {
        let p = corpus::presentation("z2").unwrap();
        let a = area_cocycle(&p);
        let c2 = iso_constant(&ball("z2", 2), &a, LpBudget::default()).unwrap();
        let c4 = iso_constant(&ball("z2", 4), &a, LpBudget::default()).unwrap();
        assert_eq!(c2.lambda, Extended::Finite(q(1, 2)));
        assert_eq!(c4.lambda, Extended::Finite(qi(1)));
        assert!(c4.report("iso").passed());
        let via_dual = iso_constant_dual_route(&ball("z2", 4), &a, LpBudget::default()).unwrap();
        assert_eq!(via_dual, c4.lambda);
    }

    #[test]
    fn finite_group_spheres() {
        let b = ball("z5", 5);
        // all five discs share one boundary loop, so differences are 2-cycles
        // of zero area
        let c = iso_constant(&b, &area_cocycle(b.presentation()), LpBudget::default()).unwrap();
        assert_eq!(c.lambda, Extended::Finite(q(1, 5)));
        let one_disc = SparseCochain::from_entries(2, [(0, qi(1))]);
        let c = iso_constant(&b, &one_disc, LpBudget::default()).unwrap();
        assert_eq!(c.lambda, Extended::PosInfinity);
        assert!(c.witness_value.is_positive());
        assert!(c.report("iso").passed());
        assert_eq!(iso_constant_dual_route(&b, &one_disc, LpBudget::default()).unwrap(), Extended::PosInfinity);
    }

    #[test]
    fn surface_group_values() {
        let p = corpus::presentation("genus2").unwrap();
        let a = area_cocycle(&p);
        let values: Vec<_> = (1..=4)
            .map(|r| iso_constant(&ball("genus2", r), &a, LpBudget::default()).unwrap().lambda)
            .collect();
        let zero = Extended::Finite(qi(0));
        assert_eq!(values, vec![zero.clone(), zero.clone(), zero, Extended::Finite(q(1, 6))]);
        assert_eq!(dehn_filling_constant(&p, &qi(1)), Some(q(1, 2)));
    }

    #[test]
    fn coboundaries_are_bounded_by_their_primitive() {
        let b = ball("z2", 3);
        let mut vals = std::collections::BTreeMap::new();
        vals.insert(OrbitLabel::Generator { index: 0 }, q(3, 2));
        vals.insert(OrbitLabel::Generator { index: 1 }, q(-1, 3));
        let mu = SparseCochain::orbit_constant(1, vals);
        let a = coboundary(&b, &mu);
        let c = iso_constant(&b, &a, LpBudget::default()).unwrap();
        assert!(c.lambda.le(&Extended::Finite(q(3, 2))));
        let cc = comparison_class(&b, &area_cocycle(b.presentation()), LpBudget::default()).unwrap();
        assert!(cc.represents_ordinary_class);
        assert_eq!(comparison_class(&b, &a, LpBudget::default()).unwrap_err(), CertificateError::NotOrbitConstant);
    }

    #[test]
    fn non_cocycles_are_rejected() {
        let b = ball("z2", 2);
        let e = SparseCochain::from_entries(1, [(0, qi(1))]);
        assert!(matches!(iso_constant(&b, &e, LpBudget::default()), Err(CertificateError::NotCocycle { .. })));
    }
}
