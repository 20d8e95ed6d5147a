//! Filling norms and Følner ratios as linear programs over a complex.

use num_traits::{Signed, Zero};

use crate::chains::{boundary, SparseChain};
use crate::complexes::CellComplex;
use crate::scalar::{Extended, Rational, Scalar};

use super::{solve_with_budget, LpBudget, LpError, LpProblem, LpSolution, LpStatus, Relation, Sense};

/// Optimal filling, with the LP and its certificates.
#[derive(Clone, Debug)]
pub struct FillResult<S> {
    /// `+∞` when no chain in the truncation fills `b`.
    pub value: Extended<S>,
    pub filler: Option<SparseChain<S>>,
    pub problem: LpProblem<S>,
    pub solution: LpSolution<S>,
}

#[derive(Clone, Debug)]
pub struct RelativeFill<S> {
    pub fill: FillResult<S>,
    /// `b - ∂c`, supported on horoball cells when finite.
    pub residual: Option<SparseChain<S>>,
}

/// Infimum of `‖∂c‖₁ / ‖c‖₁` over the truncation.
#[derive(Clone, Debug)]
pub struct FolnerBound {
    pub value: Rational,
    /// Chain attaining the value, with `‖c‖₁ = 1`.
    pub chain: SparseChain<Rational>,
    /// `true` when `∂` has a kernel, so the value is 0 by a cycle.
    pub from_kernel: bool,
    pub problem: Option<LpProblem<Rational>>,
    pub solution: Option<LpSolution<Rational>>,
}

/// Columns of `∂_k` grouped by `(k-1)`-cell: `rows[e] = [(k-cell, incidence)]`.
fn incidence_rows(complex: &dyn CellComplex, k: usize) -> Vec<Vec<(usize, i64)>> {
    let mut rows = vec![Vec::new(); complex.cell_count(k - 1)];
    for f in 0..complex.cell_count(k) {
        for (e, s) in complex.cell_boundary(k, f) {
            rows[e].push((f, s));
        }
    }
    rows
}

/// `min ‖c‖₁` subject to `∂c = b` on the rows kept by `constrained`.
fn filling_lp<S: Scalar>(
    complex: &dyn CellComplex,
    b: &SparseChain<S>,
    constrained: impl Fn(usize) -> bool,
    budget: LpBudget,
) -> Result<FillResult<S>, LpError> {
    let k = b.dim() + 1;
    let edges = complex.cell_count(b.dim());
    if let Some((&id, _)) = b.entries().iter().find(|(&id, _)| id >= edges) {
        return Err(LpError::CellOutOfRange { dim: b.dim(), id });
    }
    let cells = complex.cell_count(k);
    let mut lp = LpProblem::new(Sense::Minimize);
    for f in 0..cells {
        lp.add_nonneg(format!("cp{f}"), S::one());
        lp.add_nonneg(format!("cm{f}"), S::one());
    }
    let rows = if cells > 0 { incidence_rows(complex, k) } else { vec![Vec::new(); edges] };
    for (e, row) in rows.iter().enumerate() {
        if !constrained(e) {
            continue;
        }
        let rhs = b.get(e);
        if row.is_empty() && rhs.is_negligible() {
            continue;
        }
        let mut coeffs = Vec::with_capacity(2 * row.len());
        for &(f, s) in row {
            coeffs.push((2 * f, S::from_int(s)));
            coeffs.push((2 * f + 1, S::from_int(-s)));
        }
        lp.add_constraint(coeffs, Relation::Eq, rhs);
    }
    let solution = solve_with_budget(&lp, budget)?;
    let (value, filler) = match solution.status {
        LpStatus::Optimal => {
            let filler = SparseChain::from_entries(
                k,
                (0..cells).map(|f| (f, solution.primal[2 * f].clone() - solution.primal[2 * f + 1].clone())),
            );
            (Extended::Finite(solution.objective.clone()), Some(filler))
        }
        _ => (Extended::PosInfinity, None),
    };
    Ok(FillResult {
        value,
        filler,
        problem: lp,
        solution,
    })
}

/// `inf{‖c‖₁ : ∂c = b}` over chains of the truncation; `+∞` with a Farkas
/// certificate when `b` is not a boundary there.
pub fn fill_norm<S: Scalar>(complex: &dyn CellComplex, b: &SparseChain<S>, budget: LpBudget) -> Result<FillResult<S>, LpError> {
    filling_lp(complex, b, |_| true, budget)
}

/// `inf{‖c‖₁ : b - ∂c supported on horoball cells}`.
pub fn relative_fill_norm<S: Scalar>(
    complex: &dyn CellComplex,
    b: &SparseChain<S>,
    budget: LpBudget,
) -> Result<RelativeFill<S>, LpError> {
    let dim = b.dim();
    let fill = filling_lp(complex, b, |e| !complex.is_horoball(dim, e), budget)?;
    let residual = match &fill.filler {
        Some(c) => {
            let dc = boundary(complex, c).map_err(|_| LpError::DimensionMismatch {
                expected: dim + 1,
                got: c.dim(),
            })?;
            Some(b.add_scaled(&dc, &-S::one()).expect("same dimension"))
        }
        None => None,
    };
    Ok(RelativeFill { fill, residual })
}

/// Infimum of `‖∂c‖₁ / ‖c‖₁` over nonzero `k`-chains of the truncation.
///
/// A nonzero kernel vector of `∂_k` gives 0 directly. Otherwise the value
/// is the optimum of `min Σ t` over `-t ≤ ∂c ≤ t`, `c ≥ 0`, `Σ c = 1`,
/// an upper bound for the infimum over signed chains.
pub fn folner_lp_bound(complex: &dyn CellComplex, k: usize, budget: LpBudget) -> Result<FolnerBound, LpError> {
    let cells = complex.cell_count(k);
    if k == 0 || cells == 0 {
        return Err(LpError::NoCells(k));
    }
    let columns: Vec<Vec<(usize, i64)>> = (0..cells).map(|f| complex.cell_boundary(k, f)).collect();
    if let Some(x) = super::kernel_vector(complex.cell_count(k - 1), &columns) {
        let norm = x.iter().fold(Rational::zero(), |a, v| a + v.abs());
        let chain = SparseChain::from_entries(k, x.into_iter().enumerate().map(|(f, v)| (f, v / norm.clone())));
        return Ok(FolnerBound {
            value: Rational::zero(),
            chain,
            from_kernel: true,
            problem: None,
            solution: None,
        });
    }
    let rows = incidence_rows(complex, k);
    let mut lp = LpProblem::<Rational>::new(Sense::Minimize);
    for f in 0..cells {
        lp.add_nonneg(format!("c{f}"), Rational::zero());
    }
    let mut total = Vec::with_capacity(cells);
    for f in 0..cells {
        total.push((f, Rational::from_int(1)));
    }
    for row in rows.iter().filter(|r| !r.is_empty()) {
        let p = lp.add_nonneg("p", Rational::from_int(1));
        let n = lp.add_nonneg("n", Rational::from_int(1));
        let mut coeffs: Vec<(usize, Rational)> = row.iter().map(|&(f, s)| (f, Rational::from_int(s))).collect();
        coeffs.push((p, Rational::from_int(-1)));
        coeffs.push((n, Rational::from_int(1)));
        lp.add_constraint(coeffs, Relation::Eq, Rational::zero());
    }
    lp.add_constraint(total, Relation::Eq, Rational::from_int(1));
    let solution = solve_with_budget(&lp, budget)?;
    let chain = SparseChain::from_entries(k, (0..cells).map(|f| (f, solution.primal[f].clone())));
    Ok(FolnerBound {
        value: solution.objective.clone(),
        chain,
        from_kernel: false,
        problem: Some(lp),
        solution: Some(solution),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::boundary;
    use crate::complexes::build_ball;
    use crate::presentations::{parse_presentation, Presentation, WordOracle};
    use crate::scalar::qi;

    fn z2(r: usize) -> crate::complexes::BallComplex {
        let p = parse_presentation("gens: a b\nrel: abAB").unwrap();
        build_ball(&p, r, WordOracle::AbelianNormalForm).unwrap()
    }

    #[test]
    fn single_face_fill() {
        let b = z2(2);
        let f = SparseChain::cell(2, 0, qi(1));
        let df = boundary(&b, &f).unwrap();
        let r = fill_norm(&b, &df, LpBudget::default()).unwrap();
        assert_eq!(r.value, Extended::Finite(qi(1)));
        assert_eq!(r.filler.unwrap(), f);
        r.solution.check(&r.problem).unwrap();
        let zero = fill_norm(&b, &SparseChain::zero(1), LpBudget::default()).unwrap();
        assert_eq!(zero.value, Extended::Finite(qi(0)));
    }

    #[test]
    fn non_boundary_is_unfillable() {
        let f2 = Presentation::free(&["a", "b"]);
        let b = build_ball(&f2, 2, WordOracle::FreeReduction).unwrap();
        let e = SparseChain::from_entries(1, [(0, qi(1))]);
        let r = fill_norm(&b, &e, LpBudget::default()).unwrap();
        assert_eq!(r.value, Extended::PosInfinity);
        assert!(r.solution.farkas.is_some());
        r.solution.check(&r.problem).unwrap();
    }

    #[test]
    fn folner_values() {
        let z5 = parse_presentation("gens: a\nrel: aaaaa").unwrap();
        let b = build_ball(&z5, 5, WordOracle::FiniteEnumeration { bound: 10 }).unwrap();
        let f = folner_lp_bound(&b, 2, LpBudget::default()).unwrap();
        assert_eq!(f.value, qi(0));
        assert!(f.from_kernel);
        assert!(boundary(&b, &f.chain).unwrap().is_zero());
        assert_eq!(f.chain.l1_norm(), qi(1));

        let f = folner_lp_bound(&z2(4), 2, LpBudget::default()).unwrap();
        assert!(f.value <= qi(2));
        f.solution.unwrap().check(&f.problem.unwrap()).unwrap();
        let d = boundary(&z2(4), &f.chain).unwrap();
        assert_eq!(d.l1_norm(), f.value);

        let f2 = Presentation::free(&["a", "b"]);
        let b = build_ball(&f2, 2, WordOracle::FreeReduction).unwrap();
        assert_eq!(folner_lp_bound(&b, 2, LpBudget::default()).unwrap_err(), LpError::NoCells(2));
    }
}
