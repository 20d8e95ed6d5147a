//! Linear programs with exact primal and dual certificates.
//!
//! [`solve`] runs a two-phase tableau simplex with Bland's rule, so pivots
//! and the returned basis are deterministic. Every [`LpSolution`] can be
//! re-verified against its problem with [`LpSolution::check`], which only
//! uses the problem data and the certificate vectors.

mod filling;
mod linalg;
mod simplex;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::scalar::Scalar;

pub use filling::{
    fill_norm, folner_lp_bound, relative_fill_norm, FillResult, FolnerBound, RelativeFill,
};
pub use linalg::{exact_rank, kernel_vector};
pub use simplex::solve_with_budget;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint<S> {
    pub coeffs: Vec<(usize, S)>,
    pub relation: Relation,
    pub rhs: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable<S> {
    pub name: String,
    pub cost: S,
    pub lower: Option<S>,
    pub upper: Option<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpProblem<S> {
    pub sense: Sense,
    pub variables: Vec<Variable<S>>,
    pub constraints: Vec<Constraint<S>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Solver output.
///
/// Dual values follow the sign convention of the problem's sense: for a
/// maximization, multipliers of `≤` rows are nonnegative and of `≥` rows
/// nonpositive; for a minimization the reverse.
#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    /// Optimal point, or a feasible point when unbounded; empty when
    /// infeasible.
    pub primal: Vec<S>,
    /// Row multipliers; empty unless optimal.
    pub dual: Vec<S>,
    /// Optimal objective value; zero unless optimal.
    pub objective: S,
    /// Row multipliers proving infeasibility.
    pub farkas: Option<Vec<S>>,
    /// Improving direction of unbounded objective.
    pub ray: Option<Vec<S>>,
    pub pivots: usize,
}

/// Size and effort limits for one solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpBudget {
    /// Maximum number of tableau entries (rows × columns).
    pub max_entries: usize,
    pub max_pivots: usize,
}

impl Default for LpBudget {
    fn default() -> Self {
        Self {
            max_entries: 4_000_000,
            max_pivots: 200_000,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("constraint {row} references undeclared variable {var}")]
    UnknownVariable { row: usize, var: usize },
    #[error("variable {0} has lower bound above its upper bound")]
    EmptyBounds(usize),
    #[error("LP budget exceeded: {0}")]
    Budget(String),
    #[error("dimension mismatch: expected a {expected}-chain, got a {got}-chain")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("complex has no cells of dimension {0}")]
    NoCells(usize),
    #[error("chain references cell {id} outside dimension {dim}")]
    CellOutOfRange { dim: usize, id: usize },
}

impl<S: Scalar> LpProblem<S> {
    pub fn new(sense: Sense) -> Self {
        Self {
            sense,
            variables: Vec::new(),
            constraints: Vec::new(),
        }
    }

    /// Adds a variable with bounds `lower ≤ x ≤ upper` (`None` = infinite).
    pub fn add_variable(&mut self, name: impl Into<String>, cost: S, lower: Option<S>, upper: Option<S>) -> usize {
        self.variables.push(Variable {
            name: name.into(),
            cost,
            lower,
            upper,
        });
        self.variables.len() - 1
    }

    /// Nonnegative variable.
    pub fn add_nonneg(&mut self, name: impl Into<String>, cost: S) -> usize {
        self.add_variable(name, cost, Some(S::zero()), None)
    }

    pub fn add_free(&mut self, name: impl Into<String>, cost: S) -> usize {
        self.add_variable(name, cost, None, None)
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, S)>, relation: Relation, rhs: S) -> usize {
        self.constraints.push(Constraint {
            coeffs,
            relation,
            rhs,
        });
        self.constraints.len() - 1
    }

    pub fn validate(&self) -> Result<(), LpError> {
        for (row, c) in self.constraints.iter().enumerate() {
            if let Some(&(var, _)) = c.coeffs.iter().find(|(v, _)| *v >= self.variables.len()) {
                return Err(LpError::UnknownVariable { row, var });
            }
        }
        for (j, v) in self.variables.iter().enumerate() {
            if let (Some(l), Some(u)) = (&v.lower, &v.upper) {
                if l > u {
                    return Err(LpError::EmptyBounds(j));
                }
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[S]) -> S {
        self.variables
            .iter()
            .zip(x)
            .fold(S::zero(), |acc, (v, xj)| acc + v.cost.clone() * xj.clone())
    }

    fn row_value(&self, row: usize, x: &[S]) -> S {
        self.constraints[row]
            .coeffs
            .iter()
            .fold(S::zero(), |acc, (j, a)| acc + a.clone() * x[*j].clone())
    }

    /// `Aᵀy` as a dense vector over variables.
    fn transpose_times(&self, y: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.variables.len()];
        for (c, yi) in self.constraints.iter().zip(y) {
            if yi.is_negligible() {
                continue;
            }
            for (j, a) in &c.coeffs {
                out[*j] = out[*j].clone() + a.clone() * yi.clone();
            }
        }
        out
    }

    pub fn is_feasible(&self, x: &[S]) -> Result<(), String> {
        if x.len() != self.variables.len() {
            return Err(format!("primal has {} entries, expected {}", x.len(), self.variables.len()));
        }
        for (j, v) in self.variables.iter().enumerate() {
            if let Some(l) = &v.lower {
                if (x[j].clone() - l.clone()).is_strictly_negative() {
                    return Err(format!("variable {j} below its lower bound"));
                }
            }
            if let Some(u) = &v.upper {
                if (x[j].clone() - u.clone()).is_strictly_positive() {
                    return Err(format!("variable {j} above its upper bound"));
                }
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            let slack = self.row_value(i, x) - c.rhs.clone();
            let ok = match c.relation {
                Relation::Le => !slack.is_strictly_positive(),
                Relation::Ge => !slack.is_strictly_negative(),
                Relation::Eq => slack.is_negligible(),
            };
            if !ok {
                return Err(format!("row {i} violated"));
            }
        }
        Ok(())
    }

    /// Value of the Lagrangian dual bound at multipliers `y` for objective
    /// `cost`, written in maximization form: `None` when the bound is
    /// infinite or `y` has the wrong signs.
    fn dual_bound(&self, y: &[S], cost: &[S]) -> Option<S> {
        if y.len() != self.constraints.len() {
            return None;
        }
        let mut total = S::zero();
        for (c, yi) in self.constraints.iter().zip(y) {
            let ok = match c.relation {
                Relation::Le => !yi.is_strictly_negative(),
                Relation::Ge => !yi.is_strictly_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return None;
            }
            total = total + c.rhs.clone() * yi.clone();
        }
        let aty = self.transpose_times(y);
        for ((v, cj), ay) in self.variables.iter().zip(cost).zip(aty) {
            let r = cj.clone() - ay;
            if r.is_strictly_positive() {
                total = total + r * v.upper.clone()?;
            } else if r.is_strictly_negative() {
                total = total + r * v.lower.clone()?;
            }
        }
        Some(total)
    }

    fn signed_costs(&self) -> Vec<S> {
        self.variables
            .iter()
            .map(|v| match self.sense {
                Sense::Maximize => v.cost.clone(),
                Sense::Minimize => -v.cost.clone(),
            })
            .collect()
    }

    /// CPLEX LP text; coefficients as decimals.
    pub fn to_lp_format(&self) -> String {
        let mut out = String::new();
        out.push_str(match self.sense {
            Sense::Maximize => "Maximize\n obj: ",
            Sense::Minimize => "Minimize\n obj: ",
        });
        out.push_str(&linear_expression(
            self.variables.iter().enumerate().map(|(j, v)| (j, &v.cost)),
        ));
        out.push_str("\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let rel = match c.relation {
                Relation::Le => "<=",
                Relation::Eq => "=",
                Relation::Ge => ">=",
            };
            let expr = linear_expression(c.coeffs.iter().map(|(j, a)| (*j, a)));
            let _ = writeln!(out, " c{i}: {expr} {rel} {}", c.rhs.to_decimal());
        }
        out.push_str("Bounds\n");
        for (j, v) in self.variables.iter().enumerate() {
            match (&v.lower, &v.upper) {
                (None, None) => {
                    let _ = writeln!(out, " x{j} free");
                }
                (l, u) => {
                    let lo = l.as_ref().map_or("-inf".to_string(), |x| x.to_decimal());
                    let hi = u.as_ref().map_or("+inf".to_string(), |x| x.to_decimal());
                    let _ = writeln!(out, " {lo} <= x{j} <= {hi}");
                }
            }
        }
        out.push_str("End\n");
        out
    }
}

fn linear_expression<'a, S: Scalar>(terms: impl Iterator<Item = (usize, &'a S)>) -> String {
    let mut out = String::new();
    for (j, a) in terms {
        if a.is_negligible() {
            continue;
        }
        let negative = a.is_strictly_negative();
        match (out.is_empty(), negative) {
            (true, true) => out.push_str("- "),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        let _ = write!(out, "{} x{j}", a.abs().to_decimal());
    }
    if out.is_empty() {
        out.push_str("0 x0");
    }
    out
}

impl<S: Scalar> LpSolution<S> {
    /// Verifies the attached certificates against `problem` using only
    /// problem data: primal feasibility and equal primal and dual
    /// objectives when optimal, a Farkas certificate when infeasible, a
    /// feasible point plus an improving ray when unbounded.
    pub fn check(&self, problem: &LpProblem<S>) -> Result<(), String> {
        let sign = match problem.sense {
            Sense::Maximize => S::one(),
            Sense::Minimize => -S::one(),
        };
        match self.status {
            LpStatus::Optimal => {
                problem.is_feasible(&self.primal)?;
                let value = problem.objective_value(&self.primal);
                if !(value.clone() - self.objective.clone()).is_negligible() {
                    return Err("reported objective differs from cᵀx".into());
                }
                let y: Vec<S> = self.dual.iter().map(|v| v.clone() * sign.clone()).collect();
                let bound = problem
                    .dual_bound(&y, &problem.signed_costs())
                    .ok_or("dual multipliers infeasible")?;
                if !(bound - value * sign).is_negligible() {
                    return Err("dual objective differs from primal objective".into());
                }
                Ok(())
            }
            LpStatus::Infeasible => {
                let y = self.farkas.as_ref().ok_or("missing Farkas certificate")?;
                let zero = vec![S::zero(); problem.variables.len()];
                let bound = problem.dual_bound(y, &zero).ok_or("Farkas multipliers infeasible")?;
                if bound.is_strictly_negative() {
                    Ok(())
                } else {
                    Err("Farkas bound is not negative".into())
                }
            }
            LpStatus::Unbounded => {
                problem.is_feasible(&self.primal)?;
                let d = self.ray.as_ref().ok_or("missing ray")?;
                if d.len() != problem.variables.len() {
                    return Err("ray has the wrong length".into());
                }
                for (j, v) in problem.variables.iter().enumerate() {
                    if v.lower.is_some() && d[j].is_strictly_negative() {
                        return Err(format!("ray leaves lower bound of {j}"));
                    }
                    if v.upper.is_some() && d[j].is_strictly_positive() {
                        return Err(format!("ray leaves upper bound of {j}"));
                    }
                }
                for (i, c) in problem.constraints.iter().enumerate() {
                    let ad = problem.row_value(i, d);
                    let ok = match c.relation {
                        Relation::Le => !ad.is_strictly_positive(),
                        Relation::Ge => !ad.is_strictly_negative(),
                        Relation::Eq => ad.is_negligible(),
                    };
                    if !ok {
                        return Err(format!("ray violates row {i}"));
                    }
                }
                if (problem.objective_value(d) * sign).is_strictly_positive() {
                    Ok(())
                } else {
                    Err("ray does not improve the objective".into())
                }
            }
        }
    }
}

/// Solves with the default budget.
pub fn solve<S: Scalar>(problem: &LpProblem<S>) -> Result<LpSolution<S>, LpError> {
    solve_with_budget(problem, LpBudget::default())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qi, Rational};

    #[test]
    fn documented_examples() {
        let mut p = LpProblem::<Rational>::new(Sense::Maximize);
        let x = p.add_nonneg("x", qi(1));
        p.add_constraint(vec![(x, qi(1))], Relation::Le, qi(3));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal, vec![qi(3)]);
        assert_eq!(s.dual, vec![qi(1)]);
        s.check(&p).unwrap();

        let mut p = LpProblem::<Rational>::new(Sense::Maximize);
        let x = p.add_nonneg("x", qi(1));
        p.add_constraint(vec![(x, qi(1))], Relation::Ge, qi(0));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Unbounded);
        s.check(&p).unwrap();

        let mut p = LpProblem::<Rational>::new(Sense::Minimize);
        let xp = p.add_nonneg("xp", qi(1));
        let xm = p.add_nonneg("xm", qi(1));
        p.add_constraint(vec![(xp, qi(1)), (xm, qi(-1))], Relation::Eq, qi(-2));
        let s = solve(&p).unwrap();
        assert_eq!(s.objective, qi(2));
        s.check(&p).unwrap();
    }

    #[test]
    fn infeasible_with_farkas() {
        let mut p = LpProblem::<Rational>::new(Sense::Minimize);
        let x = p.add_variable("x", qi(1), Some(qi(0)), Some(qi(1)));
        let y = p.add_free("y", qi(0));
        p.add_constraint(vec![(x, qi(1)), (y, qi(1))], Relation::Ge, qi(5));
        p.add_constraint(vec![(y, qi(1))], Relation::Le, qi(2));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Infeasible);
        s.check(&p).unwrap();
    }

    #[test]
    fn bounds_and_senses() {
        // min -x - 2y, -1 <= x <= 4, y <= 3 (y free below), x + y >= -10
        let mut p = LpProblem::<Rational>::new(Sense::Minimize);
        let x = p.add_variable("x", qi(-1), Some(qi(-1)), Some(qi(4)));
        let y = p.add_variable("y", qi(-2), None, Some(qi(3)));
        p.add_constraint(vec![(x, qi(1)), (y, qi(1))], Relation::Ge, qi(-10));
        p.add_constraint(vec![(x, qi(1)), (y, q(1, 2))], Relation::Le, qi(5));
        let s = solve(&p).unwrap();
        assert_eq!(s.status, LpStatus::Optimal);
        assert_eq!(s.primal, vec![q(7, 2), qi(3)]);
        assert_eq!(s.objective, q(-19, 2));
        s.check(&p).unwrap();
    }

    #[test]
    fn float_solver_agrees() {
        let mut p = LpProblem::<f64>::new(Sense::Maximize);
        let x = p.add_nonneg("x", 3.0);
        let y = p.add_nonneg("y", 2.0);
        p.add_constraint(vec![(x, 1.0), (y, 1.0)], Relation::Le, 4.0);
        p.add_constraint(vec![(x, 1.0), (y, 3.0)], Relation::Le, 6.0);
        p.add_constraint(vec![(x, 1.0)], Relation::Le, 3.0);
        let s = solve(&p).unwrap();
        assert!((s.objective - 11.0).abs() < 1e-9);
        s.check(&p).unwrap();
    }

    #[test]
    fn lp_dump_is_stable() {
        let mut p = LpProblem::<Rational>::new(Sense::Maximize);
        let x = p.add_nonneg("x", qi(1));
        let y = p.add_free("y", q(-1, 2));
        p.add_constraint(vec![(x, qi(1)), (y, qi(-3))], Relation::Le, q(3, 4));
        assert_eq!(
            p.to_lp_format(),
            "Maximize\n obj: 1 x0 - 0.5 x1\nSubject To\n c0: 1 x0 - 3 x1 <= 0.75\nBounds\n 0 <= x0 <= +inf\n x1 free\nEnd\n"
        );
    }
}
