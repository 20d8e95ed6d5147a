//! Dense two-phase tableau simplex with Bland's rule.

use crate::scalar::Scalar;

use super::{LpBudget, LpError, LpProblem, LpSolution, LpStatus, Relation, Sense};

/// How an original variable is expressed through nonnegative columns.
#[derive(Clone, Debug)]
enum VarMap<S> {
    /// `x = lower + x'`.
    Shift(S, usize),
    /// `x = upper - x'`.
    Reflect(S, usize),
    /// `x = x⁺ - x⁻`.
    Split(usize, usize),
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    /// Reduced costs followed by minus the objective value.
    obj: Vec<S>,
    basis: Vec<usize>,
    artificial: Vec<bool>,
    width: usize,
    pivots: usize,
    max_pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded(usize),
}

impl<S: Scalar> Tableau<S> {
    fn rhs(&self, r: usize) -> &S {
        &self.rows[r][self.width]
    }

    fn pivot(&mut self, r: usize, j: usize) -> Result<(), LpError> {
        self.pivots += 1;
        if self.pivots > self.max_pivots {
            return Err(LpError::Budget(format!("more than {} pivots", self.max_pivots)));
        }
        let inv = S::one() / self.rows[r][j].clone();
        let mut prow: Vec<(usize, S)> = Vec::new();
        for k in 0..=self.width {
            if !self.rows[r][k].is_negligible() {
                let v = std::mem::replace(&mut self.rows[r][k], S::zero()) * inv.clone();
                self.rows[r][k] = v.clone();
                prow.push((k, v));
            } else {
                self.rows[r][k] = S::zero();
            }
        }
        self.rows[r][j] = S::one();
        let eliminate = |row: &mut Vec<S>, prow: &[(usize, S)]| {
            let f = row[j].clone();
            if f.is_negligible() {
                row[j] = S::zero();
                return;
            }
            for (k, pv) in prow {
                let old = std::mem::replace(&mut row[*k], S::zero());
                row[*k] = old - f.clone() * pv.clone();
            }
            row[j] = S::zero();
        };
        for i in 0..self.rows.len() {
            if i != r {
                eliminate(&mut self.rows[i], &prow);
            }
        }
        eliminate(&mut self.obj, &prow);
        self.basis[r] = j;
        Ok(())
    }

    /// Bland's rule: lowest-index improving column, ties in the ratio test
    /// broken by lowest basic column.
    fn run(&mut self) -> Result<Outcome, LpError> {
        loop {
            let entering = (0..self.width)
                .find(|&j| !self.artificial[j] && self.obj[j].is_strictly_negative());
            let Some(j) = entering else {
                return Ok(Outcome::Optimal);
            };
            let mut leave: Option<(usize, S)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][j];
                if !a.is_strictly_positive() {
                    continue;
                }
                let ratio = self.rhs(r).clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        let diff = ratio.clone() - best.clone();
                        diff.is_strictly_negative()
                            || (diff.is_negligible() && self.basis[r] < self.basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, j)?,
                None => return Ok(Outcome::Unbounded(j)),
            }
        }
    }

    fn set_costs(&mut self, cost: &[S]) {
        let mut obj: Vec<S> = cost.to_vec();
        obj.push(S::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b].clone();
            if cb.is_negligible() {
                continue;
            }
            for (k, v) in self.rows[r].iter().enumerate() {
                if !v.is_negligible() {
                    let old = std::mem::replace(&mut obj[k], S::zero());
                    obj[k] = old - cb.clone() * v.clone();
                }
            }
        }
        self.obj = obj;
    }

    /// `c_B B⁻¹ e_r` for each row, read from the column that started as
    /// `e_r`.
    fn duals(&self, init_col: &[usize], cost: &[S]) -> Vec<S> {
        init_col
            .iter()
            .map(|&k| cost[k].clone() - self.obj[k].clone())
            .collect()
    }

    fn column_values(&self) -> Vec<S> {
        let mut x = vec![S::zero(); self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs(r).clone();
        }
        x
    }
}

pub fn solve_with_budget<S: Scalar>(problem: &LpProblem<S>, budget: LpBudget) -> Result<LpSolution<S>, LpError> {
    problem.validate()?;
    let n = problem.variables.len();
    let min_cost: Vec<S> = problem
        .variables
        .iter()
        .map(|v| match problem.sense {
            Sense::Minimize => v.cost.clone(),
            Sense::Maximize => -v.cost.clone(),
        })
        .collect();

    // Columns for the original variables.
    let mut maps = Vec::with_capacity(n);
    let mut col_cost: Vec<S> = Vec::new();
    let mut ub_rows: Vec<(usize, S)> = Vec::new();
    for (j, v) in problem.variables.iter().enumerate() {
        let k = col_cost.len();
        match (&v.lower, &v.upper) {
            (Some(l), u) => {
                maps.push(VarMap::Shift(l.clone(), k));
                col_cost.push(min_cost[j].clone());
                if let Some(u) = u {
                    ub_rows.push((k, u.clone() - l.clone()));
                }
            }
            (None, Some(u)) => {
                maps.push(VarMap::Reflect(u.clone(), k));
                col_cost.push(-min_cost[j].clone());
            }
            (None, None) => {
                maps.push(VarMap::Split(k, k + 1));
                col_cost.push(min_cost[j].clone());
                col_cost.push(-min_cost[j].clone());
            }
        }
    }
    let structural = col_cost.len();

    // Sparse standard-form rows: (entries over structural columns, slack sign, rhs).
    let mut srows: Vec<(Vec<(usize, S)>, i8, S)> = Vec::new();
    for c in &problem.constraints {
        let mut rhs = c.rhs.clone();
        let mut entries: Vec<(usize, S)> = Vec::new();
        for (j, a) in &c.coeffs {
            match &maps[*j] {
                VarMap::Shift(l, k) => {
                    rhs = rhs - a.clone() * l.clone();
                    entries.push((*k, a.clone()));
                }
                VarMap::Reflect(u, k) => {
                    rhs = rhs - a.clone() * u.clone();
                    entries.push((*k, -a.clone()));
                }
                VarMap::Split(kp, km) => {
                    entries.push((*kp, a.clone()));
                    entries.push((*km, -a.clone()));
                }
            }
        }
        let slack = match c.relation {
            Relation::Le => 1,
            Relation::Ge => -1,
            Relation::Eq => 0,
        };
        srows.push((entries, slack, rhs));
    }
    let orig_rows = srows.len();
    for (k, cap) in ub_rows {
        srows.push((vec![(k, S::one())], 1, cap));
    }
    let m = srows.len();

    let slack_count = srows.iter().filter(|r| r.1 != 0).count();
    let mut sigma = vec![1i8; m];
    let mut needs_art = vec![false; m];
    for (r, row) in srows.iter().enumerate() {
        if row.2.is_strictly_negative() {
            sigma[r] = -1;
        }
        needs_art[r] = row.1 as i32 * sigma[r] as i32 != 1;
    }
    let art_count = needs_art.iter().filter(|&&b| b).count();
    let width = structural + slack_count + art_count;
    let cells = m.saturating_mul(width + 1);
    if cells > budget.max_entries {
        return Err(LpError::Budget(format!(
            "tableau of {m} rows and {} columns exceeds {} entries",
            width + 1,
            budget.max_entries
        )));
    }

    let mut rows = vec![vec![S::zero(); width + 1]; m];
    let mut artificial = vec![false; width];
    let mut basis = vec![0usize; m];
    let mut init_col = vec![0usize; m];
    let mut next_slack = structural;
    let mut next_art = structural + slack_count;
    for (r, (entries, slack, rhs)) in srows.into_iter().enumerate() {
        let s = S::from_int(sigma[r] as i64);
        for (k, a) in entries {
            let old = std::mem::replace(&mut rows[r][k], S::zero());
            rows[r][k] = old + a * s.clone();
        }
        rows[r][width] = rhs * s.clone();
        if slack != 0 {
            rows[r][next_slack] = S::from_int(slack as i64) * s;
            if !needs_art[r] {
                basis[r] = next_slack;
                init_col[r] = next_slack;
            }
            next_slack += 1;
        }
        if needs_art[r] {
            rows[r][next_art] = S::one();
            artificial[next_art] = true;
            basis[r] = next_art;
            init_col[r] = next_art;
            next_art += 1;
        }
    }

    let mut t = Tableau {
        rows,
        obj: Vec::new(),
        basis,
        artificial: vec![false; width],
        width,
        pivots: 0,
        max_pivots: budget.max_pivots,
    };

    let map_back = |x: &[S], with_offsets: bool| -> Vec<S> {
        maps.iter()
            .map(|m| match m {
                VarMap::Shift(l, k) if with_offsets => l.clone() + x[*k].clone(),
                VarMap::Shift(_, k) => x[*k].clone(),
                VarMap::Reflect(u, k) if with_offsets => u.clone() - x[*k].clone(),
                VarMap::Reflect(_, k) => -x[*k].clone(),
                VarMap::Split(p, q) => x[*p].clone() - x[*q].clone(),
            })
            .collect()
    };

    if art_count > 0 {
        let phase1: Vec<S> = artificial
            .iter()
            .map(|&a| if a { S::one() } else { S::zero() })
            .collect();
        t.set_costs(&phase1);
        t.run()?;
        let w = -t.obj[width].clone();
        if w.is_strictly_positive() {
            let y = t.duals(&init_col, &phase1);
            let farkas = y
                .iter()
                .zip(&sigma)
                .take(orig_rows)
                .map(|(v, &s)| -(v.clone() * S::from_int(s as i64)))
                .collect();
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                primal: Vec::new(),
                dual: Vec::new(),
                objective: S::zero(),
                farkas: Some(farkas),
                ray: None,
                pivots: t.pivots,
            });
        }
        for r in 0..m {
            if !artificial[t.basis[r]] {
                continue;
            }
            if let Some(j) = (0..width).find(|&j| !artificial[j] && !t.rows[r][j].is_negligible()) {
                t.pivot(r, j)?;
            }
        }
    }
    t.artificial = artificial;

    let mut cost2 = col_cost;
    cost2.resize(width, S::zero());
    t.set_costs(&cost2);
    let outcome = t.run()?;
    let x = t.column_values();
    let primal = map_back(&x, true);
    match outcome {
        Outcome::Optimal => {
            let y = t.duals(&init_col, &cost2);
            let sgn: i64 = match problem.sense {
                Sense::Minimize => 1,
                Sense::Maximize => -1,
            };
            let dual = y
                .iter()
                .zip(&sigma)
                .take(orig_rows)
                .map(|(v, &s)| v.clone() * S::from_int(sgn * s as i64))
                .collect();
            let objective = problem.objective_value(&primal);
            Ok(LpSolution {
                status: LpStatus::Optimal,
                primal,
                dual,
                objective,
                farkas: None,
                ray: None,
                pivots: t.pivots,
            })
        }
        Outcome::Unbounded(j) => {
            let mut d = vec![S::zero(); width];
            d[j] = S::one();
            for (r, &b) in t.basis.iter().enumerate() {
                d[b] = -t.rows[r][j].clone();
            }
            Ok(LpSolution {
                status: LpStatus::Unbounded,
                primal,
                dual: Vec::new(),
                objective: S::zero(),
                farkas: None,
                ray: Some(map_back(&d, false)),
                pivots: t.pivots,
            })
        }
    }
}
