//! The mean retraction `μ: ℓ∞(G, V) → V` for a finite group, where the
//! invariant mean is the uniform average.
//!
//! `W` is a coordinate space with the max norm on which `G` acts by signed
//! permutations, and `V = W′` carries the dual ℓ¹ norm. A signed
//! permutation is orthogonal, so the dual action `(g·v)(w) = v(g⁻¹w)` has
//! the same matrix on dual coordinates.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::presentations::{Presentation, PreparedOracle, WordOracle};
use crate::report::CertificateReport;
use crate::scalar::{q, qi, Rational};

use super::CertificateError;

/// `e_i ↦ sign[i] · e_{target[i]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    pub target: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(dim: usize) -> Self {
        Self {
            target: (0..dim).collect(),
            sign: vec![1; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.target.len()
    }

    /// Reads a square matrix (`rows[i][j]` is the coefficient of `e_i` in
    /// the image of `e_j`); `None` unless it is a signed permutation.
    pub fn from_matrix(rows: &[Vec<Rational>]) -> Option<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return None;
        }
        let mut target = vec![0; n];
        let mut sign = vec![0i8; n];
        let mut hit = vec![false; n];
        for j in 0..n {
            let nz: Vec<usize> = (0..n).filter(|&i| !rows[i][j].is_zero()).collect();
            let [i] = nz[..] else { return None };
            if hit[i] || rows[i][j].abs() != qi(1) {
                return None;
            }
            hit[i] = true;
            target[j] = i;
            sign[j] = if rows[i][j].is_positive() { 1 } else { -1 };
        }
        Some(Self { target, sign })
    }

    /// Whitespace-separated signed 1-based targets: `"2 3 -1"` sends
    /// `e_1 ↦ e_2`, `e_2 ↦ e_3`, `e_3 ↦ -e_1`.
    pub fn parse(text: &str) -> Option<Self> {
        let mut target = Vec::new();
        let mut sign = Vec::new();
        for tok in text.split_whitespace() {
            let v: i64 = tok.parse().ok()?;
            if v == 0 {
                return None;
            }
            target.push(v.unsigned_abs() as usize - 1);
            sign.push(if v > 0 { 1 } else { -1 });
        }
        let mut seen = vec![false; target.len()];
        for &t in &target {
            if t >= target.len() || std::mem::replace(&mut seen[t], true) {
                return None;
            }
        }
        Some(Self { target, sign })
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        for (j, x) in v.iter().enumerate() {
            out[self.target[j]] = if self.sign[j] > 0 { x.clone() } else { -x.clone() };
        }
        out
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let target = other.target.iter().map(|&t| self.target[t]).collect();
        let sign = (0..other.dim())
            .map(|j| other.sign[j] * self.sign[other.target[j]])
            .collect();
        Self { target, sign }
    }

    pub fn inverse(&self) -> Self {
        let mut target = vec![0; self.dim()];
        let mut sign = vec![1; self.dim()];
        for j in 0..self.dim() {
            target[self.target[j]] = j;
            sign[self.target[j]] = self.sign[j];
        }
        Self { target, sign }
    }
}

/// Generator actions from matrices; fails on the first matrix that is not a
/// signed permutation.
pub fn actions_from_matrices(matrices: &[Vec<Vec<Rational>>]) -> Result<Vec<SignedPermutation>, CertificateError> {
    matrices
        .iter()
        .enumerate()
        .map(|(generator, m)| SignedPermutation::from_matrix(m).ok_or(CertificateError::NonIsometric { generator }))
        .collect()
}

/// `(1/|G|) Σ_h f(h)` for `f` given as one vector per group element.
pub fn uniform_mean(f: &[Vec<Rational>]) -> Vec<Rational> {
    let dim = f.first().map_or(0, Vec::len);
    let n = qi(f.len() as i64);
    (0..dim)
        .map(|i| f.iter().fold(Rational::zero(), |acc, v| acc + v[i].clone()) / n.clone())
        .collect()
}

fn l1(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, x| acc + x.abs())
}

fn sup_l1(f: &[Vec<Rational>]) -> Rational {
    f.iter().map(|v| l1(v)).max().unwrap_or_else(Rational::zero)
}

fn dyadic(rng: &mut ChaCha8Rng) -> Rational {
    q(rng.gen_range(-256..=256), 256)
}

#[derive(Clone, Debug)]
pub struct MeanReport {
    pub order: usize,
    pub dim: usize,
    pub trials: usize,
    pub seed: u64,
    pub retraction_failures: usize,
    pub norm_failures: usize,
    pub equivariance_failures: usize,
    /// Largest `‖μ(f)‖ / ‖f‖` over the sampled `f`.
    pub max_norm_ratio: Rational,
}

/// Verifies that the uniform average is a norm-non-increasing, equivariant
/// retraction on `trials` random dyadic functions `G → V`.
pub fn mean_retraction_check(
    p: &Presentation,
    oracle: WordOracle,
    action: &[SignedPermutation],
    trials: usize,
    seed: u64,
) -> Result<MeanReport, CertificateError> {
    if !matches!(oracle, WordOracle::FiniteEnumeration { .. }) {
        return Err(CertificateError::NotFinite);
    }
    let prepared = PreparedOracle::new(oracle, p).map_err(|_| CertificateError::NotFinite)?;
    let group = prepared.finite_group().ok_or(CertificateError::NotFinite)?;
    if action.len() != p.generator_count() {
        return Err(CertificateError::InvalidParameter(format!(
            "{} generator actions given for {} generators",
            action.len(),
            p.generator_count()
        )));
    }
    let dim = action.first().map_or(0, SignedPermutation::dim);
    if dim == 0 || action.iter().any(|a| a.dim() != dim) {
        return Err(CertificateError::InvalidParameter("actions must share a positive dimension".into()));
    }
    let act_word = |w: &crate::presentations::Word| {
        w.letters().iter().fold(SignedPermutation::identity(dim), |acc, &l| {
            let g = &action[crate::presentations::letter_generator(l)];
            acc.compose(&if l > 0 { g.clone() } else { g.inverse() })
        })
    };
    if let Some(relator) = p.relators().iter().position(|r| act_word(r) != SignedPermutation::identity(dim)) {
        return Err(CertificateError::NotAModule { relator });
    }
    let order = group.order();
    let element_action: Vec<SignedPermutation> = (0..order).map(|g| act_word(group.representative(g))).collect();
    let inverse: Vec<usize> = (0..order).map(|g| group.inverse(g)).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = MeanReport {
        order,
        dim,
        trials,
        seed,
        retraction_failures: 0,
        norm_failures: 0,
        equivariance_failures: 0,
        max_norm_ratio: Rational::zero(),
    };
    for _ in 0..trials {
        let v: Vec<Rational> = (0..dim).map(|_| dyadic(&mut rng)).collect();
        if uniform_mean(&vec![v.clone(); order]) != v {
            report.retraction_failures += 1;
        }
        let f: Vec<Vec<Rational>> = (0..order)
            .map(|_| (0..dim).map(|_| dyadic(&mut rng)).collect())
            .collect();
        let m = uniform_mean(&f);
        let (nm, nf) = (l1(&m), sup_l1(&f));
        if nm > nf {
            report.norm_failures += 1;
        }
        if !nf.is_zero() {
            report.max_norm_ratio = report.max_norm_ratio.clone().max(nm / nf);
        }
        for g in 0..order {
            // (g·f)(h) = g·f(g⁻¹h)
            let gf: Vec<Vec<Rational>> = (0..order)
                .map(|h| element_action[g].apply(&f[group.multiply(inverse[g], h)]))
                .collect();
            if uniform_mean(&gf) != element_action[g].apply(&m) {
                report.equivariance_failures += 1;
            }
        }
    }
    Ok(report)
}

impl MeanReport {
    pub fn passed(&self) -> bool {
        self.retraction_failures == 0 && self.norm_failures == 0 && self.equivariance_failures == 0
    }

    pub fn report(&self) -> CertificateReport {
        let mut r = CertificateReport::new("mean");
        r.value = Some(self.max_norm_ratio.to_string());
        r.detail("order", self.order);
        r.detail("dim", self.dim);
        r.detail("trials", self.trials);
        r.detail("seed", self.seed);
        r.check("retraction on constants", 0, self.retraction_failures, self.retraction_failures == 0);
        r.check("norm non-increasing", 0, self.norm_failures, self.norm_failures == 0);
        r.check("equivariance", 0, self.equivariance_failures, self.equivariance_failures == 0);
        r
    }
}
