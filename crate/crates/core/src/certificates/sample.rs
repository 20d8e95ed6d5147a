//! Sampling cocycles of unit sup norm to estimate a uniform primitive
//! constant over one truncation.

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chains::SparseCochain;
use crate::complexes::CellComplex;
use crate::lpcore::LpBudget;
use crate::report::CertificateReport;
use crate::scalar::{q, Extended, Rational};

use super::iso::{iso_constant, iso_constant_relative};
use super::CertificateError;

#[derive(Clone, Debug)]
pub struct SampleReport {
    pub degree: usize,
    pub relative: bool,
    pub seed: u64,
    pub sampled: usize,
    pub appended: usize,
    /// `Λ_R` per cocycle, sampled ones first.
    pub lambdas: Vec<Extended<Rational>>,
    /// `None` when nothing was evaluated.
    pub max: Option<Extended<Rational>>,
    pub argmax: Option<usize>,
    pub argmax_cocycle: Option<SparseCochain<Rational>>,
}

/// Top-degree cochain with independent values `m/256`, `m ∈ [-256, 256]`,
/// scaled to sup norm 1; zero on horoball cells when `relative`.
pub fn random_unit_cocycle(complex: &dyn CellComplex, relative: bool, rng: &mut ChaCha8Rng) -> Result<SparseCochain<Rational>, CertificateError> {
    let d = complex.top_dimension();
    let cells: Vec<usize> = (0..complex.cell_count(d))
        .filter(|&f| !(relative && complex.is_horoball(d, f)))
        .collect();
    let &first = cells.first().ok_or(CertificateError::NoEligibleCells)?;
    let mut values: Vec<(usize, Rational)> = cells.iter().map(|&f| (f, q(rng.gen_range(-256..=256), 256))).collect();
    let sup = values.iter().map(|(_, v)| v.abs()).max().unwrap_or_else(Rational::zero);
    if sup.is_zero() {
        values[0] = (first, q(1, 1));
    } else {
        for (_, v) in &mut values {
            *v = v.clone() / sup.clone();
        }
    }
    Ok(SparseCochain::from_entries(d, values))
}

/// Computes `Λ_R` for `samples` random unit cocycles followed by the
/// `appended` ones; deterministic in `seed`.
pub fn strong_vanishing_sample(
    complex: &dyn CellComplex,
    relative: bool,
    samples: usize,
    seed: u64,
    appended: &[SparseCochain<Rational>],
    budget: LpBudget,
) -> Result<SampleReport, CertificateError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cocycles = Vec::with_capacity(samples + appended.len());
    for _ in 0..samples {
        cocycles.push(random_unit_cocycle(complex, relative, &mut rng)?);
    }
    cocycles.extend(appended.iter().cloned());

    let mut lambdas = Vec::with_capacity(cocycles.len());
    let mut best: Option<(usize, Extended<Rational>)> = None;
    for (i, a) in cocycles.iter().enumerate() {
        let cert = if relative {
            iso_constant_relative(complex, a, budget)?
        } else {
            iso_constant(complex, a, budget)?
        };
        if best.as_ref().map_or(true, |(_, b)| !cert.lambda.le(b)) {
            best = Some((i, cert.lambda.clone()));
        }
        lambdas.push(cert.lambda);
    }
    Ok(SampleReport {
        degree: complex.top_dimension(),
        relative,
        seed,
        sampled: samples,
        appended: appended.len(),
        lambdas,
        max: best.as_ref().map(|(_, v)| v.clone()),
        argmax: best.as_ref().map(|(i, _)| *i),
        argmax_cocycle: best.map(|(i, _)| cocycles[i].clone()),
    })
}

impl SampleReport {
    pub fn report(&self) -> CertificateReport {
        let mut r = CertificateReport::new("sample");
        if let Some(m) = &self.max {
            r.set_value(m);
        }
        r.detail("degree", self.degree);
        r.detail("relative", self.relative);
        r.detail("seed", self.seed);
        r.detail("sampled", self.sampled);
        r.detail("appended", self.appended);
        r.detail("max_defined", self.max.is_some());
        r.detail("lambdas", self.lambdas.iter().map(|l| l.render()).collect::<Vec<_>>());
        if let Some(i) = self.argmax {
            r.detail("argmax", i);
        }
        if let Some(a) = &self.argmax_cocycle {
            r.detail("argmax_cocycle", a.to_literal());
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::area_cocycle;
    use crate::complexes::build_ball;
    use crate::corpus;

    #[test]
    fn empty_sample_has_no_max() {
        let b = build_ball(&corpus::presentation("z2").unwrap(), 2, corpus::oracle("z2").unwrap()).unwrap();
        let s = strong_vanishing_sample(&b, false, 0, 1, &[], LpBudget::default()).unwrap();
        assert!(s.max.is_none());
        assert_eq!(s.report().details["max_defined"], false);
    }

    #[test]
    fn deterministic_and_unit_norm() {
        let b = build_ball(&corpus::presentation("z2").unwrap(), 2, corpus::oracle("z2").unwrap()).unwrap();
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let a = random_unit_cocycle(&b, false, &mut r1).unwrap();
        assert_eq!(a, random_unit_cocycle(&b, false, &mut r2).unwrap());
        assert_eq!(a.sup_norm(&b), q(1, 1));
        let area = area_cocycle(b.presentation());
        let s = strong_vanishing_sample(&b, false, 3, 9, &[area], LpBudget::default()).unwrap();
        assert_eq!(s.lambdas.len(), 4);
        assert!(s.lambdas[3].le(s.max.as_ref().unwrap()));
        let again = strong_vanishing_sample(&b, false, 3, 9, &[], LpBudget::default()).unwrap();
        assert_eq!(again.lambdas[..], s.lambdas[..3]);
    }

    #[test]
    fn free_group_has_no_cells() {
        let b = build_ball(&corpus::presentation("f2").unwrap(), 2, corpus::oracle("f2").unwrap()).unwrap();
        assert_eq!(
            strong_vanishing_sample(&b, false, 2, 0, &[], LpBudget::default()).unwrap_err(),
            CertificateError::NoEligibleCells
        );
    }
}
