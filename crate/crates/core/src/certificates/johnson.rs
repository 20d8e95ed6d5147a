//! The Johnson cocycle `J(g₀, g₁)[f] = f(g₀) - f(g₁)` and its primitive
//! `α(g)[f] = f(g) - f(1)`, evaluated against test functions on a ball.
//!
//! The coboundary convention is `(δα)(g₀, g₁) = α(g₀) - α(g₁)`. Test
//! functions are supported on the ball and vanish outside it, so the
//! quotient norm `‖[f]‖ = (max f - min f) / 2` takes the value 0 into
//! account unless the ball is the whole group.

use num_traits::{Signed, Zero};

use crate::complexes::BallComplex;
use crate::presentations::PreparedOracle;
use crate::report::CertificateReport;
use crate::scalar::{qi, Extended, Rational};

use super::CertificateError;

#[derive(Clone, Debug)]
pub struct JohnsonReport {
    pub radius: usize,
    pub elements: usize,
    pub ball_is_group: bool,
    /// `(g₀, g₁, test function)` triples compared.
    pub identity_checks: usize,
    /// Index of the first triple where `δα ≠ J`, if any.
    pub identity_failure: Option<(usize, usize, usize)>,
    pub constants_vanish: bool,
    /// Largest `|α(g)[f]| / ‖[f]‖` seen.
    pub max_ratio: Rational,
    /// `(g, h, h')` attaining it with `f = 1_h - 1_h'` (`h' = None` for an
    /// indicator).
    pub argmax: Option<(usize, usize, Option<usize>)>,
}

/// `α(g)[f]` for a test function given by its values on the ball; vertex 0
/// is the identity.
pub fn johnson_primitive(f: &[Rational], g: usize) -> Rational {
    f[g].clone() - f[0].clone()
}

/// `J(g₀, g₁)[f]`.
pub fn johnson_cocycle(f: &[Rational], g0: usize, g1: usize) -> Rational {
    f[g0].clone() - f[g1].clone()
}

/// Quotient norm of a test function given by its values on the ball.
fn quotient_norm(values: &[Rational], ball_is_group: bool) -> Rational {
    let mut hi = values.iter().cloned().fold(None::<Rational>, |m, v| Some(m.map_or(v.clone(), |m| m.max(v))));
    let mut lo = values.iter().cloned().fold(None::<Rational>, |m, v| Some(m.map_or(v.clone(), |m| m.min(v))));
    if !ball_is_group {
        hi = hi.map(|h| h.max(Rational::zero()));
        lo = lo.map(|l| l.min(Rational::zero()));
    }
    match (hi, lo) {
        (Some(h), Some(l)) => (h - l) / qi(2),
        _ => Rational::zero(),
    }
}

pub fn johnson_check(ball: &BallComplex) -> Result<JohnsonReport, CertificateError> {
    if !ball.oracle_complete() {
        return Err(CertificateError::IncompleteOracle(ball.oracle().to_string()));
    }
    let oracle = PreparedOracle::new(ball.oracle(), ball.presentation())?;
    let n = ball.vertices().len();
    let order = match (oracle.finite_group(), oracle.abelian_quotient()) {
        (Some(g), _) => Some(g.order() as u64),
        (None, Some(a)) => a.order(),
        _ => None,
    };
    let ball_is_group = order == Some(n as u64);
    let alpha = |g: usize, f: &[Rational]| johnson_primitive(f, g);
    let indicator = |h: usize| {
        let mut f = vec![Rational::zero(); n];
        f[h] = qi(1);
        f
    };

    let mut identity_checks = 0;
    let mut identity_failure = None;
    for h in 0..n {
        let f = indicator(h);
        for g0 in 0..n {
            for g1 in 0..n {
                identity_checks += 1;
                if alpha(g0, &f) - alpha(g1, &f) != johnson_cocycle(&f, g0, g1) && identity_failure.is_none() {
                    identity_failure = Some((g0, g1, h));
                }
            }
        }
    }
    let constant = vec![qi(1); n];
    let constants_vanish = (0..n).all(|g| alpha(g, &constant).is_zero());

    let mut max_ratio = Rational::zero();
    let mut argmax = None;
    let mut consider = |g: usize, f: &[Rational], tag: (usize, Option<usize>)| {
        let norm = quotient_norm(f, ball_is_group);
        if norm.is_zero() {
            return;
        }
        let ratio = alpha(g, f).abs() / norm;
        if ratio > max_ratio {
            max_ratio = ratio;
            argmax = Some((g, tag.0, tag.1));
        }
    };
    for g in 0..n {
        for h in 0..n {
            consider(g, &indicator(h), (h, None));
            for h2 in (0..n).filter(|&x| x != h) {
                let mut f = indicator(h);
                f[h2] = qi(-1);
                consider(g, &f, (h, Some(h2)));
            }
        }
    }

    Ok(JohnsonReport {
        radius: ball.radius(),
        elements: n,
        ball_is_group,
        identity_checks,
        identity_failure,
        constants_vanish,
        max_ratio,
        argmax,
    })
}

impl JohnsonReport {
    pub fn report(&self) -> CertificateReport {
        let mut r = CertificateReport::new("johnson").with_radius(Some(self.radius));
        r.set_value(&Extended::Finite(self.max_ratio.clone()));
        r.detail("elements", self.elements);
        r.detail("ball_is_group", self.ball_is_group);
        r.detail("identity_checks", self.identity_checks);
        if let Some((g, h, h2)) = self.argmax {
            r.detail(
                "argmax",
                serde_json::json!({ "g": g, "plus": h, "minus": h2 }),
            );
        }
        let failure = self
            .identity_failure
            .map(|(a, b, h)| format!("fails at ({a}, {b}) on 1_{h}"))
            .unwrap_or_else(|| "holds".into());
        r.check("delta alpha = J", "holds", failure, self.identity_failure.is_none());
        r.check("alpha vanishes on constants", "true", self.constants_vanish, self.constants_vanish);
        r.check_at_most("norm bound", &qi(2), &Extended::Finite(self.max_ratio.clone()));
        r.check_eq("norm bound attained", &qi(2), &self.max_ratio);
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

    #[test]
    fn z_radius_four() {
        let b = build_ball(&corpus::presentation("z").unwrap(), 4, WordOracle::FreeReduction).unwrap();
        let j = johnson_check(&b).unwrap();
        assert_eq!(j.elements, 9);
        assert!(!j.ball_is_group);
        assert_eq!(j.identity_checks, 729);
        assert_eq!(j.max_ratio, qi(2));
        assert!(j.report().passed());
        let a = b.step(0, 1).unwrap();
        let mut f = vec![Rational::zero(); 9];
        f[a] = qi(1);
        assert_eq!(johnson_primitive(&f, a), qi(1));
        assert_eq!(johnson_primitive(&vec![qi(4); 9], a), qi(0));
    }

    #[test]
    fn z5_is_the_whole_group() {
        let b = build_ball(&corpus::presentation("z5").unwrap(), 5, corpus::oracle("z5").unwrap()).unwrap();
        let j = johnson_check(&b).unwrap();
        assert!(j.ball_is_group && j.constants_vanish);
        assert_eq!(j.max_ratio, qi(2));
        assert!(j.report().passed());
    }

    #[test]
    fn quotient_norms() {
        assert_eq!(quotient_norm(&[qi(1), qi(3)], true), qi(1));
        assert_eq!(quotient_norm(&[qi(1), qi(3)], false), q(3, 2));
        assert_eq!(quotient_norm(&[qi(2), qi(2)], true), qi(0));
    }

    #[test]
    fn incomplete_oracle_rejected() {
        let b = build_ball(&corpus::presentation("z2").unwrap(), 2, WordOracle::FreeReduction).unwrap();
        assert!(matches!(johnson_check(&b), Err(CertificateError::IncompleteOracle(_))));
    }
}
