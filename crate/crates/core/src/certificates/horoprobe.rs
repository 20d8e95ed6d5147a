//! Filling ratios of rectangular loops inside horoballs.

use crate::chains::SparseChain;
use crate::complexes::CuspedBall;
use crate::lpcore::{fill_norm, LpBudget};
use crate::report::CertificateReport;
use crate::scalar::{qi, Extended, Rational};

use super::CertificateError;

/// Loop along depth `d1` from member `j` to `j2`, up to depth `d2`, back
/// across to `j`, and down.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeLoop {
    pub coset: usize,
    pub j: usize,
    pub j2: usize,
    pub d1: usize,
    pub d2: usize,
    pub length: Rational,
    pub fill: Extended<Rational>,
}

#[derive(Clone, Debug)]
pub struct HoroProbe {
    pub depth: usize,
    pub loops: Vec<ProbeLoop>,
    /// `max fill / length` over the family.
    pub max_ratio: Extended<Rational>,
    pub argmax: usize,
}

fn rectangle(c: &CuspedBall, coset: usize, j: usize, j2: usize, d1: usize, d2: usize) -> Option<SparseChain<Rational>> {
    let mut steps = vec![c.horo_edge(coset, (j, d1), (j2, d1))?, c.horo_edge(coset, (j2, d2), (j, d2))?];
    for d in d1..d2 {
        steps.push(c.horo_edge(coset, (j2, d), (j2, d + 1))?);
        steps.push(c.horo_edge(coset, (j, d + 1), (j, d))?);
    }
    Some(SparseChain::from_entries(1, steps.into_iter().map(|(e, s)| (e, qi(s)))))
}

/// Sweeps all rectangles `0 ≤ d1 < d2 ≤ D` over pairs of coset members
/// joined by an edge at depth `d1`.
pub fn horoball_iso_probe(c: &CuspedBall, budget: LpBudget) -> Result<HoroProbe, CertificateError> {
    let depth = c.depth_limit();
    if depth == 0 || c.coset_count() == 0 {
        return Err(CertificateError::NoHoroballCells);
    }
    let mut loops = Vec::new();
    let mut best: Option<(usize, Extended<Rational>)> = None;
    for coset in 0..c.coset_count() {
        let m = c.coset_members(coset).len();
        for d1 in 0..depth {
            for d2 in d1 + 1..=depth {
                for j in 0..m {
                    for j2 in j + 1..m {
                        let Some(b) = rectangle(c, coset, j, j2, d1, d2) else { continue };
                        let length = b.l1_norm();
                        let fill = fill_norm(c, &b, budget)?.value;
                        let ratio = match &fill {
                            Extended::Finite(v) => Extended::Finite(v / &length),
                            Extended::PosInfinity => Extended::PosInfinity,
                        };
                        if best.as_ref().map_or(true, |(_, r)| !ratio.le(r)) {
                            best = Some((loops.len(), ratio));
                        }
                        loops.push(ProbeLoop {
                            coset,
                            j,
                            j2,
                            d1,
                            d2,
                            length,
                            fill,
                        });
                    }
                }
            }
        }
    }
    let (argmax, max_ratio) = best.ok_or(CertificateError::NoHoroballCells)?;
    Ok(HoroProbe {
        depth,
        loops,
        max_ratio,
        argmax,
    })
}

impl HoroProbe {
    pub fn report(&self) -> CertificateReport {
        let mut r = CertificateReport::new("horoprobe");
        r.set_value(&self.max_ratio);
        r.detail("depth", self.depth);
        r.detail("loops", self.loops.len());
        let a = &self.loops[self.argmax];
        r.detail(
            "argmax",
            serde_json::json!({
                "coset": a.coset, "j": a.j, "j2": a.j2, "d1": a.d1, "d2": a.d2,
                "length": a.length.to_string(), "fill": a.fill.render(),
            }),
        );
        r.check("measured constant is finite", "finite", self.max_ratio.render(), self.max_ratio.is_finite());
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::build_cusped_ball;
    use crate::corpus;
    use crate::scalar::q;

    #[test]
    fn depth_one_squares() {
        let rp = corpus::relative("z2_rel").unwrap();
        let c = build_cusped_ball(&rp, 1, 1).unwrap();
        let p = horoball_iso_probe(&c, LpBudget::default()).unwrap();
        // the row {A, 1, a} has two adjacent pairs at depth 0
        assert_eq!(p.loops.len(), 2);
        assert!(p.loops.iter().all(|l| l.length == qi(4)));
        assert!(p.max_ratio.is_finite());
        assert_eq!(p.max_ratio, Extended::Finite(q(1, 4)));
    }

    #[test]
    fn depth_two_sweep() {
        let rp = corpus::relative("z2_rel").unwrap();
        let c = build_cusped_ball(&rp, 2, 2).unwrap();
        let p = horoball_iso_probe(&c, LpBudget::default()).unwrap();
        assert_eq!(p.loops.len(), 29);
        assert_eq!(p.max_ratio, Extended::Finite(q(1, 3)));
        assert!(p.report().passed());
    }

    #[test]
    fn empty_family() {
        let rp = corpus::relative("z2_rel").unwrap();
        let c = build_cusped_ball(&rp, 1, 0).unwrap();
        assert_eq!(horoball_iso_probe(&c, LpBudget::default()).unwrap_err(), CertificateError::NoHoroballCells);
    }
}
