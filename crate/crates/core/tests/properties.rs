use std::collections::BTreeSet;

use linfcert_core::certificates::{area_cocycle, iso_constant};
use linfcert_core::chains::{boundary, coboundary, SparseChain, SparseCochain};
use linfcert_core::complexes::{build_ball, build_cusped_ball, BallComplex, CellComplex};
use linfcert_core::corpus;
use linfcert_core::lpcore::{fill_norm, folner_lp_bound, solve, LpBudget, LpProblem, LpStatus, Relation, Sense};
use linfcert_core::presentations::{free_reduce, zn_product, PreparedOracle, Verdict, Word, WordOracle};
use linfcert_core::{q, qi, Extended, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn ball(name: &str, r: usize) -> BallComplex {
    build_ball(&corpus::presentation(name).unwrap(), r, corpus::oracle(name).unwrap()).unwrap()
}

fn word(gens: i32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=gens, any::<bool>()), 0..max_len)
        .prop_map(|v| Word::new(v.into_iter().map(|(g, neg)| if neg { -g } else { g }).collect()))
}

fn chain_on(c: &dyn CellComplex, dim: usize, values: &[i64]) -> SparseChain<Rational> {
    let n = c.cell_count(dim);
    SparseChain::from_entries(dim, values.iter().take(n).enumerate().map(|(i, &v)| (i, qi(v))))
}

fn cochain_on(c: &dyn CellComplex, dim: usize, values: &[i64]) -> SparseCochain<Rational> {
    let n = c.cell_count(dim);
    SparseCochain::from_entries(dim, values.iter().take(n).enumerate().map(|(i, &v)| (i, q(v, 4))))
}

fn fill(c: &dyn CellComplex, b: &SparseChain<Rational>) -> Extended<Rational> {
    fill_norm(c, b, LpBudget::default()).unwrap().value
}

fn finite(e: Extended<Rational>) -> Rational {
    e.finite().cloned().expect("finite value")
}

proptest! {
    #[test]
    fn free_reduce_is_idempotent_and_shortening(w in word(3, 24)) {
        let r = free_reduce(&w);
        prop_assert!(r.len() <= w.len());
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(free_reduce(&r), r.clone());
        prop_assert!(free_reduce(&w.concat(&w.inverse())).is_empty());
    }

    #[test]
    fn zn_product_shape(name in prop::sample::select(vec!["z", "z2", "f2", "genus2", "s3"]), n in 0usize..4) {
        let p = corpus::presentation(name).unwrap();
        let z = zn_product(&p, n).unwrap();
        let k = p.generator_count();
        prop_assert_eq!(z.generator_count(), k + n);
        let names: BTreeSet<&String> = z.generators().iter().collect();
        prop_assert_eq!(names.len(), k + n);
        prop_assert_eq!(&z.relators()[..p.relators().len()], p.relators());
        prop_assert_eq!(z.relators().len(), p.relators().len() + n * n.saturating_sub(1) / 2 + n * k);
    }

    #[test]
    fn oracles_identify_relator_insertions(
        name in prop::sample::select(vec!["z2", "genus2"]),
        u in word(4, 10),
        v in word(4, 10),
        rot in 0usize..8,
        inverse in any::<bool>(),
    ) {
        let p = corpus::presentation(name).unwrap();
        let gens = p.generator_count() as i32;
        let clip = |w: &Word| Word::new(w.letters().iter().copied().filter(|l| l.abs() <= gens).collect());
        let (u, v) = (clip(&u), clip(&v));
        let r = &p.relators()[0];
        let mut r = r.rotate(rot % r.len());
        if inverse {
            r = r.inverse();
        }
        let oracle = PreparedOracle::new(corpus::oracle(name).unwrap(), &p).unwrap();
        prop_assert_eq!(oracle.equal(&u.concat(&r).concat(&v), &u.concat(&v)), Verdict::Equal);
        let moved = u.concat(&Word::generator(0));
        let ab = PreparedOracle::new(WordOracle::AbelianNormalForm, &p);
        if let Ok(ab) = ab {
            prop_assert_ne!(ab.equal(&moved, &u), Verdict::Equal);
        }
    }

    #[test]
    fn coboundary_is_adjoint_to_boundary(
        name in prop::sample::select(vec!["z2", "genus2", "s3"]),
        a in prop::collection::vec(-8i64..=8, 200),
        x in prop::collection::vec(-8i64..=8, 200),
        dim in 1usize..=2,
    ) {
        let r = if name == "genus2" { 4 } else { 3 };
        let b = ball(name, r);
        let alpha = cochain_on(&b, dim - 1, &a);
        let c = chain_on(&b, dim, &x);
        let lhs = coboundary(&b, &alpha).pairing(&b, &c).unwrap();
        let rhs = alpha.pairing(&b, &boundary(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cusped_adjointness(a in prop::collection::vec(-8i64..=8, 120), x in prop::collection::vec(-8i64..=8, 120)) {
        let c = build_cusped_ball(&corpus::relative("z2_rel").unwrap(), 2, 2).unwrap();
        let alpha = cochain_on(&c, 1, &a);
        let ch = chain_on(&c, 2, &x);
        let lhs = coboundary(&c, &alpha).pairing(&c, &ch).unwrap();
        let rhs = alpha.pairing(&c, &boundary(&c, &ch).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// Feasible (the origin satisfies every row) and bounded (every variable is
/// boxed) random LPs.
fn lp_instance() -> impl Strategy<Value = LpProblem<Rational>> {
    (1usize..6, 1usize..6, any::<bool>()).prop_flat_map(|(n, m, maximize)| {
        (
            prop::collection::vec((-6i64..=6, 0usize..3), n),
            prop::collection::vec((prop::collection::vec(-5i64..=5, n), 0usize..3, 0i64..=9), m),
        )
            .prop_map(move |(vars, rows)| {
                let mut lp = LpProblem::new(if maximize { Sense::Maximize } else { Sense::Minimize });
                for (i, (cost, kind)) in vars.into_iter().enumerate() {
                    let (lo, hi) = match kind {
                        0 => (Some(qi(0)), Some(qi(7))),
                        1 => (Some(qi(-3)), Some(qi(4))),
                        _ => (Some(qi(0)), Some(q(5, 2))),
                    };
                    lp.add_variable(format!("x{i}"), qi(cost), lo, hi);
                }
                for (coeffs, rel, rhs) in rows {
                    let coeffs: Vec<(usize, Rational)> = coeffs.into_iter().enumerate().map(|(j, a)| (j, qi(a))).collect();
                    match rel {
                        0 => lp.add_constraint(coeffs, Relation::Le, qi(rhs)),
                        1 => lp.add_constraint(coeffs, Relation::Ge, qi(-rhs)),
                        _ => lp.add_constraint(coeffs, Relation::Eq, qi(0)),
                    };
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn lp_strong_duality(lp in lp_instance()) {
        let s = solve(&lp).unwrap();
        prop_assert_eq!(s.status, LpStatus::Optimal);
        prop_assert!(lp.is_feasible(&s.primal).is_ok());
        prop_assert_eq!(lp.objective_value(&s.primal), s.objective.clone());
        prop_assert!(s.check(&lp).is_ok(), "{:?}", s.check(&lp));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fill_norm_is_a_norm_on_boundaries(
        x in prop::collection::vec(-3i64..=3, 12),
        y in prop::collection::vec(-3i64..=3, 12),
        t in -6i64..=6,
    ) {
        let b = ball("z2", 3);
        let (cx, cy) = (chain_on(&b, 2, &x), chain_on(&b, 2, &y));
        let (bx, by) = (boundary(&b, &cx).unwrap(), boundary(&b, &cy).unwrap());
        let (fx, fy) = (finite(fill(&b, &bx)), finite(fill(&b, &by)));
        prop_assert!(fx <= cx.l1_norm());
        let sum = finite(fill(&b, &bx.add_scaled(&by, &qi(1)).unwrap()));
        prop_assert!(sum <= fx.clone() + fy);
        let tq = q(t, 2);
        prop_assert_eq!(finite(fill(&b, &bx.scale(&tq))), tq.abs() * fx);
    }

    #[test]
    fn mediant_inequality_without_cancellation(
        x in prop::collection::vec(prop_oneof![5 => Just(0i64), 1 => 1i64..=4], 40),
        y in prop::collection::vec(prop_oneof![3 => Just(0i64), 1 => 1i64..=4], 40),
    ) {
        let b = ball("z2", 4);
        let pos = chain_on(&b, 2, &x);
        let touched: BTreeSet<usize> = pos.entries().keys().flat_map(|&f| b.cell_boundary(2, f)).map(|(e, _)| e).collect();
        let neg = SparseChain::from_entries(
            2,
            chain_on(&b, 2, &y)
                .entries()
                .iter()
                .filter(|(&f, _)| b.cell_boundary(2, f).iter().all(|(e, _)| !touched.contains(e)))
                .map(|(&f, v)| (f, v.clone())),
        );
        prop_assume!(!pos.is_zero() && !neg.is_zero());
        let c = pos.add_scaled(&neg, &qi(-1)).unwrap();
        let ratio = |ch: &SparseChain<Rational>| boundary(&b, ch).unwrap().l1_norm() / ch.l1_norm();
        let best = ratio(&pos).min(ratio(&neg));
        prop_assert!(best <= ratio(&c));
    }

    #[test]
    fn iso_constant_is_homogeneous_and_monotone_in_radius(t in -8i64..=8) {
        let p = corpus::presentation("z2").unwrap();
        let alpha = area_cocycle(&p);
        let tq = q(t, 4);
        let scaled = SparseCochain::orbit_constant(
            2,
            [(linfcert_core::complexes::OrbitLabel::Relator { index: 0 }, tq.clone())].into_iter().collect(),
        );
        let mut prev = Extended::Finite(Rational::zero());
        for r in 1..=4 {
            let b = ball("z2", r);
            let l = iso_constant(&b, &scaled, LpBudget::default()).unwrap().lambda;
            let base = iso_constant(&b, &alpha, LpBudget::default()).unwrap().lambda;
            prop_assert_eq!(l.clone(), Extended::Finite(tq.abs() * finite(base)));
            prop_assert!(prev.le(&l));
            prev = l;
        }
    }
}

#[test]
fn cancellation_breaks_the_mediant_bound() {
    // every 2-cell of Z/5 has the same boundary, so face0 - face1 is a cycle
    let b = ball("z5", 5);
    let c = SparseChain::from_entries(2, [(0, qi(1)), (1, qi(-1))]);
    assert!(boundary(&b, &c).unwrap().is_zero());
    let one = SparseChain::cell(2, 0, qi(1));
    let r = boundary(&b, &one).unwrap().l1_norm();
    assert!(r > Rational::zero());
    let f = folner_lp_bound(&b, 2, LpBudget::default()).unwrap();
    assert!(f.from_kernel);
    assert_eq!(f.value, qi(0));
}

#[test]
fn folner_bound_is_monotone_in_radius() {
    let mut prev: Option<Rational> = None;
    for r in 2..=6 {
        let v = folner_lp_bound(&ball("z2", r), 2, LpBudget::default()).unwrap().value;
        if let Some(p) = &prev {
            assert!(v <= *p, "R{r}: {v} > {p}");
        }
        prev = Some(v);
    }
}

#[test]
fn genus_two_area_constant_is_monotone() {
    let p = corpus::presentation("genus2").unwrap();
    let alpha = area_cocycle(&p);
    let got: Vec<Extended<Rational>> = (1..=4)
        .map(|r| iso_constant(&ball("genus2", r), &alpha, LpBudget::default()).unwrap().lambda)
        .collect();
    let want = [qi(0), qi(0), qi(0), q(1, 6)];
    assert_eq!(got, want.map(Extended::Finite));
}
