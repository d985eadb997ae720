use num_traits::{One, Zero};
use proptest::prelude::*;

use torsion_core::bounds::{commutator, ehn_commutator_count};
use torsion_core::fragmentation::{fragment_circle, product, verify_certificate};
use torsion_core::qm_lab::{sample_lift, SamplerConfig};
use torsion_core::rational::{floor, ratio, Q};
use torsion_core::rotation::tau_bounds;
use torsion_core::{AnnulusLift, PLLift};

/// Lifts with 1 to 4 breakpoints on a grid of 1/24, values increasing within one period.
fn arb_lift() -> impl Strategy<Value = PLLift> {
    (
        prop::collection::btree_set(0i64..24, 1..=4),
        prop::collection::vec(1i64..12, 4),
        -60i64..60,
    )
        .prop_map(|(xs, steps, offset)| {
            let xs: Vec<i64> = xs.into_iter().collect();
            // y-increments are positive and sum below 1 + (total x-range) to respect the wrap
            let total: i64 = steps.iter().take(xs.len()).sum();
            let mut y = ratio(offset, 8);
            let mut samples = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                samples.push((ratio(*x, 24), y.clone()));
                y += ratio(steps[i], total + 1);
            }
            PLLift::new(samples).expect("increasing samples within one period")
        })
}

fn arb_sampled() -> impl Strategy<Value = PLLift> {
    (any::<u64>(), -80i64..80, 0i64..6).prop_map(|(seed, off, rough)| {
        let c = SamplerConfig::new(seed, ratio(off, 8), ratio(rough, 16));
        sample_lift(&c).unwrap()
    })
}

fn arb_x() -> impl Strategy<Value = Q> {
    (-200i64..200, 1i64..30).prop_map(|(p, q)| ratio(p, q))
}

fn scan_displacement(f: &PLLift) -> (Q, Q) {
    // brute force: every sample point, its integer translates, and a fine grid
    let mut pts: Vec<Q> = (0..97).map(|k| ratio(k, 96)).collect();
    for (x, _) in f.samples() {
        pts.push(x.clone());
        pts.push(x + Q::one());
    }
    let ds: Vec<Q> = pts.iter().map(|x| f.eval(x) - x).collect();
    (
        ds.iter().min().unwrap().clone(),
        ds.iter().max().unwrap().clone(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn equivariance(f in arb_lift(), x in arb_x(), k in -5i64..5) {
        let kq = Q::from_integer(k.into());
        prop_assert_eq!(f.eval(&(&x + &kq)), f.eval(&x) + kq);
    }

    #[test]
    fn monotone(f in arb_sampled(), x in arb_x(), y in arb_x()) {
        if x < y {
            prop_assert!(f.eval(&x) < f.eval(&y));
        }
    }

    #[test]
    fn associativity(f in arb_lift(), g in arb_sampled(), h in arb_lift()) {
        prop_assert_eq!(f.compose(&g).compose(&h), f.compose(&g.compose(&h)));
    }

    #[test]
    fn composition_is_pointwise(f in arb_lift(), g in arb_sampled(), x in arb_x()) {
        prop_assert_eq!(f.compose(&g).eval(&x), f.eval(&g.eval(&x)));
    }

    #[test]
    fn inverse_law(f in arb_sampled(), x in arb_x()) {
        prop_assert!(f.compose(&f.inverse()).is_identity());
        prop_assert!(f.inverse().compose(&f).is_identity());
        prop_assert_eq!(f.inverse().eval(&f.eval(&x)), x);
    }

    #[test]
    fn spread_below_one(f in arb_lift()) {
        let d = f.displacement();
        prop_assert!(&d.max_disp - &d.min_disp < Q::one());
    }

    #[test]
    fn extrema_match_scan(f in arb_lift()) {
        let d = f.displacement();
        let (lo, hi) = scan_displacement(&f);
        prop_assert_eq!(d.min_disp, lo);
        prop_assert_eq!(d.max_disp, hi);
    }

    #[test]
    fn tau_width_and_nesting(f in arb_sampled(), e in 0u32..6) {
        let n = 1u64 << e;
        let a = tau_bounds(&f, n).unwrap();
        let b = tau_bounds(&f, 2 * n).unwrap();
        prop_assert!(a.width() < ratio(1, n as i64));
        prop_assert!(a.intersects(&b));
    }

    #[test]
    fn rho_and_alpha_are_lift_invariant(lower in arb_sampled(), upper in arb_sampled(), k in -4i64..4) {
        let a = AnnulusLift::new(lower, upper);
        let b = a.translate(k);
        prop_assert_eq!(a.alpha(), b.alpha());
        let w = ratio(1, 16);
        let ra = a.rho(&w, 4).unwrap();
        let rb = b.rho(&w, 4).unwrap();
        prop_assert!(ra.intersects(&rb));
    }

    #[test]
    fn recenter_normalizes(lower in arb_sampled(), upper in arb_sampled()) {
        let a = AnnulusLift::new(lower, upper);
        let r = a.recenter();
        let d0 = r.lift.lower.eval(&r.x0) - &r.x0;
        prop_assert!(d0 > -Q::one() && d0 <= Q::zero());
        prop_assert!(r.lift.upper.eval(&r.x0) >= r.lift.lower.eval(&r.x0));
        prop_assert_eq!(r.lift.alpha(), a.alpha());
    }

    #[test]
    fn fragmentation_round_trip(f in arb_lift()) {
        let c = fragment_circle(&f).unwrap();
        let k = floor(&f.displacement().min_abs_disp);
        if !f.is_identity() && f.fixed_interval().is_none() {
            prop_assert_eq!(num_bigint::BigInt::from(c.factors.len()), k + 2);
        }
        prop_assert_eq!(product(&c.factors), f);
        prop_assert!(verify_certificate(&c).passed());
    }

    #[test]
    fn single_commutator_is_small(g in arb_sampled(), h in arb_lift()) {
        let p = commutator(&g, &h);
        prop_assert!(p.displacement().min_abs_disp < Q::one());
        prop_assert!(ehn_commutator_count(&p) <= 1.into());
    }
}
