mod common;

use common::{arb_network, arb_tier};
use hetnet_core::association::association_table;
use hetnet_core::coverage::{CoverageEvaluator, CoverageOptions};
use hetnet_core::intensity::IntensityMeasure;
use hetnet_core::model::LosProbability;
use hetnet_core::quadrature::{integrate_fn, Tolerance};
use hetnet_core::special::alzer_weights;
use hetnet_core::units::{db_to_linear, linear_to_db};
use hetnet_core::{AntennaPattern, LinkState};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn intensity_split_is_additive(tier in arb_tier(), u in 0.0..1.2f64) {
        let m = IntensityMeasure::new(&tier);
        let x = u * m.breakpoints().last().copied().unwrap_or(1.0);
        let sum = m.split(LinkState::Los, x) + m.split(LinkState::Nlos, x);
        prop_assert!((m.total(x) - sum).abs() <= 1e-12 * m.total_mass().max(1.0));
        let inf = m.total(f64::INFINITY);
        prop_assert!((inf - m.total_mass()).abs() <= 1e-12 * m.total_mass());
    }

    #[test]
    fn intensity_is_nondecreasing(tier in arb_tier(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let m = IntensityMeasure::new(&tier);
        let top = *m.breakpoints().last().unwrap() * 1.1;
        let (lo, hi) = if a < b { (a * top, b * top) } else { (b * top, a * top) };
        for s in LinkState::PROPAGATING {
            prop_assert!(m.split(s, lo) <= m.split(s, hi) + 1e-15);
        }
    }

    #[test]
    fn density_integrates_to_measure(tier in arb_tier(), a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let m = IntensityMeasure::new(&tier);
        let top = *m.breakpoints().last().unwrap();
        let (lo, hi) = if a < b { (a * top, b * top) } else { (b * top, a * top) };
        prop_assume!(hi > lo);
        for s in LinkState::PROPAGATING {
            // substitute x = t^2 so the x^(2/alpha - 1) endpoint singularity stays integrable
            let f = |t: f64| 2.0 * t * m.density(s, t * t);
            let bps: Vec<f64> = m.breakpoints().iter().map(|b| b.sqrt()).collect();
            let q = integrate_fn(f, lo.sqrt(), hi.sqrt(), bps, Tolerance::new(1e-12, 1e-12)).unwrap();
            let want = m.split(s, hi) - m.split(s, lo);
            prop_assert!((q.value - want).abs() <= 1e-8 * want.max(1.0), "{} vs {}", q.value, want);
        }
    }

    #[test]
    fn density_matches_finite_difference(tier in arb_tier(), u in 0.01..0.99f64) {
        let m = IntensityMeasure::new(&tier);
        let top = *m.breakpoints().last().unwrap();
        let x = u * top;
        let h = 1e-6 * x;
        prop_assume!(m.breakpoints().iter().all(|b| (b - x).abs() > 10.0 * h));
        for s in LinkState::PROPAGATING {
            let fd = (m.split(s, x + h) - m.split(s, x - h)) / (2.0 * h);
            let d = m.density(s, x);
            prop_assert!((fd - d).abs() <= 1e-6 * d.abs().max(1e-300) + 1e-18, "{fd} vs {d}");
        }
    }

    #[test]
    fn gain_pmf_is_normalized(theta in 1e-6..=std::f64::consts::TAU, main in 1.0..1e3f64, side in 1e-3..1.0f64) {
        let p = AntennaPattern::new(main, side, theta).unwrap();
        let pmf = p.gain_pmf();
        prop_assert!(pmf.iter().all(|a| a.prob >= 0.0));
        prop_assert!((pmf.iter().map(|a| a.prob).sum::<f64>() - 1.0).abs() <= 4.0 * f64::EPSILON);
    }

    #[test]
    fn los_probability_is_constant_per_annulus(tier in arb_tier(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        for (d, b) in tier.balls.iter().enumerate() {
            let inner = tier.inner_radius(d);
            let r1 = inner + u * (b.radius - inner);
            let r2 = inner + v * (b.radius - inner);
            prop_assert_eq!(tier.los_probability(r1), tier.los_probability(r2));
        }
        prop_assert_eq!(tier.los_probability(tier.outage_radius()), LosProbability::Outage);
    }

    #[test]
    fn path_loss_increases_with_distance(tier in arb_tier(), u in 0.0..1.0f64, v in 0.0..1.0f64) {
        prop_assume!(u != v);
        let (lo, hi) = if u < v { (u, v) } else { (v, u) };
        for (d, b) in tier.balls.iter().enumerate() {
            let inner = tier.inner_radius(d);
            for s in LinkState::PROPAGATING {
                let a = tier.path_loss(d, s, inner + lo * (b.radius - inner)).unwrap();
                let c = tier.path_loss(d, s, inner + hi * (b.radius - inner)).unwrap();
                prop_assert!(a < c || (lo == 0.0 && inner == 0.0 && a == 0.0));
            }
        }
    }

    #[test]
    fn db_round_trip(db in -200.0..200.0f64) {
        let back = linear_to_db(db_to_linear(db));
        prop_assert!((back - db).abs() <= 1e-12 * db.abs().max(1.0));
    }
}

#[test]
fn alzer_weights_sum_to_one() {
    for n in 1..=10 {
        let s: f64 = alzer_weights(n).iter().sum();
        assert!((s - 1.0).abs() < 1e-12, "N = {n}: {s}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn association_is_complete(cfg in arb_network()) {
        let t = association_table(&cfg).unwrap();
        prop_assert!((t.completeness() - 1.0).abs() <= 1e-6, "{}", t.completeness());
        prop_assert!(t.entries.iter().flatten().all(|&a| (0.0..=1.0).contains(&a)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coverage_is_bounded_monotone_and_snr_dominates(cfg in arb_network()) {
        let sinr = CoverageEvaluator::new(&cfg, CoverageOptions::default()).unwrap();
        let snr = CoverageEvaluator::new(&cfg, CoverageOptions::snr()).unwrap();
        let k = cfg.num_tiers();
        let total_assoc = 1.0 - cfg.outage_probability();
        let mut prev: Option<hetnet_core::coverage::CoverageBreakdown> = None;
        for db in [-20.0, -5.0, 5.0, 20.0] {
            let g = vec![db_to_linear(db); k];
            let a = sinr.evaluate(&g).unwrap();
            let b = snr.evaluate(&g).unwrap();
            prop_assert!(a.total() <= b.total() + 1e-6, "sinr {} > snr {}", a.total(), b.total());
            prop_assert!(b.total() <= total_assoc + 1e-6);
            for j in 0..k {
                for s in LinkState::PROPAGATING {
                    let c = a.conditional(j, s);
                    prop_assert!((0.0..=1.0).contains(&c));
                    if let Some(p) = &prev {
                        prop_assert!(c <= p.conditional(j, s) + 1e-6);
                    }
                }
            }
            prev = Some(a);
        }
    }
}
