use proptest::prelude::*;
use radon_core::inequality::{alternating_power_check, exponential_weight_check, power_weight_check};
use radon_core::profiles::random_step_profile_stream;
use radon_core::stats::log_log_slope;
use radon_core::StreamRng;

#[test]
fn alternating_inequality_on_ten_thousand_tuples() {
    let mut violations = 0;
    for i in 0..10_000u64 {
        let mut rng = StreamRng::new(2024, i);
        let len = rng.int_in(2, 40) as usize;
        let mut x: Vec<f64> = (0..len).map(|_| rng.uniform_in(0.0, 10.0)).collect();
        x.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for gamma in [1.0, 1.5, 2.0, len as f64 / 2.0, 5.0] {
            if !alternating_power_check(&x, gamma.max(1.0)).unwrap().holds {
                violations += 1;
            }
        }
    }
    assert_eq!(violations, 0);
}

#[test]
fn equality_cases_are_exact() {
    let c = alternating_power_check(&[2.5], 3.7).unwrap();
    assert_eq!(c.lhs, c.rhs);
    let c = alternating_power_check(&[4.0, 4.0, 1.5, 1.5], 2.0).unwrap();
    assert_eq!((c.lhs, c.rhs), (0.0, 0.0));
}

#[test]
fn exponential_constant_has_no_trend_in_interval_count() {
    for (delta, p) in [(1.0, 2.0), (0.5, 3.0), (-1.0, 1.5)] {
        let mut xs = Vec::new();
        let mut maxima = Vec::new();
        for l in [1usize, 2, 4, 8, 16, 32, 64] {
            let mut best = 0.0f64;
            for seed in 0..150u64 {
                let f = random_step_profile_stream(seed, l as u64, l, (0.0, 6.0)).unwrap();
                let shifted: Vec<(f64, f64)> = f.intervals().iter().map(|&(a, b)| (a - 3.0, b - 3.0)).collect();
                let c = exponential_weight_check(&shifted, delta, p).unwrap();
                best = best.max(c.ratio.unwrap());
                assert!(c.ratio.unwrap() <= c.derived_bound * (1.0 + 1e-12));
            }
            xs.push(l as f64);
            maxima.push(best);
        }
        let fit = log_log_slope(&xs, &maxima).unwrap();
        assert!(fit.slope <= 0.05, "δ={delta} p={p}: slope {}", fit.slope);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn power_form_below_derived_bound(seed in 0u64..100_000, l in 1usize..12, p in 1.01f64..5.0, delta in 0.2f64..3.0) {
        let f = random_step_profile_stream(seed, 9, l, (0.0, 5.0)).unwrap();
        let c = power_weight_check(&f, delta, p).unwrap();
        prop_assert!(c.ratio.unwrap() <= c.derived_bound * (1.0 + 1e-10));
    }

    #[test]
    fn power_form_is_exponential_form(seed in 0u64..100_000, p in 1.01f64..4.0, delta in 0.2f64..2.0) {
        let f = random_step_profile_stream::<f64>(seed, 8, 3, (0.1, 4.0)).unwrap();
        let logs: Vec<(f64, f64)> = f.intervals().iter().map(|&(a, b)| (a.ln(), b.ln())).collect();
        let a = power_weight_check(&f, delta, p).unwrap();
        let b = exponential_weight_check(&logs, delta, p).unwrap();
        prop_assert!((a.ratio.unwrap() - b.ratio.unwrap()).abs() <= 1e-10 * a.ratio.unwrap());
    }
}
