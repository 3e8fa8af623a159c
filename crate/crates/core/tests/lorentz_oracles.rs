use approx::assert_relative_eq;
use proptest::prelude::*;
use radon_core::lorentz::{self, LorentzIndex};
use radon_core::profiles::{random_step_profile_stream, weighted_measure};
use radon_core::{RadialMeasure, StepProfile, StreamRng};

fn random_levels(seed: u64, count: usize) -> StepProfile<f64> {
    let f = random_step_profile_stream(seed, 1, count, (0.0, 3.0)).unwrap();
    let mut rng = StreamRng::new(seed, 2);
    let heights = (0..count).map(|_| rng.uniform_in(0.1, 5.0)).collect();
    StepProfile::new(f.intervals().to_vec(), heights).unwrap()
}

/// `(q/p ∫_0^∞ (t^{1/p} f*(t))^q dt/t)^{1/q}` by a brute-force rearrangement on a fine grid of the
/// radius variable, then a composite rule in `t` on each level piece.
fn brute_force_norm(f: &StepProfile<f64>, measure: &RadialMeasure<f64>, p: f64, q: f64) -> f64 {
    // Distribution of values over measure, cell by cell.
    let mut cells: Vec<(f64, f64)> = Vec::new();
    for (a, b, h) in f.iter() {
        cells.push((h, measure.integrate(a, b).unwrap()));
    }
    cells.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap());
    let mut acc = 0.0;
    let mut start = 0.0;
    for (h, m) in cells {
        let end = start + m;
        if q.is_infinite() {
            acc = f64::max(acc, h * end.powf(1.0 / p));
        } else {
            // Simpson in v = t^{1/p}, where (q/p) t^{q/p-1} dt = q v^{q-1} dv.
            let steps = 2000;
            let (v0, v1) = (start.powf(1.0 / p), end.powf(1.0 / p));
            let w = (v1 - v0) / steps as f64;
            let g = |v: f64| q * v.powf(q - 1.0);
            let mut s = g(v0) + g(v1);
            for i in 1..steps {
                s += g(v0 + i as f64 * w) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            acc += h.powf(q) * s * w / 3.0;
        }
        start = end;
    }
    if q.is_infinite() {
        acc
    } else {
        acc.powf(1.0 / q)
    }
}

#[test]
fn norm_matches_brute_force_rearrangement() {
    let measure = RadialMeasure::power_law(4.0 * std::f64::consts::PI, 2.0);
    for seed in 0..10 {
        let f = random_levels(seed, 4);
        for (p, q) in [(1.5, 1.0), (2.0, 2.0), (3.0, 1.5), (1.5, f64::INFINITY)] {
            let v = lorentz::lorentz_norm(&f, &measure, LorentzIndex::new(p, q).unwrap()).unwrap();
            let oracle = brute_force_norm(&f, &measure, p, q);
            assert_relative_eq!(v, oracle, max_relative = 1e-6);
        }
    }
}

#[test]
fn identity_over_family() {
    let measure = RadialMeasure::power_law(1.0, 1.0);
    for seed in 0..1000 {
        let f = random_levels(seed, 1 + (seed as usize % 7));
        for p in [1.0, 1.5, 3.0] {
            for q in [1.0, 2.0, 4.0, f64::INFINITY] {
                let idx = LorentzIndex::new(p, q).unwrap();
                let a = lorentz::lorentz_norm(&f, &measure, idx).unwrap();
                let b = lorentz::lorentz_norm_by_distribution(&f, &measure, idx).unwrap();
                assert_relative_eq!(a, b, max_relative = 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decreasing_in_q(seed in 0u64..100_000, p in 1.0f64..4.0, q1 in 1.0f64..4.0, dq in 0.0f64..4.0) {
        let f = random_levels(seed, 5);
        let m = RadialMeasure::lebesgue();
        let a = lorentz::lorentz_norm(&f, &m, LorentzIndex::new(p, q1).unwrap()).unwrap();
        let b = lorentz::lorentz_norm(&f, &m, LorentzIndex::new(p, q1 + dq).unwrap()).unwrap();
        let w = lorentz::lorentz_norm(&f, &m, LorentzIndex::weak(p).unwrap()).unwrap();
        prop_assert!(b <= a * (1.0 + 1e-12));
        prop_assert!(w <= b * (1.0 + 1e-12));
    }

    #[test]
    fn indicator_norm_is_measure_power(seed in 0u64..100_000, l in 1usize..20, p in 1.0f64..6.0) {
        let f = random_step_profile_stream(seed, 0, l, (0.0, 2.0)).unwrap();
        let m = RadialMeasure::power_law(2.0, 3.0);
        let v = lorentz::lorentz_norm(&f, &m, LorentzIndex::new(p, 1.0).unwrap()).unwrap();
        let total = weighted_measure(&f, &m).unwrap();
        prop_assert!((v - total.powf(1.0 / p)).abs() <= 1e-12 * v);
    }

    #[test]
    fn rearrangement_preserves_distribution(seed in 0u64..100_000, level in 0.0f64..5.0) {
        let f = random_levels(seed, 6);
        let m = RadialMeasure::power_law(1.0, 2.0);
        let star = lorentz::decreasing_rearrangement(&f, &m).unwrap();
        let a = lorentz::distribution_function(&f, &m, level).unwrap();
        let b = lorentz::distribution_function(&star, &RadialMeasure::lebesgue(), level).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }
}
