use approx::assert_relative_eq;
use proptest::prelude::*;
use radon_core::curve::FnCurve;
use radon_core::hyperbolic::{self, HyperbolicGeometry};
use radon_core::profiles::random_step_profile_stream;
use radon_core::{Quadrature, StepProfile, WeakNormGrid};
use std::f64::consts::{LN_10, PI};

fn geom(n: u32, d: u32) -> HyperbolicGeometry {
    HyperbolicGeometry::new(n, d).unwrap()
}

fn shell() -> StepProfile<f64> {
    StepProfile::indicator(vec![(1.0, 2.0)]).unwrap()
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = f(a) + f(b);
    for i in 1..panels {
        acc += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn forms_agree_on_random_profiles() {
    let quad = Quadrature::new(1e-12);
    for (i, g) in [geom(3, 2), geom(4, 2), geom(4, 3), geom(5, 3), geom(5, 1)].iter().enumerate() {
        for seed in 0..6 {
            let f = random_step_profile_stream(seed, i as u64, 3, (1.0, 10.0)).unwrap();
            let upper = hyperbolic::acosh_stable(f.outer_radius().unwrap());
            for j in 0..15 {
                let s = upper * j as f64 / 15.0;
                let exact = hyperbolic::abel_step_closed(g, &f, s).unwrap();
                let t = hyperbolic::abel_point(g, &f, s, &quad).unwrap_or_else(|e| panic!("{i} {seed} {s} {e:?}")).value;
                let r =
                    hyperbolic::abel_point_r_form(g, &f, s, &quad).unwrap_or_else(|e| panic!("{i} {seed} {s} {f:?} {e:?}")).value;
                assert_relative_eq!(t, exact, max_relative = 1e-8, epsilon = 1e-13);
                assert_relative_eq!(r, exact, max_relative = 1e-8, epsilon = 1e-13);
            }
        }
    }
}

#[test]
fn shell_fixtures() {
    let g = geom(3, 2);
    let e = hyperbolic::endpoint_bound_ratio(&g, &shell()).unwrap();
    assert!((e.weighted - 2.0 * PI / 1.07357f64.sqrt()).abs() < 1e-3, "{}", e.weighted);
    let big_s = 2f64.acosh();
    let exact = 2.0 * PI * (3f64.sqrt() - big_s / 2.0);
    let curve = FnCurve::new(|s| hyperbolic::abel_step_closed(&g, &shell(), s).unwrap(), Some(big_s), vec![]);
    let xi = hyperbolic::xi_norm(&curve, &g, 1.0).unwrap();
    assert_relative_eq!(xi, exact, max_relative = 1e-9);
    let independent = simpson(|s| hyperbolic::abel_step_closed(&g, &shell(), s).unwrap() * s.cosh().powi(2), 0.0, big_s, 2000);
    assert_relative_eq!(independent, exact, max_relative = 1e-9);
}

#[test]
fn l1_ratio_is_profile_independent() {
    for g in [geom(3, 2), geom(4, 2), geom(5, 3)] {
        let base = hyperbolic::lp_lq_ratio(&g, &shell(), 1.0).unwrap();
        assert_eq!(base.q, 1.0);
        for seed in 0..5 {
            let f = random_step_profile_stream(seed, 4, 4, (1.0, 6.0)).unwrap();
            let r = hyperbolic::lp_lq_ratio(&g, &f, 1.0).unwrap();
            assert_relative_eq!(r.ratio, base.ratio, max_relative = 1e-8);
        }
    }
}

/// `sup_λ λ μ{g > λ}^{1/r}` on a log-spaced λ grid with golden refinement.
fn lambda_grid_sup(mu: impl Fn(f64) -> f64, r: f64, lo: f64, hi: f64) -> f64 {
    let phi = |l: f64| l * mu(l).powf(1.0 / r);
    let n = 4000;
    let (mut best, mut at) = (0.0, 0usize);
    let grid: Vec<f64> = (0..=n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / n as f64).exp()).collect();
    for (i, &l) in grid.iter().enumerate() {
        let v = phi(l);
        if v > best {
            best = v;
            at = i;
        }
    }
    let (mut a, mut b) = (grid[at.saturating_sub(1)], grid[(at + 1).min(n)]);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..100 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if phi(c) >= phi(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.max(phi(0.5 * (a + b)))
}

#[test]
fn weak_norm_of_inverse_cosh() {
    let g = geom(3, 2);
    // {1/cosh > λ} = [0, acosh(1/λ)) and ∫_0^S cosh² = S/2 + sinh(2S)/4.
    let mu = |l: f64| {
        if l >= 1.0 {
            return 0.0;
        }
        let s = (1.0 / l).acosh();
        s / 2.0 + (2.0 * s).sinh() / 4.0
    };
    let oracle = lambda_grid_sup(mu, 2.0, 1e-8, 1.0);
    assert!(oracle > 0.7 && oracle < 0.8, "{oracle}");
    let curve = FnCurve::new(|s: f64| 1.0 / s.cosh(), None, vec![]);
    let v = hyperbolic::weak_norm_of(&curve, &g, WeakNormGrid::default()).unwrap();
    assert!((v - oracle).abs() < 1e-3, "{v} vs {oracle}");
}

#[test]
fn divergence_probe_rates() {
    let g = geom(4, 2);
    let crit = g.critical_p::<f64>();
    let cuts = [10.0, 100.0, 1000.0, 10000.0];
    let at_crit = hyperbolic::divergence_probe(&g, crit, &cuts).unwrap();
    for w in at_crit.windows(2) {
        assert!(((w[1] - w[0]) / LN_10 - 1.0).abs() < 0.05);
    }
    let below = hyperbolic::divergence_probe(&g, 0.9 * crit, &cuts).unwrap();
    assert!((below[3] - below[2]).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plain_ratio_below_weighted(seed in 0u64..10_000, l in 1usize..10) {
        for g in [geom(3, 2), geom(4, 3)] {
            let f = random_step_profile_stream(seed, l as u64, l, (1.0, 10.0)).unwrap();
            let e = hyperbolic::endpoint_bound_ratio(&g, &f).unwrap();
            prop_assert!(e.plain <= e.weighted * (1.0 + 1e-12));
        }
    }

    #[test]
    fn transform_is_monotone_in_support(seed in 0u64..10_000, s in 0.0f64..3.0) {
        let g = geom(5, 3);
        let f = random_step_profile_stream(seed, 1, 3, (1.0, 8.0)).unwrap();
        let mut iv = f.intervals().to_vec();
        iv.push((9.0, 9.5));
        let bigger = StepProfile::indicator(iv).unwrap();
        let a = hyperbolic::abel_step_closed(&g, &f, s).unwrap();
        let b = hyperbolic::abel_step_closed(&g, &bigger, s).unwrap();
        prop_assert!(b >= a * (1.0 - 1e-14));
    }
}
