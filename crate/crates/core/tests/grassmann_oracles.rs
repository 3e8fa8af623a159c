use approx::assert_relative_eq;
use proptest::prelude::*;
use radon_core::grassmann::{self, GrassmannGeometry};
use radon_core::lorentz::LorentzIndex;
use radon_core::profiles::random_step_profile_stream;
use radon_core::{Quadrature, RadialProfile, StepProfile, StreamRng};

fn geom(n: u32, d: u32, k: u32) -> GrassmannGeometry {
    GrassmannGeometry::new(n, d, k).unwrap()
}

/// Tensor midpoint rule for `∫_{R²} f(√(s² + |x|²)) dx` over the disc where the integrand lives.
fn plane_grid_integral(f: &dyn Fn(f64) -> f64, s: f64, outer: f64, cells: usize) -> f64 {
    let r = (outer * outer - s * s).max(0.0).sqrt();
    let h = 2.0 * r / cells as f64;
    let mut acc = 0.0;
    for i in 0..cells {
        let x = -r + (i as f64 + 0.5) * h;
        for j in 0..cells {
            let y = -r + (j as f64 + 0.5) * h;
            acc += f((s * s + x * x + y * y).sqrt());
        }
    }
    acc * h * h
}

fn random_unit(rng: &mut StreamRng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.normal()).collect();
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / r).collect()
}

fn orthonormalize(rng: &mut StreamRng, dim: usize, count: usize) -> Vec<Vec<f64>> {
    let mut frame: Vec<Vec<f64>> = Vec::new();
    while frame.len() < count {
        let mut v = random_unit(rng, dim);
        for e in &frame {
            let dot: f64 = v.iter().zip(e).map(|(a, b)| a * b).sum();
            for (vi, ei) in v.iter_mut().zip(e) {
                *vi -= dot * ei;
            }
        }
        let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if r > 1e-6 {
            frame.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    frame
}

/// Monte-Carlo integral of `f(|v + Σ x_i e_i|)` over the plane through `v` spanned by a random
/// `m`-frame in `R^n`, sampling `x` uniformly in the disc of radius `reach`.
fn plane_monte_carlo(f: &dyn Fn(f64) -> f64, n: usize, s: f64, reach: f64, samples: usize, seed: u64) -> (f64, f64) {
    let mut rng = StreamRng::new(seed, 7);
    let frame = orthonormalize(&mut rng, n, 3);
    let (e1, e2, w) = (&frame[0], &frame[1], &frame[2]);
    let area = std::f64::consts::PI * reach * reach;
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..samples {
        let rho = reach * rng.uniform().sqrt();
        let phi = 2.0 * std::f64::consts::PI * rng.uniform();
        let (x1, x2) = (rho * phi.cos(), rho * phi.sin());
        let norm2: f64 = (0..n).map(|i| (s * w[i] + x1 * e1[i] + x2 * e2[i]).powi(2)).sum();
        let v = area * f(norm2.sqrt());
        sum += v;
        sq += v * v;
    }
    let mean = sum / samples as f64;
    let var = sq / samples as f64 - mean * mean;
    (mean, (var / samples as f64).sqrt())
}

#[test]
fn gaussian_profile_matches_plane_integral() {
    let g = geom(3, 2, 0);
    let f = RadialProfile::from_fn(|t: f64| (-t * t).exp(), None);
    let quad = Quadrature::new(1e-11);
    for s in [0.0, 0.5, 1.3] {
        let v = grassmann::abel_point(&g, &f, s, &quad).unwrap().value;
        assert_relative_eq!(v, std::f64::consts::PI * (-s * s).exp(), max_relative = 1e-9);
    }
}

#[test]
fn step_profile_matches_plane_grid() {
    let g = geom(3, 2, 0);
    let f = StepProfile::new(vec![(0.4, 1.1), (1.5, 2.0)], vec![2.0, 0.5]).unwrap();
    let eval = |t: f64| f.evaluate(t).unwrap();
    for s in [0.0, 0.7, 1.2, 1.8] {
        let grid = plane_grid_integral(&eval, s, 2.0, 1600);
        let exact = grassmann::abel_step_closed(&g, &f, s).unwrap();
        assert_relative_eq!(grid, exact, max_relative = 5e-3);
    }
}

#[test]
fn transform_is_radial_in_ambient_space() {
    let g = geom(4, 2, 0);
    let f = StepProfile::indicator(vec![(0.3, 0.9), (1.2, 1.6)]).unwrap();
    let eval = |t: f64| f.evaluate(t).unwrap();
    let s = 0.5;
    let exact = grassmann::abel_step_closed(&g, &f, s).unwrap();
    let reach = (1.6f64.powi(2) - s * s).sqrt();
    let (a, sa) = plane_monte_carlo(&eval, 4, s, reach, 400_000, 11);
    let (b, sb) = plane_monte_carlo(&eval, 4, s, reach, 400_000, 12);
    assert!((a - b).abs() < 4.0 * (sa * sa + sb * sb).sqrt(), "{a} vs {b}");
    assert!((a - exact).abs() < 4.0 * sa, "{a} vs {exact}");
}

#[test]
fn closed_form_matches_both_quadratures() {
    let quad = Quadrature::new(1e-12);
    for (i, g) in [geom(3, 2, 0), geom(4, 2, 0), geom(4, 3, 1), geom(5, 3, 0), geom(6, 4, 2)].iter().enumerate() {
        for seed in 0..5 {
            let f = random_step_profile_stream(seed, i as u64, 4, (0.0, 5.0)).unwrap();
            for j in 0..20 {
                let s = 5.0 * j as f64 / 20.0;
                let exact = grassmann::abel_step_closed(g, &f, s).unwrap();
                let r = grassmann::abel_point(g, &f, s, &quad).unwrap().value;
                let t = grassmann::abel_point_t_form(g, &f, s, &quad).unwrap().value;
                assert_relative_eq!(r, exact, max_relative = 1e-8, epsilon = 1e-14);
                assert_relative_eq!(t, exact, max_relative = 1e-8, epsilon = 1e-14);
            }
        }
    }
}

#[test]
fn endpoint_fixture_unit_ball() {
    let f = StepProfile::<f64>::indicator(vec![(0.0, 1.0)]).unwrap();
    let r = grassmann::endpoint_ratio(&geom(3, 2, 0), &f).unwrap();
    assert!((r.plain - 1.2089).abs() < 1e-3, "{}", r.plain);
    // ‖χ_B‖_{3/2,1} = (4π/3)^{2/3} and the transform peaks at s = 0 with value 2π/2 · 1.
    assert_relative_eq!(r.plain, std::f64::consts::PI / (4.0 * std::f64::consts::PI / 3.0).powf(2.0 / 3.0), max_relative = 1e-12);
}

#[test]
fn lp_lq_at_p_one_is_one() {
    let g = geom(4, 2, 0);
    for seed in 0..5 {
        let f = random_step_profile_stream(seed, 3, 3, (0.0, 4.0)).unwrap();
        let r = grassmann::lp_lq_ratio(&g, &f, 1.0).unwrap();
        assert_relative_eq!(r.ratio, 1.0, max_relative = 1e-9);
    }
}

#[test]
fn lp_lq_ratio_is_dilation_invariant() {
    let g = geom(5, 3, 0);
    let f = random_step_profile_stream(9, 0, 5, (0.0, 3.0)).unwrap();
    for p in [1.2, 1.4, 1.6] {
        let base = grassmann::lp_lq_ratio(&g, &f, p).unwrap().ratio;
        for lambda in [2.0, 4.0] {
            let r = grassmann::lp_lq_ratio(&g, &f.dilate(lambda).unwrap(), p).unwrap().ratio;
            assert_relative_eq!(r, base, max_relative = 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dilation_covariance(seed in 0u64..10_000, lambda in 0.2f64..5.0, s in 0.0f64..4.0) {
        let g = geom(4, 2, 0);
        let f = random_step_profile_stream(seed, 0, 3, (0.0, 4.0)).unwrap();
        let lhs = grassmann::abel_step_closed(&g, &f.dilate(lambda).unwrap(), s).unwrap();
        let rhs = lambda.powi(2) * grassmann::abel_step_closed(&g, &f, s / lambda).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn linear_and_monotone(seed in 0u64..10_000, s in 0.0f64..5.0, c in 0.1f64..3.0) {
        let g = geom(5, 3, 0);
        let f = random_step_profile_stream(seed, 1, 3, (0.0, 5.0)).unwrap();
        let scaled = grassmann::abel_step_closed(&g, &f.scale_heights(c).unwrap(), s).unwrap();
        let base = grassmann::abel_step_closed(&g, &f, s).unwrap();
        prop_assert!((scaled - c * base).abs() <= 1e-12 * scaled.abs().max(1.0));
        // Adding a disjoint annulus beyond the support can only increase the transform.
        let mut iv = f.intervals().to_vec();
        iv.push((5.5, 6.0));
        let bigger = StepProfile::indicator(iv).unwrap();
        let more = grassmann::abel_step_closed(&g, &bigger, s).unwrap();
        let extra = grassmann::abel_step_closed(&g, &StepProfile::indicator(vec![(5.5, 6.0)]).unwrap(), s).unwrap();
        prop_assert!(more >= base);
        prop_assert!((more - base - extra).abs() <= 1e-12 * more.max(1.0));
    }

    #[test]
    fn comparison_chain_holds(seed in 0u64..10_000, l in 1usize..16, frac in 0.0f64..1.0) {
        for g in [geom(3, 2, 0), geom(4, 3, 1), geom(6, 4, 2)] {
            let f = random_step_profile_stream(seed, l as u64, l, (0.0, 10.0)).unwrap();
            let s = frac * f.outer_radius().unwrap();
            let [x, y, z] = grassmann::lemma_chain(&g, &f, s).unwrap();
            prop_assert!(y <= x * (1.0 + 1e-12) + 1e-300);
            prop_assert!(z <= y * (1.0 + 1e-12) + 1e-300);
        }
    }

    #[test]
    fn endpoint_ratios_bounded(seed in 0u64..10_000, l in 1usize..12) {
        let g = geom(4, 2, 0);
        let f = random_step_profile_stream(seed, 2, l, (0.0, 10.0)).unwrap();
        let r = grassmann::endpoint_ratio(&g, &f).unwrap();
        let single = grassmann::endpoint_ratio(&g, &StepProfile::indicator(vec![(0.0, 1.0)]).unwrap()).unwrap();
        // The truncated ratio never exceeds the constant of the comparison chain.
        let chain = g.constant::<f64>() / g.m() as f64 / (radon_core::special::sphere_area::<f64>(4) / 4.0).powf(0.5);
        prop_assert!(r.truncated <= chain * (1.0 + 1e-9));
        prop_assert!(r.plain <= r.truncated * (1.0 + 1e-9));
        prop_assert!(single.plain > 0.0);
    }
}

#[test]
fn indicator_norm_matches_measure() {
    let g = geom(4, 3, 1);
    let f = StepProfile::<f64>::indicator(vec![(0.5, 1.0), (2.0, 2.5)]).unwrap();
    let meas = radon_core::profiles::weighted_measure(&f, &g.domain_measure()).unwrap();
    for p in [1.0, 1.5, 3.0] {
        let v = grassmann::domain_lorentz_norm(&g, &f, LorentzIndex::new(p, 1.0).unwrap()).unwrap();
        assert_relative_eq!(v, meas.powf(1.0 / p), max_relative = 1e-12);
    }
}
