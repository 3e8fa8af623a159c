//! The spherical d-plane transform of even radial functions.
//!
//! Profiles live in `u = cos r ∈ [0, 1]`. With `c = cos θ`,
//! `A f(θ) = C c^{1-d} ∫_0^c f̃(u) (c² - u²)^{(d-2)/2} du`, where
//! `C = 2Γ((d+1)/2) / (√π Γ(d/2))` makes `A 1 ≡ 1`.

use std::f64::consts::FRAC_PI_2;

use crate::curve::{integrate_panels, panel_nodes, weak_norm, CurvePoint, FnCurve, GeometryTag, TransformCurve, WeakNormGrid};
use crate::error::{Error, Result};
use crate::lorentz::{lorentz_norm, LorentzIndex};
use crate::profiles::{DensityExponents, RadialFunction, RadialMeasure, RadialProfile, StepProfile};
use crate::quadrature::{Estimate, Quadrature, SingularIntegrand};
use crate::rng::StreamRng;
use crate::scalar::{pos_pow, CompensatedSum, Real};
use crate::special::zonal_constant;
use crate::sweep::SweepGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphereGeometry {
    n: u32,
    d: u32,
}

impl SphereGeometry {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n < 2 || d < 1 || d > n - 1 {
            return Err(Error::arg(format!("need n >= 2 and 1 <= d <= n-1, got ({n}, {d})")));
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// `2Γ((d+1)/2) / (√π Γ(d/2))`.
    pub fn constant<T: Real>(&self) -> T {
        T::two() * zonal_constant::<T>(self.d)
    }

    /// `n/d`.
    pub fn critical_p<T: Real>(&self) -> T {
        T::from_u32(self.n).unwrap() / T::from_u32(self.d).unwrap()
    }

    /// `d + 1`.
    pub fn weak_index<T: Real>(&self) -> T {
        T::from_u32(self.d + 1).unwrap()
    }

    pub fn tag(&self) -> GeometryTag {
        GeometryTag::Sphere { n: self.n, d: self.d }
    }

    /// `sin^{n-1} r dr` on `[0, π/2]`, i.e. `(1 - u²)^{(n-2)/2} du` in `u = cos r`.
    pub fn domain_measure<T: Real>(&self) -> RadialMeasure<T> {
        RadialMeasure::new(
            T::one(),
            DensityExponents { sin: T::from_u32(self.n - 1).unwrap(), ..Default::default() },
            (T::zero(), T::FRAC_PI_2()),
        )
        .expect("valid measure")
    }

    /// `sin^{n-d-1} θ cos^d θ dθ` on `[0, π/2]`.
    pub fn target_measure<T: Real>(&self) -> RadialMeasure<T> {
        RadialMeasure::new(
            T::one(),
            DensityExponents {
                sin: T::from_u32(self.n - self.d - 1).unwrap(),
                cos: T::from_u32(self.d).unwrap(),
                ..Default::default()
            },
            (T::zero(), T::FRAC_PI_2()),
        )
        .expect("valid measure")
    }
}

fn check_theta<T: Real>(theta: T) -> Result<()> {
    if !(theta >= T::zero() && theta <= T::FRAC_PI_2()) {
        return Err(Error::arg(format!("θ = {theta} outside [0, π/2]")));
    }
    Ok(())
}

fn check_step<T: Real>(profile: &StepProfile<T>) -> Result<()> {
    if let Some(b) = profile.outer_radius() {
        if b > T::one() {
            return Err(Error::arg("sphere step profiles live in u = cos r ∈ [0, 1]"));
        }
    }
    Ok(())
}

/// `∫_0^y (1 - x²)^{j/2 - 1} dx` (index `j = d`).
fn b_head<T: Real>(d: u32, y: T) -> T {
    let one = T::one();
    let w = (one - y) * (one + y);
    let mut acc = if d % 2 == 1 { y.asin() } else { y };
    let mut j = if d % 2 == 1 { 1 } else { 2 };
    while j < d {
        j += 2;
        let sigma = T::from_u32(j).unwrap() * T::half() - one;
        acc = (y * w.powf(sigma) + T::two() * sigma * acc) / (T::two() * sigma + one);
    }
    acc
}

/// `∫_y^1 (1 - x²)^{j/2 - 1} dx`.
fn b_tail<T: Real>(d: u32, y: T) -> T {
    let one = T::one();
    let w = (one - y) * (one + y);
    let mut acc = if d % 2 == 1 { y.acos() } else { one - y };
    let mut j = if d % 2 == 1 { 1 } else { 2 };
    while j < d {
        j += 2;
        let sigma = T::from_u32(j).unwrap() * T::half() - one;
        acc = (-y * w.powf(sigma) + T::two() * sigma * acc) / (T::two() * sigma + one);
    }
    acc.max(T::zero())
}

/// `∫_{ya}^{yb} (1 - x²)^{(d-2)/2} dx` for `0 <= ya <= yb <= 1`, from whichever end is closer.
fn b_diff<T: Real>(d: u32, ya: T, yb: T) -> T {
    let half = T::half();
    if yb <= half {
        b_head(d, yb) - b_head(d, ya)
    } else if ya >= half {
        b_tail(d, ya) - b_tail(d, yb)
    } else {
        (b_head(d, half) - b_head(d, ya)) + (b_tail(d, half) - b_tail(d, yb))
    }
}

fn closed_unchecked<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, theta: T) -> T {
    let c = theta.cos().max(T::zero());
    if theta >= T::FRAC_PI_2() || c == T::zero() {
        return profile.value(T::zero());
    }
    let cst = geom.constant::<T>();
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter() {
        if a >= c {
            break;
        }
        if a == T::zero() && b >= c {
            acc.add(h);
            continue;
        }
        let ya = a / c;
        let yb = (b / c).min(T::one());
        acc.add((cst * h * b_diff(geom.d, ya, yb)).min(h));
    }
    acc.value()
}

/// Exact transform of a step profile (any `d`).
pub fn abel_step_closed<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, theta: T) -> Result<T> {
    check_theta(theta)?;
    check_step(profile)?;
    Ok(closed_unchecked(geom, profile, theta))
}

/// The `d = 1` arcsine closed form `(2/π) Σ [arcsin(min(b,c)/c) - arcsin(min(a,c)/c)]`.
pub fn abel_step_closed_d1<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, theta: T) -> Result<T> {
    if geom.d != 1 {
        return Err(Error::arg(format!("arcsine closed form needs d = 1, got d = {}", geom.d)));
    }
    abel_step_closed(geom, profile, theta)
}

/// The comparison value obtained by replacing `(1 - r²)^{-1/2}` with `(1 - r)^{-1/2}` in the
/// `d = 1` kernel; the exact transform lies in `[value/√2, value]`.
pub fn d1_comparison<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, theta: T) -> Result<T> {
    if geom.d != 1 {
        return Err(Error::arg("comparison bound needs d = 1"));
    }
    check_theta(theta)?;
    check_step(profile)?;
    let c = theta.cos();
    if !(c > T::zero()) {
        return Ok(profile.value(T::zero()) * T::lit(2f64.sqrt()));
    }
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter() {
        if a >= c {
            break;
        }
        let ya = a / c;
        let yb = (b / c).min(T::one());
        acc.add(h * T::two() * ((T::one() - ya).sqrt() - (T::one() - yb).sqrt()));
    }
    Ok(acc.value() * T::two() / T::PI())
}

/// One value from the `u`-form.
pub fn abel_point<T: Real, P: RadialFunction<T>>(
    geom: &SphereGeometry,
    profile: &P,
    theta: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_theta(theta)?;
    let c = theta.cos();
    if theta >= T::FRAC_PI_2() || !(c > T::zero()) {
        return Ok(Estimate { value: profile.value(T::zero()), err_est: T::zero() });
    }
    let sigma = T::from_u32(geom.d).unwrap() * T::half() - T::one();
    let core = |u: T| {
        let v = profile.value(u);
        if v == T::zero() {
            return T::zero();
        }
        v * pos_pow(c - u, sigma) * (c + u).powf(sigma)
    };
    let right = if geom.d == 2 { T::zero() } else { sigma };
    let breaks: Vec<T> = profile.breakpoints().into_iter().filter(|&b| b > T::zero() && b < c).collect();
    let est = quad.integrate_singular_split(&SingularIntegrand::new(core, T::zero(), right), T::zero(), c, &breaks)?;
    let scale = geom.constant::<T>() / c.powi(geom.d as i32 - 1);
    Ok(Estimate { value: scale * est.value, err_est: scale * est.err_est })
}

/// One value from the `r`-form, with `1 - tan²θ/tan²r = sin(r-θ) sin(r+θ) / (sin²r cos²θ)`.
pub fn abel_point_r_form<T: Real, P: RadialFunction<T>>(
    geom: &SphereGeometry,
    profile: &P,
    theta: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_theta(theta)?;
    let c = theta.cos();
    if theta >= T::FRAC_PI_2() || !(c > T::zero()) {
        return Ok(Estimate { value: profile.value(T::zero()), err_est: T::zero() });
    }
    let sigma = T::from_u32(geom.d).unwrap() * T::half() - T::one();
    let d1 = T::from_u32(geom.d - 1).unwrap();
    // Offset variable w = r - θ keeps sin(r - θ) accurate near the singular end.
    let core = |w: T| {
        let r = theta + w;
        let v = profile.value(r.cos().max(T::zero()));
        if v == T::zero() {
            return T::zero();
        }
        let sr = r.sin();
        let factor = if theta == T::zero() { T::one() } else { pos_pow(w.sin() * (r + theta).sin() / (sr * sr * c * c), sigma) };
        v * factor * pos_pow(sr, d1)
    };
    let left = if theta > T::zero() && geom.d != 2 { sigma } else { T::zero() };
    let breaks: Vec<T> =
        profile.breakpoints().into_iter().filter(|&b| b > T::zero() && b < c).map(|b| b.acos() - theta).collect();
    let est = quad.integrate_singular_split(
        &SingularIntegrand::new(core, left, T::zero()),
        T::zero(),
        T::FRAC_PI_2() - theta,
        &breaks,
    )?;
    let scale = geom.constant::<T>() / c;
    Ok(Estimate { value: scale * est.value, err_est: scale * est.err_est })
}

fn curve_from<T: Real, E>(geom: &SphereGeometry, grid: &[T], eval: E) -> Result<TransformCurve<T>>
where
    E: Fn(T) -> Result<Estimate<T>>,
{
    let mut points = Vec::with_capacity(grid.len());
    for &theta in grid {
        let e = eval(theta)?;
        points.push(CurvePoint { s: theta, value: e.value, err_est: e.err_est });
    }
    TransformCurve::new(geom.tag(), points, Some(T::FRAC_PI_2()))
}

/// Transform curve from the `u`-form on `θ ∈ [0, π/2]`.
pub fn abel_numeric<T: Real, P: RadialFunction<T>>(
    geom: &SphereGeometry,
    profile: &P,
    theta_grid: &[T],
    quad: &Quadrature<T>,
) -> Result<TransformCurve<T>> {
    curve_from(geom, theta_grid, |t| abel_point(geom, profile, t, quad))
}

/// As [`abel_numeric`], from the `r`-form.
pub fn abel_numeric_r_form<T: Real, P: RadialFunction<T>>(
    geom: &SphereGeometry,
    profile: &P,
    theta_grid: &[T],
    quad: &Quadrature<T>,
) -> Result<TransformCurve<T>> {
    curve_from(geom, theta_grid, |t| abel_point_r_form(geom, profile, t, quad))
}

/// Closed-form curve.
pub fn closed_curve<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, theta_grid: &[T]) -> Result<TransformCurve<T>> {
    check_step(profile)?;
    curve_from(geom, theta_grid, |t| {
        check_theta(t)?;
        Ok(Estimate { value: closed_unchecked(geom, profile, t), err_est: T::zero() })
    })
}

/// Even part `u ↦ (f(u) + f(-u))/2` on `[0, 1]` of a full-sphere radial profile given on `[-1, 1]`.
pub fn even_part<T: Real, F>(full: F) -> RadialProfile<T>
where
    F: Fn(T) -> T + Send + Sync + 'static,
{
    RadialProfile::from_fn(move |u: T| (full(u) + full(-u)) * T::half(), Some(T::one()))
}

/// Transform of a full-sphere profile on `[-1, 1]` through the symmetric integral
/// `(C/2) c^{1-d} ∫_{-c}^{c} f(u) (c² - u²)^{(d-2)/2} du`.
pub fn abel_full_sphere_point<T: Real, F: Fn(T) -> T>(
    geom: &SphereGeometry,
    full: F,
    breakpoints: &[T],
    theta: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_theta(theta)?;
    let c = theta.cos();
    if !(c > T::zero()) {
        return Ok(Estimate { value: full(T::zero()), err_est: T::zero() });
    }
    let sigma = T::from_u32(geom.d).unwrap() * T::half() - T::one();
    let core = |u: T| full(u) * pos_pow(c - u, sigma) * pos_pow(c + u, sigma);
    let edge = if geom.d == 2 { T::zero() } else { sigma };
    let mut breaks: Vec<T> = breakpoints.iter().copied().filter(|&b| b > -c && b < c).collect();
    breaks.push(T::zero());
    let est = quad.integrate_singular_split(&SingularIntegrand::new(core, edge, edge), -c, c, &breaks)?;
    let scale = geom.constant::<T>() * T::half() / c.powi(geom.d as i32 - 1);
    Ok(Estimate { value: scale * est.value, err_est: scale * est.err_est })
}

/// The step profile in the `r = arccos u` variable.
pub fn to_radius<T: Real>(profile: &StepProfile<T>) -> Result<StepProfile<T>> {
    check_step(profile)?;
    if profile.is_empty() {
        return Ok(StepProfile::empty());
    }
    profile.map_endpoints(|u| u.min(T::one()).acos())
}

/// Lorentz norm under `(1 - u²)^{(n-2)/2} du` (constant 1).
pub fn sphere_lorentz_norm<T: Real>(profile: &StepProfile<T>, geom: &SphereGeometry, index: LorentzIndex<T>) -> Result<T> {
    if profile.is_empty() {
        return Err(Error::arg("Lorentz norm of an empty profile"));
    }
    lorentz_norm(&to_radius(profile)?, &geom.domain_measure(), index)
}

fn theta_breakpoints<T: Real>(profile: &StepProfile<T>) -> Vec<T> {
    profile.breakpoints().into_iter().map(|u| u.min(T::one()).acos()).collect()
}

/// `sup_θ cos θ · A f(θ) / ‖f‖_{n/d, 1}` for an indicator profile.
pub fn weighted_endpoint_ratio<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>) -> Result<(T, T)> {
    weighted_endpoint_ratio_with(geom, profile, SweepGrid::default())
}

pub fn weighted_endpoint_ratio_with<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, grid: SweepGrid) -> Result<(T, T)> {
    check_step(profile)?;
    if !profile.is_indicator() {
        return Err(Error::arg("endpoint ratio is defined for indicator profiles"));
    }
    let norm = sphere_lorentz_norm(profile, geom, LorentzIndex::new(geom.critical_p(), T::one())?)?;
    if !(norm > T::zero()) {
        return Err(Error::arg("profile has zero norm"));
    }
    Ok(grid.sup(
        |t: T| t.cos() * closed_unchecked(geom, profile, t) / norm,
        T::zero(),
        T::FRAC_PI_2(),
        &theta_breakpoints(profile),
    ))
}

/// For `d = 1`: `(sup_θ I(θ)² / Σ(b_i - a_i), sup_θ I(θ) / ‖χ_E‖_{n,1})` with `I = cos θ · A f`.
pub fn d1_chain_ratios<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>) -> Result<(T, T)> {
    if geom.d != 1 {
        return Err(Error::arg("chain check needs d = 1"));
    }
    let length: T = profile.intervals().iter().map(|&(a, b)| b - a).sum();
    if !(length > T::zero()) {
        return Err(Error::arg("profile has zero length"));
    }
    let grid = SweepGrid::default();
    let (sq, _) = grid.sup(
        |t: T| {
            let i = t.cos() * closed_unchecked(geom, profile, t);
            i * i / length
        },
        T::zero(),
        T::FRAC_PI_2(),
        &theta_breakpoints(profile),
    );
    let (ratio, _) = weighted_endpoint_ratio_with(geom, profile, grid)?;
    Ok((sq, ratio))
}

/// `‖g‖_{L^{d+1,∞}}` under the target density, for any curve on `[0, π/2]`.
pub fn weak_norm_of<T: Real, G: RadialFunction<T>>(curve: &G, geom: &SphereGeometry, grid: WeakNormGrid) -> Result<T> {
    weak_norm(curve, &geom.target_measure(), geom.weak_index(), grid)
}

/// Weak norm of the transform of a step profile.
pub fn weak_norm_decay<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>) -> Result<T> {
    weak_norm_decay_with(geom, profile, WeakNormGrid::default())
}

pub fn weak_norm_decay_with<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, grid: WeakNormGrid) -> Result<T> {
    check_step(profile)?;
    let curve = FnCurve::new(|t| closed_unchecked(geom, profile, t), Some(T::FRAC_PI_2()), theta_breakpoints(profile));
    weak_norm_of(&curve, geom, grid)
}

/// `‖A f‖_{L^p(target)} / ‖f‖_{L^p}` for `p ∈ [1, ∞]` (`p = T::infinity()` for sup norms).
pub fn lp_ratio<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, p: T) -> Result<T> {
    check_step(profile)?;
    if profile.is_empty() {
        return Err(Error::arg("L^p ratio of an empty profile"));
    }
    if !(p >= T::one()) {
        return Err(Error::arg(format!("p = {p} must be >= 1")));
    }
    if p.is_infinite() {
        let top = profile.heights().iter().copied().fold(T::zero(), T::max);
        let (sup, _) = SweepGrid::default().sup(
            |t| closed_unchecked(geom, profile, t),
            T::zero(),
            T::FRAC_PI_2(),
            &theta_breakpoints(profile),
        );
        return Ok(sup / top);
    }
    let num = target_norm(geom, profile, p, false)?;
    let den = sphere_lorentz_norm(profile, geom, LorentzIndex::strong(p)?)?;
    Ok(num / den)
}

fn target_norm<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, q: T, weighted: bool) -> Result<T> {
    let target = geom.target_measure::<T>();
    let quad = Quadrature::new(T::lit(1e-11).max(T::tolerance_floor())).with_abs_tol(T::min_positive_value());
    let nodes = panel_nodes(T::zero(), T::FRAC_PI_2(), &theta_breakpoints(profile));
    let total = integrate_panels(
        |t: T| {
            let mut a = closed_unchecked(geom, profile, t);
            if weighted {
                a = a * t.cos();
            }
            if a == T::zero() {
                T::zero()
            } else {
                a.powf(q) * target.density(t)
            }
        },
        &nodes,
        &quad,
    )?;
    Ok(total.powf(T::one() / q))
}

/// `q` solving `n/p = (n-d)/q + d`.
pub fn weighted_exponent<T: Real>(geom: &SphereGeometry, p: T) -> Result<T> {
    let crit = geom.critical_p::<T>();
    if !(p >= T::one() && p < crit) {
        return Err(Error::arg(format!("p = {p} outside [1, {crit})")));
    }
    let n = T::from_u32(geom.n).unwrap();
    let d = T::from_u32(geom.d).unwrap();
    Ok((n - d) / (n / p - d))
}

/// `‖cos(·) A f‖_q / ‖f‖_p` at the weighted exponent.
pub fn weighted_lp_lq_ratio<T: Real>(geom: &SphereGeometry, profile: &StepProfile<T>, p: T) -> Result<(T, T)> {
    let q = weighted_exponent(geom, p)?;
    check_step(profile)?;
    if profile.is_empty() {
        return Err(Error::arg("L^p ratio of an empty profile"));
    }
    let num = target_norm(geom, profile, q, true)?;
    let den = sphere_lorentz_norm(profile, geom, LorentzIndex::strong(p)?)?;
    Ok((q, num / den))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatRow<T> {
    pub a: T,
    pub sup: T,
    pub norm: T,
}

/// Transforms of `χ_{[0, a_i]}`: the sup column stays at 1 while the `L^{p,1}` norms vanish.
pub fn counterexample_flat<T: Real>(geom: &SphereGeometry, a_list: &[T], p: T) -> Result<Vec<FlatRow<T>>> {
    if !(p >= T::one() && p.is_finite()) {
        return Err(Error::arg(format!("p = {p} must lie in [1, ∞)")));
    }
    if a_list.iter().any(|&a| !(a > T::zero() && a <= T::one())) || a_list.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::arg("a_i must be decreasing values in (0, 1]"));
    }
    let index = LorentzIndex::new(p, T::one())?;
    let grid = SweepGrid::default();
    a_list
        .iter()
        .map(|&a| {
            let f = StepProfile::indicator(vec![(T::zero(), a)])?;
            let (sup, _) = grid.sup(|t| closed_unchecked(geom, &f, t), T::zero(), T::FRAC_PI_2(), &theta_breakpoints(&f));
            Ok(FlatRow { a, sup, norm: sphere_lorentz_norm(&f, geom, index)? })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapRow<T> {
    pub m: u64,
    pub norm: T,
    pub lower_bound: T,
}

/// Caps `χ_{[a_m, 1]}`, `a_m = (m-1)/(m+1)`: their `L^{p,1}` norms and `cos θ · A f_m(θ)` at
/// `cos θ` midway between `(m-1)/m` and `m/(m+1)`.
pub fn counterexample_cap<T: Real>(geom: &SphereGeometry, p: T, m_grid: &[u64]) -> Result<Vec<CapRow<T>>> {
    if !(p >= T::one() && p.is_finite()) {
        return Err(Error::arg(format!("p = {p} must lie in [1, ∞)")));
    }
    if m_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::arg("m grid must be increasing"));
    }
    let index = LorentzIndex::new(p, T::one())?;
    m_grid
        .iter()
        .map(|&m| {
            if m < 2 {
                return Err(Error::arg(format!("m = {m} must be >= 2")));
            }
            let mt = T::lit(m as f64);
            let a = (mt - T::one()) / (mt + T::one());
            let f = StepProfile::indicator(vec![(a, T::one())])?;
            let c = ((mt - T::one()) / mt + mt / (mt + T::one())) * T::half();
            let theta = c.acos();
            Ok(CapRow { m, norm: sphere_lorentz_norm(&f, geom, index)?, lower_bound: c * closed_unchecked(geom, &f, theta) })
        })
        .collect()
}

/// Monte-Carlo and one-dimensional sides of the zonal reduction
/// `∫_{S^d} ψ(⟨x, ω⟩) dσ(ω) = C_d ∫_{-1}^1 ψ(s|x|) (1 - s²)^{(d-2)/2} ds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatalanCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub abs_diff: f64,
    pub std_err: f64,
}

impl CatalanCheck {
    pub fn within(&self, sigmas: f64) -> bool {
        self.abs_diff <= sigmas * self.std_err + 1e-12
    }
}

fn poly(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
}

pub fn catalan_check(d: u32, psi: &[f64], x_norm: f64, samples: usize, seed: u64, stream: u64) -> Result<CatalanCheck> {
    if d < 2 {
        return Err(Error::arg("zonal reduction needs d >= 2"));
    }
    if samples < 2 {
        return Err(Error::arg("need at least two Monte-Carlo samples"));
    }
    let mut rng = StreamRng::new(seed, stream);
    let mut sum = CompensatedSum::new();
    let mut sum_sq = CompensatedSum::new();
    let mut g = vec![0.0; d as usize + 1];
    for _ in 0..samples {
        for v in g.iter_mut() {
            *v = rng.normal();
        }
        let r = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let val = poly(psi, x_norm * g[0] / r);
        sum.add(val);
        sum_sq.add(val * val);
    }
    let n = samples as f64;
    let mean = sum.value() / n;
    let var = ((sum_sq.value() / n - mean * mean) * n / (n - 1.0)).max(0.0);
    let std_err = (var / n).sqrt();
    let sigma = d as f64 / 2.0 - 1.0;
    let edge = if d == 2 { 0.0 } else { sigma };
    let quad = Quadrature::new(1e-12);
    let core = |s: f64| poly(psi, s * x_norm) * pos_pow((1.0 - s) * (1.0 + s), sigma);
    let integral = quad.integrate_singular(&SingularIntegrand::new(core, edge, edge), -1.0, 1.0)?;
    let rhs = zonal_constant::<f64>(d) * integral.value;
    Ok(CatalanCheck { lhs: mean, rhs, abs_diff: (mean - rhs).abs(), std_err })
}

/// Right end of the `θ` range.
pub const THETA_MAX: f64 = FRAC_PI_2;

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sg(n: u32, d: u32) -> SphereGeometry {
        SphereGeometry::new(n, d).unwrap()
    }

    #[test]
    fn normalization() {
        let one = StepProfile::indicator(vec![(0.0, 1.0)]).unwrap();
        for (n, d) in [(2, 1), (3, 2), (4, 3), (5, 2)] {
            for theta in [0.0, 0.3, 1.0, 1.5] {
                assert_eq!(abel_step_closed(&sg(n, d), &one, theta).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn d1_arcsine_example() {
        let c: f64 = 0.8;
        let f = StepProfile::indicator(vec![(c / 2.0, 1.0)]).unwrap();
        let v = abel_step_closed_d1(&sg(2, 1), &f, c.acos()).unwrap();
        assert_relative_eq!(v, 2.0 / 3.0, max_relative = 1e-14);
        assert!(abel_step_closed_d1(&sg(3, 2), &f, 0.1).is_err());
        let g = StepProfile::indicator(vec![(0.9, 1.0)]).unwrap();
        assert_eq!(abel_step_closed(&sg(2, 1), &g, c.acos()).unwrap(), 0.0);
    }

    #[test]
    fn forms_agree_with_closed_form() {
        let quad = Quadrature::new(1e-11);
        let f = StepProfile::indicator(vec![(0.1, 0.35), (0.5, 0.8), (0.9, 1.0)]).unwrap();
        for g in [sg(2, 1), sg(3, 2), sg(4, 3), sg(5, 2)] {
            for theta in [0.0, 0.2, 0.7, 1.2, 1.5] {
                let exact = abel_step_closed(&g, &f, theta).unwrap();
                let u = abel_point(&g, &f, theta, &quad).unwrap().value;
                let r = abel_point_r_form(&g, &f, theta, &quad).unwrap().value;
                assert_relative_eq!(u, exact, max_relative = 1e-9, epsilon = 1e-13);
                assert_relative_eq!(r, exact, max_relative = 1e-9, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn tail_and_head_agree() {
        for d in 1..7 {
            for y in [0.1, 0.45, 0.55, 0.9] {
                let total = b_head(d, 1.0);
                assert_relative_eq!(b_head(d, y) + b_tail(d, y), total, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn flat_counterexample_sup_is_one() {
        let a: Vec<f64> = (1..=20).map(|i| 0.5f64.powi(i)).collect();
        let rows = counterexample_flat(&sg(2, 1), &a, 2.0).unwrap();
        assert!(rows.iter().all(|r| r.sup == 1.0));
        assert!(rows.windows(2).all(|w| w[1].norm < w[0].norm));
        assert!(rows.last().unwrap().norm < 1e-2);
        assert!(counterexample_flat(&sg(2, 1), &a, f64::INFINITY).is_err());
    }

    #[test]
    fn cap_requires_m_at_least_two() {
        assert!(counterexample_cap::<f64>(&sg(2, 1), 1.0, &[1]).is_err());
    }

    #[test]
    fn weighted_ratio_example() {
        let one = StepProfile::indicator(vec![(0.0, 1.0)]).unwrap();
        let (v, at) = weighted_endpoint_ratio(&sg(2, 1), &one).unwrap();
        assert_relative_eq!(v, 1.0, max_relative = 1e-14);
        assert_eq!(at, 0.0);
    }

    #[test]
    fn catalan_second_moment() {
        let c = catalan_check(2, &[0.0, 0.0, 1.0], 1.0, 200_000, 1, 0).unwrap();
        assert_relative_eq!(c.rhs, 1.0 / 3.0, max_relative = 1e-12);
        assert!(c.within(4.0), "{c:?}");
    }
}
