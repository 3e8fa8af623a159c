//! The totally geodesic d-plane transform of radial functions on real hyperbolic space.
//!
//! Profiles are stored in the variable `t = cosh r`. The transform is
//! `A f(s) = σ_{d-1} (cosh s)^{1-d} ∫_{cosh s}^∞ f̃(t) (t² - cosh² s)^{(d-2)/2} dt`
//! with `σ_{d-1} = |S^{d-1}|` (`|S^0| = 2`).

use crate::curve::{integrate_panels, panel_nodes, weak_norm, CurvePoint, FnCurve, GeometryTag, TransformCurve, WeakNormGrid};
use crate::error::{Error, Result};
use crate::lorentz::{lorentz_norm, LorentzIndex};
use crate::profiles::{DensityExponents, RadialFunction, RadialMeasure, StepProfile};
use crate::quadrature::{Estimate, Quadrature, SingularIntegrand};
use crate::scalar::{pos_pow, CompensatedSum, Real};
use crate::special::sphere_area;
use crate::sweep::SweepGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HyperbolicGeometry {
    n: u32,
    d: u32,
}

impl HyperbolicGeometry {
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

    /// Errors unless `n >= 3` and `d >= 2`, the range of the endpoint estimates.
    pub fn require_endpoint_range(&self) -> Result<()> {
        if self.n < 3 || self.d < 2 {
            return Err(Error::arg(format!("endpoint estimates need n >= 3 and 2 <= d <= n-1, got ({}, {})", self.n, self.d)));
        }
        Ok(())
    }

    /// `(n-1)/(d-1)`, infinite for `d = 1`.
    pub fn critical_p<T: Real>(&self) -> T {
        if self.d == 1 {
            return T::infinity();
        }
        T::from_u32(self.n - 1).unwrap() / T::from_u32(self.d - 1).unwrap()
    }

    pub fn sigma<T: Real>(&self) -> T {
        sphere_area(self.d)
    }

    pub fn c_n<T: Real>(&self) -> T {
        sphere_area(self.n)
    }

    pub fn tag(&self) -> GeometryTag {
        GeometryTag::Hyperbolic { n: self.n, d: self.d }
    }

    /// `c_n sinh^{n-1} r dr` on `[0, ∞)`.
    pub fn domain_measure<T: Real>(&self) -> RadialMeasure<T> {
        RadialMeasure::new(
            self.c_n(),
            DensityExponents { sinh: T::from_u32(self.n - 1).unwrap(), ..Default::default() },
            (T::zero(), T::infinity()),
        )
        .expect("valid measure")
    }

    /// `sinh^{n-d-1} u cosh^d u du` on `[0, ∞)`.
    pub fn target_measure<T: Real>(&self) -> RadialMeasure<T> {
        RadialMeasure::new(
            T::one(),
            DensityExponents {
                sinh: T::from_u32(self.n - self.d - 1).unwrap(),
                cosh: T::from_u32(self.d).unwrap(),
                ..Default::default()
            },
            (T::zero(), T::infinity()),
        )
        .expect("valid measure")
    }
}

/// `arccosh t`, accurate near `t = 1`.
pub fn acosh_stable<T: Real>(t: T) -> T {
    let x = t - T::one();
    if x <= T::zero() {
        return T::zero();
    }
    (x + (x * (t + T::one())).sqrt()).ln_1p()
}

/// A profile given in the `r` variable, seen in the `t = cosh r` variable.
pub struct FromRadius<P>(pub P);

impl<T: Real, P: RadialFunction<T>> RadialFunction<T> for FromRadius<P> {
    fn value(&self, t: T) -> T {
        if t < T::one() {
            return T::zero();
        }
        self.0.value(acosh_stable(t))
    }

    fn support_upper(&self) -> Option<T> {
        self.0.support_upper().map(T::cosh)
    }

    fn breakpoints(&self) -> Vec<T> {
        self.0.breakpoints().into_iter().map(T::cosh).collect()
    }
}

fn check_step<T: Real>(profile: &StepProfile<T>) -> Result<()> {
    if let Some(&(a, _)) = profile.intervals().first() {
        if a < T::one() {
            return Err(Error::arg("hyperbolic step profiles live in t = cosh r >= 1"));
        }
    }
    Ok(())
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if !(s >= T::zero() && s.is_finite()) {
        return Err(Error::arg(format!("transform parameter s = {s} must be finite and nonnegative")));
    }
    Ok(())
}

/// One value from the `t`-form.
pub fn abel_point<T: Real, P: RadialFunction<T>>(
    geom: &HyperbolicGeometry,
    profile: &P,
    s: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_s(s)?;
    let c = s.cosh();
    let sigma = T::from_u32(geom.d).unwrap() * T::half() - T::one();
    let core = |t: T| {
        let v = profile.value(t);
        if v == T::zero() {
            return T::zero();
        }
        v * pos_pow(t - c, sigma) * (t + c).powf(sigma)
    };
    let left = if geom.d == 2 { T::zero() } else { sigma };
    let breaks: Vec<T> = profile.breakpoints().into_iter().filter(|&b| b > c).collect();
    let est = match profile.support_upper() {
        Some(u) if u <= c => return Ok(Estimate::zero()),
        Some(u) => quad.integrate_singular_split(&SingularIntegrand::new(core, left, T::zero()), c, u, &breaks)?,
        None => {
            let head_end = c + T::one();
            let head = quad.integrate_singular_split(&SingularIntegrand::new(&core, left, T::zero()), c, head_end, &breaks)?;
            let tail = quad.integrate_semi_infinite(&core, head_end, None, &breaks)?;
            Estimate { value: head.value + tail.value, err_est: head.err_est + tail.err_est }
        }
    };
    let scale = geom.sigma::<T>() / c.powi(geom.d as i32 - 1);
    Ok(Estimate { value: scale * est.value, err_est: scale * est.err_est })
}

/// One value from the `r`-form, with `1 - tanh²s/tanh²r` evaluated as
/// `sinh(r-s) sinh(r+s) / (sinh²r cosh²s)`.
pub fn abel_point_r_form<T: Real, P: RadialFunction<T>>(
    geom: &HyperbolicGeometry,
    profile: &P,
    s: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_s(s)?;
    let sigma = T::from_u32(geom.d).unwrap() * T::half() - T::one();
    let d1 = T::from_u32(geom.d - 1).unwrap();
    let cs = s.cosh();
    // Integrate in the offset w = r - s so that sinh(r - s) keeps full precision near the singular end.
    let core = |w: T| {
        let r = s + w;
        let v = profile.value(r.cosh());
        if v == T::zero() {
            return T::zero();
        }
        let sr = r.sinh();
        let factor = if s == T::zero() { T::one() } else { pos_pow(w.sinh() * (r + s).sinh() / (sr * sr * cs * cs), sigma) };
        v * factor * pos_pow(sr, d1)
    };
    let left = if s > T::zero() && geom.d != 2 { sigma } else { T::zero() };
    let breaks: Vec<T> = profile.breakpoints().into_iter().filter(|&b| b > cs).map(|b| acosh_stable(b) - s).collect();
    let est = match profile.support_upper() {
        Some(u) if u <= cs => return Ok(Estimate::zero()),
        Some(u) => quad.integrate_singular_split(
            &SingularIntegrand::new(core, left, T::zero()),
            T::zero(),
            acosh_stable(u) - s,
            &breaks,
        )?,
        None => {
            let head_end = T::one();
            let head =
                quad.integrate_singular_split(&SingularIntegrand::new(&core, left, T::zero()), T::zero(), head_end, &breaks)?;
            let tail = quad.integrate_semi_infinite(&core, head_end, None, &breaks)?;
            Estimate { value: head.value + tail.value, err_est: head.err_est + tail.err_est }
        }
    };
    let scale = geom.sigma::<T>() / cs;
    Ok(Estimate { value: scale * est.value, err_est: scale * est.err_est })
}

fn curve_from<T: Real, E>(geom: &HyperbolicGeometry, s_grid: &[T], eval: E) -> Result<TransformCurve<T>>
where
    E: Fn(T) -> Result<Estimate<T>>,
{
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        check_s(s)?;
        let point = match eval(s) {
            Ok(e) => CurvePoint { s, value: e.value, err_est: e.err_est },
            Err(e) if e.is_accuracy() => CurvePoint { s, value: T::infinity(), err_est: T::infinity() },
            Err(e) => return Err(e),
        };
        points.push(point);
    }
    TransformCurve::new(geom.tag(), points, None)
}

/// Transform curve from the `t`-form; divergent points are flagged with `value = +∞`.
pub fn abel_numeric<T: Real, P: RadialFunction<T>>(
    geom: &HyperbolicGeometry,
    profile: &P,
    s_grid: &[T],
    quad: &Quadrature<T>,
) -> Result<TransformCurve<T>> {
    curve_from(geom, s_grid, |s| abel_point(geom, profile, s, quad))
}

/// As [`abel_numeric`], from the `r`-form.
pub fn abel_numeric_r_form<T: Real, P: RadialFunction<T>>(
    geom: &HyperbolicGeometry,
    profile: &P,
    s_grid: &[T],
    quad: &Quadrature<T>,
) -> Result<TransformCurve<T>> {
    curve_from(geom, s_grid, |s| abel_point_r_form(geom, profile, s, quad))
}

/// `K_m(ρ) = ∫_0^ρ x^m / √(c² + x²) dx`.
fn k_integral<T: Real>(m: u32, rho: T, c: T) -> T {
    if rho <= T::zero() {
        return T::zero();
    }
    let y = rho / c;
    if y < T::half() {
        // (1/c) Σ_j C(-1/2, j) ρ^{m+1+2j} / (c^{2j} (m+1+2j))
        let y2 = y * y;
        let mut coeff = T::one();
        let mut pow = T::one();
        let mut acc = CompensatedSum::new();
        for j in 0..40u32 {
            let jt = T::from_u32(j).unwrap();
            let term = coeff * pow / (T::from_u32(m + 1 + 2 * j).unwrap());
            acc.add(term);
            if term.abs() < T::epsilon() * T::lit(1e-3) * acc.value().abs() {
                break;
            }
            coeff = coeff * (-(jt + T::half())) / (jt + T::one());
            pow = pow * y2;
        }
        return acc.value() * rho.powi(m as i32 + 1) / c;
    }
    let hyp = (c * c + rho * rho).sqrt();
    let mut k_prev2 = (y).asinh(); // K_0
    let mut k_prev1 = rho * rho / (hyp + c); // K_1
    match m {
        0 => return k_prev2,
        1 => return k_prev1,
        _ => {}
    }
    for j in 2..=m {
        let jt = T::from_u32(j).unwrap();
        let k = (rho.powi(j as i32 - 1) * hyp - (jt - T::one()) * c * c * k_prev2) / jt;
        k_prev2 = k_prev1;
        k_prev1 = k;
    }
    k_prev1
}

/// Exact transform of a step profile (any `d`).
pub fn abel_step_closed<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, s: T) -> Result<T> {
    check_s(s)?;
    check_step(profile)?;
    Ok(closed_unchecked(geom, profile, s))
}

fn closed_unchecked<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, s: T) -> T {
    let c = s.cosh();
    let m = geom.d - 1;
    let rho = |t: T| if t > c { ((t - c) * (t + c)).sqrt() } else { T::zero() };
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter().rev() {
        if b <= c {
            break;
        }
        acc.add(h * (k_integral(m, rho(b), c) - k_integral(m, rho(a), c)));
    }
    geom.sigma::<T>() / c.powi(m as i32) * acc.value()
}

/// Closed-form curve on `s_grid`.
pub fn closed_curve<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, s_grid: &[T]) -> Result<TransformCurve<T>> {
    check_step(profile)?;
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        check_s(s)?;
        points.push(CurvePoint { s, value: closed_unchecked(geom, profile, s), err_est: T::zero() });
    }
    TransformCurve::new(geom.tag(), points, None)
}

/// The step profile in the `r` variable.
pub fn to_radius<T: Real>(profile: &StepProfile<T>) -> Result<StepProfile<T>> {
    check_step(profile)?;
    if profile.is_empty() {
        return Ok(StepProfile::empty());
    }
    profile.map_endpoints(acosh_stable)
}

/// `‖A‖_{L^p(Ξ_d)}` of a curve in `u`, with certified tail.
pub fn xi_norm<T: Real, G: RadialFunction<T>>(curve: &G, geom: &HyperbolicGeometry, p: T) -> Result<T> {
    let quad = Quadrature::new(T::lit(1e-10).max(T::tolerance_floor()));
    crate::curve::strong_norm(curve, &geom.target_measure(), p, &quad)
}

/// Lorentz norm of a `t`-variable step profile under `c_n sinh^{n-1} r dr`.
pub fn hn_lorentz_norm<T: Real>(profile: &StepProfile<T>, geom: &HyperbolicGeometry, index: LorentzIndex<T>) -> Result<T> {
    if profile.is_empty() {
        return Err(Error::arg("Lorentz norm of an empty profile"));
    }
    lorentz_norm(&to_radius(profile)?, &geom.domain_measure(), index)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicEndpoint<T> {
    /// `sup_s cosh(s) A f(s) / (∫ f̃(cosh t) sinh^{n-1} t dt)^{(d-1)/(n-1)}`.
    pub weighted: T,
    pub weighted_argmax: T,
    /// `sup_s A f(s) / ‖f‖_{(n-1)/(d-1), 1}`.
    pub plain: T,
    pub plain_argmax: T,
}

fn s_breakpoints<T: Real>(profile: &StepProfile<T>) -> Vec<T> {
    profile.breakpoints().into_iter().map(acosh_stable).collect()
}

pub fn endpoint_bound_ratio<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>) -> Result<HyperbolicEndpoint<T>> {
    endpoint_bound_ratio_with(geom, profile, SweepGrid::default())
}

pub fn endpoint_bound_ratio_with<T: Real>(
    geom: &HyperbolicGeometry,
    profile: &StepProfile<T>,
    grid: SweepGrid,
) -> Result<HyperbolicEndpoint<T>> {
    geom.require_endpoint_range()?;
    check_step(profile)?;
    if !profile.is_indicator() {
        return Err(Error::arg("endpoint ratio is defined for indicator profiles"));
    }
    let expo = T::one() / geom.critical_p::<T>();
    let norm = hn_lorentz_norm(profile, geom, LorentzIndex::new(geom.critical_p(), T::one())?)?;
    let volume = hn_lorentz_norm(profile, geom, LorentzIndex::new(T::one(), T::one())?)? / geom.c_n::<T>();
    if !(norm > T::zero() && volume > T::zero()) {
        return Err(Error::arg("profile has zero norm"));
    }
    let upper = acosh_stable(profile.outer_radius().unwrap());
    let bps = s_breakpoints(profile);
    let denom = volume.powf(expo);
    let (wv, ws) = grid.sup(|s| s.cosh() * closed_unchecked(geom, profile, s) / denom, T::zero(), upper, &bps);
    let (pv, ps) = grid.sup(|s| closed_unchecked(geom, profile, s) / norm, T::zero(), upper, &bps);
    Ok(HyperbolicEndpoint { weighted: wv, weighted_argmax: ws, plain: pv, plain_argmax: ps })
}

/// `‖g‖_{L^{n-1,∞}(Ξ_d)}` for any curve in `u`.
pub fn weak_norm_of<T: Real, G: RadialFunction<T>>(curve: &G, geom: &HyperbolicGeometry, grid: WeakNormGrid) -> Result<T> {
    weak_norm(curve, &geom.target_measure(), T::from_u32(geom.n - 1).unwrap(), grid)
}

/// Weak norm of the transform of a step profile.
pub fn weak_norm_decay<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>) -> Result<T> {
    weak_norm_decay_with(geom, profile, WeakNormGrid::default())
}

pub fn weak_norm_decay_with<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, grid: WeakNormGrid) -> Result<T> {
    geom.require_endpoint_range()?;
    check_step(profile)?;
    if profile.is_empty() {
        return Ok(T::zero());
    }
    let upper = acosh_stable(profile.outer_radius().unwrap());
    let curve = FnCurve::new(|s| closed_unchecked(geom, profile, s), Some(upper), s_breakpoints(profile));
    weak_norm_of(&curve, geom, grid)
}

/// `q` solving `(n-1)/p = (d-1) + (n-d)/q` (`q = p` when `d = 1`).
pub fn lp_lq_exponent<T: Real>(geom: &HyperbolicGeometry, p: T) -> Result<T> {
    interpolation_exponent(geom, p, T::one())
}

/// `q_κ` solving `(n-κ)/p = (d-κ) + (n-d)/q_κ`.
pub fn interpolation_exponent<T: Real>(geom: &HyperbolicGeometry, p: T, kappa: T) -> Result<T> {
    let crit = geom.critical_p::<T>();
    if !(p >= T::one() && p < crit && p.is_finite()) {
        return Err(Error::arg(format!("p = {p} outside [1, {crit})")));
    }
    if !(kappa >= T::one() && kappa <= T::two()) {
        return Err(Error::arg(format!("interpolation parameter κ = {kappa} outside [1, 2]")));
    }
    if kappa > T::one() && geom.d < 2 {
        return Err(Error::arg("κ > 1 needs d >= 2"));
    }
    let n = T::from_u32(geom.n).unwrap();
    let d = T::from_u32(geom.d).unwrap();
    Ok((n - d) / ((n - kappa) / p - (d - kappa)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicLpLq<T> {
    pub q: T,
    pub numerator: T,
    pub denominator: T,
    pub ratio: T,
}

/// `‖A f‖_{L^q(Ξ_d)} / ‖f‖_{L^p(ℍⁿ)}` at the exponent of the diagonal.
pub fn lp_lq_ratio<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, p: T) -> Result<HyperbolicLpLq<T>> {
    let q = lp_lq_exponent(geom, p)?;
    lp_lq_ratio_at(geom, profile, p, q)
}

/// The same ratio at an arbitrary target exponent `q`.
pub fn lp_lq_ratio_at<T: Real>(geom: &HyperbolicGeometry, profile: &StepProfile<T>, p: T, q: T) -> Result<HyperbolicLpLq<T>> {
    check_step(profile)?;
    if profile.is_empty() {
        return Err(Error::arg("L^p ratio of an empty profile"));
    }
    if !(q >= T::one() && q.is_finite()) {
        return Err(Error::arg(format!("target exponent q = {q} must lie in [1, ∞)")));
    }
    let target = geom.target_measure::<T>();
    let quad = Quadrature::new(T::lit(1e-11).max(T::tolerance_floor())).with_abs_tol(T::min_positive_value());
    let upper = acosh_stable(profile.outer_radius().unwrap());
    let nodes = panel_nodes(T::zero(), upper, &s_breakpoints(profile));
    let total = integrate_panels(
        |s: T| {
            let a = closed_unchecked(geom, profile, s);
            if a == T::zero() {
                T::zero()
            } else {
                a.powf(q) * target.density(s)
            }
        },
        &nodes,
        &quad,
    )?;
    let numerator = total.powf(T::one() / q);
    let denominator = hn_lorentz_norm(profile, geom, LorentzIndex::strong(p)?)?;
    Ok(HyperbolicLpLq { q, numerator, denominator, ratio: numerator / denominator })
}

/// `I(T) = ∫_0^T e^{-(n-1)t/p} e^{(d-1)t} / (1+t) dt` on a grid of cut-offs.
pub fn divergence_probe<T: Real>(geom: &HyperbolicGeometry, p: T, t_grid: &[T]) -> Result<Vec<T>> {
    if !(p >= T::one()) {
        return Err(Error::arg(format!("probe exponent p = {p} must be >= 1")));
    }
    if t_grid.iter().any(|&t| !(t > T::zero())) || t_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::arg("cut-offs must be positive and increasing"));
    }
    let rate = T::from_u32(geom.d - 1).unwrap() - T::from_u32(geom.n - 1).unwrap() / p;
    let f = |t: T| (rate * t).exp() / (T::one() + t);
    let quad = Quadrature::new(T::lit(1e-12).max(T::tolerance_floor())).with_abs_tol(T::min_positive_value());
    let mut out = Vec::with_capacity(t_grid.len());
    let mut acc = CompensatedSum::new();
    let mut lo = T::zero();
    for &hi in t_grid {
        // Dyadic panels keep the 1/(1+t) and exponential scales resolved.
        let mut a = lo;
        while a < hi {
            let b = if a < T::one() { T::one().min(hi) } else { (a * T::two()).min(hi) };
            acc.add(quad.integrate(f, a, b)?.value);
            a = b;
        }
        lo = hi;
        out.push(acc.value());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn h(n: u32, d: u32) -> HyperbolicGeometry {
        HyperbolicGeometry::new(n, d).unwrap()
    }

    fn shell() -> StepProfile<f64> {
        StepProfile::indicator(vec![(1.0, 2.0)]).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let g = h(3, 2);
        assert_relative_eq!(abel_step_closed(&g, &shell(), 0.0).unwrap(), 2.0 * PI, max_relative = 1e-14);
        let s = acosh_stable(1.5);
        assert_relative_eq!(abel_step_closed(&g, &shell(), s).unwrap(), 2.0 * PI / 3.0, max_relative = 1e-14);
        assert_eq!(abel_step_closed(&g, &shell(), 2.0).unwrap(), 0.0);
    }

    #[test]
    fn k_integral_branches_agree() {
        let quad = Quadrature::new(1e-13);
        for m in 0..6u32 {
            for (rho, c) in [(0.3, 1.0), (0.49, 1.0), (0.51, 1.0), (3.0, 1.2), (0.01, 5.0)] {
                let q = quad.integrate(|x: f64| x.powi(m as i32) / (c * c + x * x).sqrt(), 0.0, rho).unwrap().value;
                assert_relative_eq!(k_integral(m, rho, c), q, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn forms_agree() {
        let quad = Quadrature::new(1e-11);
        let f = StepProfile::indicator(vec![(1.2, 1.9), (2.5, 4.0)]).unwrap();
        for g in [h(3, 1), h(3, 2), h(4, 3), h(5, 3)] {
            for s in [0.0, 0.4, 1.0, 1.5, 2.0] {
                let exact = abel_step_closed(&g, &f, s).unwrap();
                let t = abel_point(&g, &f, s, &quad).unwrap().value;
                let r = abel_point_r_form(&g, &f, s, &quad).unwrap().value;
                assert_relative_eq!(t, exact, max_relative = 1e-9, epsilon = 1e-13);
                assert_relative_eq!(r, exact, max_relative = 1e-9, epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn ball_measure() {
        let ball = StepProfile::indicator(vec![(1.0, 1f64.cosh())]).unwrap();
        let l1 = LorentzIndex::new(1.0, 1.0).unwrap();
        let v = hn_lorentz_norm(&ball, &h(3, 2), l1).unwrap();
        assert_relative_eq!(v, 4.0 * PI * (1f64.sinh() * 1f64.cosh() - 1.0) / 2.0, max_relative = 1e-12);
        assert!(hn_lorentz_norm(&StepProfile::empty(), &h(3, 2), l1).is_err());
    }

    #[test]
    fn endpoint_example() {
        let r = endpoint_bound_ratio(&h(3, 2), &shell()).unwrap();
        let vol: f64 = (2.0 * 3f64.sqrt() - acosh_stable(2.0)) / 2.0;
        assert_relative_eq!(vol, 1.07357, max_relative = 1e-5);
        assert_relative_eq!(r.weighted, 2.0 * PI / vol.sqrt(), max_relative = 1e-10);
        assert!(r.plain <= r.weighted);
        assert!(endpoint_bound_ratio(&h(2, 1), &shell()).is_err());
    }

    #[test]
    fn exponents() {
        assert_eq!(lp_lq_exponent(&h(3, 2), 1.0).unwrap(), 1.0);
        assert!(lp_lq_exponent(&h(3, 2), 2.0).is_err());
        assert_eq!(lp_lq_exponent(&h(3, 1), 2.0).unwrap(), 2.0);
        assert!(divergence_probe(&h(3, 2), 0.5, &[1.0]).is_err());
    }

    #[test]
    fn divergence_at_critical_exponent_is_logarithmic() {
        let v = divergence_probe(&h(3, 2), 2.0, &[10.0, 100.0, 1000.0]).unwrap();
        assert_relative_eq!(v[0], 11f64.ln(), max_relative = 1e-11);
        assert_relative_eq!(v[2] - v[1], (1001.0f64 / 101.0).ln(), max_relative = 1e-11);
    }
}
