//! The d-plane transform of radial functions on the affine Grassmannian `G(n, k)`.
//!
//! For radial `f(|τ|)` the transform is the Abel integral
//! `A f(s) = C ∫_s^∞ f(t) (t² - s²)^{m/2 - 1} t dt`, `m = d - k`, `C = |S^{m-1}|`,
//! which equals the Lebesgue integral of `f(√(s² + |x|²))` over `x ∈ R^m`.

use crate::curve::{integrate_panels, panel_nodes, CurvePoint, GeometryTag, TransformCurve};
use crate::error::{Error, Result};
use crate::lorentz::{lorentz_norm, LorentzIndex};
use crate::profiles::{RadialFunction, RadialMeasure, StepProfile};
use crate::quadrature::{Estimate, Quadrature, SingularIntegrand};
use crate::scalar::{diff_of_squares_pos, pos_pow, CompensatedSum, Real};
use crate::special::sphere_area;
use crate::sweep::SweepGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GrassmannGeometry {
    n: u32,
    d: u32,
    k: u32,
}

impl GrassmannGeometry {
    pub fn new(n: u32, d: u32, k: u32) -> Result<Self> {
        if !(n > d && d > k) {
            return Err(Error::arg(format!("need n > d > k >= 0, got ({n}, {d}, {k})")));
        }
        Ok(Self { n, d, k })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Plane dimension over the base plane, `d - k`.
    pub fn m(&self) -> u32 {
        self.d - self.k
    }

    /// Radial dimension of the domain, `n - k`.
    pub fn domain_dim(&self) -> u32 {
        self.n - self.k
    }

    pub fn kernel_exponent<T: Real>(&self) -> T {
        T::from_u32(self.m()).unwrap() * T::half() - T::one()
    }

    pub fn critical_p<T: Real>(&self) -> T {
        T::from_u32(self.domain_dim()).unwrap() / T::from_u32(self.m()).unwrap()
    }

    pub fn constant<T: Real>(&self) -> T {
        sphere_area(self.m())
    }

    pub fn tag(&self) -> GeometryTag {
        GeometryTag::Grassmann { n: self.n, d: self.d, k: self.k }
    }

    /// `|S^{n-k-1}| r^{n-k-1} dr` on `[0, ∞)`.
    pub fn domain_measure<T: Real>(&self) -> RadialMeasure<T> {
        let nk = self.domain_dim();
        RadialMeasure::power_law(sphere_area(nk), T::from_u32(nk - 1).unwrap())
    }

    /// `|S^{n-d-1}| s^{n-d-1} ds` on `[0, ∞)`.
    pub fn target_measure<T: Real>(&self) -> RadialMeasure<T> {
        let nd = self.n - self.d;
        RadialMeasure::power_law(sphere_area(nd), T::from_u32(nd - 1).unwrap())
    }
}

fn check_s<T: Real>(s: T) -> Result<()> {
    if !(s >= T::zero() && s.is_finite()) {
        return Err(Error::arg(format!("transform parameter s = {s} must be finite and nonnegative")));
    }
    Ok(())
}

/// One value of the transform by quadrature in `r = √(t² - s²)`, where the integrand
/// `f(√(s² + r²)) r^{m-1}` has no endpoint singularity.
pub fn abel_point<T: Real, P: RadialFunction<T>>(
    geom: &GrassmannGeometry,
    profile: &P,
    s: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_s(s)?;
    let c = geom.constant::<T>();
    let m1 = T::from_u32(geom.m() - 1).unwrap();
    let integrand = |r: T| {
        let t = (s * s + r * r).sqrt();
        let v = profile.value(t);
        if v == T::zero() {
            T::zero()
        } else {
            v * pos_pow(r, m1)
        }
    };
    let breaks: Vec<T> = profile.breakpoints().into_iter().filter(|&b| b > s).map(|b| diff_of_squares_pos(b, s).sqrt()).collect();
    let est = match profile.support_upper() {
        Some(u) if u <= s => return Ok(Estimate::zero()),
        Some(u) => quad.integrate_split(integrand, T::zero(), diff_of_squares_pos(u, s).sqrt(), &breaks)?,
        None => quad.integrate_semi_infinite(integrand, T::zero(), None, &breaks)?,
    };
    Ok(Estimate { value: c * est.value, err_est: c * est.err_est })
}

/// The same value from the `t`-form, with the kernel singularity `(t - s)^{m/2-1}`
/// declared to the quadrature.
pub fn abel_point_t_form<T: Real, P: RadialFunction<T>>(
    geom: &GrassmannGeometry,
    profile: &P,
    s: T,
    quad: &Quadrature<T>,
) -> Result<Estimate<T>> {
    check_s(s)?;
    let upper = profile.support_upper().ok_or_else(|| Error::arg("t-form evaluation needs a bounded support"))?;
    if upper <= s {
        return Ok(Estimate::zero());
    }
    let c = geom.constant::<T>();
    let sigma = geom.kernel_exponent::<T>();
    let core = |t: T| {
        let v = profile.value(t);
        if v == T::zero() {
            return T::zero();
        }
        v * pos_pow(t - s, sigma) * (t + s).powf(sigma) * t
    };
    let left = if s > T::zero() { sigma } else { T::zero() };
    let integrand = SingularIntegrand::new(core, left, T::zero());
    let breaks: Vec<T> = profile.breakpoints().into_iter().filter(|&b| b > s).collect();
    let est = quad.integrate_singular_split(&integrand, s, upper, &breaks)?;
    Ok(Estimate { value: c * est.value, err_est: c * est.err_est })
}

/// Transform curve by quadrature. Divergent points are flagged with `value = +∞`.
pub fn abel_numeric<T: Real, P: RadialFunction<T>>(
    geom: &GrassmannGeometry,
    profile: &P,
    s_grid: &[T],
    quad: &Quadrature<T>,
) -> Result<TransformCurve<T>> {
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        check_s(s)?;
        let point = match abel_point(geom, profile, s, quad) {
            Ok(e) => CurvePoint { s, value: e.value, err_est: e.err_est },
            Err(e) if e.is_accuracy() => CurvePoint { s, value: T::infinity(), err_est: T::infinity() },
            Err(e) => return Err(e),
        };
        points.push(point);
    }
    TransformCurve::new(geom.tag(), points, None)
}

/// Exact transform of a step profile:
/// `Σ h_i (C/m) [(b_i² - s²)_+^{m/2} - (a_i² - s²)_+^{m/2}]`.
pub fn abel_step_closed<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, s: T) -> Result<T> {
    check_s(s)?;
    Ok(closed_unchecked(geom, profile, s))
}

fn closed_unchecked<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, s: T) -> T {
    let m = T::from_u32(geom.m()).unwrap();
    let half_m = m * T::half();
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter().rev() {
        if b <= s {
            break;
        }
        let upper = pos_pow(diff_of_squares_pos(b, s), half_m);
        let lower = pos_pow(diff_of_squares_pos(a, s), half_m);
        acc.add(h * (upper - lower));
    }
    geom.constant::<T>() / m * acc.value()
}

/// Closed-form curve on `s_grid`.
pub fn closed_curve<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, s_grid: &[T]) -> Result<TransformCurve<T>> {
    let mut points = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        points.push(CurvePoint { s, value: abel_step_closed(geom, profile, s)?, err_est: T::zero() });
    }
    TransformCurve::new(geom.tag(), points, None)
}

/// Lorentz norm under the domain density `|S^{n-k-1}| r^{n-k-1}`.
pub fn domain_lorentz_norm<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, index: LorentzIndex<T>) -> Result<T> {
    lorentz_norm(profile, &geom.domain_measure(), index)
}

/// Sup ratios of the endpoint estimate for an indicator profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointRatio<T> {
    /// `sup_s A f(s) / ‖χ_{E_s}‖`, with `E_s` the part of the support beyond `s`.
    pub truncated: T,
    pub truncated_argmax: T,
    /// `sup_s A f(s) / ‖f‖` at the critical index.
    pub plain: T,
    pub plain_argmax: T,
}

/// Measure of `{t ∈ E : t > s}` up to the factor `|S^{N-1}|/N`.
fn truncated_volume<T: Real>(profile: &StepProfile<T>, big_n: T, s: T) -> T {
    let mut acc = CompensatedSum::new();
    for (a, b, _) in profile.iter().rev() {
        if b <= s {
            break;
        }
        acc.add(b.powf(big_n) - a.max(s).powf(big_n));
    }
    acc.value()
}

pub fn endpoint_ratio<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>) -> Result<EndpointRatio<T>> {
    endpoint_ratio_with(geom, profile, SweepGrid::default())
}

pub fn endpoint_ratio_with<T: Real>(
    geom: &GrassmannGeometry,
    profile: &StepProfile<T>,
    grid: SweepGrid,
) -> Result<EndpointRatio<T>> {
    if !profile.is_indicator() {
        return Err(Error::arg("endpoint ratio is defined for indicator profiles"));
    }
    let index = LorentzIndex::new(geom.critical_p(), T::one())?;
    let norm = domain_lorentz_norm(geom, profile, index)?;
    if !(norm > T::zero()) {
        return Err(Error::arg("profile has zero norm"));
    }
    let nk = geom.domain_dim();
    let big_n = T::from_u32(nk).unwrap();
    let vol_factor = sphere_area::<T>(nk) / big_n;
    let expo = T::one() / geom.critical_p::<T>();
    let upper = profile.outer_radius().unwrap();
    let bps = profile.breakpoints();
    let truncated = |s: T| {
        let vol = truncated_volume(profile, big_n, s);
        if vol <= T::zero() {
            return T::zero();
        }
        closed_unchecked(geom, profile, s) / (vol_factor * vol).powf(expo)
    };
    let (tv, ts) = grid.sup(truncated, T::zero(), upper, &bps);
    let (pv, ps) = grid.sup(|s| closed_unchecked(geom, profile, s) / norm, T::zero(), upper, &bps);
    Ok(EndpointRatio { truncated: tv, truncated_argmax: ts, plain: pv, plain_argmax: ps })
}

/// The three quantities of the comparison chain behind the endpoint estimate at a fixed `s`:
/// `X = (Σ[max(b,s)^N - max(a,s)^N])^{m/N}`, `Y = (Σ[(b²-s²)_+^{N/2} - (a²-s²)_+^{N/2}])^{m/N}`,
/// `Z = Σ[(b²-s²)_+^{m/2} - (a²-s²)_+^{m/2}]`, with `X >= Y >= Z` expected.
pub fn lemma_chain<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, s: T) -> Result<[T; 3]> {
    check_s(s)?;
    let big_n = T::from_u32(geom.domain_dim()).unwrap();
    let m = T::from_u32(geom.m()).unwrap();
    let x = truncated_volume(profile, big_n, s).max(T::zero()).powf(m / big_n);
    let mut y = CompensatedSum::new();
    let mut z = CompensatedSum::new();
    for (a, b, _) in profile.iter() {
        if b <= s {
            continue;
        }
        let (db, da) = (diff_of_squares_pos(b, s), diff_of_squares_pos(a, s));
        y.add(pos_pow(db, big_n * T::half()) - pos_pow(da, big_n * T::half()));
        z.add(pos_pow(db, m * T::half()) - pos_pow(da, m * T::half()));
    }
    Ok([x, y.value().max(T::zero()).powf(m / big_n), z.value()])
}

/// Off-diagonal ratio `‖A f‖_{L^q(target)} / ‖f‖_{L^p(domain)}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpLqRatio<T> {
    pub q: T,
    pub numerator: T,
    pub denominator: T,
    pub ratio: T,
}

/// `q` solving `(n-k)/p = (d-k) + (n-d)/q`.
pub fn lp_lq_exponent<T: Real>(geom: &GrassmannGeometry, p: T) -> Result<T> {
    let crit = geom.critical_p::<T>();
    if !(p >= T::one() && p < crit) {
        return Err(Error::arg(format!("p = {p} outside [1, {crit})")));
    }
    let nk = T::from_u32(geom.domain_dim()).unwrap();
    let m = T::from_u32(geom.m()).unwrap();
    Ok(T::from_u32(geom.n - geom.d).unwrap() / (nk / p - m))
}

pub fn lp_lq_ratio<T: Real>(geom: &GrassmannGeometry, profile: &StepProfile<T>, p: T) -> Result<LpLqRatio<T>> {
    let q = lp_lq_exponent(geom, p)?;
    if profile.is_empty() {
        return Err(Error::arg("L^p ratio of an empty profile"));
    }
    let target = geom.target_measure::<T>();
    let quad = Quadrature::new(T::lit(1e-12).max(T::tolerance_floor())).with_abs_tol(T::min_positive_value());
    let nodes = panel_nodes(T::zero(), profile.outer_radius().unwrap(), &profile.breakpoints());
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
    let domain = geom.domain_measure::<T>();
    let mut den = CompensatedSum::new();
    for (a, b, h) in profile.iter() {
        den.add(h.powf(p) * domain.integrate(a, b)?);
    }
    let denominator = den.value().powf(T::one() / p);
    Ok(LpLqRatio { q, numerator, denominator, ratio: numerator / denominator })
}
