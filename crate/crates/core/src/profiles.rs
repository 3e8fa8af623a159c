//! Radial profiles, radial measures and seeded multi-annulus families.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{Quadrature, SingularIntegrand};
use crate::rng::StreamRng;
use crate::scalar::{pos_pow, CompensatedSum, Real};

/// Anything that can be evaluated as a nonnegative function of a radial coordinate.
pub trait RadialFunction<T: Real>: Send + Sync {
    fn value(&self, t: T) -> T;

    /// Upper end of the support, `None` when unbounded.
    fn support_upper(&self) -> Option<T>;

    /// Points where the function is not smooth; quadrature panels are split there.
    fn breakpoints(&self) -> Vec<T> {
        Vec::new()
    }

    /// Exponential decay rate usable for tail certification.
    fn decay_hint(&self) -> Option<T> {
        None
    }
}

impl<T: Real, F: RadialFunction<T> + ?Sized> RadialFunction<T> for &F {
    fn value(&self, t: T) -> T {
        (**self).value(t)
    }
    fn support_upper(&self) -> Option<T> {
        (**self).support_upper()
    }
    fn breakpoints(&self) -> Vec<T> {
        (**self).breakpoints()
    }
    fn decay_hint(&self) -> Option<T> {
        (**self).decay_hint()
    }
}

/// Weighted union of disjoint half-open annuli `[a_i, b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepProfile<T> {
    intervals: Vec<(T, T)>,
    heights: Vec<T>,
}

impl<T: Real> StepProfile<T> {
    pub fn new(intervals: Vec<(T, T)>, heights: Vec<T>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::arg("step profile needs at least one interval"));
        }
        Self::checked(intervals, heights)
    }

    /// Indicator of the union of `intervals`.
    pub fn indicator(intervals: Vec<(T, T)>) -> Result<Self> {
        let heights = vec![T::one(); intervals.len()];
        Self::new(intervals, heights)
    }

    /// The zero profile. Produced by truncations; rejected by the norm routines.
    pub fn empty() -> Self {
        Self { intervals: Vec::new(), heights: Vec::new() }
    }

    fn checked(intervals: Vec<(T, T)>, heights: Vec<T>) -> Result<Self> {
        if intervals.len() != heights.len() {
            return Err(Error::arg(format!("{} intervals but {} heights", intervals.len(), heights.len())));
        }
        let mut prev_upper = T::zero();
        for (i, &(a, b)) in intervals.iter().enumerate() {
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::arg(format!("interval {i} has a non-finite endpoint")));
            }
            if a < T::zero() {
                return Err(Error::arg(format!("interval {i} starts below zero ({a})")));
            }
            if !(a < b) {
                return Err(Error::arg(format!("interval {i} is empty or reversed: [{a}, {b})")));
            }
            if i > 0 && a < prev_upper {
                return Err(Error::arg(format!("interval {i} overlaps its predecessor")));
            }
            prev_upper = b;
        }
        if let Some(h) = heights.iter().find(|h| !(**h > T::zero() && h.is_finite())) {
            return Err(Error::arg(format!("heights must be positive and finite (got {h})")));
        }
        Ok(Self { intervals, heights })
    }

    pub fn intervals(&self) -> &[(T, T)] {
        &self.intervals
    }

    pub fn heights(&self) -> &[T] {
        &self.heights
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn is_indicator(&self) -> bool {
        self.heights.iter().all(|&h| h == T::one())
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (T, T, T)> + ExactSizeIterator + '_ {
        self.intervals.iter().zip(&self.heights).map(|(&(a, b), &h)| (a, b, h))
    }

    /// Upper end of the last annulus.
    pub fn outer_radius(&self) -> Option<T> {
        self.intervals.last().map(|&(_, b)| b)
    }

    /// Value at `t >= 0` under the half-open convention.
    pub fn evaluate(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::arg(format!("profile evaluated at negative radius {t}")));
        }
        Ok(self.value_at(t))
    }

    fn value_at(&self, t: T) -> T {
        let idx = self.intervals.partition_point(|&(a, _)| a <= t);
        if idx == 0 {
            return T::zero();
        }
        let (_, b) = self.intervals[idx - 1];
        if t < b {
            self.heights[idx - 1]
        } else {
            T::zero()
        }
    }

    /// Restriction to `{t > s}`, i.e. the set `E_s` of the endpoint estimates.
    pub fn truncate_below(&self, s: T) -> Self {
        let mut intervals = Vec::new();
        let mut heights = Vec::new();
        for (a, b, h) in self.iter() {
            if b > s {
                intervals.push((a.max(s), b));
                heights.push(h);
            }
        }
        Self { intervals, heights }
    }

    /// Pushes every endpoint through a strictly monotone map.
    pub fn map_endpoints<F: Fn(T) -> T>(&self, f: F) -> Result<Self> {
        let mut pairs: Vec<((T, T), T)> = self
            .iter()
            .map(|(a, b, h)| {
                let (fa, fb) = (f(a), f(b));
                if fa <= fb {
                    ((fa, fb), h)
                } else {
                    ((fb, fa), h)
                }
            })
            .collect();
        pairs.sort_by(|x, y| x.0 .0.partial_cmp(&y.0 .0).expect("finite endpoints"));
        let (intervals, heights) = pairs.into_iter().unzip();
        Self::checked(intervals, heights)
    }

    /// `t ↦ f(t / λ)`: every radius multiplied by `λ`.
    pub fn dilate(&self, lambda: T) -> Result<Self> {
        if !(lambda > T::zero()) {
            return Err(Error::arg("dilation factor must be positive"));
        }
        self.map_endpoints(|t| t * lambda)
    }

    pub fn scale_heights(&self, factor: T) -> Result<Self> {
        Self::checked(self.intervals.clone(), self.heights.iter().map(|&h| h * factor).collect())
    }

    /// Converts precision.
    pub fn cast<U: Real>(&self) -> StepProfile<U> {
        StepProfile {
            intervals: self.intervals.iter().map(|&(a, b)| (U::lit(a.to_f64_lossy()), U::lit(b.to_f64_lossy()))).collect(),
            heights: self.heights.iter().map(|&h| U::lit(h.to_f64_lossy())).collect(),
        }
    }

    pub fn to_file(&self) -> ProfileFile {
        ProfileFile::Step {
            intervals: self.intervals.iter().map(|&(a, b)| [a.to_f64_lossy(), b.to_f64_lossy()]).collect(),
            heights: Some(self.heights.iter().map(|h| h.to_f64_lossy()).collect()),
        }
    }
}

impl<T: Real> RadialFunction<T> for StepProfile<T> {
    fn value(&self, t: T) -> T {
        self.value_at(t)
    }

    fn support_upper(&self) -> Option<T> {
        Some(self.outer_radius().unwrap_or_else(T::zero))
    }

    fn breakpoints(&self) -> Vec<T> {
        self.intervals.iter().flat_map(|&(a, b)| [a, b]).collect()
    }
}

type Evaluator<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// General nonnegative radial profile.
#[derive(Clone)]
pub struct RadialProfile<T> {
    evaluator: Evaluator<T>,
    support_upper: Option<T>,
    decay_hint: Option<T>,
    breakpoints: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for RadialProfile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("support_upper", &self.support_upper)
            .field("decay_hint", &self.decay_hint)
            .field("breakpoints", &self.breakpoints.len())
            .finish_non_exhaustive()
    }
}

impl<T: Real> RadialProfile<T> {
    /// Wraps a closure; values beyond `support_upper` are forced to zero and negative values clamp to zero.
    pub fn from_fn<F>(f: F, support_upper: Option<T>) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        Self { evaluator: Arc::new(f), support_upper, decay_hint: None, breakpoints: Vec::new() }
    }

    pub fn with_decay_hint(mut self, rate: T) -> Self {
        self.decay_hint = Some(rate);
        self
    }

    pub fn with_breakpoints(mut self, breakpoints: Vec<T>) -> Self {
        self.breakpoints = breakpoints;
        self
    }

    /// Piecewise-linear interpolation of `(ts, values)`; the last value is held up to
    /// `support_upper` (default: last abscissa), zero beyond it and below the first abscissa.
    pub fn table(ts: Vec<T>, values: Vec<T>, support_upper: Option<T>) -> Result<Self> {
        if ts.len() != values.len() || ts.is_empty() {
            return Err(Error::arg("table needs matching, non-empty abscissae and values"));
        }
        if ts.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::arg("table abscissae must be strictly increasing"));
        }
        if ts[0] < T::zero() {
            return Err(Error::arg("table abscissae must be nonnegative"));
        }
        if values.iter().any(|v| !(*v >= T::zero() && v.is_finite())) {
            return Err(Error::arg("table values must be finite and nonnegative"));
        }
        let last = *ts.last().unwrap();
        let upper = support_upper.unwrap_or(last);
        if upper < last {
            return Err(Error::arg("support_upper lies inside the table"));
        }
        let mut breaks = ts.clone();
        breaks.push(upper);
        let (ts, values) = (Arc::new(ts), Arc::new(values));
        let eval = move |t: T| -> T {
            if t < ts[0] || t > upper {
                return T::zero();
            }
            let i = ts.partition_point(|&x| x <= t);
            if i >= ts.len() {
                return values[ts.len() - 1];
            }
            let (t0, t1) = (ts[i - 1], ts[i]);
            let w = (t - t0) / (t1 - t0);
            values[i - 1] + w * (values[i] - values[i - 1])
        };
        Ok(Self::from_fn(eval, Some(upper)).with_breakpoints(breaks))
    }
}

impl<T: Real> RadialFunction<T> for RadialProfile<T> {
    fn value(&self, t: T) -> T {
        if let Some(u) = self.support_upper {
            if t > u {
                return T::zero();
            }
        }
        (self.evaluator)(t).max(T::zero())
    }

    fn support_upper(&self) -> Option<T> {
        self.support_upper
    }

    fn breakpoints(&self) -> Vec<T> {
        self.breakpoints.clone()
    }

    fn decay_hint(&self) -> Option<T> {
        self.decay_hint
    }
}

/// Either kind of profile, as read from a profile file.
#[derive(Debug, Clone)]
pub enum Profile<T> {
    Step(StepProfile<T>),
    General(RadialProfile<T>),
}

impl<T: Real> Profile<T> {
    pub fn evaluate(&self, t: T) -> Result<T> {
        if !(t >= T::zero()) {
            return Err(Error::arg(format!("profile evaluated at negative radius {t}")));
        }
        Ok(self.value(t))
    }

    /// Exact step profile, or a quantization of a general profile onto `points` cells.
    pub fn to_step(&self, points: usize) -> Result<StepProfile<T>> {
        match self {
            Profile::Step(s) => Ok(s.clone()),
            Profile::General(g) => {
                let upper = g.support_upper().ok_or_else(|| Error::arg("cannot quantize a profile with unbounded support"))?;
                quantize(g, T::zero(), upper, points)
            }
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ProfileFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        file.into_profile()
    }
}

impl<T: Real> RadialFunction<T> for Profile<T> {
    fn value(&self, t: T) -> T {
        match self {
            Profile::Step(s) => s.value(t),
            Profile::General(g) => g.value(t),
        }
    }
    fn support_upper(&self) -> Option<T> {
        match self {
            Profile::Step(s) => s.support_upper(),
            Profile::General(g) => g.support_upper(),
        }
    }
    fn breakpoints(&self) -> Vec<T> {
        match self {
            Profile::Step(s) => s.breakpoints(),
            Profile::General(g) => g.breakpoints(),
        }
    }
    fn decay_hint(&self) -> Option<T> {
        match self {
            Profile::Step(s) => s.decay_hint(),
            Profile::General(g) => g.decay_hint(),
        }
    }
}

/// On-disk profile description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ProfileFile {
    Step {
        intervals: Vec<[f64; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        heights: Option<Vec<f64>>,
    },
    Table {
        ts: Vec<f64>,
        values: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        support_upper: Option<f64>,
    },
}

impl ProfileFile {
    pub fn into_profile<T: Real>(self) -> Result<Profile<T>> {
        match self {
            ProfileFile::Step { intervals, heights } => {
                let iv: Vec<(T, T)> = intervals.iter().map(|p| (T::lit(p[0]), T::lit(p[1]))).collect();
                let hs = match heights {
                    Some(h) => h.into_iter().map(T::lit).collect(),
                    None => vec![T::one(); iv.len()],
                };
                Ok(Profile::Step(StepProfile::new(iv, hs)?))
            }
            ProfileFile::Table { ts, values, support_upper } => Ok(Profile::General(RadialProfile::table(
                ts.into_iter().map(T::lit).collect(),
                values.into_iter().map(T::lit).collect(),
                support_upper.map(T::lit),
            )?)),
        }
    }
}

/// Samples `profile` at cell midpoints of a uniform grid on `[lo, hi]`, dropping zero cells.
pub fn quantize<T: Real, P: RadialFunction<T>>(profile: &P, lo: T, hi: T, points: usize) -> Result<StepProfile<T>> {
    if points == 0 || !(lo < hi) || lo < T::zero() {
        return Err(Error::arg("quantization needs a nonempty grid on [lo, hi] with 0 <= lo < hi"));
    }
    let width = (hi - lo) / T::from_usize_lossy(points);
    let mut intervals = Vec::new();
    let mut heights = Vec::new();
    for i in 0..points {
        let a = lo + width * T::from_usize_lossy(i);
        let b = if i + 1 == points { hi } else { lo + width * T::from_usize_lossy(i + 1) };
        let v = profile.value((a + b) * T::half());
        if v > T::zero() {
            intervals.push((a, b));
            heights.push(v);
        }
    }
    if intervals.is_empty() {
        return Ok(StepProfile::empty());
    }
    StepProfile::checked(intervals, heights)
}

/// Exponents of the density `c·t^α·sinh^β t·cosh^γ t·sin^δ t·cos^ε t`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DensityExponents<T> {
    pub power: T,
    pub sinh: T,
    pub cosh: T,
    pub sin: T,
    pub cos: T,
}

/// One-dimensional radial measure on `[t_min, t_max]` (`t_max` may be `+∞`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialMeasure<T> {
    pub constant: T,
    pub exponents: DensityExponents<T>,
    pub domain: (T, T),
}

impl<T: Real> RadialMeasure<T> {
    pub fn new(constant: T, exponents: DensityExponents<T>, domain: (T, T)) -> Result<Self> {
        if !(constant > T::zero() && constant.is_finite()) {
            return Err(Error::arg("measure constant must be positive"));
        }
        if !(domain.0 < domain.1) || domain.0 < T::zero() {
            return Err(Error::arg("measure domain must satisfy 0 <= t_min < t_max"));
        }
        Ok(Self { constant, exponents, domain })
    }

    /// Lebesgue measure on `[0, ∞)`.
    pub fn lebesgue() -> Self {
        Self::power_law(T::one(), T::zero())
    }

    /// `c·t^α dt` on `[0, ∞)`.
    pub fn power_law(constant: T, alpha: T) -> Self {
        Self { constant, exponents: DensityExponents { power: alpha, ..Default::default() }, domain: (T::zero(), T::infinity()) }
    }

    pub fn density(&self, t: T) -> T {
        let e = &self.exponents;
        let mut w = self.constant;
        for (base, exp) in [(t, e.power), (t.sinh(), e.sinh), (t.cosh(), e.cosh), (t.sin(), e.sin), (t.cos(), e.cos)] {
            if exp != T::zero() {
                w = w * if base > T::zero() {
                    base.powf(exp)
                } else if exp > T::zero() {
                    T::zero()
                } else {
                    T::infinity()
                };
            }
        }
        w
    }

    fn is_pure_power(&self) -> bool {
        let e = &self.exponents;
        e.sinh == T::zero() && e.cosh == T::zero() && e.sin == T::zero() && e.cos == T::zero()
    }

    /// `∫_a^b w(t) dt`.
    pub fn integrate(&self, a: T, b: T) -> Result<T> {
        let (lo, hi) = self.domain;
        if !(a >= lo && b <= hi && a <= b) || !b.is_finite() {
            return Err(Error::domain(format!("interval [{a}, {b}] not inside measure domain [{lo}, {hi}]")));
        }
        if a == b {
            return Ok(T::zero());
        }
        let e = self.exponents;
        let zero = T::zero();
        let origin_exp = e.power + e.sinh + e.sin;
        if a == zero && origin_exp <= -T::one() {
            return Err(Error::Integrability(format!("density behaves like t^{origin_exp} at the origin")));
        }
        let at_right_angle = (b - T::FRAC_PI_2()).abs() <= T::epsilon() * T::lit(4.0);
        if at_right_angle && e.cos <= -T::one() {
            return Err(Error::Integrability(format!("density behaves like (π/2 - t)^{} at π/2", e.cos)));
        }
        let c = self.constant;
        if self.is_pure_power() {
            let alpha = e.power;
            if alpha == -T::one() {
                return Ok(c * (b / a).ln());
            }
            let k = alpha + T::one();
            return Ok(c * (pos_pow(b, k) - pos_pow(a, k)) / k);
        }
        let only = |x: T| e.power == zero && e.sinh == zero && e.cosh == zero && x == T::one();
        let mid = (a + b) * T::half();
        let half = (b - a) * T::half();
        if e.sin == zero && only(e.cos) {
            return Ok(c * T::two() * mid.cos() * half.sin());
        }
        if e.cos == zero && only(e.sin) {
            return Ok(c * T::two() * mid.sin() * half.sin());
        }
        let left = if a == zero { origin_exp } else { zero };
        let right = if at_right_angle { e.cos } else { zero };
        let quad = Quadrature::new(T::lit(1e-13).max(T::tolerance_floor())).with_abs_tol(T::min_positive_value());
        let integrand = SingularIntegrand::new(|t: T| self.density(t), left, right);
        let est = quad.integrate_singular(&integrand, a, b)?;
        Ok(est.value)
    }
}

/// `Σ_i h_i ∫_{a_i}^{b_i} w`.
pub fn weighted_measure<T: Real>(profile: &StepProfile<T>, measure: &RadialMeasure<T>) -> Result<T> {
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter() {
        acc.add(h * measure.integrate(a, b)?);
    }
    Ok(acc.value())
}

/// Seeded indicator family member: `count` disjoint annuli in `(low, high)`, built by
/// sorting `2·count` uniform points and pairing neighbours.
pub fn random_step_profile<T: Real>(seed: u64, count: usize, range: (T, T)) -> Result<StepProfile<T>> {
    random_step_profile_stream(seed, 0, count, range)
}

/// As [`random_step_profile`] on an explicit stream of the seed.
pub fn random_step_profile_stream<T: Real>(seed: u64, stream: u64, count: usize, range: (T, T)) -> Result<StepProfile<T>> {
    if count == 0 {
        return Err(Error::arg("annulus count must be positive"));
    }
    let (low, high) = (range.0.to_f64_lossy(), range.1.to_f64_lossy());
    if !(low < high) || low < 0.0 || !high.is_finite() {
        return Err(Error::arg("random profile range must satisfy 0 <= low < high < ∞"));
    }
    let mut rng = StreamRng::new(seed, stream);
    loop {
        let mut pts: Vec<T> = (0..2 * count).map(|_| T::lit(rng.uniform_in(low, high))).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite draws"));
        // Exact ties (or ties created by rounding to T) would give an empty annulus: redraw.
        if pts.windows(2).any(|w| !(w[0] < w[1])) || pts[0] <= range.0 {
            continue;
        }
        let intervals = pts.chunks(2).map(|c| (c[0], c[1])).collect();
        return StepProfile::indicator(intervals);
    }
}
