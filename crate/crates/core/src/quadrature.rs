//! Adaptive one-dimensional integration.
//!
//! The workhorse is a globally adaptive 21-point Gauss–Kronrod rule. Algebraic
//! endpoint behaviour `(t - a)^σ` is removed by the substitution `t = a + v^k`
//! (`k = 2` whenever `σ >= -1/2`), and semi-infinite ranges are handled by
//! doubling windows with a certified tail estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::scalar::{CompensatedSum, Real};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_452_400,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights attached to the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub const DEFAULT_REL_TOL: f64 = 1e-9;
pub const DEFAULT_ABS_TOL: f64 = 1e-12;

/// An integral value with an estimate of its absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub err_est: T,
}

impl<T: Real> Estimate<T> {
    pub fn zero() -> Self {
        Self { value: T::zero(), err_est: T::zero() }
    }

    fn accumulate(self, other: Self) -> Self {
        Self { value: self.value + other.value, err_est: self.err_est + other.err_est }
    }
}

/// Integrand whose core already contains the factors `(t - a)^left_exponent`
/// and `(b - t)^right_exponent`.
#[derive(Debug, Clone, Copy)]
pub struct SingularIntegrand<F, T> {
    pub core: F,
    pub left_exponent: T,
    pub right_exponent: T,
}

impl<F, T: Real> SingularIntegrand<F, T> {
    pub fn new(core: F, left_exponent: T, right_exponent: T) -> Self {
        Self { core, left_exponent, right_exponent }
    }

    pub fn regular(core: F) -> Self {
        Self { core, left_exponent: T::zero(), right_exponent: T::zero() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
    pub max_windows: usize,
}

impl<T: Real> Default for Quadrature<T> {
    fn default() -> Self {
        Self::new(T::lit(DEFAULT_REL_TOL))
    }
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    err: T,
    order: usize,
}

impl<T: Real> PartialEq for Panel<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T: Real> Eq for Panel<T> {}
impl<T: Real> PartialOrd for Panel<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Panel<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // Largest error first; ties broken by creation order so refinement is reproducible.
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal).then_with(|| other.order.cmp(&self.order))
    }
}

fn kronrod21<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> (T, T, T) {
    let center = (a + b) * T::half();
    let half = (b - a) * T::half();
    let fc = f(center);
    let mut resk = fc * T::lit(WGK[10]);
    let mut resg = T::zero();
    let mut resabs = fc.abs() * T::lit(WGK[10]);
    for j in 0..10 {
        let dx = half * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        let wk = T::lit(WGK[j]);
        resk = resk + wk * (f1 + f2);
        resabs = resabs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let err = ((resk - resg) * half).abs() + T::lit(10.0) * T::epsilon() * resabs;
    (value, err, resabs)
}

impl<T: Real> Quadrature<T> {
    pub fn new(rel_tol: T) -> Self {
        Self { rel_tol, abs_tol: T::lit(DEFAULT_ABS_TOL), max_subdivisions: 4000, max_windows: 72 }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    fn check_tolerance(&self) -> Result<T> {
        let lo = T::lit(1e-14);
        let hi = T::lit(1e-2);
        if !(self.rel_tol > lo && self.rel_tol < hi) {
            return Err(Error::arg(format!("relative tolerance {} outside (1e-14, 1e-2)", self.rel_tol)));
        }
        Ok(self.rel_tol.max(T::tolerance_floor()))
    }

    fn target(&self, rel: T, value: T) -> T {
        (rel * value.abs()).max(self.abs_tol)
    }

    /// Globally adaptive Gauss–Kronrod integration of a regular integrand over `[a, b]`.
    pub fn integrate<F: Fn(T) -> T>(&self, f: F, a: T, b: T) -> Result<Estimate<T>> {
        let rel = self.check_tolerance()?;
        self.adaptive(&f, a, b, rel, self.abs_tol)
    }

    fn adaptive<F: Fn(T) -> T>(&self, f: &F, a: T, b: T, rel: T, abs_tol: T) -> Result<Estimate<T>> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::arg("integration limits must be finite"));
        }
        if a == b {
            return Ok(Estimate::zero());
        }
        if a > b {
            let e = self.adaptive(f, b, a, rel, abs_tol)?;
            return Ok(Estimate { value: -e.value, err_est: e.err_est });
        }
        let (v0, e0, _) = kronrod21(f, a, b);
        let mut heap = BinaryHeap::new();
        heap.push(Panel { a, b, value: v0, err: e0, order: 0 });
        let mut order = 1;
        loop {
            let total: CompensatedSum<T> = heap.iter().map(|p| p.value).collect();
            let total = total.value();
            let err: T = heap.iter().map(|p| p.err).fold(T::zero(), |x, y| x + y);
            if !total.is_finite() || !err.is_finite() {
                return Err(Error::Accuracy {
                    context: "non-finite integrand values".into(),
                    best: total.to_f64_lossy(),
                    err_est: f64::INFINITY,
                });
            }
            if err <= (rel * total.abs()).max(abs_tol) {
                return Ok(Estimate { value: total, err_est: err });
            }
            if order >= self.max_subdivisions {
                return Err(Error::Accuracy {
                    context: "subdivision budget exhausted".into(),
                    best: total.to_f64_lossy(),
                    err_est: err.to_f64_lossy(),
                });
            }
            let worst = heap.pop().expect("heap never empty");
            let mid = (worst.a + worst.b) * T::half();
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::Accuracy {
                    context: "interval collapsed below machine resolution".into(),
                    best: total.to_f64_lossy(),
                    err_est: err.to_f64_lossy(),
                });
            }
            let (vl, el, _) = kronrod21(f, worst.a, mid);
            let (vr, er, _) = kronrod21(f, mid, worst.b);
            heap.push(Panel { a: worst.a, b: mid, value: vl, err: el, order });
            heap.push(Panel { a: mid, b: worst.b, value: vr, err: er, order: order + 1 });
            order += 2;
        }
    }

    /// Integrates over `[a, b]` after splitting at `breaks` (points outside `(a, b)` are ignored).
    ///
    /// Each panel is refined to the relative tolerance on its own, so for nonnegative
    /// integrands the sum meets it globally.
    pub fn integrate_split<F: Fn(T) -> T>(&self, f: F, a: T, b: T, breaks: &[T]) -> Result<Estimate<T>> {
        let rel = self.check_tolerance()?;
        let nodes = panel_nodes(a, b, breaks);
        let mut acc = Estimate::zero();
        for w in nodes.windows(2) {
            acc = acc.accumulate(self.adaptive(&f, w[0], w[1], rel, self.abs_tol)?);
        }
        Ok(acc)
    }

    /// Integrates a core carrying algebraic endpoint factors.
    pub fn integrate_singular<F: Fn(T) -> T>(&self, integrand: &SingularIntegrand<F, T>, a: T, b: T) -> Result<Estimate<T>> {
        self.integrate_singular_split(integrand, a, b, &[])
    }

    /// As [`Quadrature::integrate_singular`], pre-splitting at interior breakpoints.
    /// Only the outermost panels receive the endpoint substitution.
    pub fn integrate_singular_split<F: Fn(T) -> T>(
        &self,
        integrand: &SingularIntegrand<F, T>,
        a: T,
        b: T,
        breaks: &[T],
    ) -> Result<Estimate<T>> {
        let rel = self.check_tolerance()?;
        let (sl, sr) = (integrand.left_exponent, integrand.right_exponent);
        if !(sl > -T::one()) || !(sr > -T::one()) {
            return Err(Error::arg(format!("endpoint exponents must exceed -1 (got {sl}, {sr})")));
        }
        if !(a < b) {
            if a == b {
                return Ok(Estimate::zero());
            }
            return Err(Error::arg("integration requires a < b"));
        }
        let mut nodes = panel_nodes(a, b, breaks);
        let left = needs_substitution(sl);
        let right = needs_substitution(sr);
        if nodes.len() == 2 && left && right {
            nodes.insert(1, (a + b) * T::half());
        }
        let f = &integrand.core;
        let last = nodes.len() - 2;
        let mut acc = Estimate::zero();
        for (i, w) in nodes.windows(2).enumerate() {
            let (lo, hi) = (w[0], w[1]);
            let est = if i == 0 && left {
                let k = substitution_power(sl);
                let vmax = (hi - lo).powf(T::one() / k);
                let g = |v: T| {
                    if v <= T::zero() {
                        return T::zero();
                    }
                    let vk1 = v.powf(k - T::one());
                    let t = lo + vk1 * v;
                    f(t) * k * vk1
                };
                self.adaptive(&g, T::zero(), vmax, rel, self.abs_tol)?
            } else if i == last && right {
                let k = substitution_power(sr);
                let vmax = (hi - lo).powf(T::one() / k);
                let g = |v: T| {
                    if v <= T::zero() {
                        return T::zero();
                    }
                    let vk1 = v.powf(k - T::one());
                    let t = hi - vk1 * v;
                    f(t) * k * vk1
                };
                self.adaptive(&g, T::zero(), vmax, rel, self.abs_tol)?
            } else {
                self.adaptive(f, lo, hi, rel, self.abs_tol)?
            };
            acc = acc.accumulate(est);
        }
        Ok(acc)
    }

    /// Integrates `f` over `[a, ∞)`.
    ///
    /// With `decay_hint = Some(λ)` the caller asserts `|f(t)| <= |f(x)| e^{-λ (t - x)}` beyond
    /// each window edge `x`, giving the tail bound `|f(x)| / λ`. Without a hint the tail is
    /// extrapolated geometrically from successive doubling windows, which only certifies once
    /// consecutive window contributions shrink by at least a factor of two.
    pub fn integrate_semi_infinite<F: Fn(T) -> T>(&self, f: F, a: T, decay_hint: Option<T>, breaks: &[T]) -> Result<Estimate<T>> {
        let rel = self.check_tolerance()?;
        if let Some(l) = decay_hint {
            if !(l > T::zero()) {
                return Err(Error::arg("decay hint must be positive"));
            }
        }
        let mut width = match decay_hint {
            Some(l) => (T::one() / l).max(T::one()),
            None => T::one(),
        };
        let mut lo = a;
        let mut total = CompensatedSum::new();
        let mut err = T::zero();
        let mut prev: Option<T> = None;
        for _ in 0..self.max_windows {
            let hi = lo + width;
            if !hi.is_finite() {
                break;
            }
            let est = self.integrate_split(&f, lo, hi, breaks)?;
            total.add(est.value);
            err = err + est.err_est;
            let value = total.value();
            let c = est.value.abs();
            let tail = match decay_hint {
                Some(l) => Some(f(hi).abs() / l),
                None => match prev {
                    Some(p) if c == T::zero() && p == T::zero() => Some(T::zero()),
                    Some(p) if p > T::zero() && c <= T::half() * p => {
                        let r = c / p;
                        Some(c * r / (T::one() - r))
                    }
                    _ => None,
                },
            };
            if let Some(tail) = tail {
                if tail.is_finite() && tail <= T::half() * self.target(rel, value) {
                    return Ok(Estimate { value, err_est: err + tail });
                }
            }
            prev = Some(c);
            lo = hi;
            width = width * T::two();
        }
        Err(Error::Accuracy {
            context: "no certified tail bound on semi-infinite range".into(),
            best: total.value().to_f64_lossy(),
            err_est: f64::INFINITY,
        })
    }
}

fn needs_substitution<T: Real>(sigma: T) -> bool {
    sigma != sigma.round()
}

fn substitution_power<T: Real>(sigma: T) -> T {
    if sigma >= -T::half() {
        T::two()
    } else {
        T::one() / (T::one() + sigma)
    }
}

fn panel_nodes<T: Real>(a: T, b: T, breaks: &[T]) -> Vec<T> {
    let mut nodes = Vec::with_capacity(breaks.len() + 2);
    nodes.push(a);
    let mut inner: Vec<T> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    inner.dedup();
    nodes.extend(inner);
    nodes.push(b);
    nodes
}
