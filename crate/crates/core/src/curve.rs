//! Sampled transform curves and the norms computed on them.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lorentz::LevelSets;
use crate::profiles::{RadialFunction, RadialMeasure};
use crate::quadrature::Quadrature;
use crate::scalar::Real;

/// Which transform produced a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "geometry", rename_all = "lowercase")]
pub enum GeometryTag {
    Grassmann { n: u32, d: u32, k: u32 },
    Hyperbolic { n: u32, d: u32 },
    Sphere { n: u32, d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint<T> {
    pub s: T,
    pub value: T,
    pub err_est: T,
}

/// Samples `(s, A f(s))`. A point whose integral diverged carries `value = +∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformCurve<T> {
    geometry: GeometryTag,
    points: Vec<CurvePoint<T>>,
    domain_upper: Option<T>,
}

impl<T: Real> TransformCurve<T> {
    /// `domain_upper` is the end of the parameter range (e.g. `π/2` on the sphere);
    /// `None` for `[0, ∞)`.
    pub fn new(geometry: GeometryTag, points: Vec<CurvePoint<T>>, domain_upper: Option<T>) -> Result<Self> {
        if points.windows(2).any(|w| !(w[0].s < w[1].s)) {
            return Err(Error::arg("curve abscissae must be strictly increasing"));
        }
        if points.iter().any(|p| !(p.err_est >= T::zero()) || !(p.value >= T::zero())) {
            return Err(Error::arg("curve values and error estimates must be nonnegative"));
        }
        if let (Some(u), Some(last)) = (domain_upper, points.last()) {
            if last.s > u {
                return Err(Error::arg("curve sample beyond the declared domain"));
            }
        }
        Ok(Self { geometry, points, domain_upper })
    }

    /// Curve of a known function, mostly for witness functions and tests.
    pub fn from_fn<F: Fn(T) -> T>(geometry: GeometryTag, grid: &[T], f: F, domain_upper: Option<T>) -> Result<Self> {
        let points = grid.iter().map(|&s| CurvePoint { s, value: f(s), err_est: T::zero() }).collect();
        Self::new(geometry, points, domain_upper)
    }

    pub fn geometry(&self) -> GeometryTag {
        self.geometry
    }

    pub fn points(&self) -> &[CurvePoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Indices of samples flagged as divergent.
    pub fn flagged(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| self.points[i].value.is_infinite()).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.points.iter().all(|p| p.value.is_finite())
    }

    pub fn max_value(&self) -> T {
        self.points.iter().map(|p| p.value).fold(T::zero(), T::max)
    }

    /// Writes `s,value,err_est` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,value,err_est")?;
        for p in &self.points {
            writeln!(out, "{:.16e},{:.16e},{:.16e}", p.s.to_f64_lossy(), p.value.to_f64_lossy(), p.err_est.to_f64_lossy())?;
        }
        Ok(())
    }
}

/// Linear interpolation between samples, constant extrapolation past the last one
/// (so a curve that has not returned to zero keeps an infinite tail), zero past the domain.
impl<T: Real> RadialFunction<T> for TransformCurve<T> {
    fn value(&self, s: T) -> T {
        let pts = &self.points;
        if pts.is_empty() || s < pts[0].s {
            return T::zero();
        }
        if let Some(u) = self.domain_upper {
            if s > u {
                return T::zero();
            }
        }
        let i = pts.partition_point(|p| p.s <= s);
        if i >= pts.len() {
            return pts[pts.len() - 1].value;
        }
        let (p0, p1) = (pts[i - 1], pts[i]);
        let w = (s - p0.s) / (p1.s - p0.s);
        p0.value + w * (p1.value - p0.value)
    }

    fn support_upper(&self) -> Option<T> {
        match self.points.last() {
            Some(p) if p.value == T::zero() => Some(p.s),
            _ => self.domain_upper,
        }
    }

    fn breakpoints(&self) -> Vec<T> {
        self.points.iter().map(|p| p.s).collect()
    }
}

/// A closed-form curve given by a function, its support and its kinks.
pub struct FnCurve<F, T> {
    f: F,
    support_upper: Option<T>,
    breakpoints: Vec<T>,
}

impl<F: Fn(T) -> T + Send + Sync, T: Real> FnCurve<F, T> {
    pub fn new(f: F, support_upper: Option<T>, breakpoints: Vec<T>) -> Self {
        Self { f, support_upper, breakpoints }
    }
}

impl<F: Fn(T) -> T + Send + Sync, T: Real> RadialFunction<T> for FnCurve<F, T> {
    fn value(&self, s: T) -> T {
        match self.support_upper {
            Some(u) if s > u => T::zero(),
            _ => (self.f)(s),
        }
    }

    fn support_upper(&self) -> Option<T> {
        self.support_upper
    }

    fn breakpoints(&self) -> Vec<T> {
        self.breakpoints.clone()
    }
}

/// `(∫ g(s)^p w(s) ds)^{1/p}` over the support of `g`, splitting at its breakpoints.
pub fn strong_norm<T: Real, F: RadialFunction<T>>(g: &F, measure: &RadialMeasure<T>, p: T, quad: &Quadrature<T>) -> Result<T> {
    if !(p >= T::one() && p.is_finite()) {
        return Err(Error::arg(format!("exponent p = {p} must lie in [1, ∞)")));
    }
    let lo = measure.domain.0;
    let integrand = |s: T| {
        let v = g.value(s);
        if v == T::zero() {
            T::zero()
        } else {
            v.powf(p) * measure.density(s)
        }
    };
    let breaks = g.breakpoints();
    let est = match g.support_upper() {
        Some(u) if u <= lo => return Ok(T::zero()),
        Some(u) => quad.integrate_split(integrand, lo, u.min(measure.domain.1), &breaks)?,
        None => quad.integrate_semi_infinite(integrand, lo, None, &breaks)?,
    };
    if !est.value.is_finite() {
        return Err(Error::Accuracy { context: "strong norm".into(), best: f64::INFINITY, err_est: f64::INFINITY });
    }
    Ok(est.value.powf(T::one() / p))
}

/// `∫ f` over consecutive panels of `nodes`, each with a square-root substitution at both
/// ends: transform curves of step profiles behave like `(distance to a breakpoint)^{j/2}`.
pub(crate) fn integrate_panels<T: Real, F: Fn(T) -> T>(f: F, nodes: &[T], quad: &Quadrature<T>) -> Result<T> {
    let mut acc = crate::scalar::CompensatedSum::new();
    for w in nodes.windows(2) {
        if !(w[0] < w[1]) {
            continue;
        }
        let integrand = crate::quadrature::SingularIntegrand::new(&f, T::half(), T::half());
        acc.add(quad.integrate_singular(&integrand, w[0], w[1])?.value);
    }
    Ok(acc.value())
}

/// Sorted, deduplicated panel nodes from `lo` through the breakpoints inside `(lo, hi)` to `hi`.
pub(crate) fn panel_nodes<T: Real>(lo: T, hi: T, breakpoints: &[T]) -> Vec<T> {
    let mut nodes = vec![lo];
    nodes.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
    nodes.push(hi);
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    nodes.dedup();
    nodes
}

/// Resolution and growth limits for [`weak_norm`].
#[derive(Debug, Clone, Copy)]
pub struct WeakNormGrid {
    /// Cells in the first window.
    pub cells: usize,
    /// Length of the first window when the support is unbounded.
    pub first_window: f64,
    /// Window doublings allowed before the tail is declared infinite.
    pub max_doublings: u32,
}

impl Default for WeakNormGrid {
    fn default() -> Self {
        Self { cells: 1 << 14, first_window: 4.0, max_doublings: 10 }
    }
}

/// `sup_λ λ μ{g > λ}^{1/r}` by quantizing `g` to its smallest sampled value on each cell.
///
/// Unbounded supports are handled by doubling the window at fixed cell width until the
/// value stops changing; a value still growing after the budget is reported as an
/// accuracy error (infinite weak norm).
pub fn weak_norm<T: Real, F: RadialFunction<T>>(g: &F, measure: &RadialMeasure<T>, r: T, grid: WeakNormGrid) -> Result<T> {
    if !(r >= T::one() && r.is_finite()) {
        return Err(Error::arg(format!("weak exponent r = {r} must lie in [1, ∞)")));
    }
    if grid.cells == 0 {
        return Err(Error::arg("weak norm grid needs at least one cell"));
    }
    let lo = measure.domain.0;
    let index = crate::lorentz::LorentzIndex::weak(r)?;
    let mut pieces: Vec<(T, T)> = Vec::new();
    let push_cells = |a: T, b: T, count: usize, pieces: &mut Vec<(T, T)>| -> Result<()> {
        let width = (b - a) / T::from_usize_lossy(count);
        for i in 0..count {
            let x0 = a + width * T::from_usize_lossy(i);
            let x1 = if i + 1 == count { b } else { a + width * T::from_usize_lossy(i + 1) };
            // Lower envelope on the cell: a midpoint sample overweights cells next to a pole.
            let v = g.value(x0).min(g.value((x0 + x1) * T::half())).min(g.value(x1));
            if v > T::zero() {
                pieces.push((v, measure.integrate(x0, x1)?));
            }
        }
        Ok(())
    };
    let bounded = match g.support_upper() {
        Some(u) => Some(u.min(measure.domain.1)),
        None if measure.domain.1.is_finite() => Some(measure.domain.1),
        None => None,
    };
    if let Some(u) = bounded {
        if u <= lo {
            return Ok(T::zero());
        }
        push_cells(lo, u, grid.cells, &mut pieces)?;
        if pieces.is_empty() {
            return Ok(T::zero());
        }
        return LevelSets::from_pieces(pieces).norm(index);
    }
    let mut hi = lo + T::lit(grid.first_window);
    push_cells(lo, hi, grid.cells, &mut pieces)?;
    let mut cells = grid.cells;
    let mut prev = if pieces.is_empty() { T::zero() } else { LevelSets::from_pieces(pieces.clone()).norm(index)? };
    for _ in 0..grid.max_doublings {
        let next_hi = hi + (hi - lo);
        push_cells(hi, next_hi, cells, &mut pieces)?;
        cells *= 2;
        hi = next_hi;
        let cur = if pieces.is_empty() { T::zero() } else { LevelSets::from_pieces(pieces.clone()).norm(index)? };
        if !cur.is_finite() {
            break;
        }
        if (cur - prev).abs() <= T::lit(1e-12) * cur.abs() {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Accuracy {
        context: "weak norm: level-set measures keep growing with the window".into(),
        best: prev.to_f64_lossy(),
        err_est: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const TAG: GeometryTag = GeometryTag::Grassmann { n: 3, d: 2, k: 0 };

    #[test]
    fn rejects_unsorted_samples() {
        let pts = vec![CurvePoint { s: 1.0, value: 0.0, err_est: 0.0 }, CurvePoint { s: 0.5, value: 0.0, err_est: 0.0 }];
        assert!(TransformCurve::new(TAG, pts, None).is_err());
    }

    #[test]
    fn csv_format() {
        let c = TransformCurve::from_fn(TAG, &[0.0, 0.5], |s: f64| 1.0 - s, None).unwrap();
        let mut buf = Vec::new();
        c.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "s,value,err_est\n0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0\n5.0000000000000000e-1,5.0000000000000000e-1,0.0000000000000000e0\n"
        );
    }

    #[test]
    fn interpolation_and_tail() {
        let c = TransformCurve::from_fn(TAG, &[0.0, 1.0, 2.0], |s: f64| (2.0 - s).max(0.0), None).unwrap();
        assert_relative_eq!(c.value(0.5), 1.5);
        assert_eq!(c.support_upper(), Some(2.0));
        let ones = TransformCurve::from_fn(TAG, &[0.0, 1.0], |_| 1.0, None).unwrap();
        assert_eq!(ones.support_upper(), None);
        assert_eq!(ones.value(50.0), 1.0);
    }

    #[test]
    fn weak_norm_of_constant_on_bounded_domain() {
        let m = RadialMeasure::power_law(1.0, 0.0);
        let m = RadialMeasure { domain: (0.0, 2.0), ..m };
        let c = TransformCurve::from_fn(TAG, &[0.0, 2.0], |_| 1.0, Some(2.0)).unwrap();
        let v = weak_norm(&c, &m, 2.0, WeakNormGrid::default()).unwrap();
        assert_relative_eq!(v, 2f64.sqrt(), max_relative = 1e-12);
    }

    #[test]
    fn weak_norm_of_constant_on_half_line_diverges() {
        let m = RadialMeasure::lebesgue();
        let c = TransformCurve::from_fn(TAG, &[0.0, 1.0], |_| 1.0, None).unwrap();
        assert!(weak_norm(&c, &m, 2.0, WeakNormGrid::default()).unwrap_err().is_accuracy());
    }
}
