//! Checks for the alternating power inequality and the exponential weight inequality.

use crate::error::{Error, Result};
use crate::profiles::StepProfile;
use crate::scalar::{CompensatedSum, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlternatingCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

impl<T: Real> AlternatingCheck<T> {
    /// `rhs - lhs`, negative on a violation.
    pub fn slack(&self) -> T {
        self.rhs - self.lhs
    }
}

/// `(Σ (-1)^{i-1} x_i)^γ` against `Σ (-1)^{i-1} x_i^γ` for `x₁ >= x₂ >= … >= 0`.
pub fn alternating_power_check<T: Real>(x: &[T], gamma: T) -> Result<AlternatingCheck<T>> {
    if !(gamma >= T::one() && gamma.is_finite()) {
        return Err(Error::arg(format!("γ = {gamma} must be finite and >= 1")));
    }
    if x.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
        return Err(Error::arg("entries must be finite and nonnegative"));
    }
    if x.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::arg("entries must be non-increasing"));
    }
    let mut plain = CompensatedSum::new();
    let mut powered = CompensatedSum::new();
    for (i, &v) in x.iter().enumerate() {
        let sign = if i % 2 == 0 { T::one() } else { -T::one() };
        plain.add(sign * v);
        powered.add(sign * v.powf(gamma));
    }
    let lhs = plain.value().max(T::zero()).powf(gamma);
    let rhs = powered.value();
    let tol = T::lit(1e-12) * rhs.abs().max(T::one());
    Ok(AlternatingCheck { lhs, rhs, holds: lhs <= rhs + tol })
}

/// Both sides of a weighted inequality over a finite union of intervals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightCheck<T> {
    pub lhs: T,
    pub rhs_scaled: T,
    /// `None` when both sides vanish (empty set).
    pub ratio: Option<T>,
    /// `p^{1/p} |δ|^{1/p - 1}`, the constant reached through the alternating inequality.
    pub derived_bound: T,
}

fn check_params<T: Real>(delta: T, p: T) -> Result<()> {
    if delta == T::zero() || !delta.is_finite() {
        return Err(Error::arg("δ must be finite and nonzero"));
    }
    if !(p > T::one() && p.is_finite()) {
        return Err(Error::arg(format!("p = {p} must be finite and > 1")));
    }
    Ok(())
}

fn check_union<T: Real>(intervals: &[(T, T)]) -> Result<()> {
    for (i, &(a, b)) in intervals.iter().enumerate() {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::arg(format!("interval {i} is not a finite [a, b) with a < b")));
        }
        if i > 0 && a < intervals[i - 1].1 {
            return Err(Error::arg(format!("interval {i} overlaps its predecessor")));
        }
    }
    Ok(())
}

fn derived_bound<T: Real>(delta: T, p: T) -> T {
    let inv = T::one() / p;
    p.powf(inv) * delta.abs().powf(inv - T::one())
}

fn finish<T: Real>(lhs: T, rhs_pow: T, delta: T, p: T) -> WeightCheck<T> {
    let rhs_scaled = rhs_pow.max(T::zero()).powf(T::one() / p);
    let ratio = if rhs_scaled > T::zero() { Some(lhs / rhs_scaled) } else { None };
    WeightCheck { lhs, rhs_scaled, ratio, derived_bound: derived_bound(delta, p) }
}

/// `∫_a^b e^{δt} dt` without cancellation for short intervals.
fn exp_integral<T: Real>(a: T, b: T, delta: T) -> T {
    let lo = if delta > T::zero() { a } else { b };
    (delta * lo).exp() * (delta * (b - a)).abs().exp_m1() / delta.abs()
}

/// `∫ χ_E e^{δt} dt` against `(∫ χ_E e^{pδt} dt)^{1/p}` for a union `E` of intervals on the line.
pub fn exponential_weight_check<T: Real>(intervals: &[(T, T)], delta: T, p: T) -> Result<WeightCheck<T>> {
    check_params(delta, p)?;
    check_union(intervals)?;
    let lhs: CompensatedSum<T> = intervals.iter().map(|&(a, b)| exp_integral(a, b, delta)).collect();
    let rhs: CompensatedSum<T> = intervals.iter().map(|&(a, b)| exp_integral(a, b, p * delta)).collect();
    Ok(finish(lhs.value(), rhs.value(), delta, p))
}

/// Power-weight form: `∫ φ s^{δ-1} ds` against `(∫ φ s^{pδ-1} ds)^{1/p}` for an indicator on `(0, ∞)`.
pub fn power_weight_check<T: Real>(profile: &StepProfile<T>, delta: T, p: T) -> Result<WeightCheck<T>> {
    check_params(delta, p)?;
    if !profile.is_indicator() {
        return Err(Error::arg("power-weight check needs an indicator profile"));
    }
    if delta < T::zero() && profile.intervals().first().is_some_and(|&(a, _)| a == T::zero()) {
        return Err(Error::Integrability("s^{δ-1} is not integrable at 0 for δ < 0".into()));
    }
    let piece = |a: T, b: T, e: T| (b.powf(e) - a.powf(e)) / e;
    let lhs: CompensatedSum<T> = profile.intervals().iter().map(|&(a, b)| piece(a, b, delta)).collect();
    let rhs: CompensatedSum<T> = profile.intervals().iter().map(|&(a, b)| piece(a, b, p * delta)).collect();
    Ok(finish(lhs.value(), rhs.value(), delta, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_examples() {
        let c = alternating_power_check(&[3.0, 1.0], 2.0).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (4.0, 8.0, true));
        let c = alternating_power_check(&[5.0, 5.0, 2.0], 3.0).unwrap();
        assert_eq!((c.lhs, c.rhs, c.holds), (8.0, 8.0, true));
        assert!(alternating_power_check(&[1.0, 2.0], 2.0).is_err());
        assert!(alternating_power_check(&[2.0, 1.0], 0.5).is_err());
    }

    #[test]
    fn unit_interval_exponential() {
        let c = exponential_weight_check(&[(0.0, 1.0)], 1.0, 2.0).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(c.lhs, e - 1.0, max_relative = 1e-15);
        assert_relative_eq!(c.rhs_scaled, ((e * e - 1.0) / 2.0).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(c.ratio.unwrap(), 0.9614, epsilon = 1e-4);
        assert!(exponential_weight_check(&[(0.0, 1.0)], 0.0, 2.0).is_err());
    }

    #[test]
    fn negative_delta_mirrors_positive() {
        let pos = exponential_weight_check(&[(0.5, 1.5), (2.0, 3.0)], 0.7, 3.0).unwrap();
        let neg = exponential_weight_check(&[(-3.0, -2.0), (-1.5, -0.5)], -0.7, 3.0).unwrap();
        assert_relative_eq!(pos.ratio.unwrap(), neg.ratio.unwrap(), max_relative = 1e-13);
    }

    #[test]
    fn empty_set_is_flagged() {
        let c = power_weight_check(&StepProfile::<f64>::empty(), 1.0, 2.0).unwrap();
        assert_eq!((c.lhs, c.rhs_scaled, c.ratio), (0.0, 0.0, None));
    }

    #[test]
    fn power_form_single_interval_bound() {
        let f = StepProfile::indicator(vec![(0.3, 2.0)]).unwrap();
        let c = power_weight_check(&f, 1.0, 3.0).unwrap();
        assert!(c.ratio.unwrap() <= 3f64.powf(1.0 / 3.0));
        assert_relative_eq!(c.derived_bound, 3f64.powf(1.0 / 3.0), max_relative = 1e-15);
    }
}
