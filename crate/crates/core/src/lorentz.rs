//! Distribution functions, decreasing rearrangements and `L^{p,q}` norms of step profiles.

use crate::error::{Error, Result};
use crate::profiles::{RadialMeasure, StepProfile};
use crate::scalar::{CompensatedSum, Real};

/// Lorentz exponents `(p, q)` with `p ∈ [1, ∞)` and `q ∈ [1, ∞]` (`q = T::infinity()` for weak norms).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzIndex<T> {
    p: T,
    q: T,
}

impl<T: Real> LorentzIndex<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        if !(p >= T::one() && p.is_finite()) {
            return Err(Error::arg(format!("Lorentz exponent p = {p} must lie in [1, ∞)")));
        }
        if !(q >= T::one()) {
            return Err(Error::arg(format!("Lorentz exponent q = {q} must lie in [1, ∞]")));
        }
        Ok(Self { p, q })
    }

    /// `L^p = L^{p,p}`.
    pub fn strong(p: T) -> Result<Self> {
        Self::new(p, p)
    }

    /// `L^{p,∞}`.
    pub fn weak(p: T) -> Result<Self> {
        Self::new(p, T::infinity())
    }

    pub fn p(&self) -> T {
        self.p
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn is_weak(&self) -> bool {
        self.q.is_infinite()
    }
}

/// Distinct heights in decreasing order with the cumulative measure of each super-level set.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelSets<T> {
    /// `h_1 > h_2 > … > h_J > 0`.
    pub heights: Vec<T>,
    /// `c_j = μ{f >= h_j}`, nondecreasing.
    pub cumulative: Vec<T>,
}

impl<T: Real> LevelSets<T> {
    pub fn of(profile: &StepProfile<T>, measure: &RadialMeasure<T>) -> Result<Self> {
        let mut pieces = Vec::with_capacity(profile.len());
        for (a, b, h) in profile.iter() {
            pieces.push((h, measure.integrate(a, b)?));
        }
        Ok(Self::from_pieces(pieces))
    }

    /// Builds the level sets from `(height, measure)` pairs in any order.
    pub fn from_pieces(mut pieces: Vec<(T, T)>) -> Self {
        pieces.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("finite heights"));
        let mut heights: Vec<T> = Vec::new();
        let mut cumulative: Vec<T> = Vec::new();
        let mut acc = CompensatedSum::new();
        for (h, m) in pieces {
            acc.add(m);
            match heights.last() {
                Some(&last) if last == h => *cumulative.last_mut().unwrap() = acc.value(),
                _ => {
                    heights.push(h);
                    cumulative.push(acc.value());
                }
            }
        }
        Self { heights, cumulative }
    }

    pub fn total_measure(&self) -> T {
        self.cumulative.last().copied().unwrap_or_else(T::zero)
    }

    fn nonempty(&self) -> Result<()> {
        if self.heights.is_empty() {
            return Err(Error::arg("Lorentz norm of an empty profile"));
        }
        Ok(())
    }

    /// Norm through the rearrangement `f*`.
    pub fn norm(&self, index: LorentzIndex<T>) -> Result<T> {
        self.nonempty()?;
        let p = index.p();
        if index.is_weak() {
            return Ok(self
                .heights
                .iter()
                .zip(&self.cumulative)
                .map(|(&h, &c)| h * c.powf(T::one() / p))
                .fold(T::zero(), T::max));
        }
        if self.heights.len() == 1 {
            return Ok(self.heights[0] * self.cumulative[0].powf(T::one() / p));
        }
        let q = index.q();
        let r = q / p;
        let mut acc = CompensatedSum::new();
        let mut prev = T::zero();
        for (&h, &c) in self.heights.iter().zip(&self.cumulative) {
            let cur = c.powf(r);
            acc.add(h.powf(q) * (cur - prev));
            prev = cur;
        }
        Ok(acc.value().max(T::zero()).powf(T::one() / q))
    }

    /// Norm through the distribution function: `(q ∫ (t d_f(t)^{1/p})^q dt/t)^{1/q}`.
    pub fn norm_by_distribution(&self, index: LorentzIndex<T>) -> Result<T> {
        self.nonempty()?;
        if index.is_weak() {
            return self.norm(index);
        }
        let (p, q) = (index.p(), index.q());
        let mut acc = CompensatedSum::new();
        for j in 0..self.heights.len() {
            let next = self.heights.get(j + 1).copied().unwrap_or_else(T::zero);
            acc.add(self.cumulative[j].powf(q / p) * (self.heights[j].powf(q) - next.powf(q)));
        }
        Ok(acc.value().max(T::zero()).powf(T::one() / q))
    }
}

/// `μ{t : f(t) > level}`.
pub fn distribution_function<T: Real>(profile: &StepProfile<T>, measure: &RadialMeasure<T>, level: T) -> Result<T> {
    if !(level >= T::zero()) {
        return Err(Error::arg("distribution level must be nonnegative"));
    }
    let mut acc = CompensatedSum::new();
    for (a, b, h) in profile.iter() {
        if h > level {
            acc.add(measure.integrate(a, b)?);
        }
    }
    Ok(acc.value())
}

/// `f*` as a step profile on `(0, ∞)` with Lebesgue measure.
pub fn decreasing_rearrangement<T: Real>(profile: &StepProfile<T>, measure: &RadialMeasure<T>) -> Result<StepProfile<T>> {
    let levels = LevelSets::of(profile, measure)?;
    let mut intervals = Vec::new();
    let mut heights = Vec::new();
    let mut prev = T::zero();
    for (&h, &c) in levels.heights.iter().zip(&levels.cumulative) {
        if c > prev {
            intervals.push((prev, c));
            heights.push(h);
            prev = c;
        }
    }
    if intervals.is_empty() {
        return Ok(StepProfile::empty());
    }
    StepProfile::new(intervals, heights)
}

/// `‖f‖*_{p,q}` in closed form on the rearranged steps.
pub fn lorentz_norm<T: Real>(profile: &StepProfile<T>, measure: &RadialMeasure<T>, index: LorentzIndex<T>) -> Result<T> {
    if profile.is_empty() {
        return Err(Error::arg("Lorentz norm of an empty profile"));
    }
    LevelSets::of(profile, measure)?.norm(index)
}

/// The same norm through the distribution-function expression.
pub fn lorentz_norm_by_distribution<T: Real>(
    profile: &StepProfile<T>,
    measure: &RadialMeasure<T>,
    index: LorentzIndex<T>,
) -> Result<T> {
    if profile.is_empty() {
        return Err(Error::arg("Lorentz norm of an empty profile"));
    }
    LevelSets::of(profile, measure)?.norm_by_distribution(index)
}
