//! Gamma values at half-integers and the sphere constants built from them.

use crate::scalar::Real;

/// `Γ(m/2)` for a positive integer `m`, by the recurrences from `Γ(1) = 1` and `Γ(1/2) = √π`.
pub fn gamma_half<T: Real>(m: u32) -> T {
    assert!(m > 0, "gamma_half requires m >= 1");
    let (mut g, mut x) = if m.is_multiple_of(2) { (T::one(), T::one()) } else { (T::PI().sqrt(), T::half()) };
    let target = T::from_u32(m).unwrap() * T::half();
    while x < target {
        g = g * x;
        x = x + T::one();
    }
    g
}

/// Surface area `|S^{m-1}| = 2 π^{m/2} / Γ(m/2)` of the unit sphere in `R^m`.
///
/// `|S^0| = 2` counts the two points of the zero-sphere.
pub fn sphere_area<T: Real>(m: u32) -> T {
    assert!(m > 0, "sphere_area requires m >= 1");
    T::two() * T::PI().powf(T::from_u32(m).unwrap() * T::half()) / gamma_half::<T>(m)
}

/// Volume of the unit ball in `R^m`.
pub fn ball_volume<T: Real>(m: u32) -> T {
    sphere_area::<T>(m) / T::from_u32(m).unwrap()
}

/// `Γ((d+1)/2) / (√π Γ(d/2))`, the normalising constant of the one-dimensional
/// reduction of zonal integrals over `S^d` with respect to the probability measure.
pub fn zonal_constant<T: Real>(d: u32) -> T {
    assert!(d > 0, "zonal_constant requires d >= 1");
    gamma_half::<T>(d + 1) / (T::PI().sqrt() * gamma_half::<T>(d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn half_integer_gamma() {
        assert_relative_eq!(gamma_half::<f64>(1), PI.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(gamma_half::<f64>(2), 1.0);
        assert_relative_eq!(gamma_half::<f64>(3), PI.sqrt() / 2.0, max_relative = 1e-15);
        assert_relative_eq!(gamma_half::<f64>(8), 6.0);
        assert_relative_eq!(gamma_half::<f64>(7), 15.0 * PI.sqrt() / 8.0, max_relative = 1e-15);
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area::<f64>(1), 2.0, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(2), 2.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(3), 4.0 * PI, max_relative = 1e-15);
        assert_relative_eq!(sphere_area::<f64>(4), 2.0 * PI * PI, max_relative = 1e-15);
        assert_relative_eq!(ball_volume::<f64>(3), 4.0 * PI / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn zonal_constants() {
        assert_relative_eq!(zonal_constant::<f64>(1), 1.0 / PI, max_relative = 1e-15);
        assert_relative_eq!(zonal_constant::<f64>(2), 0.5, max_relative = 1e-15);
        assert_relative_eq!(zonal_constant::<f64>(3), 2.0 / PI, max_relative = 1e-15);
    }
}
