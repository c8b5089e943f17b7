// Thin wrappers so call sites read like std's inherent float methods.

pub(crate) const TAU: f64 = core::f64::consts::TAU;
pub(crate) const PI: f64 = core::f64::consts::PI;

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn round(x: f64) -> f64 {
    libm::round(x)
}

/// Reduces an angle to `[0, 2π)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let r = theta - TAU * floor(theta / TAU);
    // floor can land exactly on TAU for tiny negative inputs
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Unsigned angular distance on the circle, in `[0, π]`.
pub(crate) fn angular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    if d > PI {
        TAU - d
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_angle_range() {
        assert_eq!(wrap_angle(0.0), 0.0);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-15);
        assert!((wrap_angle(5.0 * TAU + 1.0) - 1.0).abs() < 1e-12);
        assert!(wrap_angle(-1e-300) < TAU);
    }

    #[test]
    fn angular_distance_wraps() {
        assert!((angular_distance(0.1, TAU - 0.1) - 0.2).abs() < 1e-12);
        assert!((angular_distance(0.0, PI) - PI).abs() < 1e-12);
    }
}
