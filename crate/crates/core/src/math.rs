//! Float helpers routed through `libm` so results do not depend on the
//! platform's math library.

use crate::C64;

pub const PI: f64 = core::f64::consts::PI;
pub const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}
#[inline]
pub fn acos(x: f64) -> f64 {
    libm::acos(x)
}
#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}
#[inline]
pub fn log2(x: f64) -> f64 {
    libm::log2(x)
}
#[inline]
pub fn floor(x: f64) -> f64 {
    libm::floor(x)
}
#[inline]
pub fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}
#[inline]
pub fn round(x: f64) -> f64 {
    libm::round(x)
}
#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}
#[inline]
pub fn powi(x: f64, n: i32) -> f64 {
    libm::pow(x, n as f64)
}

/// `e^{i theta}`.
#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::new(cos(theta), sin(theta))
}

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Modulus of a complex number.
#[inline]
pub fn cabs(z: C64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Argument of a complex number in `(-pi, pi]`.
#[inline]
pub fn carg(z: C64) -> f64 {
    atan2(z.im, z.re)
}

/// Principal square root of a complex number.
pub fn csqrt(z: C64) -> C64 {
    let r = cabs(z);
    if r == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let theta = carg(z);
    let s = sqrt(r);
    C64::new(s * cos(theta / 2.0), s * sin(theta / 2.0))
}

/// Number of bits needed to write `x` (0 for 0).
#[inline]
pub fn bit_length(x: u64) -> u32 {
    64 - x.leading_zeros()
}
