//! Float helpers that work without `std`.

pub(crate) use libm::{exp, fabs as abs, floor, log as ln, sin, sqrt, tanh};

/// `sin(x)/x` with the series branch near zero.
#[inline]
pub(crate) fn sinc(x: f64) -> f64 {
    if abs(x) < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        sin(x) / x
    }
}

/// `coth(x)` for `x > 0`, written as `1/tanh` so large arguments saturate at 1.
#[inline]
pub(crate) fn coth(x: f64) -> f64 {
    1.0 / tanh(x)
}
