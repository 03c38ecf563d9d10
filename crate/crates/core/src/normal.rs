//! Standard normal distribution function.

use crate::error::{Error, Result};

/// Φ(x) = erfc(−x/√2)/2, using the FreeBSD-derived `erfc` from libm (rational
/// approximations on subintervals, accurate to about one ulp).
/// Going through erfc keeps full relative precision in the lower tail, so
/// Φ(−8) is not rounded to zero.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite(x));
    }
    Ok(0.5 * libm::erfc(-x / std::f64::consts::SQRT_2))
}
