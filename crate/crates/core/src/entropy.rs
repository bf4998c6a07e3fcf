//! The bosonic entropy function g and its inverse.
//!
//! `g(x) = (x+1) ln(x+1) - x ln x` is the von Neumann entropy of a thermal
//! mode with mean photon number `x`. It is strictly increasing and concave
//! on `[0, inf)`, with `g(0) = 0` by continuity.

use crate::error::{Error, Result};

/// Bosonic entropy function `g(x) = (x+1) ln(x+1) - x ln x`, in nats.
pub fn g(x: f64) -> Result<f64> {
    if x < 0.0 || !x.is_finite() {
        return Err(Error::Domain { what: "g argument", value: x });
    }
    Ok(g_unchecked(x))
}

#[inline]
pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    (x + 1.0) * x.ln_1p() - x * x.ln()
}

/// Inverse of [`g`]: returns `x >= 0` with `|g(x) - y| <= 1e-12`.
///
/// Bisection on a doubling bracket; g is strictly increasing so the
/// bracket is unambiguous.
pub fn g_inverse(y: f64) -> Result<f64> {
    if y < 0.0 || !y.is_finite() {
        return Err(Error::Domain { what: "g_inverse argument", value: y });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    // g(x) ~ ln x + 1 for large x, so e^(y-1) is a good upper-bound seed.
    let mut hi = (y - 1.0).exp().max(1.0);
    while g_unchecked(hi) < y {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if g_unchecked(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `g(x)` with small negative round-off clamped to zero.
///
/// Entropy formulas feed `nu - 1/2` into g; for pure modes that difference
/// can land a few ulps below zero. Anything below `-tol` is a real
/// physicality violation and errors out.
pub(crate) fn g_clamped(x: f64, tol: f64) -> Result<f64> {
    if x < -tol {
        return Err(Error::Physicality { min_eigenvalue: x + 0.5 });
    }
    Ok(g_unchecked(x.max(0.0)))
}
