//! Complex scalars and the tolerance policy used for every approximate
//! comparison in this crate.
//!
//! All arithmetic is plain `f64` complex arithmetic; equality is always the
//! tolerance-aware test [`scalar_eq`]: `|x - y| <= max(abs, rel * max(1, |x|, |y|))`.
//! The tolerance is a process-wide read-only configuration fixed at startup
//! (see [`set_tolerance`]); nothing else in the crate carries mutable state.

use std::sync::OnceLock;

use num_complex::Complex64;

/// The scalar type every module computes with.
pub type Scalar = Complex64;

/// Relative/absolute tolerance pair used by all approximate comparisons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    /// Relative tolerance, scaled by `max(1, |x|, |y|)`.
    pub rel: f64,
    /// Absolute floor, guarding comparisons of values far below unit scale.
    pub abs: f64,
}

impl Tolerance {
    /// Tolerance derived from a single `eps`: relative `eps`, absolute `eps / 1000`.
    pub fn from_eps(eps: f64) -> Self {
        Tolerance {
            rel: eps,
            abs: eps * 1e-3,
        }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
        }
    }
}

static TOLERANCE: OnceLock<Tolerance> = OnceLock::new();

/// Install the process-wide tolerance. Returns `false` if it was already fixed
/// (first caller wins; later calls are ignored).
pub fn set_tolerance(tol: Tolerance) -> bool {
    TOLERANCE.set(tol).is_ok()
}

/// The active tolerance (default `rel = 1e-9`, `abs = 1e-12` until overridden).
pub fn tolerance() -> Tolerance {
    *TOLERANCE.get_or_init(Tolerance::default)
}

/// Shorthand for a scalar from real/imaginary parts.
pub fn c(re: f64, im: f64) -> Scalar {
    Scalar::new(re, im)
}

/// Shorthand for a purely real scalar.
pub fn re(x: f64) -> Scalar {
    Scalar::new(x, 0.0)
}

pub(crate) fn eq_with(x: Scalar, y: Scalar, tol: Tolerance) -> bool {
    let scale = 1.0_f64.max(x.norm()).max(y.norm());
    (x - y).norm() <= tol.abs.max(tol.rel * scale)
}

/// Tolerance-aware equality: `|x - y| <= max(abs, rel * max(1, |x|, |y|))`.
pub fn scalar_eq(x: Scalar, y: Scalar) -> bool {
    eq_with(x, y, tolerance())
}

/// Tolerance-aware zero test.
pub fn scalar_is_zero(x: Scalar) -> bool {
    scalar_eq(x, Scalar::new(0.0, 0.0))
}

/// True when both components are finite numbers.
pub fn scalar_is_finite(x: Scalar) -> bool {
    x.re.is_finite() && x.im.is_finite()
}

/// Principal square root with signed zeros normalized first, so values that
/// land exactly on the negative real axis (`im = -0.0`) take the upper branch
/// deterministically.
pub fn principal_sqrt(x: Scalar) -> Scalar {
    let re = if x.re == 0.0 { 0.0 } else { x.re };
    let im = if x.im == 0.0 { 0.0 } else { x.im };
    Scalar::new(re, im).sqrt()
}
