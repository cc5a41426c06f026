//! Shared numerical kernels: adaptive Gauss-Kronrod quadrature (real and
//! complex integrands), bracketed inversion of monotone functions, the
//! regularized incomplete gamma function, the harmless-shock convolution,
//! and numerical Laplace-transform inversion.

mod gamma;
mod inversion;
mod quadrature;

pub use gamma::{gamma_cdf, ln_gamma, regularized_lower_gamma};
pub use inversion::{laplace_invert, InversionAlgorithm, InversionConfig};
pub use quadrature::{integrate, integrate_complex, QuadratureConfig};

use crate::error::{Error, Result};
use crate::model::ModelSpec;

/// Solves `g(x) = y` for a non-decreasing `g` on `[lo, hi]` by a bisection
/// and secant hybrid. The returned `x` satisfies
/// `|g(x) - y| <= 1e-12 * max(1, |y|)` or brackets the root to machine width.
pub fn invert_monotone<F: Fn(f64) -> f64>(g: F, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let tol = 1e-12 * y.abs().max(1.0);
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (g(a), g(b));
    if !(fa - tol <= y && y <= fb + tol) {
        return Err(Error::Bracket { target: y, lo_value: fa, hi_value: fb });
    }
    if (fa - y).abs() <= tol {
        return Ok(a);
    }
    if (fb - y).abs() <= tol {
        return Ok(b);
    }
    let mut ga = fa;
    let mut gb = fb;
    for _ in 0..200 {
        // secant proposal, clipped away from the bracket edges
        let mut x = if gb > ga {
            a + (y - ga) / (gb - ga) * (b - a)
        } else {
            0.5 * (a + b)
        };
        let width = b - a;
        if !(x > a + 0.01 * width && x < b - 0.01 * width) {
            x = 0.5 * (a + b);
        }
        let gx = g(x);
        if (gx - y).abs() <= tol || width <= f64::EPSILON * (a.abs() + b.abs() + 1.0) {
            return Ok(x);
        }
        if gx < y {
            a = x;
            ga = gx;
        } else {
            b = x;
            gb = gx;
        }
    }
    Ok(0.5 * (a + b))
}

/// Convolution of the hazard-increment transform with the harmless shock
/// rate: `a(t) = integral_0^t mu1~(z) q(t-z) lambda(t-z) dz`.
///
/// This is the effective mass of shocks that are harmless and whose hazard
/// contribution has been discounted; it always satisfies
/// `0 <= a(t) <= Lambda(t)`.
pub fn harmless_shock_mass(spec: &ModelSpec, t: f64) -> Result<f64> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let f = |z: f64| {
        spec.increments.first_transform_real(z)
            * spec.fatality.nonfatal_prob(t - z)
            * spec.intensity.rate(t - z)
    };
    integrate(f, 0.0, t, &QuadratureConfig::default())
}
