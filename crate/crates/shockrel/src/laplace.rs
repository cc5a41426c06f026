//! Transform-inversion evaluation of the survival factor (Method 4).
//!
//! The survival factor factorizes in the Laplace domain as the product of
//! the degradation-distribution transform and the transform of the shock
//! measure
//!
//! `nu~_t(s) = exp(-Lambda(t) + integral_0^t q(w) lambda(w) mu~(t-w, s) dw)`,
//!
//! where `mu~` is the joint increment transform. This works for every
//! dependence structure, which is the route's main selling point. The
//! shock measure carries a point mass `e^{-Lambda(t)}` at zero (the
//! no-surviving-shock event); the inversion splits that mass off in closed
//! form and inverts only the continuous remainder, which keeps jump
//! artifacts out of the numerical step.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{
    DegradationLaw, IncrementLaw, Method, ModelSpec, ReliabilityEstimate, Uncertainty,
};
use crate::numerics::{
    self, harmless_shock_mass, laplace_invert, regularized_lower_gamma, InversionConfig,
    QuadratureConfig,
};

/// Laplace transform of the shock measure at complex `s` with
/// `Re(s) >= 0` (and analytically continued left of the axis on the
/// inversion contours).
///
/// Independent increment pairs short-circuit through the harmless-shock
/// mass: `nu~ = exp(-Lambda + a(t) mu2~(s))`.
pub fn shock_measure_transform(spec: &ModelSpec, t: f64, s: Complex64) -> Result<Complex64> {
    let lambda_t = spec.intensity.cumulative(t)?;
    if let IncrementLaw::Independent { second, .. } = &spec.increments {
        let a = harmless_shock_mass(spec, t)?;
        return Ok((Complex64::new(-lambda_t, 0.0) + second.transform(s) * a).exp());
    }
    let exponent = if t == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        numerics::integrate_complex(
            |w| {
                spec.increments.bivariate_transform(Complex64::new(t - w, 0.0), s)
                    * (spec.fatality.nonfatal_prob(w) * spec.intensity.rate(w))
            },
            0.0,
            t,
            &QuadratureConfig::default(),
        )?
    };
    Ok((Complex64::new(-lambda_t, 0.0) + exponent).exp())
}

/// Laplace transform of the degradation distribution function,
/// `integral_0^inf e^{-s w} F(w) dw`, in closed form per family.
pub fn degradation_cdf_transform(d: &DegradationLaw, t: f64, s: Complex64) -> Result<Complex64> {
    if s.norm() == 0.0 {
        return Err(Error::Domain(
            "distribution-function transform diverges at s = 0".into(),
        ));
    }
    Ok(d.density_transform(t, s) / s)
}

/// Transform of the survival factor in the threshold variable.
pub fn survival_factor_transform(spec: &ModelSpec, t: f64, s: Complex64) -> Result<Complex64> {
    Ok(degradation_cdf_transform(&spec.degradation, t, s)? * shock_measure_transform(spec, t, s)?)
}

/// Picks the inversion scheme suited to the degradation family: Euler for
/// the indicator-type families whose originals carry jumps, fixed Talbot
/// for the smooth gamma-process family.
pub fn inversion_for(degradation: &DegradationLaw) -> InversionConfig {
    match degradation {
        DegradationLaw::Null | DegradationLaw::Drift { .. } => InversionConfig::euler(40),
        DegradationLaw::Gamma { .. } => InversionConfig::fixed_talbot(64),
    }
}

/// Method-4 reliability: inverts the survival-factor transform at the
/// threshold and assembles with the intrinsic-hazard factor.
pub fn reliability_laplace(
    spec: &ModelSpec,
    t: f64,
    ell: f64,
    cfg: &InversionConfig,
) -> Result<ReliabilityEstimate> {
    if ell.is_nan() || ell <= 0.0 {
        return Err(Error::Domain(format!("threshold must be > 0, got {ell}")));
    }
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let lambda_t = spec.intensity.cumulative(t)?;
    let atom = (-lambda_t).exp();
    // evaluate just off the jump that the drift family puts at drift * t
    let mut ell_eval = ell;
    if let DegradationLaw::Drift { rate } = spec.degradation {
        if (ell - rate * t).abs() < 1e-9 {
            ell_eval = ell + 1e-9;
        }
    }
    // point mass of the shock measure handled in closed form; the
    // remainder transform decays and has a continuous original
    let ac_phi = laplace_invert(
        |s| {
            let nu = shock_measure_transform(spec, t, s)?;
            Ok(spec.degradation.density_transform(t, s) * (nu - atom) / s)
        },
        ell_eval,
        cfg,
    )?;
    let factor = (atom * spec.degradation.cdf(t, ell) + ac_phi).clamp(0.0, 1.0);
    let value = crate::model::reliability_from_factor(spec, t, factor)?;
    Ok(ReliabilityEstimate::new(t, value, Method::Laplace, Uncertainty::ExactToTol(cfg.accuracy())))
}

/// Closed form for constant `q` and `lambda`, no intrinsic hazard or
/// degradation, and completely dependent exponential increments. Valid on
/// `t < theta` where the generalized binomial series converges:
///
/// `R(t) = e^{-lambda t} (1 + sum_{n>=0} C(q lambda theta, n+1) (t/theta)^{n+1} F_{n+1}(ell))`
///
/// with `F_k` the gamma distribution function with shape `k` and rate
/// `theta`. Binomial coefficients are carried as sign plus log magnitude.
pub fn complete_dependence_closed_form(
    theta: f64,
    lambda: f64,
    q: f64,
    ell: f64,
    t: f64,
) -> Result<f64> {
    if t.is_nan() || t >= theta {
        return Err(Error::Domain(format!(
            "binomial series requires t < theta, got t = {t}, theta = {theta}"
        )));
    }
    if theta <= 0.0 || lambda < 0.0 || !(0.0..=1.0).contains(&q) || ell < 0.0 || t < 0.0 {
        return Err(Error::Domain("invalid closed-form parameters".into()));
    }
    let x = q * lambda * theta;
    let log_ratio = (t / theta).ln();
    let mut total = 1.0;
    // binom(x, k) tracked as (sign, ln |binom|), advanced by
    // binom(x, k+1) = binom(x, k) (x - k) / (k + 1)
    let mut sign = 1.0f64;
    let mut log_mag = 0.0f64; // binom(x, 0) = 1
    let mut small_streak = 0;
    for n in 0..10_000usize {
        let k = n as f64;
        let step = x - k;
        if step == 0.0 {
            break; // integer x: the series terminates
        }
        sign *= step.signum();
        log_mag += step.abs().ln() - (k + 1.0).ln();
        let gamma_cdf = regularized_lower_gamma(k + 1.0, theta * ell);
        let term = sign * (log_mag + (k + 1.0) * log_ratio).exp() * gamma_cdf;
        total += term;
        if term.abs() < 1e-14 * total.abs() {
            small_streak += 1;
            // alternating-tail guard: two consecutive negligible terms
            if small_streak >= 2 {
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    Ok(((-lambda * t).exp() * total).clamp(0.0, 1.0))
}
