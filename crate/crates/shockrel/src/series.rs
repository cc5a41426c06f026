//! Truncated-series evaluation of the survival factor (Method 3).
//!
//! For independent increment pairs the factor expands as
//! `phi = e^{-Lambda(t)} sum_n Q_n(t, L) a(t)^n / n!` where `Q_n` is the
//! probability that the degradation level plus `n` shock increments stays
//! below the threshold and `a(t)` is the harmless-shock mass. Partial sums
//! increase towards the limit, and the tail is bounded by
//! `e^{-(Lambda - a)} P(Poisson(a) > N)`, so any requested precision can
//! be certified.

use crate::error::{Error, Result};
use crate::model::{
    DegradationLaw, MarginalLaw, Method, ModelSpec, ReliabilityEstimate, Uncertainty,
};
use crate::numerics::{
    self, harmless_shock_mass, ln_gamma, regularized_lower_gamma, QuadratureConfig,
};

/// Ceiling on the truncation index before the series is declared
/// pathological.
const MAX_TERMS: usize = 10_000;

/// A certified partial sum of the survival-factor series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesResult {
    /// The partial sum: a lower bound for the survival factor.
    pub value: f64,
    /// Tail bound: the factor lies in `[value, value + truncation_bound]`.
    pub truncation_bound: f64,
    /// Number of terms used (the partial sum runs over `0..=terms_used`).
    pub terms_used: usize,
}

fn independent_second_marginal(spec: &ModelSpec) -> Result<&MarginalLaw> {
    match &spec.increments {
        crate::model::IncrementLaw::Independent { second, .. } => Ok(second),
        other => Err(Error::Capability(format!(
            "series evaluation needs independent increment pairs, got {other:?}; \
             use the transform or Monte Carlo route instead"
        ))),
    }
}

/// `Q_n(t, L)`: probability that the intrinsic degradation at `t` plus the
/// sum of `n` independent shock increments stays at or below `ell`.
///
/// The sum of `n` increments has a closed-form law for every supported
/// marginal family (a point mass, or a gamma law), so a single quadrature
/// against the degradation distribution suffices.
pub fn below_threshold_given_shocks(
    spec: &ModelSpec,
    t: f64,
    ell: f64,
    n: usize,
) -> Result<f64> {
    let second = independent_second_marginal(spec)?;
    if n == 0 {
        return Ok(spec.degradation.cdf(t, ell));
    }
    if ell < 0.0 {
        return Ok(0.0);
    }
    match second {
        MarginalLaw::Degenerate { value } => Ok(spec.degradation.cdf(t, ell - n as f64 * value)),
        MarginalLaw::Exponential { rate } => {
            sum_against_gamma(spec, t, ell, n as f64, *rate)
        }
        MarginalLaw::Gamma { shape, rate } => {
            sum_against_gamma(spec, t, ell, n as f64 * shape, *rate)
        }
    }
}

/// `E[F_degradation(ell - S)]` where `S` is gamma with the given shape and
/// rate. Indicator-type degradation laws reduce to the gamma distribution
/// function; the gamma-process law needs one quadrature.
fn sum_against_gamma(spec: &ModelSpec, t: f64, ell: f64, shape: f64, rate: f64) -> Result<f64> {
    match &spec.degradation {
        DegradationLaw::Null => Ok(regularized_lower_gamma(shape, rate * ell)),
        DegradationLaw::Drift { rate: drift } => {
            let room = ell - drift * t;
            if room < 0.0 {
                Ok(0.0)
            } else {
                Ok(regularized_lower_gamma(shape, rate * room))
            }
        }
        DegradationLaw::Gamma { .. } => {
            if ell == 0.0 {
                return Ok(0.0);
            }
            let log_norm = shape * rate.ln() - ln_gamma(shape);
            let density = move |x: f64| {
                (log_norm + (shape - 1.0) * x.ln() - rate * x).exp()
            };
            let cfg = QuadratureConfig::default();
            numerics::integrate(|x| spec.degradation.cdf(t, ell - x) * density(x), 0.0, ell, &cfg)
        }
    }
}

/// Upper Poisson tail `P(Y > n)` for `Y ~ Poisson(mean)`, computed by the
/// complemented cumulative sum in log space so small tails keep full
/// relative accuracy.
pub fn poisson_tail(mean: f64, n: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    // first tail term, then upward recurrence
    let k0 = n + 1;
    let log_term = k0 as f64 * mean.ln() - mean - ln_gamma(k0 as f64 + 1.0);
    let mut term = log_term.exp();
    let mut sum = 0.0;
    let mut k = k0;
    loop {
        sum += term;
        k += 1;
        term *= mean / k as f64;
        if term < sum * 1e-18 || term < 1e-320 {
            break;
        }
    }
    sum.min(1.0)
}

fn tail_bound(lambda_t: f64, a: f64, n: usize) -> f64 {
    (-(lambda_t - a)).exp() * poisson_tail(a, n)
}

/// Partial sum with a fixed truncation index `terms`.
pub fn survival_factor_partial(
    spec: &ModelSpec,
    t: f64,
    ell: f64,
    terms: usize,
) -> Result<SeriesResult> {
    let _ = independent_second_marginal(spec)?;
    if t == 0.0 {
        return Ok(SeriesResult {
            value: spec.degradation.cdf(0.0, ell),
            truncation_bound: 0.0,
            terms_used: 0,
        });
    }
    let lambda_t = spec.intensity.cumulative(t)?;
    if lambda_t <= 0.0 {
        return Err(Error::Capability(
            "series evaluation needs a positive cumulative intensity".into(),
        ));
    }
    let a = harmless_shock_mass(spec, t)?;
    let mut value = 0.0;
    for n in 0..=terms {
        let weight = if n == 0 {
            (-lambda_t).exp()
        } else {
            (n as f64 * a.ln() - lambda_t - ln_gamma(n as f64 + 1.0)).exp()
        };
        if weight == 0.0 && n > 0 {
            break;
        }
        value += below_threshold_given_shocks(spec, t, ell, n)? * weight;
    }
    Ok(SeriesResult { value, truncation_bound: tail_bound(lambda_t, a, terms), terms_used: terms })
}

/// Sums the series with the smallest truncation index whose tail bound
/// meets `tol`.
pub fn survival_factor_series(
    spec: &ModelSpec,
    t: f64,
    ell: f64,
    tol: f64,
) -> Result<SeriesResult> {
    let _ = independent_second_marginal(spec)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if t == 0.0 {
        return Ok(SeriesResult {
            value: spec.degradation.cdf(0.0, ell),
            truncation_bound: 0.0,
            terms_used: 0,
        });
    }
    let lambda_t = spec.intensity.cumulative(t)?;
    if lambda_t <= 0.0 {
        return Err(Error::Capability(
            "series evaluation needs a positive cumulative intensity".into(),
        ));
    }
    let a = harmless_shock_mass(spec, t)?;
    let mut terms = None;
    for n in 0..=MAX_TERMS {
        if tail_bound(lambda_t, a, n) <= tol {
            terms = Some(n);
            break;
        }
    }
    let Some(terms) = terms else {
        return Err(Error::Truncation(format!(
            "tail bound still {} after {MAX_TERMS} terms",
            tail_bound(lambda_t, a, MAX_TERMS)
        )));
    };
    survival_factor_partial(spec, t, ell, terms)
}

/// Method-3 reliability with the truncation bound as uncertainty.
pub fn reliability_series(spec: &ModelSpec, t: f64, tol: f64) -> Result<ReliabilityEstimate> {
    let s = survival_factor_series(spec, t, spec.threshold, tol)?;
    let value = crate::model::reliability_from_factor(spec, t, s.value.clamp(0.0, 1.0))?;
    Ok(ReliabilityEstimate::new(t, value, Method::Series, Uncertainty::Bound(s.truncation_bound)))
}

/// Closed form for the special case of unit-drift degradation, no hazard
/// increments and exponential degradation increments: for `t <= ell`,
///
/// `R(t) = e^{-Lambda(t)} (1 + sum_{n>=1} c^n/n! * P(Poisson(theta (ell - t)) >= n))`
///
/// with `c` the integral of `q * lambda` over `[0, t]`. Inner and outer
/// sums are truncated at relative tails below 1e-12.
pub fn drift_threshold_closed_form(
    theta: f64,
    lambda: f64,
    fatality: &crate::model::FatalityProfile,
    ell: f64,
    t: f64,
) -> Result<f64> {
    if t > ell {
        return Err(Error::Domain(format!(
            "closed form is valid for t <= threshold, got t = {t}, threshold = {ell}"
        )));
    }
    if theta <= 0.0 || lambda < 0.0 {
        return Err(Error::Domain("need theta > 0 and lambda >= 0".into()));
    }
    let c = numerics::integrate(
        |w| fatality.nonfatal_prob(w) * lambda,
        0.0,
        t,
        &QuadratureConfig::default(),
    )?;
    let m = theta * (ell - t);
    let mut total = 1.0;
    let mut outer = 1.0; // c^n / n!
    for n in 1..=MAX_TERMS {
        outer *= c / n as f64;
        // P(Poisson(m) >= n) summed explicitly from k = n upward
        let mut inner_term = (n as f64 * m.ln() - m - ln_gamma(n as f64 + 1.0)).exp();
        if m == 0.0 {
            inner_term = 0.0;
        }
        let mut inner = 0.0;
        let mut k = n;
        while inner_term > 0.0 {
            inner += inner_term;
            k += 1;
            inner_term *= m / k as f64;
            if inner_term < inner * 1e-16 {
                break;
            }
        }
        let term = outer * inner;
        total += term;
        // terms grow until n passes c, so only stop beyond the peak
        if term < total * 1e-12 && n as f64 > c {
            break;
        }
    }
    Ok((-lambda * t).exp() * total)
}
