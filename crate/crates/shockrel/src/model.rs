//! Model ingredients: shock intensity, fatality profile, intrinsic hazard,
//! degradation law, increment law, and the assembled [`ModelSpec`].
//!
//! Every profile is an immutable parametric object exposing closed-form
//! evaluation wherever the family allows it and falling back to shared
//! quadrature for tabulated data. All operations are pure, so specs can be
//! shared freely across worker threads.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Distribution;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{self, QuadratureConfig};

/// Piecewise-linear table on ascending knots. Evaluation holds the last
/// value beyond the final knot and the first value before the first knot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<(f64, f64)>", into = "Vec<(f64, f64)>")]
pub struct PiecewiseLinear {
    knots: Vec<(f64, f64)>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Parse("tabulated profile needs at least one knot".into()));
        }
        if knots.iter().any(|&(x, v)| !x.is_finite() || !v.is_finite()) {
            return Err(Error::Parse("tabulated knots must be finite".into()));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Parse(format!(
                    "tabulated knots must have strictly increasing abscissae, got {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(Self { knots })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let k = &self.knots;
        if x <= k[0].0 {
            return k[0].1;
        }
        if x >= k[k.len() - 1].0 {
            return k[k.len() - 1].1;
        }
        let idx = k.partition_point(|&(xi, _)| xi <= x);
        let (x0, y0) = k[idx - 1];
        let (x1, y1) = k[idx];
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.knots.iter().map(|&(_, v)| v)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }
}

impl TryFrom<Vec<(f64, f64)>> for PiecewiseLinear {
    type Error = Error;
    fn try_from(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(knots)
    }
}

impl From<PiecewiseLinear> for Vec<(f64, f64)> {
    fn from(p: PiecewiseLinear) -> Self {
        p.knots
    }
}

/// Monotonicity classification computed from a profile family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Constant,
    NonIncreasing,
    NonDecreasing,
    Neither,
}

impl Monotonicity {
    pub fn is_non_increasing(self) -> bool {
        matches!(self, Monotonicity::Constant | Monotonicity::NonIncreasing)
    }

    pub fn is_non_decreasing(self) -> bool {
        matches!(self, Monotonicity::Constant | Monotonicity::NonDecreasing)
    }
}

fn check_time(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Arrival intensity of the shock process.
///
/// `Power { scale, exponent }` is the Weibull-style rate
/// `scale * exponent * t^(exponent - 1)` whose cumulative is
/// `scale * t^exponent`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase", deny_unknown_fields)]
pub enum IntensityProfile {
    Constant { rate: f64 },
    Power { scale: f64, exponent: f64 },
    Tabulated { knots: PiecewiseLinear },
}

impl IntensityProfile {
    pub fn constant(rate: f64) -> Self {
        IntensityProfile::Constant { rate }
    }

    /// Instantaneous rate at `t >= 0`.
    pub fn rate(&self, t: f64) -> f64 {
        match self {
            IntensityProfile::Constant { rate } => *rate,
            IntensityProfile::Power { scale, exponent } => {
                if t == 0.0 && *exponent < 1.0 {
                    // integrable blow-up at the origin
                    f64::INFINITY
                } else {
                    scale * exponent * t.powf(exponent - 1.0)
                }
            }
            IntensityProfile::Tabulated { knots } => knots.eval(t),
        }
    }

    /// Cumulative arrivals on `[0, t]`.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        match self {
            IntensityProfile::Constant { rate } => Ok(rate * t),
            IntensityProfile::Power { scale, exponent } => Ok(scale * t.powf(*exponent)),
            IntensityProfile::Tabulated { .. } => {
                if t == 0.0 {
                    return Ok(0.0);
                }
                numerics::integrate(|x| self.rate(x), 0.0, t, &QuadratureConfig::default())
            }
        }
    }

    /// Solves `cumulative(x) = y` for `x` in `[0, hi]`.
    pub fn inverse_cumulative(&self, y: f64, hi: f64) -> Result<f64> {
        match self {
            IntensityProfile::Constant { rate } => {
                if *rate <= 0.0 {
                    return Err(Error::Domain("cannot invert a zero intensity".into()));
                }
                Ok(y / rate)
            }
            IntensityProfile::Power { scale, exponent } => {
                if *scale <= 0.0 {
                    return Err(Error::Domain("cannot invert a zero intensity".into()));
                }
                Ok((y / scale).powf(1.0 / exponent))
            }
            IntensityProfile::Tabulated { .. } => {
                numerics::invert_monotone(|x| self.cumulative(x).unwrap_or(f64::NAN), y, 0.0, hi)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            IntensityProfile::Constant { rate } => {
                if *rate < 0.0 || !rate.is_finite() {
                    return Err(Error::Parse(format!("intensity rate must be >= 0, got {rate}")));
                }
            }
            IntensityProfile::Power { scale, exponent } => {
                if *scale < 0.0 || !scale.is_finite() {
                    return Err(Error::Parse(format!("intensity scale must be >= 0, got {scale}")));
                }
                if *exponent <= 0.0 || !exponent.is_finite() {
                    return Err(Error::Parse(format!(
                        "intensity exponent must be > 0, got {exponent}"
                    )));
                }
            }
            IntensityProfile::Tabulated { knots } => {
                if knots.values().any(|v| v < 0.0) {
                    return Err(Error::Parse("tabulated intensity must be non-negative".into()));
                }
            }
        }
        Ok(())
    }
}

/// Probability `q(t)` that a shock arriving at age `t` is harmless.
/// The complementary `p(t) = 1 - q(t)` is the fatality probability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase", deny_unknown_fields)]
pub enum FatalityProfile {
    Constant { q: f64 },
    /// `q(t) = exp(-a t)`: shocks become more dangerous with age.
    ExpDecay { a: f64 },
    /// `q(t) = 1 - exp(-a t)`: early shocks are the dangerous ones.
    ExpGrowth { a: f64 },
    Tabulated { knots: PiecewiseLinear },
}

impl FatalityProfile {
    pub fn constant(q: f64) -> Self {
        FatalityProfile::Constant { q }
    }

    /// Probability that a shock at age `t` is non-fatal.
    pub fn nonfatal_prob(&self, t: f64) -> f64 {
        match self {
            FatalityProfile::Constant { q } => *q,
            FatalityProfile::ExpDecay { a } => (-a * t).exp(),
            FatalityProfile::ExpGrowth { a } => 1.0 - (-a * t).exp(),
            FatalityProfile::Tabulated { knots } => knots.eval(t),
        }
    }

    pub fn fatal_prob(&self, t: f64) -> f64 {
        1.0 - self.nonfatal_prob(t)
    }

    /// Monotonicity of `q`, derived from the family rather than asserted
    /// by the caller.
    pub fn monotonicity(&self) -> Monotonicity {
        match self {
            FatalityProfile::Constant { .. } => Monotonicity::Constant,
            FatalityProfile::ExpDecay { a } => {
                if *a == 0.0 {
                    Monotonicity::Constant
                } else {
                    Monotonicity::NonIncreasing
                }
            }
            FatalityProfile::ExpGrowth { a } => {
                if *a == 0.0 {
                    Monotonicity::Constant
                } else {
                    Monotonicity::NonDecreasing
                }
            }
            FatalityProfile::Tabulated { knots } => {
                let vals: Vec<f64> = knots.values().collect();
                let non_inc = vals.windows(2).all(|w| w[1] <= w[0]);
                let non_dec = vals.windows(2).all(|w| w[1] >= w[0]);
                match (non_inc, non_dec) {
                    (true, true) => Monotonicity::Constant,
                    (true, false) => Monotonicity::NonIncreasing,
                    (false, true) => Monotonicity::NonDecreasing,
                    (false, false) => Monotonicity::Neither,
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            FatalityProfile::Constant { q } => {
                if !(0.0..=1.0).contains(q) {
                    return Err(Error::Parse(format!("fatality q must lie in [0,1], got {q}")));
                }
            }
            FatalityProfile::ExpDecay { a } | FatalityProfile::ExpGrowth { a } => {
                if *a < 0.0 || !a.is_finite() {
                    return Err(Error::Parse(format!("fatality parameter must be >= 0, got {a}")));
                }
            }
            FatalityProfile::Tabulated { knots } => {
                // rejected at load time rather than clamped
                if let Some(v) = knots.values().find(|v| !(0.0..=1.0).contains(v)) {
                    return Err(Error::Parse(format!(
                        "tabulated fatality value {v} outside [0,1]"
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Intrinsic hazard rate of the sudden-failure component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase", deny_unknown_fields)]
pub enum HazardProfile {
    Null,
    Constant { rate: f64 },
    Power { scale: f64, exponent: f64 },
    Tabulated { knots: PiecewiseLinear },
}

impl HazardProfile {
    pub fn rate(&self, t: f64) -> f64 {
        match self {
            HazardProfile::Null => 0.0,
            HazardProfile::Constant { rate } => *rate,
            HazardProfile::Power { scale, exponent } => {
                if t == 0.0 && *exponent < 1.0 {
                    f64::INFINITY
                } else {
                    scale * exponent * t.powf(exponent - 1.0)
                }
            }
            HazardProfile::Tabulated { knots } => knots.eval(t),
        }
    }

    /// Cumulative hazard on `[0, t]`.
    pub fn cumulative(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        match self {
            HazardProfile::Null => Ok(0.0),
            HazardProfile::Constant { rate } => Ok(rate * t),
            HazardProfile::Power { scale, exponent } => Ok(scale * t.powf(*exponent)),
            HazardProfile::Tabulated { .. } => {
                if t == 0.0 {
                    return Ok(0.0);
                }
                numerics::integrate(|x| self.rate(x), 0.0, t, &QuadratureConfig::default())
            }
        }
    }

    pub fn is_null(&self) -> bool {
        match self {
            HazardProfile::Null => true,
            HazardProfile::Constant { rate } => *rate == 0.0,
            _ => false,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            HazardProfile::Null => Ok(()),
            HazardProfile::Constant { rate } => {
                if *rate < 0.0 || !rate.is_finite() {
                    Err(Error::Parse(format!("hazard rate must be >= 0, got {rate}")))
                } else {
                    Ok(())
                }
            }
            HazardProfile::Power { scale, exponent } => {
                if *scale < 0.0 || !scale.is_finite() || *exponent <= 0.0 || !exponent.is_finite() {
                    Err(Error::Parse("hazard power family needs scale >= 0 and exponent > 0".into()))
                } else {
                    Ok(())
                }
            }
            HazardProfile::Tabulated { knots } => {
                if knots.values().any(|v| v < 0.0) {
                    Err(Error::Parse("tabulated hazard must be non-negative".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Intrinsic degradation process of the soft-failure component.
///
/// The gamma family has marginal `Gamma(shape * t, rate)` at time `t`,
/// so paths are non-decreasing in distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase", deny_unknown_fields)]
pub enum DegradationLaw {
    Null,
    Drift { rate: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl DegradationLaw {
    /// Distribution function of the degradation level at time `t`.
    pub fn cdf(&self, t: f64, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        if t == 0.0 {
            return 1.0; // level starts at zero
        }
        match self {
            DegradationLaw::Null => 1.0,
            DegradationLaw::Drift { rate } => {
                if x >= rate * t {
                    1.0
                } else {
                    0.0
                }
            }
            DegradationLaw::Gamma { shape, rate } => {
                numerics::regularized_lower_gamma(shape * t, rate * x)
            }
        }
    }

    /// Laplace transform of the level density at time `t`, evaluated at
    /// complex `s`. For the gamma family this is `(rate/(rate+s))^(shape t)`.
    pub fn density_transform(&self, t: f64, s: Complex64) -> Complex64 {
        match self {
            DegradationLaw::Null => Complex64::new(1.0, 0.0),
            DegradationLaw::Drift { rate } => (-s * (rate * t)).exp(),
            DegradationLaw::Gamma { shape, rate } => {
                let base = Complex64::new(*rate, 0.0) / (Complex64::new(*rate, 0.0) + s);
                base.powf(shape * t)
            }
        }
    }

    /// Draws the degradation level at time `t`.
    pub fn sample<R: Rng + ?Sized>(&self, t: f64, rng: &mut R) -> f64 {
        match self {
            DegradationLaw::Null => 0.0,
            DegradationLaw::Drift { rate } => rate * t,
            DegradationLaw::Gamma { shape, rate } => {
                if t == 0.0 {
                    return 0.0;
                }
                let g = rand_distr::Gamma::new(shape * t, 1.0 / rate)
                    .expect("validated gamma parameters");
                g.sample(rng)
            }
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, DegradationLaw::Null)
    }

    fn validate(&self) -> Result<()> {
        match self {
            DegradationLaw::Null => Ok(()),
            DegradationLaw::Drift { rate } => {
                if *rate < 0.0 || !rate.is_finite() {
                    Err(Error::Parse(format!("degradation drift must be >= 0, got {rate}")))
                } else {
                    Ok(())
                }
            }
            DegradationLaw::Gamma { shape, rate } => {
                if *shape <= 0.0 || *rate <= 0.0 || !shape.is_finite() || !rate.is_finite() {
                    Err(Error::Parse("gamma degradation needs shape > 0 and rate > 0".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Law of one non-negative increment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "camelCase", deny_unknown_fields)]
pub enum MarginalLaw {
    Degenerate { value: f64 },
    Exponential { rate: f64 },
    Gamma { shape: f64, rate: f64 },
}

impl MarginalLaw {
    /// Laplace transform at complex argument `z`.
    pub fn transform(&self, z: Complex64) -> Complex64 {
        match self {
            MarginalLaw::Degenerate { value } => (-z * *value).exp(),
            MarginalLaw::Exponential { rate } => Complex64::new(*rate, 0.0) / (z + rate),
            MarginalLaw::Gamma { shape, rate } => {
                (Complex64::new(*rate, 0.0) / (z + rate)).powf(*shape)
            }
        }
    }

    /// Laplace transform at real argument `s >= 0`.
    pub fn transform_real(&self, s: f64) -> f64 {
        match self {
            MarginalLaw::Degenerate { value } => (-s * value).exp(),
            MarginalLaw::Exponential { rate } => rate / (rate + s),
            MarginalLaw::Gamma { shape, rate } => (rate / (rate + s)).powf(*shape),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            MarginalLaw::Degenerate { value } => *value,
            MarginalLaw::Exponential { rate } => {
                let u: f64 = rng.gen();
                -(1.0 - u).ln() / rate
            }
            MarginalLaw::Gamma { shape, rate } => {
                rand_distr::Gamma::new(*shape, 1.0 / rate)
                    .expect("validated gamma parameters")
                    .sample(rng)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            MarginalLaw::Degenerate { value } => {
                if *value < 0.0 || !value.is_finite() {
                    Err(Error::Parse(format!("degenerate increment must be >= 0, got {value}")))
                } else {
                    Ok(())
                }
            }
            MarginalLaw::Exponential { rate } => {
                if *rate <= 0.0 || !rate.is_finite() {
                    Err(Error::Parse(format!("exponential rate must be > 0, got {rate}")))
                } else {
                    Ok(())
                }
            }
            MarginalLaw::Gamma { shape, rate } => {
                if *shape <= 0.0 || *rate <= 0.0 || !shape.is_finite() || !rate.is_finite() {
                    Err(Error::Parse("gamma increment needs shape > 0 and rate > 0".into()))
                } else {
                    Ok(())
                }
            }
        }
    }
}

/// Joint law of the (hazard, degradation) increment pair of one shock.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "structure", rename_all = "camelCase", deny_unknown_fields)]
pub enum IncrementLaw {
    /// Independent marginals.
    Independent { first: MarginalLaw, second: MarginalLaw },
    /// Both increments equal one draw of `marginal`.
    CompleteDependence { marginal: MarginalLaw },
    /// Second increment is the first plus an independent extra part.
    Additive { first: MarginalLaw, extra: MarginalLaw },
}

impl IncrementLaw {
    /// Joint Laplace transform `E[exp(-u V1 - s V2)]`.
    pub fn bivariate_transform(&self, u: Complex64, s: Complex64) -> Complex64 {
        match self {
            IncrementLaw::Independent { first, second } => first.transform(u) * second.transform(s),
            IncrementLaw::CompleteDependence { marginal } => marginal.transform(u + s),
            IncrementLaw::Additive { first, extra } => first.transform(u + s) * extra.transform(s),
        }
    }

    /// Transform of the hazard-increment marginal.
    pub fn first_transform(&self, u: Complex64) -> Complex64 {
        self.bivariate_transform(u, Complex64::new(0.0, 0.0))
    }

    /// Transform of the degradation-increment marginal.
    pub fn second_transform(&self, s: Complex64) -> Complex64 {
        self.bivariate_transform(Complex64::new(0.0, 0.0), s)
    }

    /// Real-argument transform of the hazard-increment marginal.
    pub fn first_transform_real(&self, u: f64) -> f64 {
        match self {
            IncrementLaw::Independent { first, .. } => first.transform_real(u),
            IncrementLaw::CompleteDependence { marginal } => marginal.transform_real(u),
            IncrementLaw::Additive { first, .. } => first.transform_real(u),
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match self {
            IncrementLaw::Independent { first, second } => {
                let v1 = first.sample(rng);
                let v2 = second.sample(rng);
                (v1, v2)
            }
            IncrementLaw::CompleteDependence { marginal } => {
                let v = marginal.sample(rng);
                (v, v)
            }
            IncrementLaw::Additive { first, extra } => {
                let v1 = first.sample(rng);
                let w2 = extra.sample(rng);
                (v1, v1 + w2)
            }
        }
    }

    pub fn is_independent(&self) -> bool {
        matches!(self, IncrementLaw::Independent { .. })
    }

    /// Degradation-increment marginal when it has one of the supported
    /// closed-form families, `None` otherwise (additive structure mixes
    /// two laws).
    pub fn second_marginal(&self) -> Option<&MarginalLaw> {
        match self {
            IncrementLaw::Independent { second, .. } => Some(second),
            IncrementLaw::CompleteDependence { marginal } => Some(marginal),
            IncrementLaw::Additive { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            IncrementLaw::Independent { first, second } => {
                first.validate()?;
                second.validate()
            }
            IncrementLaw::CompleteDependence { marginal } => marginal.validate(),
            IncrementLaw::Additive { first, extra } => {
                first.validate()?;
                extra.validate()
            }
        }
    }
}

/// Complete description of one system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub intensity: IntensityProfile,
    pub fatality: FatalityProfile,
    pub hazard: HazardProfile,
    pub degradation: DegradationLaw,
    pub increments: IncrementLaw,
    pub threshold: f64,
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        self.intensity.validate()?;
        self.fatality.validate()?;
        self.hazard.validate()?;
        self.degradation.validate()?;
        self.increments.validate()?;
        if self.threshold < 0.0 || !self.threshold.is_finite() {
            return Err(Error::Parse(format!(
                "threshold must be finite and >= 0, got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Which evaluator produced an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Mc1,
    Mc2,
    Series,
    Laplace,
    ClosedForm,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Method::Mc1 => "mc1",
            Method::Mc2 => "mc2",
            Method::Series => "series",
            Method::Laplace => "laplace",
            Method::ClosedForm => "closedform",
        };
        f.write_str(s)
    }
}

/// Error metadata attached to a reliability value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Uncertainty {
    /// Half-width of a 95% confidence interval.
    Ci95(f64),
    /// Deterministic truncation bound (one-sided, value <= truth <= value + bound).
    Bound(f64),
    /// Expected accuracy of a deterministic evaluator.
    ExactToTol(f64),
}

impl Uncertainty {
    /// Symmetric half-width usable for interval arithmetic.
    pub fn half_width(&self) -> f64 {
        match self {
            Uncertainty::Ci95(h) => *h,
            Uncertainty::Bound(b) => *b,
            Uncertainty::ExactToTol(t) => *t,
        }
    }
}

/// One reliability value with method and uncertainty tags.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityEstimate {
    pub t: f64,
    pub value: f64,
    pub method: Method,
    pub uncertainty: Uncertainty,
}

impl ReliabilityEstimate {
    /// Builds an estimate, clipping the point value into `[0, 1]`.
    pub fn new(t: f64, value: f64, method: Method, uncertainty: Uncertainty) -> Self {
        Self { t, value: value.clamp(0.0, 1.0), method, uncertainty }
    }

    /// Interval endpoints clipped to `[0, 1]`.
    pub fn bounds(&self) -> (f64, f64) {
        let h = self.uncertainty.half_width();
        ((self.value - h).clamp(0.0, 1.0), (self.value + h).clamp(0.0, 1.0))
    }
}

/// Assembles the reliability from the cumulative intrinsic hazard and the
/// environment survival factor: every evaluator funnels through here.
pub fn reliability_from_factor(spec: &ModelSpec, t: f64, factor: f64) -> Result<f64> {
    check_time(t)?;
    if !(0.0..=1.0).contains(&factor) {
        return Err(Error::Domain(format!(
            "survival factor must lie in [0,1], got {factor}"
        )));
    }
    Ok((-spec.hazard.cumulative(t)?).exp() * factor)
}
