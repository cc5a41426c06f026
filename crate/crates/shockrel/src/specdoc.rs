//! Model documents on disk, built-in configurations and CSV output.
//!
//! A spec document is a JSON object whose sections mirror the model
//! ingredients. Unknown keys are rejected rather than ignored, and every
//! numeric constraint is checked at load time. An optional `run` section
//! carries evaluation defaults that flags may override.
//!
//! ```json
//! {
//!   "intensity":   { "family": "constant", "rate": 1.0 },
//!   "fatality":    { "family": "expDecay", "a": 1.0 },
//!   "hazard":      { "family": "null" },
//!   "degradation": { "family": "null" },
//!   "increments":  { "structure": "independent",
//!                    "first":  { "family": "exponential", "rate": 1.0 },
//!                    "second": { "family": "exponential", "rate": 1.0 } },
//!   "threshold": 2.0,
//!   "run": { "method": "auto", "histories": 100000, "seed": 42 }
//! }
//! ```

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    DegradationLaw, FatalityProfile, HazardProfile, IncrementLaw, IntensityProfile, MarginalLaw,
    Method, ModelSpec, ReliabilityEstimate,
};

/// Requested evaluation method, including automatic routing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MethodRequest {
    #[default]
    Auto,
    Mc1,
    Mc2,
    Series,
    Laplace,
}

/// Optional run defaults embedded in a spec document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RunConfig {
    #[serde(default)]
    pub method: MethodRequest,
    /// Either an explicit list of times or a "start:stop:count" string.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_grid: Option<TimeGrid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub histories: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

/// Grid specification: explicit points or an equal-spacing rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TimeGrid {
    Points(Vec<f64>),
    Rule(String),
}

impl TimeGrid {
    pub fn resolve(&self) -> Result<Vec<f64>> {
        match self {
            TimeGrid::Points(p) => {
                if p.is_empty() {
                    return Err(Error::Parse("time grid must not be empty".into()));
                }
                if p.iter().any(|t| *t < 0.0 || !t.is_finite()) {
                    return Err(Error::Parse("time grid entries must be finite and >= 0".into()));
                }
                Ok(p.clone())
            }
            TimeGrid::Rule(rule) => parse_grid_rule(rule),
        }
    }
}

/// Parses "start:stop:count" into an inclusive equally spaced grid.
pub fn parse_grid_rule(rule: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = rule.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Parse(format!(
            "grid rule must look like start:stop:count, got {rule:?}"
        )));
    }
    let start: f64 =
        parts[0].parse().map_err(|_| Error::Parse(format!("bad grid start {:?}", parts[0])))?;
    let stop: f64 =
        parts[1].parse().map_err(|_| Error::Parse(format!("bad grid stop {:?}", parts[1])))?;
    let count: usize =
        parts[2].parse().map_err(|_| Error::Parse(format!("bad grid count {:?}", parts[2])))?;
    if count == 0 {
        return Err(Error::Parse("grid count must be >= 1".into()));
    }
    if !(start.is_finite() && stop.is_finite()) || start < 0.0 || stop < start {
        return Err(Error::Parse(format!("bad grid range [{start}, {stop}]")));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

/// The on-disk document: model ingredients plus optional run defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecDocument {
    pub intensity: IntensityProfile,
    pub fatality: FatalityProfile,
    pub hazard: HazardProfile,
    pub degradation: DegradationLaw,
    pub increments: IncrementLaw,
    pub threshold: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunConfig>,
}

impl SpecDocument {
    pub fn from_spec(spec: &ModelSpec) -> Self {
        Self {
            intensity: spec.intensity.clone(),
            fatality: spec.fatality.clone(),
            hazard: spec.hazard.clone(),
            degradation: spec.degradation.clone(),
            increments: spec.increments.clone(),
            threshold: spec.threshold,
            run: None,
        }
    }

    pub fn into_spec(self) -> Result<(ModelSpec, Option<RunConfig>)> {
        let spec = ModelSpec {
            intensity: self.intensity,
            fatality: self.fatality,
            hazard: self.hazard,
            degradation: self.degradation,
            increments: self.increments,
            threshold: self.threshold,
        };
        spec.validate()?;
        Ok((spec, self.run))
    }
}

/// Parses a document, reporting serde's line/column context on failure.
pub fn parse_spec(text: &str) -> Result<(ModelSpec, Option<RunConfig>)> {
    let doc: SpecDocument =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_spec()
}

/// Serializes a spec back into document form.
pub fn to_json(spec: &ModelSpec) -> String {
    serde_json::to_string_pretty(&SpecDocument::from_spec(spec)).expect("spec serializes")
}

/// One CSV row of a reliability curve.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub t: f64,
    pub value: f64,
    pub lo95: f64,
    pub hi95: f64,
    pub method: Method,
    pub seed: u64,
}

impl CurveRow {
    pub fn from_estimate(est: &ReliabilityEstimate, seed: u64) -> Self {
        let (lo, hi) = est.bounds();
        Self { t: est.t, value: est.value, lo95: lo, hi95: hi, method: est.method, seed }
    }
}

/// Writes curve rows with the fixed header, '.' decimals and one trailing
/// newline per row.
pub fn write_csv<W: Write + ?Sized>(rows: &[CurveRow], out: &mut W) -> Result<()> {
    writeln!(out, "t,value,lo95,hi95,method,seed")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{},{}", r.t, r.value, r.lo95, r.hi95, r.method, r.seed)?;
    }
    Ok(())
}

/// Built-in configurations used by the validation command and the
/// comparison examples.
pub mod builtin {
    use super::*;

    fn exp_marginal(rate: f64) -> MarginalLaw {
        MarginalLaw::Exponential { rate }
    }

    fn common(fatality: FatalityProfile, increments: IncrementLaw, threshold: f64) -> ModelSpec {
        ModelSpec {
            intensity: IntensityProfile::Constant { rate: 1.0 },
            fatality,
            hazard: HazardProfile::Null,
            degradation: DegradationLaw::Null,
            increments,
            threshold,
        }
    }

    /// Decaying fatality-survival, independent unit-exponential increments.
    pub fn validation_row1() -> ModelSpec {
        common(
            FatalityProfile::ExpDecay { a: 1.0 },
            IncrementLaw::Independent { first: exp_marginal(1.0), second: exp_marginal(1.0) },
            2.0,
        )
    }

    /// Constant one-half fatality survival, completely dependent
    /// unit-exponential increments.
    pub fn validation_row2() -> ModelSpec {
        common(
            FatalityProfile::Constant { q: 0.5 },
            IncrementLaw::CompleteDependence { marginal: exp_marginal(1.0) },
            2.0,
        )
    }

    /// Decaying fatality-survival, additive increment dependence.
    pub fn validation_row3() -> ModelSpec {
        common(
            FatalityProfile::ExpDecay { a: 1.0 },
            IncrementLaw::Additive { first: exp_marginal(1.0), extra: exp_marginal(1.0) },
            2.0,
        )
    }

    /// Ageing illustration: the validation_row1 environment.
    pub fn ageing_example() -> ModelSpec {
        validation_row1()
    }

    /// Non-ageing variant: growing fatality survival and a higher
    /// threshold, where old systems outlive new ones for a while.
    pub fn ageing_counterexample() -> ModelSpec {
        ModelSpec {
            fatality: FatalityProfile::ExpGrowth { a: 3.0 },
            threshold: 4.0,
            ..validation_row1()
        }
    }

    /// Dependence comparison: harmless-fatality environment, independent
    /// increments side.
    pub fn dependence_independent() -> ModelSpec {
        common(
            FatalityProfile::Constant { q: 1.0 },
            IncrementLaw::Independent { first: exp_marginal(1.0), second: exp_marginal(1.0) },
            2.0,
        )
    }

    /// Dependence comparison: completely dependent side.
    pub fn dependence_complete() -> ModelSpec {
        common(
            FatalityProfile::Constant { q: 1.0 },
            IncrementLaw::CompleteDependence { marginal: exp_marginal(1.0) },
            2.0,
        )
    }

    /// Intensity comparison base: growing fatality survival, degenerate
    /// hazard increments, with the given shock rate.
    pub fn intensity_example(rate: f64) -> ModelSpec {
        ModelSpec {
            intensity: IntensityProfile::Constant { rate },
            fatality: FatalityProfile::ExpGrowth { a: 1.0 },
            hazard: HazardProfile::Null,
            degradation: DegradationLaw::Null,
            increments: IncrementLaw::Independent {
                first: MarginalLaw::Degenerate { value: 1.0 },
                second: exp_marginal(1.0),
            },
            threshold: 2.0,
        }
    }

    /// All built-ins, for round-trip testing.
    pub fn all() -> Vec<(&'static str, ModelSpec)> {
        vec![
            ("validation_row1", validation_row1()),
            ("validation_row2", validation_row2()),
            ("validation_row3", validation_row3()),
            ("ageing_example", ageing_example()),
            ("ageing_counterexample", ageing_counterexample()),
            ("dependence_independent", dependence_independent()),
            ("dependence_complete", dependence_complete()),
            ("intensity_example_1", intensity_example(1.0)),
            ("intensity_example_2", intensity_example(2.0)),
        ]
    }
}
