//! Empirical verification harness for ageing and stochastic-comparison
//! properties of the system lifetime.
//!
//! Every check evaluates reliabilities on a time grid with the most
//! accurate applicable method and issues a verdict that respects the
//! per-point uncertainty: a relation is only claimed where the intervals
//! actually separate. The decision rule is 95% interval separation per
//! point with no multiplicity correction; this is a reproduction harness,
//! not a hypothesis-testing product.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::laplace::{inversion_for, reliability_laplace};
use crate::model::{
    FatalityProfile, HazardProfile, IntensityProfile, ModelSpec, ReliabilityEstimate,
};
use crate::montecarlo::{reliability_mc2, RngStream};
use crate::series::reliability_series;

/// Root seed used when the caller does not pin one.
pub const DEFAULT_SEED: u64 = 123_456_789;

/// Default number of Monte Carlo histories.
pub const DEFAULT_HISTORIES: usize = 100_000;

/// Method selection for the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    /// Series when the increments are independent, transform inversion
    /// otherwise, Monte Carlo as the last resort.
    Auto,
    Series,
    Laplace,
    Mc2,
}

/// Bundles method choice and precision knobs for grid evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluator {
    pub method: MethodChoice,
    pub tol: f64,
    pub histories: usize,
    pub seed: u64,
}

impl Default for Evaluator {
    fn default() -> Self {
        Self { method: MethodChoice::Auto, tol: 1e-8, histories: DEFAULT_HISTORIES, seed: DEFAULT_SEED }
    }
}

impl Evaluator {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// Evaluates the reliability at `t` by the configured route.
    pub fn reliability(&self, spec: &ModelSpec, t: f64) -> Result<ReliabilityEstimate> {
        match self.method {
            MethodChoice::Series => reliability_series(spec, t, self.tol),
            MethodChoice::Laplace => {
                reliability_laplace(spec, t, spec.threshold, &inversion_for(&spec.degradation))
            }
            MethodChoice::Mc2 => reliability_mc2(spec, t, self.histories, self.seed),
            MethodChoice::Auto => {
                let series_capable = spec.increments.is_independent()
                    && (t == 0.0 || spec.intensity.cumulative(t)? > 0.0);
                if series_capable {
                    return reliability_series(spec, t, self.tol);
                }
                if spec.threshold > 0.0 {
                    return reliability_laplace(
                        spec,
                        t,
                        spec.threshold,
                        &inversion_for(&spec.degradation),
                    );
                }
                reliability_mc2(spec, t, self.histories, self.seed)
            }
        }
    }
}

/// Grid used by comparisons unless the caller supplies one.
pub fn default_grid() -> Vec<f64> {
    (1..=13).map(|i| i as f64 * 3.0 / 13.0).collect()
}

/// Outcome of a grid comparison between two lifetimes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Left reliability separates above the right somewhere, never below.
    Dominates,
    /// Left reliability separates below the right somewhere, never above.
    Dominated,
    /// No interval-separated difference anywhere on the grid.
    Indistinguishable,
    /// Interval-separated differences in both directions.
    Crossing,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Relation::Dominates => "dominates",
            Relation::Dominated => "dominated",
            Relation::Indistinguishable => "indistinguishable",
            Relation::Crossing => "crossing",
        };
        f.write_str(s)
    }
}

/// One grid point of a comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct GridComparison {
    pub t: f64,
    pub lhs: ReliabilityEstimate,
    pub rhs: ReliabilityEstimate,
}

/// Verdict of a two-sided lifetime comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonVerdict {
    pub relation: Relation,
    pub grid: Vec<GridComparison>,
    /// Human-readable description of the decision rule applied.
    pub confidence: String,
}

fn classify(grid: &[GridComparison]) -> Relation {
    let mut above = false;
    let mut below = false;
    for point in grid {
        let (l_lo, l_hi) = point.lhs.bounds();
        let (r_lo, r_hi) = point.rhs.bounds();
        if l_lo > r_hi {
            above = true;
        }
        if r_lo > l_hi {
            below = true;
        }
    }
    match (above, below) {
        (true, true) => Relation::Crossing,
        (true, false) => Relation::Dominates,
        (false, true) => Relation::Dominated,
        (false, false) => Relation::Indistinguishable,
    }
}

fn compare_on_grid(
    lhs: &ModelSpec,
    rhs: &ModelSpec,
    grid: &[f64],
    eval: &Evaluator,
) -> Result<ComparisonVerdict> {
    let points: Vec<Result<GridComparison>> = grid
        .par_iter()
        .map(|&t| {
            Ok(GridComparison { t, lhs: eval.reliability(lhs, t)?, rhs: eval.reliability(rhs, t)? })
        })
        .collect();
    let grid: Vec<GridComparison> = points.into_iter().collect::<Result<_>>()?;
    let relation = classify(&grid);
    Ok(ComparisonVerdict {
        relation,
        grid,
        confidence: "per-point 95% interval separation, no multiplicity correction".into(),
    })
}

fn require_same_except(
    base: &ModelSpec,
    other: &ModelSpec,
    ignore_fatality: bool,
    ignore_increments: bool,
    ignore_intensity: bool,
) -> Result<()> {
    if !ignore_intensity && base.intensity != other.intensity {
        return Err(Error::Input("specs differ in intensity".into()));
    }
    if !ignore_fatality && base.fatality != other.fatality {
        return Err(Error::Input("specs differ in fatality profile".into()));
    }
    if base.hazard != other.hazard {
        return Err(Error::Input("specs differ in intrinsic hazard".into()));
    }
    if base.degradation != other.degradation {
        return Err(Error::Input("specs differ in degradation law".into()));
    }
    if !ignore_increments && base.increments != other.increments {
        return Err(Error::Input("specs differ in increment law".into()));
    }
    if base.threshold != other.threshold {
        return Err(Error::Input("specs differ in threshold".into()));
    }
    Ok(())
}

/// Compares the base lifetime against the same system with fatality
/// profile `q_tilde`. Requires `q <= q_tilde` pointwise (checked on a
/// dense mesh); the lifetime can then only improve, so the expected
/// verdict is `Dominated` or `Indistinguishable`.
pub fn compare_fatality(
    base: &ModelSpec,
    q_tilde: &FatalityProfile,
    grid: &[f64],
    eval: &Evaluator,
) -> Result<ComparisonVerdict> {
    let horizon = grid.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let mesh = 400;
    for i in 0..=mesh {
        let w = horizon * i as f64 / mesh as f64;
        let q = base.fatality.nonfatal_prob(w);
        let qt = q_tilde.nonfatal_prob(w);
        if q > qt + 1e-12 {
            return Err(Error::Hypothesis(format!(
                "q({w}) = {q} exceeds q~({w}) = {qt}; pointwise q <= q~ is required"
            )));
        }
    }
    let tilde = ModelSpec { fatality: q_tilde.clone(), ..base.clone() };
    compare_on_grid(base, &tilde, grid, eval)
}

/// Compares an independent-increment system against one with a more
/// dependent increment law but identical marginals. More dependence can
/// only lengthen the lifetime, so the expected verdict is `Dominated`.
///
/// Preconditions checked here: the marginal transforms agree, and the
/// joint survival of the dependent law dominates the independent one on a
/// sampled mesh (the upper-orthant form of the ordering), estimated by
/// Monte Carlo.
pub fn compare_dependence(
    indep: &ModelSpec,
    dep: &ModelSpec,
    grid: &[f64],
    eval: &Evaluator,
) -> Result<ComparisonVerdict> {
    require_same_except(indep, dep, false, true, false)?;
    for &s in &[0.25f64, 0.5, 1.0, 2.0, 4.0] {
        let u = num_complex::Complex64::new(s, 0.0);
        let f1 = indep.increments.first_transform(u).re;
        let f2 = dep.increments.first_transform(u).re;
        if (f1 - f2).abs() > 1e-10 {
            return Err(Error::Input(format!(
                "hazard-increment marginals differ: transform {f1} vs {f2} at s = {s}"
            )));
        }
        let g1 = indep.increments.second_transform(u).re;
        let g2 = dep.increments.second_transform(u).re;
        if (g1 - g2).abs() > 1e-10 {
            return Err(Error::Input(format!(
                "degradation-increment marginals differ: transform {g1} vs {g2} at s = {s}"
            )));
        }
    }
    check_orthant_dominance(indep, dep)?;
    compare_on_grid(indep, dep, grid, eval)
}

/// Monte Carlo check of joint-survival dominance on a small mesh.
fn check_orthant_dominance(indep: &ModelSpec, dep: &ModelSpec) -> Result<()> {
    let n = 200_000usize;
    let mesh = [0.3, 0.8, 1.5];
    let mut rng_a = RngStream::new(0x0dda11ce, 0).rng();
    let mut rng_b = RngStream::new(0x0dda11ce, 1).rng();
    let samples_a: Vec<(f64, f64)> = (0..n).map(|_| indep.increments.sample(&mut rng_a)).collect();
    let samples_b: Vec<(f64, f64)> = (0..n).map(|_| dep.increments.sample(&mut rng_b)).collect();
    for &x1 in &mesh {
        for &x2 in &mesh {
            let p_a = samples_a.iter().filter(|&&(a, b)| a > x1 && b > x2).count() as f64 / n as f64;
            let p_b = samples_b.iter().filter(|&&(a, b)| a > x1 && b > x2).count() as f64 / n as f64;
            let se = ((p_a * (1.0 - p_a) + p_b * (1.0 - p_b)) / n as f64).sqrt();
            if p_a > p_b + 3.0 * se + 1e-9 {
                return Err(Error::Hypothesis(format!(
                    "joint survival at ({x1}, {x2}) is {p_a} for the independent law but {p_b} \
                     for the dependent one; orthant dominance fails"
                )));
            }
        }
    }
    Ok(())
}

/// Compares the base lifetime against the same system with intensity
/// `lambda_tilde`. Requires the base cumulative intensity to dominate the
/// alternative and a non-decreasing fatality-survival profile; fewer
/// shocks can then only lengthen the lifetime (`Dominated` expected).
pub fn compare_intensity(
    base: &ModelSpec,
    lambda_tilde: &IntensityProfile,
    grid: &[f64],
    eval: &Evaluator,
) -> Result<ComparisonVerdict> {
    if !base.fatality.monotonicity().is_non_decreasing() {
        return Err(Error::Hypothesis(
            "the intensity comparison requires a non-decreasing q; with a decreasing q the \
             ordering of shock counts does not transfer to lifetimes"
                .into(),
        ));
    }
    probe_intensity(base, lambda_tilde, grid, eval)
}

/// The same grid comparison without the monotone-q hypothesis. The open
/// probe: its verdict is reported, never asserted.
pub fn probe_intensity(
    base: &ModelSpec,
    lambda_tilde: &IntensityProfile,
    grid: &[f64],
    eval: &Evaluator,
) -> Result<ComparisonVerdict> {
    let horizon = grid.iter().cloned().fold(0.0f64, f64::max).max(1.0);
    let mesh = 200;
    for i in 1..=mesh {
        let w = horizon * i as f64 / mesh as f64;
        let big = base.intensity.cumulative(w)?;
        let small = lambda_tilde.cumulative(w)?;
        if big + 1e-12 < small {
            return Err(Error::Hypothesis(format!(
                "cumulative intensity of the base model ({big}) lies below the alternative \
                 ({small}) at t = {w}"
            )));
        }
    }
    let tilde = ModelSpec { intensity: lambda_tilde.clone(), ..base.clone() };
    compare_on_grid(base, &tilde, grid, eval)
}

/// One grid pair of the ageing check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NbuPoint {
    pub s: f64,
    pub t: f64,
    /// `R(s+t) - R(s) R(t)`: positive values are violations.
    pub violation: f64,
    /// Combined interval half-width at this pair.
    pub tolerance: f64,
}

/// Verdict of the new-better-than-used check.
#[derive(Debug, Clone, PartialEq)]
pub struct NbuVerdict {
    pub grid: Vec<NbuPoint>,
    pub worst: NbuPoint,
    /// True when no grid pair violates the inequality beyond its interval.
    pub pass: bool,
}

fn hazard_superadditive(h: &HazardProfile) -> bool {
    match h {
        HazardProfile::Null | HazardProfile::Constant { .. } => true,
        HazardProfile::Power { exponent, .. } => *exponent >= 1.0,
        HazardProfile::Tabulated { .. } => {
            let total = |x: f64| h.cumulative(x).unwrap_or(f64::NAN);
            let mut ok = true;
            for i in 1..=8 {
                for j in 1..=8 {
                    let (x, y) = (0.4 * i as f64, 0.4 * j as f64);
                    if total(x + y) + 1e-10 < total(x) + total(y) {
                        ok = false;
                    }
                }
            }
            ok
        }
    }
}

fn intensity_superadditive(p: &IntensityProfile) -> bool {
    match p {
        IntensityProfile::Constant { .. } => true,
        IntensityProfile::Power { exponent, .. } => *exponent >= 1.0,
        IntensityProfile::Tabulated { .. } => {
            let total = |x: f64| p.cumulative(x).unwrap_or(f64::NAN);
            let mut ok = true;
            for i in 1..=8 {
                for j in 1..=8 {
                    let (x, y) = (0.4 * i as f64, 0.4 * j as f64);
                    if total(x + y) + 1e-10 < total(x) + total(y) {
                        ok = false;
                    }
                }
            }
            ok
        }
    }
}

/// Checks whether the spec satisfies a sufficient condition for the
/// lifetime to be new-better-than-used. Returns the reason when it does
/// not.
pub fn nbu_hypothesis(spec: &ModelSpec) -> std::result::Result<(), String> {
    if !hazard_superadditive(&spec.hazard) {
        return Err("the intrinsic cumulative hazard is not superadditive".into());
    }
    let mono = spec.fatality.monotonicity();
    let cond1 = mono.is_non_increasing()
        && matches!(spec.intensity, IntensityProfile::Constant { .. });
    let cond2 = mono == crate::model::Monotonicity::Constant
        && intensity_superadditive(&spec.intensity);
    if cond1 || cond2 {
        Ok(())
    } else {
        Err("needs either (non-increasing q, constant intensity) or (constant q, superadditive \
             cumulative intensity)"
            .into())
    }
}

/// Evaluates `R(s+t) <= R(s) R(t)` over the grid of `(s, t)` pairs.
///
/// Unless `allow_probe` is set, the spec must satisfy one of the
/// sufficient ageing conditions; probing deliberately outside them is how
/// the non-ageing configurations are demonstrated.
pub fn check_nbu(
    spec: &ModelSpec,
    s_grid: &[f64],
    t_grid: &[f64],
    eval: &Evaluator,
    allow_probe: bool,
) -> Result<NbuVerdict> {
    if !allow_probe {
        nbu_hypothesis(spec).map_err(Error::Hypothesis)?;
    }
    // evaluate each needed time once
    let mut times: Vec<f64> = Vec::new();
    for &s in s_grid {
        times.push(s);
        for &t in t_grid {
            times.push(t);
            times.push(s + t);
        }
    }
    times.sort_unstable_by(f64::total_cmp);
    times.dedup();
    let values: Vec<Result<ReliabilityEstimate>> =
        times.par_iter().map(|&t| eval.reliability(spec, t)).collect();
    let values: Vec<ReliabilityEstimate> = values.into_iter().collect::<Result<_>>()?;
    let lookup = |x: f64| -> &ReliabilityEstimate {
        let idx = times.partition_point(|&v| v < x);
        &values[idx]
    };
    let mut grid = Vec::with_capacity(s_grid.len() * t_grid.len());
    for &s in s_grid {
        for &t in t_grid {
            let r_st = lookup(s + t);
            let r_s = lookup(s);
            let r_t = lookup(t);
            let violation = r_st.value - r_s.value * r_t.value;
            let u_st = r_st.uncertainty.half_width();
            let u_s = r_s.uncertainty.half_width();
            let u_t = r_t.uncertainty.half_width();
            let tolerance = u_st + r_s.value * u_t + r_t.value * u_s + u_s * u_t;
            grid.push(NbuPoint { s, t, violation, tolerance });
        }
    }
    let worst = *grid
        .iter()
        .max_by(|a, b| a.violation.total_cmp(&b.violation))
        .expect("grids are non-empty");
    let pass = grid.iter().all(|p| p.violation <= p.tolerance);
    Ok(NbuVerdict { grid, worst, pass })
}
