//! Monte Carlo evaluators.
//!
//! Method 1 simulates full system trajectories: degradation level, shock
//! arrivals, fatality draws, increment pairs and the sudden-failure
//! lifetime, then averages the Bernoulli survival indicator. Method 2
//! simulates only the shock environment and averages the conditional
//! survival weight, which has strictly smaller variance.
//!
//! Reproducibility contract: the randomness of history `i` under root seed
//! `s` comes exclusively from the `(s, i)` substream, and partial sums are
//! combined in a fixed pairwise tree over fixed-size chunks. Estimates are
//! therefore bit-identical for any worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{HazardProfile, Method, ModelSpec, ReliabilityEstimate, Uncertainty};

/// Address of one reproducible random substream.
///
/// Distinct `(root_seed, stream_index)` pairs yield independent sequences;
/// the same pair yields the same sequence on every run and thread schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub root_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(root_seed: u64, stream_index: u64) -> Self {
        Self { root_seed, stream_index }
    }

    /// Instantiates the generator for this substream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.root_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// One sampled shock environment on `[0, t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShockHistory {
    /// Strictly increasing arrival times.
    pub times: Vec<f64>,
    /// Increment pairs (hazard part, degradation part).
    pub increments: Vec<(f64, f64)>,
    /// Bernoulli outcomes per shock: `true` = non-fatal.
    pub nonfatal: Vec<bool>,
}

impl ShockHistory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn all_nonfatal(&self) -> bool {
        self.nonfatal.iter().all(|&z| z)
    }

    pub fn total_degradation_increment(&self) -> f64 {
        self.increments.iter().map(|p| p.1).sum()
    }
}

/// A Monte Carlo mean with its 95% confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub estimate: f64,
    pub half_width95: f64,
    pub histories: usize,
    pub seed: u64,
}

impl McResult {
    pub fn ci(&self) -> (f64, f64) {
        (self.estimate - self.half_width95, self.estimate + self.half_width95)
    }

    pub fn contains(&self, value: f64) -> bool {
        let (lo, hi) = self.ci();
        lo <= value && value <= hi
    }
}

fn check_horizon(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::Domain(format!("horizon must be finite and >= 0, got {t}")));
    }
    Ok(())
}

/// Samples shock count, ordered arrival times, fatality outcomes and
/// increment pairs on `[0, t]`. A vanishing cumulative intensity yields an
/// empty history.
pub fn sample_shock_history(spec: &ModelSpec, t: f64, stream: &RngStream) -> Result<ShockHistory> {
    let mut rng = stream.rng();
    draw_history(spec, t, &mut rng)
}

fn draw_history(spec: &ModelSpec, t: f64, rng: &mut ChaCha8Rng) -> Result<ShockHistory> {
    check_horizon(t)?;
    let total = spec.intensity.cumulative(t)?;
    if total <= 0.0 {
        return Ok(ShockHistory { times: vec![], increments: vec![], nonfatal: vec![] });
    }
    let n = rand_distr::Poisson::new(total)
        .map_err(|e| Error::Domain(format!("invalid Poisson mean {total}: {e}")))?
        .sample(rng) as usize;
    // conditionally on the count, arrival times are order statistics of
    // draws with density rate/total, sampled by inverting the cumulative
    let mut times = Vec::with_capacity(n);
    for _ in 0..n {
        let u: f64 = rng.gen();
        times.push(spec.intensity.inverse_cumulative(u * total, t)?);
    }
    times.sort_unstable_by(f64::total_cmp);
    let nonfatal: Vec<bool> =
        times.iter().map(|&ti| rng.gen::<f64>() < spec.fatality.nonfatal_prob(ti)).collect();
    let increments: Vec<(f64, f64)> = (0..n).map(|_| spec.increments.sample(rng)).collect();
    Ok(ShockHistory { times, increments, nonfatal })
}

/// Total accumulated hazard on `[0, s]`: the intrinsic part plus the
/// shock-driven part `sum_{T_i <= s} V_i (s - T_i)`.
fn total_hazard(hazard: &HazardProfile, hist: &ShockHistory, s: f64) -> Result<f64> {
    let mut acc = hazard.cumulative(s)?;
    for (i, &ti) in hist.times.iter().enumerate() {
        if ti > s {
            break;
        }
        acc += hist.increments[i].0 * (s - ti);
    }
    Ok(acc)
}

/// Samples the sudden-failure lifetime conditionally on the given shock
/// history, returning `f64::INFINITY` when the total hazard accumulated on
/// `[0, horizon]` never reaches the drawn exponential level (the lifetime
/// is censored beyond the horizon and never materialized).
pub fn sample_sudden_lifetime(
    hazard: &HazardProfile,
    hist: &ShockHistory,
    horizon: f64,
    stream: &RngStream,
) -> Result<f64> {
    let mut rng = stream.rng();
    let u: f64 = rng.gen();
    lifetime_at_level(hazard, hist, horizon, -(1.0 - u).ln())
}

/// Deterministic inner step: inverts `s -> H(s) + kappa(s)` at `level`.
fn lifetime_at_level(
    hazard: &HazardProfile,
    hist: &ShockHistory,
    horizon: f64,
    level: f64,
) -> Result<f64> {
    check_horizon(horizon)?;
    if total_hazard(hazard, hist, horizon)? < level {
        return Ok(f64::INFINITY);
    }
    // walk the inter-shock intervals; within each one the shock part is
    // linear with slope = sum of hazard increments seen so far
    let mut boundaries: Vec<f64> = Vec::with_capacity(hist.len() + 2);
    boundaries.push(0.0);
    for &ti in &hist.times {
        if ti < horizon {
            boundaries.push(ti);
        }
    }
    boundaries.push(horizon);
    let mut slope = 0.0;
    let mut shock_at_left = 0.0;
    let mut shock_index = 0;
    for w in boundaries.windows(2) {
        let (left, right) = (w[0], w[1]);
        while shock_index < hist.len() && hist.times[shock_index] <= left {
            slope += hist.increments[shock_index].0;
            shock_at_left += hist.increments[shock_index].0 * (left - hist.times[shock_index]);
            shock_index += 1;
        }
        let at_right = hazard.cumulative(right)? + shock_at_left + slope * (right - left);
        if at_right < level {
            shock_at_left += slope * (right - left);
            continue;
        }
        let base_left = hazard.cumulative(left)? + shock_at_left;
        return match hazard {
            HazardProfile::Null => {
                if slope <= 0.0 {
                    Ok(left)
                } else {
                    Ok(left + (level - base_left) / slope)
                }
            }
            HazardProfile::Constant { rate } => {
                let total_slope = rate + slope;
                if total_slope <= 0.0 {
                    Ok(left)
                } else {
                    Ok(left + (level - base_left) / total_slope)
                }
            }
            _ => {
                let shock_left = shock_at_left;
                crate::numerics::invert_monotone(
                    |s| {
                        hazard.cumulative(s).unwrap_or(f64::NAN)
                            + shock_left
                            + slope * (s - left)
                    },
                    level,
                    left,
                    right,
                )
            }
        };
    }
    Ok(f64::INFINITY)
}

const CHUNK: usize = 4096;

fn pairwise(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n => {
            let mid = n / 2;
            pairwise(&values[..mid]) + pairwise(&values[mid..])
        }
    }
}

/// Runs `m` independent histories, each driven only by its own substream,
/// and reduces (sum, sum of squares) in a deterministic pairwise tree.
fn run_histories<F>(m: usize, seed: u64, per_history: F) -> Result<(f64, f64)>
where
    F: Fn(&mut ChaCha8Rng) -> Result<f64> + Sync,
{
    let chunks = m.div_ceil(CHUNK);
    let partials: Vec<Result<(f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = ((c + 1) * CHUNK).min(m);
            let mut sum = 0.0;
            let mut sumsq = 0.0;
            for i in lo..hi {
                let mut rng = RngStream::new(seed, i as u64).rng();
                let v = per_history(&mut rng)?;
                sum += v;
                sumsq += v * v;
            }
            Ok((sum, sumsq))
        })
        .collect();
    let mut sums = Vec::with_capacity(chunks);
    let mut sumsqs = Vec::with_capacity(chunks);
    for p in partials {
        let (s, s2) = p?;
        sums.push(s);
        sumsqs.push(s2);
    }
    Ok((pairwise(&sums), pairwise(&sumsqs)))
}

/// Full-trajectory estimator of the reliability at `t` (Method 1).
///
/// Each history draws the degradation level, a shock history and, when the
/// system is still in the game, the sudden-failure lifetime; the output is
/// the average of Bernoulli survival indicators with the binomial 95%
/// confidence half-width.
pub fn estimate_reliability_mc1(
    spec: &ModelSpec,
    t: f64,
    histories: usize,
    seed: u64,
) -> Result<McResult> {
    check_horizon(t)?;
    if histories < 100 {
        return Err(Error::Input(format!("need at least 100 histories, got {histories}")));
    }
    let (sum, _) = run_histories(histories, seed, |rng| {
        let g = spec.degradation.sample(t, rng);
        let hist = draw_history(spec, t, rng)?;
        if !hist.all_nonfatal() {
            return Ok(0.0);
        }
        if g + hist.total_degradation_increment() > spec.threshold {
            return Ok(0.0);
        }
        let u: f64 = rng.gen();
        let level = -(1.0 - u).ln();
        let y = lifetime_at_level(&spec.hazard, &hist, t, level)?;
        Ok(if y > t { 1.0 } else { 0.0 })
    })?;
    let m = histories as f64;
    let p = sum / m;
    let half = 1.96 * (p * (1.0 - p) / m).sqrt();
    Ok(McResult { estimate: p, half_width95: half, histories, seed })
}

/// Shock-environment estimator of the survival factor at `t` (Method 2).
///
/// Averages the conditional survival weight
/// `F(L - sum V2) * exp(-sum V1 (t - T_i)) * prod q(T_i)` over sampled
/// histories; the confidence interval uses the sample standard deviation
/// since the weights are not Bernoulli.
pub fn estimate_phi_mc2(spec: &ModelSpec, t: f64, histories: usize, seed: u64) -> Result<McResult> {
    check_horizon(t)?;
    if histories < 100 {
        return Err(Error::Input(format!("need at least 100 histories, got {histories}")));
    }
    let (sum, sumsq) = run_histories(histories, seed, |rng| {
        let hist = draw_history(spec, t, rng)?;
        let mut v2_total = 0.0;
        let mut hazard_sum = 0.0;
        let mut q_prod = 1.0;
        for (i, &ti) in hist.times.iter().enumerate() {
            v2_total += hist.increments[i].1;
            hazard_sum += hist.increments[i].0 * (t - ti);
            q_prod *= spec.fatality.nonfatal_prob(ti);
        }
        Ok(spec.degradation.cdf(t, spec.threshold - v2_total) * (-hazard_sum).exp() * q_prod)
    })?;
    let m = histories as f64;
    let mean = sum / m;
    let var = ((sumsq - m * mean * mean) / (m - 1.0)).max(0.0);
    let half = 1.96 * (var / m).sqrt();
    Ok(McResult { estimate: mean, half_width95: half, histories, seed })
}

/// Method-1 reliability as a tagged estimate.
pub fn reliability_mc1(
    spec: &ModelSpec,
    t: f64,
    histories: usize,
    seed: u64,
) -> Result<ReliabilityEstimate> {
    let r = estimate_reliability_mc1(spec, t, histories, seed)?;
    Ok(ReliabilityEstimate::new(t, r.estimate, Method::Mc1, Uncertainty::Ci95(r.half_width95)))
}

/// Method-2 reliability: the survival-factor mean assembled with the
/// intrinsic-hazard factor. The confidence width scales with the same
/// factor.
pub fn reliability_mc2(
    spec: &ModelSpec,
    t: f64,
    histories: usize,
    seed: u64,
) -> Result<ReliabilityEstimate> {
    let r = estimate_phi_mc2(spec, t, histories, seed)?;
    let scale = (-spec.hazard.cumulative(t)?).exp();
    let value = crate::model::reliability_from_factor(spec, t, r.estimate.clamp(0.0, 1.0))?;
    Ok(ReliabilityEstimate::new(
        t,
        value,
        Method::Mc2,
        Uncertainty::Ci95(scale * r.half_width95),
    ))
}
