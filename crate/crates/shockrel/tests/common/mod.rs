#![allow(dead_code)] // each test binary uses its own slice of the oracles

//! Independent oracles for the integration and acceptance suites.
//!
//! Nothing here shares numerical kernels with the library: quadrature is
//! composite Simpson or dense trapezoid instead of adaptive Gauss-Kronrod,
//! Poisson tails come from a plain product recurrence instead of the
//! log-gamma route, the sampling oracle uses a different generator family
//! and inverse-distribution draws only. Agreement between the two sides is
//! then evidence rather than tautology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use shockrel::model::{FatalityProfile, IncrementLaw, IntensityProfile, MarginalLaw, ModelSpec};

/// One frozen oracle value with enough metadata to recompute it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OracleRecord {
    pub name: String,
    pub inputs: serde_json::Value,
    pub value: f64,
    pub method: String,
    pub tolerance: f64,
}

/// Composite Simpson rule with `2n` panels.
pub fn dense_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let steps = 2 * n;
    let h = (b - a) / steps as f64;
    let mut acc = f(a) + f(b);
    for i in 1..steps {
        let x = a + i as f64 * h;
        acc += if i % 2 == 1 { 4.0 * f(x) } else { 2.0 * f(x) };
    }
    acc * h / 3.0
}

/// Dense trapezoid rule with `n` panels.
pub fn dense_trapezoid<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = 0.5 * (f(a) + f(b));
    for i in 1..n {
        acc += f(a + i as f64 * h);
    }
    acc * h
}

/// Simpson value certified by agreement between two resolutions.
pub fn certified_simpson<F: Fn(f64) -> f64 + Copy>(f: F, a: f64, b: f64) -> f64 {
    let coarse = dense_simpson(f, a, b, 500_000);
    let fine = dense_simpson(f, a, b, 1_000_000);
    assert!(
        (coarse - fine).abs() < 1e-12 * fine.abs().max(1.0),
        "simpson did not self-certify: {coarse} vs {fine}"
    );
    fine
}

/// Real Laplace transform of a marginal law, written out independently.
pub fn marginal_transform(law: &MarginalLaw, s: f64) -> f64 {
    match law {
        MarginalLaw::Degenerate { value } => (-s * value).exp(),
        MarginalLaw::Exponential { rate } => rate / (rate + s),
        MarginalLaw::Gamma { shape, rate } => (rate / (rate + s)).powf(*shape),
    }
}

/// Upper Poisson tail by plain forward summation of the probability mass
/// recurrence; independent of any log-gamma machinery.
pub fn poisson_upper_tail(mean: f64, n: usize) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    // walk the pmf up from zero, then sum the tail
    let mut pmf = (-mean).exp();
    for k in 1..=n + 1 {
        pmf *= mean / k as f64;
    }
    let mut tail = 0.0;
    let mut k = n + 1;
    loop {
        tail += pmf;
        k += 1;
        pmf *= mean / k as f64;
        if pmf < tail * 1e-18 || pmf < 1e-320 {
            break;
        }
    }
    tail
}

/// The double series for the unit-drift special case: for `t <= ell`,
///
/// `R(t) = e^{-lambda t} (1 + sum_{n>=1} c^n/n! sum_{k>=n} e^{-m} m^k/k!)`
///
/// with `c = integral of q lambda over [0, t]` and `m = theta (ell - t)`,
/// both sums carried to relative tails below `tail_tol`.
pub fn example_one_double_series(
    theta: f64,
    lambda: f64,
    q: &FatalityProfile,
    ell: f64,
    t: f64,
    tail_tol: f64,
) -> f64 {
    assert!(t <= ell, "valid for t <= ell");
    let c = dense_simpson(|w| q.nonfatal_prob(w) * lambda, 0.0, t, 500_000);
    let m = theta * (ell - t);
    let mut total = 1.0;
    let mut outer = 1.0;
    for n in 1..5_000usize {
        outer *= c / n as f64;
        // inner tail: pmf of a Poisson(m) from k = n upward
        let mut pmf = (-m).exp();
        for k in 1..=n {
            pmf *= m / k as f64;
        }
        let mut inner = 0.0;
        let mut k = n;
        while pmf > 0.0 {
            inner += pmf;
            k += 1;
            pmf *= m / k as f64;
            if pmf < inner * tail_tol {
                break;
            }
        }
        let term = outer * inner;
        total += term;
        if term < total * tail_tol && n as f64 > c {
            break;
        }
    }
    (-lambda * t).exp() * total
}

/// Survival formula for the single-component reduction (no degradation
/// increments, no intrinsic degradation):
/// `exp(-H(t) - integral_0^t (1 - mu1~(t-w) q(w)) lambda(w) dw)`.
pub fn single_component_survival(spec: &ModelSpec, t: f64) -> f64 {
    let first = match &spec.increments {
        IncrementLaw::Independent { first, .. } => first.clone(),
        IncrementLaw::CompleteDependence { marginal } => marginal.clone(),
        IncrementLaw::Additive { first, .. } => first.clone(),
    };
    let h = match &spec.hazard {
        shockrel::model::HazardProfile::Null => 0.0,
        other => dense_simpson(|x| other.rate(x), 0.0, t, 500_000),
    };
    let integral = dense_simpson(
        |w| {
            (1.0 - marginal_transform(&first, t - w) * spec.fatality.nonfatal_prob(w))
                * spec.intensity.rate(w)
        },
        0.0,
        t,
        500_000,
    );
    (-h - integral).exp()
}

/// Independent high-history estimator of the survival factor mean, in the
/// style of Method 2 but with its own generator family (ChaCha12), its
/// own stream constants and inverse-distribution draws only.
///
/// Supports the laws that invert in closed form: degenerate and
/// exponential marginals, constant intensity, null degradation.
pub fn high_m_phi_estimate(spec: &ModelSpec, t: f64, histories: usize, seed: u64) -> OracleMc {
    let rate = match spec.intensity {
        IntensityProfile::Constant { rate } => rate,
        _ => panic!("sampling oracle handles constant intensity only"),
    };
    assert!(
        matches!(spec.degradation, shockrel::model::DegradationLaw::Null),
        "sampling oracle handles null degradation only"
    );
    let mean_count = rate * t;
    let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x5eed_0123_4567_89ab);
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..histories {
        // Poisson by the product-of-uniforms method
        let limit = (-mean_count).exp();
        let mut n = 0usize;
        let mut prod: f64 = rng.gen();
        while prod > limit {
            n += 1;
            prod *= rng.gen::<f64>();
        }
        let mut v2_total = 0.0;
        let mut hazard_sum = 0.0;
        let mut q_prod = 1.0;
        for _ in 0..n {
            let arrival = t * rng.gen::<f64>();
            let (v1, v2) = sample_increments_inverse(&spec.increments, &mut rng);
            v2_total += v2;
            hazard_sum += v1 * (t - arrival);
            q_prod *= spec.fatality.nonfatal_prob(arrival);
        }
        let weight =
            if v2_total <= spec.threshold { (-hazard_sum).exp() * q_prod } else { 0.0 };
        sum += weight;
        sumsq += weight * weight;
    }
    let m = histories as f64;
    let mean = sum / m;
    let var = ((sumsq - m * mean * mean) / (m - 1.0)).max(0.0);
    OracleMc { estimate: mean, half_width95: 1.96 * (var / m).sqrt(), histories }
}

pub struct OracleMc {
    pub estimate: f64,
    pub half_width95: f64,
    pub histories: usize,
}

impl OracleMc {
    pub fn contains(&self, v: f64) -> bool {
        (self.estimate - v).abs() <= self.half_width95
    }
}

fn inverse_exponential(rate: f64, u: f64) -> f64 {
    -(1.0 - u).ln() / rate
}

fn sample_marginal_inverse<R: Rng>(law: &MarginalLaw, rng: &mut R) -> f64 {
    match law {
        MarginalLaw::Degenerate { value } => *value,
        MarginalLaw::Exponential { rate } => inverse_exponential(*rate, rng.gen()),
        MarginalLaw::Gamma { .. } => panic!("sampling oracle does not draw gamma marginals"),
    }
}

fn sample_increments_inverse<R: Rng>(law: &IncrementLaw, rng: &mut R) -> (f64, f64) {
    match law {
        IncrementLaw::Independent { first, second } => {
            let v1 = sample_marginal_inverse(first, rng);
            let v2 = sample_marginal_inverse(second, rng);
            (v1, v2)
        }
        IncrementLaw::CompleteDependence { marginal } => {
            let v = sample_marginal_inverse(marginal, rng);
            (v, v)
        }
        IncrementLaw::Additive { first, extra } => {
            let v1 = sample_marginal_inverse(first, rng);
            let w2 = sample_marginal_inverse(extra, rng);
            (v1, v1 + w2)
        }
    }
}
