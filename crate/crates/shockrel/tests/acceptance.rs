//! Acceptance suite: one test per release criterion, each printing a
//! pass line with the measured quantities. Run with `--nocapture` to see
//! the lines for passing criteria too.

mod common;

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shockrel::analysis::{
    check_nbu, compare_dependence, compare_fatality, compare_intensity, Evaluator, Relation,
};
use shockrel::laplace::{
    complete_dependence_closed_form, inversion_for, reliability_laplace,
};
use shockrel::model::{
    DegradationLaw, FatalityProfile, IncrementLaw, IntensityProfile, MarginalLaw, ModelSpec,
};
use shockrel::montecarlo::{estimate_phi_mc2, estimate_reliability_mc1, reliability_mc2};
use shockrel::series::{
    drift_threshold_closed_form, reliability_series, survival_factor_partial,
    survival_factor_series,
};
use shockrel::specdoc::builtin;

const SEED: u64 = 123_456_789;

#[test]
fn criterion_01_validation_row1_all_methods() {
    let start = Instant::now();
    let spec = builtin::validation_row1();
    let reference = 0.5198;

    let series = reliability_series(&spec, 1.0, 1e-8).unwrap();
    assert!(
        (series.value - reference).abs() <= 5e-4,
        "series {} vs {reference}",
        series.value
    );

    let laplace =
        reliability_laplace(&spec, 1.0, spec.threshold, &inversion_for(&spec.degradation))
            .unwrap();
    assert!(
        (laplace.value - reference).abs() <= 5e-4,
        "inversion {} vs {reference}",
        laplace.value
    );

    let mc1 = estimate_reliability_mc1(&spec, 1.0, 100_000, SEED).unwrap();
    assert!(mc1.contains(reference), "method 1 CI {:?} misses {reference}", mc1.ci());
    let mc2 = estimate_phi_mc2(&spec, 1.0, 100_000, SEED).unwrap();
    assert!(mc2.contains(reference), "method 2 CI {:?} misses {reference}", mc2.ci());

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "row 1 evaluations took {elapsed:?}");
    println!(
        "criterion 01: PASS (series {:.4}, inversion {:.4}, mc1 {:.4}, mc2 {:.4}, {:?})",
        series.value, laplace.value, mc1.estimate, mc2.estimate, elapsed
    );
}

#[test]
fn criterion_02_validation_row2_complete_dependence() {
    let spec = builtin::validation_row2();
    let reference = 0.5054;

    let laplace =
        reliability_laplace(&spec, 1.0, spec.threshold, &inversion_for(&spec.degradation))
            .unwrap();
    assert!(
        (laplace.value - reference).abs() <= 5e-4,
        "inversion {} vs {reference}",
        laplace.value
    );

    let mc1 = estimate_reliability_mc1(&spec, 1.0, 100_000, SEED).unwrap();
    assert!(mc1.contains(reference), "method 1 CI {:?} misses {reference}", mc1.ci());
    let mc2 = estimate_phi_mc2(&spec, 1.0, 100_000, SEED).unwrap();
    assert!(mc2.contains(reference), "method 2 CI {:?} misses {reference}", mc2.ci());
    println!(
        "criterion 02: PASS (inversion {:.4}, mc1 {:.4}, mc2 {:.4})",
        laplace.value, mc1.estimate, mc2.estimate
    );
}

#[test]
fn criterion_03_validation_row3_additive_dependence() {
    let spec = builtin::validation_row3();
    let mc1 = estimate_reliability_mc1(&spec, 1.0, 100_000, SEED).unwrap();
    let mc2 = estimate_phi_mc2(&spec, 1.0, 100_000, SEED).unwrap();
    let (lo1, hi1) = mc1.ci();
    let (lo2, hi2) = mc2.ci();
    assert!(lo1.max(lo2) <= hi1.min(hi2), "intervals do not overlap: {:?} {:?}", mc1.ci(), mc2.ci());

    let oracle = common::high_m_phi_estimate(&spec, 1.0, 10_000_000, 20_240_901);
    assert!(
        oracle.half_width95 < 5e-4,
        "oracle half-width {} should be near 3e-4",
        oracle.half_width95
    );
    // the published Monte Carlo estimates round to about 0.481
    assert!((oracle.estimate - 0.481).abs() < 2e-3, "oracle {}", oracle.estimate);
    assert!(
        mc1.contains(oracle.estimate),
        "method 1 CI {:?} misses oracle {}",
        mc1.ci(),
        oracle.estimate
    );
    assert!(
        mc2.contains(oracle.estimate),
        "method 2 CI {:?} misses oracle {}",
        mc2.ci(),
        oracle.estimate
    );
    println!(
        "criterion 03: PASS (mc1 {:.4}, mc2 {:.4}, oracle {:.4} +/- {:.1e})",
        mc1.estimate, mc2.estimate, oracle.estimate, oracle.half_width95
    );
}

fn random_independent_spec(rng: &mut ChaCha8Rng) -> ModelSpec {
    let marginal = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => MarginalLaw::Degenerate { value: rng.gen_range(0.0..1.5) },
        1 => MarginalLaw::Exponential { rate: rng.gen_range(0.4..3.0) },
        _ => MarginalLaw::Gamma { shape: rng.gen_range(0.5..3.0), rate: rng.gen_range(0.4..3.0) },
    };
    let fatality = match rng.gen_range(0..3) {
        0 => FatalityProfile::Constant { q: rng.gen_range(0.0..=1.0) },
        1 => FatalityProfile::ExpDecay { a: rng.gen_range(0.0..2.0) },
        _ => FatalityProfile::ExpGrowth { a: rng.gen_range(0.0..2.0) },
    };
    let degradation = match rng.gen_range(0..3) {
        0 => DegradationLaw::Null,
        1 => DegradationLaw::Drift { rate: rng.gen_range(0.0..0.8) },
        _ => DegradationLaw::Gamma {
            shape: rng.gen_range(0.3..2.0),
            rate: rng.gen_range(0.5..3.0),
        },
    };
    ModelSpec {
        intensity: IntensityProfile::Constant { rate: rng.gen_range(0.5..=2.0) },
        fatality,
        hazard: shockrel::model::HazardProfile::Null,
        degradation,
        increments: IncrementLaw::Independent { first: marginal(rng), second: marginal(rng) },
        threshold: rng.gen_range(0.5..4.0),
    }
}

#[test]
fn criterion_04_truncation_bound_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut max_bound_gap: f64 = 0.0;
    for case in 0..20 {
        let spec = random_independent_spec(&mut rng);
        let t = rng.gen_range(0.05..=2.0);
        let partial = survival_factor_series(&spec, t, spec.threshold, 1e-6)
            .unwrap_or_else(|e| panic!("case {case}: {e}"));
        let n = partial.terms_used;
        let extended = survival_factor_partial(&spec, t, spec.threshold, n + 5).unwrap();
        assert!(
            partial.value <= extended.value + 1e-14,
            "case {case}: partial sums must increase ({} then {})",
            partial.value,
            extended.value
        );
        assert!(
            extended.value <= partial.value + partial.truncation_bound + 1e-14,
            "case {case}: bound violated ({} + {} < {})",
            partial.value,
            partial.truncation_bound,
            extended.value
        );

        // independent tail computation
        let lambda_t = spec.intensity.cumulative(t).unwrap();
        let first = match &spec.increments {
            IncrementLaw::Independent { first, .. } => first.clone(),
            _ => unreachable!(),
        };
        let a = common::dense_simpson(
            |z| {
                common::marginal_transform(&first, z)
                    * spec.fatality.nonfatal_prob(t - z)
                    * spec.intensity.rate(t - z)
            },
            0.0,
            t,
            500_000,
        );
        let independent_bound = (-(lambda_t - a)).exp() * common::poisson_upper_tail(a, n);
        let gap = (partial.truncation_bound - independent_bound).abs();
        max_bound_gap = max_bound_gap.max(gap);
        assert!(
            gap <= 1e-14,
            "case {case}: bound {} vs independent tail {independent_bound}",
            partial.truncation_bound
        );
    }
    println!("criterion 04: PASS (20 random specs, worst tail-bound gap {max_bound_gap:.2e})");
}

#[test]
fn criterion_05_special_case_reduction() {
    // unit-drift degradation, inert hazard increments, exponential
    // degradation increments
    let (theta, lambda, q, ell, t) = (1.0, 1.0, 0.5, 2.0, 1.0);
    let spec = ModelSpec {
        intensity: IntensityProfile::Constant { rate: lambda },
        fatality: FatalityProfile::Constant { q },
        hazard: shockrel::model::HazardProfile::Null,
        degradation: DegradationLaw::Drift { rate: 1.0 },
        increments: IncrementLaw::Independent {
            first: MarginalLaw::Degenerate { value: 0.0 },
            second: MarginalLaw::Exponential { rate: theta },
        },
        threshold: ell,
    };
    let oracle = common::example_one_double_series(
        theta,
        lambda,
        &FatalityProfile::Constant { q },
        ell,
        t,
        1e-14,
    );
    let series = reliability_series(&spec, t, 1e-10).unwrap();
    assert!(
        (series.value - oracle).abs() <= 1e-8,
        "series {} vs oracle {oracle}",
        series.value
    );
    let closed =
        drift_threshold_closed_form(theta, lambda, &FatalityProfile::Constant { q }, ell, t)
            .unwrap();
    assert!((closed - oracle).abs() <= 1e-8, "closed form {closed} vs oracle {oracle}");
    assert!((closed - series.value).abs() <= 1e-8);
    println!(
        "criterion 05: PASS (oracle {oracle:.10}, series {:.10}, closed form {closed:.10})",
        series.value
    );
}

#[test]
fn criterion_06_complete_dependence_closed_form() {
    let (theta, lambda, q, ell) = (2.0, 1.0, 0.5, 2.0);
    let spec = ModelSpec {
        intensity: IntensityProfile::Constant { rate: lambda },
        fatality: FatalityProfile::Constant { q },
        hazard: shockrel::model::HazardProfile::Null,
        degradation: DegradationLaw::Null,
        increments: IncrementLaw::CompleteDependence {
            marginal: MarginalLaw::Exponential { rate: theta },
        },
        threshold: ell,
    };
    let mut worst: f64 = 0.0;
    for &t in &[0.25, 0.5, 0.9] {
        let closed = complete_dependence_closed_form(theta, lambda, q, ell, t).unwrap();
        let inverted =
            reliability_laplace(&spec, t, ell, &inversion_for(&spec.degradation)).unwrap();
        let gap = (closed - inverted.value).abs();
        worst = worst.max(gap);
        assert!(gap <= 1e-5, "t = {t}: closed {closed} vs inverted {}", inverted.value);
    }
    println!("criterion 06: PASS (worst closed-form vs inversion gap {worst:.2e})");
}

#[test]
fn criterion_07_ageing_verdicts() {
    let grid = [0.25, 0.5, 1.0, 2.0];
    let eval = Evaluator::with_seed(SEED);

    let ageing = builtin::ageing_example();
    let v = check_nbu(&ageing, &grid, &grid, &eval, false).unwrap();
    assert!(v.pass, "ageing example should pass, worst violation {:?}", v.worst);

    let counter = builtin::ageing_counterexample();
    let w = check_nbu(&counter, &grid, &grid, &eval, true).unwrap();
    assert!(
        !w.pass,
        "counterexample should violate the inequality, worst violation {:?}",
        w.worst
    );
    assert!(w.worst.violation > 0.0);
    println!(
        "criterion 07: PASS (example worst {:.4} at ({}, {}); counterexample worst +{:.4} at ({}, {}))",
        v.worst.violation, v.worst.s, v.worst.t, w.worst.violation, w.worst.s, w.worst.t
    );
}

#[test]
fn criterion_08_monotonicity_verdicts() {
    let eval = Evaluator::with_seed(SEED);
    let grid: Vec<f64> = (1..=13).map(|i| i as f64 * 3.0 / 13.0).collect();

    let base = ModelSpec {
        fatality: FatalityProfile::Constant { q: 0.3 },
        ..builtin::validation_row1()
    };
    let fat =
        compare_fatality(&base, &FatalityProfile::Constant { q: 0.7 }, &grid, &eval).unwrap();
    assert_eq!(fat.relation, Relation::Dominated, "fatality comparison");

    let dep = compare_dependence(
        &builtin::dependence_independent(),
        &builtin::dependence_complete(),
        &grid,
        &eval,
    )
    .unwrap();
    assert_eq!(dep.relation, Relation::Dominated, "dependence comparison");

    let intens = compare_intensity(
        &builtin::intensity_example(2.0),
        &IntensityProfile::Constant { rate: 1.0 },
        &grid,
        &eval,
    )
    .unwrap();
    assert_eq!(intens.relation, Relation::Dominated, "intensity comparison");
    println!("criterion 08: PASS (fatality, dependence and intensity orderings all confirmed)");
}

#[test]
fn criterion_09_reports_reproducible_across_runs_and_workers() {
    let bin = env!("CARGO_BIN_EXE_shockrel");
    let run = |workers: &str| {
        let out = Command::new(bin)
            .args(["validate", "--seed", "77", "--workers", workers])
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "validate failed: {}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let first = run("1");
    let second = run("1");
    assert_eq!(first, second, "same worker count must give identical bytes");
    let eight = run("8");
    assert_eq!(first, eight, "1 vs 8 workers must give identical bytes");
    println!("criterion 09: PASS ({} identical report bytes)", first.len());
}

#[test]
fn criterion_10_qualitative_figure_claims() {
    // the plotted curves themselves are not recoverable from the text;
    // their qualitative content (reliability decays in time, orderings
    // as in criteria 7 and 8) is what gets checked
    let eval = Evaluator::with_seed(SEED);
    for spec in [builtin::dependence_independent(), builtin::dependence_complete()] {
        let mut prev = 1.0 + 1e-9;
        for i in 1..=6 {
            let t = 0.5 * i as f64;
            let r = eval.reliability(&spec, t).unwrap();
            assert!(
                r.value <= prev + 1e-6,
                "reliability should decay along the curve, got {} after {prev}",
                r.value
            );
            prev = r.value;
        }
    }
    println!("criterion 10: PASS (curve decay verified; pixel data out of reach by construction)");
}

#[test]
fn mc_methods_agree_on_all_validation_rows() {
    // the two Monte Carlo routes estimate the same quantity; their 95%
    // intervals must overlap on every validation configuration
    for (name, spec) in [
        ("row1", builtin::validation_row1()),
        ("row2", builtin::validation_row2()),
        ("row3", builtin::validation_row3()),
    ] {
        let mc1 = estimate_reliability_mc1(&spec, 1.0, 100_000, SEED).unwrap();
        let mc2 = reliability_mc2(&spec, 1.0, 100_000, SEED).unwrap();
        let (lo1, hi1) = mc1.ci();
        let (lo2, hi2) = mc2.bounds();
        assert!(
            lo1.max(lo2) <= hi1.min(hi2),
            "{name}: [{lo1}, {hi1}] vs [{lo2}, {hi2}]"
        );
    }
}
