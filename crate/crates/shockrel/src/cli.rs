//! Command implementations behind the binary: reliability curves, the
//! validation table and lifetime comparisons.
//!
//! Exit codes: 0 success, 1 usage or parse problems, 2 capability or
//! hypothesis problems, 3 validation or comparison failures.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::analysis::{
    check_nbu, compare_dependence, compare_fatality, compare_intensity, ComparisonVerdict,
    Evaluator, MethodChoice, Relation, DEFAULT_HISTORIES, DEFAULT_SEED,
};
use crate::error::{Error, Result};
use crate::laplace::{inversion_for, reliability_laplace};
use crate::model::{ModelSpec, ReliabilityEstimate};
use crate::montecarlo::{reliability_mc1, reliability_mc2};
use crate::series::reliability_series;
use crate::specdoc::{
    self, builtin, parse_grid_rule, CurveRow, MethodRequest, RunConfig, TimeGrid,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAPABILITY: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

/// Environment variable that overrides a seed from the spec file; the
/// `--seed` flag overrides both.
pub const SEED_ENV_VAR: &str = "SHOCKREL_SEED";

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Capability(_)
        | Error::Hypothesis(_)
        | Error::Convergence { .. }
        | Error::Truncation(_)
        | Error::Inversion(_)
        | Error::Bracket { .. } => EXIT_CAPABILITY,
        _ => EXIT_USAGE,
    }
}

/// Flag-level options shared by the commands.
#[derive(Debug, Clone, Default)]
pub struct CommonOpts {
    pub grid: Option<String>,
    pub histories: Option<usize>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub out: Option<std::path::PathBuf>,
}

struct ResolvedRun {
    grid: Vec<f64>,
    histories: usize,
    seed: u64,
    tol: f64,
}

/// Seed precedence: flag, then environment, then spec file, then default.
fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    if let Ok(text) = std::env::var(SEED_ENV_VAR) {
        return text
            .parse()
            .map_err(|_| Error::Parse(format!("{SEED_ENV_VAR} must be an integer, got {text:?}")));
    }
    Ok(file.unwrap_or(DEFAULT_SEED))
}

fn resolve_run(opts: &CommonOpts, run: Option<&RunConfig>) -> Result<ResolvedRun> {
    let grid = if let Some(rule) = &opts.grid {
        parse_grid_rule(rule)?
    } else if let Some(tg) = run.and_then(|r| r.time_grid.as_ref()) {
        tg.resolve()?
    } else {
        TimeGrid::Rule("0:3:61".into()).resolve()?
    };
    if grid.is_empty() {
        return Err(Error::Parse("time grid must not be empty".into()));
    }
    Ok(ResolvedRun {
        grid,
        histories: opts.histories.or(run.and_then(|r| r.histories)).unwrap_or(DEFAULT_HISTORIES),
        seed: resolve_seed(opts.seed, run.and_then(|r| r.seed))?,
        tol: opts.tol.or(run.and_then(|r| r.tolerance)).unwrap_or(1e-8),
    })
}

fn load_spec(path: &Path) -> Result<(ModelSpec, Option<RunConfig>)> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    specdoc::parse_spec(&text)
}

fn with_output<F>(out: Option<&Path>, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    match out {
        Some(path) => {
            let mut f = fs::File::create(path)?;
            body(&mut f)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock)
        }
    }
}

fn evaluate(
    spec: &ModelSpec,
    t: f64,
    method: MethodRequest,
    run: &ResolvedRun,
) -> Result<ReliabilityEstimate> {
    match method {
        MethodRequest::Mc1 => reliability_mc1(spec, t, run.histories, run.seed),
        MethodRequest::Mc2 => reliability_mc2(spec, t, run.histories, run.seed),
        MethodRequest::Series => reliability_series(spec, t, run.tol),
        MethodRequest::Laplace => {
            reliability_laplace(spec, t, spec.threshold, &inversion_for(&spec.degradation))
        }
        MethodRequest::Auto => {
            let eval = Evaluator {
                method: MethodChoice::Auto,
                tol: run.tol,
                histories: run.histories,
                seed: run.seed,
            };
            eval.reliability(spec, t)
        }
    }
}

/// Computes a reliability curve and writes it as CSV.
pub fn cmd_reliability(spec_path: &Path, method: MethodRequest, opts: &CommonOpts) -> i32 {
    let outcome = (|| -> Result<()> {
        let (spec, file_run) = load_spec(spec_path)?;
        let method = if method == MethodRequest::Auto {
            file_run.as_ref().map(|r| r.method).unwrap_or(MethodRequest::Auto)
        } else {
            method
        };
        let run = resolve_run(opts, file_run.as_ref())?;
        let mut rows = Vec::with_capacity(run.grid.len());
        for &t in &run.grid {
            let est = evaluate(&spec, t, method, &run)?;
            rows.push(CurveRow::from_estimate(&est, run.seed));
        }
        with_output(opts.out.as_deref(), |w| specdoc::write_csv(&rows, w))
    })();
    match outcome {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::Capability(_)) {
                eprintln!("hint: fallback chain is series -> laplace -> mc2; rerun with --method laplace or --method mc2");
            }
            exit_code_for(&e)
        }
    }
}

struct ValidationRow {
    label: &'static str,
    spec: ModelSpec,
    reference: Option<f64>,
    deterministic_tol: f64,
}

fn validation_rows() -> Vec<ValidationRow> {
    vec![
        ValidationRow {
            label: "q(x)=exp(-x), independent Exp(1) increments",
            spec: builtin::validation_row1(),
            reference: Some(0.5198),
            deterministic_tol: 5e-4,
        },
        ValidationRow {
            label: "q=0.5, completely dependent Exp(1) increments",
            spec: builtin::validation_row2(),
            reference: Some(0.5054),
            deterministic_tol: 5e-4,
        },
        ValidationRow {
            label: "q(x)=exp(-x), additive Exp(1)+Exp(1) dependence",
            spec: builtin::validation_row3(),
            reference: None,
            deterministic_tol: 5e-4,
        },
    ]
}

/// Runs the built-in validation table: all three reference configurations
/// through every applicable method, with pass/fail checks.
pub fn cmd_validate(opts: &CommonOpts) -> i32 {
    let run = match resolve_run(opts, None) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    };
    let mut report = String::new();
    let mut failures: Vec<String> = Vec::new();
    let t = 1.0;
    report.push_str(&format!(
        "validation at t = {t}, histories = {}, seed = {}\n",
        run.histories, run.seed
    ));
    report.push_str("config | method | R(1) | 95% interval\n");
    for row in validation_rows() {
        let outcome = (|| -> Result<()> {
            let mc1 = reliability_mc1(&row.spec, t, run.histories, run.seed)?;
            let mc2 = reliability_mc2(&row.spec, t, run.histories, run.seed)?;
            let series = if row.spec.increments.is_independent() {
                Some(reliability_series(&row.spec, t, 1e-8)?)
            } else {
                None
            };
            let laplace = reliability_laplace(
                &row.spec,
                t,
                row.spec.threshold,
                &inversion_for(&row.spec.degradation),
            )?;
            let mut print_line = |label: &str, est: &ReliabilityEstimate| {
                let (lo, hi) = est.bounds();
                report.push_str(&format!(
                    "{} | {label} | {:.4} | [{lo:.4}, {hi:.4}]\n",
                    row.label, est.value
                ));
            };
            print_line("1", &mc1);
            print_line("2", &mc2);
            if let Some(s) = &series {
                print_line("3", s);
            }
            print_line("4", &laplace);

            if let Some(reference) = row.reference {
                for (name, est) in [("1", &mc1), ("2", &mc2)] {
                    let (lo, hi) = est.bounds();
                    if !(lo <= reference && reference <= hi) {
                        failures.push(format!(
                            "{}: method {name} interval [{lo:.4}, {hi:.4}] misses {reference}",
                            row.label
                        ));
                    }
                }
                if let Some(s) = &series {
                    if (s.value - reference).abs() > row.deterministic_tol {
                        failures.push(format!(
                            "{}: series value {:.6} off reference {reference} by more than {}",
                            row.label, s.value, row.deterministic_tol
                        ));
                    }
                }
                if (laplace.value - reference).abs() > row.deterministic_tol {
                    failures.push(format!(
                        "{}: inversion value {:.6} off reference {reference} by more than {}",
                        row.label, laplace.value, row.deterministic_tol
                    ));
                }
            } else {
                // methods 1 and 2 must agree with each other and with the
                // transform value
                let (lo1, hi1) = mc1.bounds();
                let (lo2, hi2) = mc2.bounds();
                if lo1.max(lo2) > hi1.min(hi2) {
                    failures.push(format!(
                        "{}: Monte Carlo intervals [{lo1:.4}, {hi1:.4}] and [{lo2:.4}, {hi2:.4}] \
                         do not overlap",
                        row.label
                    ));
                }
                for (name, est) in [("1", &mc1), ("2", &mc2)] {
                    let (lo, hi) = est.bounds();
                    if !(lo <= laplace.value && laplace.value <= hi) {
                        failures.push(format!(
                            "{}: method {name} interval [{lo:.4}, {hi:.4}] misses the transform \
                             value {:.4}",
                            row.label, laplace.value
                        ));
                    }
                }
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            eprintln!("error: {e}");
            return exit_code_for(&e);
        }
    }
    let pass = failures.is_empty();
    report.push_str(if pass { "overall: PASS\n" } else { "overall: FAIL\n" });
    for f in &failures {
        report.push_str(&format!("failure: {f}\n"));
    }
    let write_outcome = with_output(opts.out.as_deref(), |w| {
        w.write_all(report.as_bytes())?;
        Ok(())
    });
    if let Err(e) = write_outcome {
        eprintln!("error: {e}");
        return exit_code_for(&e);
    }
    if pass {
        EXIT_OK
    } else {
        EXIT_VALIDATION
    }
}

/// Comparison families exposed by the compare command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompareKind {
    Fatality,
    Dependence,
    Intensity,
    Nbu,
}

impl std::str::FromStr for CompareKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "fatality" => Ok(CompareKind::Fatality),
            "dependence" => Ok(CompareKind::Dependence),
            "intensity" => Ok(CompareKind::Intensity),
            "nbu" => Ok(CompareKind::Nbu),
            other => Err(format!("unknown comparison kind {other:?}")),
        }
    }
}

fn require_equal(
    field: &str,
    same: bool,
) -> Result<()> {
    if same {
        Ok(())
    } else {
        Err(Error::Input(format!(
            "comparison specs may differ only in the compared ingredient, but {field} differs"
        )))
    }
}

fn verdict_report(kind: &str, verdict: &ComparisonVerdict, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "comparison: {kind}")?;
    writeln!(out, "verdict: {}", verdict.relation)?;
    writeln!(out, "rule: {}", verdict.confidence)?;
    writeln!(out, "t,lhs,lhs_lo,lhs_hi,rhs,rhs_lo,rhs_hi")?;
    for p in &verdict.grid {
        let (llo, lhi) = p.lhs.bounds();
        let (rlo, rhi) = p.rhs.bounds();
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            p.t, p.lhs.value, llo, lhi, p.rhs.value, rlo, rhi
        )?;
    }
    Ok(())
}

/// Runs a lifetime comparison between two spec files (one file for the
/// ageing check). Exit 0 when the verdict matches the predicted relation
/// or the differences stay inside the intervals.
pub fn cmd_compare(
    kind: CompareKind,
    spec_a: &Path,
    spec_b: Option<&Path>,
    opts: &CommonOpts,
) -> i32 {
    let outcome = (|| -> Result<bool> {
        let (a, run_a) = load_spec(spec_a)?;
        let run = resolve_run(opts, run_a.as_ref())?;
        let eval = Evaluator {
            method: MethodChoice::Auto,
            tol: run.tol,
            histories: run.histories,
            seed: run.seed,
        };
        match kind {
            CompareKind::Nbu => {
                if let Some(path) = spec_b {
                    let (b, _) = load_spec(path)?;
                    require_equal("the whole spec (ageing check takes one model)", a == b)?;
                }
                let pairs: Vec<f64> = vec![0.25, 0.5, 1.0, 2.0];
                let v = check_nbu(&a, &pairs, &pairs, &eval, false)?;
                with_output(opts.out.as_deref(), |w| {
                    writeln!(w, "comparison: nbu")?;
                    writeln!(w, "verdict: {}", if v.pass { "pass" } else { "violated" })?;
                    writeln!(
                        w,
                        "worst: R(s+t) - R(s)R(t) = {} at (s, t) = ({}, {}), tolerance {}",
                        v.worst.violation, v.worst.s, v.worst.t, v.worst.tolerance
                    )?;
                    writeln!(w, "s,t,violation,tolerance")?;
                    for p in &v.grid {
                        writeln!(w, "{},{},{},{}", p.s, p.t, p.violation, p.tolerance)?;
                    }
                    Ok(())
                })?;
                Ok(v.pass)
            }
            CompareKind::Fatality => {
                let path = spec_b
                    .ok_or_else(|| Error::Input("fatality comparison needs --spec-b".into()))?;
                let (b, _) = load_spec(path)?;
                require_equal("intensity", a.intensity == b.intensity)?;
                require_equal("hazard", a.hazard == b.hazard)?;
                require_equal("degradation", a.degradation == b.degradation)?;
                require_equal("increments", a.increments == b.increments)?;
                require_equal("threshold", a.threshold == b.threshold)?;
                let v = compare_fatality(&a, &b.fatality, &run.grid, &eval)?;
                with_output(opts.out.as_deref(), |w| verdict_report("fatality", &v, w))?;
                Ok(matches!(v.relation, Relation::Dominated | Relation::Indistinguishable))
            }
            CompareKind::Dependence => {
                let path = spec_b
                    .ok_or_else(|| Error::Input("dependence comparison needs --spec-b".into()))?;
                let (b, _) = load_spec(path)?;
                let v = compare_dependence(&a, &b, &run.grid, &eval)?;
                with_output(opts.out.as_deref(), |w| verdict_report("dependence", &v, w))?;
                Ok(matches!(v.relation, Relation::Dominated | Relation::Indistinguishable))
            }
            CompareKind::Intensity => {
                let path = spec_b
                    .ok_or_else(|| Error::Input("intensity comparison needs --spec-b".into()))?;
                let (b, _) = load_spec(path)?;
                require_equal("fatality", a.fatality == b.fatality)?;
                require_equal("hazard", a.hazard == b.hazard)?;
                require_equal("degradation", a.degradation == b.degradation)?;
                require_equal("increments", a.increments == b.increments)?;
                require_equal("threshold", a.threshold == b.threshold)?;
                let v = compare_intensity(&a, &b.intensity, &run.grid, &eval)?;
                with_output(opts.out.as_deref(), |w| verdict_report("intensity", &v, w))?;
                Ok(matches!(v.relation, Relation::Dominated | Relation::Indistinguishable))
            }
        }
    })();
    match outcome {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VALIDATION,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
