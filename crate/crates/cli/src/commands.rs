use std::path::{Path, PathBuf};

use levy_inspect::inversion::{
    inspected_exponent_estimate, invert_ccdf, ExponentEstimateConfig, InversionConfig, LaplaceTransform, TailCurve,
};
use levy_inspect::mc::{
    bankruptcy_identity_check, empirical_lst, ks_decomposition_test, minmax_sum_check, sample_all_time_max,
    sample_erlang_inspection, sample_inspected_max, sample_running_max_killed, EmpiricalSample, Estimate, SimConfig,
};
use levy_inspect::risk::{
    bankruptcy_asymptote_heavy, bankruptcy_asymptote_light, cramer_lundberg_asymptote, inspection_shortfall,
    ruin_exact_exponential, rule_of_thumb_rate, AsymptoteReport,
};
use levy_inspect::transforms::{
    erlang_component_lsts, erlang_count_pmf, factorization_residual, lst_all_time_max, lst_inspected_max,
    lst_running_max, InspectedMaximum, InspectionKind, InspectionScheme, KilledMaximum, LstCurve,
};
use levy_inspect::{Error, JumpLaw, LevyModel, Orientation, RootSolveConfig};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, LoadedConfig, RunConfig};
use crate::output::{fmt, Table, Writer};
use crate::CliError;

/// Files written by a run and whether every check it performed passed.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub files: Vec<PathBuf>,
    pub all_pass: bool,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.all_pass {
            0
        } else {
            1
        }
    }
}

pub fn run(loaded: &LoadedConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let cfg = &loaded.config;
    cfg.model.validate()?;
    let scheme = match cfg.scheme {
        Some(s) => {
            let scheme = s.scheme()?;
            scheme.validate_for(&cfg.model)?;
            Some(scheme)
        }
        None => None,
    };
    let mut out = Writer::new(out_dir, loaded)?;
    log::info!("running {}", cfg.command.name());
    let all_pass = match cfg.command {
        Command::EvalTransform => eval_transform(cfg, &require(scheme)?, &mut out)?,
        Command::Invert => invert(cfg, &require(scheme)?, &mut out)?,
        Command::Simulate => simulate(cfg, &require(scheme)?, &mut out)?,
        Command::Verify => verify(cfg, &require(scheme)?, &mut out)?,
        Command::Risk => risk(cfg, &require(scheme)?, &mut out)?,
        Command::RuleOfThumb => rule_of_thumb(cfg, &mut out)?,
    };
    Ok(RunOutcome {
        files: out.written,
        all_pass,
    })
}

fn require(scheme: Option<InspectionScheme>) -> Result<InspectionScheme, CliError> {
    // validate() has already insisted on a scheme for every command that reaches here
    scheme.ok_or_else(|| CliError::Schema("at `scheme`: missing".into()))
}

fn poisson_omega(scheme: &InspectionScheme, what: &str) -> Result<f64, CliError> {
    match scheme.kind {
        InspectionKind::Poisson { omega } => Ok(omega),
        InspectionKind::Erlang { .. } => Err(Error::Config(format!("{what} needs Poisson inspection (omit k)")).into()),
    }
}

fn eval_transform(cfg: &RunConfig, scheme: &InspectionScheme, out: &mut Writer) -> Result<bool, CliError> {
    let roots = RootSolveConfig::default();
    let alpha = cfg.grid("alpha")?;
    match scheme.kind {
        InspectionKind::Poisson { .. } => {
            let inspected = InspectedMaximum::new(&cfg.model, scheme, &roots)?;
            let curve = LstCurve::evaluate(alpha, |a| inspected.lst(a))?;
            let mut t = Table::new(&["alpha", "inspected_max"]);
            for (a, v) in curve.arguments.iter().zip(&curve.values) {
                t.push_numbers(&[*a, *v]);
            }
            out.table("transform.csv", &t, &[])?;
        }
        InspectionKind::Erlang { k, omega } => {
            let curve = LstCurve::evaluate(alpha, |a| {
                erlang_component_lsts(&cfg.model, scheme.beta, omega, k, a, &roots).map(|(lst, _)| lst)
            })?;
            let (_, min_rate) = erlang_component_lsts(&cfg.model, scheme.beta, omega, k, 0.0, &roots)?;
            let mut t = Table::new(&["alpha", "phase_max"]);
            for (a, v) in curve.arguments.iter().zip(&curve.values) {
                t.push_numbers(&[*a, *v]);
            }
            out.table("transform.csv", &t, &[("phase_min_rate", fmt(min_rate))])?;
        }
    }
    Ok(true)
}

fn inversion_config(cfg: &RunConfig) -> InversionConfig {
    cfg.inversion.unwrap_or_default()
}

fn tail_extras(curve: &TailCurve) -> Vec<(&'static str, String)> {
    vec![
        ("max_adjustment", fmt(curve.max_adjustment)),
        ("deep_tail_unreliable", curve.deep_tail_unreliable.to_string()),
    ]
}

fn invert(cfg: &RunConfig, scheme: &InspectionScheme, out: &mut Writer) -> Result<bool, CliError> {
    poisson_omega(scheme, "invert")?;
    let roots = RootSolveConfig::default();
    let inspected = InspectedMaximum::new(&cfg.model, scheme, &roots)?;
    let curve = invert_ccdf(&inspected, cfg.grid("u")?, &inversion_config(cfg))?;
    let mut t = Table::new(&["u", "ccdf"]);
    for (u, p) in curve.u.iter().zip(&curve.ccdf) {
        t.push_numbers(&[*u, *p]);
    }
    out.table("tail.csv", &t, &tail_extras(&curve))?;
    Ok(true)
}

/// One row of the empirical-versus-closed-form table.
struct Comparison {
    quantity: &'static str,
    argument: f64,
    estimate: Estimate,
    closed_form: f64,
}

impl Comparison {
    fn pass(&self) -> bool {
        self.estimate.covers(self.closed_form, 4.0)
    }
}

fn compare_lst<F>(rows: &mut Vec<Comparison>, quantity: &'static str, sample: &EmpiricalSample, alpha: &[f64], exact: F) -> Result<(), CliError>
where
    F: Fn(f64) -> levy_inspect::Result<f64>,
{
    for &a in alpha {
        rows.push(Comparison {
            quantity,
            argument: a,
            estimate: empirical_lst(sample, a)?,
            closed_form: exact(a)?,
        });
    }
    Ok(())
}

fn simulate(cfg: &RunConfig, scheme: &InspectionScheme, out: &mut Writer) -> Result<bool, CliError> {
    let sim = cfg.simulation()?.sim();
    let alpha = cfg.grid("alpha")?;
    let roots = RootSolveConfig::default();
    let model = &cfg.model;
    let mut rows = Vec::new();
    match scheme.kind {
        InspectionKind::Poisson { .. } => {
            let inspected = sample_inspected_max(model, scheme, &sim.with_stream(0))?;
            out.raw_csv("inspected_max.csv", &inspected.to_csv("inspected_max"))?;
            compare_lst(&mut rows, "inspected_max", &inspected, alpha, |a| {
                lst_inspected_max(model, scheme, a, &roots)
            })?;
            if scheme.beta > 0.0 {
                let running = sample_running_max_killed(model, scheme.beta, &sim.with_stream(1))?;
                out.raw_csv("running_max.csv", &running.to_csv("running_max"))?;
                compare_lst(&mut rows, "running_max", &running, alpha, |a| {
                    lst_running_max(model, scheme.beta, a, &roots)
                })?;
            } else if model.orientation() == Orientation::SpectrallyPositive {
                let all_time = sample_all_time_max(model, &sim.with_stream(1))?;
                out.raw_csv("all_time_max.csv", &all_time.to_csv("all_time_max"))?;
                compare_lst(&mut rows, "all_time_max", &all_time, alpha, |a| lst_all_time_max(model, a, &roots))?;
            }
        }
        InspectionKind::Erlang { k, omega } => {
            let draws = sample_erlang_inspection(model, scheme, &sim.with_stream(0))?;
            out.raw_csv("inspected_max.csv", &draws.inspected_max.to_csv("inspected_max"))?;
            out.raw_csv("phase_max.csv", &draws.phase_maxima.to_csv("phase_max"))?;
            if model.orientation() == Orientation::SpectrallyPositive {
                compare_lst(&mut rows, "phase_max", &draws.phase_maxima, alpha, |a| {
                    erlang_component_lsts(model, scheme.beta, omega, k, a, &roots).map(|(lst, _)| lst)
                })?;
            }
            rows.extend(count_comparisons(&draws.counts, scheme.beta, omega, k)?);
        }
    }
    let mut t = Table::new(&["quantity", "argument", "empirical", "stderr", "closed_form", "pass"]);
    for r in &rows {
        t.push(vec![
            r.quantity.to_string(),
            fmt(r.argument),
            fmt(r.estimate.value),
            fmt(r.estimate.stderr),
            fmt(r.closed_form),
            r.pass().to_string(),
        ]);
    }
    out.table("comparison.csv", &t, &[])?;
    Ok(rows.iter().all(Comparison::pass))
}

// Observed inspection-count frequencies for n = 0..=5 against the pmf.
fn count_comparisons(counts: &[u64], beta: f64, omega: f64, k: u32) -> Result<Vec<Comparison>, CliError> {
    let total = counts.len() as f64;
    (0..=5u64)
        .map(|n| {
            let p = counts.iter().filter(|&&c| c == n).count() as f64 / total;
            Ok(Comparison {
                quantity: "inspection_count",
                argument: n as f64,
                estimate: Estimate {
                    value: p,
                    stderr: (p * (1.0 - p) / total).sqrt(),
                },
                closed_form: erlang_count_pmf(beta, omega, k, n)?,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
struct CheckEntry {
    name: &'static str,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    detail: Value,
}

impl CheckEntry {
    fn done(name: &'static str, pass: bool, detail: Value) -> Self {
        Self {
            name,
            status: if pass { Status::Pass } else { Status::Fail },
            reason: None,
            detail,
        }
    }

    fn skipped(name: &'static str, reason: &str) -> Self {
        Self {
            name,
            status: Status::Skipped,
            reason: Some(reason.into()),
            detail: Value::Null,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct VerifyReport {
    all_pass: bool,
    checks: Vec<CheckEntry>,
}

const RESIDUAL_TOLERANCE: f64 = 1e-12;

// Stream offsets keep the checks statistically independent of each other.
const KS_STREAM: u64 = 0;
const MINMAX_STREAM: u64 = 3;
const EXPONENT_STREAM: u64 = 6;
const IDENTITY_STREAM: u64 = 7;
const ERLANG_STREAM: u64 = 10;

fn verify(cfg: &RunConfig, scheme: &InspectionScheme, out: &mut Writer) -> Result<bool, CliError> {
    let sim = cfg.simulation()?.sim();
    let model = &cfg.model;
    let roots = RootSolveConfig::default();
    let beta = scheme.beta;
    let mut checks = Vec::new();

    match scheme.kind {
        InspectionKind::Poisson { omega } => {
            let residual = factorization_residual(model, beta, omega, cfg.grid("alpha")?, &roots)?;
            checks.push(CheckEntry::done(
                "factorization_residual",
                residual <= RESIDUAL_TOLERANCE,
                json!({ "max_residual": residual, "tolerance": RESIDUAL_TOLERANCE }),
            ));
            if beta > 0.0 {
                checks.extend(poisson_simulation_checks(cfg, scheme, omega, &sim)?);
            } else {
                for name in ["ks_decomposition", "minmax_sum", "exponent_estimate"] {
                    checks.push(CheckEntry::skipped(name, "needs a positive killing rate"));
                }
            }
            checks.push(identity_check(model, omega, cfg.grid("u")?, &sim)?);
        }
        InspectionKind::Erlang { k, omega } => {
            for name in ["factorization_residual", "ks_decomposition", "minmax_sum", "exponent_estimate"] {
                checks.push(CheckEntry::skipped(name, "needs Poisson inspection"));
            }
            checks.push(erlang_check(cfg, scheme, k, omega, &sim)?);
        }
    }

    let all_pass = checks.iter().all(|c| c.status != Status::Fail);
    out.json("verify.json", &VerifyReport { all_pass, checks })?;
    Ok(all_pass)
}

fn poisson_simulation_checks(
    cfg: &RunConfig,
    scheme: &InspectionScheme,
    omega: f64,
    sim: &SimConfig,
) -> Result<Vec<CheckEntry>, CliError> {
    let model = &cfg.model;
    let beta = scheme.beta;
    let mut checks = Vec::new();

    let ks = ks_decomposition_test(model, beta, omega, &sim.with_stream(KS_STREAM))?;
    checks.push(CheckEntry::done("ks_decomposition", ks.pass, json!(ks)));

    let minmax = minmax_sum_check(model, beta, omega, cfg.grid("frequencies")?, &sim.with_stream(MINMAX_STREAM))?;
    checks.push(CheckEntry::done("minmax_sum", minmax.pass, json!(minmax)));

    let alpha = 1.0;
    let mut est_cfg = ExponentEstimateConfig::new(sim.paths, sim.seed);
    est_cfg.stream = EXPONENT_STREAM;
    let est = inspected_exponent_estimate(model, beta, omega, alpha, &est_cfg)?;
    let exact = -lst_inspected_max(model, scheme, alpha, &RootSolveConfig::default())?.ln();
    let pass = (est.value - exact).abs() <= 3.0 * est.stderr;
    checks.push(CheckEntry::done(
        "exponent_estimate",
        pass,
        json!({ "alpha": alpha, "estimate": est, "closed_form": exact }),
    ));
    Ok(checks)
}

fn identity_check(model: &LevyModel, omega: f64, capitals: &[f64], sim: &SimConfig) -> Result<CheckEntry, CliError> {
    const NAME: &str = "bankruptcy_identity";
    if model.orientation() != Orientation::SpectrallyPositive {
        return Ok(CheckEntry::skipped(NAME, "needs a spectrally positive model"));
    }
    if !model.admits_zero_killing() {
        return Ok(CheckEntry::skipped(NAME, "needs positive safety loading"));
    }
    let points = bankruptcy_identity_check(model, omega, capitals, &sim.with_stream(IDENTITY_STREAM))?;
    let pass = points.iter().all(|p| p.pass);
    Ok(CheckEntry::done(NAME, pass, json!({ "omega": omega, "points": points })))
}

fn erlang_check(cfg: &RunConfig, scheme: &InspectionScheme, k: u32, omega: f64, sim: &SimConfig) -> Result<CheckEntry, CliError> {
    const NAME: &str = "erlang_inspection";
    if scheme.beta == 0.0 {
        return Ok(CheckEntry::skipped(NAME, "needs a positive killing rate"));
    }
    let model = &cfg.model;
    let roots = RootSolveConfig::default();
    let draws = sample_erlang_inspection(model, scheme, &sim.with_stream(ERLANG_STREAM))?;
    let mut rows = count_comparisons(&draws.counts, scheme.beta, omega, k)?;
    if model.orientation() == Orientation::SpectrallyPositive {
        compare_lst(&mut rows, "phase_max", &draws.phase_maxima, cfg.grid("alpha")?, |a| {
            erlang_component_lsts(model, scheme.beta, omega, k, a, &roots).map(|(lst, _)| lst)
        })?;
    }
    let detail: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "quantity": r.quantity,
                "argument": r.argument,
                "empirical": r.estimate.value,
                "stderr": r.estimate.stderr,
                "closed_form": r.closed_form,
                "pass": r.pass(),
            })
        })
        .collect();
    Ok(CheckEntry::done(NAME, rows.iter().all(Comparison::pass), Value::Array(detail)))
}

#[derive(Debug, Clone, Serialize)]
struct RiskReport {
    omega: f64,
    report: AsymptoteReport,
    ruin_source: &'static str,
    ruin_max_adjustment: f64,
    bankruptcy_max_adjustment: f64,
    deep_tail_unreliable: bool,
}

fn curve_table(values: &[f64], asymptotes: &[f64], u: &[f64]) -> Table {
    let mut t = Table::new(&["u", "exact_or_inverted", "asymptote", "ratio"]);
    for ((&u, &v), &a) in u.iter().zip(values).zip(asymptotes) {
        t.push_numbers(&[u, v, a, v / a]);
    }
    t
}

fn risk(cfg: &RunConfig, scheme: &InspectionScheme, out: &mut Writer) -> Result<bool, CliError> {
    let omega = poisson_omega(scheme, "risk")?;
    if scheme.beta != 0.0 {
        return Err(Error::Config("risk curves are defined without killing; set scheme.beta to 0".into()).into());
    }
    let model = &cfg.model;
    let Some(claims) = model.claims().filter(|_| model.orientation() == Orientation::SpectrallyPositive) else {
        return Err(Error::Regime("risk curves need a spectrally positive (Cramér–Lundberg) model".into()).into());
    };
    let roots = RootSolveConfig::default();
    let u = cfg.grid("u")?;
    let light = claims.is_light_tailed();

    let inversion = match cfg.inversion {
        Some(c) => c,
        // Damping below θ* keeps relative accuracy deep in a light tail.
        None if light => InversionConfig::default().with_damping(0.9 * model.adjustment_coefficient(&roots)?),
        None => InversionConfig::default(),
    };

    let all_time = KilledMaximum::new(model, 0.0, &roots)?;
    let (ruin, ruin_source, ruin_adjust) = if matches!(claims, JumpLaw::Exponential { .. }) {
        let exact = u.iter().map(|&x| ruin_exact_exponential(model, x)).collect::<levy_inspect::Result<Vec<_>>>()?;
        (exact, "exact", 0.0)
    } else {
        let c = invert_ccdf(&all_time, u, &inversion)?;
        (c.ccdf, "inverted", c.max_adjustment)
    };
    let inspected = InspectedMaximum::new(model, scheme, &roots)?;
    let bankruptcy = invert_ccdf(&inspected, u, &inversion)?;

    let mut ruin_asym = Vec::with_capacity(u.len());
    let mut bank_asym = Vec::with_capacity(u.len());
    let mut report = None;
    for &x in u {
        if light {
            ruin_asym.push(cramer_lundberg_asymptote(model, x, &roots)?.value);
            let (v, r) = bankruptcy_asymptote_light(model, omega, x, &roots)?;
            bank_asym.push(v);
            report = Some(r);
        } else {
            let (v, r) = bankruptcy_asymptote_heavy(model, x)?;
            ruin_asym.push(v);
            bank_asym.push(v);
            report = Some(r);
        }
    }
    let report = report.expect("u grid is nonempty");

    out.table("ruin.csv", &curve_table(&ruin, &ruin_asym, u), &[("source", ruin_source.to_string())])?;
    out.table(
        "bankruptcy.csv",
        &curve_table(&bankruptcy.ccdf, &bank_asym, u),
        &tail_extras(&bankruptcy),
    )?;
    out.json(
        "risk.json",
        &RiskReport {
            omega,
            report,
            ruin_source,
            ruin_max_adjustment: ruin_adjust,
            bankruptcy_max_adjustment: bankruptcy.max_adjustment,
            deep_tail_unreliable: all_time.heavy_tailed(),
        },
    )?;
    Ok(true)
}

fn rule_of_thumb(cfg: &RunConfig, out: &mut Writer) -> Result<bool, CliError> {
    let roots = RootSolveConfig::default();
    let mut t = Table::new(&["epsilon", "omega_min", "omega_exact"]);
    for &eps in cfg.grid("epsilon")? {
        let r = rule_of_thumb_rate(&cfg.model, eps, &roots)?;
        t.push_numbers(&[r.epsilon, r.omega_min, r.omega_exact]);
    }
    out.table("rule_of_thumb.csv", &t, &[])?;
    if cfg.grids.omega.is_some() {
        let mut s = Table::new(&["omega", "shortfall"]);
        for &w in cfg.grid("omega")? {
            s.push_numbers(&[w, inspection_shortfall(&cfg.model, w, &roots)?]);
        }
        out.table("shortfall.csv", &s, &[])?;
    }
    Ok(true)
}
