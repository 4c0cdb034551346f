use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::lindley::{lindley_chain, CustomerCount};
use super::path::segment;
use super::{per_path, EmpiricalSample, SimConfig};
use crate::error::{Error, Result};
use crate::levy::{LevyModel, Orientation};
use crate::roots::RootSolveConfig;
use crate::transforms::InspectionScheme;

/// Draws of `Ȳ(T_ζ)`, the running maximum up to an independent exp(ζ) time.
pub fn sample_running_max_killed(model: &LevyModel, zeta: f64, cfg: &SimConfig) -> Result<EmpiricalSample> {
    model.validate()?;
    cfg.validate()?;
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::domain("sample_running_max_killed", zeta, "ζ > 0"));
    }
    let values = per_path(cfg, cfg.paths, |rng| segment(model, zeta, rng).sup);
    EmpiricalSample::new(values, cfg.seed, cfg.stream)
}

/// Summary of one path observed at inspection epochs before killing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct InspectedPath {
    /// `max(0, Y(I_1), ..., Y(I_N))`.
    pub max: f64,
    /// `min(0, Y(I_1), ..., Y(I_N))`.
    pub min: f64,
    /// `Y(I_N)`, or 0 without inspections.
    pub last: f64,
    pub inspections: u64,
    /// Supremum over the first exponential phase.
    pub first_phase_sup: f64,
}

/// Event loop with killing, inspection phases and jumps as competing clocks.
pub(crate) fn inspect_path(model: &LevyModel, scheme: &InspectionScheme, rng: &mut ChaCha8Rng) -> InspectedPath {
    let phases = scheme.phases();
    let total = scheme.beta + scheme.phase_rate();
    let mut out = InspectedPath {
        max: 0.0,
        min: 0.0,
        last: 0.0,
        inspections: 0,
        first_phase_sup: 0.0,
    };
    let (mut y, mut phase) = (0.0, 0u32);
    let mut first = true;
    loop {
        let seg = segment(model, total, rng);
        if first {
            out.first_phase_sup = seg.sup;
            first = false;
        }
        y += seg.end;
        if rng.random::<f64>() * total < scheme.beta {
            return out;
        }
        phase += 1;
        if phase == phases {
            phase = 0;
            out.inspections += 1;
            out.last = y;
            out.max = out.max.max(y);
            out.min = out.min.min(y);
        }
    }
}

/// `(E Z⁺, E Z⁻)` for the Wiener–Hopf parts of the increment over an
/// exp(`rate`) time.
pub(crate) fn wiener_hopf_means(model: &LevyModel, rate: f64, roots: &RootSolveConfig) -> Result<(f64, f64)> {
    let root = model.exponent_inverse(rate, roots)?;
    let (up, mean_increment) = match model.orientation() {
        Orientation::SpectrallyPositive => {
            let slope = model.safety_loading();
            (1.0 / root - slope / rate, -slope / rate)
        }
        _ => (1.0 / root, model.safety_loading() / rate),
    };
    Ok((up, up - mean_increment))
}

/// Draws of the inspected maximum `Y_{β,ω}`.
///
/// For `β > 0` each path is simulated directly. For `β = 0` the steady-state
/// law is sampled from Lindley chains whose service and interarrival times
/// are the supremum and the drop below it over independent inspection phases.
pub fn sample_inspected_max(model: &LevyModel, scheme: &InspectionScheme, cfg: &SimConfig) -> Result<EmpiricalSample> {
    model.validate()?;
    cfg.validate()?;
    scheme.validate_for(model)?;
    if scheme.beta > 0.0 {
        let values = per_path(cfg, cfg.paths, |rng| inspect_path(model, scheme, rng).max);
        return EmpiricalSample::new(values, cfg.seed, cfg.stream);
    }
    let rate = scheme.phase_rate();
    let (up, down) = wiener_hopf_means(model, rate, &RootSolveConfig::default())?;
    let count = CustomerCount::steady_state(up, down, &cfg.steady_state)?;
    let k = scheme.phases();
    lindley_chain(
        |rng| (0..k).map(|_| segment(model, rate, rng).sup).sum(),
        |rng| (0..k).map(|_| segment(model, rate, rng).drop_from_sup()).sum(),
        count,
        cfg,
    )
}

/// Draws of the all-time maximum of a spectrally positive model with
/// positive loading, as a geometric sum of residual-law ladder heights.
pub fn sample_all_time_max(model: &LevyModel, cfg: &SimConfig) -> Result<EmpiricalSample> {
    model.validate()?;
    cfg.validate()?;
    let (LevyModel::SpectrallyPositive { claims, .. }, Some((r, lambda))) = (model, model.rates()) else {
        return Err(Error::Regime("all-time maximum sampling needs a spectrally positive model".into()));
    };
    if !model.admits_zero_killing() {
        return Err(Error::Regime(
            "the all-time maximum is infinite without positive safety loading".into(),
        ));
    }
    let ladder_prob = lambda * claims.mean() / r;
    let values = per_path(cfg, cfg.paths, |rng| {
        let mut m = 0.0;
        while rng.random::<f64>() < ladder_prob {
            m += claims.sample_residual(rng);
        }
        m
    });
    EmpiricalSample::new(values, cfg.seed, cfg.stream)
}

/// Per-path inspection counts, first-phase suprema and inspected maxima
/// under Erlang inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct ErlangInspection {
    pub counts: Vec<u64>,
    pub phase_maxima: EmpiricalSample,
    pub inspected_max: EmpiricalSample,
}

pub fn sample_erlang_inspection(model: &LevyModel, scheme: &InspectionScheme, cfg: &SimConfig) -> Result<ErlangInspection> {
    model.validate()?;
    cfg.validate()?;
    scheme.validate_for(model)?;
    if !(scheme.beta > 0.0) {
        return Err(Error::domain("sample_erlang_inspection", scheme.beta, "β > 0"));
    }
    let paths = per_path(cfg, cfg.paths, |rng| inspect_path(model, scheme, rng));
    Ok(ErlangInspection {
        counts: paths.iter().map(|p| p.inspections).collect(),
        phase_maxima: EmpiricalSample::new(paths.iter().map(|p| p.first_phase_sup).collect(), cfg.seed, cfg.stream)?,
        inspected_max: EmpiricalSample::new(paths.iter().map(|p| p.max).collect(), cfg.seed, cfg.stream)?,
    })
}
