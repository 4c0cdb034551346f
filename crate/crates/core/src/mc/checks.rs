use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::sample::inspect_path;
use super::stats::{empirical_ccdf, ks_two_sample, sample_mean};
use super::{per_path, sample_all_time_max, sample_inspected_max, sample_running_max_killed, EmpiricalSample, SimConfig};
use crate::error::{Error, Result};
use crate::levy::{JumpLaw, LevyModel, Orientation};
use crate::risk::ruin_exact_exponential;
use crate::roots::RootSolveConfig;
use crate::transforms::InspectionScheme;

/// Outcome of the two-sample test of `Ȳ(T_β) = Y_{β,ω} + Ȳ(T_{β+ω})` in law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsOutcome {
    pub statistic: f64,
    pub critical_value: f64,
    pub level: f64,
    pub pass: bool,
}

/// Compares `Ȳ(T_β)` (stream `s`) with the sum of independent draws of
/// `Y_{β,ω}` (stream `s+1`) and `Ȳ(T_{β+ω})` (stream `s+2`) at level 0.01.
pub fn ks_decomposition_test(model: &LevyModel, beta: f64, omega: f64, cfg: &SimConfig) -> Result<KsOutcome> {
    if !(beta > 0.0) {
        return Err(Error::domain("ks_decomposition_test", beta, "β > 0"));
    }
    let scheme = InspectionScheme::poisson(beta, omega)?;
    let whole = sample_running_max_killed(model, beta, &cfg.with_stream(cfg.stream))?;
    let inspected = sample_inspected_max(model, &scheme, &cfg.with_stream(cfg.stream + 1))?;
    let rest = sample_running_max_killed(model, beta + omega, &cfg.with_stream(cfg.stream + 2))?;
    let sums: Vec<f64> = inspected.values.iter().zip(&rest.values).map(|(a, b)| a + b).collect();
    let level = 0.01;
    let (statistic, critical_value) = ks_two_sample(&whole.values, &sums, level)?;
    Ok(KsOutcome {
        statistic,
        critical_value,
        level,
        pass: statistic <= critical_value,
    })
}

/// One frequency of the min/max sum check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinMaxPoint {
    pub frequency: f64,
    /// `E e^{iξ S_N}` as `[re, im]`.
    pub endpoint: [f64; 2],
    /// `E e^{iξ max} · E e^{iξ min}` as `[re, im]`.
    pub product: [f64; 2],
    pub deviation: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxOutcome {
    pub points: Vec<MinMaxPoint>,
    pub max_deviation: f64,
    /// Every deviation within four combined standard errors.
    pub pass: bool,
}

fn empirical_cf(values: &[f64], xi: f64) -> (Complex64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().map(|&x| Complex64::from_polar(1.0, xi * x)).sum::<Complex64>() / n;
    // Var of e^{iξX} is 1 - |E e^{iξX}|²; the sample version uses n - 1.
    let var = if n > 1.0 {
        (1.0 - mean.norm_sqr()).max(0.0) * n / (n - 1.0)
    } else {
        0.0
    };
    (mean, var / n)
}

/// Checks that the endpoint `S_N` of the inspected partial-sum sequence has
/// the characteristic function of the independent sum of its maximum and
/// minimum, using three independent replication sets (streams `s`, `s+1`,
/// `s+2`).
pub fn minmax_sum_check(
    model: &LevyModel,
    beta: f64,
    omega: f64,
    frequencies: &[f64],
    cfg: &SimConfig,
) -> Result<MinMaxOutcome> {
    model.validate()?;
    cfg.validate()?;
    if !(beta > 0.0) {
        return Err(Error::domain("minmax_sum_check", beta, "β > 0"));
    }
    let scheme = InspectionScheme::poisson(beta, omega)?;
    let draw = |stream: u64| per_path(&cfg.with_stream(stream), cfg.paths, |rng| inspect_path(model, &scheme, rng));
    let ends: Vec<f64> = draw(cfg.stream).iter().map(|p| p.last).collect();
    let maxima: Vec<f64> = draw(cfg.stream + 1).iter().map(|p| p.max).collect();
    let minima: Vec<f64> = draw(cfg.stream + 2).iter().map(|p| p.min).collect();
    let mut points = Vec::with_capacity(frequencies.len());
    for &xi in frequencies {
        let (c_end, v_end) = empirical_cf(&ends, xi);
        let (c_max, v_max) = empirical_cf(&maxima, xi);
        let (c_min, v_min) = empirical_cf(&minima, xi);
        let product = c_max * c_min;
        let stderr = (v_end + c_min.norm_sqr() * v_max + c_max.norm_sqr() * v_min).sqrt();
        points.push(MinMaxPoint {
            frequency: xi,
            endpoint: [c_end.re, c_end.im],
            product: [product.re, product.im],
            deviation: (c_end - product).norm(),
            stderr,
        });
    }
    let max_deviation = points.iter().map(|p| p.deviation).fold(0.0, f64::max);
    let pass = points.iter().all(|p| p.deviation <= 4.0 * p.stderr);
    Ok(MinMaxOutcome {
        points,
        max_deviation,
        pass,
    })
}

/// One capital level of the bankruptcy identity check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityPoint {
    pub u: f64,
    /// Simulated bankruptcy probability `P(Y_{0,ω} > u)`.
    pub lhs: f64,
    /// `E p(u + Z⁻)` with `Z⁻ ~ exp(ψ(ω))`.
    pub rhs: f64,
    pub stderr: f64,
    pub pass: bool,
}

/// Checks `p̃(u) = E p(u + Z⁻)`.
///
/// The left side comes from steady-state Lindley chains (stream `s`). With
/// exponential claims the right side is exact; otherwise it is estimated
/// from all-time maxima (stream `s+1`) and independent `Z⁻` (stream `s+2`).
pub fn bankruptcy_identity_check(
    model: &LevyModel,
    omega: f64,
    capitals: &[f64],
    cfg: &SimConfig,
) -> Result<Vec<IdentityPoint>> {
    if model.orientation() != Orientation::SpectrallyPositive {
        return Err(Error::Regime("the bankruptcy identity needs a spectrally positive model".into()));
    }
    let scheme = InspectionScheme::poisson(0.0, omega)?;
    scheme.validate_for(model)?;
    let roots = RootSolveConfig::default();
    let down_rate = model.exponent_inverse(omega, &roots)?;
    let inspected = sample_inspected_max(model, &scheme, &cfg.with_stream(cfg.stream))?;
    let exact = matches!(model.claims(), Some(JumpLaw::Exponential { .. }));
    let shifted: Option<EmpiricalSample> = if exact {
        None
    } else {
        let maxima = sample_all_time_max(model, &cfg.with_stream(cfg.stream + 1))?;
        let drops = per_path(&cfg.with_stream(cfg.stream + 2), maxima.len(), |rng| {
            rng.sample::<f64, _>(Exp1) / down_rate
        });
        let diffs = maxima.values.iter().zip(&drops).map(|(m, z)| m - z).collect();
        Some(EmpiricalSample::new(diffs, cfg.seed, cfg.stream + 1)?)
    };
    capitals
        .iter()
        .map(|&u| {
            let lhs = empirical_ccdf(&inspected, u)?;
            let (rhs, rhs_se) = match &shifted {
                None => {
                    // p(u) = p(0) e^{-θu}, and E e^{-θZ⁻} = ψ(ω)/(ψ(ω)+θ).
                    let p_u = ruin_exact_exponential(model, u)?;
                    let decay = match model.claims() {
                        Some(JumpLaw::Exponential { rate }) => {
                            let (r, lambda) = model.rates().unwrap_or((1.0, 0.0));
                            rate - lambda / r
                        }
                        _ => unreachable!(),
                    };
                    (p_u * down_rate / (down_rate + decay), 0.0)
                }
                Some(diffs) => {
                    let e = sample_mean(diffs, |d| if d > u { 1.0 } else { 0.0 })?;
                    (e.value, e.stderr)
                }
            };
            let stderr = (lhs.stderr * lhs.stderr + rhs_se * rhs_se).sqrt();
            Ok(IdentityPoint {
                u,
                lhs: lhs.value,
                rhs,
                stderr,
                pass: (lhs.value - rhs).abs() <= 4.0 * stderr,
            })
        })
        .collect()
}
