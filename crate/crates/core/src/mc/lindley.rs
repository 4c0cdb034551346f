use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{per_path, EmpiricalSample, SimConfig, SteadyStateConfig};
use crate::error::{Error, Result};
use crate::transforms::{InspectionKind, InspectionScheme};

/// Which customer's waiting time a Lindley run reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum CustomerCount {
    /// `P(N = n) = (1 - q) q^n`, `n ≥ 0`.
    Geometric { continue_prob: f64 },
    /// Long chains sampled every `stride` customers after `burn_in`.
    SteadyState { burn_in: u64, stride: u64 },
}

impl CustomerCount {
    /// Number of inspections before killing: `q = ω/(β+ω)` for Poisson
    /// inspection and `q = (kω/(β+kω))^k` for Erlang.
    pub fn for_scheme(scheme: &InspectionScheme) -> Result<Self> {
        scheme.validate()?;
        if scheme.beta == 0.0 {
            return Err(Error::Config("β = 0 has no finite customer count; use a steady-state run".into()));
        }
        let continue_prob = match scheme.kind {
            InspectionKind::Poisson { omega } => omega / (scheme.beta + omega),
            InspectionKind::Erlang { k, omega } => {
                let rate = k as f64 * omega;
                (rate / (scheme.beta + rate)).powi(k as i32)
            }
        };
        Ok(CustomerCount::Geometric { continue_prob })
    }

    /// Steady-state run for a queue with the given mean service and mean
    /// interarrival times; fails unless the load is below one.
    pub fn steady_state(mean_service: f64, mean_interarrival: f64, cfg: &SteadyStateConfig) -> Result<Self> {
        let rho = mean_service / mean_interarrival;
        if !(rho < 1.0) || !rho.is_finite() {
            return Err(Error::Regime(format!(
                "unstable queue: mean service {mean_service} is not below mean interarrival {mean_interarrival}, \
                 so no steady-state waiting time exists"
            )));
        }
        let gap = 1.0 - rho.max(0.0);
        Ok(CustomerCount::SteadyState {
            burn_in: cfg.burn_in.unwrap_or((10.0 / gap).ceil() as u64),
            stride: cfg.stride.unwrap_or((1.0 / gap).ceil() as u64).max(1),
        })
    }
}

/// Waiting times from `W_0 = 0`, `W_{m+1} = max(0, W_m + S_{m+1} - A_{m+1})`.
///
/// With a geometric count each path returns `W_N`. In steady state the
/// sample is split over `cfg.steady_state.chains` independent chains, so its
/// size is rounded up to a multiple of the chain count.
pub fn lindley_chain<S, A>(service: S, interarrival: A, count: CustomerCount, cfg: &SimConfig) -> Result<EmpiricalSample>
where
    S: Fn(&mut ChaCha8Rng) -> f64 + Sync,
    A: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    cfg.validate()?;
    let step = |w: f64, rng: &mut ChaCha8Rng| {
        let s = service(rng);
        let a = interarrival(rng);
        (w + s - a).max(0.0)
    };
    match count {
        CustomerCount::Geometric { continue_prob } => {
            if !(0.0..1.0).contains(&continue_prob) {
                return Err(Error::InvalidParameter(format!(
                    "continuation probability must lie in [0, 1), got {continue_prob}"
                )));
            }
            let values = per_path(cfg, cfg.paths, |rng| {
                let mut w = 0.0;
                while rng.random::<f64>() < continue_prob {
                    w = step(w, rng);
                }
                w
            });
            EmpiricalSample::new(values, cfg.seed, cfg.stream)
        }
        CustomerCount::SteadyState { burn_in, stride } => {
            let chains = cfg.steady_state.chains.min(cfg.paths);
            let len = cfg.paths.div_ceil(chains);
            let blocks = per_path(cfg, chains, |rng| {
                let mut w = 0.0;
                for _ in 0..burn_in {
                    w = step(w, rng);
                }
                let mut out = Vec::with_capacity(len);
                for _ in 0..len {
                    for _ in 0..stride {
                        w = step(w, rng);
                    }
                    out.push(w);
                }
                out
            });
            let mut sample = EmpiricalSample::new(blocks.concat(), cfg.seed, cfg.stream)?;
            sample.batch_len = Some(len);
            Ok(sample)
        }
    }
}
