//! Exact event-driven simulation, Lindley recursions and the statistical
//! checks built on them.
//!
//! Every path owns a private ChaCha stream keyed by `(seed, stream id)` and
//! selected by the path index, so results do not depend on the thread count.

mod checks;
mod lindley;
mod path;
mod sample;
mod stats;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use checks::{
    bankruptcy_identity_check, ks_decomposition_test, minmax_sum_check, IdentityPoint, KsOutcome, MinMaxOutcome,
    MinMaxPoint,
};
pub use lindley::{lindley_chain, CustomerCount};
pub use path::{path_at_times, segment, Segment};
pub use sample::{
    sample_all_time_max, sample_erlang_inspection, sample_inspected_max, sample_running_max_killed, ErlangInspection,
};
pub use stats::{empirical_ccdf, empirical_lst, ks_two_sample, Estimate};

/// Simulation controls shared by every sampler.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    /// Number of draws (paths, or retained chain states in steady state).
    pub paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    #[serde(default)]
    pub steady_state: SteadyStateConfig,
}

/// Controls for `β = 0` runs, which use long Lindley chains.
///
/// Unset fields fall back to burn-in `⌈10/(1-ρ)⌉` and stride `⌈1/(1-ρ)⌉`
/// customers, `ρ` being the ratio of mean service to mean interarrival.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SteadyStateConfig {
    pub burn_in: Option<u64>,
    pub stride: Option<u64>,
    /// Independent chains; their means give the batch-means standard error.
    pub chains: usize,
}

impl Default for SteadyStateConfig {
    fn default() -> Self {
        Self {
            burn_in: None,
            stride: None,
            chains: 64,
        }
    }
}

impl SimConfig {
    pub fn new(paths: usize, seed: u64) -> Self {
        Self {
            paths,
            seed,
            stream: 0,
            steady_state: SteadyStateConfig::default(),
        }
    }

    pub fn with_stream(&self, stream: u64) -> Self {
        Self {
            stream,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::InvalidParameter("simulation needs at least one path".into()));
        }
        if self.steady_state.chains == 0 {
            return Err(Error::InvalidParameter("steady state needs at least one chain".into()));
        }
        if self.steady_state.stride == Some(0) {
            return Err(Error::InvalidParameter("steady-state stride must be >= 1".into()));
        }
        Ok(())
    }
}

/// Generator for one path: key `(seed, stream)`, ChaCha stream `path`.
pub fn path_rng(seed: u64, stream: u64, path: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(path);
    rng
}

/// Runs `draw` once per path in parallel and returns the results in path order.
pub(crate) fn per_path<T, F>(cfg: &SimConfig, count: usize, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|i| draw(&mut path_rng(cfg.seed, cfg.stream, i)))
        .collect()
}

/// A reproducible sample together with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample {
    pub values: Vec<f64>,
    pub seed: u64,
    pub stream: u64,
    /// Present for steady-state samples: values are stored chain by chain in
    /// contiguous blocks of this length, and standard errors use batch means.
    pub batch_len: Option<usize>,
}

impl EmpiricalSample {
    pub fn new(values: Vec<f64>, seed: u64, stream: u64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample value {bad} is not finite")));
        }
        Ok(Self {
            values,
            seed,
            stream,
            batch_len: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Single-column CSV: a header naming the quantity, seed and size, then
    /// one value per row in 17-significant-digit exponent form.
    pub fn to_csv(&self, quantity: &str) -> String {
        let mut out = format!("{quantity}(seed={};stream={};n={})\n", self.seed, self.stream, self.len());
        for v in &self.values {
            out.push_str(&format!("{v:.16e}\n"));
        }
        out
    }
}
