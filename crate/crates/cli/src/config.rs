use levy_inspect::inversion::InversionConfig;
use levy_inspect::mc::{SimConfig, SteadyStateConfig};
use levy_inspect::transforms::InspectionScheme;
use levy_inspect::LevyModel;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::CliError;

/// Published JSON schema of [`RunConfig`].
pub const SCHEMA: &str = include_str!("../schema/run_config.schema.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    EvalTransform,
    Invert,
    Simulate,
    Verify,
    Risk,
    RuleOfThumb,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EvalTransform => "eval-transform",
            Command::Invert => "invert",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Risk => "risk",
            Command::RuleOfThumb => "rule-of-thumb",
        }
    }

    fn needs_simulation(self) -> bool {
        matches!(self, Command::Simulate | Command::Verify)
    }
}

/// Killing rate, inspection rate and an optional Erlang phase count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeConfig {
    pub beta: f64,
    pub omega: f64,
    #[serde(default)]
    pub k: Option<u32>,
}

impl SchemeConfig {
    pub fn scheme(&self) -> levy_inspect::Result<InspectionScheme> {
        match self.k {
            None | Some(1) => InspectionScheme::poisson(self.beta, self.omega),
            Some(k) => InspectionScheme::erlang(self.beta, self.omega, k),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grids {
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub u: Option<Vec<f64>>,
    /// Characteristic-function frequencies for the min/max check.
    #[serde(default)]
    pub frequencies: Option<Vec<f64>>,
    #[serde(default)]
    pub epsilon: Option<Vec<f64>>,
    #[serde(default)]
    pub omega: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationConfig {
    pub paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub burn_in: Option<u64>,
    #[serde(default)]
    pub stride: Option<u64>,
    #[serde(default)]
    pub chains: Option<usize>,
}

impl SimulationConfig {
    pub fn sim(&self) -> SimConfig {
        let mut cfg = SimConfig::new(self.paths, self.seed);
        cfg.steady_state = SteadyStateConfig {
            burn_in: self.burn_in,
            stride: self.stride,
            chains: self.chains.unwrap_or(SteadyStateConfig::default().chains),
        };
        cfg
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Prepended to every output file name.
    #[serde(default)]
    pub prefix: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    pub model: LevyModel,
    #[serde(default)]
    pub scheme: Option<SchemeConfig>,
    #[serde(default)]
    pub grids: Grids,
    #[serde(default)]
    pub simulation: Option<SimulationConfig>,
    #[serde(default)]
    pub inversion: Option<InversionConfig>,
    #[serde(default)]
    pub outputs: Outputs,
}

/// A validated configuration with the hash of its canonical JSON form.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub hash: String,
}

impl LoadedConfig {
    pub fn seed(&self) -> Option<u64> {
        self.config.simulation.as_ref().map(|s| s.seed)
    }

    /// `# config_hash=<hex> seed=<n|none>` followed by any extra fields.
    pub fn header(&self, extra: &[(&str, String)]) -> String {
        let seed = self.seed().map_or("none".to_string(), |s| s.to_string());
        let mut line = format!("# config_hash={} seed={seed}", self.hash);
        for (k, v) in extra {
            line.push_str(&format!(" {k}={v}"));
        }
        line
    }
}

/// SHA-256 of the compact JSON rendering with object keys sorted.
pub fn config_hash(value: &Value) -> String {
    // serde_json's default map is ordered by key, so this rendering does not
    // depend on the key order or whitespace of the input file.
    let canonical = serde_json::to_string(value).expect("a parsed value always serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn parse(text: &str) -> Result<LoadedConfig, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Schema(format!("invalid JSON: {e}")))?;
    let hash = config_hash(&value);
    let config: RunConfig = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        CliError::Schema(format!("at `{path}`: {}", e.into_inner()))
    })?;
    validate(&config)?;
    Ok(LoadedConfig { config, hash })
}

fn require_grid<'a>(grid: &'a Option<Vec<f64>>, name: &str, command: Command) -> Result<&'a [f64], CliError> {
    match grid {
        Some(g) if !g.is_empty() => {
            if g.iter().any(|v| !v.is_finite()) {
                return Err(CliError::Schema(format!("at `grids.{name}`: values must be finite")));
            }
            Ok(g)
        }
        Some(_) => Err(CliError::Schema(format!("at `grids.{name}`: grid must be nonempty"))),
        None => Err(CliError::Schema(format!(
            "at `grids.{name}`: required by the {} command",
            command.name()
        ))),
    }
}

impl RunConfig {
    pub fn grid(&self, name: &str) -> Result<&[f64], CliError> {
        let g = match name {
            "alpha" => &self.grids.alpha,
            "u" => &self.grids.u,
            "frequencies" => &self.grids.frequencies,
            "epsilon" => &self.grids.epsilon,
            "omega" => &self.grids.omega,
            _ => unreachable!("unknown grid {name}"),
        };
        require_grid(g, name, self.command)
    }

    pub fn scheme_config(&self) -> Result<SchemeConfig, CliError> {
        self.scheme
            .ok_or_else(|| CliError::Schema(format!("at `scheme`: required by the {} command", self.command.name())))
    }

    pub fn simulation(&self) -> Result<&SimulationConfig, CliError> {
        self.simulation.as_ref().ok_or_else(|| {
            CliError::Schema(format!(
                "at `simulation`: required (with a seed) by the {} command",
                self.command.name()
            ))
        })
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let c = cfg.command;
    match c {
        Command::EvalTransform => {
            cfg.grid("alpha")?;
        }
        Command::Invert | Command::Risk => {
            cfg.grid("u")?;
        }
        Command::Simulate => {
            cfg.grid("alpha")?;
        }
        Command::Verify => {
            cfg.grid("alpha")?;
            cfg.grid("u")?;
            cfg.grid("frequencies")?;
        }
        Command::RuleOfThumb => {
            cfg.grid("epsilon")?;
        }
    }
    // Optional grids that are present must still be usable.
    let present = [
        ("alpha", &cfg.grids.alpha),
        ("u", &cfg.grids.u),
        ("frequencies", &cfg.grids.frequencies),
        ("epsilon", &cfg.grids.epsilon),
        ("omega", &cfg.grids.omega),
    ];
    for (name, grid) in present {
        if grid.is_some() {
            require_grid(grid, name, c)?;
        }
    }
    if !matches!(c, Command::RuleOfThumb) {
        cfg.scheme_config()?;
    }
    if c.needs_simulation() {
        cfg.simulation()?;
    }
    Ok(())
}
