//! Ruin and bankruptcy probabilities of the Cramér–Lundberg model
//! `Y(t) = -rt + Σ B_i`: exact formulas, light- and heavy-tailed asymptotes,
//! and the minimal inspection rate for a given prefactor loss.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{JumpLaw, LevyModel};
use crate::roots::RootSolveConfig;
use crate::transforms::KilledMaximum;

fn cramer_lundberg_parts(model: &LevyModel) -> Result<(f64, f64, &JumpLaw)> {
    match (model, model.rates()) {
        (LevyModel::SpectrallyPositive { claims, .. }, Some((r, lambda))) => Ok((r, lambda, claims)),
        _ => Err(Error::Regime(format!(
            "ruin quantities need a spectrally positive model, got {:?}",
            model.orientation()
        ))),
    }
}

fn require_positive_loading(model: &LevyModel) -> Result<()> {
    if model.safety_loading() > 0.0 {
        Ok(())
    } else {
        Err(Error::Regime(format!(
            "safety loading {} is not positive: ruin and bankruptcy are certain",
            model.safety_loading()
        )))
    }
}

/// `p(u) = λ/(rμ) e^{-(μ - λ/r)u}` for exponential(μ) claims.
pub fn ruin_exact_exponential(model: &LevyModel, u: f64) -> Result<f64> {
    let (r, lambda, claims) = cramer_lundberg_parts(model)?;
    let JumpLaw::Exponential { rate } = claims else {
        return Err(Error::UnsupportedMoment(format!(
            "no closed-form ruin probability for {} claims; invert the transform or simulate",
            claims.name()
        )));
    };
    require_positive_loading(model)?;
    if !(u >= 0.0) {
        return Err(Error::domain("ruin_exact_exponential", u, "u >= 0"));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(lambda / (r * rate) * (-(rate - lambda / r) * u).exp())
}

/// Light-tailed asymptote `γ e^{-θ* u}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CramerLundberg {
    pub value: f64,
    pub decay_rate: f64,
    pub prefactor: f64,
}

/// `p(u) ~ γ e^{-θ* u}` with `γ = -φ'(0)/φ'(-θ*)`.
pub fn cramer_lundberg_asymptote(model: &LevyModel, u: f64, cfg: &RootSolveConfig) -> Result<CramerLundberg> {
    cramer_lundberg_parts(model)?;
    let decay_rate = model.adjustment_coefficient(cfg)?;
    let prefactor = -model.safety_loading() / model.exponent_d1(-decay_rate)?;
    Ok(CramerLundberg {
        value: prefactor * (-decay_rate * u).exp(),
        decay_rate,
        prefactor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailRegime {
    Light,
    Heavy,
}

/// Constants of the bankruptcy asymptote.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoteReport {
    pub regime: TailRegime,
    /// `θ*`, shared by ruin and bankruptcy.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_rate: Option<f64>,
    /// `γ`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ruin_prefactor: Option<f64>,
    /// `γ̃ = γ ψ(ω)/(ψ(ω)+θ*)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bankruptcy_prefactor: Option<f64>,
    /// `γ̃` recomputed as `-φ̃'(0)/φ̃'(-θ*)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bankruptcy_prefactor_derivative: Option<f64>,
    /// `ψ(ω)/(ψ(ω)+θ*)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inspection_ratio: Option<f64>,
    /// `|φ̃(-θ*)|` with `φ̃(α) = α - ψ(ω)(1 - E e^{-αZ⁺})`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_point_residual: Option<f64>,
    /// The other solution `-ψ(ω)` of the fixed-point equation, rejected as negative.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejected_root: Option<f64>,
    /// `λE B/(r - λE B)` in the heavy-tailed regime.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heavy_prefactor: Option<f64>,
}

/// `p̃(u) ~ γ̃ e^{-θ* u}` for light-tailed claims under Poisson(ω) inspection.
pub fn bankruptcy_asymptote_light(
    model: &LevyModel,
    omega: f64,
    u: f64,
    cfg: &RootSolveConfig,
) -> Result<(f64, AsymptoteReport)> {
    if !(omega.is_finite() && omega > 0.0) {
        return Err(Error::InvalidParameter(format!("inspection rate must be > 0, got {omega}")));
    }
    let cl = cramer_lundberg_asymptote(model, u, cfg)?;
    let theta = cl.decay_rate;
    let up = KilledMaximum::new(model, omega, cfg)?;
    let root = up.root();
    let ratio = root / (root + theta);
    let prefactor = cl.prefactor * ratio;

    let fixed_point_residual = (-theta - root * (1.0 - up.lst(-theta)?)).abs();

    // -φ̃'(0)/φ̃'(-θ*) with φ̃'(α) = 1 + ψ(ω) d/dα E e^{-αZ⁺}; at α = -θ*
    // (where φ vanishes) the derivative of the transform is
    // (-ω + (ψ+θ*)φ'(-θ*))/(ψω).
    let mean_up = 1.0 / root - model.safety_loading() / omega;
    let d_lst = (-omega + (root + theta) * model.exponent_d1(-theta)?) / (root * omega);
    let derivative_route = -(1.0 - root * mean_up) / (1.0 + root * d_lst);

    Ok((
        prefactor * (-theta * u).exp(),
        AsymptoteReport {
            regime: TailRegime::Light,
            decay_rate: Some(theta),
            ruin_prefactor: Some(cl.prefactor),
            bankruptcy_prefactor: Some(prefactor),
            bankruptcy_prefactor_derivative: Some(derivative_route),
            inspection_ratio: Some(ratio),
            fixed_point_residual: Some(fixed_point_residual),
            rejected_root: Some(-root),
            heavy_prefactor: None,
        },
    ))
}

/// `ω(1 - ψ(ω)/(ψ(ω)+θ*))`, which increases to `rθ*` as `ω → ∞`.
pub fn inspection_shortfall(model: &LevyModel, omega: f64, cfg: &RootSolveConfig) -> Result<f64> {
    let theta = model.adjustment_coefficient(cfg)?;
    let root = model.exponent_inverse(omega, cfg)?;
    Ok(omega * theta / (root + theta))
}

/// Minimal inspection rate for a relative prefactor loss `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleOfThumb {
    pub epsilon: f64,
    /// `rθ*/ε`, from the large-ω behaviour of the shortfall.
    pub omega_min: f64,
    /// The rate solving `1 - ψ(ω)/(ψ(ω)+θ*) = ε` exactly.
    pub omega_exact: f64,
}

/// Solves `θ*/(ψ(ω)+θ*) = ε`: `ψ(ω) = θ*(1-ε)/ε`, hence `ω = φ(θ*(1-ε)/ε)`.
pub fn rule_of_thumb_rate(model: &LevyModel, epsilon: f64, cfg: &RootSolveConfig) -> Result<RuleOfThumb> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("ε must lie in (0, 1), got {epsilon}")));
    }
    let (r, _, _) = cramer_lundberg_parts(model)?;
    let theta = model.adjustment_coefficient(cfg)?;
    let omega_exact = model.laplace_exponent(theta * (1.0 - epsilon) / epsilon)?;
    Ok(RuleOfThumb {
        epsilon,
        omega_min: r * theta / epsilon,
        omega_exact,
    })
}

/// Stationary-excess law of a claim distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualLaw {
    pub base: JumpLaw,
}

impl ResidualLaw {
    pub fn new(base: JumpLaw) -> Result<Self> {
        base.validate()?;
        if !base.mean().is_finite() {
            return Err(Error::UnsupportedMoment("residual law needs a finite claim mean".into()));
        }
        Ok(Self { base })
    }

    pub fn ccdf(&self, u: f64) -> Result<f64> {
        self.base.residual_ccdf(u)
    }
}

/// `P(B^res > u) = ∫_u^∞ P(B > y) dy / E B`.
pub fn residual_ccdf(law: &JumpLaw, u: f64) -> Result<f64> {
    law.residual_ccdf(u)
}

fn heavy_parts(model: &LevyModel) -> Result<(f64, f64, &JumpLaw)> {
    let (r, lambda, claims) = cramer_lundberg_parts(model)?;
    if claims.is_light_tailed() {
        return Err(Error::Regime(format!(
            "{} claims are light-tailed; use the Cramér–Lundberg asymptote",
            claims.name()
        )));
    }
    Ok((r, lambda, claims))
}

/// Prefactor `λE B/(r - λE B)` of the subexponential asymptote.
pub fn heavy_prefactor(model: &LevyModel) -> Result<f64> {
    let (r, lambda, claims) = heavy_parts(model)?;
    require_positive_loading(model)?;
    let load = lambda * claims.mean();
    Ok(load / (r - load))
}

/// `p̃(u) ~ p(u) ~ λE B/(r - λE B) · P(B^res > u)`, the same for every
/// inspection rate.
pub fn bankruptcy_asymptote_heavy(model: &LevyModel, u: f64) -> Result<(f64, AsymptoteReport)> {
    let prefactor = heavy_prefactor(model)?;
    let (_, _, claims) = heavy_parts(model)?;
    Ok((
        prefactor * claims.residual_ccdf(u)?,
        AsymptoteReport {
            regime: TailRegime::Heavy,
            decay_rate: None,
            ruin_prefactor: None,
            bankruptcy_prefactor: None,
            bankruptcy_prefactor_derivative: None,
            inspection_ratio: None,
            fixed_point_residual: None,
            rejected_root: None,
            heavy_prefactor: Some(prefactor),
        },
    ))
}

/// `P(Ȳ(T_ω) > u) ~ (λ/ω) P(B > u)` for heavy-tailed claims.
pub fn running_max_tail_heavy(model: &LevyModel, omega: f64, u: f64) -> Result<f64> {
    let (_, lambda, claims) = heavy_parts(model)?;
    if !(omega > 0.0) {
        return Err(Error::InvalidParameter(format!("inspection rate must be > 0, got {omega}")));
    }
    Ok(lambda / omega * claims.ccdf(u))
}
