use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::JumpLaw;
use crate::error::{Error, Result};
use crate::roots::{newton_bracketed, RootSolveConfig};

/// Which side the jumps of the process are on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    SpectrallyPositive,
    SpectrallyNegative,
    BrownianDrift,
}

/// A spectrally one-sided Lévy process.
///
/// * `SpectrallyPositive`: `Y(t) = -r t + Σ_{i≤N(t)} B_i`, exponent
///   `φ(α) = log E e^{-αY(1)} = rα - λ(1 - b(α))`.
/// * `SpectrallyNegative`: `Y(t) = r t - Σ_{i≤N(t)} B_i`, cumulant
///   `Φ(α) = log E e^{αY(1)} = rα - λ(1 - b(α))`.
/// * `BrownianDrift`: `Y(t) = μ t + σ W(t)`. It has no upward jumps, so it is
///   handled with the cumulant convention `Φ(α) = μα + σ²α²/2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevyModel {
    SpectrallyPositive {
        #[serde(rename = "r")]
        premium_rate: f64,
        #[serde(rename = "lambda")]
        arrival_rate: f64,
        claims: JumpLaw,
    },
    SpectrallyNegative {
        #[serde(rename = "r")]
        premium_rate: f64,
        #[serde(rename = "lambda")]
        arrival_rate: f64,
        claims: JumpLaw,
    },
    BrownianDrift {
        drift: f64,
        variance: f64,
    },
}

impl LevyModel {
    pub fn spectrally_positive(r: f64, lambda: f64, claims: JumpLaw) -> Result<Self> {
        let m = LevyModel::SpectrallyPositive {
            premium_rate: r,
            arrival_rate: lambda,
            claims,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn spectrally_negative(r: f64, lambda: f64, claims: JumpLaw) -> Result<Self> {
        let m = LevyModel::SpectrallyNegative {
            premium_rate: r,
            arrival_rate: lambda,
            claims,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn brownian(drift: f64, variance: f64) -> Result<Self> {
        let m = LevyModel::BrownianDrift { drift, variance };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                claims,
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                claims,
            } => {
                if !(premium_rate.is_finite() && *premium_rate > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "premium rate r must be > 0, got {premium_rate}"
                    )));
                }
                if !(arrival_rate.is_finite() && *arrival_rate >= 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "arrival rate lambda must be >= 0, got {arrival_rate}"
                    )));
                }
                claims.validate()
            }
            LevyModel::BrownianDrift { drift, variance } => {
                if !drift.is_finite() {
                    return Err(Error::InvalidParameter("brownian drift must be finite".into()));
                }
                if !(variance.is_finite() && *variance > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "brownian variance must be > 0, got {variance}"
                    )));
                }
                Ok(())
            }
        }
    }

    pub fn orientation(&self) -> Orientation {
        match self {
            LevyModel::SpectrallyPositive { .. } => Orientation::SpectrallyPositive,
            LevyModel::SpectrallyNegative { .. } => Orientation::SpectrallyNegative,
            LevyModel::BrownianDrift { .. } => Orientation::BrownianDrift,
        }
    }

    /// True when the running maximum law is exponential (no upward jumps).
    pub fn has_exponential_maximum(&self) -> bool {
        !matches!(self, LevyModel::SpectrallyPositive { .. })
    }

    pub fn claims(&self) -> Option<&JumpLaw> {
        match self {
            LevyModel::SpectrallyPositive { claims, .. } | LevyModel::SpectrallyNegative { claims, .. } => {
                Some(claims)
            }
            LevyModel::BrownianDrift { .. } => None,
        }
    }

    /// `(r, λ)` for the compound-Poisson kinds.
    pub fn rates(&self) -> Option<(f64, f64)> {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                ..
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                ..
            } => Some((*premium_rate, *arrival_rate)),
            LevyModel::BrownianDrift { .. } => None,
        }
    }

    pub fn in_domain(&self, re: f64) -> bool {
        match self.claims() {
            Some(law) => law.in_domain(re),
            None => true,
        }
    }

    /// The exponent `φ` (spectrally positive) or cumulant `Φ` (otherwise).
    pub fn laplace_exponent(&self, alpha: f64) -> Result<f64> {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                claims,
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                claims,
            } => Ok(premium_rate * alpha - arrival_rate * claims.one_minus_lst_real(alpha)?),
            LevyModel::BrownianDrift { drift, variance } => Ok(drift * alpha + 0.5 * variance * alpha * alpha),
        }
    }

    pub fn laplace_exponent_complex(&self, alpha: Complex64) -> Result<Complex64> {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                claims,
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                claims,
            } => Ok(alpha * *premium_rate - claims.one_minus_lst(alpha)? * *arrival_rate),
            LevyModel::BrownianDrift { drift, variance } => Ok(alpha * *drift + alpha * alpha * (0.5 * variance)),
        }
    }

    pub fn exponent_d1(&self, alpha: f64) -> Result<f64> {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                claims,
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                claims,
            } => Ok(premium_rate + arrival_rate * claims.lst_d1(alpha)?),
            LevyModel::BrownianDrift { drift, variance } => Ok(drift + variance * alpha),
        }
    }

    pub fn exponent_d2(&self, alpha: f64) -> Result<f64> {
        match self {
            LevyModel::SpectrallyPositive {
                arrival_rate, claims, ..
            }
            | LevyModel::SpectrallyNegative {
                arrival_rate, claims, ..
            } => {
                if *arrival_rate == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(arrival_rate * claims.lst_d2(alpha)?)
                }
            }
            LevyModel::BrownianDrift { variance, .. } => Ok(*variance),
        }
    }

    /// Derivative of the exponent at zero: `r - λE B` for the compound-Poisson
    /// kinds, `μ` for Brownian motion.
    pub fn safety_loading(&self) -> f64 {
        match self {
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                claims,
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                claims,
            } => premium_rate - arrival_rate * claims.mean(),
            LevyModel::BrownianDrift { drift, .. } => *drift,
        }
    }

    /// Whether the all-time running maximum is finite, which is what `β = 0`
    /// requires.
    pub fn admits_zero_killing(&self) -> bool {
        match self.orientation() {
            Orientation::SpectrallyPositive => self.safety_loading() > 0.0,
            _ => self.safety_loading() < 0.0,
        }
    }

    /// The right-inverse `ψ(β)` (resp. `Ψ(β)`): the root of `exponent(α) = β` on
    /// the increasing branch of the exponent.
    pub fn exponent_inverse(&self, beta: f64, cfg: &RootSolveConfig) -> Result<f64> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::domain("exponent inverse", beta, "β >= 0"));
        }
        if beta == 0.0 && !self.admits_zero_killing() {
            return Err(Error::Regime(format!(
                "β = 0 requires a finite all-time maximum, but the exponent has slope {} at 0",
                self.safety_loading()
            )));
        }
        match self {
            LevyModel::BrownianDrift { drift, variance } => {
                let disc = (drift * drift + 2.0 * variance * beta).sqrt();
                Ok(if *drift > 0.0 {
                    2.0 * beta / (drift + disc)
                } else {
                    (disc - drift) / variance
                })
            }
            LevyModel::SpectrallyPositive {
                premium_rate,
                arrival_rate,
                ..
            }
            | LevyModel::SpectrallyNegative {
                premium_rate,
                arrival_rate,
                ..
            } => {
                cfg.validate()?;
                let loading = self.safety_loading();
                if beta == 0.0 && loading > 0.0 {
                    return Ok(0.0);
                }
                let mut hi = ((beta + arrival_rate) / premium_rate).max(f64::MIN_POSITIVE);
                while self.laplace_exponent(hi)? < beta {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return Err(Error::NoConvergence {
                            iterations: 0,
                            lo: 0.0,
                            hi,
                        });
                    }
                }
                let lo = if loading >= 0.0 { 0.0 } else { self.exponent_argmin(hi, cfg)? };
                newton_bracketed(
                    |a| match (self.laplace_exponent(a), self.exponent_d1(a)) {
                        (Ok(f), Ok(d)) => (f - beta, d),
                        _ => (f64::NAN, f64::NAN),
                    },
                    lo,
                    hi,
                    if beta > 0.0 { beta.min(1.0) } else { 1.0 },
                    cfg,
                )
            }
        }
    }

    /// Minimiser of the exponent on `[0, hi]` when its slope at 0 is negative.
    fn exponent_argmin(&self, mut hi: f64, cfg: &RootSolveConfig) -> Result<f64> {
        while self.exponent_d1(hi)? <= 0.0 {
            hi *= 2.0;
        }
        newton_bracketed(
            |a| match (self.exponent_d1(a), self.exponent_d2(a)) {
                (Ok(f), Ok(d)) => (f, d),
                _ => (f64::NAN, f64::NAN),
            },
            0.0,
            hi,
            1.0,
            cfg,
        )
    }

    /// Adjustment coefficient `θ* > 0` with `φ(-θ*) = 0`.
    pub fn adjustment_coefficient(&self, cfg: &RootSolveConfig) -> Result<f64> {
        let claims = match self {
            LevyModel::SpectrallyPositive { claims, .. } => claims,
            _ => {
                return Err(Error::Regime(
                    "adjustment coefficient is defined for spectrally positive (Cramér–Lundberg) models".into(),
                ))
            }
        };
        if !claims.is_light_tailed() {
            return Err(Error::Regime(format!(
                "{} claims are heavy-tailed: no adjustment coefficient exists, use the heavy-tailed asymptote",
                claims.name()
            )));
        }
        if self.safety_loading() <= 0.0 {
            return Err(Error::Regime("adjustment coefficient needs positive safety loading".into()));
        }
        if self.rates().map(|(_, l)| l) == Some(0.0) {
            return Err(Error::Regime("no claims: ruin is impossible and θ* is undefined".into()));
        }
        cfg.validate()?;
        // g(θ) = φ(-θ) is convex with g(0) = 0 and g'(0) < 0.
        let g = |t: f64| self.laplace_exponent(-t);
        let dg = |t: f64| self.exponent_d1(-t).map(|d| -d);
        let abscissa = -claims.convergence_abscissa();
        let mut hi = None;
        if abscissa.is_finite() {
            for k in 1..=60 {
                let t = abscissa * (1.0 - 0.5f64.powi(k));
                if g(t)? > 0.0 {
                    hi = Some(t);
                    break;
                }
            }
        } else {
            let mut t = 1.0;
            for _ in 0..1000 {
                if g(t)? > 0.0 {
                    hi = Some(t);
                    break;
                }
                t *= 2.0;
            }
        }
        let hi = hi.ok_or(Error::NoConvergence {
            iterations: 60,
            lo: 0.0,
            hi: abscissa,
        })?;
        let argmin = newton_bracketed(
            |t| match (dg(t), self.exponent_d2(-t)) {
                (Ok(f), Ok(d)) => (f, d),
                _ => (f64::NAN, f64::NAN),
            },
            0.0,
            hi,
            1.0,
            cfg,
        )?;
        newton_bracketed(
            |t| match (g(t), dg(t)) {
                (Ok(f), Ok(d)) => (f, d),
                _ => (f64::NAN, f64::NAN),
            },
            argmin,
            hi,
            1.0,
            cfg,
        )
    }
}
