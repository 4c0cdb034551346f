use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::integrate_adaptive;

const PARETO_REL_TOL: f64 = 1e-10;
const PARETO_ABS_TOL: f64 = 1e-15;

/// Nonnegative claim (jump) size distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum JumpLaw {
    Exponential { rate: f64 },
    Erlang { shape: u32, rate: f64 },
    Hyperexponential { weights: Vec<f64>, rates: Vec<f64> },
    /// Lomax law with ccdf `(1 + x/scale)^(-shape)`.
    ParetoLomax { shape: f64, scale: f64 },
    Deterministic { size: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl JumpLaw {
    pub fn exponential(rate: f64) -> Result<Self> {
        let law = JumpLaw::Exponential { rate };
        law.validate()?;
        Ok(law)
    }

    pub fn erlang(shape: u32, rate: f64) -> Result<Self> {
        let law = JumpLaw::Erlang { shape, rate };
        law.validate()?;
        Ok(law)
    }

    pub fn hyperexponential(weights: Vec<f64>, rates: Vec<f64>) -> Result<Self> {
        let law = JumpLaw::Hyperexponential { weights, rates };
        law.validate()?;
        Ok(law)
    }

    pub fn pareto_lomax(shape: f64, scale: f64) -> Result<Self> {
        let law = JumpLaw::ParetoLomax { shape, scale };
        law.validate()?;
        Ok(law)
    }

    pub fn deterministic(size: f64) -> Result<Self> {
        let law = JumpLaw::Deterministic { size };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            JumpLaw::Exponential { rate } => positive("exponential rate", *rate),
            JumpLaw::Erlang { shape, rate } => {
                if *shape == 0 {
                    return Err(Error::InvalidParameter("erlang shape must be >= 1".into()));
                }
                positive("erlang rate", *rate)
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                if weights.is_empty() || weights.len() != rates.len() {
                    return Err(Error::InvalidParameter(
                        "hyperexponential needs equally many (>= 1) weights and rates".into(),
                    ));
                }
                for (&p, &mu) in weights.iter().zip(rates) {
                    positive("hyperexponential weight", p)?;
                    positive("hyperexponential rate", mu)?;
                }
                let total: f64 = weights.iter().sum();
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "hyperexponential weights sum to {total}, expected 1"
                    )));
                }
                Ok(())
            }
            JumpLaw::ParetoLomax { shape, scale } => {
                if !(shape.is_finite() && *shape > 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "pareto shape must be > 1 for a finite mean, got {shape}"
                    )));
                }
                positive("pareto scale", *scale)
            }
            JumpLaw::Deterministic { size } => positive("deterministic size", *size),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            JumpLaw::Exponential { .. } => "exponential",
            JumpLaw::Erlang { .. } => "erlang",
            JumpLaw::Hyperexponential { .. } => "hyperexponential",
            JumpLaw::ParetoLomax { .. } => "pareto_lomax",
            JumpLaw::Deterministic { .. } => "deterministic",
        }
    }

    pub fn is_light_tailed(&self) -> bool {
        !matches!(self, JumpLaw::ParetoLomax { .. })
    }

    /// Infimum of the real parts for which `b(α)` is finite.
    ///
    /// For light-tailed laws the region is open (`Re α > abscissa`); for the
    /// Lomax law it is closed at 0.
    pub fn convergence_abscissa(&self) -> f64 {
        match self {
            JumpLaw::Exponential { rate } | JumpLaw::Erlang { rate, .. } => -rate,
            JumpLaw::Hyperexponential { rates, .. } => -rates.iter().cloned().fold(f64::INFINITY, f64::min),
            JumpLaw::ParetoLomax { .. } => 0.0,
            JumpLaw::Deterministic { .. } => f64::NEG_INFINITY,
        }
    }

    pub fn in_domain(&self, re: f64) -> bool {
        match self {
            JumpLaw::ParetoLomax { .. } => re >= 0.0,
            _ => re > self.convergence_abscissa(),
        }
    }

    fn check_domain(&self, alpha: Complex64) -> Result<()> {
        if self.in_domain(alpha.re) {
            Ok(())
        } else {
            let boundary = match self {
                JumpLaw::ParetoLomax { .. } => "Re α >= 0".to_string(),
                _ => format!("Re α > {}", self.convergence_abscissa()),
            };
            Err(Error::domain(format!("{} claim transform", self.name()), alpha, boundary))
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            JumpLaw::Exponential { rate } => 1.0 / rate,
            JumpLaw::Erlang { shape, rate } => *shape as f64 / rate,
            JumpLaw::Hyperexponential { weights, rates } => {
                weights.iter().zip(rates).map(|(p, mu)| p / mu).sum()
            }
            JumpLaw::ParetoLomax { shape, scale } => scale / (shape - 1.0),
            JumpLaw::Deterministic { size } => *size,
        }
    }

    /// `E B²`; infinite for Lomax laws with shape <= 2.
    pub fn second_moment(&self) -> f64 {
        match self {
            JumpLaw::Exponential { rate } => 2.0 / (rate * rate),
            JumpLaw::Erlang { shape, rate } => {
                let m = *shape as f64;
                m * (m + 1.0) / (rate * rate)
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                weights.iter().zip(rates).map(|(p, mu)| 2.0 * p / (mu * mu)).sum()
            }
            JumpLaw::ParetoLomax { shape, scale } => {
                if *shape > 2.0 {
                    2.0 * scale * scale / ((shape - 1.0) * (shape - 2.0))
                } else {
                    f64::INFINITY
                }
            }
            JumpLaw::Deterministic { size } => size * size,
        }
    }

    /// `P(B > x)`.
    pub fn ccdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 1.0;
        }
        match self {
            JumpLaw::Exponential { rate } => (-rate * x).exp(),
            JumpLaw::Erlang { shape, rate } => {
                let z = rate * x;
                let mut term = (-z).exp();
                let mut sum = term;
                for j in 1..*shape {
                    term *= z / j as f64;
                    sum += term;
                }
                sum
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                weights.iter().zip(rates).map(|(p, mu)| p * (-mu * x).exp()).sum()
            }
            JumpLaw::ParetoLomax { shape, scale } => (1.0 + x / scale).powf(-shape),
            JumpLaw::Deterministic { size } => {
                if x < *size {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Ccdf of the stationary-excess (residual) law, `∫_u^∞ P(B > y) dy / E B`.
    pub fn residual_ccdf(&self, u: f64) -> Result<f64> {
        let mean = self.mean();
        if !mean.is_finite() {
            return Err(Error::UnsupportedMoment(format!(
                "{} law has infinite mean: no residual law",
                self.name()
            )));
        }
        if u <= 0.0 {
            return Ok(1.0);
        }
        Ok(match self {
            JumpLaw::Exponential { rate } => (-rate * u).exp(),
            JumpLaw::Erlang { shape, rate } => {
                let m = *shape;
                let z = rate * u;
                let mut pois = (-z).exp();
                let mut sum = 0.0;
                for i in 0..m {
                    if i > 0 {
                        pois *= z / i as f64;
                    }
                    sum += (m - i) as f64 * pois;
                }
                sum / m as f64
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                weights.iter().zip(rates).map(|(p, mu)| p * (-mu * u).exp() / mu).sum::<f64>() / mean
            }
            JumpLaw::ParetoLomax { shape, scale } => (1.0 + u / scale).powf(1.0 - shape),
            JumpLaw::Deterministic { size } => (size - u).max(0.0) / size,
        })
    }

    /// Draws from the residual law; requires a finite mean.
    pub fn sample_residual<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Exponential { .. } => self.sample(rng),
            JumpLaw::Erlang { shape, rate } => {
                let phases = rng.random_range(1..=*shape);
                (0..phases).map(|_| rng.sample::<f64, _>(Exp1)).sum::<f64>() / rate
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                let mean = self.mean();
                let u: f64 = rng.random::<f64>() * mean;
                let mut acc = 0.0;
                let mut idx = rates.len() - 1;
                for (i, (p, mu)) in weights.iter().zip(rates).enumerate() {
                    acc += p / mu;
                    if u < acc {
                        idx = i;
                        break;
                    }
                }
                rng.sample::<f64, _>(Exp1) / rates[idx]
            }
            JumpLaw::ParetoLomax { shape, scale } => {
                let u: f64 = rng.random();
                scale * ((1.0 - u).powf(-1.0 / (shape - 1.0)) - 1.0)
            }
            JumpLaw::Deterministic { size } => rng.random::<f64>() * size,
        }
    }

    /// Claim transform `b(α) = E e^{-αB}` at a complex argument.
    pub fn lst(&self, alpha: Complex64) -> Result<Complex64> {
        self.check_domain(alpha)?;
        Ok(match self {
            JumpLaw::Exponential { rate } => *rate / (*rate + alpha),
            JumpLaw::Erlang { shape, rate } => (*rate / (*rate + alpha)).powu(*shape),
            JumpLaw::Hyperexponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(p, mu)| *p * *mu / (*mu + alpha))
                .sum(),
            JumpLaw::ParetoLomax { shape, scale } => {
                if alpha == Complex64::new(0.0, 0.0) {
                    Complex64::new(1.0, 0.0)
                } else {
                    pareto_ray_integral(*shape, *scale, alpha, |w| (-w).exp())?
                }
            }
            JumpLaw::Deterministic { size } => (-alpha * *size).exp(),
        })
    }

    /// `1 - b(α)`, evaluated without cancellation near `α = 0`.
    pub fn one_minus_lst(&self, alpha: Complex64) -> Result<Complex64> {
        self.check_domain(alpha)?;
        Ok(match self {
            JumpLaw::Exponential { rate } => alpha / (*rate + alpha),
            JumpLaw::Erlang { shape, rate } => {
                let q = *rate / (*rate + alpha);
                let mut geometric = Complex64::new(0.0, 0.0);
                let mut power = Complex64::new(1.0, 0.0);
                for _ in 0..*shape {
                    geometric += power;
                    power *= q;
                }
                alpha / (*rate + alpha) * geometric
            }
            JumpLaw::Hyperexponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(p, mu)| *p * alpha / (*mu + alpha))
                .sum(),
            JumpLaw::ParetoLomax { shape, scale } => {
                if alpha == Complex64::new(0.0, 0.0) {
                    Complex64::new(0.0, 0.0)
                } else {
                    pareto_ray_integral(*shape, *scale, alpha, |w| -(-w).exp_m1())?
                }
            }
            JumpLaw::Deterministic { size } => -expm1_complex(-alpha * *size),
        })
    }

    pub fn lst_real(&self, alpha: f64) -> Result<f64> {
        match self {
            JumpLaw::ParetoLomax { .. } => Ok(self.lst(Complex64::new(alpha, 0.0))?.re),
            _ => {
                self.check_domain(Complex64::new(alpha, 0.0))?;
                Ok(match self {
                    JumpLaw::Exponential { rate } => rate / (rate + alpha),
                    JumpLaw::Erlang { shape, rate } => (rate / (rate + alpha)).powi(*shape as i32),
                    JumpLaw::Hyperexponential { weights, rates } => {
                        weights.iter().zip(rates).map(|(p, mu)| p * mu / (mu + alpha)).sum()
                    }
                    JumpLaw::Deterministic { size } => (-alpha * size).exp(),
                    JumpLaw::ParetoLomax { .. } => unreachable!(),
                })
            }
        }
    }

    pub fn one_minus_lst_real(&self, alpha: f64) -> Result<f64> {
        match self {
            JumpLaw::ParetoLomax { .. } => Ok(self.one_minus_lst(Complex64::new(alpha, 0.0))?.re),
            _ => {
                self.check_domain(Complex64::new(alpha, 0.0))?;
                Ok(match self {
                    JumpLaw::Exponential { rate } => alpha / (rate + alpha),
                    JumpLaw::Erlang { shape, rate } => {
                        let m = *shape as f64;
                        -(m * (-alpha / (rate + alpha)).ln_1p()).exp_m1()
                    }
                    JumpLaw::Hyperexponential { weights, rates } => {
                        weights.iter().zip(rates).map(|(p, mu)| p * alpha / (mu + alpha)).sum()
                    }
                    JumpLaw::Deterministic { size } => -(-alpha * size).exp_m1(),
                    JumpLaw::ParetoLomax { .. } => unreachable!(),
                })
            }
        }
    }

    /// `b'(α) = -E[B e^{-αB}]` for real `α`.
    pub fn lst_d1(&self, alpha: f64) -> Result<f64> {
        self.check_domain(Complex64::new(alpha, 0.0))?;
        Ok(match self {
            JumpLaw::Exponential { rate } => -rate / (rate + alpha).powi(2),
            JumpLaw::Erlang { shape, rate } => {
                let m = *shape as f64;
                -m * rate.powi(*shape as i32) / (rate + alpha).powi(*shape as i32 + 1)
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                -weights.iter().zip(rates).map(|(p, mu)| p * mu / (mu + alpha).powi(2)).sum::<f64>()
            }
            JumpLaw::ParetoLomax { shape, scale } => {
                if alpha == 0.0 {
                    -self.mean()
                } else {
                    let (a, s) = (*shape, *scale);
                    let v = integrate_adaptive(
                        |v| {
                            if v <= 0.0 {
                                return Complex64::new(0.0, 0.0);
                            }
                            let x = s * (1.0 / v - 1.0);
                            Complex64::new((1.0 - v) * v.powf(a - 2.0) * (-alpha * x).exp(), 0.0)
                        },
                        0.0,
                        1.0,
                        PARETO_ABS_TOL,
                        PARETO_REL_TOL,
                    )?;
                    -a * s * v.re
                }
            }
            JumpLaw::Deterministic { size } => -size * (-alpha * size).exp(),
        })
    }

    /// `b''(α) = E[B² e^{-αB}]` for real `α`; may be `+inf` at `α = 0`.
    pub fn lst_d2(&self, alpha: f64) -> Result<f64> {
        self.check_domain(Complex64::new(alpha, 0.0))?;
        Ok(match self {
            JumpLaw::Exponential { rate } => 2.0 * rate / (rate + alpha).powi(3),
            JumpLaw::Erlang { shape, rate } => {
                let m = *shape as f64;
                m * (m + 1.0) * rate.powi(*shape as i32) / (rate + alpha).powi(*shape as i32 + 2)
            }
            JumpLaw::Hyperexponential { weights, rates } => weights
                .iter()
                .zip(rates)
                .map(|(p, mu)| 2.0 * p * mu / (mu + alpha).powi(3))
                .sum(),
            JumpLaw::ParetoLomax { shape, scale } => {
                if alpha == 0.0 {
                    self.second_moment()
                } else {
                    let (a, s) = (*shape, *scale);
                    let v = integrate_adaptive(
                        |v| {
                            if v <= 0.0 {
                                return Complex64::new(0.0, 0.0);
                            }
                            let x = s * (1.0 / v - 1.0);
                            Complex64::new((1.0 - v).powi(2) * v.powf(a - 3.0) * (-alpha * x).exp(), 0.0)
                        },
                        0.0,
                        1.0,
                        PARETO_ABS_TOL,
                        PARETO_REL_TOL,
                    )?;
                    a * s * s * v.re
                }
            }
            JumpLaw::Deterministic { size } => size * size * (-alpha * size).exp(),
        })
    }

    /// Draws one claim.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            JumpLaw::Exponential { rate } => rng.sample::<f64, _>(Exp1) / rate,
            JumpLaw::Erlang { shape, rate } => {
                (0..*shape).map(|_| rng.sample::<f64, _>(Exp1)).sum::<f64>() / rate
            }
            JumpLaw::Hyperexponential { weights, rates } => {
                let u: f64 = rng.random();
                let mut acc = 0.0;
                let mut idx = rates.len() - 1;
                for (i, p) in weights.iter().enumerate() {
                    acc += p;
                    if u < acc {
                        idx = i;
                        break;
                    }
                }
                rng.sample::<f64, _>(Exp1) / rates[idx]
            }
            JumpLaw::ParetoLomax { shape, scale } => {
                let u: f64 = rng.random();
                scale * ((1.0 - u).powf(-1.0 / shape) - 1.0)
            }
            JumpLaw::Deterministic { size } => *size,
        }
    }
}

/// Lomax transform integrals taken along the ray `x = t e^{-iθ}`, `θ = arg α`,
/// on which `α x` is real, so the integrand does not oscillate.
///
/// Computes `∫_0^∞ kernel(|α| x') f(x) dx` with `f` the Lomax density, after the
/// substitution `t = s (1/v - 1)`.
fn pareto_ray_integral<K>(shape: f64, scale: f64, alpha: Complex64, kernel: K) -> Result<Complex64>
where
    K: Fn(f64) -> f64,
{
    let modulus = alpha.norm();
    let rot = Complex64::from_polar(1.0, -alpha.arg());
    let a = shape;
    let s = scale;
    let integral = integrate_adaptive(
        |v| {
            if v <= 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let w = modulus * s * (1.0 / v - 1.0);
            let base = Complex64::new(v, 0.0) + rot * (1.0 - v);
            base.powf(-a - 1.0) * (kernel(w) * v.powf(a - 1.0))
        },
        0.0,
        1.0,
        PARETO_ABS_TOL,
        PARETO_REL_TOL,
    )?;
    Ok(rot * integral * a)
}

/// `e^z - 1` with full relative accuracy for small `|z|`.
pub(crate) fn expm1_complex(z: Complex64) -> Complex64 {
    let (x, y) = (z.re, z.im);
    let half_sin = (0.5 * y).sin();
    Complex64::new(
        x.exp_m1() * y.cos() - 2.0 * half_sin * half_sin,
        x.exp() * y.sin(),
    )
}
