//! Closed-form transforms of running and inspected maxima, their moments,
//! and the algebraic check of the decomposition
//! `Ȳ(T_β) = Y_{β,ω} + Ȳ(T_{β+ω})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::{LevyModel, Orientation};
use crate::roots::RootSolveConfig;

/// Inspection-interval law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InspectionKind {
    /// Exponential(ω) inspection intervals.
    Poisson { omega: f64 },
    /// Erlang(k, kω) inspection intervals (mean 1/ω, squared CV 1/k).
    Erlang { k: u32, omega: f64 },
}

/// Inspection law together with the exponential killing rate `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InspectionScheme {
    pub kind: InspectionKind,
    pub beta: f64,
}

impl InspectionScheme {
    pub fn poisson(beta: f64, omega: f64) -> Result<Self> {
        let s = InspectionScheme {
            kind: InspectionKind::Poisson { omega },
            beta,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn erlang(beta: f64, omega: f64, k: u32) -> Result<Self> {
        let s = InspectionScheme {
            kind: InspectionKind::Erlang { k, omega },
            beta,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn omega(&self) -> f64 {
        match self.kind {
            InspectionKind::Poisson { omega } | InspectionKind::Erlang { omega, .. } => omega,
        }
    }

    /// Number of exponential phases per inspection interval.
    pub fn phases(&self) -> u32 {
        match self.kind {
            InspectionKind::Poisson { .. } => 1,
            InspectionKind::Erlang { k, .. } => k,
        }
    }

    /// Rate of each exponential phase, `kω`.
    pub fn phase_rate(&self) -> f64 {
        self.phases() as f64 * self.omega()
    }

    pub fn validate(&self) -> Result<()> {
        let omega = self.omega();
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidParameter(format!("inspection rate ω must be > 0, got {omega}")));
        }
        if self.phases() == 0 {
            return Err(Error::InvalidParameter("erlang inspection needs k >= 1".into()));
        }
        if !(self.beta.is_finite() && self.beta >= 0.0) {
            return Err(Error::InvalidParameter(format!("killing rate β must be >= 0, got {}", self.beta)));
        }
        Ok(())
    }

    /// Validates the scheme against a model: `β = 0` needs a finite all-time maximum.
    pub fn validate_for(&self, model: &LevyModel) -> Result<()> {
        self.validate()?;
        if self.beta == 0.0 && !model.admits_zero_killing() {
            return Err(Error::Regime(format!(
                "β = 0 needs a finite all-time maximum (exponent slope at 0 is {})",
                model.safety_loading()
            )));
        }
        Ok(())
    }
}

/// A transform sampled on a grid of real arguments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LstCurve {
    pub arguments: Vec<f64>,
    pub values: Vec<f64>,
}

impl LstCurve {
    pub fn evaluate<F>(arguments: &[f64], mut transform: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<f64>,
    {
        if arguments.iter().any(|a| !(*a >= 0.0)) {
            return Err(Error::InvalidParameter("LST arguments must be >= 0".into()));
        }
        if arguments.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("LST arguments must be sorted".into()));
        }
        let values = arguments.iter().map(|&a| transform(a)).collect::<Result<Vec<_>>>()?;
        Ok(LstCurve {
            arguments: arguments.to_vec(),
            values,
        })
    }
}

// Below this distance from ψ(ζ) the factor (ψ - α)/(ζ - φ(α)) is evaluated by
// its series around the removable singularity.
const SINGULAR_RADIUS: f64 = 1e-6;

/// Law of the running maximum `Ȳ(T_ζ)` with the right-inverse precomputed.
///
/// `ζ = 0` stands for the all-time maximum and requires a finite one.
#[derive(Debug, Clone)]
pub struct KilledMaximum<'a> {
    model: &'a LevyModel,
    zeta: f64,
    root: f64,
    slope_at_root: f64,
    curvature_at_root: f64,
}

impl<'a> KilledMaximum<'a> {
    pub fn new(model: &'a LevyModel, zeta: f64, cfg: &RootSolveConfig) -> Result<Self> {
        if !(zeta.is_finite() && zeta >= 0.0) {
            return Err(Error::domain("killed maximum", zeta, "ζ >= 0"));
        }
        let root = model.exponent_inverse(zeta, cfg)?;
        let (slope_at_root, curvature_at_root) = if model.has_exponential_maximum() {
            (f64::NAN, f64::NAN)
        } else {
            (model.exponent_d1(root)?, model.exponent_d2(root)?)
        };
        Ok(Self {
            model,
            zeta,
            root,
            slope_at_root,
            curvature_at_root,
        })
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn model(&self) -> &'a LevyModel {
        self.model
    }

    /// `ψ(ζ)` for spectrally positive models, `Ψ(ζ)` otherwise.
    pub fn root(&self) -> f64 {
        self.root
    }

    fn check(&self, re: f64) -> Result<()> {
        let ok = if self.model.has_exponential_maximum() {
            re > -self.root
        } else {
            self.model.in_domain(re)
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("running-maximum transform", re, "model convergence region"))
        }
    }

    /// `ζ/ψ(ζ)`, or its limit `φ'(0)` at `ζ = 0`.
    fn prefactor(&self) -> f64 {
        if self.zeta == 0.0 {
            self.model.safety_loading()
        } else {
            self.zeta / self.root
        }
    }

    /// `E e^{-α Ȳ(T_ζ)}` for real `α`.
    pub fn lst(&self, alpha: f64) -> Result<f64> {
        self.check(alpha)?;
        if alpha == 0.0 {
            return Ok(1.0);
        }
        if self.model.has_exponential_maximum() {
            return Ok(self.root / (self.root + alpha));
        }
        let delta = alpha - self.root;
        let ratio = if delta.abs() <= SINGULAR_RADIUS * self.root.max(1.0) {
            1.0 / (self.slope_at_root + self.curvature_term() * delta)
        } else {
            -delta / (self.zeta - self.model.laplace_exponent(alpha)?)
        };
        Ok(self.prefactor() * ratio)
    }

    /// The same transform at a complex argument.
    pub fn lst_complex(&self, alpha: Complex64) -> Result<Complex64> {
        self.check(alpha.re)?;
        if self.model.has_exponential_maximum() {
            return Ok(self.root / (self.root + alpha));
        }
        let delta = alpha - self.root;
        let ratio = if delta.norm() <= SINGULAR_RADIUS * self.root.max(1.0) {
            1.0 / (self.slope_at_root + delta * self.curvature_term())
        } else {
            -delta / (self.zeta - self.model.laplace_exponent_complex(alpha)?)
        };
        Ok(ratio * self.prefactor())
    }

    fn curvature_term(&self) -> f64 {
        if self.curvature_at_root.is_finite() {
            0.5 * self.curvature_at_root
        } else {
            0.0
        }
    }
}

/// `E e^{-α Ȳ(T_ζ)}` for `ζ > 0`.
pub fn lst_running_max(model: &LevyModel, zeta: f64, alpha: f64, cfg: &RootSolveConfig) -> Result<f64> {
    if !(zeta > 0.0) {
        return Err(Error::domain("lst_running_max", zeta, "ζ > 0"));
    }
    KilledMaximum::new(model, zeta, cfg)?.lst(alpha)
}

/// Transform of the all-time maximum (`β → 0` limit); for spectrally positive
/// models this is the Pollaczek–Khinchine form `φ'(0) α / φ(α)`.
pub fn lst_all_time_max(model: &LevyModel, alpha: f64, cfg: &RootSolveConfig) -> Result<f64> {
    KilledMaximum::new(model, 0.0, cfg)?.lst(alpha)
}

/// Law of the inspected maximum `Y_{β,ω}` under Poisson inspection, expressed
/// as the quotient of two killed-maximum transforms.
#[derive(Debug, Clone)]
pub struct InspectedMaximum<'a> {
    killed: KilledMaximum<'a>,
    shifted: KilledMaximum<'a>,
}

impl<'a> InspectedMaximum<'a> {
    pub fn new(model: &'a LevyModel, scheme: &InspectionScheme, cfg: &RootSolveConfig) -> Result<Self> {
        scheme.validate_for(model)?;
        let omega = match scheme.kind {
            InspectionKind::Poisson { omega } => omega,
            InspectionKind::Erlang { .. } => {
                return Err(Error::Config(
                    "no closed-form inspected-maximum transform for Erlang inspection; \
                     use erlang_count_pmf / erlang_component_lsts or the Lindley simulation"
                        .into(),
                ))
            }
        };
        Ok(Self {
            killed: KilledMaximum::new(model, scheme.beta, cfg)?,
            shifted: KilledMaximum::new(model, scheme.beta + omega, cfg)?,
        })
    }

    pub fn killed(&self) -> &KilledMaximum<'a> {
        &self.killed
    }

    pub fn shifted(&self) -> &KilledMaximum<'a> {
        &self.shifted
    }

    pub fn lst(&self, alpha: f64) -> Result<f64> {
        if alpha == 0.0 {
            return Ok(1.0);
        }
        Ok(self.killed.lst(alpha)? / self.shifted.lst(alpha)?)
    }

    pub fn lst_complex(&self, alpha: Complex64) -> Result<Complex64> {
        Ok(self.killed.lst_complex(alpha)? / self.shifted.lst_complex(alpha)?)
    }

    /// `P(Y_{β,ω} = 0)` for models with exponential maxima.
    pub fn atom(&self) -> Option<f64> {
        if self.killed.model.has_exponential_maximum() {
            Some(self.killed.root / self.shifted.root)
        } else {
            None
        }
    }
}

/// `E e^{-α Y_{β,ω}}` under Poisson inspection.
pub fn lst_inspected_max(
    model: &LevyModel,
    scheme: &InspectionScheme,
    alpha: f64,
    cfg: &RootSolveConfig,
) -> Result<f64> {
    InspectedMaximum::new(model, scheme, cfg)?.lst(alpha)
}

/// Atom at zero `Ψ(β)/Ψ(β+ω)` of the inspected maximum of a spectrally
/// negative (or Brownian) model.
pub fn sn_atom(model: &LevyModel, beta: f64, omega: f64, cfg: &RootSolveConfig) -> Result<f64> {
    if model.orientation() == Orientation::SpectrallyPositive {
        return Err(Error::domain(
            "sn_atom",
            "spectrally positive model",
            "requires a model without upward jumps",
        ));
    }
    let scheme = InspectionScheme::poisson(beta, omega)?;
    scheme.validate_for(model)?;
    Ok(model.exponent_inverse(beta, cfg)? / model.exponent_inverse(beta + omega, cfg)?)
}

fn require_spectrally_positive(model: &LevyModel, op: &str) -> Result<()> {
    if model.orientation() == Orientation::SpectrallyPositive {
        Ok(())
    } else {
        Err(Error::domain(op, format!("{:?} model", model.orientation()), "requires a spectrally positive model"))
    }
}

/// Transforms of the Wiener–Hopf parts of an inter-inspection increment:
/// `(E e^{-αZ⁺}, E e^{-αZ⁻})`, with `Z⁺ ~ Ȳ(T_{β+ω})` and `Z⁻ ~ exp(ψ(β+ω))`.
pub fn lst_increment_components(
    model: &LevyModel,
    beta: f64,
    omega: f64,
    alpha: f64,
    cfg: &RootSolveConfig,
) -> Result<(f64, f64)> {
    require_spectrally_positive(model, "lst_increment_components")?;
    InspectionScheme::poisson(beta, omega)?;
    let up = KilledMaximum::new(model, beta + omega, cfg)?;
    let rate = up.root();
    Ok((up.lst(alpha)?, rate / (rate + alpha)))
}

/// Mean and variance of a nonnegative random variable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub variance: f64,
}

/// `E Ȳ(T_ζ) = 1/ψ(ζ) - φ'(0)/ζ`.
pub fn running_max_mean(model: &LevyModel, zeta: f64, cfg: &RootSolveConfig) -> Result<f64> {
    require_spectrally_positive(model, "running_max_moments")?;
    if !(zeta > 0.0) {
        return Err(Error::domain("running_max_moments", zeta, "ζ > 0"));
    }
    let root = model.exponent_inverse(zeta, cfg)?;
    Ok(1.0 / root - model.safety_loading() / zeta)
}

/// Mean and variance of `Ȳ(T_ζ)`; the variance needs `E B² < ∞`.
pub fn running_max_moments(model: &LevyModel, zeta: f64, cfg: &RootSolveConfig) -> Result<Moments> {
    let mean = running_max_mean(model, zeta, cfg)?;
    let curvature = model.exponent_d2(0.0)?;
    if !curvature.is_finite() {
        return Err(Error::UnsupportedMoment(
            "variance of the running maximum needs a finite second claim moment".into(),
        ));
    }
    let root = model.exponent_inverse(zeta, cfg)?;
    let slope = model.safety_loading() / zeta;
    let variance = curvature / zeta + slope * slope - 1.0 / (root * root);
    Ok(Moments { mean, variance })
}

/// Mean and variance of `Y_{β,ω}` from the decomposition: differences of the
/// running-maximum moments at `ζ = β` and `ζ = β + ω`.
pub fn inspected_max_moments(model: &LevyModel, beta: f64, omega: f64, cfg: &RootSolveConfig) -> Result<Moments> {
    InspectionScheme::poisson(beta, omega)?;
    let whole = running_max_moments(model, beta, cfg)?;
    let tail = running_max_moments(model, beta + omega, cfg)?;
    Ok(Moments {
        mean: whole.mean - tail.mean,
        variance: whole.variance - tail.variance,
    })
}

/// `max_α |E e^{-αȲ(T_β)} - E e^{-αY_{β,ω}} · E e^{-αȲ(T_{β+ω})}|` over the grid.
///
/// The inspected transform is assembled from the four explicit factors
/// rather than from the quotient, so the check is not a tautology.
pub fn factorization_residual(
    model: &LevyModel,
    beta: f64,
    omega: f64,
    alphas: &[f64],
    cfg: &RootSolveConfig,
) -> Result<f64> {
    let scheme = InspectionScheme::poisson(beta, omega)?;
    scheme.validate_for(model)?;
    let killed = KilledMaximum::new(model, beta, cfg)?;
    let shifted = KilledMaximum::new(model, beta + omega, cfg)?;
    let mut worst: f64 = 0.0;
    for &alpha in alphas {
        let inspected = four_factor_lst(model, &killed, &shifted, alpha)?;
        let lhs = killed.lst(alpha)?;
        let rhs = inspected * shifted.lst(alpha)?;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

fn four_factor_lst(model: &LevyModel, killed: &KilledMaximum, shifted: &KilledMaximum, alpha: f64) -> Result<f64> {
    let (b, bw) = (killed.zeta(), shifted.zeta());
    let (rb, rbw) = (killed.root(), shifted.root());
    if model.has_exponential_maximum() {
        return Ok(rb / (rb + alpha) * (rbw + alpha) / rbw);
    }
    let phi = model.laplace_exponent(alpha)?;
    let near = |x: f64, r: f64| (x - r).abs() <= SINGULAR_RADIUS * r.max(1.0);
    if near(alpha, rb) || near(alpha, rbw) || b == 0.0 {
        return Ok(killed.lst(alpha)? / shifted.lst(alpha)?);
    }
    Ok((alpha - rb) / (b - phi) * (b / rb) * (bw - phi) / (alpha - rbw) * (rbw / bw))
}

/// `P(N_{β,ω} = n)` for Erlang(k, kω) inspection intervals.
pub fn erlang_count_pmf(beta: f64, omega: f64, k: u32, n: u64) -> Result<f64> {
    InspectionScheme::erlang(beta, omega, k)?;
    let q = k as f64 * omega / (k as f64 * omega + beta);
    let kf = k as f64;
    Ok(q.powf(kf * n as f64) * (1.0 - q.powf(kf)))
}

/// For Erlang(k, kω) inspection: the transform of the running maximum over
/// one exp(β + kω) phase, and the exponential rate `ψ(β + kω)` of minus its
/// running minimum.
pub fn erlang_component_lsts(
    model: &LevyModel,
    beta: f64,
    omega: f64,
    k: u32,
    alpha: f64,
    cfg: &RootSolveConfig,
) -> Result<(f64, f64)> {
    require_spectrally_positive(model, "erlang_component_lsts")?;
    InspectionScheme::erlang(beta, omega, k)?;
    let phase = KilledMaximum::new(model, beta + k as f64 * omega, cfg)?;
    Ok((phase.lst(alpha)?, phase.root()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::JumpLaw;

    fn cfg() -> RootSolveConfig {
        RootSolveConfig::default()
    }

    fn sp() -> LevyModel {
        LevyModel::spectrally_positive(1.0, 0.5, JumpLaw::exponential(1.0).unwrap()).unwrap()
    }

    fn sn() -> LevyModel {
        LevyModel::spectrally_negative(1.0, 0.5, JumpLaw::exponential(1.0).unwrap()).unwrap()
    }

    // Roots of α² - (β - 0.5)α - β for the canonical exponent.
    fn psi(beta: f64) -> f64 {
        ((beta - 0.5) + ((beta - 0.5).powi(2) + 4.0 * beta).sqrt()) / 2.0
    }

    #[test]
    fn running_max_values() {
        let m = sp();
        assert_eq!(lst_running_max(&m, 1.0, 0.0, &cfg()).unwrap(), 1.0);
        let v1 = lst_running_max(&m, 1.0, 1.0, &cfg()).unwrap();
        assert!((v1 - 4.0 * (psi(1.0) - 1.0) / psi(1.0)).abs() < 1e-14);
        assert!((v1 - 0.876_894_4).abs() < 1e-7);
        let v2 = lst_running_max(&m, 2.0, 1.0, &cfg()).unwrap();
        assert!((v2 - 1.6 * (psi(2.0) - 1.0) / psi(2.0)).abs() < 1e-14);
        assert!((v2 - 0.919_375_2).abs() < 1e-7);
        assert!(lst_running_max(&m, 0.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn removable_singularity_is_continuous() {
        let m = sp();
        let root = psi(1.0);
        let at = lst_running_max(&m, 1.0, root, &cfg()).unwrap();
        for d in [1e-3, 1e-4, 1e-5, 2e-6] {
            let left = lst_running_max(&m, 1.0, root - d, &cfg()).unwrap();
            let right = lst_running_max(&m, 1.0, root + d, &cfg()).unwrap();
            assert!(left > at && at > right);
            assert!((left - at).abs() < 0.2 * d && (right - at).abs() < 0.2 * d);
        }
    }

    #[test]
    fn inspected_values() {
        let m = sp();
        let s = InspectionScheme::poisson(1.0, 1.0).unwrap();
        let v = lst_inspected_max(&m, &s, 1.0, &cfg()).unwrap();
        // Four explicit factors evaluated by hand.
        let (b, bw, a, phi) = (1.0, 2.0, 1.0, 0.75);
        let manual = (a - psi(b)) / (b - phi) * (b / psi(b)) * (bw - phi) / (a - psi(bw)) * (psi(bw) / bw);
        assert!((v - manual).abs() < 1e-14);
        assert!((v - 0.953_793_9).abs() < 1e-7);
        assert_eq!(lst_inspected_max(&m, &s, 0.0, &cfg()).unwrap(), 1.0);
    }

    #[test]
    fn inspected_rejects_erlang() {
        let s = InspectionScheme::erlang(1.0, 1.0, 2).unwrap();
        assert!(matches!(lst_inspected_max(&sp(), &s, 1.0, &cfg()), Err(Error::Config(_))));
    }

    #[test]
    fn zero_killing_without_loading_is_rejected() {
        let m = LevyModel::spectrally_positive(1.0, 1.0, JumpLaw::exponential(1.0).unwrap()).unwrap();
        let s = InspectionScheme::poisson(0.0, 1.0).unwrap();
        assert!(matches!(lst_inspected_max(&m, &s, 1.0, &cfg()), Err(Error::Regime(_))));
    }

    #[test]
    fn sn_atom_values() {
        let atom = sn_atom(&sn(), 1.0, 1.0, &cfg()).unwrap();
        assert!((atom - psi(1.0) / psi(2.0)).abs() < 1e-14);
        assert!((atom - 0.544_830_2).abs() < 1e-7);
        // transform at large α tends to the atom
        let s = InspectionScheme::poisson(1.0, 1.0).unwrap();
        let far = lst_inspected_max(&sn(), &s, 1e9, &cfg()).unwrap();
        assert!((far - atom).abs() < 1e-8);
        assert!(sn_atom(&sp(), 1.0, 1.0, &cfg()).is_err());
        let tiny = sn_atom(&sn(), 1.0, 1e-9, &cfg()).unwrap();
        assert!((tiny - 1.0).abs() < 1e-8);
    }

    #[test]
    fn sn_atom_zero_killing() {
        let m = LevyModel::spectrally_negative(0.4, 0.5, JumpLaw::exponential(1.0).unwrap()).unwrap();
        let atom = sn_atom(&m, 0.0, 1.0, &cfg()).unwrap();
        let c = cfg();
        assert!((atom - 0.25 / m.exponent_inverse(1.0, &c).unwrap()).abs() < 1e-13);
    }

    #[test]
    fn increment_components() {
        let (up, down) = lst_increment_components(&sp(), 1.0, 1.0, 0.0, &cfg()).unwrap();
        assert_eq!((up, down), (1.0, 1.0));
        let (up, down) = lst_increment_components(&sp(), 1.0, 1.0, 1.0, &cfg()).unwrap();
        assert!((up - lst_running_max(&sp(), 2.0, 1.0, &cfg()).unwrap()).abs() < 1e-15);
        assert!((down - psi(2.0) / (psi(2.0) + 1.0)).abs() < 1e-14);
        assert!((down - 0.701_562_1).abs() < 1e-7);
        assert!(lst_increment_components(&sn(), 1.0, 1.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn moments_values() {
        let m = running_max_moments(&sp(), 1.0, &cfg()).unwrap();
        assert!((m.mean - (1.0 / psi(1.0) - 0.5)).abs() < 1e-14);
        assert!((m.mean - 0.280_776_4).abs() < 1e-7);
        assert!((m.variance - (1.25 - psi(1.0).powi(-2))).abs() < 1e-14);
        assert!((m.variance - 0.640_388_2).abs() < 1e-7);
        let far = running_max_moments(&sp(), 1e8, &cfg()).unwrap();
        assert!(far.mean.abs() < 1e-7);
        let i = inspected_max_moments(&sp(), 1.0, 1.0, &cfg()).unwrap();
        assert!((i.mean - 0.105_385_9).abs() < 1e-7);
        assert!(i.variance >= 0.0);
        let small = inspected_max_moments(&sp(), 1.0, 1e-9, &cfg()).unwrap();
        assert!(small.mean.abs() < 1e-8);
    }

    #[test]
    fn heavy_variance_is_unsupported_but_mean_is_not() {
        let m = LevyModel::spectrally_positive(1.0, 0.5, JumpLaw::pareto_lomax(2.0, 1.0).unwrap()).unwrap();
        assert!(running_max_mean(&m, 1.0, &cfg()).is_ok());
        assert!(matches!(running_max_moments(&m, 1.0, &cfg()), Err(Error::UnsupportedMoment(_))));
    }

    #[test]
    fn residual_for_three_kinds() {
        let grid: Vec<f64> = (1..=100).map(|i| i as f64 * 0.1).collect();
        for m in [sp(), sn(), LevyModel::brownian(-1.0, 1.0).unwrap()] {
            let r = factorization_residual(&m, 1.0, 1.0, &grid, &cfg()).unwrap();
            assert!(r <= 1e-12, "{m:?}: {r}");
        }
    }

    #[test]
    fn erlang_pmf() {
        let p0 = erlang_count_pmf(1.0, 1.0, 2, 0).unwrap();
        let p1 = erlang_count_pmf(1.0, 1.0, 2, 1).unwrap();
        assert!((p0 - 5.0 / 9.0).abs() < 1e-15);
        assert!((p1 - 20.0 / 81.0).abs() < 1e-15);
        let total: f64 = (0..200).map(|n| erlang_count_pmf(0.7, 1.3, 3, n).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // k = 1 is the shifted geometric law
        for n in 0..5 {
            let g = (2.0f64 / 3.0).powi(n as i32) / 3.0;
            assert!((erlang_count_pmf(1.0, 2.0, 1, n).unwrap() - g).abs() < 1e-15);
        }
    }

    #[test]
    fn erlang_components() {
        let (up, rate) = erlang_component_lsts(&sp(), 0.0, 1.0, 2, 1.0, &cfg()).unwrap();
        assert!((up - 0.919_375_2).abs() < 1e-7);
        assert!((rate - psi(2.0)).abs() < 1e-13);
        let (up1, rate1) = erlang_component_lsts(&sp(), 0.5, 1.0, 1, 0.7, &cfg()).unwrap();
        let (zp, zm) = lst_increment_components(&sp(), 0.5, 1.0, 0.7, &cfg()).unwrap();
        assert!((up1 - zp).abs() < 1e-15);
        assert!((rate1 / (rate1 + 0.7) - zm).abs() < 1e-15);
        let (at0, _) = erlang_component_lsts(&sp(), 0.5, 1.0, 3, 0.0, &cfg()).unwrap();
        assert_eq!(at0, 1.0);
    }

    #[test]
    fn brownian_both_orientations_agree() {
        // Viewed as spectrally positive, -Y has exponent φ(α) = Φ(-α) and the
        // spectrally positive formula must give Ψ/(Ψ+α).
        let (mu, var) = (-1.0, 1.0);
        let m = LevyModel::brownian(mu, var).unwrap();
        for zeta in [0.5, 1.0, 3.0] {
            let big_psi = m.exponent_inverse(zeta, &cfg()).unwrap();
            let small_psi = (mu + (mu * mu + 2.0 * var * zeta).sqrt()) / var;
            for a in [0.1, 1.0, 4.0] {
                let phi = -mu * a + 0.5 * var * a * a;
                let sp_form = zeta / (zeta - phi) * (small_psi - a) / small_psi;
                let sn_form = lst_running_max(&m, zeta, a, &cfg()).unwrap();
                assert!((sp_form - sn_form).abs() < 1e-13);
                assert!((sn_form - big_psi / (big_psi + a)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn all_time_max_limit() {
        let m = sp();
        for a in [0.0, 1e-12, 0.3, 2.0] {
            let v = lst_all_time_max(&m, a, &cfg()).unwrap();
            let expect = if a == 0.0 { 1.0 } else { 0.5 * a / m.laplace_exponent(a).unwrap() };
            assert!((v - expect).abs() < 1e-12, "{a}: {v} vs {expect}");
        }
        let small = lst_running_max(&m, 1e-9, 0.7, &cfg()).unwrap();
        assert!((small - lst_all_time_max(&m, 0.7, &cfg()).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn complex_matches_real() {
        for m in [sp(), sn()] {
            let k = KilledMaximum::new(&m, 1.5, &cfg()).unwrap();
            for a in [0.0, 0.4, k.root(), 3.0] {
                let r = k.lst(a).unwrap();
                let c = k.lst_complex(Complex64::new(a, 0.0)).unwrap();
                assert!((r - c.re).abs() < 1e-14 && c.im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn lst_curve_contract() {
        let m = sp();
        let curve = LstCurve::evaluate(&[0.0, 0.5, 1.0], |a| lst_running_max(&m, 1.0, a, &cfg())).unwrap();
        assert_eq!(curve.values[0], 1.0);
        assert!(LstCurve::evaluate(&[1.0, 0.5], |_| Ok(1.0)).is_err());
        assert!(LstCurve::evaluate(&[-1.0], |_| Ok(1.0)).is_err());
    }
}
