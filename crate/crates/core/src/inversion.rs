//! Numerical inversion of Laplace–Stieltjes transforms to tail probabilities,
//! and a quadrature/Monte-Carlo estimate of the exponent of the inspected
//! maximum's transform.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::LevyModel;
use crate::mc::{path_at_times, path_rng};
use crate::quadrature::gauss_legendre;
use crate::transforms::{InspectedMaximum, KilledMaximum};

/// `E e^{-αX}` of a nonnegative random variable.
pub trait LaplaceTransform {
    fn real(&self, alpha: f64) -> Result<f64>;

    /// Complex evaluation; `None` when only real arguments are supported.
    fn complex(&self, _alpha: Complex64) -> Option<Result<Complex64>> {
        None
    }

    /// Regularly varying tails make deep-tail inversion unreliable.
    fn heavy_tailed(&self) -> bool {
        false
    }
}

fn claims_heavy(model: &LevyModel) -> bool {
    model.claims().is_some_and(|c| !c.is_light_tailed())
}

impl LaplaceTransform for KilledMaximum<'_> {
    fn real(&self, alpha: f64) -> Result<f64> {
        self.lst(alpha)
    }

    fn complex(&self, alpha: Complex64) -> Option<Result<Complex64>> {
        Some(self.lst_complex(alpha))
    }

    fn heavy_tailed(&self) -> bool {
        claims_heavy(self.model())
    }
}

impl LaplaceTransform for InspectedMaximum<'_> {
    fn real(&self, alpha: f64) -> Result<f64> {
        self.lst(alpha)
    }

    fn complex(&self, alpha: Complex64) -> Option<Result<Complex64>> {
        Some(self.lst_complex(alpha))
    }

    fn heavy_tailed(&self) -> bool {
        claims_heavy(self.killed().model())
    }
}

/// A transform given by a complex-valued closure.
pub struct ComplexFn<F>(pub F);

impl<F: Fn(Complex64) -> Complex64> LaplaceTransform for ComplexFn<F> {
    fn real(&self, alpha: f64) -> Result<f64> {
        Ok((self.0)(Complex64::new(alpha, 0.0)).re)
    }

    fn complex(&self, alpha: Complex64) -> Option<Result<Complex64>> {
        Some(Ok((self.0)(alpha)))
    }
}

/// A transform known only on the real axis.
pub struct RealFn<F>(pub F);

impl<F: Fn(f64) -> f64> LaplaceTransform for RealFn<F> {
    fn real(&self, alpha: f64) -> Result<f64> {
        Ok((self.0)(alpha))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case", deny_unknown_fields)]
pub enum InversionMethod {
    /// Abate–Whitt Fourier series with Euler (binomial) averaging.
    Euler { terms: usize, averaging: usize },
    /// Real-axis Gaver–Stehfest; accuracy drops beyond order ~14.
    GaverStehfest { order: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InversionConfig {
    pub method: InversionMethod,
    /// Discretization error target; sets the Euler contour abscissa.
    pub target_accuracy: f64,
    /// Inverts `e^{cu} P(X > u)` instead, which keeps relative accuracy in
    /// exponentially decaying tails. Must stay below the tail decay rate.
    pub damping: f64,
}

impl Default for InversionConfig {
    fn default() -> Self {
        Self {
            method: InversionMethod::Euler {
                terms: 25,
                averaging: 11,
            },
            target_accuracy: 1e-8,
            damping: 0.0,
        }
    }
}

impl InversionConfig {
    pub fn gaver_stehfest(order: usize) -> Self {
        Self {
            method: InversionMethod::GaverStehfest { order },
            ..Self::default()
        }
    }

    pub fn with_damping(self, damping: f64) -> Self {
        Self { damping, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            InversionMethod::Euler { terms, averaging } => {
                if !(15..=50).contains(&terms) {
                    return Err(Error::Config(format!("euler terms must lie in 15..=50, got {terms}")));
                }
                if !(1..=20).contains(&averaging) {
                    return Err(Error::Config(format!("euler averaging must lie in 1..=20, got {averaging}")));
                }
            }
            InversionMethod::GaverStehfest { order } => {
                if order % 2 != 0 || !(10..=18).contains(&order) {
                    return Err(Error::Config(format!(
                        "gaver-stehfest order must be even and in 10..=18, got {order}"
                    )));
                }
            }
        }
        if !(self.target_accuracy > 0.0 && self.target_accuracy < 1.0) {
            return Err(Error::Config("target accuracy must lie in (0, 1)".into()));
        }
        if !(self.damping.is_finite() && self.damping >= 0.0) {
            return Err(Error::Config("damping must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Tail probabilities `P(X > u)` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailCurve {
    pub u: Vec<f64>,
    pub ccdf: Vec<f64>,
    /// Largest change made when clipping to [0, 1] and enforcing monotonicity.
    pub max_adjustment: f64,
    /// Set for heavy-tailed laws, whose deep tail the inversion cannot resolve.
    pub deep_tail_unreliable: bool,
}

impl TailCurve {
    fn from_raw(u: Vec<f64>, raw: Vec<f64>, deep_tail_unreliable: bool) -> Self {
        let mut ccdf = Vec::with_capacity(raw.len());
        let mut max_adjustment: f64 = 0.0;
        let mut ceiling: f64 = 1.0;
        for &v in &raw {
            let fixed = v.clamp(0.0, 1.0).min(ceiling);
            max_adjustment = max_adjustment.max((fixed - v).abs());
            ceiling = fixed;
            ccdf.push(fixed);
        }
        Self {
            u,
            ccdf,
            max_adjustment,
            deep_tail_unreliable,
        }
    }
}

// 1 - E e^{-αX} divided by α, at a shifted complex argument.
fn ccdf_transform<T: LaplaceTransform + ?Sized>(t: &T, s: Complex64) -> Result<Complex64> {
    match t.complex(s) {
        Some(v) => Ok((1.0 - v?) / s),
        None => Err(Error::Config(
            "transform cannot be evaluated at complex arguments; use the gaver_stehfest method".into(),
        )),
    }
}

fn binomial_weights(m: usize) -> Vec<f64> {
    let mut w = vec![1.0; m + 1];
    for j in 1..=m {
        w[j] = w[j - 1] * (m + 1 - j) as f64 / j as f64;
    }
    let scale = 0.5f64.powi(m as i32);
    w.iter().map(|x| x * scale).collect()
}

fn euler_point<T: LaplaceTransform + ?Sized>(
    t: &T,
    u: f64,
    terms: usize,
    averaging: usize,
    target: f64,
    damping: f64,
) -> Result<f64> {
    let a = -target.ln();
    let h = std::f64::consts::PI / u;
    let base = a / (2.0 * u);
    let scale = (0.5 * a).exp() / u;
    let mut partial = Vec::with_capacity(terms + averaging + 1);
    let mut sum = 0.5 * ccdf_transform(t, Complex64::new(base - damping, 0.0))?.re;
    partial.push(sum);
    for k in 1..=(terms + averaging) {
        let s = Complex64::new(base - damping, k as f64 * h);
        let term = ccdf_transform(t, s)?.re;
        sum += if k % 2 == 0 { term } else { -term };
        partial.push(sum);
    }
    let averaged: f64 = binomial_weights(averaging)
        .iter()
        .enumerate()
        .map(|(j, w)| w * partial[terms + j])
        .sum();
    Ok((-damping * u).exp() * scale * averaged)
}

fn stehfest_weights(order: usize) -> Vec<f64> {
    let half = order / 2;
    let fact = |n: usize| (1..=n).map(|i| i as f64).product::<f64>();
    (1..=order)
        .map(|k| {
            let mut v = 0.0;
            for j in k.div_ceil(2)..=k.min(half) {
                v += (j as f64).powi(half as i32) * fact(2 * j)
                    / (fact(half - j) * fact(j) * fact(j - 1) * fact(k - j) * fact(2 * j - k));
            }
            if (k + half).is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .collect()
}

fn stehfest_point<T: LaplaceTransform + ?Sized>(t: &T, u: f64, weights: &[f64], damping: f64) -> Result<f64> {
    let ln2 = std::f64::consts::LN_2;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        let s = (i + 1) as f64 * ln2 / u - damping;
        acc += w * (1.0 - t.real(s)?) / s;
    }
    Ok((-damping * u).exp() * ln2 / u * acc)
}

/// `P(X > 0) = 1 - lim E e^{-αX}`, Richardson-extrapolated from two large α.
fn mass_above_zero<T: LaplaceTransform + ?Sized>(t: &T) -> Result<f64> {
    let far = t.real(2e6)?;
    let near = t.real(1e6)?;
    Ok(1.0 - (2.0 * far - near))
}

/// Inverts `α ↦ (1 - E e^{-αX})/α`, the Laplace transform of `P(X > u)`.
pub fn invert_ccdf<T>(transform: &T, u_grid: &[f64], cfg: &InversionConfig) -> Result<TailCurve>
where
    T: LaplaceTransform + Sync + ?Sized,
{
    cfg.validate()?;
    if u_grid.iter().any(|u| !(u.is_finite() && *u >= 0.0)) {
        return Err(Error::InvalidParameter("u grid must be finite and >= 0".into()));
    }
    if u_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("u grid must be sorted".into()));
    }
    let weights = match cfg.method {
        InversionMethod::GaverStehfest { order } => stehfest_weights(order),
        InversionMethod::Euler { .. } => Vec::new(),
    };
    let raw = u_grid
        .par_iter()
        .map(|&u| {
            if u == 0.0 {
                return mass_above_zero(transform);
            }
            match cfg.method {
                InversionMethod::Euler { terms, averaging } => {
                    euler_point(transform, u, terms, averaging, cfg.target_accuracy, cfg.damping)
                }
                InversionMethod::GaverStehfest { .. } => stehfest_point(transform, u, &weights, cfg.damping),
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TailCurve::from_raw(u_grid.to_vec(), raw, transform.heavy_tailed()))
}

/// Controls for [`inspected_exponent_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentEstimateConfig {
    pub paths: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
    pub nodes_per_panel: usize,
    pub initial_panels: usize,
    pub max_panels: usize,
}

impl ExponentEstimateConfig {
    pub fn new(paths: usize, seed: u64) -> Self {
        Self {
            paths,
            seed,
            stream: 0,
            nodes_per_panel: 8,
            initial_panels: 2,
            max_panels: 512,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentEstimate {
    pub value: f64,
    pub stderr: f64,
    pub panels: usize,
    pub horizon: f64,
}

impl ExponentEstimate {
    /// The implied transform value `exp(-value)`.
    pub fn transform(&self) -> f64 {
        (-self.value).exp()
    }
}

// Composite Gauss-Legendre nodes and weights on [0, 1].
fn panel_rule(panels: usize, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(per_panel);
    let width = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(panels * per_panel);
    let mut weights = Vec::with_capacity(panels * per_panel);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            nodes.push(mid + 0.5 * width * xi);
            weights.push(0.5 * width * wi);
        }
    }
    (nodes, weights)
}

/// Estimates
/// `∫_0^∞ ∫_(0,∞) t^{-1} e^{-βt} (1 - e^{-ωt}) (1 - e^{-αx}) P(Y(t) ∈ dx) dt`,
/// the exponent `-log E e^{-α Y_{β,ω}}`.
///
/// The time integral runs over `t = T s²`, `s ∈ [0, 1]`, with `e^{-βT} = 1e-12`,
/// using composite Gauss–Legendre panels that double until the change in the
/// estimate is below its standard error. Each path is simulated once and
/// evaluated at every node, so all nodes share common random numbers; the
/// standard error is taken over paths.
pub fn inspected_exponent_estimate(
    model: &LevyModel,
    beta: f64,
    omega: f64,
    alpha: f64,
    cfg: &ExponentEstimateConfig,
) -> Result<ExponentEstimate> {
    model.validate()?;
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::domain(
            "inspected_exponent_estimate",
            beta,
            "β > 0 (the time integral needs killing to converge)",
        ));
    }
    if !(omega.is_finite() && omega > 0.0) || !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::InvalidParameter("need ω > 0 and α >= 0".into()));
    }
    if cfg.paths < 2 || cfg.nodes_per_panel == 0 || cfg.initial_panels == 0 {
        return Err(Error::InvalidParameter("need at least two paths and one node".into()));
    }
    let horizon = 12.0 * std::f64::consts::LN_10 / beta;
    if alpha == 0.0 {
        return Ok(ExponentEstimate {
            value: 0.0,
            stderr: 0.0,
            panels: 0,
            horizon,
        });
    }
    // Weight of a node at s, excluding the path-dependent factor.
    let node_weight = |s: f64, w: f64| {
        let t = horizon * s * s;
        (w * 2.0 / s * (-beta * t).exp() * -(-omega * t).exp_m1(), t)
    };
    let mut panels = cfg.initial_panels;
    while 2 * panels <= cfg.max_panels {
        let (cs, cw) = panel_rule(panels, cfg.nodes_per_panel);
        let (fs, fw) = panel_rule(2 * panels, cfg.nodes_per_panel);
        let mut nodes: Vec<(f64, f64, bool)> = cs
            .iter()
            .zip(&cw)
            .map(|(&s, &w)| {
                let (k, t) = node_weight(s, w);
                (t, k, false)
            })
            .chain(fs.iter().zip(&fw).map(|(&s, &w)| {
                let (k, t) = node_weight(s, w);
                (t, k, true)
            }))
            .collect();
        nodes.sort_by(|a, b| a.0.total_cmp(&b.0));
        let times: Vec<f64> = nodes.iter().map(|n| n.0).collect();
        let per_path: Vec<(f64, f64)> = (0..cfg.paths as u64)
            .into_par_iter()
            .map(|i| {
                let ys = path_at_times(model, &times, &mut path_rng(cfg.seed, cfg.stream, i));
                let (mut coarse, mut fine) = (0.0, 0.0);
                for (n, &y) in nodes.iter().zip(&ys) {
                    if y > 0.0 {
                        let v = n.1 * -(-alpha * y).exp_m1();
                        if n.2 {
                            fine += v;
                        } else {
                            coarse += v;
                        }
                    }
                }
                (coarse, fine)
            })
            .collect();
        let n = cfg.paths as f64;
        let mean_fine = per_path.iter().map(|p| p.1).sum::<f64>() / n;
        let mean_diff = per_path.iter().map(|p| p.1 - p.0).sum::<f64>() / n;
        let var = per_path.iter().map(|p| (p.1 - mean_fine).powi(2)).sum::<f64>() / (n - 1.0);
        let stderr = (var / n).sqrt();
        if mean_diff.abs() <= stderr {
            return Ok(ExponentEstimate {
                value: mean_fine,
                stderr,
                panels: 2 * panels,
                horizon,
            });
        }
        panels *= 2;
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_panels,
        lo: 0.0,
        hi: horizon,
    })
}
