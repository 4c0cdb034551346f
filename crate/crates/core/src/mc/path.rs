use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::levy::LevyModel;

/// Supremum and endpoint of a path started at 0 and run for an independent
/// exponential time. `sup - end` is the matching minus-infimum part, which is
/// independent of `sup`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub sup: f64,
    pub end: f64,
}

impl Segment {
    pub fn drop_from_sup(&self) -> f64 {
        self.sup - self.end
    }
}

fn exp_time<R: Rng + ?Sized>(rate: f64, rng: &mut R) -> f64 {
    rng.sample::<f64, _>(Exp1) / rate
}

/// Simulates the path exactly over an exp(`rate`) horizon.
///
/// Jumps and the horizon are competing exponential clocks. With downward
/// drift (spectrally positive) the supremum is attained right after a jump,
/// with upward drift right before one or at the horizon. Brownian motion
/// uses the conditional law of the maximum given the endpoint.
pub fn segment<R: Rng + ?Sized>(model: &LevyModel, rate: f64, rng: &mut R) -> Segment {
    segment_observed(model, rate, rng, |_, _| {})
}

/// As [`segment`], reporting `(time, value after the event)` at every jump
/// and at the horizon.
pub(crate) fn segment_observed<R, O>(model: &LevyModel, rate: f64, rng: &mut R, mut observe: O) -> Segment
where
    R: Rng + ?Sized,
    O: FnMut(f64, f64),
{
    match model {
        LevyModel::SpectrallyPositive {
            premium_rate,
            arrival_rate,
            claims,
        } => {
            let total = arrival_rate + rate;
            let (mut t, mut y, mut sup) = (0.0, 0.0, 0.0f64);
            loop {
                let dt = exp_time(total, rng);
                t += dt;
                y -= premium_rate * dt;
                if rng.random::<f64>() * total < rate {
                    observe(t, y);
                    return Segment { sup, end: y };
                }
                y += claims.sample(rng);
                sup = sup.max(y);
                observe(t, y);
            }
        }
        LevyModel::SpectrallyNegative {
            premium_rate,
            arrival_rate,
            claims,
        } => {
            let total = arrival_rate + rate;
            let (mut t, mut y, mut sup) = (0.0, 0.0, 0.0f64);
            loop {
                let dt = exp_time(total, rng);
                t += dt;
                y += premium_rate * dt;
                sup = sup.max(y);
                if rng.random::<f64>() * total < rate {
                    observe(t, y);
                    return Segment { sup, end: y };
                }
                y -= claims.sample(rng);
                observe(t, y);
            }
        }
        LevyModel::BrownianDrift { drift, variance } => {
            let t = exp_time(rate, rng);
            let z: f64 = rng.sample(StandardNormal);
            let end = drift * t + (variance * t).sqrt() * z;
            let e: f64 = rng.sample(Exp1);
            let sup = 0.5 * (end + (end * end + 2.0 * variance * t * e).sqrt());
            observe(t, end);
            Segment { sup, end }
        }
    }
}

/// Values of one path at the given nondecreasing times.
///
/// For compound-Poisson models the jump sequence does not depend on the query
/// times, so paths evaluated on nested grids coincide.
pub fn path_at_times<R: Rng + ?Sized>(model: &LevyModel, times: &[f64], rng: &mut R) -> Vec<f64> {
    debug_assert!(times.windows(2).all(|w| w[0] <= w[1]));
    let mut out = Vec::with_capacity(times.len());
    match model {
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
            let (drift, jump_sign) = if matches!(model, LevyModel::SpectrallyPositive { .. }) {
                (-premium_rate, 1.0)
            } else {
                (*premium_rate, -1.0)
            };
            let mut next_jump = if *arrival_rate > 0.0 {
                exp_time(*arrival_rate, rng)
            } else {
                f64::INFINITY
            };
            let mut jumps = 0.0;
            for &q in times {
                while next_jump <= q {
                    jumps += claims.sample(rng);
                    next_jump += exp_time(*arrival_rate, rng);
                }
                out.push(drift * q + jump_sign * jumps);
            }
        }
        LevyModel::BrownianDrift { drift, variance } => {
            let (mut t, mut y) = (0.0, 0.0);
            for &q in times {
                let dt = q - t;
                if dt > 0.0 {
                    let z: f64 = rng.sample(StandardNormal);
                    y += drift * dt + (variance * dt).sqrt() * z;
                    t = q;
                }
                out.push(y);
            }
        }
    }
    out
}
