//! Bracketed Newton iteration used for right-inverses and the adjustment coefficient.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances for the one-dimensional root solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootSolveConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Default for RootSolveConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-12,
            max_iter: 200,
        }
    }
}

impl RootSolveConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "root solver tolerances must be positive".into(),
            ));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter(
                "root solver needs at least one iteration".into(),
            ));
        }
        Ok(())
    }
}

/// Finds the root of `f` in `[lo, hi]` given `f(lo) <= 0 <= f(hi)`.
///
/// `f` returns the value and its derivative. Newton steps that leave the
/// current bracket are replaced by bisection. `f_scale` sets the residual
/// tolerance `abs_tol * f_scale`.
pub fn newton_bracketed<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    f_scale: f64,
    cfg: &RootSolveConfig,
) -> Result<f64>
where
    F: FnMut(f64) -> (f64, f64),
{
    let mut x = 0.5 * (lo + hi);
    for _ in 0..cfg.max_iter {
        let (fx, dfx) = f(x);
        if fx.abs() <= cfg.abs_tol * f_scale {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        if hi - lo <= cfg.abs_tol + cfg.rel_tol * x.abs() {
            return Ok(0.5 * (lo + hi));
        }
        let newton = x - fx / dfx;
        x = if dfx.is_finite() && dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        lo,
        hi,
    })
}
