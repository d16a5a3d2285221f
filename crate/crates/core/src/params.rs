//! Control parameters for the incremental drivers.

use crate::error::{Error, Result};
use crate::incremental::recommend_gammas;

/// Tolerances and selection coefficients shared by the incremental
/// algorithms.
///
/// `gamma1`, `gamma2` in `[0, 1]` control how aggressively candidate data
/// points and candidate barycenters are pruned; `gamma3 >= 1` controls how
/// many refined candidates are kept. `delta` is the data-reduction
/// coefficient (its effective value at level `l` is `min(delta, 1/l)`).
#[derive(Debug, Clone, PartialEq)]
pub struct ControlParams {
    gamma1: f64,
    gamma2: f64,
    gamma3: f64,
    delta: f64,
    tol_dist: f64,
    tol_conv: f64,
    max_iter: usize,
    reduction: bool,
    reduction_literal_eta1: bool,
}

pub const DEFAULT_DELTA: f64 = 1e-3;
pub const DEFAULT_MAX_ITER: usize = 1000;

impl ControlParams {
    /// Validates the gamma triple; the remaining fields take defaults
    /// (`delta = 1e-3`, exact tolerances, `max_iter = 1000`, no reduction).
    pub fn new(gamma1: f64, gamma2: f64, gamma3: f64) -> Result<Self> {
        check_unit("gamma1", gamma1)?;
        check_unit("gamma2", gamma2)?;
        if !gamma3.is_finite() || gamma3 < 1.0 {
            return Err(Error::InvalidParam {
                name: "gamma3",
                reason: format!("{gamma3} is outside [1, inf)"),
            });
        }
        Ok(Self {
            gamma1,
            gamma2,
            gamma3,
            delta: DEFAULT_DELTA,
            tol_dist: 0.0,
            tol_conv: 0.0,
            max_iter: DEFAULT_MAX_ITER,
            reduction: false,
            reduction_literal_eta1: false,
        })
    }

    /// Parameters with the gamma triple recommended for a data set of `m`
    /// points.
    pub fn recommended(m: usize) -> Self {
        let (g1, g2, g3) = recommend_gammas(m);
        Self::new(g1, g2, g3).expect("recommended gammas are always valid")
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !delta.is_finite() || delta <= 0.0 || delta >= 1.0 {
            return Err(Error::InvalidParam {
                name: "delta",
                reason: format!("{delta} is outside (0, 1)"),
            });
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn with_tol_dist(mut self, tol: f64) -> Result<Self> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::InvalidParam {
                name: "tol_dist",
                reason: format!("{tol} is negative or non-finite"),
            });
        }
        self.tol_dist = tol;
        Ok(self)
    }

    pub fn with_tol_conv(mut self, tol: f64) -> Result<Self> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::InvalidParam {
                name: "tol_conv",
                reason: format!("{tol} is negative or non-finite"),
            });
        }
        self.tol_conv = tol;
        Ok(self)
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Result<Self> {
        if max_iter == 0 {
            return Err(Error::InvalidParam {
                name: "max_iter",
                reason: "must be at least 1".into(),
            });
        }
        self.max_iter = max_iter;
        Ok(self)
    }

    /// Enables the far-point data reduction of the candidate stage.
    pub fn with_reduction(mut self, on: bool) -> Self {
        self.reduction = on;
        self
    }

    /// Uses the first cluster's threshold factor instead of `gamma1` when
    /// filtering reduced candidates; kept for comparison runs.
    pub fn with_reduction_literal_eta1(mut self, on: bool) -> Self {
        self.reduction_literal_eta1 = on;
        self
    }

    pub fn gamma1(&self) -> f64 {
        self.gamma1
    }

    pub fn gamma2(&self) -> f64 {
        self.gamma2
    }

    pub fn gamma3(&self) -> f64 {
        self.gamma3
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Membership-test slack reserved for verifier-style comparisons; the
    /// core assignment rule always compares exactly.
    pub fn tol_dist(&self) -> f64 {
        self.tol_dist
    }

    pub fn tol_conv(&self) -> f64 {
        self.tol_conv
    }

    pub fn max_iter(&self) -> usize {
        self.max_iter
    }

    pub fn reduction(&self) -> bool {
        self.reduction
    }

    pub fn reduction_literal_eta1(&self) -> bool {
        self.reduction_literal_eta1
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..=1.0).contains(&value) {
        return Err(Error::InvalidParam {
            name,
            reason: format!("{value} is outside [0, 1]"),
        });
    }
    Ok(())
}
