use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("u_grid must be nonempty, positive and strictly increasing")]
    BadGrid,
    #[error("t_samples must be nonempty and finite")]
    NoSamples,
    #[error("`{0}` must be positive and finite")]
    NonPositive(&'static str),
    #[error("ladder_ratio must exceed 1")]
    BadLadderRatio,
    #[error("max_ladder must be at least {0}")]
    ShortLadder(usize),
}

/// Sampling and tolerance settings shared by every checker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    /// Positive, strictly increasing `u` sample points.
    pub u_grid: Vec<f64>,
    /// `t` values standing in for "μ-a.e. t".
    pub t_samples: Vec<f64>,
    pub ladder_ratio: f64,
    /// Relative tolerance of the midpoint and evenness tests; also the
    /// absolute tolerance for "Ψ(t, 0) = 0".
    pub tol_convex: f64,
    pub tol_zero_limit: f64,
    pub big_m: f64,
    pub max_ladder: usize,
    /// Random midpoint pairs per `t`, on top of the grid pairs.
    pub random_pairs: usize,
    pub seed: u64,
}

/// Rungs inspected when deciding whether a ladder has stabilized.
pub const STABLE_WINDOW: usize = 10;
/// Relative spread under which a ladder tail counts as stabilized.
pub const STABLE_SPREAD: f64 = 1e-6;

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            u_grid: geometric_grid(-8, 8, 4),
            t_samples: Vec::new(),
            ladder_ratio: 2.0,
            tol_convex: 1e-9,
            tol_zero_limit: 1e-4,
            big_m: 1e6,
            max_ladder: 60,
            random_pairs: 200,
            seed: 0x5eed_0f_e0c1,
        }
    }
}

/// `10^(lo + k/per_decade)` for `k = 0 ..= (hi - lo) * per_decade`; whole
/// powers of ten are exact.
pub fn geometric_grid(lo: i32, hi: i32, per_decade: i32) -> Vec<f64> {
    (0..=(hi - lo) * per_decade)
        .map(|k| {
            if k % per_decade == 0 {
                format!("1e{}", lo + k / per_decade)
                    .parse()
                    .expect("integer power of ten")
            } else {
                10f64.powf(lo as f64 + k as f64 / per_decade as f64)
            }
        })
        .collect()
}

impl CheckConfig {
    pub fn with_t_samples(mut self, t: impl Into<Vec<f64>>) -> Self {
        self.t_samples = t.into();
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let grid_ok = !self.u_grid.is_empty()
            && self.u_grid.iter().all(|u| u.is_finite() && *u > 0.0)
            && self.u_grid.windows(2).all(|w| w[0] < w[1]);
        if !grid_ok {
            return Err(ConfigError::BadGrid);
        }
        if self.t_samples.is_empty() || self.t_samples.iter().any(|t| !t.is_finite()) {
            return Err(ConfigError::NoSamples);
        }
        for (name, v) in [
            ("tol_convex", self.tol_convex),
            ("tol_zero_limit", self.tol_zero_limit),
            ("big_m", self.big_m),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ConfigError::NonPositive(name));
            }
        }
        if !(self.ladder_ratio > 1.0 && self.ladder_ratio.is_finite()) {
            return Err(ConfigError::BadLadderRatio);
        }
        if self.max_ladder < STABLE_WINDOW {
            return Err(ConfigError::ShortLadder(STABLE_WINDOW));
        }
        Ok(())
    }
}
