use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cells::AlphaPolicy;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("{0} must be positive and finite, got {1}")]
    NotPositive(&'static str, f64),
    #[error("sample_count and windows must be at least 1")]
    ZeroCount,
    #[error("annulus bounds out of order: {0} > {1}")]
    Annulus(f64, f64),
    #[error("azimuth bounds out of order: {0} > {1}")]
    Azimuth(f64, f64),
    #[error("d_min {d_min} must be at least agent + target radius {reach}")]
    DistanceMinTooSmall { d_min: f64, reach: f64 },
    #[error("d_min {0} must be below d_max {1}")]
    DistanceBand(f64, f64),
}

/// How line-of-sight occlusion by moving discs is certified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VisibilityMode {
    /// Tightened endpoint terms buy a looser cross term; accepts a superset of
    /// what `Conservative` accepts once the collision checks hold.
    #[default]
    Relaxed,
    Conservative,
}

/// How neighbouring agents are constrained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellMode {
    /// Cells translate with the predicted target.
    #[default]
    Dynamic,
    /// Cells frozen at the replan instant.
    Static,
    /// No cells: neighbours are treated as constant-velocity obstacles.
    None,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerConfig {
    pub sample_count: usize,
    /// Planning horizon in seconds.
    pub horizon: f64,
    /// Corridor windows per horizon.
    pub windows: usize,
    pub d_min: f64,
    /// Defaults to twice `annulus_max`.
    pub d_max: Option<f64>,
    pub v_max: f64,
    pub a_max: f64,
    pub yaw_rate_max: f64,
    pub annulus_min: f64,
    pub annulus_max: f64,
    pub azimuth_min: f64,
    pub azimuth_max: f64,
    pub jerk_weight: f64,
    /// Defaults to the middle of the sampling annulus.
    pub d_des: Option<f64>,
    pub visibility_mode: VisibilityMode,
    pub cell_mode: CellMode,
    pub alpha_policy: AlphaPolicy,
    pub seed: u64,
    /// Worker threads for checking samples; 0 uses the ambient rayon pool.
    pub threads: usize,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            sample_count: 1000,
            horizon: 1.5,
            windows: 3,
            d_min: 0.2,
            d_max: None,
            v_max: 2.0,
            a_max: 5.0,
            yaw_rate_max: PI,
            annulus_min: 0.3,
            annulus_max: 0.6,
            azimuth_min: -PI,
            azimuth_max: PI,
            jerk_weight: 0.01,
            d_des: None,
            visibility_mode: VisibilityMode::Relaxed,
            cell_mode: CellMode::Dynamic,
            alpha_policy: AlphaPolicy::Midpoint,
            seed: 0,
            threads: 0,
        }
    }
}

impl PlannerConfig {
    pub fn d_max(&self) -> f64 {
        self.d_max.unwrap_or(2.0 * self.annulus_max)
    }

    pub fn d_des(&self) -> f64 {
        self.d_des.unwrap_or(0.5 * (self.annulus_min + self.annulus_max))
    }

    /// Checks internal consistency; `reach` is agent radius plus target radius.
    pub fn validate(&self, reach: f64) -> Result<(), ConfigError> {
        if self.sample_count == 0 || self.windows == 0 {
            return Err(ConfigError::ZeroCount);
        }
        let positive = [
            ("horizon", self.horizon),
            ("d_min", self.d_min),
            ("d_max", self.d_max()),
            ("v_max", self.v_max),
            ("a_max", self.a_max),
            ("yaw_rate_max", self.yaw_rate_max),
            ("annulus_min", self.annulus_min),
            ("d_des", self.d_des()),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::NotPositive(name, value));
            }
        }
        if !(self.jerk_weight.is_finite() && self.jerk_weight >= 0.0) {
            return Err(ConfigError::NotPositive("jerk_weight", self.jerk_weight));
        }
        if !(self.annulus_min <= self.annulus_max) || !self.annulus_max.is_finite() {
            return Err(ConfigError::Annulus(self.annulus_min, self.annulus_max));
        }
        if !(self.azimuth_min <= self.azimuth_max) || !self.azimuth_min.is_finite() || !self.azimuth_max.is_finite() {
            return Err(ConfigError::Azimuth(self.azimuth_min, self.azimuth_max));
        }
        if self.d_min < reach {
            return Err(ConfigError::DistanceMinTooSmall { d_min: self.d_min, reach });
        }
        if self.d_min >= self.d_max() {
            return Err(ConfigError::DistanceBand(self.d_min, self.d_max()));
        }
        Ok(())
    }
}
