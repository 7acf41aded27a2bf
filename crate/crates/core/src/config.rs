//! Run configuration files. Angles are given in degrees here and converted
//! to radians on load.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::pendulum::{GaitParams, RobotParams};
use crate::sweeps::SweepSpec;
use crate::terrain::SurfaceDescriptor;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RobotConfig {
    pub mass: f64,
    pub leg_length: f64,
    pub thigh: f64,
    /// Defaults to `leg_length - thigh`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shank: Option<f64>,
    pub gravity: f64,
}

impl Default for RobotConfig {
    fn default() -> Self {
        let p = RobotParams::default();
        Self {
            mass: p.mass,
            leg_length: p.leg_length,
            thigh: p.thigh,
            shank: None,
            gravity: p.gravity,
        }
    }
}

impl RobotConfig {
    pub fn params(&self) -> Result<RobotParams> {
        let shank = self.shank.unwrap_or(self.leg_length - self.thigh);
        RobotParams::new(self.mass, self.leg_length, self.thigh, shank, self.gravity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaitConfig {
    pub alpha_deg: f64,
    /// Defaults to `180 - alpha_deg`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi0_deg: Option<f64>,
    pub energy: f64,
    pub gamma_f: f64,
    pub gamma_k: f64,
    pub alpha_r_deg: f64,
}

impl Default for GaitConfig {
    fn default() -> Self {
        Self {
            alpha_deg: 70.0,
            phi0_deg: None,
            energy: 800.0,
            gamma_f: 0.6,
            gamma_k: 0.7,
            alpha_r_deg: -80.0,
        }
    }
}

impl GaitConfig {
    pub fn params(&self) -> Result<GaitParams> {
        let phi0 = self.phi0_deg.unwrap_or(180.0 - self.alpha_deg);
        GaitParams::new(
            self.alpha_deg.to_radians(),
            phi0.to_radians(),
            self.energy,
            self.gamma_f,
            self.gamma_k,
            self.alpha_r_deg.to_radians(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeConfig {
    pub energies: Vec<f64>,
    pub tol: f64,
}

impl Default for OptimizeConfig {
    fn default() -> Self {
        Self {
            energies: Vec::new(),
            tol: crate::sweeps::DEFAULT_BETA_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Names the output subdirectory.
    pub name: String,
    pub robot: RobotConfig,
    pub gait: GaitConfig,
    pub surface: SurfaceDescriptor,
    pub start_x: f64,
    pub strides: usize,
    pub samples: usize,
    pub strict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    pub optimize: OptimizeConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            name: "run".into(),
            robot: RobotConfig::default(),
            gait: GaitConfig::default(),
            surface: SurfaceDescriptor::Flat,
            start_x: 0.0,
            strides: 1,
            samples: crate::engine::DEFAULT_POSE_SAMPLES,
            strict: false,
            out: None,
            sweep: None,
            optimize: OptimizeConfig::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Enforces the invariants of every embedded parameter set.
    pub fn check(&self) -> Result<()> {
        self.robot.params()?;
        self.gait.params()?;
        crate::terrain::make_surface(&self.surface)?;
        if self.strides == 0 {
            return Err(GaitError::InvalidParams("strides must be at least 1".into()));
        }
        if self.samples < 2 {
            return Err(GaitError::InvalidParams("samples must be at least 2".into()));
        }
        if self.name.is_empty() || self.name.contains(['/', '\\']) {
            return Err(GaitError::InvalidParams(format!("run name {:?} is not a plain file name", self.name)));
        }
        Ok(())
    }
}
