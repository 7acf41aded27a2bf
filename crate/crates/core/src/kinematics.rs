//! Articulated trailing-leg kinematics over one stride.
//!
//! The trailing leg is massless, so its motion is prescribed rather than
//! integrated. The knee moves in two phases and the foot tip in three:
//!
//! 1. `[0, γ_f T]`: the thigh rotates forward at `ω_k` while the shank
//!    retracts backwards by `α_r` at `ω_f1 < 0`.
//! 2. `[γ_f T, γ_k T]`: the thigh keeps rotating; the shank swings forward at
//!    `ω_f2 > 0` until thigh and shank are collinear at angle `φ₂`.
//! 3. `[γ_k T, strike]`: the stretched leg holds the opening `β` to the
//!    standing leg until its foot reaches the ground.
//!
//! Times are local to the stride (`t = 0` at the stride start). Directions
//! are absolute angles from the `+x` axis.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::geometry::{rotation, Vec2};
use crate::numeric::scan_minimize;
use crate::pendulum::{standing_trajectory, GaitParams, RobotParams, StandingTrajectory, DEFAULT_TRAJECTORY_SAMPLES};
use crate::terrain::StanceGeometry;

/// Phase of the trailing foot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FootPhase {
    Foot1,
    Foot2,
    Foot3,
}

impl FootPhase {
    pub fn as_str(self) -> &'static str {
        match self {
            FootPhase::Foot1 => "foot1",
            FootPhase::Foot2 => "foot2",
            FootPhase::Foot3 => "foot3",
        }
    }
}

/// Angles and rates of the trailing leg for one stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrideKinematicParams {
    /// Thigh direction at the stride start.
    pub phi1: f64,
    /// Thigh (and shank) direction at the end of the first knee phase.
    pub phi2: f64,
    pub omega_k: f64,
    pub omega_f1: f64,
    /// `None` when `γ_f = γ_k`: the second foot phase is instantaneous.
    pub omega_f2: Option<f64>,
    /// Nominal stride duration.
    pub period: f64,
}

impl StrideKinematicParams {
    pub fn instantaneous_phase2(&self) -> bool {
        self.omega_f2.is_none()
    }
}

/// Positions of every joint at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotPose {
    pub t: f64,
    pub phase: FootPhase,
    pub phi: f64,
    pub phi_dot: f64,
    pub hip: Vec2,
    pub standing_knee: Vec2,
    pub standing_foot: Vec2,
    pub trailing_knee: Vec2,
    pub trailing_foot: Vec2,
}

/// Everything needed to place the trailing leg during one stride.
#[derive(Debug, Clone)]
pub struct StrideContext {
    support: Vec2,
    trajectory: StandingTrajectory,
    robot: RobotParams,
    gait: GaitParams,
    knee_dir0: f64,
    foot_dir0: f64,
    rates: StrideKinematicParams,
}

impl StrideContext {
    /// General constructor. `phi0` is the standing-leg start angle,
    /// `knee_dir0` the thigh direction and `foot_dir0` the shank direction of
    /// the trailing leg at the stride start.
    pub fn new(
        support: Vec2,
        phi0: f64,
        knee_dir0: f64,
        foot_dir0: f64,
        gait: &GaitParams,
        robot: &RobotParams,
        samples: usize,
    ) -> Result<Self> {
        gait.validate()?;
        robot.validate()?;
        let trajectory = standing_trajectory(phi0, gait.alpha, gait.energy, robot, samples)?;
        let period = trajectory.stride_time();
        let mut ctx = Self {
            support,
            trajectory,
            robot: *robot,
            gait: *gait,
            knee_dir0,
            foot_dir0,
            rates: StrideKinematicParams {
                phi1: knee_dir0,
                phi2: knee_dir0,
                omega_k: 0.0,
                omega_f1: 0.0,
                omega_f2: None,
                period,
            },
        };
        ctx.rates = compute_phase_angles(&ctx)?;
        Ok(ctx)
    }

    /// Flat-ground stride from `support` with the gait's own `φ₀`. The thigh
    /// starts at `φ₁ = π + α` and the shank at `2π - φ₀`, so the trailing leg
    /// is straight only when `φ₀ = π - α`.
    pub fn flat(gait: &GaitParams, robot: &RobotParams, support: Vec2) -> Result<Self> {
        Self::new(
            support,
            gait.phi0,
            PI + gait.alpha,
            2.0 * PI - gait.phi0,
            gait,
            robot,
            DEFAULT_TRAJECTORY_SAMPLES,
        )
    }

    /// Stride starting from a two-foot stance on arbitrary ground.
    pub fn from_stance(stance: &StanceGeometry, gait: &GaitParams, robot: &RobotParams) -> Result<Self> {
        Self::new(
            stance.standing_foot,
            stance.phi02,
            stance.phi12,
            stance.trailing_shank_dir,
            gait,
            robot,
            DEFAULT_TRAJECTORY_SAMPLES,
        )
    }

    pub fn support(&self) -> Vec2 {
        self.support
    }

    pub fn trajectory(&self) -> &StandingTrajectory {
        &self.trajectory
    }

    pub fn robot(&self) -> &RobotParams {
        &self.robot
    }

    pub fn gait(&self) -> &GaitParams {
        &self.gait
    }

    pub fn rates(&self) -> &StrideKinematicParams {
        &self.rates
    }

    /// Nominal stride time `T(φ₀, α, E₀)`.
    pub fn period(&self) -> f64 {
        self.rates.period
    }

    pub fn foot_switch_time(&self) -> f64 {
        self.gait.gamma_f * self.period()
    }

    pub fn knee_switch_time(&self) -> f64 {
        self.gait.gamma_k * self.period()
    }

    /// Latest time the stride can be evaluated: the hip reaches the ground.
    pub fn horizon(&self) -> f64 {
        self.trajectory.horizon()
    }

    fn beta(&self) -> f64 {
        self.gait.beta()
    }

    fn check_window(&self, t: f64, lo: f64, hi: f64, what: &str) -> Result<()> {
        let slack = 1e-12 * self.period().max(1.0);
        if t >= lo - slack && t <= hi + slack {
            Ok(())
        } else {
            Err(GaitError::Domain(format!("t = {t} outside the {what} window [{lo}, {hi}]")))
        }
    }

    pub fn hip_position(&self, t: f64) -> Result<Vec2> {
        let phi = self.trajectory.phi_at(t)?;
        Ok(self.support + self.robot.leg_length * Vec2::from_angle(phi))
    }

    /// Angle of the hip seen from the support point, quadrant-aware, in `[0, π]`.
    pub fn hip_angle(&self, t: f64) -> Result<f64> {
        Ok(support_angle(self.hip_position(t)? - self.support))
    }

    /// `φ₃(t) = π + β + angle(hip - support)`: direction of the stretched
    /// trailing leg in the last phase.
    pub fn stretched_direction(&self, t: f64) -> Result<f64> {
        Ok(PI + self.beta() + self.hip_angle(t)?)
    }

    pub fn knee_phase1(&self, t: f64) -> Result<Vec2> {
        self.check_window(t, 0.0, self.knee_switch_time(), "first knee phase")?;
        let dir = rotation(self.rates.omega_k, t).apply(Vec2::from_angle(self.knee_dir0));
        Ok(self.hip_position(t)? + self.robot.thigh * dir)
    }

    pub fn knee_phase2(&self, t: f64) -> Result<Vec2> {
        self.check_window(t, self.knee_switch_time(), self.horizon(), "second knee phase")?;
        let dir = Vec2::from_angle(self.stretched_direction(t)?);
        Ok(self.hip_position(t)? + self.robot.thigh * dir)
    }

    pub fn foot_phase1(&self, t: f64) -> Result<Vec2> {
        self.check_window(t, 0.0, self.foot_switch_time(), "first foot phase")?;
        let dir = rotation(self.rates.omega_f1, t).apply(Vec2::from_angle(self.foot_dir0));
        Ok(self.knee_phase1(t)? + self.robot.shank * dir)
    }

    /// Shank direction during the second foot phase.
    fn shank_direction_phase2(&self, t: f64) -> f64 {
        let start = self.foot_dir0 + self.gait.alpha_r;
        match self.rates.omega_f2 {
            Some(w) => start + w * (t - self.foot_switch_time()),
            None => start,
        }
    }

    pub fn foot_phase2(&self, t: f64) -> Result<Vec2> {
        self.check_window(t, self.foot_switch_time(), self.knee_switch_time(), "second foot phase")?;
        let dir = Vec2::from_angle(self.shank_direction_phase2(t));
        Ok(self.knee_phase1(t)? + self.robot.shank * dir)
    }

    pub fn foot_phase3(&self, t: f64) -> Result<Vec2> {
        self.check_window(t, self.knee_switch_time(), self.horizon(), "third foot phase")?;
        let dir = Vec2::from_angle(self.stretched_direction(t)?);
        Ok(self.hip_position(t)? + self.robot.leg_length * dir)
    }

    pub fn foot_phase(&self, t: f64) -> FootPhase {
        if t < self.foot_switch_time() {
            FootPhase::Foot1
        } else if t < self.knee_switch_time() {
            FootPhase::Foot2
        } else {
            FootPhase::Foot3
        }
    }

    /// Trailing foot tip at `t`, dispatched over the three phase windows.
    pub fn trailing_foot(&self, t: f64) -> Result<(Vec2, FootPhase)> {
        if t < 0.0 {
            return Err(GaitError::Domain(format!("t = {t} precedes the stride")));
        }
        let phase = self.foot_phase(t);
        let pos = match phase {
            FootPhase::Foot1 => self.foot_phase1(t)?,
            FootPhase::Foot2 => self.foot_phase2(t)?,
            FootPhase::Foot3 => self.foot_phase3(t)?,
        };
        Ok((pos, phase))
    }

    pub fn trailing_knee(&self, t: f64) -> Result<Vec2> {
        if t < self.knee_switch_time() {
            self.knee_phase1(t)
        } else {
            self.knee_phase2(t)
        }
    }

    /// Full pose at local time `t`, stamped with `t + t_offset`.
    pub fn pose(&self, t: f64, t_offset: f64) -> Result<RobotPose> {
        let state = self.trajectory.state_at(t)?;
        let hip = self.support + self.robot.leg_length * Vec2::from_angle(state.phi);
        let standing_knee = hip - self.robot.thigh * Vec2::from_angle(state.phi);
        let (trailing_foot, phase) = self.trailing_foot(t)?;
        Ok(RobotPose {
            t: t + t_offset,
            phase,
            phi: state.phi,
            phi_dot: state.phi_dot,
            hip,
            standing_knee,
            standing_foot: self.support,
            trailing_knee: self.trailing_knee(t)?,
            trailing_foot,
        })
    }

    /// Lowest point of the trailing foot above `height` during the second
    /// foot phase, as `(t, clearance)`. With an instantaneous second phase
    /// the shank sweeps from its retracted direction to `φ₂` with the knee
    /// frozen at `γ_k T`, and the minimum is taken over that sweep.
    pub fn phase2_clearance<H: Fn(f64) -> f64>(&self, height: H) -> Result<(f64, f64)> {
        let (a, b) = (self.foot_switch_time(), self.knee_switch_time());
        if self.rates.instantaneous_phase2() {
            let knee = self.knee_phase1(b)?;
            let start = self.foot_dir0 + self.gait.alpha_r;
            let shank = self.robot.shank;
            let (_, v) = scan_minimize(
                |psi| {
                    let foot = knee + shank * Vec2::from_angle(psi);
                    foot.y - height(foot.x)
                },
                start.min(self.rates.phi2),
                start.max(self.rates.phi2),
                CLEARANCE_GRID,
                3,
            );
            return Ok((b, v));
        }
        let mut failure = None;
        let best = scan_minimize(
            |t| match self.foot_phase2(t) {
                Ok(foot) => foot.y - height(foot.x),
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            a,
            b,
            CLEARANCE_GRID,
            3,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(best),
        }
    }

    /// Lowest grid point of the trailing foot above `height` on `(0, γ_f T]`.
    pub fn phase1_clearance<H: Fn(f64) -> f64>(&self, height: H) -> Result<(f64, f64)> {
        let end = self.foot_switch_time();
        let h = end / CLEARANCE_GRID as f64;
        let mut best = (end, f64::INFINITY);
        for i in 1..=CLEARANCE_GRID {
            let t = if i == CLEARANCE_GRID { end } else { h * i as f64 };
            let foot = self.foot_phase1(t)?;
            let c = foot.y - height(foot.x);
            if c < best.1 {
                best = (t, c);
            }
        }
        Ok(best)
    }
}

/// Grid size for clearance scans before golden refinement.
pub const CLEARANCE_GRID: usize = 2048;

fn support_angle(v: Vec2) -> f64 {
    let a = v.angle();
    if a >= 0.0 {
        a
    } else if a < -FRAC_PI_2 {
        PI
    } else {
        0.0
    }
}

/// Thigh target angle `φ₂` and the three angular rates of the trailing leg.
pub fn compute_phase_angles(ctx: &StrideContext) -> Result<StrideKinematicParams> {
    let period = ctx.trajectory.stride_time();
    let gait = &ctx.gait;
    let t_k = gait.gamma_k * period;
    let t_f = gait.gamma_f * period;
    let phi1 = ctx.knee_dir0;
    let phi2 = PI + gait.beta() + ctx.hip_angle(t_k)?;
    let omega_k = (phi2 - phi1) / t_k;
    if !(omega_k > 0.0) {
        return Err(GaitError::Domain(format!(
            "thigh would rotate backwards: φ₂ - φ₁ = {}",
            phi2 - phi1
        )));
    }
    let omega_f1 = gait.alpha_r / t_f;
    let omega_f2 = if gait.gamma_k > gait.gamma_f {
        let w = (phi2 - ctx.foot_dir0 - gait.alpha_r) / (t_k - t_f);
        if !(w > 0.0) {
            return Err(GaitError::Domain(format!("shank swing rate {w} is not positive")));
        }
        Some(w)
    } else {
        None
    };
    Ok(StrideKinematicParams {
        phi1,
        phi2,
        omega_k,
        omega_f1,
        omega_f2,
        period,
    })
}

/// Trailing-foot clearance over flat ground for one stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClearanceReport {
    /// `d_f`: minimum height of the foot tip during the second foot phase.
    pub d_f: f64,
    /// Time of that minimum.
    pub t_min: f64,
    /// Minimum height over the grid on `(0, γ_f T]`.
    pub phase1_min: f64,
    /// `y_f1 > 0` on the first foot phase.
    pub phase1_clear: bool,
    /// `y_f2 ≥ 0` on the second foot phase.
    pub phase2_clear: bool,
}

impl ClearanceReport {
    /// The sufficient condition for an effective stride.
    pub fn effective(&self) -> bool {
        self.phase1_clear && self.phase2_clear
    }
}

/// Clearance of the trailing foot over flat ground, from support `(0, 0)`.
pub fn min_clearance(gait: &GaitParams, p: &RobotParams) -> Result<ClearanceReport> {
    let ctx = StrideContext::flat(gait, p, Vec2::ZERO)?;
    clearance_report(&ctx, |_| 0.0)
}

pub fn clearance_report<H: Fn(f64) -> f64>(ctx: &StrideContext, height: H) -> Result<ClearanceReport> {
    let (t_min, d_f) = ctx.phase2_clearance(&height)?;
    let (_, phase1_min) = ctx.phase1_clearance(&height)?;
    Ok(ClearanceReport {
        d_f,
        t_min,
        phase1_min,
        phase1_clear: phase1_min > 0.0,
        phase2_clear: d_f >= 0.0,
    })
}
