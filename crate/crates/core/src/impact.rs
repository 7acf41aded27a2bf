//! Energy bookkeeping at the transition between strides.
//!
//! When the trailing foot lands, the component of the hip velocity along the
//! new standing leg is absorbed by the ground. The actuator then restores the
//! pendular energy `E₀` for the next stride.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::geometry::{PlanarVector, Vec2};
use crate::pendulum::RobotParams;

/// Hip velocity just before the strike, with the standing leg at angle `alpha`.
pub fn hip_velocity_pre_impact(alpha: f64, phi_dot: f64, p: &RobotParams) -> PlanarVector {
    let s = p.leg_length * phi_dot;
    Vec2::new(-s * alpha.sin(), s * alpha.cos())
}

/// Removes the velocity component along the landing leg, which points from
/// its foot to the hip at angle `π - alpha`.
pub fn post_impact_velocity(v: PlanarVector, alpha: f64) -> PlanarVector {
    let d = Vec2::from_angle(PI - alpha);
    v - v.dot(d) * d
}

/// Which replenishment rule applies at a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactBranch {
    /// `β ≤ π/2`: the hip keeps moving forward after the strike.
    Forward,
    /// `β > π/2`: the strike reverses the hip velocity.
    Reversed,
}

impl ImpactBranch {
    pub fn for_opening(beta: f64) -> Self {
        if beta <= FRAC_PI_2 {
            ImpactBranch::Forward
        } else {
            ImpactBranch::Reversed
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ImpactBranch::Forward => "forward",
            ImpactBranch::Reversed => "reversed",
        }
    }
}

/// Both closed forms of the replenishment energy, before branch selection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReplenishmentForms {
    /// `(E₀ - mgℓ cos(β/2)) sin²β`
    pub forward: f64,
    /// `(E₀ - mgℓ cos(β/2)) (1 + cos²β)`
    pub reversed: f64,
    pub branch: ImpactBranch,
}

impl ReplenishmentForms {
    pub fn selected(&self) -> f64 {
        match self.branch {
            ImpactBranch::Forward => self.forward,
            ImpactBranch::Reversed => self.reversed,
        }
    }
}

pub fn replenishment_forms(alpha: f64, energy: f64, p: &RobotParams) -> Result<ReplenishmentForms> {
    let beta = PI - 2.0 * alpha;
    let kinetic = energy - p.mass * p.gravity * p.leg_length * (0.5 * beta).cos();
    if !(kinetic > 0.0) {
        return Err(GaitError::Domain(format!(
            "energy {energy} J does not exceed the potential at the attack angle {alpha} rad"
        )));
    }
    let (s, c) = beta.sin_cos();
    Ok(ReplenishmentForms {
        forward: kinetic * s * s,
        reversed: kinetic * (1.0 + c * c),
        branch: ImpactBranch::for_opening(beta),
    })
}

/// Energy `E_p` the actuator must supply at each flat-ground transition.
pub fn replenishment_energy(alpha: f64, energy: f64, p: &RobotParams) -> Result<f64> {
    let ep = replenishment_forms(alpha, energy, p)?.selected();
    if ep < 0.0 {
        return Err(GaitError::Domain(format!("negative replenishment energy {ep}")));
    }
    Ok(ep)
}

/// Energy spent after `n` strides: the initial deposit plus one
/// replenishment per transition.
pub fn walk_energy_cost(n: usize, energy: f64, ep: f64) -> f64 {
    energy + n.saturating_sub(1) as f64 * ep
}

/// Energy accounting for a transition on arbitrary ground.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionEnergy {
    /// Energy supplied by the actuator.
    pub ep: f64,
    /// Kinetic energy of the hip just before the strike.
    pub kinetic_before: f64,
    /// Kinetic energy left after the inelastic strike.
    pub kinetic_after: f64,
    /// Kinetic energy the next stride needs to start at `E₀`.
    pub kinetic_needed: f64,
    /// `kinetic_needed - kinetic_before`: support-relative potential change
    /// between the two stance configurations. Zero on flat ground.
    pub energy_delta: f64,
    pub branch: ImpactBranch,
}

/// Replenishment for a strike with the old standing leg at `phi_strike` and
/// the new standing leg starting at `phi_next`, both support-relative.
///
/// The stance triangle is rigid, so the strike keeps a `cos²β` share of the
/// kinetic energy whatever the ground. On flat ground `phi_strike = α`,
/// `phi_next = π - α` and this reduces to [`replenishment_energy`].
pub fn transition_energy(
    phi_strike: f64,
    phi_next: f64,
    beta: f64,
    energy: f64,
    p: &RobotParams,
) -> Result<TransitionEnergy> {
    let weight = p.mass * p.gravity * p.leg_length;
    let kinetic_before = energy - weight * phi_strike.sin();
    let kinetic_needed = energy - weight * phi_next.sin();
    if !(kinetic_before > 0.0 && kinetic_needed > 0.0) {
        return Err(GaitError::Domain(format!(
            "energy {energy} J cannot sustain the transition from {phi_strike} to {phi_next} rad"
        )));
    }
    let c = beta.cos();
    let kinetic_after = kinetic_before * c * c;
    let branch = ImpactBranch::for_opening(beta);
    let ep = match branch {
        ImpactBranch::Forward => kinetic_needed - kinetic_after,
        ImpactBranch::Reversed => kinetic_needed + kinetic_after,
    };
    Ok(TransitionEnergy {
        ep,
        kinetic_before,
        kinetic_after,
        kinetic_needed,
        energy_delta: kinetic_needed - kinetic_before,
        branch,
    })
}
