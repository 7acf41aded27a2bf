//! Standing-leg dynamics.
//!
//! The standing leg is a massless rod of length `ℓ` carrying the hip mass `m`
//! and pivoting on its foot. With `φ` the angle between the leg and the
//! horizontal, the motion obeys `φ̈ + (g/ℓ) cos φ = 0` and conserves
//! `H = ½ m ℓ² φ̇² + m g ℓ sin φ`. Walking in the `+x` direction means
//! `φ̇ < 0`: the leg sweeps from an initial angle `φ₀ > π/2` down to the
//! attack angle `α < π/2`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::special::ellip_f;

/// Robot geometry and environment. The leg is split at the knee into a thigh
/// (`hip → knee`) and a shank (`knee → foot`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotParams {
    /// Hip mass (kg).
    pub mass: f64,
    /// Total leg length ℓ (m).
    pub leg_length: f64,
    /// Hip-to-knee length ℓ₁ (m).
    pub thigh: f64,
    /// Knee-to-foot length ℓ₂ (m).
    pub shank: f64,
    /// Gravitational acceleration (m/s²).
    pub gravity: f64,
}

impl RobotParams {
    pub fn new(mass: f64, leg_length: f64, thigh: f64, shank: f64, gravity: f64) -> Result<Self> {
        let p = Self {
            mass,
            leg_length,
            thigh,
            shank,
            gravity,
        };
        p.validate()?;
        Ok(p)
    }

    /// Splits `leg_length` at `thigh`, so the segment lengths always sum to
    /// the leg length.
    pub fn with_thigh(mass: f64, leg_length: f64, thigh: f64, gravity: f64) -> Result<Self> {
        Self::new(mass, leg_length, thigh, leg_length - thigh, gravity)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("mass", self.mass),
            ("leg_length", self.leg_length),
            ("thigh", self.thigh),
            ("shank", self.shank),
            ("gravity", self.gravity),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(GaitError::InvalidParams(format!("{name} must be positive, got {v}")));
            }
        }
        let sum = self.thigh + self.shank;
        if (sum - self.leg_length).abs() > 1e-12 * self.leg_length {
            return Err(GaitError::InvalidParams(format!(
                "thigh + shank = {sum} differs from leg_length = {}",
                self.leg_length
            )));
        }
        Ok(())
    }

    /// `2 E / (m ℓ²)`: twice the energy in angular units.
    fn energy_scale(&self, energy: f64) -> f64 {
        2.0 * energy / (self.mass * self.leg_length * self.leg_length)
    }

    fn omega_sq(&self) -> f64 {
        self.gravity / self.leg_length
    }
}

impl Default for RobotParams {
    /// m = 80 kg, ℓ = 1 m split evenly at the knee, g = 9.8 m/s².
    fn default() -> Self {
        Self {
            mass: 80.0,
            leg_length: 1.0,
            thigh: 0.5,
            shank: 0.5,
            gravity: 9.8,
        }
    }
}

/// Gait parameters, angles in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaitParams {
    /// Attack angle α between the standing leg and the ground at transition.
    pub alpha: f64,
    /// Standing-leg angle at the start of the first stride.
    pub phi0: f64,
    /// Pendular energy E₀ (J).
    pub energy: f64,
    /// Stride fraction ending the first foot phase.
    pub gamma_f: f64,
    /// Stride fraction ending the first knee phase.
    pub gamma_k: f64,
    /// Retraction angle of the trailing foot, in (-π, 0).
    pub alpha_r: f64,
}

impl GaitParams {
    pub fn new(
        alpha: f64,
        phi0: f64,
        energy: f64,
        gamma_f: f64,
        gamma_k: f64,
        alpha_r: f64,
    ) -> Result<Self> {
        let g = Self {
            alpha,
            phi0,
            energy,
            gamma_f,
            gamma_k,
            alpha_r,
        };
        g.validate()?;
        Ok(g)
    }

    /// Symmetric stride: `φ₀ = π - α`.
    pub fn symmetric(alpha: f64, energy: f64, gamma_f: f64, gamma_k: f64, alpha_r: f64) -> Result<Self> {
        Self::new(alpha, PI - alpha, energy, gamma_f, gamma_k, alpha_r)
    }

    /// Maximal opening between the legs, `β = π - 2α`.
    pub fn beta(&self) -> f64 {
        PI - 2.0 * self.alpha
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(GaitError::InvalidParams(msg));
        if !(self.alpha > 0.0 && self.alpha < FRAC_PI_2) {
            return bad(format!("attack angle {} outside (0, π/2)", self.alpha));
        }
        if !(self.phi0 > FRAC_PI_2 && self.phi0 <= PI) {
            return bad(format!("initial angle {} outside (π/2, π]", self.phi0));
        }
        if !self.energy.is_finite() || self.energy < 0.0 {
            return bad(format!("energy {} must be finite and non-negative", self.energy));
        }
        if !(self.gamma_f > 0.0 && self.gamma_f <= self.gamma_k && self.gamma_k < 1.0) {
            return bad(format!(
                "need 0 < gamma_f ≤ gamma_k < 1, got gamma_f = {}, gamma_k = {}",
                self.gamma_f, self.gamma_k
            ));
        }
        if !(self.alpha_r > -PI && self.alpha_r < 0.0) {
            return bad(format!("retraction angle {} outside (-π, 0)", self.alpha_r));
        }
        Ok(())
    }
}

/// Instantaneous state of the standing leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PendulumState {
    pub phi: f64,
    pub phi_dot: f64,
    pub t: f64,
}

/// Which root of the phase-curve equation to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// `φ̇ < 0`: forward walking.
    Negative,
    Positive,
}

pub fn total_energy(s: &PendulumState, p: &RobotParams) -> f64 {
    let l = p.leg_length;
    0.5 * p.mass * l * l * s.phi_dot * s.phi_dot + p.mass * p.gravity * l * s.phi.sin()
}

/// `E_c = m g ℓ`, the least energy that carries the hip over the apex.
pub fn critical_energy(p: &RobotParams) -> f64 {
    p.mass * p.gravity * p.leg_length
}

/// Angular speed on the phase curve of energy `energy` at angle `phi`.
pub fn phase_speed(phi: f64, energy: f64, p: &RobotParams, branch: Branch) -> Result<f64> {
    let radicand = p.energy_scale(energy) - 2.0 * p.omega_sq() * phi.sin();
    if radicand < 0.0 || !radicand.is_finite() {
        return Err(GaitError::Domain(format!(
            "angle {phi} rad is not reachable with energy {energy} J"
        )));
    }
    let speed = radicand.sqrt();
    Ok(match branch {
        Branch::Negative => -speed,
        Branch::Positive => speed,
    })
}

/// Angles reachable with energy `energy`, as closed intervals.
pub fn accessible_domain(energy: f64, p: &RobotParams) -> Vec<(f64, f64)> {
    let ec = critical_energy(p);
    if energy >= ec {
        vec![(0.0, PI)]
    } else if energy >= 0.0 {
        let a = (energy / ec).asin();
        vec![(0.0, a), (PI - a, PI)]
    } else {
        Vec::new()
    }
}

/// Whether the standing leg started at `(phi0, phi_dot0)` crosses the apex.
pub fn feasible(phi0: f64, phi_dot0: f64, p: &RobotParams) -> bool {
    if !(phi0 > FRAC_PI_2 && phi0 <= PI) || !(phi_dot0 < 0.0) {
        return false;
    }
    phi_dot0 * phi_dot0 > 2.0 * p.omega_sq() * (1.0 - phi0.sin())
}

fn check_energy(energy: f64, p: &RobotParams) -> Result<()> {
    let critical = critical_energy(p);
    if energy > critical {
        Ok(())
    } else {
        Err(GaitError::Infeasible { energy, critical })
    }
}

/// Closed-form time along a phase curve with `E₀ > E_c`.
///
/// Substituting `φ = π/2 - 2θ` turns `dt = -dφ / sqrt(2E₀/(mℓ²) - 2(g/ℓ) sin φ)`
/// into `(2/A) dθ / sqrt(1 - m sin²θ)` with `A² = 2E₀/(mℓ²) - 2g/ℓ` and
/// `m = -4(g/ℓ)/A²`.
#[derive(Debug, Clone, Copy)]
struct PhaseClock {
    amp: f64,
    param: f64,
}

impl PhaseClock {
    fn new(energy: f64, p: &RobotParams) -> Result<Self> {
        check_energy(energy, p)?;
        let amp_sq = p.energy_scale(energy) - 2.0 * p.omega_sq();
        let amp = amp_sq.sqrt();
        Ok(Self {
            amp,
            param: -4.0 * p.omega_sq() / amp_sq,
        })
    }

    /// `F((π - 2φ)/4, m)`, monotone decreasing in `φ`.
    fn potential(&self, phi: f64) -> Result<f64> {
        ellip_f((PI - 2.0 * phi) / 4.0, self.param)
    }

    fn elapsed(&self, from_potential: f64, phi: f64) -> Result<f64> {
        Ok(2.0 / self.amp * (self.potential(phi)? - from_potential))
    }
}

/// Duration of a stride from `phi0` down to `alpha` with energy `energy`,
/// via the elliptic-integral closed form.
pub fn stride_time(phi0: f64, alpha: f64, energy: f64, p: &RobotParams) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= FRAC_PI_2 && (FRAC_PI_2..=PI).contains(&phi0)) {
        return Err(GaitError::Domain(format!(
            "stride needs 0 < α ≤ π/2 ≤ φ₀ ≤ π, got α = {alpha}, φ₀ = {phi0}"
        )));
    }
    let clock = PhaseClock::new(energy, p)?;
    let t = clock.elapsed(clock.potential(phi0)?, alpha)?;
    Ok(t.max(0.0))
}

/// Flat-ground stride length `a₀ = 2ℓ cos α`.
pub fn stride_length(alpha: f64, p: &RobotParams) -> f64 {
    2.0 * p.leg_length * alpha.cos()
}

/// Mean forward speed `a₀ / T(π - α, α, E₀)` of a symmetric stride.
///
/// A zero-opening stride (`α = π/2`) has no length and reports zero speed.
pub fn stride_speed(alpha: f64, energy: f64, p: &RobotParams) -> Result<f64> {
    check_energy(energy, p)?;
    if alpha == FRAC_PI_2 {
        return Ok(0.0);
    }
    let t = stride_time(PI - alpha, alpha, energy, p)?;
    Ok(stride_length(alpha, p) / t)
}

/// Angular velocity at the transition, identical on both sides of it.
pub fn transition_angular_speed(alpha: f64, energy: f64, p: &RobotParams) -> Result<f64> {
    phase_speed(alpha, energy, p, Branch::Negative)
}

/// Right-hand side of `φ̈ = -(g/ℓ) cos φ`.
fn pendulum_rhs(phi: f64, phi_dot: f64, p: &RobotParams) -> (f64, f64) {
    (phi_dot, -p.omega_sq() * phi.cos())
}

/// Fixed-step classical RK4 integration of the standing-leg equation.
///
/// Kept as an independent cross-check of [`StandingTrajectory`]; the walking
/// model itself never steps the ODE.
pub fn integrate_rk4(start: PendulumState, p: &RobotParams, duration: f64, steps: usize) -> PendulumState {
    let steps = steps.max(1);
    let h = duration / steps as f64;
    let (mut phi, mut w) = (start.phi, start.phi_dot);
    for _ in 0..steps {
        let (k1p, k1w) = pendulum_rhs(phi, w, p);
        let (k2p, k2w) = pendulum_rhs(phi + 0.5 * h * k1p, w + 0.5 * h * k1w, p);
        let (k3p, k3w) = pendulum_rhs(phi + 0.5 * h * k2p, w + 0.5 * h * k2w, p);
        let (k4p, k4w) = pendulum_rhs(phi + h * k3p, w + h * k3w, p);
        phi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
    }
    PendulumState {
        phi,
        phi_dot: w,
        t: start.t + duration,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub phi: f64,
    pub phi_dot: f64,
}

/// Standing-leg motion over one stride, `t` measured from the stride start.
///
/// Sample times come from the closed-form phase-curve integral, so every
/// sample lies on the energy level exactly. `φ(t)` is inverted by cubic
/// Hermite interpolation between samples followed by a bracketed Newton
/// polish against the same integral. Beyond the nominal stride end the leg
/// keeps falling along the same phase curve until `φ = 0`; terrain strides use
/// that extension.
#[derive(Debug, Clone)]
pub struct StandingTrajectory {
    robot: RobotParams,
    energy: f64,
    phi0: f64,
    alpha: f64,
    clock: PhaseClock,
    start_potential: f64,
    samples: Vec<TrajectorySample>,
    horizon: f64,
}

pub const DEFAULT_TRAJECTORY_SAMPLES: usize = 1024;

/// Builds the standing trajectory from `phi0` down to `alpha`.
pub fn standing_trajectory(
    phi0: f64,
    alpha: f64,
    energy: f64,
    p: &RobotParams,
    n_samples: usize,
) -> Result<StandingTrajectory> {
    if n_samples < 16 {
        return Err(GaitError::InvalidParams(format!(
            "trajectory needs at least 16 samples, got {n_samples}"
        )));
    }
    if !(phi0 > FRAC_PI_2 && phi0 <= PI) {
        return Err(GaitError::Domain(format!("initial angle {phi0} outside (π/2, π]")));
    }
    if !(alpha > 0.0 && alpha < FRAC_PI_2) {
        return Err(GaitError::Domain(format!("attack angle {alpha} outside (0, π/2)")));
    }
    let clock = PhaseClock::new(energy, p)?;
    let start_potential = clock.potential(phi0)?;

    let span = phi0 - alpha;
    let last = n_samples - 1;
    let mut samples = Vec::with_capacity(n_samples);
    for i in 0..n_samples {
        let phi = if i == last {
            alpha
        } else {
            phi0 - span * (i as f64 / last as f64)
        };
        let t = if i == 0 {
            0.0
        } else {
            clock.elapsed(start_potential, phi)?
        };
        let phi_dot = phase_speed(phi, energy, p, Branch::Negative)?;
        samples.push(TrajectorySample { t, phi, phi_dot });
    }
    let horizon = clock.elapsed(start_potential, 0.0)?;

    Ok(StandingTrajectory {
        robot: *p,
        energy,
        phi0,
        alpha,
        clock,
        start_potential,
        samples,
        horizon,
    })
}

impl StandingTrajectory {
    pub fn samples(&self) -> &[TrajectorySample] {
        &self.samples
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn robot(&self) -> &RobotParams {
        &self.robot
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Time at which `φ = α`.
    pub fn stride_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    /// Time at which the hip would reach the ground (`φ = 0`).
    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    /// Time to fall from `φ₀` to `phi`.
    pub fn time_at(&self, phi: f64) -> Result<f64> {
        if !(0.0..=self.phi0).contains(&phi) {
            return Err(GaitError::Domain(format!(
                "angle {phi} outside the trajectory range [0, {}]",
                self.phi0
            )));
        }
        self.clock.elapsed(self.start_potential, phi)
    }

    pub fn phi_dot_at_angle(&self, phi: f64) -> Result<f64> {
        phase_speed(phi, self.energy, &self.robot, Branch::Negative)
    }

    /// Standing-leg angle at time `t` after the stride start.
    pub fn phi_at(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0 && t <= self.horizon) {
            return Err(GaitError::Domain(format!(
                "time {t} outside the trajectory range [0, {}]",
                self.horizon
            )));
        }
        let stride_end = self.stride_time();
        let (lo, hi, guess) = if t <= stride_end {
            // last sample with t_i <= t
            let i = self.samples.partition_point(|s| s.t <= t).saturating_sub(1);
            let a = self.samples[i];
            if a.t == t {
                return Ok(a.phi);
            }
            let b = self.samples[(i + 1).min(self.samples.len() - 1)];
            (b.phi, a.phi, hermite(a, b, t))
        } else {
            let end = self.samples[self.samples.len() - 1];
            (0.0, self.alpha, end.phi + end.phi_dot * (t - end.t))
        };
        self.polish(t, lo, hi, guess)
    }

    pub fn phi_dot_at(&self, t: f64) -> Result<f64> {
        self.phi_dot_at_angle(self.phi_at(t)?)
    }

    pub fn state_at(&self, t: f64) -> Result<PendulumState> {
        let phi = self.phi_at(t)?;
        Ok(PendulumState {
            phi,
            phi_dot: self.phi_dot_at_angle(phi)?,
            t,
        })
    }

    /// Safeguarded Newton on `time_at(φ) = t` with `φ ∈ [lo, hi]`.
    fn polish(&self, t: f64, mut lo: f64, mut hi: f64, guess: f64) -> Result<f64> {
        let mut phi = if guess > lo && guess < hi {
            guess
        } else {
            0.5 * (lo + hi)
        };
        for _ in 0..80 {
            let residual = self.time_at(phi)? - t;
            if residual == 0.0 {
                return Ok(phi);
            }
            // time decreases as φ grows
            if residual > 0.0 {
                lo = phi;
            } else {
                hi = phi;
            }
            let slope_inv = self.phi_dot_at_angle(phi)?;
            let mut next = phi - residual * slope_inv;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - phi).abs() <= 2.0 * f64::EPSILON * phi.abs().max(1e-3) || hi - lo <= f64::EPSILON {
                return Ok(next);
            }
            phi = next;
        }
        Err(GaitError::NoConvergence(format!("inverting the stride clock at t = {t}")))
    }
}

fn hermite(a: TrajectorySample, b: TrajectorySample, t: f64) -> f64 {
    let h = b.t - a.t;
    if h <= 0.0 {
        return a.phi;
    }
    let s = (t - a.t) / h;
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * a.phi
        + (s3 - 2.0 * s2 + s) * h * a.phi_dot
        + (-2.0 * s3 + 3.0 * s2) * b.phi
        + (s3 - s2) * h * b.phi_dot
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::quad_oracle;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn quad_stride_time(phi0: f64, alpha: f64, energy: f64, p: &RobotParams) -> f64 {
        let e = p.energy_scale(energy);
        let w = p.omega_sq();
        quad_oracle(|phi: f64| 1.0 / (e - 2.0 * w * phi.sin()).sqrt(), alpha, phi0, 1e-13).unwrap()
    }

    #[test]
    fn energy_examples() {
        let p = RobotParams::default();
        let apex = PendulumState { phi: FRAC_PI_2, phi_dot: 0.0, t: 0.0 };
        assert_eq!(total_energy(&apex, &p), 784.0);
        let ground = PendulumState { phi: 0.0, phi_dot: 0.0, t: 0.0 };
        assert_eq!(total_energy(&ground, &p), 0.0);

        let phi = deg(110.0);
        let w = phase_speed(phi, 800.0, &p, Branch::Negative).unwrap();
        let e = total_energy(&PendulumState { phi, phi_dot: w, t: 0.0 }, &p);
        assert!((e - 800.0).abs() < 1e-10);
    }

    #[test]
    fn critical_energy_examples() {
        assert_eq!(critical_energy(&RobotParams::default()), 784.0);
        let unit = RobotParams::new(1.0, 1.0, 0.5, 0.5, 1.0).unwrap();
        assert_eq!(critical_energy(&unit), 1.0);
        let tall = RobotParams::new(80.0, 2.0, 1.0, 1.0, 9.8).unwrap();
        assert_eq!(critical_energy(&tall), 1568.0);
    }

    #[test]
    fn phase_speed_examples() {
        let p = RobotParams::default();
        assert_eq!(phase_speed(FRAC_PI_2, 784.0, &p, Branch::Negative).unwrap(), 0.0);
        let w = phase_speed(deg(70.0), 800.0, &p, Branch::Negative).unwrap();
        assert!((w + (20.0 - 19.6 * deg(70.0).sin()).sqrt()).abs() < 1e-14);
        let w0 = phase_speed(0.0, 900.0, &p, Branch::Positive).unwrap();
        assert!((w0 - 22.5f64.sqrt()).abs() < 1e-14);
        assert!(phase_speed(FRAC_PI_2, 700.0, &p, Branch::Negative).is_err());
    }

    #[test]
    fn phase_speed_matches_rk4() {
        let p = RobotParams::default();
        let traj = standing_trajectory(deg(110.0), deg(70.0), 800.0, &p, 1024).unwrap();
        let w0 = traj.phi_dot_at_angle(deg(110.0)).unwrap();
        let t = traj.stride_time();
        let end = integrate_rk4(PendulumState { phi: deg(110.0), phi_dot: w0, t: 0.0 }, &p, t, 20_000);
        assert!((end.phi - deg(70.0)).abs() < 1e-9);
        let expected = phase_speed(deg(70.0), 800.0, &p, Branch::Negative).unwrap();
        assert!((end.phi_dot - expected).abs() < 1e-9);
        assert!((transition_angular_speed(deg(70.0), 800.0, &p).unwrap() - expected).abs() == 0.0);
    }

    #[test]
    fn accessible_domain_examples() {
        let p = RobotParams::default();
        assert_eq!(accessible_domain(784.0, &p), vec![(0.0, PI)]);
        assert_eq!(accessible_domain(900.0, &p), vec![(0.0, PI)]);
        let half = accessible_domain(392.0, &p);
        assert_eq!(half.len(), 2);
        assert!((half[0].1 - PI / 6.0).abs() < 1e-15);
        assert!((half[1].0 - 5.0 * PI / 6.0).abs() < 1e-15);
        // below E_c the apex is unreachable
        let low = accessible_domain(700.0, &p);
        assert!(low.iter().all(|&(a, b)| !(a..=b).contains(&FRAC_PI_2)));
    }

    #[test]
    fn feasibility_examples() {
        let p = RobotParams::default();
        let phi0 = deg(110.0);
        let w900 = phase_speed(phi0, 900.0, &p, Branch::Negative).unwrap();
        assert!(feasible(phi0, w900, &p));
        assert!(!feasible(phi0, 0.0, &p));
        // 750 J reaches 110° but not the apex
        let w750 = phase_speed(phi0, 750.0, &p, Branch::Negative).unwrap();
        assert!(!feasible(phi0, w750, &p));
        assert!(accessible_domain(750.0, &p).iter().all(|&(a, b)| !(a..=b).contains(&FRAC_PI_2)));
    }

    #[test]
    fn stride_time_reference_value() {
        let p = RobotParams::default();
        let t = stride_time(deg(110.0), deg(70.0), 800.0, &p).unwrap();
        assert!((t - 0.84).abs() < 0.01, "{t}");
        // independent scipy quad evaluation of the defining integral
        assert!((t - 0.840_682_256_120_27).abs() < 1e-12, "{t}");
    }

    #[test]
    fn stride_time_degenerate_and_infeasible() {
        let p = RobotParams::default();
        assert_eq!(stride_time(FRAC_PI_2, FRAC_PI_2, 800.0, &p).unwrap(), 0.0);
        assert!(matches!(
            stride_time(deg(110.0), deg(70.0), 784.0, &p),
            Err(GaitError::Infeasible { .. })
        ));
        assert!(matches!(
            stride_time(deg(110.0), deg(70.0), 700.0, &p),
            Err(GaitError::Infeasible { .. })
        ));
    }

    #[test]
    fn stride_time_matches_quadrature_grid() {
        let p = RobotParams::default();
        for a in [50.0, 60.0, 70.0, 80.0] {
            for e in [800.0, 900.0, 1000.0, 1200.0] {
                let t = stride_time(PI - deg(a), deg(a), e, &p).unwrap();
                let q = quad_stride_time(PI - deg(a), deg(a), e, &p);
                assert!(((t - q) / q).abs() < 1e-8, "α={a} E0={e}: {t} vs {q}");
            }
        }
        let t = stride_time(deg(110.0), deg(70.0), 900.0, &p).unwrap();
        let q = quad_stride_time(deg(110.0), deg(70.0), 900.0, &p);
        assert!(((t - q) / q).abs() < 1e-10);
    }

    #[test]
    fn stride_time_and_speed_monotone_in_energy() {
        let p = RobotParams::default();
        for a in [50.0, 60.0, 70.0, 80.0] {
            let mut prev: Option<(f64, f64)> = None;
            for e in [800.0, 900.0, 1000.0, 1200.0] {
                let t = stride_time(PI - deg(a), deg(a), e, &p).unwrap();
                let v = stride_speed(deg(a), e, &p).unwrap();
                if let Some((pt, pv)) = prev {
                    assert!(t < pt && v > pv);
                }
                prev = Some((t, v));
            }
        }
    }

    #[test]
    fn length_and_speed_examples() {
        let p = RobotParams::default();
        assert!((stride_length(deg(70.0), &p) - 0.684).abs() < 5e-4);
        assert!(stride_length(FRAC_PI_2, &p).abs() < 1e-15);
        let tall = RobotParams::new(80.0, 2.0, 1.0, 1.0, 9.8).unwrap();
        assert!((stride_length(deg(60.0), &tall) - 2.0).abs() < 1e-14);

        let v = stride_speed(deg(70.0), 800.0, &p).unwrap();
        assert!((v - 0.684 / 0.84).abs() < 0.01, "{v}");
        assert_eq!(stride_speed(FRAC_PI_2, 800.0, &p).unwrap(), 0.0);
        let q = quad_stride_time(deg(110.0), deg(70.0), 900.0, &p);
        let v900 = stride_speed(deg(70.0), 900.0, &p).unwrap();
        assert!((v900 - stride_length(deg(70.0), &p) / q).abs() < 1e-10);
    }

    #[test]
    fn transition_speed_examples() {
        let p = RobotParams::default();
        assert_eq!(transition_angular_speed(FRAC_PI_2, 784.0, &p).unwrap(), 0.0);
        let w = transition_angular_speed(deg(70.0), 784.0, &p).unwrap();
        assert!((w + (19.6 * (1.0 - deg(70.0).sin())).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn trajectory_endpoint_and_energy() {
        let p = RobotParams::default();
        let traj = standing_trajectory(deg(110.0), deg(70.0), 800.0, &p, 1024).unwrap();
        let t = stride_time(deg(110.0), deg(70.0), 800.0, &p).unwrap();
        assert!(((traj.stride_time() - t) / t).abs() < 1e-8);
        assert!((traj.stride_time() - 0.84).abs() < 0.01);
        for s in traj.samples() {
            let e = total_energy(&PendulumState { phi: s.phi, phi_dot: s.phi_dot, t: s.t }, &p);
            assert!(((e - 800.0) / 800.0).abs() <= 1e-9);
        }
        assert!(traj.samples().windows(2).all(|w| w[1].t > w[0].t && w[1].phi < w[0].phi));
    }

    #[test]
    fn trajectory_matches_rk4_oracle() {
        let p = RobotParams::default();
        let traj = standing_trajectory(deg(110.0), deg(70.0), 800.0, &p, 1024).unwrap();
        let t_end = traj.stride_time();
        let steps = 4000;
        let h = t_end / steps as f64;
        let mut state = PendulumState {
            phi: deg(110.0),
            phi_dot: traj.phi_dot_at_angle(deg(110.0)).unwrap(),
            t: 0.0,
        };
        let mut worst: f64 = 0.0;
        for k in 1..=steps {
            state = integrate_rk4(state, &p, h, 1);
            if k % 40 == 0 {
                worst = worst.max((traj.phi_at(k as f64 * h).unwrap() - state.phi).abs());
            }
        }
        assert!(worst <= 1e-6, "{worst}");
    }

    #[test]
    fn trajectory_extends_past_the_stride() {
        let p = RobotParams::default();
        let traj = standing_trajectory(deg(110.0), deg(70.0), 800.0, &p, 64).unwrap();
        let t = traj.stride_time() + 0.1;
        let phi = traj.phi_at(t).unwrap();
        assert!(phi < deg(70.0));
        assert!((traj.time_at(phi).unwrap() - t).abs() < 1e-12);
        assert!(traj.phi_at(traj.horizon() * 1.01).is_err());
    }

    #[test]
    fn trajectory_rejects_bad_input() {
        let p = RobotParams::default();
        assert!(standing_trajectory(deg(110.0), deg(70.0), 800.0, &p, 8).is_err());
        assert!(matches!(
            standing_trajectory(deg(110.0), deg(70.0), 784.0, &p, 64),
            Err(GaitError::Infeasible { .. })
        ));
    }

    #[test]
    fn motion_is_time_reversible() {
        let p = RobotParams::default();
        let w0 = phase_speed(deg(110.0), 800.0, &p, Branch::Negative).unwrap();
        let t = stride_time(deg(110.0), deg(70.0), 800.0, &p).unwrap();
        let start = PendulumState { phi: deg(110.0), phi_dot: w0, t: 0.0 };
        let end = integrate_rk4(start, &p, t, 10_000);
        let back = integrate_rk4(PendulumState { phi: end.phi, phi_dot: -end.phi_dot, t: 0.0 }, &p, t, 10_000);
        assert!((back.phi - deg(110.0)).abs() < 1e-6);
        assert!((back.phi_dot + w0).abs() < 1e-6);
    }

    #[test]
    fn param_validation() {
        assert!(RobotParams::new(80.0, 1.0, 0.5, 0.4, 9.8).is_err());
        assert!(RobotParams::new(-1.0, 1.0, 0.5, 0.5, 9.8).is_err());
        assert!(GaitParams::new(deg(70.0), deg(110.0), 800.0, 0.8, 0.7, deg(-40.0)).is_err());
        assert!(GaitParams::new(deg(70.0), deg(80.0), 800.0, 0.1, 0.7, deg(-40.0)).is_err());
        assert!(GaitParams::new(deg(70.0), deg(110.0), 800.0, 0.1, 0.7, deg(10.0)).is_err());
        let g = GaitParams::new(deg(70.0), deg(110.0), 800.0, 0.7, 0.7, deg(-40.0)).unwrap();
        assert_eq!(g.beta() + 2.0 * g.alpha, PI);
    }

    proptest::proptest! {
        #[test]
        fn phase_curve_identity(phi in 0.0..PI, e in 784.0..2000.0f64) {
            let p = RobotParams::default();
            let w = phase_speed(phi, e, &p, Branch::Positive).unwrap();
            let lhs = w * w + 2.0 * p.omega_sq() * phi.sin();
            proptest::prop_assert!((lhs - p.energy_scale(e)).abs() < 1e-12 * p.energy_scale(e));
        }

        #[test]
        fn phi_at_inverts_time_at(frac in 0.0..1.0f64, e in 790.0..1500.0f64) {
            let p = RobotParams::default();
            let traj = standing_trajectory(deg(115.0), deg(65.0), e, &p, 64).unwrap();
            let t = frac * traj.stride_time();
            let phi = traj.phi_at(t).unwrap();
            proptest::prop_assert!((traj.time_at(phi).unwrap() - t).abs() < 1e-12);
        }
    }
}
