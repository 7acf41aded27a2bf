//! Multi-stride walks: chaining strides, alternating leg roles, and keeping
//! the energy ledger.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::geometry::Vec2;
use crate::impact::{transition_energy, ImpactBranch};
use crate::kinematics::{clearance_report, ClearanceReport, RobotPose, StrideContext};
use crate::pendulum::{GaitParams, RobotParams};
use crate::terrain::{
    bootstrap_stance, foot_strike_time, initial_stance, Surface, SurfaceDescriptor, StanceGeometry,
};

pub const DEFAULT_POSE_SAMPLES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrideOptions {
    /// Poses recorded per stride, uniform in time, endpoints included.
    pub samples: usize,
    /// Abort when the trailing foot dips below the surface.
    pub strict: bool,
}

impl Default for StrideOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_POSE_SAMPLES,
            strict: false,
        }
    }
}

/// One stride from double support to the next foot strike.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrideRecord {
    pub index: usize,
    /// Walk time at which the stride starts.
    pub start_time: f64,
    pub support: Vec2,
    pub stance: StanceGeometry,
    /// `T(φ₀₂, α, E₀)`.
    pub nominal_t: f64,
    /// Time to the foot strike.
    pub actual_t: f64,
    pub strike: Vec2,
    /// Surface slope under the strike point.
    pub strike_slope: f64,
    /// Standing-leg state at the strike.
    pub end_phi: f64,
    pub end_phi_dot: f64,
    /// Energy supplied at the transition that starts this stride; zero for
    /// the first stride.
    pub ep: f64,
    /// Support-relative potential change absorbed at that transition.
    pub energy_delta: f64,
    pub branch: Option<ImpactBranch>,
    pub clearance: ClearanceReport,
    pub poses: Vec<RobotPose>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkTrace {
    pub strides: Vec<StrideRecord>,
    pub robot: RobotParams,
    pub gait: GaitParams,
    pub surface: SurfaceDescriptor,
    /// `E₀ + Σ E_p`.
    pub total_cost: f64,
    /// Set by [`reverse_trace`].
    pub reversed: bool,
}

/// Runs one stride from `stance`. `start_time` only stamps the poses.
pub fn simulate_stride(
    index: usize,
    start_time: f64,
    stance: &StanceGeometry,
    gait: &GaitParams,
    p: &RobotParams,
    s: &Surface,
    opts: &StrideOptions,
) -> Result<StrideRecord> {
    if opts.samples < 2 {
        return Err(GaitError::InvalidParams(format!(
            "need at least 2 poses per stride, got {}",
            opts.samples
        )));
    }
    let ctx = StrideContext::from_stance(stance, gait, p)?;
    let clearance = clearance_report(&ctx, |x| s.height(x))?;
    if opts.strict && !clearance.effective() {
        let (c, t) = if clearance.phase2_clear {
            (clearance.phase1_min, 0.0)
        } else {
            (clearance.d_f, clearance.t_min)
        };
        return Err(GaitError::ClearanceViolation { clearance: c, t });
    }
    let strike = foot_strike_time(&ctx, s)?;
    let end = ctx.trajectory().state_at(strike.t)?;

    let last = opts.samples - 1;
    let poses = (0..opts.samples)
        .map(|i| {
            let t = if i == last {
                strike.t
            } else {
                strike.t * i as f64 / last as f64
            };
            ctx.pose(t, start_time)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(StrideRecord {
        index,
        start_time,
        support: stance.standing_foot,
        stance: *stance,
        nominal_t: ctx.period(),
        actual_t: strike.t,
        strike: strike.point,
        strike_slope: strike.slope,
        end_phi: end.phi,
        end_phi_dot: end.phi_dot,
        ep: 0.0,
        energy_delta: 0.0,
        branch: None,
        clearance,
        poses,
    })
}

fn first_stance(x0: f64, gait: &GaitParams, p: &RobotParams, s: &Surface) -> Result<StanceGeometry> {
    if s.is_flat() && (gait.phi0 - (PI - gait.alpha)).abs() > 1e-12 {
        bootstrap_stance(x0, gait, p)
    } else {
        initial_stance(x0, s, gait, p)
    }
}

/// Walks `n` strides starting with the standing foot at `start_x`.
pub fn walk(
    start_x: f64,
    n: usize,
    gait: &GaitParams,
    p: &RobotParams,
    s: &Surface,
    opts: &StrideOptions,
) -> Result<WalkTrace> {
    if n == 0 {
        return Err(GaitError::InvalidParams("a walk needs at least one stride".into()));
    }
    gait.validate()?;
    p.validate()?;
    let annotate = |index: usize| move |e: GaitError| GaitError::Stride { index, source: Box::new(e) };

    let mut stance = first_stance(start_x, gait, p, s).map_err(annotate(0))?;
    let mut strides: Vec<StrideRecord> = Vec::with_capacity(n);
    let mut clock = 0.0;
    let mut total = gait.energy;
    for k in 0..n {
        let mut rec = simulate_stride(k, clock, &stance, gait, p, s, opts).map_err(annotate(k))?;
        if let Some(prev) = strides.last() {
            let tr = transition_energy(prev.end_phi, stance.phi02, gait.beta(), gait.energy, p)
                .map_err(annotate(k))?;
            rec.ep = tr.ep;
            rec.energy_delta = tr.energy_delta;
            rec.branch = Some(tr.branch);
            total += tr.ep;
        }
        clock += rec.actual_t;
        if k + 1 < n {
            stance = initial_stance(rec.strike.x, s, gait, p).map_err(annotate(k + 1))?;
        }
        strides.push(rec);
    }
    Ok(WalkTrace {
        strides,
        robot: *p,
        gait: *gait,
        surface: s.descriptor().clone(),
        total_cost: total,
        reversed: false,
    })
}

/// Time-reversed walk. Poses run backwards with negated `φ̇`; the energy
/// ledger is shifted so that each transition stays between the same pair of
/// strides. Applying it twice gives back the original trace.
pub fn reverse_trace(trace: &WalkTrace) -> WalkTrace {
    let duration = trace.duration();
    let n = trace.strides.len();
    let mut strides: Vec<StrideRecord> = trace
        .strides
        .iter()
        .rev()
        .enumerate()
        .map(|(j, s)| {
            let mut r = s.clone();
            r.index = j;
            r.start_time = duration - (s.start_time + s.actual_t);
            r.poses = s
                .poses
                .iter()
                .rev()
                .map(|q| RobotPose {
                    t: duration - q.t,
                    phi_dot: -q.phi_dot,
                    ..*q
                })
                .collect();
            r
        })
        .collect();
    for (j, rec) in strides.iter_mut().enumerate() {
        let src = &trace.strides[(n - j) % n];
        let (ep, delta, branch) = if j == 0 {
            (0.0, 0.0, None)
        } else {
            (src.ep, -src.energy_delta, src.branch)
        };
        rec.ep = ep;
        rec.energy_delta = delta;
        rec.branch = branch;
    }
    WalkTrace {
        strides,
        reversed: !trace.reversed,
        ..trace.clone()
    }
}

impl WalkTrace {
    pub fn duration(&self) -> f64 {
        self.strides.iter().map(|s| s.actual_t).sum()
    }

    /// Horizontal distance from the first support to the last strike.
    pub fn displacement(&self) -> f64 {
        match (self.strides.first(), self.strides.last()) {
            (Some(a), Some(b)) => b.strike.x - a.support.x,
            _ => 0.0,
        }
    }

    pub fn poses(&self) -> impl Iterator<Item = (usize, &RobotPose)> {
        self.strides.iter().flat_map(|s| s.poses.iter().map(move |p| (s.index, p)))
    }

    pub fn summary(&self) -> WalkSummary {
        let duration = self.duration();
        let displacement = self.displacement();
        WalkSummary {
            strides: self.strides.len(),
            duration,
            displacement,
            mean_speed: if duration > 0.0 { displacement / duration } else { 0.0 },
            total_cost: self.total_cost,
            min_clearance: self
                .strides
                .iter()
                .map(|s| s.clearance.d_f)
                .fold(f64::INFINITY, f64::min),
            all_effective: self.strides.iter().all(|s| s.clearance.effective()),
        }
    }

    /// Writes one CSV row per pose.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER)?;
        for (stride, q) in self.poses() {
            let cells = [
                q.t,
                q.phi,
                q.phi_dot,
                q.hip.x,
                q.hip.y,
                q.standing_knee.x,
                q.standing_knee.y,
                q.standing_foot.x,
                q.standing_foot.y,
                q.trailing_knee.x,
                q.trailing_knee.y,
                q.trailing_foot.x,
                q.trailing_foot.y,
            ];
            let mut row = Vec::with_capacity(CSV_HEADER.len());
            row.push(cells[0].to_string());
            row.push(stride.to_string());
            row.push(q.phase.as_str().to_string());
            row.extend(cells[1..].iter().map(|v| v.to_string()));
            w.write_record(&row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub const CSV_HEADER: [&str; 15] = [
    "t", "stride", "phase", "phi", "phi_dot", "x_h", "y_h", "x_k_stand", "y_k_stand", "x_f_stand",
    "y_f_stand", "x_k_trail", "y_k_trail", "x_f_trail", "y_f_trail",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkSummary {
    pub strides: usize,
    pub duration: f64,
    pub displacement: f64,
    pub mean_speed: f64,
    pub total_cost: f64,
    pub min_clearance: f64,
    pub all_effective: bool,
}
