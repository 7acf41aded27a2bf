//! Parameter sweeps over the flat-ground model and the speed-optimal opening
//! angle.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::impact::replenishment_forms;
use crate::kinematics::min_clearance;
use crate::numeric::golden_section_min;
use crate::pendulum::{critical_energy, stride_length, stride_time, GaitParams, RobotParams};

/// Either an inclusive uniform grid or an explicit list of values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    Range { min: f64, max: f64, count: usize },
    List(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            Grid::Range { min, max, count } => {
                if *count < 2 {
                    return Err(GaitError::InvalidParams(format!("grid count {count} must be at least 2")));
                }
                if !(min.is_finite() && max.is_finite() && max > min) {
                    return Err(GaitError::InvalidParams(format!("grid bounds [{min}, {max}] are not increasing")));
                }
                let last = count - 1;
                Ok((0..*count)
                    .map(|i| if i == last { *max } else { min + (max - min) * i as f64 / last as f64 })
                    .collect())
            }
            Grid::List(v) => {
                if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                    return Err(GaitError::InvalidParams("grid list must be non-empty and finite".into()));
                }
                let mut v = v.clone();
                v.sort_by(f64::total_cmp);
                v.dedup();
                Ok(v)
            }
        }
    }
}

/// What to sweep. Angles are in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepSpec {
    /// Stride time and mean speed against pendular energy, one curve per β.
    TimeSpeedVsE0 { betas_deg: Grid, e0: Grid },
    /// Mean speed against β, one curve per energy, with the optimum flagged.
    SpeedVsBeta { e0: Grid, betas_deg: Grid },
    /// Replenishment energy against β, one curve per energy.
    EpVsBeta { e0: Grid, betas_deg: Grid },
    /// Minimum foot clearance against `γ_f`, one curve per `(γ_k, α_r)`;
    /// the remaining gait parameters come from the run configuration.
    Clearance { gamma_f: Grid, gamma_k: Grid, alpha_r_deg: Grid },
}

impl SweepSpec {
    pub fn name(&self) -> &'static str {
        match self {
            SweepSpec::TimeSpeedVsE0 { .. } => "time_speed_vs_e0",
            SweepSpec::SpeedVsBeta { .. } => "speed_vs_beta",
            SweepSpec::EpVsBeta { .. } => "ep_vs_beta",
            SweepSpec::Clearance { .. } => "clearance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Text(String),
    Flag(bool),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Flag(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMeta {
    pub kind: String,
    pub robot: RobotParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gait: Option<GaitParams>,
    /// Grid points left out, with the reason.
    pub skipped: Vec<String>,
    /// Seconds since the Unix epoch when the sweep ran.
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: SweepMeta,
}

impl SweepResult {
    fn new(kind: &str, columns: &[&str], robot: &RobotParams, gait: Option<GaitParams>) -> Self {
        let timestamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            meta: SweepMeta {
                kind: kind.to_string(),
                robot: *robot,
                gait,
                skipped: Vec::new(),
                timestamp,
            },
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        self.rows.iter().map(|r| r[i].as_f64()).collect()
    }

    /// Rows whose column `key` equals `value`.
    pub fn filter(&self, key: &str, value: f64) -> Vec<&Vec<Cell>> {
        let Some(i) = self.columns.iter().position(|c| c == key) else {
            return Vec::new();
        };
        self.rows.iter().filter(|r| r[i].as_f64() == Some(value)).collect()
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn meta_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.meta)?)
    }
}

fn alpha_of(beta: f64) -> f64 {
    0.5 * (PI - beta)
}

/// Mean speed `v_m = a₀ / T` of the symmetric flat-ground stride with
/// opening `beta`.
pub fn mean_speed(beta: f64, energy: f64, p: &RobotParams) -> Result<f64> {
    let alpha = alpha_of(beta);
    let t = stride_time(PI - alpha, alpha, energy, p)?;
    Ok(stride_length(alpha, p) / t)
}

pub fn sweep_time_speed_vs_e0(betas: &[f64], energies: &[f64], p: &RobotParams) -> Result<SweepResult> {
    let mut out = SweepResult::new("time_speed_vs_e0", &["beta_deg", "e0", "t", "v_m"], p, None);
    let ec = critical_energy(p);
    for &beta in betas {
        for &e in energies {
            if e <= ec {
                out.meta.skipped.push(format!("beta={} e0={e}: not above the critical energy {ec} J", beta.to_degrees()));
                continue;
            }
            let alpha = alpha_of(beta);
            match stride_time(PI - alpha, alpha, e, p) {
                Ok(t) => out.rows.push(vec![
                    Cell::Num(beta.to_degrees()),
                    Cell::Num(e),
                    Cell::Num(t),
                    Cell::Num(stride_length(alpha, p) / t),
                ]),
                Err(err) => out.meta.skipped.push(format!("beta={} e0={e}: {err}", beta.to_degrees())),
            }
        }
    }
    finish(out)
}

fn finish(out: SweepResult) -> Result<SweepResult> {
    if out.rows.is_empty() {
        return Err(GaitError::InvalidParams(format!(
            "every grid point was rejected: {}",
            out.meta.skipped.join("; ")
        )));
    }
    Ok(out)
}

/// Speed-optimal opening angle at fixed energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalBeta {
    pub beta: f64,
    pub speed: f64,
    /// `false` when the best speed sits on the edge of the search interval.
    pub interior: bool,
}

pub const DEFAULT_BETA_TOL: f64 = 1e-5;
/// Search interval margin: `β ∈ [ε, π - ε]`.
pub const BETA_MARGIN: f64 = 1e-3;
const COARSE_SCAN: usize = 128;
const DENSE_SCAN: usize = 10_000;

/// Maximizes `v_m(β)` over `[ε, π - ε]`. A coarse scan brackets the peak;
/// a single interior peak is refined by golden section, several peaks fall
/// back to a dense grid, and a monotone profile returns the better endpoint.
pub fn optimal_beta(energy: f64, p: &RobotParams, tol: f64) -> Result<OptimalBeta> {
    let ec = critical_energy(p);
    if !(energy > ec) {
        return Err(GaitError::Infeasible { energy, critical: ec });
    }
    if !(tol > 0.0) {
        return Err(GaitError::InvalidParams(format!("tolerance {tol} must be positive")));
    }
    let speed = |b: f64| mean_speed(b, energy, p).unwrap_or(f64::NEG_INFINITY);
    let (lo, hi) = (BETA_MARGIN, PI - BETA_MARGIN);
    let grid = |n: usize| -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let b = if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 };
                (b, speed(b))
            })
            .collect()
    };
    let coarse = grid(COARSE_SCAN);
    let peaks: Vec<usize> = (1..COARSE_SCAN - 1)
        .filter(|&i| coarse[i].1 > coarse[i - 1].1 && coarse[i].1 >= coarse[i + 1].1)
        .collect();
    let refine = |pts: &[(f64, f64)], i: usize| {
        let (a, b) = (pts[i - 1].0, pts[i + 1].0);
        let (x, v) = golden_section_min(|x| -speed(x), a, b, tol);
        (x, -v)
    };
    let best_end = if coarse[0].1 >= coarse[COARSE_SCAN - 1].1 {
        coarse[0]
    } else {
        coarse[COARSE_SCAN - 1]
    };
    let candidate = match peaks.len() {
        0 => None,
        1 => Some(refine(&coarse, peaks[0])),
        _ => {
            let dense = grid(DENSE_SCAN);
            let i = (0..DENSE_SCAN)
                .max_by(|&a, &b| dense[a].1.total_cmp(&dense[b].1))
                .unwrap_or(0);
            if i == 0 || i == DENSE_SCAN - 1 {
                None
            } else {
                Some(refine(&dense, i))
            }
        }
    };
    Ok(match candidate {
        Some((beta, v)) if v >= best_end.1 => OptimalBeta { beta, speed: v, interior: true },
        _ => OptimalBeta {
            beta: best_end.0,
            speed: best_end.1,
            interior: false,
        },
    })
}

pub fn sweep_speed_vs_beta(energies: &[f64], betas: &[f64], p: &RobotParams) -> Result<SweepResult> {
    let mut out = SweepResult::new(
        "speed_vs_beta",
        &["e0", "beta_deg", "t", "v_m", "beta_opt_deg", "v_opt", "interior"],
        p,
        None,
    );
    for &e in energies {
        let opt = match optimal_beta(e, p, DEFAULT_BETA_TOL) {
            Ok(o) => o,
            Err(err) => {
                out.meta.skipped.push(format!("e0={e}: {err}"));
                continue;
            }
        };
        for &beta in betas {
            let alpha = alpha_of(beta);
            match stride_time(PI - alpha, alpha, e, p) {
                Ok(t) => out.rows.push(vec![
                    Cell::Num(e),
                    Cell::Num(beta.to_degrees()),
                    Cell::Num(t),
                    Cell::Num(stride_length(alpha, p) / t),
                    Cell::Num(opt.beta.to_degrees()),
                    Cell::Num(opt.speed),
                    Cell::Flag(opt.interior),
                ]),
                Err(err) => out.meta.skipped.push(format!("e0={e} beta={}: {err}", beta.to_degrees())),
            }
        }
    }
    finish(out)
}

#[allow(non_snake_case)]
pub fn sweep_Ep_vs_beta(energies: &[f64], betas: &[f64], p: &RobotParams) -> Result<SweepResult> {
    let mut out = SweepResult::new(
        "ep_vs_beta",
        &["e0", "beta_deg", "ep", "ep_forward", "ep_reversed", "branch"],
        p,
        None,
    );
    for &e in energies {
        for &beta in betas {
            match replenishment_forms(alpha_of(beta), e, p) {
                Ok(f) => out.rows.push(vec![
                    Cell::Num(e),
                    Cell::Num(beta.to_degrees()),
                    Cell::Num(f.selected()),
                    Cell::Num(f.forward),
                    Cell::Num(f.reversed),
                    Cell::Text(f.branch.as_str().to_string()),
                ]),
                Err(err) => out.meta.skipped.push(format!("e0={e} beta={}: {err}", beta.to_degrees())),
            }
        }
    }
    finish(out)
}

pub fn sweep_clearance(
    gamma_f: &[f64],
    gamma_k: &[f64],
    alpha_r: &[f64],
    gait: &GaitParams,
    p: &RobotParams,
) -> Result<SweepResult> {
    let mut out = SweepResult::new(
        "clearance",
        &["gamma_k", "alpha_r_deg", "gamma_f", "d_f", "t_min", "effective"],
        p,
        Some(*gait),
    );
    for &gk in gamma_k {
        for &ar in alpha_r {
            for &gf in gamma_f {
                let label = format!("gamma_k={gk} alpha_r={} gamma_f={gf}", ar.to_degrees());
                let g = match GaitParams::new(gait.alpha, gait.phi0, gait.energy, gf, gk, ar) {
                    Ok(g) => g,
                    Err(err) => {
                        out.meta.skipped.push(format!("{label}: {err}"));
                        continue;
                    }
                };
                match min_clearance(&g, p) {
                    Ok(r) => out.rows.push(vec![
                        Cell::Num(gk),
                        Cell::Num(ar.to_degrees()),
                        Cell::Num(gf),
                        Cell::Num(r.d_f),
                        Cell::Num(r.t_min),
                        Cell::Flag(r.effective()),
                    ]),
                    Err(err) => out.meta.skipped.push(format!("{label}: {err}")),
                }
            }
        }
    }
    finish(out)
}

/// Runs `spec`; `gait` supplies the fixed parameters of clearance sweeps.
pub fn run_sweep(spec: &SweepSpec, gait: &GaitParams, p: &RobotParams) -> Result<SweepResult> {
    let rad = |g: &Grid| -> Result<Vec<f64>> { Ok(g.values()?.into_iter().map(f64::to_radians).collect()) };
    match spec {
        SweepSpec::TimeSpeedVsE0 { betas_deg, e0 } => sweep_time_speed_vs_e0(&rad(betas_deg)?, &e0.values()?, p),
        SweepSpec::SpeedVsBeta { e0, betas_deg } => sweep_speed_vs_beta(&e0.values()?, &rad(betas_deg)?, p),
        SweepSpec::EpVsBeta { e0, betas_deg } => sweep_Ep_vs_beta(&e0.values()?, &rad(betas_deg)?, p),
        SweepSpec::Clearance {
            gamma_f,
            gamma_k,
            alpha_r_deg,
        } => sweep_clearance(&gamma_f.values()?, &gamma_k.values()?, &rad(alpha_r_deg)?, gait, p),
    }
}
