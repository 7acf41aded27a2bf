use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use biped_gait::config::RunConfig;
use biped_gait::engine::{reverse_trace, walk, StrideOptions, WalkTrace};
use biped_gait::kinematics::min_clearance;
use biped_gait::pendulum::{critical_energy, stride_length, stride_time, GaitParams, RobotParams};
use biped_gait::sweeps::{optimal_beta, run_sweep, SweepSpec};
use biped_gait::terrain::{base_distance, make_surface, validate_surface, Surface, SurfaceDescriptor, SurfaceDiagnosis};
use biped_gait::GaitError;

/// Inverted-pendulum biped: simulate walks, sweep parameters, check terrain.
///
/// Exit codes: 0 success, 1 I/O failure, 2 infeasible or invalid
/// parameters, 3 surface or clearance validation failure.
#[derive(Parser)]
#[command(name = "biped-gait", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// JSON run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory; defaults to ./out/<run name>.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Poses recorded per stride.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Treat clearance and roughness violations as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Surface descriptor, inline JSON or a path to a JSON file.
    #[arg(long, global = true)]
    surface: Option<String>,
    /// Number of strides.
    #[arg(long, global = true)]
    strides: Option<usize>,
    /// Allow writing into a non-empty output directory.
    #[arg(long, global = true)]
    overwrite: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the configured walk and write its trace.
    Simulate {
        #[command(flatten)]
        common: Common,
    },
    /// Like simulate, defaulting to six strides, with an optional reversed trace.
    Walk {
        #[command(flatten)]
        common: Common,
        /// Also write the time-reversed trace.
        #[arg(long)]
        reverse: bool,
    },
    /// Run a parameter sweep and write CSV plus a JSON sidecar.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Sweep specification (JSON file); overrides the config's `sweep`.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Find the speed-optimal opening angle for one or more energies.
    Optimize {
        #[command(flatten)]
        common: Common,
        /// Pendular energies in J; defaults to the config's list or its gait energy.
        #[arg(long, value_delimiter = ',')]
        energy: Vec<f64>,
    },
    /// Check roughness, slope and energy feasibility without walking.
    Validate {
        #[command(flatten)]
        common: Common,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(e: &GaitError) -> u8 {
    match e.root() {
        GaitError::Io(_) | GaitError::Csv(_) => 1,
        GaitError::NoStance { .. } | GaitError::NoStrike { .. } | GaitError::ClearanceViolation { .. } => 3,
        _ => 2,
    }
}

impl From<GaitError> for Failure {
    fn from(e: GaitError) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(1, e.to_string())
    }
}

struct Run {
    cfg: RunConfig,
    robot: RobotParams,
    gait: GaitParams,
    surface: Surface,
    common: Common,
}

fn load(common: &Common, default_strides: Option<usize>) -> Result<Run, Failure> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(s) = &common.surface {
        let text = if s.trim_start().starts_with('{') {
            s.clone()
        } else {
            fs::read_to_string(s).map_err(|e| Failure::new(1, format!("cannot read {s}: {e}")))?
        };
        cfg.surface = SurfaceDescriptor::from_json(&text).map_err(|e| Failure::new(2, format!("surface: {e}")))?;
    }
    if let Some(n) = common.strides {
        cfg.strides = n;
    } else if common.config.is_none() {
        if let Some(n) = default_strides {
            cfg.strides = n;
        }
    }
    if let Some(n) = common.samples {
        cfg.samples = n;
    }
    cfg.strict |= common.strict;
    cfg.check()?;
    Ok(Run {
        robot: cfg.robot.params()?,
        gait: cfg.gait.params()?,
        surface: make_surface(&cfg.surface)?,
        cfg,
        common: common.clone(),
    })
}

impl Run {
    fn out_dir(&self) -> Result<PathBuf, Failure> {
        let dir = self
            .common
            .out
            .clone()
            .or_else(|| self.cfg.out.clone())
            .unwrap_or_else(|| Path::new("out").join(&self.cfg.name));
        if dir.exists() && !self.common.overwrite && fs::read_dir(&dir)?.next().is_some() {
            return Err(Failure::new(
                1,
                format!("{} is not empty; pass --overwrite to replace its contents", dir.display()),
            ));
        }
        fs::create_dir_all(&dir)?;
        Ok(dir)
    }

    /// Stretch of ground the walk is expected to cover.
    fn domain(&self) -> (f64, f64) {
        let lb = base_distance(self.gait.beta(), &self.robot);
        let x0 = self.cfg.start_x;
        (x0 - lb, x0 + (self.cfg.strides as f64 + 1.0) * lb)
    }

    fn diagnose(&self) -> Result<SurfaceDiagnosis, Failure> {
        let clearance = min_clearance(&self.gait, &self.robot)?;
        Ok(validate_surface(&self.surface, &self.gait, clearance.d_f, self.domain()))
    }

    fn check_energy(&self) -> Result<(), Failure> {
        let ec = critical_energy(&self.robot);
        if self.gait.energy <= ec {
            return Err(GaitError::Infeasible {
                energy: self.gait.energy,
                critical: ec,
            }
            .into());
        }
        Ok(())
    }
}

fn print_diagnosis(d: &SurfaceDiagnosis) {
    println!(
        "roughness d_sr = {:.6} m, clearance d_f = {:.6} m: {}",
        d.roughness,
        d.d_f,
        if d.roughness_ok { "ok" } else { "FAIL" }
    );
    println!(
        "max |f'| = {:.6}, tan(alpha) = {:.6}, slope margin = {}: {}",
        d.max_slope,
        d.tan_alpha,
        if d.slope_margin.is_infinite() { "inf".to_string() } else { format!("{:.4}", d.slope_margin) },
        if d.slope_ok { "ok" } else { "FAIL" }
    );
}

fn write_trace(dir: &Path, stem: &str, trace: &WalkTrace) -> Result<(), Failure> {
    let csv = fs::File::create(dir.join(format!("{stem}.csv")))?;
    trace.write_csv(BufWriter::new(csv))?;
    fs::write(dir.join(format!("{stem}.json")), trace.to_json()?)?;
    Ok(())
}

fn cmd_simulate(common: &Common, default_strides: usize, reverse: bool) -> Result<(), Failure> {
    let run = load(common, Some(default_strides))?;
    run.check_energy()?;
    let diag = run.diagnose()?;
    if !diag.slope_ok {
        print_diagnosis(&diag);
        return Err(Failure::new(3, "surface slope exceeds tan(alpha)"));
    }
    if !diag.roughness_ok {
        if run.cfg.strict {
            print_diagnosis(&diag);
            return Err(Failure::new(3, "surface roughness exceeds the trailing-foot clearance"));
        }
        eprintln!(
            "warning: roughness {:.4} m exceeds the flat-ground clearance {:.4} m",
            diag.roughness, diag.d_f
        );
    }
    let opts = StrideOptions {
        samples: run.cfg.samples,
        strict: run.cfg.strict,
    };
    let trace = walk(run.cfg.start_x, run.cfg.strides, &run.gait, &run.robot, &run.surface, &opts)?;
    let dir = run.out_dir()?;
    write_trace(&dir, "trace", &trace)?;
    if reverse {
        write_trace(&dir, "trace_reversed", &reverse_trace(&trace))?;
    }
    let summary = trace.summary();
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary).map_err(GaitError::from)?)?;

    for s in &trace.strides {
        println!(
            "stride {}: T = {:.4} s (nominal {:.4} s), length {:.4} m, strike ({:.4}, {:.4}), Ep = {:.3} J, d_f = {:.4} m",
            s.index,
            s.actual_t,
            s.nominal_t,
            s.strike.x - s.support.x,
            s.strike.x,
            s.strike.y,
            s.ep,
            s.clearance.d_f
        );
    }
    println!(
        "{} strides, {:.4} m in {:.4} s, mean speed {:.4} m/s, total cost {:.3} J",
        summary.strides, summary.displacement, summary.duration, summary.mean_speed, summary.total_cost
    );
    print_diagnosis(&diag);
    println!("wrote {}", dir.display());
    Ok(())
}

fn cmd_sweep(common: &Common, spec_path: Option<&Path>) -> Result<(), Failure> {
    let run = load(common, None)?;
    let spec: SweepSpec = match spec_path {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Failure::new(1, format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::new(2, format!("{}: {e}", p.display())))?
        }
        None => run
            .cfg
            .sweep
            .clone()
            .ok_or_else(|| Failure::new(2, "no sweep specification: pass --spec or set `sweep` in the config"))?,
    };
    let result = run_sweep(&spec, &run.gait, &run.robot)?;
    let dir = run.out_dir()?;
    let name = spec.name();
    result.write_csv(BufWriter::new(fs::File::create(dir.join(format!("{name}.csv")))?))?;
    fs::write(dir.join(format!("{name}.json")), result.meta_json()?)?;
    for s in &result.meta.skipped {
        eprintln!("skipped {s}");
    }
    println!("{name}: {} rows, {} skipped, wrote {}", result.rows.len(), result.meta.skipped.len(), dir.display());
    Ok(())
}

fn cmd_optimize(common: &Common, energies: &[f64]) -> Result<(), Failure> {
    let run = load(common, None)?;
    let energies: Vec<f64> = if !energies.is_empty() {
        energies.to_vec()
    } else if !run.cfg.optimize.energies.is_empty() {
        run.cfg.optimize.energies.clone()
    } else {
        vec![run.gait.energy]
    };
    let mut results = Vec::new();
    for e in energies {
        let o = optimal_beta(e, &run.robot, run.cfg.optimize.tol)?;
        println!(
            "E0 = {e} J: beta* = {:.4} deg, v* = {:.6} m/s{}",
            o.beta.to_degrees(),
            o.speed,
            if o.interior { "" } else { " (boundary, no interior maximum)" }
        );
        results.push(serde_json::json!({
            "e0": e,
            "beta_deg": o.beta.to_degrees(),
            "speed": o.speed,
            "interior": o.interior,
        }));
    }
    let dir = run.out_dir()?;
    fs::write(
        dir.join("optimize.json"),
        serde_json::to_string_pretty(&results).map_err(GaitError::from)?,
    )?;
    Ok(())
}

fn cmd_validate(common: &Common) -> Result<(), Failure> {
    let run = load(common, None)?;
    let diag = run.diagnose();
    let ec = critical_energy(&run.robot);
    let feasible = run.gait.energy > ec;
    match &diag {
        Ok(d) => print_diagnosis(d),
        Err(f) => println!("clearance could not be computed: {}", f.message),
    }
    println!(
        "E0 = {} J, critical {} J: {}",
        run.gait.energy,
        ec,
        if feasible { "feasible" } else { "FAIL" }
    );
    if feasible {
        let t = stride_time(run.gait.phi0, run.gait.alpha, run.gait.energy, &run.robot)?;
        println!(
            "stride time {:.4} s, stride length {:.4} m",
            t,
            stride_length(run.gait.alpha, &run.robot)
        );
    }
    match diag {
        Ok(d) if d.passed() && feasible => Ok(()),
        Ok(_) => Err(Failure::new(3, "validation failed")),
        Err(f) if !feasible => Err(Failure::new(3, format!("validation failed: {}", f.message))),
        Err(f) => Err(f),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { common } => cmd_simulate(common, 1, false),
        Command::Walk { common, reverse } => cmd_simulate(common, 6, *reverse),
        Command::Sweep { common, spec } => cmd_sweep(common, spec.as_deref()),
        Command::Optimize { common, energy } => cmd_optimize(common, energy),
        Command::Validate { common } => cmd_validate(common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
