//! Walking surfaces, their admissibility, and the geometry of stride
//! transitions on uneven ground.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GaitError, Result};
use crate::geometry::Vec2;
use crate::kinematics::StrideContext;
use crate::numeric::{bisect, scan_maximize, scan_minimize};
use crate::pendulum::{GaitParams, RobotParams};

/// JSON description of a surface, tagged by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SurfaceDescriptor {
    Flat,
    /// `d (1 + sin(ω x)) / 2`.
    Sin { d: f64, omega: f64 },
    /// Either the tent `k(x+1)` for `x ≤ 2`, `-k(x-5)` beyond, or a polyline
    /// through `points` extended linearly past both ends.
    Pwl {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        k: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        points: Option<Vec<[f64; 2]>>,
    },
    /// Linear interpolation through `points`, held constant past both ends.
    Sampled { points: Vec<[f64; 2]> },
}

impl SurfaceDescriptor {
    pub fn tent(k: f64) -> Self {
        SurfaceDescriptor::Pwl { k: Some(k), points: None }
    }

    pub fn sin(d: f64, omega: f64) -> Self {
        SurfaceDescriptor::Sin { d, omega }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Flat,
    Sin { d: f64, omega: f64 },
    /// Polyline; `extrapolate` extends the end segments, otherwise the end
    /// values are held.
    Polyline { xs: Vec<f64>, ys: Vec<f64>, extrapolate: bool },
}

/// A ground profile `y = f(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Surface {
    descriptor: SurfaceDescriptor,
    shape: Shape,
}

fn polyline(points: &[[f64; 2]], extrapolate: bool) -> Result<Shape> {
    if points.len() < 2 {
        return Err(GaitError::InvalidParams("a polyline needs at least two points".into()));
    }
    if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
        return Err(GaitError::InvalidParams("polyline points must be finite".into()));
    }
    if points.windows(2).any(|w| w[1][0] <= w[0][0]) {
        return Err(GaitError::InvalidParams("breakpoints must be strictly increasing".into()));
    }
    Ok(Shape::Polyline {
        xs: points.iter().map(|p| p[0]).collect(),
        ys: points.iter().map(|p| p[1]).collect(),
        extrapolate,
    })
}

pub fn make_surface(descriptor: &SurfaceDescriptor) -> Result<Surface> {
    let shape = match descriptor {
        SurfaceDescriptor::Flat => Shape::Flat,
        SurfaceDescriptor::Sin { d, omega } => {
            if !(d.is_finite() && *d >= 0.0) {
                return Err(GaitError::InvalidParams(format!("d = {d} must be non-negative")));
            }
            if !(omega.is_finite() && *omega > 0.0) {
                return Err(GaitError::InvalidParams(format!("omega = {omega} must be positive")));
            }
            Shape::Sin { d: *d, omega: *omega }
        }
        SurfaceDescriptor::Pwl { k, points } => match (k, points) {
            (Some(k), None) => {
                if !k.is_finite() {
                    return Err(GaitError::InvalidParams(format!("k = {k} must be finite")));
                }
                polyline(&[[-1.0, 0.0], [2.0, 3.0 * k], [5.0, 0.0]], true)?
            }
            (None, Some(points)) => polyline(points, true)?,
            _ => {
                return Err(GaitError::InvalidParams(
                    "pwl surface needs exactly one of `k` or `points`".into(),
                ))
            }
        },
        SurfaceDescriptor::Sampled { points } => polyline(points, false)?,
    };
    Ok(Surface {
        descriptor: descriptor.clone(),
        shape,
    })
}

impl Surface {
    pub fn flat() -> Self {
        Surface {
            descriptor: SurfaceDescriptor::Flat,
            shape: Shape::Flat,
        }
    }

    pub fn descriptor(&self) -> &SurfaceDescriptor {
        &self.descriptor
    }

    pub fn is_flat(&self) -> bool {
        matches!(self.shape, Shape::Flat)
    }

    /// Segment index `i` with `xs[i] ≤ x < xs[i+1]`, clamped to the ends.
    fn segment(xs: &[f64], x: f64) -> usize {
        let i = xs.partition_point(|&b| b <= x);
        i.saturating_sub(1).min(xs.len() - 2)
    }

    pub fn height(&self, x: f64) -> f64 {
        match &self.shape {
            Shape::Flat => 0.0,
            Shape::Sin { d, omega } => 0.5 * d * (1.0 + (omega * x).sin()),
            Shape::Polyline { xs, ys, extrapolate } => {
                let n = xs.len();
                if !extrapolate {
                    if x <= xs[0] {
                        return ys[0];
                    }
                    if x >= xs[n - 1] {
                        return ys[n - 1];
                    }
                }
                let i = Self::segment(xs, x);
                let s = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
                // evaluate from the nearer end of the segment so breakpoints are exact
                if x - xs[i] <= xs[i + 1] - x {
                    ys[i] + s * (x - xs[i])
                } else {
                    ys[i + 1] + s * (x - xs[i + 1])
                }
            }
        }
    }

    /// Right-hand slope `f'(x⁺)`.
    pub fn slope(&self, x: f64) -> f64 {
        self.one_sided_slopes(x).1
    }

    /// `(f'(x⁻), f'(x⁺))`; equal away from breakpoints.
    pub fn one_sided_slopes(&self, x: f64) -> (f64, f64) {
        match &self.shape {
            Shape::Flat => (0.0, 0.0),
            Shape::Sin { d, omega } => {
                let s = 0.5 * d * omega * (omega * x).cos();
                (s, s)
            }
            Shape::Polyline { xs, ys, extrapolate } => {
                let n = xs.len();
                let seg = |i: usize| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
                let right = if !extrapolate && (x < xs[0] || x >= xs[n - 1]) {
                    0.0
                } else {
                    seg(Self::segment(xs, x))
                };
                let left = match xs.iter().position(|&b| b == x) {
                    Some(0) if *extrapolate => seg(0),
                    Some(0) => 0.0,
                    Some(i) => seg(i - 1),
                    None => right,
                };
                let left = if !extrapolate && x > xs[n - 1] { 0.0 } else { left };
                (left, right)
            }
        }
    }

    /// Kinks inside `[a, b]`.
    pub fn breakpoints(&self, a: f64, b: f64) -> Vec<f64> {
        match &self.shape {
            Shape::Polyline { xs, .. } => xs.iter().copied().filter(|&x| x >= a && x <= b).collect(),
            _ => Vec::new(),
        }
    }

    pub fn point(&self, x: f64) -> Vec2 {
        Vec2::new(x, self.height(x))
    }
}

/// Grid size for extremum scans over a surface domain.
const SURFACE_GRID: usize = 4096;

fn extremum(s: &Surface, domain: (f64, f64), max: bool) -> f64 {
    let (a, b) = domain;
    let mut best = if max {
        scan_maximize(|x| s.height(x), a, b, SURFACE_GRID, 4).1
    } else {
        scan_minimize(|x| s.height(x), a, b, SURFACE_GRID, 4).1
    };
    for x in s.breakpoints(a, b) {
        let h = s.height(x);
        best = if max { best.max(h) } else { best.min(h) };
    }
    best
}

/// `d_sr`: max minus min height over `domain`.
pub fn roughness(s: &Surface, domain: (f64, f64)) -> f64 {
    match s.shape {
        Shape::Flat => 0.0,
        _ => extremum(s, domain, true) - extremum(s, domain, false),
    }
}

/// Largest `|f'|` over `domain`, one-sided at breakpoints.
pub fn max_abs_slope(s: &Surface, domain: (f64, f64)) -> f64 {
    let (a, b) = domain;
    match &s.shape {
        Shape::Flat => 0.0,
        Shape::Sin { .. } => scan_maximize(|x| s.slope(x).abs(), a, b, SURFACE_GRID, 4).1,
        Shape::Polyline { .. } => {
            let mut xs = s.breakpoints(a, b);
            xs.push(a);
            xs.push(b);
            xs.iter()
                .map(|&x| {
                    let (l, r) = s.one_sided_slopes(x);
                    l.abs().max(r.abs())
                })
                .fold(0.0, f64::max)
        }
    }
}

/// Outcome of checking a surface against a gait.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDiagnosis {
    pub roughness: f64,
    pub d_f: f64,
    /// `d_f - d_sr`; positive when the foot clears the bumps.
    pub roughness_margin: f64,
    pub max_slope: f64,
    pub tan_alpha: f64,
    /// `tan α / max |f'|`; infinite on flat ground, above 1 when admissible.
    pub slope_margin: f64,
    pub roughness_ok: bool,
    pub slope_ok: bool,
}

impl SurfaceDiagnosis {
    pub fn passed(&self) -> bool {
        self.roughness_ok && self.slope_ok
    }
}

pub fn validate_surface(s: &Surface, gait: &GaitParams, d_f: f64, domain: (f64, f64)) -> SurfaceDiagnosis {
    let d_sr = roughness(s, domain);
    let max_slope = max_abs_slope(s, domain);
    let tan_alpha = gait.alpha.tan();
    let slope_margin = if max_slope == 0.0 { f64::INFINITY } else { tan_alpha / max_slope };
    SurfaceDiagnosis {
        roughness: d_sr,
        d_f,
        roughness_margin: d_f - d_sr,
        max_slope,
        tan_alpha,
        slope_margin,
        roughness_ok: d_sr < d_f,
        slope_ok: max_slope < tan_alpha,
    }
}

/// `ℓ_b = 2ℓ sin(β/2)`, the distance between the feet in double support.
pub fn base_distance(beta: f64, p: &RobotParams) -> f64 {
    2.0 * p.leg_length * (0.5 * beta).sin()
}

/// Both legs on the ground at the start of a stride.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StanceGeometry {
    pub standing_foot: Vec2,
    pub trailing_foot: Vec2,
    /// Standing-leg angle at the stride start.
    pub phi02: f64,
    /// Trailing-leg direction from the hip.
    pub phi12: f64,
    /// Shank direction of the trailing leg; equal to `phi12` unless the
    /// stride starts from a bent flat-ground bootstrap.
    pub trailing_shank_dir: f64,
    pub ell_b: f64,
}

impl StanceGeometry {
    pub fn hip(&self, p: &RobotParams) -> Vec2 {
        self.standing_foot + p.leg_length * Vec2::from_angle(self.phi02)
    }
}

const STANCE_SCAN: usize = 512;

/// Stance with the standing foot at `(x0, f(x0))` and both feet on the
/// surface. Among the roots of the contact condition, the one nearest the
/// flat-ground configuration is taken.
pub fn initial_stance(x0: f64, s: &Surface, gait: &GaitParams, p: &RobotParams) -> Result<StanceGeometry> {
    gait.validate()?;
    p.validate()?;
    let beta = gait.beta();
    let ell_b = base_distance(beta, p);
    let y0 = s.height(x0);
    let residual = |psi: f64| y0 + ell_b * psi.sin() - s.height(x0 + ell_b * psi.cos());

    let eps = 1e-9;
    let (lo, hi) = (FRAC_PI_2 + eps, 1.5 * PI - eps);
    let h = (hi - lo) / STANCE_SCAN as f64;
    let mut best: Option<f64> = None;
    let mut prev = (lo, residual(lo));
    for i in 1..=STANCE_SCAN {
        let x = if i == STANCE_SCAN { hi } else { lo + h * i as f64 };
        let cur = (x, residual(x));
        let root = if prev.1 == 0.0 {
            Some(prev.0)
        } else if prev.1.signum() != cur.1.signum() {
            Some(bisect(residual, prev.0, cur.0, 1e-15)?)
        } else {
            None
        };
        if let Some(r) = root {
            if best.is_none_or(|b| (r - PI).abs() < (b - PI).abs()) {
                best = Some(r);
            }
        }
        prev = cur;
    }
    let psi = best.ok_or(GaitError::NoStance { x0 })?;
    let mut phi02 = psi - gait.alpha;
    if phi02 > PI && phi02 - PI < 1e-12 {
        phi02 = PI;
    }
    if !(phi02 > FRAC_PI_2 && phi02 <= PI) {
        return Err(GaitError::NoStance { x0 });
    }
    let phi12 = PI + phi02 - beta;
    let standing_foot = Vec2::new(x0, y0);
    Ok(StanceGeometry {
        standing_foot,
        trailing_foot: standing_foot + ell_b * Vec2::from_angle(psi),
        phi02,
        phi12,
        trailing_shank_dir: phi12,
        ell_b,
    })
}

/// Flat-ground stance for the first stride, honouring a `φ₀` that may differ
/// from `π - α`. The trailing foot is wherever the bent leg puts it.
pub fn bootstrap_stance(x0: f64, gait: &GaitParams, p: &RobotParams) -> Result<StanceGeometry> {
    gait.validate()?;
    p.validate()?;
    let standing_foot = Vec2::new(x0, 0.0);
    let hip = standing_foot + p.leg_length * Vec2::from_angle(gait.phi0);
    let phi12 = PI + gait.alpha;
    let shank = 2.0 * PI - gait.phi0;
    let trailing_foot = hip + p.thigh * Vec2::from_angle(phi12) + p.shank * Vec2::from_angle(shank);
    Ok(StanceGeometry {
        standing_foot,
        trailing_foot,
        phi02: gait.phi0,
        phi12,
        trailing_shank_dir: shank,
        ell_b: standing_foot.distance(trailing_foot),
    })
}

/// Foot strike of the stretched trailing leg.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrikeEvent {
    /// Local stride time of the strike.
    pub t: f64,
    /// Strike point, on the surface.
    pub point: Vec2,
    /// `y_f3 - f(x_f3)` at `t` before snapping to the surface.
    pub residual: f64,
    /// Local surface slope `f'(x⁺)` at the strike.
    pub slope: f64,
}

/// Scan resolution per nominal stride time.
pub const STRIKE_STEPS: usize = 256;

/// First time after `γ_k T` at which the stretched trailing foot meets the
/// surface. The search stops at `2T` or when the hip would reach the ground.
pub fn foot_strike_time(ctx: &StrideContext, s: &Surface) -> Result<StrikeEvent> {
    let period = ctx.period();
    let start = ctx.knee_switch_time();
    let horizon = (2.0 * period).min(ctx.horizon());
    let failure = std::cell::RefCell::new(None);
    let gap = |t: f64| match ctx.foot_phase3(t) {
        Ok(f) => f.y - s.height(f.x),
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let g0 = gap(start);
    if g0 <= 0.0 {
        return Err(GaitError::ClearanceViolation { clearance: g0, t: start });
    }
    let h = period / STRIKE_STEPS as f64;
    let mut lo = start;
    let mut bracket = None;
    loop {
        let hi = (lo + h).min(horizon);
        let g = gap(hi);
        if g.is_nan() {
            break;
        }
        if g <= 0.0 {
            bracket = Some((lo, hi));
            break;
        }
        if hi >= horizon {
            break;
        }
        lo = hi;
    }
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let (a, b) = bracket.ok_or(GaitError::NoStrike { horizon })?;
    let t = bisect(gap, a, b, 1e-14)?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let raw = ctx.foot_phase3(t)?;
    Ok(StrikeEvent {
        t,
        point: s.point(raw.x),
        residual: raw.y - s.height(raw.x),
        slope: s.slope(raw.x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pendulum::stride_time;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn demo_gait() -> GaitParams {
        GaitParams::new(deg(70.0), deg(110.0), 800.0, 0.6, 0.7, deg(-80.0)).unwrap()
    }

    #[test]
    fn surface_examples() {
        let s = make_surface(&SurfaceDescriptor::sin(0.06, 4.0)).unwrap();
        assert!((s.height(0.0) - 0.03).abs() < 1e-15);
        let flat = make_surface(&SurfaceDescriptor::Flat).unwrap();
        assert_eq!((flat.height(3.0), flat.slope(3.0)), (0.0, 0.0));
        let tent = make_surface(&SurfaceDescriptor::tent(0.12)).unwrap();
        assert!((tent.height(2.0) - 0.36).abs() < 1e-15);
        assert!((tent.height(0.0) - 0.12).abs() < 1e-15);
        assert!((tent.height(4.0) - 0.12).abs() < 1e-15);
        assert_eq!(tent.one_sided_slopes(2.0), (0.12, -0.12));
        assert_eq!(tent.slope(-3.0), 0.12);
        assert!(tent.height(-2.0) < 0.0);
    }

    #[test]
    fn malformed_descriptors_are_rejected() {
        assert!(make_surface(&SurfaceDescriptor::sin(-0.1, 4.0)).is_err());
        assert!(make_surface(&SurfaceDescriptor::sin(0.1, 0.0)).is_err());
        let bad = SurfaceDescriptor::Sampled { points: vec![[0.0, 0.0], [0.0, 1.0]] };
        assert!(make_surface(&bad).is_err());
        let both = SurfaceDescriptor::Pwl { k: Some(0.1), points: Some(vec![[0.0, 0.0], [1.0, 0.0]]) };
        assert!(make_surface(&both).is_err());
        assert!(SurfaceDescriptor::from_json(r#"{"type":"hill"}"#).is_err());
    }

    #[test]
    fn descriptor_json_round_trip() {
        for text in [
            r#"{"type":"flat"}"#,
            r#"{"type":"sin","d":0.06,"omega":4.0}"#,
            r#"{"type":"pwl","k":0.12}"#,
            r#"{"type":"pwl","points":[[0.0,0.0],[1.0,0.1]]}"#,
            r#"{"type":"sampled","points":[[0.0,0.0],[1.0,0.1],[2.0,0.0]]}"#,
        ] {
            let d = SurfaceDescriptor::from_json(text).unwrap();
            assert_eq!(serde_json::to_string(&d).unwrap(), text);
            make_surface(&d).unwrap();
        }
    }

    #[test]
    fn sampled_surface_holds_end_values() {
        let s = make_surface(&SurfaceDescriptor::Sampled { points: vec![[0.0, 0.1], [1.0, 0.3]] }).unwrap();
        assert_eq!(s.height(-5.0), 0.1);
        assert_eq!(s.height(5.0), 0.3);
        assert!((s.height(0.5) - 0.2).abs() < 1e-15);
        assert_eq!(s.slope(5.0), 0.0);
        assert!((s.slope(0.5) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn roughness_examples() {
        let s = make_surface(&SurfaceDescriptor::sin(0.06, 4.0)).unwrap();
        let period = 2.0 * PI / 4.0;
        assert!((roughness(&s, (0.0, period)) - 0.06).abs() < 1e-12);
        assert_eq!(roughness(&Surface::flat(), (0.0, 10.0)), 0.0);
        let tent = make_surface(&SurfaceDescriptor::tent(0.12)).unwrap();
        assert!((roughness(&tent, (-1.0, 5.0)) - 0.36).abs() < 1e-15);
        assert!((max_abs_slope(&s, (0.0, period)) - 0.12).abs() < 1e-12);
        assert!((max_abs_slope(&tent, (-1.0, 5.0)) - 0.12).abs() < 1e-15);
    }

    #[test]
    fn validation_examples() {
        let g = demo_gait();
        let s = make_surface(&SurfaceDescriptor::sin(0.06, 4.0)).unwrap();
        let d = validate_surface(&s, &g, 0.085, (0.0, 5.0));
        assert!(d.passed());
        assert!((d.tan_alpha - 2.7474774194546216).abs() < 1e-12);
        let d = validate_surface(&Surface::flat(), &g, 0.085, (0.0, 5.0));
        assert!(d.passed() && d.slope_margin.is_infinite());
        let s = make_surface(&SurfaceDescriptor::sin(0.2, 4.0)).unwrap();
        let d = validate_surface(&s, &g, 0.085, (0.0, 5.0));
        assert!(!d.roughness_ok && d.slope_ok && !d.passed());
    }

    #[test]
    fn base_distance_examples() {
        let p = RobotParams::default();
        assert!((base_distance(deg(60.0), &p) - 1.0).abs() < 1e-15);
        assert!((base_distance(deg(40.0), &p) - 2.0 * deg(70.0).cos()).abs() < 1e-15);
        assert_eq!(base_distance(0.0, &p), 0.0);
        let b = deg(40.0);
        assert!((base_distance(b, &p) - (2.0 - 2.0 * b.cos()).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn flat_stance_reduces_to_the_flat_model() {
        let g = demo_gait();
        let p = RobotParams::default();
        let st = initial_stance(1.5, &Surface::flat(), &g, &p).unwrap();
        assert!((st.phi02 - (PI - g.alpha)).abs() < 1e-12);
        assert!((st.trailing_foot.x - (1.5 - st.ell_b)).abs() < 1e-12);
        assert!(st.trailing_foot.y.abs() < 1e-12);
        assert!((st.phi12 - (PI + g.alpha)).abs() < 1e-12);
    }

    #[test]
    fn sine_stance_residual() {
        let g = demo_gait();
        let p = RobotParams::default();
        let s = make_surface(&SurfaceDescriptor::sin(0.06, 4.0)).unwrap();
        let st = initial_stance(0.0, &s, &g, &p).unwrap();
        assert!(st.phi02 > FRAC_PI_2 && st.phi02 < PI);
        let psi = st.phi02 + g.alpha;
        let r = st.standing_foot.y + st.ell_b * psi.sin() - s.height(st.ell_b * psi.cos());
        assert!(r.abs() <= 1e-10, "{r}");
        assert!((st.standing_foot.distance(st.trailing_foot) - st.ell_b).abs() < 1e-12);
        assert!((st.trailing_foot.y - s.height(st.trailing_foot.x)).abs() < 1e-8);
        assert!(st.trailing_foot.x < 0.0);
    }

    #[test]
    fn symmetric_bump_gives_level_feet() {
        let g = demo_gait();
        let p = RobotParams::default();
        let half = base_distance(g.beta(), &p) / 2.0;
        // bump centred between the feet
        let s = make_surface(&SurfaceDescriptor::Sampled {
            points: vec![[-3.0, 0.0], [-half, 0.0], [0.0, 0.05], [half, 0.0], [3.0, 0.0]],
        })
        .unwrap();
        let st = initial_stance(half, &s, &g, &p).unwrap();
        assert!((st.phi02 + g.alpha - PI).abs() < 1e-12);
        assert!((st.trailing_foot.y - st.standing_foot.y).abs() < 1e-12);
    }

    #[test]
    fn steep_wall_has_no_stance() {
        let g = demo_gait();
        let p = RobotParams::default();
        let wall = make_surface(&SurfaceDescriptor::Pwl { k: None, points: Some(vec![[-1.0, 10.0], [0.0, 0.0]]) }).unwrap();
        assert!(matches!(initial_stance(0.0, &wall, &g, &p), Err(GaitError::NoStance { .. })));
    }

    #[test]
    fn flat_strike_matches_the_stride_time() {
        let g = GaitParams::symmetric(deg(70.0), 800.0, 0.6, 0.7, deg(-80.0)).unwrap();
        let p = RobotParams::default();
        let st = initial_stance(0.0, &Surface::flat(), &g, &p).unwrap();
        let ctx = StrideContext::from_stance(&st, &g, &p).unwrap();
        let ev = foot_strike_time(&ctx, &Surface::flat()).unwrap();
        let t = stride_time(g.phi0, g.alpha, g.energy, &p).unwrap();
        assert!((ev.t - t).abs() < 1e-6);
        assert!((ev.t - 0.84).abs() < 5e-3);
        assert!((ev.point.x - 2.0 * deg(70.0).cos()).abs() < 1e-6);
        assert_eq!(ev.point.y, 0.0);
    }

    #[test]
    fn tent_slopes_shift_the_strike() {
        let g = GaitParams::symmetric(deg(70.0), 800.0, 0.6, 0.7, deg(-80.0)).unwrap();
        let p = RobotParams::default();
        let tent = make_surface(&SurfaceDescriptor::tent(0.12)).unwrap();
        for (x0, uphill) in [(0.0, true), (3.0, false)] {
            let st = initial_stance(x0, &tent, &g, &p).unwrap();
            let ctx = StrideContext::from_stance(&st, &g, &p).unwrap();
            let ev = foot_strike_time(&ctx, &tent).unwrap();
            let foot = ctx.foot_phase3(ev.t).unwrap();
            assert!((foot.y - tent.height(foot.x)).abs() <= 1e-10);
            // the stride's own nominal time, from its stance angle
            let nominal = stride_time(st.phi02, g.alpha, g.energy, &p).unwrap();
            assert_eq!(ctx.period(), nominal);
            if uphill {
                assert!(ev.t < nominal, "{} vs {nominal}", ev.t);
            } else {
                assert!(ev.t > nominal, "{} vs {nominal}", ev.t);
            }
        }
    }
}
