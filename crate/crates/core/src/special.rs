//! Incomplete elliptic integral of the first kind and the adaptive quadrature
//! used to check it.
//!
//! The elliptic integral uses the *parameter* convention
//!
//! ```text
//!            x
//!           ⌠            dθ
//! F(x, m) = │  ─────────────────────
//!           ⌡  sqrt(1 - m sin²θ)
//!           0
//! ```
//!
//! which is the form produced by substituting `φ = π/2 - 2θ` into the
//! stride-time integral of the inverted pendulum. The stride formulas only
//! ever call it with `m ≤ 0`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{GaitError, Result};

/// Arguments of `F(x, m)`: amplitude in radians and the (possibly negative)
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArgs {
    pub x: f64,
    pub m: f64,
}

impl EllipticArgs {
    pub fn new(x: f64, m: f64) -> Self {
        Self { x, m }
    }

    pub fn eval(self) -> Result<f64> {
        ellip_f(self.x, self.m)
    }
}

/// Carlson's symmetric integral `R_F(x, y, z)` by the duplication theorem.
///
/// At most one of the arguments may be zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    const ERRTOL: f64 = 0.0015;
    const C1: f64 = 1.0 / 24.0;
    const C2: f64 = 0.1;
    const C3: f64 = 3.0 / 44.0;
    const C4: f64 = 1.0 / 14.0;

    if !(x >= 0.0 && y >= 0.0 && z >= 0.0) {
        return Err(GaitError::Domain(format!(
            "R_F needs non-negative arguments, got ({x}, {y}, {z})"
        )));
    }
    if x + y == 0.0 || y + z == 0.0 || z + x == 0.0 {
        return Err(GaitError::Domain(
            "R_F diverges when two arguments vanish".into(),
        ));
    }

    let (mut xt, mut yt, mut zt) = (x, y, z);
    for _ in 0..100 {
        let (sx, sy, sz) = (xt.sqrt(), yt.sqrt(), zt.sqrt());
        let lambda = sx * (sy + sz) + sy * sz;
        xt = 0.25 * (xt + lambda);
        yt = 0.25 * (yt + lambda);
        zt = 0.25 * (zt + lambda);
        let ave = (xt + yt + zt) / 3.0;
        let dx = (ave - xt) / ave;
        let dy = (ave - yt) / ave;
        let dz = (ave - zt) / ave;
        if dx.abs().max(dy.abs()).max(dz.abs()) < ERRTOL {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (C1 * e2 - C2 - C3 * e3) * e2 + C4 * e3) / ave.sqrt());
        }
    }
    Err(GaitError::NoConvergence("R_F duplication".into()))
}

/// Incomplete elliptic integral of the first kind `F(x, m)`.
///
/// Requires `|x| ≤ π/2` and `1 - m sin²x > 0`. Odd in `x`.
pub fn ellip_f(x: f64, m: f64) -> Result<f64> {
    if !x.is_finite() || !m.is_finite() {
        return Err(GaitError::Domain(format!("F({x}, {m}): non-finite argument")));
    }
    if x.abs() > FRAC_PI_2 * (1.0 + 4.0 * f64::EPSILON) {
        return Err(GaitError::Domain(format!("F({x}, {m}): amplitude beyond π/2")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if m == 0.0 {
        return Ok(x);
    }
    let (s, c) = x.sin_cos();
    let delta = 1.0 - m * s * s;
    if delta <= 0.0 {
        return Err(GaitError::Domain(format!(
            "F({x}, {m}): 1 - m sin²x = {delta} is not positive"
        )));
    }
    Ok(s * carlson_rf(c * c, delta, 1.0)?)
}

// 15-point Kronrod abscissae; the odd entries (and 0) carry the 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 48;

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, (kronrod - gauss).abs() * half)
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> Result<f64> {
    let (value, err) = gauss_kronrod(f, a, b);
    if !value.is_finite() {
        return Err(GaitError::Domain(format!(
            "integrand not finite on [{a}, {b}]"
        )));
    }
    if err <= tol || (b - a).abs() <= 64.0 * f64::EPSILON * a.abs().max(b.abs()) {
        return Ok(value);
    }
    if depth >= MAX_DEPTH {
        return Err(GaitError::NoConvergence(format!(
            "adaptive quadrature on [{a}, {b}] did not reach {tol}"
        )));
    }
    let mid = 0.5 * (a + b);
    Ok(adapt(f, a, mid, 0.5 * tol, depth + 1)? + adapt(f, mid, b, 0.5 * tol, depth + 1)?)
}

/// Adaptive Gauss–Kronrod (7/15) quadrature of `f` over `[a, b]` to absolute
/// tolerance `tol`.
pub fn quad_oracle<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(GaitError::Domain(format!("quadrature tolerance {tol} must be positive")));
    }
    if !(a <= b) {
        return Err(GaitError::Domain(format!("quadrature needs a ≤ b, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    adapt(&f, a, b, tol, 0)
}
