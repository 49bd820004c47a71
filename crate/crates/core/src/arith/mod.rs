//! Divisor-sum constants d1..d5 for a row, and a brute-force sieve oracle
//! for the Barban-Vehov weight lemmas.

pub mod oracle;
pub mod sieve;

use crate::foundations::{round_up, LogGrid};
use crate::pipeline::RangeSpec;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Free exponents: `U = T^u`, `V = T^v`, `W = T^w`, `X = T^x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamVector {
    pub u: f64,
    pub v: f64,
    pub w: f64,
    pub x: f64,
}

impl ParamVector {
    pub fn new(u: f64, v: f64, w: f64, x: f64) -> Result<Self> {
        let p = Self { u, v, w, x };
        p.validate()?;
        Ok(p)
    }

    /// Checks `0 < w < u < v` and `u + v < x`.
    pub fn validate(&self) -> Result<()> {
        let Self { u, v, w, x } = *self;
        if ![u, v, w, x].iter().all(|c| c.is_finite()) {
            return Err(Error::Domain(format!("non-finite parameters {self:?}")));
        }
        if !(0.0 < w && w < u && u < v) {
            return Err(Error::Domain(format!("parameters must satisfy 0 < w < u < v, got u={u}, v={v}, w={w}")));
        }
        if !(u + v < x) {
            return Err(Error::Domain(format!("parameters must satisfy u + v < x, got u+v={}, x={x}", u + v)));
        }
        Ok(())
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.u, self.v, self.w, self.x]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self { u: a[0], v: a[1], w: a[2], x: a[3] }
    }
}

/// How d3 is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum D3Mode {
    /// Smallest constant implied by the closed-form bound for the sum of Psi^2.
    #[default]
    Literal,
    /// The tabulated value for the row, where one exists.
    Table,
}

impl fmt::Display for D3Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            D3Mode::Literal => "literal",
            D3Mode::Table => "table",
        })
    }
}

impl FromStr for D3Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "literal" => Ok(D3Mode::Literal),
            "table" => Ok(D3Mode::Table),
            other => Err(Error::Parse(format!("d3 mode must be 'literal' or 'table', got '{other}'"))),
        }
    }
}

/// Rounded-up value of `gamma + sum_p log p / (p (p - 1))` used in formulas.
pub const C0_ROUNDED: f64 = 1.333;
/// The constant itself, for reference.
pub const C0: f64 = 1.332_582_275_733;
/// Prefactor in the Graham bound for sums of Lambda_1 Lambda_2.
pub const GRAHAM_FACTOR: f64 = 1.0061;

const D1_TERMS: [f64; 4] = [0.745, 0.824, 0.461, 0.0];
const D1_ERR_34: f64 = 9.73;
const D1_ERR_12: f64 = 0.73;

/// `log 433`, below which the expansion for the sum of d(n)^2 is not used.
pub fn log_d1_min() -> f64 {
    433_f64.ln()
}

/// Smallest `d1` with `sum_{n <= x} d(n)^2 <= d1 x log^3 x` for all
/// `x >= x_lo`, where `log_x_lo = log x_lo`. Every correction term decreases
/// in `x`, so the supremum sits at `x_lo`.
pub fn d1_coefficient(log_x_lo: f64) -> Result<f64> {
    if !(log_x_lo >= log_d1_min()) {
        return Err(Error::Domain(format!("d1 needs x_lo >= 433, got log x_lo = {log_x_lo}")));
    }
    Ok(round_up(d1_expansion(log_x_lo)))
}

fn d1_expansion(l: f64) -> f64 {
    1.0 / (PI * PI)
        + D1_TERMS[0] / l
        + D1_TERMS[1] / (l * l)
        + D1_TERMS[2] / (l * l * l)
        + D1_ERR_34 * (-l / 4.0).exp() / (l * l)
        + D1_ERR_12 * (-l / 2.0).exp() / (l * l * l)
}

/// `d2 = d1 (1/4 + 1/log x_lo)`, so that `sum d(n)^2 / n <= d2 log^4 x`.
pub fn d2_coefficient(d1: f64, log_x_lo: f64) -> Result<f64> {
    if !(d1 > 0.0) || !(log_x_lo > 0.0) {
        return Err(Error::Domain(format!("d2 needs d1 > 0 and x_lo > 1, got d1={d1}, log x_lo={log_x_lo}")));
    }
    Ok(round_up(d1 * (0.25 + 1.0 / log_x_lo)))
}

/// d3 from the Psi^2 sum bound: the supremum over the row of
/// `log T * 4 / log^2(V/U) * 1.0061 (log U + 1.333 + 11 / sqrt(U log U) + 1)`.
pub fn d3_literal(spec: &RangeSpec, p: &ParamVector, grid: &LogGrid) -> f64 {
    let ParamVector { u, v, .. } = *p;
    let s = grid.sup(spec.log_t0, spec.log_t1, |l| {
        let lu = u * l;
        let small = 11.0 * (-lu / 2.0).exp() / lu.sqrt();
        4.0 * GRAHAM_FACTOR * (lu + C0_ROUNDED + small + 1.0) / ((v - u) * (v - u) * l)
    });
    round_up(s)
}

/// Closed-form factor from the Ramare bound on `sum Psi^2(n)/n`, with
/// `z1 = U`, `z2 = V`, `t = v/u` and `log N = (u + v) log T`.
pub fn ramare_factor(p: &ParamVector) -> f64 {
    let t = p.v / p.u;
    3.09 * (p.u + p.v) / (p.v - p.u) * (1.301 * (t * t + 1.0) + 1.084 * (t + 1.0) - 0.116) / (t - 1.0)
}

/// Weighted `sum Psi^2(n)/n` constant: the Ramare factor plus the
/// supremum of `d3 e^{-UV/X} / log T + (d3 / log T)(2 + (x - u - v) log T)`.
pub fn d4_coefficient(spec: &RangeSpec, p: &ParamVector, d3: f64) -> Result<f64> {
    d4_on_grid(spec, p, d3, &LogGrid::default())
}

pub fn d4_on_grid(spec: &RangeSpec, p: &ParamVector, d3: f64, grid: &LogGrid) -> Result<f64> {
    if !(p.v > p.u) {
        return Err(Error::Domain(format!("d4 needs v > u, got u={}, v={}", p.u, p.v)));
    }
    let ParamVector { u, v, x, .. } = *p;
    let extra = grid.sup(spec.log_t0, spec.log_t1, |l| {
        let uv_over_x = ((u + v - x) * l).exp();
        d3 * (-uv_over_x).exp() / l + d3 / l * (2.0 + (x - u - v) * l)
    });
    Ok(round_up(ramare_factor(p) + extra))
}

/// Cap for `G(1) log W`: supremum of `1.0061 (1 + (1.333 + 3.95/sqrt W)/log W)`.
pub fn d5_coefficient(spec: &RangeSpec, p: &ParamVector, grid: &LogGrid) -> Result<f64> {
    let w = p.w;
    if !(w * spec.log_t0 > 0.0) {
        return Err(Error::Domain(format!("d5 needs W > 1, got w = {w}")));
    }
    let s = grid.sup(spec.log_t0, spec.log_t1, |l| {
        let lw = w * l;
        GRAHAM_FACTOR * (1.0 + (C0_ROUNDED + 3.95 * (-lw / 2.0).exp()) / lw)
    });
    Ok(round_up(s))
}

/// All divisor-sum constants for a row.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DivisorSumConstants {
    /// d1 at `x = VW`.
    pub d11: f64,
    /// d1 at `x = W^2`.
    pub d12: f64,
    pub d21: f64,
    pub d22: f64,
    pub d3: f64,
    pub d4: f64,
    pub d5: f64,
}

impl DivisorSumConstants {
    /// Computes every constant given an already resolved d3.
    pub fn compute(spec: &RangeSpec, p: &ParamVector, d3: f64, grid: &LogGrid) -> Result<Self> {
        let l0 = spec.log_t0;
        let log_vw = (p.v + p.w) * l0;
        let log_ww = 2.0 * p.w * l0;
        let d11 = d1_coefficient(log_vw)?;
        let d12 = d1_coefficient(log_ww)?;
        Ok(Self {
            d11,
            d12,
            d21: d2_coefficient(d11, log_vw)?,
            d22: d2_coefficient(d12, log_ww)?,
            d3,
            d4: d4_on_grid(spec, p, d3, grid)?,
            d5: d5_coefficient(spec, p, grid)?,
        })
    }
}
