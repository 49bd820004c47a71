//! Zero-detector constants: the lower bound c1 at a zero and the upper-bound
//! constants c2..c5 of the averaged detector sum.

pub mod integrals;

use crate::foundations::{log_add_exp, round_down, round_up, LogGrid, HALF_LINE_LARGE_EXPONENT};
use crate::pipeline::RangeSpec;
use crate::quadrature::{integrate_exponential_tail, QuadratureResult};
use crate::arith::ParamVector;
use crate::{Error, Result};
pub use integrals::JConstants;
use integrals::GAMMA_FRACTION;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cap for `int_0^inf t^x e^-t dt` with `0 < x <= 0.03`.
pub const GAMMA_CAP: f64 = 1.0067;
/// Coefficient of the shifted-integral term in the lower bound.
pub const SHIFTED_TERM: f64 = 44.66;
/// Allowance for the tail of the smoothed sum.
pub const TAIL_ALLOWANCE: f64 = 1e-20;
const C3_LOG_FACTOR: f64 = 1.12;
const C4_FACTOR: f64 = 2.4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorConstants {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
}

impl DetectorConstants {
    /// `c1^2 - c5`, the denominator of the final constant.
    pub fn margin(&self) -> f64 {
        round_down(self.c1 * self.c1 - self.c5)
    }

    /// Checks `0 < c1 <= 1`, `c5 < 1` and `c1^2 > c5`.
    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1 <= 1.0) {
            return Err(Error::InvalidRow(format!("c1 = {} is not in (0, 1]", self.c1)));
        }
        if !(self.c5 < 1.0) {
            return Err(Error::InvalidRow(format!("c5 = {} is not below 1", self.c5)));
        }
        if !(self.margin() > 0.0) {
            return Err(Error::InvalidRow(format!("c1^2 = {} does not exceed c5 = {}", self.c1 * self.c1, self.c5)));
        }
        Ok(())
    }
}

/// Infimum over the row of
/// `exp(-L^2 / U) - residue(L) - shifted(L) - 1e-20`, with `L = log T`.
///
/// `residue` is the contribution of the pole at `beta = alpha0`, using
/// `gamma >= 0.447 L` and `e^{1/(6 gamma)}` at its largest (`gamma = 0.447 L0`);
/// `shifted` is `44.66 d2 (v + w)^4 T^{(v + w)/2 + x (1/2 - alpha0) + 27/164} L^4`.
pub fn c1_lower_bound(spec: &RangeSpec, p: &ParamVector, d2_vw: f64, grid: &LogGrid) -> Result<f64> {
    let ParamVector { u, v, w, x } = *p;
    let a0 = spec.alpha0;
    let ln_d2 = d2_vw.ln();
    let stirling = 1.0 / (6.0 * GAMMA_FRACTION * spec.log_t0);
    let c1 = grid.inf(spec.log_t0, spec.log_t1, |l| {
        let ll = l.ln();
        let g = GAMMA_FRACTION * l;
        let ln_residue = ln_d2 + 4.0 * (u + w).ln() + 0.5 * (2.0 * PI).ln() + stirling + 4.0 * ll + x * (1.0 - a0) * l
            - PI * g / 2.0
            - (a0 - 0.5) * g.ln();
        let ln_shifted = SHIFTED_TERM.ln()
            + ln_d2
            + 4.0 * (v + w).ln()
            + ((v + w) / 2.0 + x * (0.5 - a0) + HALF_LINE_LARGE_EXPONENT) * l
            + 4.0 * ll;
        let main = (-(2.0 * ll - u * l).exp()).exp();
        main - ln_residue.exp() - ln_shifted.exp() - TAIL_ALLOWANCE
    });
    let c1 = round_down(c1);
    if !(c1 > 0.0) {
        return Err(Error::InvalidRow(format!("c1 = {c1} is not positive")));
    }
    Ok(c1)
}

/// `1.0067 d4 d5 / w`.
pub fn c2_constant(d4: f64, d5: f64, w: f64) -> Result<f64> {
    check_w(w)?;
    Ok(round_up(GAMMA_CAP * d4 * d5 / w))
}

/// `2 * 1.0067 * 1.12 d4 d5 log(1/nu(T1)) / w`.
pub fn c3_constant(d4: f64, d5: f64, w: f64, nu_at_t1: f64) -> Result<f64> {
    check_w(w)?;
    if !(nu_at_t1 > 0.0 && nu_at_t1 < 1.0) {
        return Err(Error::Domain(format!("zero-free width must be in (0, 1), got {nu_at_t1}")));
    }
    Ok(round_up(2.0 * GAMMA_CAP * C3_LOG_FACTOR * d4 * d5 * (1.0 / nu_at_t1).ln() / w))
}

/// `int_1^inf e^{1/(6y)} y^{3/2 - 2 alpha0} e^{-pi y/2} dy`.
pub fn c4_integral(alpha0: f64) -> Result<QuadratureResult> {
    if !(alpha0 > 0.75 && alpha0 < 1.0) {
        return Err(Error::Domain(format!("c4 integral needs 3/4 < alpha0 < 1, got {alpha0}")));
    }
    let e = 1.5 - 2.0 * alpha0;
    let p = move |y: f64| (1.0 / (6.0 * y)).exp() * y.powf(e);
    integrate_exponential_tail(move |y| p(y) * (-PI * y / 2.0).exp(), 1.0, PI / 2.0, p, 1e-10)
}

/// `2 sqrt(2 pi) 2.4 d4 d5 / w` times the certified c4 integral.
pub fn c4_constant(d4: f64, d5: f64, w: f64, alpha0: f64) -> Result<f64> {
    c4_from_integral(d4, d5, w, c4_integral(alpha0)?.certified_upper)
}

pub fn c4_from_integral(d4: f64, d5: f64, w: f64, integral: f64) -> Result<f64> {
    check_w(w)?;
    Ok(round_up(2.0 * (2.0 * PI).sqrt() * C4_FACTOR * d5 * d4 / w * integral))
}

/// Supremum over the row of
/// `d4 d5/(2 pi) * W/log W * (X^e + (U/L^2)^e) * (J1 + J2 + J4 + J3 T^{27/164})`
/// with `e = 3/2 - 2 alpha0`, evaluated in log form.
pub fn c5_constant(spec: &RangeSpec, p: &ParamVector, d4: f64, d5: f64, j: &JConstants, grid: &LogGrid) -> Result<f64> {
    let ParamVector { u, w, x, .. } = *p;
    let e = 1.5 - 2.0 * spec.alpha0;
    let ln_front = d4.ln() + d5.ln() - (2.0 * PI).ln();
    let ln_fixed = j.fixed_sum().ln();
    let ln_j3 = j.j3_coefficient().ln();
    let ln_c5 = grid.sup(spec.log_t0, spec.log_t1, |l| {
        let lw = w * l;
        let powers = log_add_exp(e * x * l, e * (u * l - 2.0 * l.ln()));
        let js = log_add_exp(ln_fixed, ln_j3 + HALF_LINE_LARGE_EXPONENT * l);
        ln_front + lw - lw.ln() + powers + js
    });
    let c5 = round_up(ln_c5.exp());
    if !(c5 < 1.0) {
        return Err(Error::InvalidRow(format!("c5 = {c5} is not below 1")));
    }
    Ok(c5)
}

fn check_w(w: f64) -> Result<()> {
    if !(w > 0.0) {
        return Err(Error::Domain(format!("w must be positive, got {w}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_examples() {
        assert!((c2_constant(1.0, 1.0, 1.0).unwrap() - 1.0067).abs() < 1e-15);
        let c2 = c2_constant(84.796, 1.104, 0.4808273).unwrap();
        assert!((c2 - 195.99969272293816).abs() < 1e-9, "{c2}");
        // printed c2 was computed from unrounded d4 d5, so it sits slightly below
        assert!(c2 > 195.230 && c2 / 195.230 < 1.005);
        assert!(c2_constant(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn c3_examples() {
        let c3 = c3_constant(2.0, 3.0, 0.5, (-1.0_f64).exp()).unwrap();
        assert!((c3 - 2.0 * 1.0067 * 1.12 * 6.0 / 0.5).abs() < 1e-12);
        let nu = 1.0 / (5.558691 * 29.0);
        let c3 = c3_constant(84.796, 1.104, 0.4808273, nu).unwrap();
        let expected = 2.0 * 1.12 * 195.99969272293816 * (5.558691_f64 * 29.0).ln();
        assert!((c3 / expected - 1.0).abs() < 1e-14, "{c3}");
        assert!(c3 > 2222.717 && c3 / 2222.717 < 1.005);
        assert!(c3_constant(1.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn c4_row_one() {
        let c4 = c4_constant(84.796, 1.104, 0.4808273, 0.9927).unwrap();
        assert!((c4 / 286.182 - 1.0).abs() < 0.002, "{c4}");
    }

    #[test]
    fn c4_integral_decreases_in_alpha0() {
        let a = c4_integral(0.985).unwrap().value;
        let b = c4_integral(0.9927).unwrap().value;
        assert!(b < a && a < 0.3 && b > 0.0);
    }

    #[test]
    fn validity_gates() {
        let ok = DetectorConstants { c1: 0.98, c2: 1.0, c3: 1.0, c4: 1.0, c5: 0.06 };
        assert!(ok.validate().is_ok());
        assert!(DetectorConstants { c5: 0.97, ..ok }.validate().is_err());
        assert!(DetectorConstants { c1: -0.1, ..ok }.validate().is_err());
        assert!(DetectorConstants { c5: 1.2, ..ok }.validate().is_err());
    }
}
