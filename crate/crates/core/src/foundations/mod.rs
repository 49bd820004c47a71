//! Special-function bounds, zero-free region widths and small numeric
//! helpers shared by every other module.

mod gamma;
mod grid;

pub use gamma::{gamma_abs, ln_gamma, ln_gamma_abs};
pub use grid::{LogGrid, NeumaierSum};

use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// `log(3e12)`: the height up to which the Riemann hypothesis is verified.
pub fn log_rh_height() -> f64 {
    3.0e12_f64.ln()
}

/// Left endpoint (in log T) of Ford's region.
pub const LOG_FORD_START: f64 = 46.2;
/// Left endpoint (in log T) of Littlewood's region.
pub const LOG_LITTLEWOOD_START: f64 = 170.2;
/// Left endpoint (in log T) of the Korobov-Vinogradov region.
pub const LOG_KV_START: f64 = 481_958.0;
/// Largest height covered by the schedule.
pub const LOG_T_MAX: f64 = 6.7e12;

const CLASSICAL_DENOM: f64 = 5.558691;
const FORD_NUM: f64 = 0.04962;
const FORD_NUM_CORR: f64 = 0.0196;
const FORD_SHIFT_NUM: f64 = 1.15;
const FORD_SHIFT_DEN: f64 = 0.685;
const FORD_LOGLOG: f64 = 0.155;
const FORD_J_LOG: f64 = 0.618;
const LITTLEWOOD_DENOM: f64 = 21.233;
const KV_DENOM: f64 = 53.989;

/// Largest real part for which the near-real Gamma cap applies.
pub const NEAR_REAL_MAX_EXPONENT: f64 = 0.03;
/// Upper bound for `int_0^inf t^x e^-t dt` over `x` in `(0, 0.03]`.
pub const NEAR_REAL_GAMMA_CAP: f64 = 1.0067;

/// Which explicit zero-free region is the widest at a given height.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ZeroFreeRegion {
    Classical,
    Ford,
    Littlewood,
    KorobovVinogradov,
}

impl ZeroFreeRegion {
    pub const ALL: [ZeroFreeRegion; 4] = [
        ZeroFreeRegion::Classical,
        ZeroFreeRegion::Ford,
        ZeroFreeRegion::Littlewood,
        ZeroFreeRegion::KorobovVinogradov,
    ];

    /// Width `nu(T)` of the region `sigma >= 1 - nu(T)`.
    pub fn width(self, log_t: f64) -> Result<f64> {
        zero_free_width(self, log_t)
    }

    /// Selection range `(lo, hi]` in log T.
    pub fn log_range(self) -> (f64, f64) {
        match self {
            ZeroFreeRegion::Classical => (log_rh_height(), LOG_FORD_START),
            ZeroFreeRegion::Ford => (LOG_FORD_START, LOG_LITTLEWOOD_START),
            ZeroFreeRegion::Littlewood => (LOG_LITTLEWOOD_START, LOG_KV_START),
            ZeroFreeRegion::KorobovVinogradov => (LOG_KV_START, LOG_T_MAX),
        }
    }
}

impl fmt::Display for ZeroFreeRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ZeroFreeRegion::Classical => "classical",
            ZeroFreeRegion::Ford => "ford",
            ZeroFreeRegion::Littlewood => "littlewood",
            ZeroFreeRegion::KorobovVinogradov => "korobov-vinogradov",
        };
        f.write_str(name)
    }
}

/// Width of the given zero-free region at height `T = exp(log_t)`.
pub fn zero_free_width(kind: ZeroFreeRegion, log_t: f64) -> Result<f64> {
    if !(log_t > 1.0) || !log_t.is_finite() {
        return Err(Error::Domain(format!(
            "zero-free width needs T > e, got log T = {log_t}"
        )));
    }
    let ll = log_t.ln();
    let nu = match kind {
        ZeroFreeRegion::Classical => 1.0 / (CLASSICAL_DENOM * log_t),
        ZeroFreeRegion::Ford => {
            let j = log_t / 6.0 + ll + FORD_J_LOG.ln();
            (FORD_NUM - FORD_NUM_CORR / (j + FORD_SHIFT_NUM)) / (j + FORD_SHIFT_DEN + FORD_LOGLOG * ll)
        }
        ZeroFreeRegion::Littlewood => ll / (LITTLEWOOD_DENOM * log_t),
        ZeroFreeRegion::KorobovVinogradov => {
            1.0 / (KV_DENOM * log_t.powf(2.0 / 3.0) * ll.cbrt())
        }
    };
    Ok(nu)
}

/// Region used at height `T = exp(log_t)`. Intervals are `(a, b]`, so a
/// boundary height belongs to the region on its left.
pub fn select_region(log_t: f64) -> Result<ZeroFreeRegion> {
    if !(log_t >= log_rh_height() && log_t <= LOG_T_MAX) {
        return Err(Error::Domain(format!(
            "log T = {log_t} outside [log(3e12), 6.7e12]"
        )));
    }
    Ok(if log_t <= LOG_FORD_START {
        ZeroFreeRegion::Classical
    } else if log_t <= LOG_LITTLEWOOD_START {
        ZeroFreeRegion::Ford
    } else if log_t <= LOG_KV_START {
        ZeroFreeRegion::Littlewood
    } else {
        ZeroFreeRegion::KorobovVinogradov
    })
}

/// Width of the widest region at `T = exp(log_t)`.
pub fn selected_width(log_t: f64) -> Result<f64> {
    select_region(log_t)?.width(log_t)
}

/// Branches of the explicit bound for `|zeta(1/2 + it)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLineBranch {
    /// `|t| <= 3`: constant 1.461.
    Small,
    /// `3 < |t| <= e^105`: `0.618 |t|^(1/6) log|t|`.
    Medium,
    /// `|t| > e^105`: `66.7 |t|^(27/164)`.
    Large,
}

pub const HALF_LINE_SMALL: f64 = 1.461;
pub const HALF_LINE_MEDIUM: f64 = 0.618;
pub const HALF_LINE_LARGE: f64 = 66.7;
pub const HALF_LINE_LARGE_EXPONENT: f64 = 27.0 / 164.0;
const HALF_LINE_MEDIUM_LOG_LIMIT: f64 = 105.0;

impl HalfLineBranch {
    pub fn of(t: f64) -> Self {
        let a = t.abs();
        if a <= 3.0 {
            HalfLineBranch::Small
        } else if a.ln() <= HALF_LINE_MEDIUM_LOG_LIMIT {
            HalfLineBranch::Medium
        } else {
            HalfLineBranch::Large
        }
    }

    pub fn coefficient(self) -> f64 {
        match self {
            HalfLineBranch::Small => HALF_LINE_SMALL,
            HalfLineBranch::Medium => HALF_LINE_MEDIUM,
            HalfLineBranch::Large => HALF_LINE_LARGE,
        }
    }

    /// Power of `|t|` in the branch (the medium branch also carries `log|t|`).
    pub fn exponent(self) -> f64 {
        match self {
            HalfLineBranch::Small => 0.0,
            HalfLineBranch::Medium => 1.0 / 6.0,
            HalfLineBranch::Large => HALF_LINE_LARGE_EXPONENT,
        }
    }
}

/// Upper bound for `|zeta(1/2 + it)|`. The branches are independent bounds
/// and need not join continuously.
pub fn zeta_halfline_bound(t: f64) -> f64 {
    let a = t.abs();
    let branch = HalfLineBranch::of(a);
    match branch {
        HalfLineBranch::Small => HALF_LINE_SMALL,
        HalfLineBranch::Medium => HALF_LINE_MEDIUM * a.powf(branch.exponent()) * a.ln(),
        HalfLineBranch::Large => HALF_LINE_LARGE * a.powf(branch.exponent()),
    }
}

/// Stirling-type upper bound for `|Gamma(sigma + it)|`:
/// `sqrt(2 pi) |t|^(sigma - 1/2) exp(-pi |t| / 2 + 1 / (6 |sigma + it|))`.
pub fn stirling_gamma_bound(sigma: f64, t: f64) -> Result<f64> {
    if t == 0.0 || !t.is_finite() || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "Stirling bound needs finite t != 0, got sigma = {sigma}, t = {t}"
        )));
    }
    let a = t.abs();
    let modulus = sigma.hypot(t);
    let log = 0.5 * (2.0 * PI).ln() + (sigma - 0.5) * a.ln() - PI * a / 2.0 + 1.0 / (6.0 * modulus);
    Ok(log.exp())
}

/// Bound `|Gamma(z)| <= 1.0067 / |z|` for `0 < Re z <= 0.03`.
///
/// `exponent_cap` is the largest real part the caller will use; it must
/// stay within the range where the cap on `int t^x e^-t` holds.
pub fn gamma_near_real_bound(z_modulus: f64, exponent_cap: f64) -> Result<f64> {
    if !(z_modulus > 0.0) {
        return Err(Error::Domain(format!(
            "near-real Gamma bound needs |z| > 0, got {z_modulus}"
        )));
    }
    if !(exponent_cap > 0.0 && exponent_cap <= NEAR_REAL_MAX_EXPONENT) {
        return Err(Error::Domain(format!(
            "near-real Gamma bound holds for Re z in (0, {NEAR_REAL_MAX_EXPONENT}], got {exponent_cap}"
        )));
    }
    Ok(NEAR_REAL_GAMMA_CAP / z_modulus)
}

/// Next representable value above `x`. Applied to results that must be
/// upper bounds before they are used downstream.
pub fn round_up(x: f64) -> f64 {
    x.next_up()
}

/// Next representable value below `x`, for lower bounds.
pub fn round_down(x: f64) -> f64 {
    x.next_down()
}

/// `log(exp(a) + exp(b))` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_width_at_ford_switch() {
        let nu = zero_free_width(ZeroFreeRegion::Classical, 46.2).unwrap();
        assert!((nu - 1.0 / (5.558691 * 46.2)).abs() < 1e-18);
        assert!((nu - 3.893_906_253_292_663e-3).abs() < 1e-15);
    }

    #[test]
    fn littlewood_width_at_switch() {
        let nu = zero_free_width(ZeroFreeRegion::Littlewood, 170.2).unwrap();
        assert!((nu - 1.421_465_980_730_744_5e-3).abs() < 1e-15);
    }

    #[test]
    fn width_rejects_small_heights() {
        assert!(zero_free_width(ZeroFreeRegion::Ford, 1.0).is_err());
        assert!(zero_free_width(ZeroFreeRegion::Classical, 0.5).is_err());
    }

    #[test]
    fn region_selection() {
        assert_eq!(select_region(1e13_f64.ln()).unwrap(), ZeroFreeRegion::Classical);
        assert_eq!(select_region(100.0).unwrap(), ZeroFreeRegion::Ford);
        assert_eq!(select_region(46.2).unwrap(), ZeroFreeRegion::Classical);
        assert_eq!(select_region(170.2).unwrap(), ZeroFreeRegion::Ford);
        assert_eq!(select_region(481_958.0).unwrap(), ZeroFreeRegion::Littlewood);
        assert_eq!(select_region(1e6).unwrap(), ZeroFreeRegion::KorobovVinogradov);
        assert_eq!(select_region(log_rh_height()).unwrap(), ZeroFreeRegion::Classical);
        assert!(select_region(1e12_f64.ln()).is_err());
        assert!(select_region(7e12).is_err());
    }

    #[test]
    fn halfline_branches() {
        assert_eq!(zeta_halfline_bound(2.0), 1.461);
        let t = 50_f64.exp();
        let want = 0.618 * (50.0_f64 / 6.0).exp() * 50.0;
        assert!((zeta_halfline_bound(t) / want - 1.0).abs() < 1e-12);
        let t = 110_f64.exp();
        let want = 66.7 * (110.0 * 27.0 / 164.0_f64).exp();
        assert!((zeta_halfline_bound(t) / want - 1.0).abs() < 1e-12);
        assert_eq!(zeta_halfline_bound(-7.5), zeta_halfline_bound(7.5));
    }

    #[test]
    fn stirling_examples() {
        let at10 = stirling_gamma_bound(0.5, 10.0).unwrap();
        let want = (2.0 * PI).sqrt() * (-5.0 * PI + 1.0 / (6.0 * 0.5_f64.hypot(10.0))).exp();
        assert!((at10 / want - 1.0).abs() < 1e-14);
        assert!((at10 - 3.840_938_694_921_58e-7).abs() < 1e-19);
        assert_eq!(stirling_gamma_bound(1.3, 4.0).unwrap(), stirling_gamma_bound(1.3, -4.0).unwrap());
        assert!(stirling_gamma_bound(0.5, 0.0).is_err());
    }

    #[test]
    fn near_real_bound() {
        assert!((gamma_near_real_bound(1.0, 0.02).unwrap() - 1.0067).abs() < 1e-15);
        let delta = 0.01;
        assert!((gamma_near_real_bound(2.0 * delta, 0.02).unwrap() - 1.0067 / (2.0 * delta)).abs() < 1e-12);
        assert!(gamma_near_real_bound(0.0, 0.02).is_err());
        assert!(gamma_near_real_bound(1.0, 0.5).is_err());
    }

    #[test]
    fn log_add_exp_handles_extremes() {
        assert!((log_add_exp(0.0, 0.0) - 2_f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(1e6, 0.0), 1e6);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 3.0), 3.0);
    }
}
