//! Certified upper bounds for the Gamma/zeta integrals that feed c1 and c5,
//! together with the fixed caps they are compared against.

use crate::foundations::{
    gamma_abs, round_up, HALF_LINE_LARGE, HALF_LINE_LARGE_EXPONENT, HALF_LINE_SMALL,
    NEAR_REAL_GAMMA_CAP, NEAR_REAL_MAX_EXPONENT,
};
use crate::quadrature::{integrate_exponential_tail, integrate_finite, QuadratureResult};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Cap on each of the two outer integrals `J1`, `J4`.
pub const OUTER_CAP: f64 = 0.24113;
/// Cap on the middle integral `J2`.
pub const MIDDLE_CAP: f64 = 5.921;
/// Cap on each side piece of `J3` (coefficient of `a^(27/164)`).
pub const J3_SIDE_CAP: f64 = 16.329;
/// Cap on the centre piece of `J3`.
pub const J3_CENTRE_CAP: f64 = 253.419;
/// Cap on `J3` (coefficient of `a^(27/164)`).
pub const J3_CAP: f64 = 286.077;
/// Cap on each shifted integral over `t >= 0` or `3 - gamma <= t <= 0`
/// (coefficient of `gamma^(27/164)`).
pub const SHIFTED_CAP: f64 = 140.297;
/// Cap on the sum of the two shifted integrals.
pub const SHIFTED_TOTAL_CAP: f64 = 280.594;
/// Cap on the far tail `t <= -3 - gamma`.
pub const FAR_TAIL_CAP: f64 = 1e-10;
/// Cap on the band `|t + gamma| <= 3`.
pub const NEAR_BAND_CAP: f64 = 1e-8;
/// Lower bound on `gamma / log T` for the zeros that matter.
pub const GAMMA_FRACTION: f64 = 0.447;

const REL_TOL: f64 = 1e-10;
const HALF_PI: f64 = PI / 2.0;
const K: f64 = HALF_LINE_LARGE_EXPONENT;

fn sqrt_two_pi() -> f64 {
    (2.0 * PI).sqrt()
}

/// Real part `3/2 - 2 beta` of the Gamma argument in the pair integrals.
fn pair_sigma(beta: f64) -> f64 {
    1.5 - 2.0 * beta
}

fn check_beta(beta: f64) -> Result<()> {
    if !(0.75 < beta && beta <= 1.0) {
        return Err(Error::Domain(format!("integral bounds need 3/4 < beta <= 1, got {beta}")));
    }
    Ok(())
}

/// `int_a^inf p(t) e^{-pi t/2} dt` for a positive decreasing prefactor `p`.
fn decaying(p: impl Fn(f64) -> f64 + Copy, a: f64) -> Result<QuadratureResult> {
    integrate_exponential_tail(move |t| p(t) * (-HALF_PI * t).exp(), a, HALF_PI, p, REL_TOL)
}

/// `int_0^inf |Gamma(sigma + it)| dt` for `sigma < 1/2`, with the Stirling
/// envelope `sqrt(2 pi) c^(sigma - 1/2) e^(1/(6c))` beyond the cut `c`.
fn gamma_half_line(sigma: f64) -> Result<QuadratureResult> {
    integrate_exponential_tail(
        move |t| gamma_abs(sigma, t),
        0.0,
        HALF_PI,
        move |c| sqrt_two_pi() * c.powf(sigma - 0.5) * (1.0 / (6.0 * c)).exp(),
        REL_TOL,
    )
}

/// Bound for `J1` (and `J4`):
/// `sqrt(2 pi) e^{1/(6(2 beta - 3/2))} 66.7 int_3^inf (2t)^k t^{1 - 2 beta} e^{-pi t/2} dt`.
pub fn outer_bound(beta: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let factor = sqrt_two_pi() * (1.0 / (6.0 * (2.0 * beta - 1.5))).exp() * HALF_LINE_LARGE;
    Ok(decaying(move |t| (2.0 * t).powf(K) * t.powf(1.0 - 2.0 * beta), 3.0)?.scaled(factor))
}

/// Bound for `J2`: `1.461 int_{-inf}^3 |Gamma(3/2 - 2 beta + it)| dt`.
pub fn middle_bound(beta: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let sigma = pair_sigma(beta);
    let near = integrate_finite(|t| gamma_abs(sigma, t), 0.0, 3.0, REL_TOL)?;
    Ok(near.plus(gamma_half_line(sigma)?).scaled(HALF_LINE_SMALL))
}

/// Bound for each side piece of `J3` as a multiple of `a^(27/164)`:
/// `66.7 sqrt(2 pi) e^{1/(6(2 beta - 3/2))} int_1^inf (t/3 + 1)^k t^{1 - 2 beta} e^{-pi t/2} dt`.
pub fn j3_side_bound(beta: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let factor = HALF_LINE_LARGE * sqrt_two_pi() * (1.0 / (6.0 * (2.0 * beta - 1.5))).exp();
    Ok(decaying(move |t| (t / 3.0 + 1.0).powf(K) * t.powf(1.0 - 2.0 * beta), 1.0)?.scaled(factor))
}

/// `int_{-1}^{1} (t/3 + 1)^k |Gamma(3/2 - 2 beta + it)| dt`.
pub fn centre_gamma_integral(beta: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let sigma = pair_sigma(beta);
    integrate_finite(|t| (t / 3.0 + 1.0).powf(K) * gamma_abs(sigma, t), -1.0, 1.0, REL_TOL)
}

/// Bound for the centre piece of `J3` as a multiple of `a^(27/164)`.
pub fn j3_centre_bound(beta: f64) -> Result<QuadratureResult> {
    Ok(centre_gamma_integral(beta)?.scaled(HALF_LINE_LARGE))
}

fn min_gamma(log_t0: f64) -> f64 {
    GAMMA_FRACTION * log_t0
}

/// `int_0^1 |Gamma(1/2 - beta + it)| dt`.
pub fn shifted_gamma_integral(beta: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    integrate_finite(|t| gamma_abs(0.5 - beta, t), 0.0, 1.0, REL_TOL)
}

/// Bound for each shifted integral as a multiple of `gamma^(27/164)`, with
/// `gamma = 0.447 log T0`:
/// `66.7 (1 + 1/gamma)^k int_0^1 |Gamma(1/2 - beta + it)| dt
///   + sqrt(2 pi) e^{1/6} 66.7 int_1^inf (t/gamma + 1)^k t^{-beta} e^{-pi t/2} dt`.
pub fn shifted_bound(beta: f64, log_t0: f64) -> Result<QuadratureResult> {
    let g = min_gamma(log_t0);
    let near = shifted_gamma_integral(beta)?.scaled(HALF_LINE_LARGE * (1.0 + 1.0 / g).powf(K));
    let far = decaying(move |t| (t / g + 1.0).powf(K) * t.powf(-beta), 1.0)?
        .scaled(sqrt_two_pi() * (1.0_f64 / 6.0).exp() * HALF_LINE_LARGE);
    Ok(near.plus(far))
}

fn shifted_stirling_factor(beta: f64) -> f64 {
    sqrt_two_pi() * (1.0 / (6.0 * (beta - 0.5))).exp()
}

/// Bound for the far tail `t <= -3 - gamma`:
/// `sqrt(2 pi) e^{1/(6(beta - 1/2))} 66.7 int_{3 + gamma}^inf (2t)^k t^{-beta} e^{-pi t/2} dt`.
pub fn far_tail_bound(beta: f64, log_t0: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let a = 3.0 + min_gamma(log_t0);
    Ok(decaying(move |t| (2.0 * t).powf(K) * t.powf(-beta), a)?.scaled(shifted_stirling_factor(beta) * HALF_LINE_LARGE))
}

/// Bound for the band `|t + gamma| <= 3`:
/// `sqrt(2 pi) e^{1/(6(beta - 1/2))} 1.461 int_{gamma-3}^{gamma+3} t^{-beta} e^{-pi t/2} dt`.
pub fn near_band_bound(beta: f64, log_t0: f64) -> Result<QuadratureResult> {
    check_beta(beta)?;
    let g = min_gamma(log_t0);
    if !(g > 3.0) {
        return Err(Error::Domain(format!("band integral needs gamma > 3, got {g}")));
    }
    let r = integrate_finite(|t| t.powf(-beta) * (-HALF_PI * t).exp(), g - 3.0, g + 3.0, REL_TOL)?;
    Ok(r.scaled(shifted_stirling_factor(beta) * HALF_LINE_SMALL))
}

/// `sup_{0 < x <= 0.03} int_0^inf t^x e^{-t} dt`, sampled on 30 points.
pub fn near_real_gamma_integral() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i in 1..=30 {
        let x = NEAR_REAL_MAX_EXPONENT * i as f64 / 30.0;
        let body = integrate_finite(|t| t.powf(x) * (-t).exp(), 0.0, 1.0, REL_TOL)?;
        // t^x e^{-t/2} is decreasing for t >= 2x, so its value at the cut is an envelope at rate 1/2.
        let tail = integrate_exponential_tail(|t| t.powf(x) * (-t).exp(), 1.0, 0.5, move |c| c.powf(x), REL_TOL)?;
        worst = worst.max(body.plus(tail).certified_upper);
    }
    Ok(worst)
}

/// J constants entering c5.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JConstants {
    pub j1: f64,
    pub j2: f64,
    pub j3_side: f64,
    pub j3_centre: f64,
    pub j4: f64,
}

/// Points in `[alpha0, 1]` at which the certified bounds are evaluated.
const BETA_POINTS: usize = 9;

impl JConstants {
    /// The fixed caps.
    pub fn published() -> Self {
        Self { j1: OUTER_CAP, j2: MIDDLE_CAP, j3_side: J3_SIDE_CAP, j3_centre: J3_CENTRE_CAP, j4: OUTER_CAP }
    }

    /// Certified bounds, maximized over `beta` in `[alpha0, 1]`.
    pub fn certified(alpha0: f64) -> Result<Self> {
        let mut out = Self { j1: 0.0, j2: 0.0, j3_side: 0.0, j3_centre: 0.0, j4: 0.0 };
        for i in 0..BETA_POINTS {
            let beta = alpha0 + (1.0 - alpha0) * i as f64 / (BETA_POINTS - 1) as f64;
            let outer = outer_bound(beta)?.certified_upper;
            out.j1 = out.j1.max(outer);
            out.j4 = out.j4.max(outer);
            out.j2 = out.j2.max(middle_bound(beta)?.certified_upper);
            out.j3_side = out.j3_side.max(j3_side_bound(beta)?.certified_upper);
            out.j3_centre = out.j3_centre.max(j3_centre_bound(beta)?.certified_upper);
        }
        Ok(out)
    }

    /// Componentwise maximum of the caps and the certified bounds.
    pub fn effective(alpha0: f64) -> Result<Self> {
        let c = Self::certified(alpha0)?;
        let p = Self::published();
        Ok(Self {
            j1: p.j1.max(c.j1),
            j2: p.j2.max(c.j2),
            j3_side: p.j3_side.max(c.j3_side),
            j3_centre: p.j3_centre.max(c.j3_centre),
            j4: p.j4.max(c.j4),
        })
    }

    /// Coefficient of `a^(27/164)` in `J3`.
    pub fn j3_coefficient(&self) -> f64 {
        round_up(2.0 * self.j3_side + self.j3_centre)
    }

    /// `J1 + J2 + J4`.
    pub fn fixed_sum(&self) -> f64 {
        round_up(self.j1 + self.j2 + self.j4)
    }
}

/// One comparison of a certified integral bound with its cap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapCheck {
    pub name: String,
    pub certified: f64,
    pub cap: f64,
}

impl CapCheck {
    fn new(name: &str, certified: f64, cap: f64) -> Self {
        Self { name: name.to_string(), certified, cap }
    }

    pub fn passed(&self) -> bool {
        self.certified <= self.cap
    }
}

/// Every cap, evaluated at `beta = alpha0` with `gamma = 0.447 log T0`.
pub fn cap_checks(alpha0: f64, log_t0: f64) -> Result<Vec<CapCheck>> {
    let outer = outer_bound(alpha0)?.certified_upper;
    let side = j3_side_bound(alpha0)?.certified_upper;
    let centre = j3_centre_bound(alpha0)?.certified_upper;
    let shifted = shifted_bound(alpha0, log_t0)?.certified_upper;
    Ok(vec![
        CapCheck::new("outer pair integral (J1, J4)", outer, OUTER_CAP),
        CapCheck::new("middle pair integral (J2)", middle_bound(alpha0)?.certified_upper, MIDDLE_CAP),
        CapCheck::new("J3 side piece / a^(27/164)", side, J3_SIDE_CAP),
        CapCheck::new("J3 centre piece / a^(27/164)", centre, J3_CENTRE_CAP),
        CapCheck::new("J3 total / a^(27/164)", round_up(2.0 * side + centre), J3_CAP),
        CapCheck::new("shifted integral / gamma^(27/164)", shifted, SHIFTED_CAP),
        CapCheck::new("both shifted integrals / gamma^(27/164)", round_up(2.0 * shifted), SHIFTED_TOTAL_CAP),
        CapCheck::new("far tail beyond gamma + 3", far_tail_bound(alpha0, log_t0)?.certified_upper, FAR_TAIL_CAP),
        CapCheck::new("band within 3 of gamma", near_band_bound(alpha0, log_t0)?.certified_upper, NEAR_BAND_CAP),
        CapCheck::new("int t^x e^-t for 0 < x <= 0.03", near_real_gamma_integral()?, NEAR_REAL_GAMMA_CAP),
    ])
}
