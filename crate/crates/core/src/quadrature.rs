//! One-sided numeric integration for the positive integrands that bound the
//! Gamma/zeta integrals. Each result carries an error bound: ten times the
//! accumulated Gauss-Kronrod rule difference plus a rounding allowance.

use crate::foundations::{round_up, NeumaierSum};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Multiplier on the embedded rule difference.
pub const SAFETY_FACTOR: f64 = 10.0;
/// Largest number of subintervals before giving up.
pub const MAX_INTERVALS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_bound: f64,
    /// `value + error_bound`, rounded up.
    pub certified_upper: f64,
}

impl QuadratureResult {
    pub fn new(value: f64, error_bound: f64) -> Self {
        let error_bound = error_bound.max(0.0);
        Self { value, error_bound, certified_upper: round_up(value + error_bound) }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    /// Result for a nonnegative multiple of the integral.
    pub fn scaled(self, c: f64) -> Self {
        debug_assert!(c >= 0.0);
        Self::new(self.value * c, round_up(self.error_bound * c))
    }

    pub fn plus(self, other: Self) -> Self {
        Self::new(self.value + other.value, round_up(self.error_bound + other.error_bound))
    }
}

// 15-point Kronrod abscissae (descending, last is the centre) and weights,
// with the embedded 7-point Gauss weights at the odd Kronrod nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    kronrod: f64,
    diff: f64,
    abs_mass: f64,
}

fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let eval = |x: f64| -> Result<f64> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Quadrature(format!("integrand is not finite at t = {x}")))
        }
    };
    let fc = eval(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    let mut mass = WGK[7] * fc.abs();
    for j in 0..7 {
        let dx = h * XGK[j];
        let (f1, f2) = (eval(c - dx)?, eval(c + dx)?);
        k += WGK[j] * (f1 + f2);
        mass += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            g += WG[j / 2] * (f1 + f2);
        }
    }
    Ok(Panel { a, b, kronrod: k * h, diff: ((k - g) * h).abs(), abs_mass: mass * h.abs() })
}

fn summarize(panels: &[Panel]) -> (f64, f64, f64) {
    let value: NeumaierSum = panels.iter().map(|p| p.kronrod).collect();
    let diff: NeumaierSum = panels.iter().map(|p| p.diff).collect();
    let mass: NeumaierSum = panels.iter().map(|p| p.abs_mass).collect();
    (value.value(), diff.value(), mass.value())
}

/// Integrates `f` over `[a, b]` until `SAFETY_FACTOR * rule difference` is at
/// most `rel_tol * |value|`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("integration bounds must satisfy a < b, got [{a}, {b}]")));
    }
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let mut panels = vec![gk15(&f, a, b)?];
    loop {
        let (value, diff, mass) = summarize(&panels);
        if SAFETY_FACTOR * diff <= rel_tol * value.abs() || diff == 0.0 {
            let rounding = 64.0 * f64::EPSILON * mass;
            return Ok(QuadratureResult::new(value, round_up(SAFETY_FACTOR * diff + rounding)));
        }
        if panels.len() >= MAX_INTERVALS {
            return Err(Error::Quadrature(format!(
                "no convergence on [{a}, {b}] after {MAX_INTERVALS} subintervals (value {value:e}, error {:e})",
                SAFETY_FACTOR * diff
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.diff.total_cmp(&y.1.diff))
            .expect("panel list is never empty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if !(p.a < mid && mid < p.b) {
            return Err(Error::Quadrature(format!("subinterval near t = {mid} cannot be split further")));
        }
        panels.push(gk15(&f, p.a, mid)?);
        panels.push(gk15(&f, mid, p.b)?);
    }
}

/// Integrates `f` over `[a, inf)` for an integrand dominated by
/// `M(c) exp(-decay t)` on `[c, inf)`, where `envelope(c)` returns `M(c)`.
///
/// The range is truncated at the first `c` where the closed-form tail
/// `M(c) exp(-decay c) / decay` drops below a tenth of `rel_tol * |value|`;
/// that tail is added to the error bound. The envelope is spot-checked
/// beyond the truncation point and a violation is a hard error.
pub fn integrate_exponential_tail<F, E>(f: F, a: f64, decay: f64, envelope: E, rel_tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
    E: Fn(f64) -> f64,
{
    if !(decay > 0.0) {
        return Err(Error::Domain(format!("tail decay rate must be positive, got {decay}")));
    }
    let tail_at = |c: f64| {
        let m = envelope(c);
        if m == 0.0 {
            0.0
        } else {
            round_up(m * (-decay * c).exp() / decay)
        }
    };
    let mut step = (4.0 / decay).max(1.0);
    let mut cut = a + step;
    let mut body = integrate_finite(&f, a, cut, 0.5 * rel_tol)?;
    let mut tail = tail_at(cut);
    let mut rounds = 0;
    while tail > 0.1 * rel_tol * body.value.abs() {
        rounds += 1;
        if rounds > 60 || !tail.is_finite() {
            return Err(Error::Quadrature(format!("tail bound {tail:e} did not shrink below tolerance from t = {a}")));
        }
        let next = cut + step;
        body = body.plus(integrate_finite(&f, cut, next, 0.5 * rel_tol)?);
        cut = next;
        step *= 2.0;
        tail = tail_at(cut);
    }
    check_envelope(&f, cut, decay, envelope(cut))?;
    Ok(QuadratureResult::new(body.value, round_up(body.error_bound + tail)))
}

fn check_envelope(f: &dyn Fn(f64) -> f64, cut: f64, decay: f64, m: f64) -> Result<()> {
    let spacing = 1.0 / decay;
    for j in 0..32 {
        let t = cut + spacing * (j as f64) * (1.0 + j as f64) / 2.0;
        let value = f(t).abs();
        let bound = m * (-decay * t).exp();
        if value > bound * (1.0 + 1e-9) + f64::MIN_POSITIVE {
            return Err(Error::Envelope { t, value, envelope: bound });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn constant_integrand() {
        let r = integrate_finite(|_| 1.0, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!(r.certified_upper >= 1.0);
    }

    #[test]
    fn polynomial_is_exact() {
        let r = integrate_finite(|t| t.powi(5), 0.0, 2.0, 1e-12).unwrap();
        assert!((r.value - 64.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn zero_tail() {
        let r = integrate_exponential_tail(|_| 0.0, 3.0, 1.0, |_| 0.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.certified_upper >= 0.0 && r.certified_upper < 1e-300);
    }

    #[test]
    fn exponential_tail_matches_closed_form() {
        let r = integrate_exponential_tail(|t| (-PI * t / 2.0).exp(), 1.0, PI / 2.0, |_| 1.0, 1e-10).unwrap();
        let exact = (-PI / 2.0).exp() / (PI / 2.0);
        assert!(r.certified_upper >= exact);
        assert!((r.value / exact - 1.0).abs() < 1e-10);
    }

    #[test]
    fn envelope_violation_is_reported() {
        let r = integrate_exponential_tail(|t| (-t).exp(), 0.0, 2.0, |c| (-c).exp(), 1e-8);
        assert!(matches!(r, Err(Error::Envelope { .. })));
    }

    #[test]
    fn bad_bounds_rejected() {
        assert!(integrate_finite(|t| t, 1.0, 1.0, 1e-8).is_err());
        assert!(integrate_finite(|t| t, 0.0, 1.0, 0.0).is_err());
    }
}
