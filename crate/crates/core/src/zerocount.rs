//! Bounds on the number of zeros near the 1-line, and the affine fit
//! `b1 (1 - alpha) log T + b2` used per rectangle.

use crate::pipeline::RangeSpec;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

/// Constant added to `log T` in the local count bound. The corollary and the
/// lemma it comes from print different digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArgumentConstant {
    /// 4.7908, the value carried into the count bound.
    #[default]
    Corollary,
    /// 4.7098, as printed in the preceding lemma.
    Lemma,
}

impl ArgumentConstant {
    pub fn value(self) -> f64 {
        match self {
            ArgumentConstant::Corollary => 4.7908,
            ArgumentConstant::Lemma => 4.7098,
        }
    }
}

impl std::str::FromStr for ArgumentConstant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "corollary" | "4.7908" => Ok(ArgumentConstant::Corollary),
            "lemma" | "4.7098" => Ok(ArgumentConstant::Lemma),
            other => Err(Error::Parse(format!("argument constant must be 'corollary' or 'lemma', got '{other}'"))),
        }
    }
}

const LOG_TERM: f64 = 4.0 / PI - 1.0;
const CONST_TERM: f64 = 2.6908;

/// Grid resolution per axis for the rectangle fit.
pub const FIT_GRID: usize = 512;
/// Margin added to both fitted coefficients.
pub const FIT_MARGIN: f64 = 1e-9;

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::Domain(format!("radius must lie in (0, 1/2), got {r}")));
    }
    Ok(())
}

/// Upper bound for the number of zeros in the disc of radius `r` about `1 + it`,
/// `3e12 <= |t| <= T`:
/// `2r [ (L + c)/(4 + 8r) + (4/pi - 1) log(1 + 1/r)/(1 + 2r) + 2.6908
///       + 8r/(1 + 2r)^2 (r (2L - 1) + 4) + 1/r ]` with `L = log T`.
pub fn local_zero_count_bound(r: f64, log_t: f64, c: ArgumentConstant) -> Result<f64> {
    check_radius(r)?;
    Ok(count_bound(r, log_t, c.value()))
}

fn count_bound(r: f64, l: f64, c: f64) -> f64 {
    let q = 1.0 + 2.0 * r;
    2.0 * r
        * ((l + c) / (4.0 + 8.0 * r)
            + LOG_TERM * (1.0 + 1.0 / r).ln() / q
            + CONST_TERM
            + 8.0 * r / (q * q) * (r * (2.0 * l - 1.0) + 4.0)
            + 1.0 / r)
}

/// Coarser form of the same bound for `r <= 1/b`, evaluated at `b = 1/r`:
/// `L/b (1/2 + 32/b^2) + 0.573803 log b / b + 7.7816/b + 64/b^2 + 2 - 272/b^3`.
pub fn coarse_zero_count_bound(r: f64, log_t: f64) -> Result<f64> {
    check_radius(r)?;
    let b = 1.0 / r;
    Ok(log_t / b * (0.5 + 32.0 / (b * b)) + 0.573803 / b * b.ln() + (2.4 + 5.3816) / b + 64.0 / (b * b) + 2.0
        - 272.0 / (b * b * b))
}

/// Coefficients of `n(alpha) = b1 (1 - alpha) log T + b2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroCountCoefficients {
    pub b1: f64,
    pub b2: f64,
}

impl ZeroCountCoefficients {
    pub fn count(&self, alpha: f64, log_t: f64) -> f64 {
        self.b1 * (1.0 - alpha) * log_t + self.b2
    }
}

/// Fits `(b1, b2)` so that the local count bound at `r = sqrt(2)(1 - alpha)`
/// is dominated on `[alpha0, 1] x [log T0, log T1]`.
///
/// The bound is affine in `log T`. `b2` is the supremum of its constant part
/// over the alpha grid. `b1` is the supremum of `(bound - b2)/((1 - alpha) L)`
/// over the grid, where the `alpha = 1` column takes its limiting slope
/// `1/sqrt(2)`. Domination is then verified on the grid.
pub fn fit_rectangle_count(spec: &RangeSpec, c: ArgumentConstant) -> Result<ZeroCountCoefficients> {
    let n = FIT_GRID;
    let alphas: Vec<f64> = (0..n).map(|i| spec.alpha0 + (1.0 - spec.alpha0) * i as f64 / (n - 1) as f64).collect();
    let logs: Vec<f64> =
        (0..n).map(|j| spec.log_t0 + (spec.log_t1 - spec.log_t0) * j as f64 / (n - 1) as f64).collect();
    let cv = c.value();
    let radius = |a: f64| SQRT_2 * (1.0 - a);

    let b2 = alphas
        .iter()
        .map(|&a| if a < 1.0 { count_bound(radius(a), 0.0, cv) } else { 2.0 })
        .fold(f64::NEG_INFINITY, f64::max)
        + FIT_MARGIN;

    let mut b1 = FRAC_1_SQRT_2;
    for &a in alphas.iter().filter(|&&a| a < 1.0) {
        let r = radius(a);
        for &l in &logs {
            b1 = b1.max((count_bound(r, l, cv) - b2) / ((1.0 - a) * l));
        }
    }
    let fit = ZeroCountCoefficients { b1: b1 + FIT_MARGIN, b2 };

    for &a in alphas.iter().filter(|&&a| a < 1.0) {
        let r = radius(a);
        for &l in &logs {
            let bound = count_bound(r, l, cv);
            if fit.count(a, l) < bound {
                return Err(Error::Domain(format!(
                    "rectangle fit fails at alpha = {a}, log T = {l}: {} < {bound}",
                    fit.count(a, l)
                )));
            }
        }
    }
    Ok(fit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_one_point() {
        let r = SQRT_2 * (1.0 - 0.9927);
        let l = 3e12_f64.ln();
        let v = local_zero_count_bound(r, l, ArgumentConstant::Corollary).unwrap();
        assert!((v - 2.258).abs() < 1e-3, "{v}");
        assert!(v <= 0.711 * 0.0073 * l + 2.113);
    }

    #[test]
    fn small_radius_limit() {
        let v = local_zero_count_bound(1e-12, 40.0, ArgumentConstant::Corollary).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn radius_domain() {
        assert!(local_zero_count_bound(0.0, 40.0, ArgumentConstant::Corollary).is_err());
        assert!(local_zero_count_bound(0.5, 40.0, ArgumentConstant::Corollary).is_err());
    }

    #[test]
    fn increasing_in_height() {
        let a = local_zero_count_bound(0.01, 40.0, ArgumentConstant::Corollary).unwrap();
        let b = local_zero_count_bound(0.01, 50.0, ArgumentConstant::Corollary).unwrap();
        assert!(b >= a);
    }

    #[test]
    fn lemma_constant_is_smaller() {
        let a = local_zero_count_bound(0.01, 40.0, ArgumentConstant::Corollary).unwrap();
        let b = local_zero_count_bound(0.01, 40.0, ArgumentConstant::Lemma).unwrap();
        assert!(b < a);
    }

    #[test]
    fn fit_near_published() {
        let spec = RangeSpec::new(3e12_f64.ln(), 29.0, 0.9927).unwrap();
        let fit = fit_rectangle_count(&spec, ArgumentConstant::Corollary).unwrap();
        assert!((fit.b2 / 2.113 - 1.0).abs() < 0.002, "{fit:?}");
        assert!(fit.b1 <= 0.711 && fit.b1 > 0.7);
        let spec = RangeSpec::new(80.0, 90.0, 0.985).unwrap();
        let fit = fit_rectangle_count(&spec, ArgumentConstant::Corollary).unwrap();
        assert!((fit.b2 / 2.235 - 1.0).abs() < 0.002, "{fit:?}");
        assert!(fit.b1 <= 0.721);
    }
}
