use num_complex::Complex64;
use std::f64::consts::PI;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log Gamma(z)` for complex `z`; Lanczos for `Re z >= 1/2`, reflection
/// otherwise. Only the real part is reliable across branch cuts.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let pi = Complex64::new(PI, 0.0);
        return pi.ln() - (pi * z).sin().ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// `log |Gamma(sigma + it)|`, stable for large `|t|`.
pub fn ln_gamma_abs(sigma: f64, t: f64) -> f64 {
    if sigma >= 0.5 {
        return ln_gamma(Complex64::new(sigma, t)).re;
    }
    // |Gamma(z)| = pi / (|sin(pi z)| |Gamma(1 - z)|), with |sin| computed in
    // log form so that sinh(pi t) never overflows.
    let a = PI * t.abs();
    let s = (PI * sigma).sin();
    let decay = (-2.0 * a).exp();
    let bracket = (-(-2.0 * a).exp_m1()).powi(2) + 4.0 * s * s * decay;
    let ln_sin = 0.5 * (2.0 * a - 2.0 * 2_f64.ln() + bracket.ln());
    PI.ln() - ln_sin - ln_gamma(Complex64::new(1.0 - sigma, -t)).re
}

/// `|Gamma(sigma + it)|`.
pub fn gamma_abs(sigma: f64, t: f64) -> f64 {
    ln_gamma_abs(sigma, t).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_values() {
        assert!((gamma_abs(1.0, 0.0) - 1.0).abs() < 1e-14);
        assert!((gamma_abs(5.0, 0.0) - 24.0).abs() < 1e-12);
        assert!((gamma_abs(0.5, 0.0) - PI.sqrt()).abs() < 1e-14);
        // Gamma(-1/2) = -2 sqrt(pi)
        assert!((gamma_abs(-0.5, 0.0) - 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn critical_line_modulus() {
        // |Gamma(1/2 + it)|^2 = pi / cosh(pi t)
        for &t in &[0.3, 1.0, 7.0, 40.0, 200.0] {
            let want = 0.5 * (PI.ln() - (PI * t).cosh().ln());
            let got = ln_gamma_abs(0.5, t);
            assert!((got - want).abs() < 1e-11 * want.abs().max(1.0), "t = {t}");
        }
    }

    #[test]
    fn reflection_branch_is_large_t_safe() {
        let v = ln_gamma_abs(-0.47, 400.0);
        assert!(v.is_finite() && v < -600.0);
    }
}
