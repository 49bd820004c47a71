use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;
use zdc_core::foundations::{
    ln_gamma, ln_gamma_abs, log_rh_height, select_region, selected_width, stirling_gamma_bound,
    zeta_halfline_bound, ZeroFreeRegion, LOG_FORD_START, LOG_KV_START, LOG_LITTLEWOOD_START,
};
use zdc_core::quadrature::{integrate_exponential_tail, integrate_finite};

/// `Re log Gamma(z)` from the Stirling series at `z + n` with `|z + n| >= 30`,
/// shifted back by `log|z + k|`. Independent of the Lanczos implementation.
fn oracle_ln_gamma_abs(sigma: f64, t: f64) -> f64 {
    // Bernoulli coefficients B_{2k} / (2k (2k - 1)).
    const SERIES: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
    ];
    let z = Complex64::new(sigma, t);
    let mut shift = 0.0;
    let mut w = z;
    while w.norm() < 30.0 || w.re < 1.0 {
        shift += w.norm().ln();
        w += 1.0;
    }
    let mut lg = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut pow = inv;
    for c in SERIES {
        lg += c * pow;
        pow *= inv2;
    }
    lg.re - shift
}

#[test]
fn gamma_matches_oracle() {
    for i in 0..=30 {
        let sigma = -1.0 + 3.0 * i as f64 / 30.0;
        for j in 0..=40 {
            let t = 0.5 + 60.0 * j as f64 / 40.0;
            let ours = ln_gamma_abs(sigma, t);
            let oracle = oracle_ln_gamma_abs(sigma, t);
            assert!((ours - oracle).abs() < 1e-9 * (1.0 + oracle.abs()), "sigma={sigma} t={t}: {ours} vs {oracle}");
            if sigma >= 0.5 {
                let direct = ln_gamma(Complex64::new(sigma, t)).re;
                assert!((direct - oracle).abs() < 1e-9 * (1.0 + oracle.abs()));
            }
        }
    }
}

/// The bound uses `|t|` where the true asymptotic has `|z|`, so for
/// `sigma > 1/2` it can undershoot at small `|t|`. On the grid it holds for
/// `sigma <= 1.45` at every `|t| in [1, 50]`, and for `sigma <= 2` once
/// `|t| >= 3.5`. The integrals only use `sigma < 1/2`.
#[test]
fn stirling_bound_dominates_gamma_on_grid() {
    for i in 0..=60 {
        let sigma = -1.0 + 3.0 * i as f64 / 60.0;
        for j in 0..=98 {
            let a = 1.0 + 49.0 * j as f64 / 98.0;
            if sigma > 1.45 && a < 3.5 {
                continue;
            }
            for t in [a, -a] {
                let bound = stirling_gamma_bound(sigma, t).unwrap().ln();
                let exact = oracle_ln_gamma_abs(sigma, t.abs());
                assert!(bound >= exact, "sigma={sigma} t={t}: log bound {bound} < log |Gamma| {exact}");
            }
        }
    }
}

#[test]
fn stirling_bound_fails_for_large_sigma_small_t() {
    for (sigma, t) in [(1.5, 1.0), (2.0, 3.0)] {
        let bound = stirling_gamma_bound(sigma, t).unwrap().ln();
        assert!(bound < oracle_ln_gamma_abs(sigma, t), "sigma={sigma} t={t}");
    }
}

#[test]
fn nu_boundaries_follow_half_open_selection() {
    assert_eq!(select_region(LOG_FORD_START).unwrap(), ZeroFreeRegion::Classical);
    assert_eq!(select_region(LOG_FORD_START + 1e-9).unwrap(), ZeroFreeRegion::Ford);
    assert_eq!(select_region(LOG_LITTLEWOOD_START).unwrap(), ZeroFreeRegion::Ford);
    assert_eq!(select_region(LOG_KV_START).unwrap(), ZeroFreeRegion::Littlewood);
    assert_eq!(select_region(LOG_KV_START * (1.0 + 1e-12)).unwrap(), ZeroFreeRegion::KorobovVinogradov);
    assert!(select_region(log_rh_height() - 1e-6).is_err());
}

/// The next region is narrower than the outgoing one by at most 4e-5
/// relative at each printed switch height; the selected width is still
/// nonincreasing across the switch.
#[test]
fn nu_boundary_gap_is_small() {
    for (prev, next, l) in [
        (ZeroFreeRegion::Classical, ZeroFreeRegion::Ford, LOG_FORD_START),
        (ZeroFreeRegion::Ford, ZeroFreeRegion::Littlewood, LOG_LITTLEWOOD_START),
        (ZeroFreeRegion::Littlewood, ZeroFreeRegion::KorobovVinogradov, LOG_KV_START),
    ] {
        let (a, b) = (prev.width(l).unwrap(), next.width(l).unwrap());
        assert!((b / a - 1.0).abs() < 4e-5, "{prev} -> {next} at {l}: {a} vs {b}");
        let after = selected_width(l * (1.0 + 1e-12)).unwrap();
        assert!(after <= selected_width(l).unwrap());
    }
}

fn region_strategy() -> impl Strategy<Value = (ZeroFreeRegion, f64, f64)> {
    (0usize..4, 0.0f64..1.0, 0.0f64..1.0).prop_map(|(k, a, b)| {
        let region = ZeroFreeRegion::ALL[k];
        let (lo, hi) = region.log_range();
        // log-spaced sampling so the huge last range is covered evenly
        let at = |s: f64| (lo.ln() + (hi.ln() - lo.ln()) * s).exp();
        let (x, y) = if a <= b { (a, b) } else { (b, a) };
        (region, at(x), at(y))
    })
}

proptest! {
    #[test]
    fn nu_strictly_decreasing_in_each_region((region, l0, l1) in region_strategy()) {
        prop_assume!(l1 > l0 * (1.0 + 1e-9));
        prop_assert!(region.width(l1).unwrap() < region.width(l0).unwrap());
    }

    #[test]
    fn selected_width_nonincreasing(a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = (log_rh_height().ln(), 6.7e12f64.ln());
        let at = |f: f64| (lo + (hi - lo) * f).exp().clamp(log_rh_height(), 6.7e12);
        let (l0, l1) = (at(a.min(b)), at(a.max(b)));
        prop_assert!(selected_width(l1).unwrap() <= selected_width(l0).unwrap());
    }

    #[test]
    fn halfline_bound_is_even(t in 0.0f64..1e9) {
        prop_assert_eq!(zeta_halfline_bound(t), zeta_halfline_bound(-t));
    }
}

/// Convex decreasing positive integrands with closed-form integrals on `[a, b]`.
#[derive(Debug, Clone, Copy)]
enum Integrand {
    Exp { k: f64 },
    Power { c: f64, p: f64 },
    ExpPower { k: f64, c: f64 },
}

impl Integrand {
    fn eval(self, x: f64) -> f64 {
        match self {
            Self::Exp { k } => (-k * x).exp(),
            Self::Power { c, p } => (x + c).powf(-p),
            Self::ExpPower { k, c } => (-k * x).exp() / (x + c),
        }
    }

    /// Midpoint sum on `n` panels; a lower bound for convex integrands.
    fn midpoint(self, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        (0..n).map(|i| self.eval(a + h * (i as f64 + 0.5))).sum::<f64>() * h
    }
}

fn integrand_strategy() -> impl Strategy<Value = Integrand> {
    prop_oneof![
        (0.1f64..5.0).prop_map(|k| Integrand::Exp { k }),
        (0.1f64..3.0, 0.5f64..4.0).prop_map(|(c, p)| Integrand::Power { c, p }),
        (0.1f64..3.0, 0.1f64..3.0).prop_map(|(k, c)| Integrand::ExpPower { k, c }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn certified_upper_dominates_midpoint(f in integrand_strategy(), a in 0.0f64..2.0, len in 0.1f64..20.0) {
        let b = a + len;
        let r = integrate_finite(|x| f.eval(x), a, b, 1e-10).unwrap();
        prop_assert!(r.certified_upper >= f.midpoint(a, b, 200_000));
    }

    #[test]
    fn halving_tolerance_does_not_raise_upper(f in integrand_strategy(), a in 0.0f64..2.0, len in 0.1f64..20.0) {
        let b = a + len;
        let coarse = integrate_finite(|x| f.eval(x), a, b, 1e-8).unwrap();
        let fine = integrate_finite(|x| f.eval(x), a, b, 5e-9).unwrap();
        prop_assert!(fine.certified_upper <= coarse.certified_upper * (1.0 + 1e-13));
    }
}

#[test]
fn exponential_tail_dominates_closed_form() {
    for k in [0.25_f64, 0.5, 1.0, 3.0] {
        for a in [0.0, 1.0, 10.0] {
            let exact = (-k * a).exp() / k;
            let r = integrate_exponential_tail(|x| (-k * x).exp(), a, k, |_| 1.0, 1e-10).unwrap();
            assert!(r.certified_upper >= exact, "k={k} a={a}: {} < {exact}", r.certified_upper);
            assert!(r.certified_upper <= exact * (1.0 + 1e-8));
        }
    }
}
