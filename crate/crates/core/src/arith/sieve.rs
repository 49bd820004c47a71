//! Exact small-scale sums over the Barban-Vehov weights, used to check the
//! closed-form lemma bounds.

use super::{C0_ROUNDED, GRAHAM_FACTOR};
use crate::foundations::NeumaierSum;
use crate::{Error, Result};

/// Largest `N` the oracle will sieve.
pub const SIEVE_LIMIT: usize = 10_000_000;

fn check_budget(n: usize) -> Result<()> {
    if n > SIEVE_LIMIT {
        return Err(Error::Domain(format!("sieve limit is {SIEVE_LIMIT}, requested {n}")));
    }
    Ok(())
}

/// Moebius function on `0..=n` (index 0 is unused) by a linear sieve.
pub fn mobius_table(n: usize) -> Vec<i8> {
    let mut mu = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        mu[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                mu[m] = 0;
                break;
            }
            mu[m] = -mu[i];
        }
    }
    mu
}

/// Number of divisors on `0..=n` by a linear sieve that tracks the exponent
/// of the smallest prime factor.
pub fn divisor_count_table(n: usize) -> Vec<u32> {
    let mut d = vec![0u32; n + 1];
    let mut low_exp = vec![0u32; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    if n >= 1 {
        d[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            d[i] = 2;
            low_exp[i] = 1;
        }
        for &p in &primes {
            let m = i * p;
            if m > n {
                break;
            }
            composite[m] = true;
            if i % p == 0 {
                low_exp[m] = low_exp[i] + 1;
                d[m] = d[i] / (low_exp[i] + 1) * (low_exp[m] + 1);
                break;
            }
            low_exp[m] = 1;
            d[m] = d[i] * 2;
        }
    }
    d
}

/// Exact `sum_{n <= x} d(n)^2`.
pub fn divisor_square_sum(x: usize) -> Result<u128> {
    check_budget(x)?;
    Ok(divisor_count_table(x).iter().skip(1).map(|&k| u128::from(k) * u128::from(k)).sum())
}

/// Accumulates `sum_{d | n} weight(d)` for every `n <= limit`, visiting only
/// squarefree `d <= dmax`.
fn divisor_sums(mu: &[i8], dmax: usize, limit: usize, weight: impl Fn(usize, f64) -> f64) -> Vec<f64> {
    let mut acc = vec![0.0; limit + 1];
    for (d, &m) in mu.iter().enumerate().take(dmax.min(limit) + 1).skip(1) {
        if m == 0 {
            continue;
        }
        let w = weight(d, f64::from(m));
        if w == 0.0 {
            continue;
        }
        for m in (d..=limit).step_by(d) {
            acc[m] += w;
        }
    }
    acc
}

fn psi_with(mu: &[i8], u: u64, v: u64, n: usize) -> Vec<f64> {
    let log_ratio = (v as f64 / u as f64).ln();
    divisor_sums(mu, v as usize, n, |d, m| {
        if d as u64 <= u {
            m
        } else {
            m * (v as f64 / d as f64).ln() / log_ratio
        }
    })
}

fn theta_with(mu: &[i8], w: u64, n: usize) -> Vec<f64> {
    let log_w = (w as f64).ln();
    divisor_sums(mu, w as usize, n, |d, m| m * (w as f64 / d as f64).ln() / log_w)
}

fn lambda_with(mu: &[i8], z: u64, n: usize) -> Vec<f64> {
    divisor_sums(mu, z as usize, n, |d, m| m * (z as f64 / d as f64).ln())
}

fn check_pair(u: u64, v: u64) -> Result<()> {
    if !(1 <= u && u < v) {
        return Err(Error::Domain(format!("weights need 1 <= U < V, got U={u}, V={v}")));
    }
    Ok(())
}

/// `Psi(n) = sum_{d | n} psi_d` for `n <= N` (index 0 unused).
pub fn psi_values(u: u64, v: u64, n: usize) -> Result<Vec<f64>> {
    check_budget(n)?;
    check_pair(u, v)?;
    Ok(psi_with(&mobius_table(n), u, v, n))
}

/// `Theta(n) = sum_{d | n} theta_d` for `n <= N` (index 0 unused).
pub fn theta_values(w: u64, n: usize) -> Result<Vec<f64>> {
    check_budget(n)?;
    if w < 2 {
        return Err(Error::Domain(format!("theta weights need W >= 2, got {w}")));
    }
    Ok(theta_with(&mobius_table(n), w, n))
}

/// Exact sums over the weights up to `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSums {
    pub sum_psi_sq: f64,
    pub sum_psi_sq_over_n: f64,
    pub sum_theta_sq: f64,
    /// `sum_n (sum_{d|n} Lambda_1(d)) (sum_{e|n} Lambda_2(e))` with `z1 = U`, `z2 = V`.
    pub sum_lambda_prod: f64,
}

/// Sieves the weights with cutoffs `U < V` and `W` up to `N`.
pub fn weights_oracle(u: u64, v: u64, w: u64, n: usize) -> Result<WeightSums> {
    check_budget(n)?;
    check_pair(u, v)?;
    if w < 2 {
        return Err(Error::Domain(format!("theta weights need W >= 2, got {w}")));
    }
    let mu = mobius_table(n);
    let psi = psi_with(&mu, u, v, n);
    let theta = theta_with(&mu, w, n);
    let l1 = lambda_with(&mu, u, n);
    let l2 = lambda_with(&mu, v, n);
    let sq: NeumaierSum = psi[1..].iter().map(|p| p * p).collect();
    let sq_n: NeumaierSum = psi[1..].iter().enumerate().map(|(i, p)| p * p / (i + 1) as f64).collect();
    let th: NeumaierSum = theta[1..].iter().map(|t| t * t).collect();
    let lp: NeumaierSum = l1[1..].iter().zip(&l2[1..]).map(|(a, b)| a * b).collect();
    Ok(WeightSums {
        sum_psi_sq: sq.value(),
        sum_psi_sq_over_n: sq_n.value(),
        sum_theta_sq: th.value(),
        sum_lambda_prod: lp.value(),
    })
}

/// Right side of the Graham bound:
/// `1.0061 (N - 1)(log z1 + 1.333 + 11/sqrt(z1 log z1)) + N`.
pub fn graham_bound(n: f64, z1: f64) -> f64 {
    let lz = z1.ln();
    GRAHAM_FACTOR * (n - 1.0) * (lz + C0_ROUNDED + 11.0 / (z1 * lz).sqrt()) + n
}

/// Bound for `sum_{n <= N} Psi(n)^2` when `N > UV`:
/// `4 / log^2(V/U) * 1.0061 ((N - 1)(log U + 1.333 + 11/sqrt(U log U)) + N)`.
pub fn psi_square_bound(n: f64, u: f64, v: f64) -> f64 {
    let lu = u.ln();
    let r = (v / u).ln();
    4.0 / (r * r) * GRAHAM_FACTOR * ((n - 1.0) * (lu + C0_ROUNDED + 11.0 / (u * lu).sqrt()) + n)
}

/// Ramare's bound for `sum_{n <= N} Psi(n)^2 / n` with `z2 = z1^t`, valid for
/// `N >= z1 >= 100`.
pub fn ramare_bound(n: f64, z1: f64, z2: f64) -> f64 {
    let t = z2.ln() / z1.ln();
    3.09 * n.ln() / (z2 / z1).ln() * (1.084 * (t + 1.0) + 1.301 * (1.0 + t * t) - 0.116) / (t - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        let mu = mobius_table(30);
        let want = [0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0, -1, 1, 1, 0, -1, 0, -1, 0];
        assert_eq!(&mu[..=20], &want);
        assert_eq!(mu[30], -1);
    }

    #[test]
    fn divisor_counts() {
        let d = divisor_count_table(36);
        assert_eq!(&d[1..=12], &[1, 2, 2, 3, 2, 4, 2, 4, 3, 4, 2, 6]);
        assert_eq!(d[36], 9);
        // brute force
        for (n, &count) in d.iter().enumerate().skip(1) {
            assert_eq!(count as usize, (1..=n).filter(|k| n % k == 0).count());
        }
    }

    #[test]
    fn psi_vanishes_up_to_u() {
        let u = 20;
        let psi = psi_values(u, 400, 2000).unwrap();
        assert_eq!(psi[1], 1.0);
        for (n, &value) in psi.iter().enumerate().take(u as usize + 1).skip(2) {
            assert_eq!(value, 0.0, "n = {n}");
        }
    }

    #[test]
    fn theta_is_psi_with_unit_lower_cutoff() {
        let n = 5000;
        let psi = psi_values(1, 150, n).unwrap();
        let theta = theta_values(150, n).unwrap();
        for k in 1..=n {
            assert!((psi[k] - theta[k]).abs() < 1e-12, "n = {k}");
        }
    }

    #[test]
    fn psi_square_sum_respects_bound() {
        let s = weights_oracle(20, 400, 50, 1_000_000).unwrap();
        let bound = psi_square_bound(1e6, 20.0, 400.0);
        assert!(s.sum_psi_sq <= bound, "{} > {bound}", s.sum_psi_sq);
    }

    #[test]
    fn budget_enforced() {
        assert!(psi_values(2, 3, SIEVE_LIMIT + 1).is_err());
        assert!(psi_values(5, 5, 100).is_err());
    }
}
