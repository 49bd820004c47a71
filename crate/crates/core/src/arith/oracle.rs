//! Desk-scale validation of the sieve lemmas: exact sums from the sieve
//! compared with the closed-form bounds they are claimed to satisfy.

use super::d1_coefficient;
use super::sieve::{divisor_square_sum, graham_bound, psi_square_bound, ramare_bound, weights_oracle};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest `N` sieved by the randomized cases.
pub const ORACLE_MAX_N: usize = 1_000_000;

/// One exact value against one bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub lemma: String,
    pub case: String,
    pub exact: f64,
    pub bound: f64,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.exact <= self.bound
    }
}

/// Random `(U, V, N)` with `100 <= U`, `V = U^t` for `t in [1.2, 2]` and
/// `UV < N <= 10^6`, `N` log-uniform.
pub fn random_cases(seed: u64, count: usize) -> Vec<(u64, u64, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let u: u64 = rng.gen_range(100..=300);
            let max_t = ((ORACLE_MAX_N as f64 / 2.0).ln() / (u as f64).ln() - 1.0).min(2.0);
            let t = rng.gen_range(1.2..max_t.max(1.21));
            let v = ((u as f64).powf(t).round() as u64).max(u + 1);
            let lo = ((u * v + 1) as f64).ln();
            let n = rng.gen_range(lo..(ORACLE_MAX_N as f64).ln()).exp() as usize;
            (u, v, n.clamp((u * v + 1) as usize, ORACLE_MAX_N))
        })
        .collect()
}

/// Checks for one `(U, V, N)`: the `Psi^2` bound, Ramare's bound and the
/// Graham bound for the `Lambda` product.
pub fn weight_checks(u: u64, v: u64, n: usize) -> Result<Vec<OracleCheck>> {
    let sums = weights_oracle(u, v, u, n)?;
    let case = format!("U={u} V={v} N={n}");
    let (uf, vf, nf) = (u as f64, v as f64, n as f64);
    Ok(vec![
        OracleCheck {
            lemma: "sum Psi^2 (N > UV)".into(),
            case: case.clone(),
            exact: sums.sum_psi_sq,
            bound: psi_square_bound(nf, uf, vf),
        },
        OracleCheck {
            lemma: "sum Psi^2/n (Ramare)".into(),
            case: case.clone(),
            exact: sums.sum_psi_sq_over_n,
            bound: ramare_bound(nf, uf, vf),
        },
        OracleCheck {
            lemma: "sum Lambda1 Lambda2 (Graham)".into(),
            case,
            exact: sums.sum_lambda_prod,
            bound: graham_bound(nf, uf),
        },
    ])
}

/// `sum_{n <= x} d(n)^2` against `d1(x) x log^3 x`.
pub fn divisor_checks(xs: &[usize]) -> Result<Vec<OracleCheck>> {
    xs.iter()
        .map(|&x| {
            let lx = (x as f64).ln();
            Ok(OracleCheck {
                lemma: "sum d(n)^2".into(),
                case: format!("x={x}"),
                exact: divisor_square_sum(x)? as f64,
                bound: d1_coefficient(lx)? * x as f64 * lx.powi(3),
            })
        })
        .collect()
}

/// Full suite: `cases` random weight cases plus the divisor checks at
/// `10^3 .. 10^6`.
pub fn oracle_suite(seed: u64, cases: usize) -> Result<Vec<OracleCheck>> {
    let weights: Vec<Vec<OracleCheck>> = random_cases(seed, cases)
        .into_par_iter()
        .map(|(u, v, n)| weight_checks(u, v, n))
        .collect::<Result<_>>()?;
    let mut all: Vec<OracleCheck> = weights.into_iter().flatten().collect();
    all.extend(divisor_checks(&[1_000, 10_000, 100_000, 1_000_000])?);
    Ok(all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cases_respect_ranges() {
        for (u, v, n) in random_cases(7, 200) {
            assert!(u >= 100 && v > u && (u * v) < n as u64 && n <= ORACLE_MAX_N, "{u} {v} {n}");
        }
    }

    #[test]
    fn fixed_case_passes() {
        assert!(weight_checks(100, 1000, 200_000).unwrap().iter().all(OracleCheck::passed));
    }
}
