//! Brute-force references: invariant monomial counts of the cotangent lift
//! and floating-point perturbation limits of the Laurent coefficient formulas.
//!
//! Nothing here shares code with the symbolic pipeline.

use std::collections::HashMap;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::weights::WeightMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("weight matrix entries do not fit in 64 bits")]
    EntriesTooLarge,
    #[error("perturbation needs a matrix with at least three columns")]
    TooFewColumns,
}

/// Truncated off-shell and on-shell series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleSeries {
    pub degree: usize,
    /// Invariant monomial counts `h_0..=h_D`.
    pub off_shell: Vec<u128>,
    /// Coefficients of `(1 - t²)² Σ h_d t^d` up to `t^D`.
    pub on_shell: Vec<i128>,
}

fn small_rows(a: &WeightMatrix) -> Result<Vec<(i64, i64)>, OracleError> {
    let (top, bottom) = a.to_i64_rows().ok_or(OracleError::EntriesTooLarge)?;
    Ok(top.into_iter().zip(bottom).collect())
}

/// Counts `x^a y^b` with `|a| + |b| = d` and `A(a - b) = 0`, for each `d <= max_degree`.
fn count_all(cols: &[(i64, i64)], max_degree: usize) -> Vec<u128> {
    let big_d = max_degree as i64;
    // reach[c] bounds what columns c.. can still contribute per unit degree
    let mut reach = vec![(0i64, 0i64); cols.len() + 1];
    for c in (0..cols.len()).rev() {
        reach[c] = (
            reach[c + 1].0.max(cols[c].0.abs()),
            reach[c + 1].1.max(cols[c].1.abs()),
        );
    }
    let mut states: HashMap<(i64, i64, i64), u128> = HashMap::new();
    states.insert((0, 0, 0), 1);
    for (c, &(wx, wy)) in cols.iter().enumerate() {
        let (rx, ry) = reach[c + 1];
        let mut next: HashMap<(i64, i64, i64), u128> = HashMap::with_capacity(states.len() * 4);
        for (&(deg, x, y), &count) in &states {
            for k in 0..=(big_d - deg) {
                let left = big_d - deg - k;
                for j in 0..=k {
                    let net = 2 * j - k;
                    let (nx, ny) = (x + net * wx, y + net * wy);
                    if nx.abs() > left * rx || ny.abs() > left * ry {
                        continue;
                    }
                    *next.entry((deg + k, nx, ny)).or_insert(0) += count;
                }
            }
        }
        states = next;
    }
    let mut out = vec![0u128; max_degree + 1];
    for ((deg, x, y), count) in states {
        if x == 0 && y == 0 {
            out[deg as usize] += count;
        }
    }
    out
}

/// Dimension of the degree-`d` invariants of the cotangent lift.
pub fn invariant_dimension(a: &WeightMatrix, d: usize) -> Result<u128, OracleError> {
    Ok(count_all(&small_rows(a)?, d)[d])
}

pub fn oracle_series(a: &WeightMatrix, max_degree: usize) -> Result<OracleSeries, OracleError> {
    let off = count_all(&small_rows(a)?, max_degree);
    let on = (0..=max_degree)
        .map(|d| {
            let h = |k: usize| off[k] as i128;
            let mut v = h(d);
            if d >= 2 {
                v -= 2 * h(d - 2);
            }
            if d >= 4 {
                v += h(d - 4);
            }
            v
        })
        .collect();
    Ok(OracleSeries {
        degree: max_degree,
        off_shell: off,
        on_shell: on,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PerturbedQuantity {
    Gamma0,
    /// The minor-only first sum of the `γ₂` formula.
    Gamma2FirstSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PerturbationEstimate {
    pub mean: f64,
    /// Largest minus smallest extrapolated trial.
    pub spread: f64,
    /// Mean gap between the last two extrapolation stages.
    pub residual: f64,
}

fn minors(x: &[(f64, f64)]) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[i][j] = x[i].0 * x[j].1 - x[i].1 * x[j].0;
        }
    }
    m
}

fn formula(x: &[(f64, f64)], which: PerturbedQuantity) -> f64 {
    let n = x.len();
    let c = minors(x);
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j || c[i][j] <= 0.0 {
                continue;
            }
            let mut den = 1.0;
            for k in 0..n {
                if k != i && k != j {
                    den *= (c[i][j] - c[i][k] - c[j][k]) * (c[i][j] + c[i][k] + c[j][k]);
                }
            }
            total += match which {
                PerturbedQuantity::Gamma0 => c[i][j].powi(2 * n as i32 - 5) / den,
                PerturbedQuantity::Gamma2FirstSum => {
                    let s: f64 = (0..n)
                        .filter(|&p| p != i && p != j)
                        .map(|p| (c[i][p] + c[j][p]).powi(2))
                        .sum();
                    -c[i][j].powi(2 * n as i32 - 7) * s / (12.0 * den)
                }
            };
        }
    }
    total
}

/// Limit of the closed-form coefficient at `x = a(1 + ε r)` as `ε → 0`.
///
/// Each trial draws `r` uniformly from `[-1, 1]` per entry, evaluates at
/// `ε, ε/2, ε/4` and applies two rounds of Richardson extrapolation.
pub fn perturbation_gamma(
    a: &WeightMatrix,
    which: PerturbedQuantity,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<PerturbationEstimate, OracleError> {
    if a.ncols() < 3 {
        return Err(OracleError::TooFewColumns);
    }
    let cols: Vec<(f64, f64)> = (0..a.ncols())
        .map(|i| {
            let (x, y) = a.column(i);
            (x.to_f64().unwrap_or(f64::NAN), y.to_f64().unwrap_or(f64::NAN))
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    let mut residual = 0.0;
    for _ in 0..trials.max(1) {
        let r: Vec<(f64, f64)> = cols
            .iter()
            .map(|_| (rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0)))
            .collect();
        let at = |e: f64| {
            let x: Vec<(f64, f64)> = cols
                .iter()
                .zip(&r)
                .map(|(&(a1, a2), &(r1, r2))| (a1 * (1.0 + e * r1), a2 * (1.0 + e * r2)))
                .collect();
            formula(&x, which)
        };
        let (f1, f2, f4) = (at(eps), at(eps / 2.0), at(eps / 4.0));
        let (r1, r2) = (2.0 * f2 - f1, 2.0 * f4 - f2);
        let r = (4.0 * r2 - r1) / 3.0;
        residual += (r2 - r).abs();
        values.push(r);
    }
    let count = values.len() as f64;
    let mean = values.iter().sum::<f64>() / count;
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(PerturbationEstimate {
        mean,
        spread: hi - lo,
        residual: residual / count,
    })
}
