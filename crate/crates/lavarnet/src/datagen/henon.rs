//! Coupled Henon map chains.
//!
//! Interior variables are driven by both neighbors, end variables by their
//! single neighbor:
//!
//! ```text
//! x[k,t] = 1.4 - (C*(x[k-1,t-1] + x[k+1,t-1])/2 + (1-C)*x[k,t-1])^2 + 0.3*x[k,t-2]
//! ```
//!
//! With one variable (or `C = 0`) this reduces to the standard Henon map
//! `x_t = 1.4 - x_{t-1}^2 + 0.3 x_{t-2}`. The coupling strength `C` is a
//! parameter so other published values remain reproducible.

use super::CouplingNetwork;
use crate::error::{Error, Result};
use crate::series::SeriesMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

pub const HENON_QUADRATIC: f64 = 1.4;
pub const HENON_LINEAR: f64 = 0.3;

/// Trajectories leaving this band are treated as divergent.
const DIVERGENCE_BOUND: f64 = 10.0;

/// Ground-truth chain structure: every variable drives itself at lags 1 and
/// 2; neighbors drive each other at lag 1.
fn chain_network(k_vars: usize) -> CouplingNetwork {
    let mut edges = BTreeSet::new();
    for k in 0..k_vars {
        edges.insert((k, 1, k));
        edges.insert((k, 2, k));
        if k > 0 {
            edges.insert((k - 1, 1, k));
        }
        if k + 1 < k_vars {
            edges.insert((k + 1, 1, k));
        }
    }
    CouplingNetwork::new(k_vars, 2, edges).expect("chain network is valid")
}

/// Iterate the chain from explicit initial history.
///
/// `init` holds the two oldest rows (oldest first); the returned matrix is
/// rows `burn_in .. burn_in + length` of the full trajectory, so with
/// `burn_in = 0` the output starts at the initial rows. Returns a generation
/// error if any value leaves `(-10, 10)`.
pub fn simulate_henon_chain(
    k_vars: usize,
    length: usize,
    coupling: f64,
    burn_in: usize,
    init: &[Vec<f64>; 2],
) -> Result<SeriesMatrix> {
    if k_vars == 0 {
        return Err(Error::Contract("k_vars must be positive".into()));
    }
    if length == 0 {
        return Err(Error::Contract("length must be positive".into()));
    }
    if init.iter().any(|row| row.len() != k_vars) {
        return Err(Error::Contract(format!(
            "init rows must have {k_vars} values"
        )));
    }
    let total = (burn_in + length).max(2);
    let mut rows: Vec<Vec<f64>> = vec![init[0].clone(), init[1].clone()];
    while rows.len() < total {
        let t = rows.len();
        let prev1 = &rows[t - 1];
        let prev2 = &rows[t - 2];
        let mut next = vec![0.0; k_vars];
        for k in 0..k_vars {
            let drive = if k_vars == 1 {
                prev1[0]
            } else if k == 0 {
                coupling * prev1[1] + (1.0 - coupling) * prev1[0]
            } else if k == k_vars - 1 {
                coupling * prev1[k - 1] + (1.0 - coupling) * prev1[k]
            } else {
                coupling * (prev1[k - 1] + prev1[k + 1]) / 2.0 + (1.0 - coupling) * prev1[k]
            };
            let x = HENON_QUADRATIC - drive * drive + HENON_LINEAR * prev2[k];
            if !x.is_finite() || x.abs() > DIVERGENCE_BOUND {
                return Err(Error::Generation(format!(
                    "henon chain diverged at step {t}, variable {k}"
                )));
            }
            next[k] = x;
        }
        rows.push(next);
    }
    let mut values = Vec::with_capacity(length * k_vars);
    for row in &rows[burn_in..burn_in + length] {
        values.extend_from_slice(row);
    }
    SeriesMatrix::from_values(length, k_vars, values)
}

/// Generate a coupled Henon chain series with its ground-truth network.
///
/// Initial conditions are drawn uniform in `[-0.5, 0.5]` and redrawn on
/// divergence; 100 consecutive divergent initializations are an error.
pub fn gen_henon_chain(
    k_vars: usize,
    length: usize,
    coupling: f64,
    burn_in: usize,
    seed: u64,
) -> Result<(SeriesMatrix, CouplingNetwork)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..100 {
        let draw_row = |rng: &mut ChaCha8Rng| -> Vec<f64> {
            (0..k_vars).map(|_| rng.gen_range(-0.5..=0.5)).collect()
        };
        let init = [draw_row(&mut rng), draw_row(&mut rng)];
        match simulate_henon_chain(k_vars, length, coupling, burn_in, &init) {
            Ok(series) => return Ok((series, chain_network(k_vars))),
            Err(Error::Generation(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::Generation(format!(
        "100 consecutive divergent initializations (K={k_vars}, coupling={coupling})"
    )))
}
