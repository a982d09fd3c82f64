//! Stationary VAR(P) simulation on random causality networks.

use super::CouplingNetwork;
use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::series::SeriesMatrix;
use crate::tensor::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::BTreeSet;

/// Spectral-radius ceiling enforced on the companion matrix.
const STABILITY_RADIUS: f64 = 0.95;

/// Coefficients of a VAR(P) process: one `K x K` matrix per lag.
/// Entry `(target, source)` of the lag-`tau` matrix weights
/// `x[source, t - tau]` in the update of `x[target, t]`.
#[derive(Debug, Clone, PartialEq)]
pub struct VarCoefficients {
    pub lag_mats: Vec<Tensor>,
    pub noise_std: f64,
}

impl VarCoefficients {
    pub fn k_vars(&self) -> usize {
        self.lag_mats.first().map_or(0, |m| m.shape()[0])
    }

    pub fn order(&self) -> usize {
        self.lag_mats.len()
    }

    /// Spectral radius of the companion matrix.
    pub fn companion_radius(&self) -> f64 {
        let k = self.k_vars();
        let p = self.order();
        let dim = k * p;
        let mut comp = vec![0.0; dim * dim];
        for (tau, mat) in self.lag_mats.iter().enumerate() {
            for i in 0..k {
                for j in 0..k {
                    comp[i * dim + tau * k + j] = mat.at(i, j);
                }
            }
        }
        for r in k..dim {
            comp[r * dim + (r - k)] = 1.0;
        }
        spectral_radius(&comp, dim)
    }
}

/// Random directed network: every ordered off-diagonal pair `(source ->
/// target)` is included independently with probability `density`; self-edges
/// are always present; every included pair carries all lags `1..=p`.
pub fn gen_er_network(k_vars: usize, p: usize, density: f64, seed: u64) -> Result<CouplingNetwork> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Contract(format!("density {density} outside [0, 1]")));
    }
    if k_vars == 0 || p == 0 {
        return Err(Error::Contract("k_vars and p must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = BTreeSet::new();
    for target in 0..k_vars {
        for lag in 1..=p {
            edges.insert((target, lag, target));
        }
    }
    for source in 0..k_vars {
        for target in 0..k_vars {
            if source != target && rng.gen_bool(density) {
                for lag in 1..=p {
                    edges.insert((source, lag, target));
                }
            }
        }
    }
    CouplingNetwork::new(k_vars, p, edges)
}

/// Draw VAR coefficients uniform in `[-1, 1]` on the network's permitted
/// entries and rescale by a common factor until the companion spectral radius
/// is at most 0.95. Returns `None` if every drawn coefficient is zero.
pub fn draw_var_coefficients(network: &CouplingNetwork, seed: u64) -> Option<VarCoefficients> {
    let k = network.k_vars();
    let p = network.max_lag();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lag_mats = Vec::with_capacity(p);
    let mut any_nonzero = false;
    for tau in 1..=p {
        let mut vals = vec![0.0; k * k];
        for target in 0..k {
            for source in 0..k {
                if network.contains(source, tau, target) {
                    let c = rng.gen_range(-1.0..=1.0);
                    vals[target * k + source] = c;
                    any_nonzero |= c != 0.0;
                }
            }
        }
        lag_mats.push(Tensor::matrix(k, k, vals).expect("coefficient shape"));
    }
    if !any_nonzero {
        return None;
    }
    let mut coeffs = VarCoefficients {
        lag_mats,
        noise_std: 1.0,
    };
    for _ in 0..10_000 {
        let rho = coeffs.companion_radius();
        if rho <= STABILITY_RADIUS {
            break;
        }
        let factor = STABILITY_RADIUS / rho;
        for m in &mut coeffs.lag_mats {
            for v in m.values_mut() {
                *v *= factor;
            }
        }
    }
    Some(coeffs)
}

/// Simulate a VAR process from explicit coefficients.
///
/// `init` supplies the first `P` rows of the trajectory (oldest first); the
/// returned matrix is rows `burn_in .. burn_in + length` of the full
/// trajectory, so with `burn_in = 0` the output starts at the initial values.
pub fn simulate_var(
    coeffs: &VarCoefficients,
    init: &[Vec<f64>],
    length: usize,
    burn_in: usize,
    seed: u64,
) -> Result<SeriesMatrix> {
    let k = coeffs.k_vars();
    let p = coeffs.order();
    if init.len() != p || init.iter().any(|row| row.len() != k) {
        return Err(Error::Contract(format!(
            "init must be {p} rows of {k} values"
        )));
    }
    if length == 0 {
        return Err(Error::Contract("length must be positive".into()));
    }
    let total = burn_in + length;
    let mut rows: Vec<Vec<f64>> = init.to_vec();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while rows.len() < total.max(p) {
        let t = rows.len();
        let mut next = vec![0.0; k];
        for (tau, mat) in coeffs.lag_mats.iter().enumerate() {
            let past = &rows[t - 1 - tau];
            for target in 0..k {
                let mut acc = 0.0;
                for source in 0..k {
                    acc += mat.at(target, source) * past[source];
                }
                next[target] += acc;
            }
        }
        if coeffs.noise_std > 0.0 {
            for v in next.iter_mut() {
                let eps: f64 = rng.sample(StandardNormal);
                *v += coeffs.noise_std * eps;
            }
        }
        rows.push(next);
    }
    let mut values = Vec::with_capacity(length * k);
    for row in &rows[burn_in..burn_in + length] {
        values.extend_from_slice(row);
    }
    SeriesMatrix::from_values(length, k, values)
}

/// Generate a stationary VAR series on the given network. Deterministic per
/// seed; a degenerate all-zero coefficient draw is resampled with an
/// incremented sub-seed.
pub fn gen_var(
    network: &CouplingNetwork,
    length: usize,
    burn_in: usize,
    seed: u64,
) -> Result<SeriesMatrix> {
    let p = network.max_lag();
    let k = network.k_vars();
    let mut attempt = 0u64;
    let coeffs = loop {
        if let Some(c) = draw_var_coefficients(network, derive_seed(seed, &[0x7a5, attempt])) {
            break c;
        }
        attempt += 1;
        if attempt > 100 {
            return Err(Error::Generation(
                "could not draw nonzero VAR coefficients".into(),
            ));
        }
    };
    let init = vec![vec![0.0; k]; p];
    simulate_var(
        &coeffs,
        &init,
        length,
        burn_in.max(p),
        derive_seed(seed, &[0x51e]),
    )
}

/// Spectral radius of a dense `dim x dim` matrix via normalized repeated
/// squaring: after J squarings, `rho ~ exp(sum_i 2^-i ln f_i)` where `f_i`
/// are the Frobenius norms absorbed at each step.
pub fn spectral_radius(mat: &[f64], dim: usize) -> f64 {
    debug_assert_eq!(mat.len(), dim * dim);
    let frob = |m: &[f64]| m.iter().map(|v| v * v).sum::<f64>().sqrt();
    let mut b = mat.to_vec();
    let f0 = frob(&b);
    if f0 == 0.0 {
        return 0.0;
    }
    for v in &mut b {
        *v /= f0;
    }
    let mut log_rho = f0.ln();
    let mut weight = 0.5;
    for _ in 0..60 {
        let mut sq = vec![0.0; dim * dim];
        for i in 0..dim {
            for l in 0..dim {
                let bil = b[i * dim + l];
                if bil == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    sq[i * dim + j] += bil * b[l * dim + j];
                }
            }
        }
        let f = frob(&sq);
        if f == 0.0 {
            return 0.0;
        }
        for v in &mut sq {
            *v /= f;
        }
        b = sq;
        log_rho += weight * f.ln();
        weight *= 0.5;
    }
    log_rho.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_radius_scalar() {
        assert!((spectral_radius(&[-0.7], 1) - 0.7).abs() < 1e-9);
    }

    #[test]
    fn spectral_radius_known_companion() {
        // x_t = 0.5 x_{t-1} + 0.3 x_{t-2}: companion [[0.5, 0.3], [1, 0]],
        // dominant root (0.5 + sqrt(0.25 + 1.2)) / 2.
        let expect = (0.5 + (0.25f64 + 1.2).sqrt()) / 2.0;
        let got = spectral_radius(&[0.5, 0.3, 1.0, 0.0], 2);
        assert!((got - expect).abs() < 1e-9, "{got} vs {expect}");
    }

    #[test]
    fn spectral_radius_rotation_pair() {
        // Rotation scaled by 0.9 has complex eigenvalues of modulus 0.9;
        // power iteration on vectors would cycle, squaring does not.
        let c = 0.9 * (0.5f64).sqrt();
        let got = spectral_radius(&[c, -c, c, c], 2);
        assert!((got - 0.9).abs() < 1e-9, "{got}");
    }

    #[test]
    fn er_density_zero_gives_only_self_edges() {
        let net = gen_er_network(4, 3, 0.0, 1).unwrap();
        for k in 0..4 {
            let lagged = net.driving_lagged(k);
            assert_eq!(lagged.len(), 3);
            assert!(lagged.iter().all(|&(s, _)| s == k));
        }
    }

    #[test]
    fn er_density_one_gives_complete_graph() {
        let net = gen_er_network(4, 2, 1.0, 1).unwrap();
        for k in 0..4 {
            assert_eq!(net.driving_lagged(k).len(), 4 * 2);
        }
    }

    #[test]
    fn er_edge_count_matches_binomial_statistics() {
        // K=15, density 0.4: mean included ordered pair count over 1000 seeds
        // within 3 standard errors of 0.4 * 15 * 14 = 84.
        let mut total = 0usize;
        let runs = 1000;
        for seed in 0..runs {
            let net = gen_er_network(15, 1, 0.4, seed).unwrap();
            let pairs = net
                .lagged_edges()
                .iter()
                .filter(|&&(s, _, t)| s != t)
                .count();
            total += pairs;
        }
        let mean = total as f64 / runs as f64;
        let variance = 210.0 * 0.4 * 0.6;
        let se = (variance / runs as f64).sqrt();
        assert!(
            (mean - 84.0).abs() < 3.0 * se,
            "mean {mean}, tolerance {}",
            3.0 * se
        );
    }

    #[test]
    fn geometric_decay_without_noise() {
        let coeffs = VarCoefficients {
            lag_mats: vec![Tensor::matrix(1, 1, vec![0.5]).unwrap()],
            noise_std: 0.0,
        };
        let series = simulate_var(&coeffs, &[vec![1.0]], 4, 0, 0).unwrap();
        assert_eq!(series.column(0), vec![1.0, 0.5, 0.25, 0.125]);
    }

    #[test]
    fn ar1_lag_one_autocorrelation_matches_theory() {
        let coeffs = VarCoefficients {
            lag_mats: vec![Tensor::matrix(1, 1, vec![0.5]).unwrap()],
            noise_std: 1.0,
        };
        let n = 100_000;
        let series = simulate_var(&coeffs, &[vec![0.0]], n, 1000, 7).unwrap();
        let xs = series.column(0);
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
        let cov: f64 = xs
            .windows(2)
            .map(|w| (w[0] - mean) * (w[1] - mean))
            .sum::<f64>();
        let rho1 = cov / var;
        assert!((rho1 - 0.5).abs() < 0.02, "rho1 = {rho1}");
    }

    #[test]
    fn generated_series_is_finite_and_bounded_variance() {
        let net = gen_er_network(5, 2, 0.4, 3).unwrap();
        let series = gen_var(&net, 5000, 1000, 3).unwrap();
        assert!(series.values().iter().all(|v| v.is_finite()));
        for k in 0..5 {
            let xs = series.column(k);
            let mean = xs.iter().sum::<f64>() / xs.len() as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
            assert!(var.is_finite() && var > 0.0);
        }
    }

    #[test]
    fn gen_var_is_deterministic() {
        let net = gen_er_network(4, 3, 0.4, 11).unwrap();
        let a = gen_var(&net, 500, 1000, 11).unwrap();
        let b = gen_var(&net, 500, 1000, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn drawn_coefficients_respect_network_and_stability() {
        let net = gen_er_network(6, 3, 0.4, 5).unwrap();
        let coeffs = draw_var_coefficients(&net, 5).unwrap();
        assert!(coeffs.companion_radius() <= STABILITY_RADIUS + 1e-9);
        for (tau, mat) in coeffs.lag_mats.iter().enumerate() {
            for target in 0..6 {
                for source in 0..6 {
                    if !net.contains(source, tau + 1, target) {
                        assert_eq!(mat.at(target, source), 0.0);
                    }
                }
            }
        }
    }
}
