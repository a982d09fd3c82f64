//! Deterministic parameter initialization.
//!
//! Weights are drawn uniform in `[-s, s]` with `s = 1/sqrt(fan_in)` per
//! tensor; biases start at zero (LSTM forget-gate bias at one); the
//! lagged-variable weight matrices start uniform in `[-0.1, 0.1]`.

use crate::tensor::Tensor;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub(crate) struct InitRng {
    rng: ChaCha8Rng,
}

impl InitRng {
    pub fn new(seed: u64) -> Self {
        InitRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.rng.gen::<f64>() * (hi - lo)
    }

    /// `rows x cols` matrix, uniform in `[-1/sqrt(fan_in), 1/sqrt(fan_in)]`.
    pub fn weight(&mut self, rows: usize, cols: usize, fan_in: usize) -> Tensor {
        let s = 1.0 / (fan_in as f64).sqrt();
        let values = (0..rows * cols).map(|_| self.uniform(-s, s)).collect();
        Tensor::matrix(rows, cols, values).expect("init shape")
    }

    /// `rows x cols` matrix, uniform in `[-half_width, half_width]`.
    pub fn uniform_matrix(&mut self, rows: usize, cols: usize, half_width: f64) -> Tensor {
        let values = (0..rows * cols)
            .map(|_| self.uniform(-half_width, half_width))
            .collect();
        Tensor::matrix(rows, cols, values).expect("init shape")
    }

    pub fn zero_vector(&mut self, len: usize) -> Tensor {
        Tensor::vector(vec![0.0; len])
    }

    pub fn const_vector(&mut self, len: usize, v: f64) -> Tensor {
        Tensor::vector(vec![v; len])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_draws() {
        let mut a = InitRng::new(11);
        let mut b = InitRng::new(11);
        assert_eq!(a.weight(4, 5, 5), b.weight(4, 5, 5));
    }

    #[test]
    fn weight_range_uniformity() {
        // 10^5 samples from [-s, s]: bounds respected, both tails populated,
        // mean near zero and each decile holds close to a tenth of the mass.
        let n = 100_000;
        let fan_in = 16;
        let s = 1.0 / (fan_in as f64).sqrt();
        let mut rng = InitRng::new(202);
        let t = rng.uniform_matrix(n, 1, s);
        let vals = t.values();
        let mut buckets = [0usize; 10];
        let mut sum = 0.0;
        for &v in vals {
            assert!((-s..=s).contains(&v));
            let b = (((v + s) / (2.0 * s)) * 10.0).floor().min(9.0) as usize;
            buckets[b] += 1;
            sum += v;
        }
        let mean = sum / n as f64;
        assert!(mean.abs() < 3.0 * s / (n as f64 / 3.0).sqrt(), "mean {mean}");
        for (i, &c) in buckets.iter().enumerate() {
            let frac = c as f64 / n as f64;
            assert!((frac - 0.1).abs() < 0.01, "bucket {i}: {frac}");
        }
        // both edges of the range are actually reached
        let max = vals.iter().cloned().fold(f64::MIN, f64::max);
        let min = vals.iter().cloned().fold(f64::MAX, f64::min);
        assert!(max > 0.999 * s && min < -0.999 * s);
    }
}
