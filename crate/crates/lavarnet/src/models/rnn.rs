//! Elman recurrent network baseline.
//!
//! One hidden state per time step; the last output vector feeds an affine
//! head with no activation, so forecasts of z-scored targets are unbounded.

use super::init::InitRng;
use super::BoundModel;
use crate::error::{Error, Result};
use crate::tensor::{matvec_raw, sigmoid_scalar, NodeId, Tape, Tensor};

#[derive(Debug, Clone, PartialEq)]
pub struct ElmanParams {
    pub n: usize,
    pub t_steps: usize,
    pub k_vars: usize,
    pub k_out: usize,
    /// `n x K`.
    pub w_in: Tensor,
    /// `n x n`.
    pub recur: Tensor,
    /// Length `n`.
    pub bias_h: Tensor,
    /// `n x n`.
    pub w_y: Tensor,
    /// Length `n`.
    pub bias_y: Tensor,
    /// `K_out x n` readout of the last output vector.
    pub head_w: Tensor,
    /// Length `K_out`.
    pub head_b: Tensor,
}

impl ElmanParams {
    pub fn init(n: usize, t_steps: usize, k_vars: usize, k_out: usize, seed: u64) -> Self {
        let mut rng = InitRng::new(seed);
        ElmanParams {
            n,
            t_steps,
            k_vars,
            k_out,
            w_in: rng.weight(n, k_vars, k_vars),
            recur: rng.weight(n, n, n),
            bias_h: rng.zero_vector(n),
            w_y: rng.weight(n, n, n),
            bias_y: rng.zero_vector(n),
            head_w: rng.weight(k_out, n, n),
            head_b: rng.zero_vector(k_out),
        }
    }

    pub fn tensors(&self) -> Vec<(String, &Tensor)> {
        vec![
            ("w_in".into(), &self.w_in),
            ("recur".into(), &self.recur),
            ("bias_h".into(), &self.bias_h),
            ("w_y".into(), &self.w_y),
            ("bias_y".into(), &self.bias_y),
            ("head_w".into(), &self.head_w),
            ("head_b".into(), &self.head_b),
        ]
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor)> {
        vec![
            ("w_in".into(), &mut self.w_in),
            ("recur".into(), &mut self.recur),
            ("bias_h".into(), &mut self.bias_h),
            ("w_y".into(), &mut self.w_y),
            ("bias_y".into(), &mut self.bias_y),
            ("head_w".into(), &mut self.head_w),
            ("head_b".into(), &mut self.head_b),
        ]
    }

    /// Run the recurrence over the window and read out the last output vector.
    pub fn predict(&self, window: &Tensor) -> Result<Vec<f64>> {
        if window.shape() != [self.t_steps, self.k_vars] {
            return Err(Error::dim("predict", window.shape(), &[self.t_steps, self.k_vars]));
        }
        let mut h = vec![0.0; self.n];
        let mut y = vec![0.5; self.n];
        for t in 0..self.t_steps {
            let row = &window.values()[t * self.k_vars..(t + 1) * self.k_vars];
            let (new_h, new_y) = elman_step(row, &h, self);
            h = new_h;
            y = new_y;
        }
        let mut out = matvec_raw(&self.head_w, &y);
        for (o, b) in out.iter_mut().zip(self.head_b.values()) {
            *o += b;
        }
        Ok(out)
    }

    pub fn build_prediction(&self, tape: &mut Tape, bound: &BoundModel, window: &Tensor) -> Result<NodeId> {
        if window.shape() != [self.t_steps, self.k_vars] {
            return Err(Error::dim("predict", window.shape(), &[self.t_steps, self.k_vars]));
        }
        let ids = &bound.ids;
        let (w_in, recur, bias_h, w_y, bias_y, head_w, head_b) =
            (ids[0], ids[1], ids[2], ids[3], ids[4], ids[5], ids[6]);
        let mut h = tape.input(Tensor::vector(vec![0.0; self.n]));
        let mut y = None;
        for t in 0..self.t_steps {
            let row = tape.input(Tensor::vector(
                window.values()[t * self.k_vars..(t + 1) * self.k_vars].to_vec(),
            ));
            let m1 = tape.matvec(w_in, row)?;
            let m2 = tape.matvec(recur, h)?;
            let s = tape.add(m1, m2)?;
            let s = tape.add(s, bias_h)?;
            h = tape.sigmoid(s);
            let o = tape.affine(w_y, h, bias_y)?;
            y = Some(tape.sigmoid(o));
        }
        let y = y.ok_or_else(|| Error::Contract("empty window".into()))?;
        tape.affine(head_w, y, head_b)
    }
}

/// One Elman update: `h_t = sigmoid(W_in x_t + U h_prev + b_h)`,
/// `y_t = sigmoid(W_y h_t + b_y)`.
pub fn elman_step(x_t: &[f64], h_prev: &[f64], p: &ElmanParams) -> (Vec<f64>, Vec<f64>) {
    debug_assert_eq!(x_t.len(), p.k_vars);
    debug_assert_eq!(h_prev.len(), p.n);
    let mut pre = matvec_raw(&p.w_in, x_t);
    for (z, r) in pre.iter_mut().zip(matvec_raw(&p.recur, h_prev)) {
        *z += r;
    }
    for (z, b) in pre.iter_mut().zip(p.bias_h.values()) {
        *z += b;
    }
    let h: Vec<f64> = pre.into_iter().map(sigmoid_scalar).collect();
    let mut out = matvec_raw(&p.w_y, &h);
    for (o, b) in out.iter_mut().zip(p.bias_y.values()) {
        *o += b;
    }
    let y = out.into_iter().map(sigmoid_scalar).collect();
    (h, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::Model;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zeroed(n: usize, t: usize, k: usize, k_out: usize) -> ElmanParams {
        let mut p = ElmanParams::init(n, t, k, k_out, 0);
        for (_, tensor) in p.tensors_mut() {
            for v in tensor.values_mut() {
                *v = 0.0;
            }
        }
        p
    }

    #[test]
    fn zero_params_zero_state_step_gives_half() {
        let p = zeroed(3, 2, 2, 1);
        let (h, _) = elman_step(&[0.4, -0.4], &[0.0; 3], &p);
        assert_eq!(h, vec![0.5; 3]);
    }

    #[test]
    fn zero_recurrence_makes_step_independent_of_state() {
        let mut p = ElmanParams::init(3, 2, 2, 1, 5);
        for v in p.recur.values_mut() {
            *v = 0.0;
        }
        let x = [0.9, -0.1];
        let (h1, y1) = elman_step(&x, &[0.0; 3], &p);
        let (h2, y2) = elman_step(&x, &[5.0, -3.0, 0.25], &p);
        assert_eq!(h1, h2);
        assert_eq!(y1, y2);
    }

    #[test]
    fn step_matches_explicit_oracle() {
        let p = ElmanParams::init(2, 2, 3, 1, 17);
        let x = [0.3, -0.6, 1.2];
        let h_prev = [0.8, 0.1];
        let (h, y) = elman_step(&x, &h_prev, &p);
        for i in 0..2 {
            let mut in_term = 0.0;
            for j in 0..3 {
                in_term += p.w_in.at(i, j) * x[j];
            }
            let mut state_term = 0.0;
            for j in 0..2 {
                state_term += p.recur.at(i, j) * h_prev[j];
            }
            let z = in_term + state_term + p.bias_h.values()[i];
            assert_eq!(h[i], sigmoid_scalar(z));
        }
        for i in 0..2 {
            let mut z = 0.0;
            for j in 0..2 {
                z += p.w_y.at(i, j) * h[j];
            }
            z += p.bias_y.values()[i];
            assert_eq!(y[i], sigmoid_scalar(z));
        }
    }

    #[test]
    fn tape_route_equals_pure_route() {
        let p = ElmanParams::init(3, 4, 2, 2, 23);
        let model = Model::Elman(p.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let vals: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let x = Tensor::matrix(4, 2, vals).unwrap();
        let pure = p.predict(&x).unwrap();
        let mut tape = Tape::new();
        let bound = model.bind(&mut tape);
        let pred = model.build_prediction(&mut tape, &bound, &x).unwrap();
        assert_eq!(tape.value(pred).values(), pure.as_slice());
    }
}
