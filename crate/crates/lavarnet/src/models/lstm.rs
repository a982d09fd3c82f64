//! Single-layer LSTM baseline.
//!
//! Standard cell: sigmoid input/forget/output gates, tanh candidate and
//! output squashing. The last hidden state feeds an affine head. The
//! forget-gate bias starts at one so early training does not erase the cell
//! state.

use super::init::InitRng;
use super::BoundModel;
use crate::error::{Error, Result};
use crate::tensor::{matvec_raw, sigmoid_scalar, NodeId, Tape, Tensor};

/// Weights of one gate: input projection, state projection, bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmGate {
    /// `n x K`.
    pub w: Tensor,
    /// `n x n`.
    pub u: Tensor,
    /// Length `n`.
    pub b: Tensor,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams {
    pub n: usize,
    pub t_steps: usize,
    pub k_vars: usize,
    pub k_out: usize,
    pub input_gate: LstmGate,
    pub forget_gate: LstmGate,
    pub candidate: LstmGate,
    pub output_gate: LstmGate,
    /// `K_out x n` readout of the last hidden state.
    pub head_w: Tensor,
    /// Length `K_out`.
    pub head_b: Tensor,
}

/// Hidden and cell state of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmState {
    pub h: Vec<f64>,
    pub c: Vec<f64>,
}

impl LstmState {
    pub fn zero(n: usize) -> Self {
        LstmState {
            h: vec![0.0; n],
            c: vec![0.0; n],
        }
    }
}

impl LstmParams {
    pub fn init(n: usize, t_steps: usize, k_vars: usize, k_out: usize, seed: u64) -> Self {
        let mut rng = InitRng::new(seed);
        let gate = |rng: &mut InitRng, forget: bool| LstmGate {
            w: rng.weight(n, k_vars, k_vars),
            u: rng.weight(n, n, n),
            b: if forget {
                rng.const_vector(n, 1.0)
            } else {
                rng.zero_vector(n)
            },
        };
        LstmParams {
            n,
            t_steps,
            k_vars,
            k_out,
            input_gate: gate(&mut rng, false),
            forget_gate: gate(&mut rng, true),
            candidate: gate(&mut rng, false),
            output_gate: gate(&mut rng, false),
            head_w: rng.weight(k_out, n, n),
            head_b: rng.zero_vector(k_out),
        }
    }

    pub fn tensors(&self) -> Vec<(String, &Tensor)> {
        let mut out = Vec::with_capacity(14);
        for (name, g) in [
            ("i", &self.input_gate),
            ("f", &self.forget_gate),
            ("c", &self.candidate),
            ("o", &self.output_gate),
        ] {
            out.push((format!("w_{name}"), &g.w));
            out.push((format!("u_{name}"), &g.u));
            out.push((format!("b_{name}"), &g.b));
        }
        out.push(("head_w".into(), &self.head_w));
        out.push(("head_b".into(), &self.head_b));
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor)> {
        let mut out: Vec<(String, &mut Tensor)> = Vec::with_capacity(14);
        for (name, g) in [
            ("i", &mut self.input_gate),
            ("f", &mut self.forget_gate),
            ("c", &mut self.candidate),
            ("o", &mut self.output_gate),
        ] {
            out.push((format!("w_{name}"), &mut g.w));
            out.push((format!("u_{name}"), &mut g.u));
            out.push((format!("b_{name}"), &mut g.b));
        }
        out.push(("head_w".into(), &mut self.head_w));
        out.push(("head_b".into(), &mut self.head_b));
        out
    }

    pub fn predict(&self, window: &Tensor) -> Result<Vec<f64>> {
        if window.shape() != [self.t_steps, self.k_vars] {
            return Err(Error::dim("predict", window.shape(), &[self.t_steps, self.k_vars]));
        }
        let mut state = LstmState::zero(self.n);
        for t in 0..self.t_steps {
            let row = &window.values()[t * self.k_vars..(t + 1) * self.k_vars];
            state = lstm_step(row, &state, self);
        }
        let mut out = matvec_raw(&self.head_w, &state.h);
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
        // Canonical order: (w,u,b) per gate i, f, c, o, then the head.
        let gate_ids = |g: usize| (ids[3 * g], ids[3 * g + 1], ids[3 * g + 2]);
        let (head_w, head_b) = (ids[12], ids[13]);

        let pre = |tape: &mut Tape, g: usize, h: NodeId, row: NodeId| -> Result<NodeId> {
            let (w, u, b) = gate_ids(g);
            let m1 = tape.matvec(w, row)?;
            let m2 = tape.matvec(u, h)?;
            let s = tape.add(m1, m2)?;
            tape.add(s, b)
        };
        let mut h = tape.input(Tensor::vector(vec![0.0; self.n]));
        let mut c = tape.input(Tensor::vector(vec![0.0; self.n]));
        for t in 0..self.t_steps {
            let row = tape.input(Tensor::vector(
                window.values()[t * self.k_vars..(t + 1) * self.k_vars].to_vec(),
            ));
            let zi = pre(tape, 0, h, row)?;
            let zf = pre(tape, 1, h, row)?;
            let zc = pre(tape, 2, h, row)?;
            let zo = pre(tape, 3, h, row)?;
            let gi = tape.sigmoid(zi);
            let gf = tape.sigmoid(zf);
            let cand = tape.tanh(zc);
            let go = tape.sigmoid(zo);
            let keep = tape.mul(gf, c)?;
            let write = tape.mul(gi, cand)?;
            c = tape.add(keep, write)?;
            let squashed = tape.tanh(c);
            h = tape.mul(go, squashed)?;
        }
        tape.affine(head_w, h, head_b)
    }
}

/// One LSTM cell update.
pub fn lstm_step(x_t: &[f64], state: &LstmState, p: &LstmParams) -> LstmState {
    debug_assert_eq!(x_t.len(), p.k_vars);
    debug_assert_eq!(state.h.len(), p.n);
    let pre = |g: &LstmGate| -> Vec<f64> {
        let mut z = matvec_raw(&g.w, x_t);
        for (zi, r) in z.iter_mut().zip(matvec_raw(&g.u, &state.h)) {
            *zi += r;
        }
        for (zi, b) in z.iter_mut().zip(g.b.values()) {
            *zi += b;
        }
        z
    };
    let gi: Vec<f64> = pre(&p.input_gate).into_iter().map(sigmoid_scalar).collect();
    let gf: Vec<f64> = pre(&p.forget_gate).into_iter().map(sigmoid_scalar).collect();
    let cand: Vec<f64> = pre(&p.candidate).into_iter().map(f64::tanh).collect();
    let go: Vec<f64> = pre(&p.output_gate).into_iter().map(sigmoid_scalar).collect();
    let mut c = vec![0.0; p.n];
    for i in 0..p.n {
        c[i] = gf[i] * state.c[i] + gi[i] * cand[i];
    }
    let h = (0..p.n).map(|i| go[i] * c[i].tanh()).collect();
    LstmState { h, c }
}
