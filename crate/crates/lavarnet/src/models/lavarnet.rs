//! The lagged-variable representation family.
//!
//! For a window `X` with `T` steps of `K` variables, each (step, variable)
//! pair gets its own hidden state:
//!
//! ```text
//! h[t,k] = sigmoid(W_step * X[t,:] + W_series * X[:,k] (+ recurrence) + b_h)
//! y[t,k] = sigmoid(W_out * h[t,k] + b_out)
//! ```
//!
//! The plain variant has no recurrence term, the recurrent variant adds
//! `U * h[t-1,k]`, the fully recurrent variant adds `U_full * h[t-1,:]`
//! (concatenation over all variables). Per target `i`, every `y[t,k]` is
//! scaled by the trainable weight `A_i[t,k]`, the scaled vectors are
//! concatenated step-major (t outer, k inner) into one `T*K*n` vector, and an
//! affine head with no output activation produces the forecast. After
//! training, the large-|A_i| cells mark the lagged variables driving target i.
//!
//! Window rows are ordered oldest first: row `t` (0-based) is lag `T - t`
//! relative to the predicted step.

use super::init::InitRng;
use super::{BoundModel, Variant};
use crate::error::{Error, Result};
use crate::tensor::{matvec_raw, sigmoid_scalar, NodeId, Tape, Tensor};

/// One dense output head: an affine map to a single forecast value.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineHead {
    /// `1 x (T*K*n)` weight row.
    pub weight: Tensor,
    /// Single bias value.
    pub bias: Tensor,
}

/// All trainable tensors of one family member.
#[derive(Debug, Clone, PartialEq)]
pub struct LavarnetParams {
    pub variant: Variant,
    pub n: usize,
    pub t_steps: usize,
    pub k_vars: usize,
    pub k_out: usize,
    /// `n x K`; applied to the cross-variable snapshot `X[t,:]`.
    pub w_step: Tensor,
    /// `n x T`; applied to the single-variable history `X[:,k]`.
    pub w_series: Tensor,
    /// `n x n`; recurrent variant only.
    pub recur: Option<Tensor>,
    /// `n x (n*K)`; fully recurrent variant only.
    pub recur_full: Option<Tensor>,
    /// Length `n`.
    pub bias_h: Tensor,
    /// `n x n`.
    pub w_out: Tensor,
    /// Length `n`.
    pub bias_out: Tensor,
    /// One `T x K` weight matrix per target.
    pub lag_weights: Vec<Tensor>,
    /// One affine head per target.
    pub heads: Vec<AffineHead>,
}

impl LavarnetParams {
    /// Deterministic initialization; see [`super::init`] for the scheme.
    pub fn init(variant: Variant, n: usize, t_steps: usize, k_vars: usize, k_out: usize, seed: u64) -> Self {
        let mut rng = InitRng::new(seed);
        let w_step = rng.weight(n, k_vars, k_vars);
        let w_series = rng.weight(n, t_steps, t_steps);
        let recur = (variant == Variant::RLavarnet).then(|| rng.weight(n, n, n));
        let recur_full = (variant == Variant::FrLavarnet).then(|| rng.weight(n, n * k_vars, n * k_vars));
        let bias_h = rng.zero_vector(n);
        let w_out = rng.weight(n, n, n);
        let bias_out = rng.zero_vector(n);
        let lag_weights = (0..k_out)
            .map(|_| rng.uniform_matrix(t_steps, k_vars, 0.1))
            .collect();
        let heads = (0..k_out)
            .map(|_| {
                let fan_in = t_steps * k_vars * n;
                AffineHead {
                    weight: rng.weight(1, fan_in, fan_in),
                    bias: rng.zero_vector(1),
                }
            })
            .collect();
        LavarnetParams {
            variant,
            n,
            t_steps,
            k_vars,
            k_out,
            w_step,
            w_series,
            recur,
            recur_full,
            bias_h,
            w_out,
            bias_out,
            lag_weights,
            heads,
        }
    }

    /// Check shape and variant consistency (used after checkpoint loading).
    pub fn validate(&self) -> Result<()> {
        let (n, t, k, k_out) = (self.n, self.t_steps, self.k_vars, self.k_out);
        let expect = |cond: bool, what: &str| {
            if cond {
                Ok(())
            } else {
                Err(Error::Contract(format!("inconsistent params: {what}")))
            }
        };
        expect(self.w_step.shape() == [n, k], "w_step shape")?;
        expect(self.w_series.shape() == [n, t], "w_series shape")?;
        match self.variant {
            Variant::Lavarnet => {
                expect(self.recur.is_none() && self.recur_full.is_none(), "no recurrence expected")?
            }
            Variant::RLavarnet => {
                expect(self.recur.is_some() && self.recur_full.is_none(), "recur expected")?;
                expect(self.recur.as_ref().unwrap().shape() == [n, n], "recur shape")?;
            }
            Variant::FrLavarnet => {
                expect(self.recur.is_none() && self.recur_full.is_some(), "recur_full expected")?;
                expect(self.recur_full.as_ref().unwrap().shape() == [n, n * k], "recur_full shape")?;
            }
        }
        expect(self.bias_h.shape() == [n], "bias_h shape")?;
        expect(self.w_out.shape() == [n, n], "w_out shape")?;
        expect(self.bias_out.shape() == [n], "bias_out shape")?;
        expect(self.lag_weights.len() == k_out, "one lag matrix per target")?;
        expect(self.heads.len() == k_out, "one head per target")?;
        for a in &self.lag_weights {
            expect(a.shape() == [t, k], "lag matrix shape")?;
        }
        for h in &self.heads {
            expect(h.weight.shape() == [1, t * k * n], "head weight shape")?;
            expect(h.bias.shape() == [1], "head bias shape")?;
        }
        Ok(())
    }

    /// Named tensors in canonical order (shared by binding, the optimizer
    /// state and the checkpoint format).
    pub fn tensors(&self) -> Vec<(String, &Tensor)> {
        let mut out: Vec<(String, &Tensor)> = vec![
            ("w_step".into(), &self.w_step),
            ("w_series".into(), &self.w_series),
        ];
        if let Some(u) = &self.recur {
            out.push(("recur".into(), u));
        }
        if let Some(u) = &self.recur_full {
            out.push(("recur_full".into(), u));
        }
        out.push(("bias_h".into(), &self.bias_h));
        out.push(("w_out".into(), &self.w_out));
        out.push(("bias_out".into(), &self.bias_out));
        for (i, a) in self.lag_weights.iter().enumerate() {
            out.push((format!("lag_{i}"), a));
        }
        for (i, h) in self.heads.iter().enumerate() {
            out.push((format!("head_w_{i}"), &h.weight));
            out.push((format!("head_b_{i}"), &h.bias));
        }
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor)> {
        let mut out: Vec<(String, &mut Tensor)> = vec![
            ("w_step".into(), &mut self.w_step),
            ("w_series".into(), &mut self.w_series),
        ];
        if let Some(u) = &mut self.recur {
            out.push(("recur".into(), u));
        }
        if let Some(u) = &mut self.recur_full {
            out.push(("recur_full".into(), u));
        }
        out.push(("bias_h".into(), &mut self.bias_h));
        out.push(("w_out".into(), &mut self.w_out));
        out.push(("bias_out".into(), &mut self.bias_out));
        for (i, a) in self.lag_weights.iter_mut().enumerate() {
            out.push((format!("lag_{i}"), a));
        }
        for (i, h) in self.heads.iter_mut().enumerate() {
            out.push((format!("head_w_{i}"), &mut h.weight));
            out.push((format!("head_b_{i}"), &mut h.bias));
        }
        out
    }

    /// Tape-free forecast; bitwise equal to the tape route.
    pub fn predict(&self, window: &Tensor) -> Result<Vec<f64>> {
        let grid = self.forward_grid(window)?;
        let mut out = Vec::with_capacity(self.k_out);
        for i in 0..self.k_out {
            out.push(self.head_output(i, &grid));
        }
        Ok(out)
    }

    /// All hidden states and output vectors for one window.
    pub fn forward_grid(&self, window: &Tensor) -> Result<HiddenStateGrid> {
        self.check_window(window)?;
        let (n, t_steps, k_vars) = (self.n, self.t_steps, self.k_vars);
        let mut h: Vec<Vec<f64>> = Vec::with_capacity(t_steps * k_vars);
        let mut y: Vec<Vec<f64>> = Vec::with_capacity(t_steps * k_vars);
        let cols: Vec<Vec<f64>> = (0..k_vars).map(|k| window_column(window, k)).collect();
        for t in 0..t_steps {
            for k in 0..k_vars {
                let mut pre = pre_activation_base(window, &cols[k], t, self);
                match self.variant {
                    Variant::Lavarnet => {}
                    Variant::RLavarnet => {
                        let zeros = vec![0.0; n];
                        let prev = if t == 0 { &zeros } else { &h[(t - 1) * k_vars + k] };
                        add_assign(&mut pre, &matvec_raw(self.recur.as_ref().unwrap(), prev));
                    }
                    Variant::FrLavarnet => {
                        let prev_all = if t == 0 {
                            vec![0.0; n * k_vars]
                        } else {
                            concat_states(&h[(t - 1) * k_vars..t * k_vars])
                        };
                        add_assign(&mut pre, &matvec_raw(self.recur_full.as_ref().unwrap(), &prev_all));
                    }
                }
                add_assign(&mut pre, self.bias_h.values());
                let hk: Vec<f64> = pre.iter().map(|&v| sigmoid_scalar(v)).collect();
                let yk = output_vector(&hk, self);
                h.push(hk);
                y.push(yk);
            }
        }
        Ok(HiddenStateGrid {
            t_steps,
            k_vars,
            h,
            y,
        })
    }

    /// Forecast for target `i` given a computed grid: scale each output
    /// vector by `A_i[t,k]`, concatenate step-major, apply the affine head.
    fn head_output(&self, i: usize, grid: &HiddenStateGrid) -> f64 {
        let a = &self.lag_weights[i];
        let head = &self.heads[i];
        let w = head.weight.values();
        let mut acc = 0.0;
        let mut offset = 0;
        for t in 0..self.t_steps {
            for k in 0..self.k_vars {
                let scale = a.at(t, k);
                for &yv in grid.y(t, k) {
                    acc += w[offset] * (scale * yv);
                    offset += 1;
                }
            }
        }
        acc + head.bias.values()[0]
    }

    fn check_window(&self, window: &Tensor) -> Result<()> {
        if window.shape() != [self.t_steps, self.k_vars] {
            return Err(Error::dim(
                "predict",
                window.shape(),
                &[self.t_steps, self.k_vars],
            ));
        }
        Ok(())
    }

    /// Tape route used by training; mirrors [`LavarnetParams::predict`]
    /// operation for operation.
    pub fn build_prediction(&self, tape: &mut Tape, bound: &BoundModel, window: &Tensor) -> Result<NodeId> {
        self.check_window(window)?;
        let b = BoundLagged::from_bound(self, bound);
        let (n, t_steps, k_vars) = (self.n, self.t_steps, self.k_vars);

        let row_nodes: Vec<NodeId> = (0..t_steps)
            .map(|t| tape.input(Tensor::vector(window_row(window, t).to_vec())))
            .collect();
        let col_nodes: Vec<NodeId> = (0..k_vars)
            .map(|k| tape.input(Tensor::vector(window_column(window, k))))
            .collect();

        let mut h_nodes: Vec<NodeId> = Vec::with_capacity(t_steps * k_vars);
        let mut y_nodes: Vec<NodeId> = Vec::with_capacity(t_steps * k_vars);
        let zero_state = tape.input(Tensor::vector(vec![0.0; n]));
        let zero_state_full = match self.variant {
            Variant::FrLavarnet => Some(tape.input(Tensor::vector(vec![0.0; n * k_vars]))),
            _ => None,
        };
        for t in 0..t_steps {
            // For the fully recurrent variant all of the previous step's
            // hidden states are concatenated once per step, ascending k.
            let prev_all = match self.variant {
                Variant::FrLavarnet => Some(if t == 0 {
                    zero_state_full.unwrap()
                } else {
                    tape.concat(&h_nodes[(t - 1) * k_vars..t * k_vars])?
                }),
                _ => None,
            };
            for k in 0..k_vars {
                let m_step = tape.matvec(b.w_step, row_nodes[t])?;
                let m_series = tape.matvec(b.w_series, col_nodes[k])?;
                let mut s = tape.add(m_step, m_series)?;
                match self.variant {
                    Variant::Lavarnet => {}
                    Variant::RLavarnet => {
                        let prev = if t == 0 { zero_state } else { h_nodes[(t - 1) * k_vars + k] };
                        let r = tape.matvec(b.recur.unwrap(), prev)?;
                        s = tape.add(s, r)?;
                    }
                    Variant::FrLavarnet => {
                        let r = tape.matvec(b.recur_full.unwrap(), prev_all.unwrap())?;
                        s = tape.add(s, r)?;
                    }
                }
                s = tape.add(s, b.bias_h)?;
                let hk = tape.sigmoid(s);
                let o = tape.affine(b.w_out, hk, b.bias_out)?;
                let yk = tape.sigmoid(o);
                h_nodes.push(hk);
                y_nodes.push(yk);
            }
        }

        let mut head_outputs = Vec::with_capacity(self.k_out);
        for i in 0..self.k_out {
            let mut scaled = Vec::with_capacity(t_steps * k_vars);
            for t in 0..t_steps {
                for k in 0..k_vars {
                    let a = tape.entry(b.lag[i], t, k)?;
                    scaled.push(tape.scale(a, y_nodes[t * k_vars + k])?);
                }
            }
            let stacked = tape.concat(&scaled)?;
            let out = tape.affine(b.heads[i].0, stacked, b.heads[i].1)?;
            head_outputs.push(out);
        }
        tape.concat(&head_outputs)
    }
}

/// Tape handles split back into named roles.
struct BoundLagged {
    w_step: NodeId,
    w_series: NodeId,
    recur: Option<NodeId>,
    recur_full: Option<NodeId>,
    bias_h: NodeId,
    w_out: NodeId,
    bias_out: NodeId,
    lag: Vec<NodeId>,
    heads: Vec<(NodeId, NodeId)>,
}

impl BoundLagged {
    fn from_bound(p: &LavarnetParams, bound: &BoundModel) -> BoundLagged {
        let ids = &bound.ids;
        let mut it = ids.iter().copied();
        let w_step = it.next().unwrap();
        let w_series = it.next().unwrap();
        let recur = matches!(p.variant, Variant::RLavarnet).then(|| it.next().unwrap());
        let recur_full = matches!(p.variant, Variant::FrLavarnet).then(|| it.next().unwrap());
        let bias_h = it.next().unwrap();
        let w_out = it.next().unwrap();
        let bias_out = it.next().unwrap();
        let lag: Vec<NodeId> = (0..p.k_out).map(|_| it.next().unwrap()).collect();
        let heads: Vec<(NodeId, NodeId)> = (0..p.k_out)
            .map(|_| (it.next().unwrap(), it.next().unwrap()))
            .collect();
        debug_assert!(it.next().is_none());
        BoundLagged {
            w_step,
            w_series,
            recur,
            recur_full,
            bias_h,
            w_out,
            bias_out,
            lag,
            heads,
        }
    }
}

/// The `T*K` hidden states and output vectors of one forward pass.
#[derive(Debug, Clone)]
pub struct HiddenStateGrid {
    t_steps: usize,
    k_vars: usize,
    h: Vec<Vec<f64>>,
    y: Vec<Vec<f64>>,
}

impl HiddenStateGrid {
    pub fn h(&self, t: usize, k: usize) -> &[f64] {
        &self.h[t * self.k_vars + k]
    }

    pub fn y(&self, t: usize, k: usize) -> &[f64] {
        &self.y[t * self.k_vars + k]
    }

    pub fn t_steps(&self) -> usize {
        self.t_steps
    }

    pub fn k_vars(&self) -> usize {
        self.k_vars
    }
}

/// Hidden state of the non-recurrent variant for window row `t`, variable `k`
/// (both 0-based).
pub fn lavarnet_hidden(window: &Tensor, t: usize, k: usize, p: &LavarnetParams) -> Result<Vec<f64>> {
    check_index(window, t, k, p)?;
    let col = window_column(window, k);
    let mut pre = pre_activation_base(window, &col, t, p);
    add_assign(&mut pre, p.bias_h.values());
    Ok(pre.into_iter().map(sigmoid_scalar).collect())
}

/// Hidden state of the recurrent variant; `h_prev_k` is the previous step's
/// state of the same variable (all zeros for the first row).
pub fn rlavarnet_hidden(
    window: &Tensor,
    t: usize,
    k: usize,
    p: &LavarnetParams,
    h_prev_k: &[f64],
) -> Result<Vec<f64>> {
    check_index(window, t, k, p)?;
    let recur = p
        .recur
        .as_ref()
        .ok_or_else(|| Error::Contract("params carry no recurrence matrix".into()))?;
    if h_prev_k.len() != p.n {
        return Err(Error::dim("rlavarnet_hidden", &[h_prev_k.len()], &[p.n]));
    }
    let col = window_column(window, k);
    let mut pre = pre_activation_base(window, &col, t, p);
    add_assign(&mut pre, &matvec_raw(recur, h_prev_k));
    add_assign(&mut pre, p.bias_h.values());
    Ok(pre.into_iter().map(sigmoid_scalar).collect())
}

/// Hidden state of the fully recurrent variant; `h_prev_all` concatenates the
/// previous step's states of all variables in ascending variable order (all
/// zeros for the first row).
pub fn frlavarnet_hidden(
    window: &Tensor,
    t: usize,
    k: usize,
    p: &LavarnetParams,
    h_prev_all: &[f64],
) -> Result<Vec<f64>> {
    check_index(window, t, k, p)?;
    let recur_full = p
        .recur_full
        .as_ref()
        .ok_or_else(|| Error::Contract("params carry no full recurrence matrix".into()))?;
    if h_prev_all.len() != p.n * p.k_vars {
        return Err(Error::dim(
            "frlavarnet_hidden",
            &[h_prev_all.len()],
            &[p.n * p.k_vars],
        ));
    }
    let col = window_column(window, k);
    let mut pre = pre_activation_base(window, &col, t, p);
    add_assign(&mut pre, &matvec_raw(recur_full, h_prev_all));
    add_assign(&mut pre, p.bias_h.values());
    Ok(pre.into_iter().map(sigmoid_scalar).collect())
}

/// Output vector for one hidden state.
pub fn output_vector(h: &[f64], p: &LavarnetParams) -> Vec<f64> {
    let mut pre = matvec_raw(&p.w_out, h);
    add_assign(&mut pre, p.bias_out.values());
    pre.into_iter().map(sigmoid_scalar).collect()
}

fn check_index(window: &Tensor, t: usize, k: usize, p: &LavarnetParams) -> Result<()> {
    if window.shape() != [p.t_steps, p.k_vars] {
        return Err(Error::dim("hidden", window.shape(), &[p.t_steps, p.k_vars]));
    }
    if t >= p.t_steps || k >= p.k_vars {
        return Err(Error::Contract(format!(
            "index (t={t}, k={k}) out of range for T={}, K={}",
            p.t_steps, p.k_vars
        )));
    }
    Ok(())
}

/// `W_step * X[t,:] + W_series * X[:,k]`, summed in that order.
fn pre_activation_base(window: &Tensor, col_k: &[f64], t: usize, p: &LavarnetParams) -> Vec<f64> {
    let mut pre = matvec_raw(&p.w_step, window_row(window, t));
    add_assign(&mut pre, &matvec_raw(&p.w_series, col_k));
    pre
}

fn add_assign(target: &mut [f64], rhs: &[f64]) {
    for (t, r) in target.iter_mut().zip(rhs) {
        *t += r;
    }
}

fn concat_states(states: &[Vec<f64>]) -> Vec<f64> {
    let mut out = Vec::with_capacity(states.iter().map(Vec::len).sum());
    for s in states {
        out.extend_from_slice(s);
    }
    out
}

pub(crate) fn window_row(window: &Tensor, t: usize) -> &[f64] {
    let k = window.shape()[1];
    &window.values()[t * k..(t + 1) * k]
}

pub(crate) fn window_column(window: &Tensor, k: usize) -> Vec<f64> {
    let (rows, cols) = (window.shape()[0], window.shape()[1]);
    (0..rows).map(|t| window.values()[t * cols + k]).collect()
}
