//! Forecasting models behind one predict contract.
//!
//! The lagged-variable family (LAVARNET, R-LAVARNET, FR-LAVARNET) builds one
//! hidden state per (time step, variable) pair and learns a scalar weight per
//! lagged variable; large-magnitude weights mark the lagged variables the
//! model considers drivers. Elman RNN, LSTM and KNN serve as baselines.
//!
//! Every neural model offers two forward routes that are kept bitwise equal:
//! a tape-free `predict` for evaluation, and a tape builder used by training
//! to obtain gradients.

mod checkpoint;
mod init;
mod knn;
pub mod lavarnet;
pub mod lstm;
pub mod rnn;

pub use checkpoint::{read_checkpoint, write_checkpoint};
pub use knn::knn_predict;
pub use lavarnet::{
    frlavarnet_hidden, lavarnet_hidden, output_vector, rlavarnet_hidden, AffineHead,
    HiddenStateGrid, LavarnetParams,
};
pub use lstm::{lstm_step, LstmGate, LstmParams, LstmState};
pub use rnn::{elman_step, ElmanParams};

use crate::error::{Error, Result};
use crate::tensor::{NodeId, Tape, Tensor};

/// Which member of the lagged-variable family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// No recurrence between hidden states.
    Lavarnet,
    /// Each hidden state sees the previous step's state of the same variable.
    RLavarnet,
    /// Each hidden state sees the previous step's states of all variables.
    FrLavarnet,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Lavarnet => "lavarnet",
            Variant::RLavarnet => "rlavarnet",
            Variant::FrLavarnet => "frlavarnet",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lavarnet" => Ok(Variant::Lavarnet),
            "rlavarnet" => Ok(Variant::RLavarnet),
            "frlavarnet" => Ok(Variant::FrLavarnet),
            other => Err(Error::Contract(format!("unknown variant '{other}'"))),
        }
    }
}

/// Every model kind this crate can train or evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Lagged(Variant),
    Rnn,
    Lstm,
    Knn,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Lagged(v) => v.as_str(),
            ModelKind::Rnn => "rnn",
            ModelKind::Lstm => "lstm",
            ModelKind::Knn => "knn",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "rnn" => Ok(ModelKind::Rnn),
            "lstm" => Ok(ModelKind::Lstm),
            "knn" => Ok(ModelKind::Knn),
            other => Variant::parse(other).map(ModelKind::Lagged),
        }
    }

    pub fn is_trainable(self) -> bool {
        !matches!(self, ModelKind::Knn)
    }
}

/// A trainable model's parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Lagged(LavarnetParams),
    Elman(ElmanParams),
    Lstm(LstmParams),
}

impl Model {
    /// Deterministic initialization for any trainable kind.
    pub fn init(kind: ModelKind, n: usize, t_steps: usize, k_vars: usize, k_out: usize, seed: u64) -> Result<Model> {
        match kind {
            ModelKind::Lagged(v) => Ok(Model::Lagged(LavarnetParams::init(v, n, t_steps, k_vars, k_out, seed))),
            ModelKind::Rnn => Ok(Model::Elman(ElmanParams::init(n, t_steps, k_vars, k_out, seed))),
            ModelKind::Lstm => Ok(Model::Lstm(LstmParams::init(n, t_steps, k_vars, k_out, seed))),
            ModelKind::Knn => Err(Error::Contract("knn has no trainable parameters".into())),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Model::Lagged(p) => ModelKind::Lagged(p.variant),
            Model::Elman(_) => ModelKind::Rnn,
            Model::Lstm(_) => ModelKind::Lstm,
        }
    }

    /// `(n, t_steps, k_vars, k_out)`.
    pub fn dims(&self) -> (usize, usize, usize, usize) {
        match self {
            Model::Lagged(p) => (p.n, p.t_steps, p.k_vars, p.k_out),
            Model::Elman(p) => (p.n, p.t_steps, p.k_vars, p.k_out),
            Model::Lstm(p) => (p.n, p.t_steps, p.k_vars, p.k_out),
        }
    }

    /// Forecast the next step's target vector from a `t_steps x k_vars` window.
    pub fn predict(&self, window: &Tensor) -> Result<Vec<f64>> {
        match self {
            Model::Lagged(p) => p.predict(window),
            Model::Elman(p) => p.predict(window),
            Model::Lstm(p) => p.predict(window),
        }
    }

    /// Named tensors in canonical order. The same order is used by
    /// [`Model::bind`], the optimizer state and the checkpoint format.
    pub fn tensors(&self) -> Vec<(String, &Tensor)> {
        match self {
            Model::Lagged(p) => p.tensors(),
            Model::Elman(p) => p.tensors(),
            Model::Lstm(p) => p.tensors(),
        }
    }

    pub fn tensors_mut(&mut self) -> Vec<(String, &mut Tensor)> {
        match self {
            Model::Lagged(p) => p.tensors_mut(),
            Model::Elman(p) => p.tensors_mut(),
            Model::Lstm(p) => p.tensors_mut(),
        }
    }

    /// Number of trainable scalars.
    pub fn param_count(&self) -> usize {
        self.tensors().iter().map(|(_, t)| t.len()).sum()
    }

    /// Register all tensors on a tape (canonical order) and return the handles.
    pub fn bind(&self, tape: &mut Tape) -> BoundModel {
        let ids: Vec<NodeId> = self
            .tensors()
            .into_iter()
            .map(|(_, t)| tape.param(t.clone()))
            .collect();
        BoundModel {
            kind: self.kind(),
            dims: self.dims(),
            ids,
        }
    }

    /// Build the prediction node for one window on a tape.
    pub fn build_prediction(&self, tape: &mut Tape, bound: &BoundModel, window: &Tensor) -> Result<NodeId> {
        match self {
            Model::Lagged(p) => p.build_prediction(tape, bound, window),
            Model::Elman(p) => p.build_prediction(tape, bound, window),
            Model::Lstm(p) => p.build_prediction(tape, bound, window),
        }
    }

    /// Overwrite tensor values from gradient-sized updates produced by an
    /// optimizer; `deltas` must align with [`Model::tensors`] order.
    pub fn apply_deltas(&mut self, deltas: &[Vec<f64>]) {
        let mut tensors = self.tensors_mut();
        assert_eq!(tensors.len(), deltas.len());
        for ((_, t), d) in tensors.iter_mut().zip(deltas) {
            for (v, dv) in t.values_mut().iter_mut().zip(d) {
                *v += dv;
            }
        }
    }
}

/// Tape handles of a model's tensors, in canonical order.
#[derive(Debug, Clone)]
pub struct BoundModel {
    pub kind: ModelKind,
    pub dims: (usize, usize, usize, usize),
    pub ids: Vec<NodeId>,
}

/// Trainable-scalar count of a lagged-variable family member.
///
/// LAVARNET: nK + nT + n + n^2 + n + K_out*T*K + K_out*(T*K*n + 1);
/// R-LAVARNET adds n^2, FR-LAVARNET adds n^2*K.
pub fn param_count(variant: Variant, n: usize, t_steps: usize, k_vars: usize, k_out: usize) -> usize {
    let base = n * k_vars                       // step weights
        + n * t_steps                           // series weights
        + n                                     // hidden bias
        + n * n                                 // output-vector weights
        + n                                     // output-vector bias
        + k_out * t_steps * k_vars              // lagged-variable weights
        + k_out * (t_steps * k_vars * n + 1);   // dense heads
    match variant {
        Variant::Lavarnet => base,
        Variant::RLavarnet => base + n * n,
        Variant::FrLavarnet => base + n * n * k_vars,
    }
}
