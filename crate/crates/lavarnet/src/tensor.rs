//! Dense tensors and a reverse-mode differentiation tape.
//!
//! The tape is rebuilt for every forward pass (dynamic graph): each operation
//! evaluates eagerly when it is recorded, so by the time [`Tape::backward`]
//! runs, every node already holds its forward value. Nodes are stored in
//! construction order, which is also a topological order, so the backward
//! sweep is a single reverse iteration.
//!
//! Everything is `f64`. The models in this crate are tiny; precision and
//! bitwise reproducibility matter more than throughput.

use crate::error::{Error, Result};

/// Numerically stable logistic function.
///
/// The negative branch evaluates `e^x / (1 + e^x)`, which keeps the result
/// strictly positive down to the underflow limit; the floor keeps it positive
/// even past that. Deep positive saturation (x above ~36.7) rounds to exactly
/// 1.0 in f64 — no value strictly between 1 - 2^-53 and 1 exists.
pub fn sigmoid_scalar(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        (e / (1.0 + e)).max(f64::MIN_POSITIVE)
    }
}

/// A dense row-major tensor of `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor {
    shape: Vec<usize>,
    values: Vec<f64>,
}

impl Tensor {
    pub fn new(shape: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let expect: usize = shape.iter().product();
        if shape.contains(&0) {
            return Err(Error::Contract(format!(
                "tensor dimensions must be positive, got {shape:?}"
            )));
        }
        if values.len() != expect {
            return Err(Error::dim("Tensor::new", &shape, &[values.len()]));
        }
        Ok(Tensor { shape, values })
    }

    pub fn zeros(shape: Vec<usize>) -> Self {
        let n: usize = shape.iter().product();
        Tensor {
            shape,
            values: vec![0.0; n],
        }
    }

    pub fn scalar(v: f64) -> Self {
        Tensor {
            shape: vec![1],
            values: vec![v],
        }
    }

    pub fn vector(values: Vec<f64>) -> Self {
        Tensor {
            shape: vec![values.len()],
            values,
        }
    }

    /// Row-major `rows x cols` matrix.
    pub fn matrix(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        Tensor::new(vec![rows, cols], values)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Matrix entry accessor; valid only for rank-2 tensors.
    pub fn at(&self, row: usize, col: usize) -> f64 {
        debug_assert_eq!(self.shape.len(), 2);
        self.values[row * self.shape[1] + col]
    }

    pub fn is_matrix(&self) -> bool {
        self.shape.len() == 2
    }

    pub fn is_vector(&self) -> bool {
        self.shape.len() == 1
    }

    pub fn is_scalar(&self) -> bool {
        self.values.len() == 1
    }

    pub fn all_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }
}

/// Identifier of a node on a [`Tape`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone)]
enum Op {
    /// Non-trainable leaf (data, constants).
    Input,
    /// Trainable leaf; receives a gradient slot.
    Param,
    /// Matrix-vector product `W x`.
    MatVec { w: NodeId, x: NodeId },
    /// Elementwise sum of two same-shape tensors.
    Add { a: NodeId, b: NodeId },
    /// Elementwise product of two same-shape tensors.
    Mul { a: NodeId, b: NodeId },
    /// Elementwise logistic function.
    Sigmoid { x: NodeId },
    /// Elementwise hyperbolic tangent.
    Tanh { x: NodeId },
    /// Scalar projection of one matrix cell.
    Entry { m: NodeId, row: usize, col: usize },
    /// Scalar-vector product `s * v`.
    Scale { s: NodeId, v: NodeId },
    /// Concatenation of vectors in argument order.
    Concat { parts: Vec<NodeId> },
    /// Affine map `W x + b`.
    Affine { w: NodeId, x: NodeId, b: NodeId },
    /// Mean squared error between two same-length vectors; scalar output.
    Mse { pred: NodeId, target: NodeId },
    /// Arithmetic mean of scalar nodes; scalar output.
    MeanScalars { parts: Vec<NodeId> },
}

#[derive(Debug, Clone)]
struct Node {
    op: Op,
    value: Tensor,
}

/// Gradients of one scalar loss with respect to every node of a tape.
#[derive(Debug)]
pub struct Gradients {
    node_grads: Vec<Vec<f64>>,
    params: Vec<NodeId>,
}

impl Gradients {
    /// Gradient of the loss with respect to the given node's values.
    pub fn wrt(&self, id: NodeId) -> &[f64] {
        &self.node_grads[id.0]
    }

    /// Gradient slots of the trainable leaves, in registration order.
    pub fn param_grads(&self) -> impl Iterator<Item = (NodeId, &[f64])> {
        self.params
            .iter()
            .map(move |&id| (id, self.node_grads[id.0].as_slice()))
    }
}

/// A reverse-mode tape; the compute graph of one forward pass.
#[derive(Debug, Default)]
pub struct Tape {
    nodes: Vec<Node>,
    params: Vec<NodeId>,
}

impl Tape {
    pub fn new() -> Self {
        Tape::default()
    }

    fn push(&mut self, op: Op, value: Tensor) -> NodeId {
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { op, value });
        id
    }

    /// Record a non-trainable leaf.
    pub fn input(&mut self, value: Tensor) -> NodeId {
        self.push(Op::Input, value)
    }

    /// Record a trainable leaf. Its gradient slot has the same shape.
    pub fn param(&mut self, value: Tensor) -> NodeId {
        let id = self.push(Op::Param, value);
        self.params.push(id);
        id
    }

    /// Forward value of a node.
    pub fn value(&self, id: NodeId) -> &Tensor {
        &self.nodes[id.0].value
    }

    /// Number of nodes on the tape.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Trainable leaves in registration order.
    pub fn params(&self) -> &[NodeId] {
        &self.params
    }

    /// Total number of trainable scalars (gradient slots) registered.
    pub fn param_scalar_count(&self) -> usize {
        self.params.iter().map(|&id| self.nodes[id.0].value.len()).sum()
    }

    /// `W x` for a rank-2 `w` and a vector `x` with conforming shapes.
    pub fn matvec(&mut self, w: NodeId, x: NodeId) -> Result<NodeId> {
        let (wv, xv) = (self.value(w), self.value(x));
        if !wv.is_matrix() || !xv.is_vector() || wv.shape()[1] != xv.shape()[0] {
            return Err(Error::dim("matvec", wv.shape(), xv.shape()));
        }
        let out = matvec_raw(wv, xv.values());
        Ok(self.push(Op::MatVec { w, x }, Tensor::vector(out)))
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let (av, bv) = (self.value(a), self.value(b));
        if av.shape() != bv.shape() {
            return Err(Error::dim("add", av.shape(), bv.shape()));
        }
        let vals: Vec<f64> = av
            .values()
            .iter()
            .zip(bv.values())
            .map(|(x, y)| x + y)
            .collect();
        let shape = av.shape().to_vec();
        Ok(self.push(Op::Add { a, b }, Tensor { shape, values: vals }))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> Result<NodeId> {
        let (av, bv) = (self.value(a), self.value(b));
        if av.shape() != bv.shape() {
            return Err(Error::dim("mul", av.shape(), bv.shape()));
        }
        let vals: Vec<f64> = av
            .values()
            .iter()
            .zip(bv.values())
            .map(|(x, y)| x * y)
            .collect();
        let shape = av.shape().to_vec();
        Ok(self.push(Op::Mul { a, b }, Tensor { shape, values: vals }))
    }

    pub fn sigmoid(&mut self, x: NodeId) -> NodeId {
        let xv = self.value(x);
        let vals: Vec<f64> = xv.values().iter().map(|&v| sigmoid_scalar(v)).collect();
        let shape = xv.shape().to_vec();
        self.push(Op::Sigmoid { x }, Tensor { shape, values: vals })
    }

    pub fn tanh(&mut self, x: NodeId) -> NodeId {
        let xv = self.value(x);
        let vals: Vec<f64> = xv.values().iter().map(|&v| v.tanh()).collect();
        let shape = xv.shape().to_vec();
        self.push(Op::Tanh { x }, Tensor { shape, values: vals })
    }

    /// Scalar node holding cell `(row, col)` of a rank-2 node.
    pub fn entry(&mut self, m: NodeId, row: usize, col: usize) -> Result<NodeId> {
        let mv = self.value(m);
        if !mv.is_matrix() || row >= mv.shape()[0] || col >= mv.shape()[1] {
            return Err(Error::Contract(format!(
                "entry ({row}, {col}) out of range for shape {:?}",
                mv.shape()
            )));
        }
        let v = mv.at(row, col);
        Ok(self.push(Op::Entry { m, row, col }, Tensor::scalar(v)))
    }

    /// `s * v` for a scalar node `s` and any node `v`.
    pub fn scale(&mut self, s: NodeId, v: NodeId) -> Result<NodeId> {
        let sv = self.value(s);
        if !sv.is_scalar() {
            return Err(Error::dim("scale", sv.shape(), self.value(v).shape()));
        }
        let c = sv.values()[0];
        let vv = self.value(v);
        let vals: Vec<f64> = vv.values().iter().map(|&x| c * x).collect();
        let shape = vv.shape().to_vec();
        Ok(self.push(Op::Scale { s, v }, Tensor { shape, values: vals }))
    }

    /// Concatenate vector nodes in argument order.
    pub fn concat(&mut self, parts: &[NodeId]) -> Result<NodeId> {
        if parts.is_empty() {
            return Err(Error::Contract("concat of zero parts".into()));
        }
        let mut vals = Vec::new();
        for &p in parts {
            let pv = self.value(p);
            if !pv.is_vector() {
                return Err(Error::Contract(format!(
                    "concat expects vectors, got shape {:?}",
                    pv.shape()
                )));
            }
            vals.extend_from_slice(pv.values());
        }
        Ok(self.push(
            Op::Concat {
                parts: parts.to_vec(),
            },
            Tensor::vector(vals),
        ))
    }

    /// `W x + b`.
    pub fn affine(&mut self, w: NodeId, x: NodeId, b: NodeId) -> Result<NodeId> {
        let (wv, xv, bv) = (self.value(w), self.value(x), self.value(b));
        if !wv.is_matrix() || !xv.is_vector() || wv.shape()[1] != xv.shape()[0] {
            return Err(Error::dim("affine", wv.shape(), xv.shape()));
        }
        if !bv.is_vector() || bv.shape()[0] != wv.shape()[0] {
            return Err(Error::dim("affine", wv.shape(), bv.shape()));
        }
        let mut out = matvec_raw(wv, xv.values());
        for (o, bias) in out.iter_mut().zip(bv.values()) {
            *o += bias;
        }
        Ok(self.push(Op::Affine { w, x, b }, Tensor::vector(out)))
    }

    /// Mean squared error between two same-length vectors; scalar output.
    pub fn mse(&mut self, pred: NodeId, target: NodeId) -> Result<NodeId> {
        let (pv, tv) = (self.value(pred), self.value(target));
        if pv.shape() != tv.shape() || !pv.is_vector() {
            return Err(Error::dim("mse", pv.shape(), tv.shape()));
        }
        let m = pv.len() as f64;
        let sum: f64 = pv
            .values()
            .iter()
            .zip(tv.values())
            .map(|(p, t)| (p - t) * (p - t))
            .sum();
        Ok(self.push(Op::Mse { pred, target }, Tensor::scalar(sum / m)))
    }

    /// Arithmetic mean of scalar nodes.
    pub fn mean_scalars(&mut self, parts: &[NodeId]) -> Result<NodeId> {
        if parts.is_empty() {
            return Err(Error::Contract("mean of zero scalars".into()));
        }
        let mut sum = 0.0;
        for &p in parts {
            let pv = self.value(p);
            if !pv.is_scalar() {
                return Err(Error::Contract(format!(
                    "mean_scalars expects scalars, got shape {:?}",
                    pv.shape()
                )));
            }
            sum += pv.values()[0];
        }
        Ok(self.push(
            Op::MeanScalars {
                parts: parts.to_vec(),
            },
            Tensor::scalar(sum / parts.len() as f64),
        ))
    }

    /// Reverse accumulation from a scalar loss node. Gradient slots are
    /// zero-initialized on every call; the tape carries no cross-call state.
    pub fn backward(&self, loss: NodeId) -> Result<Gradients> {
        if !self.value(loss).is_scalar() {
            return Err(Error::Contract(format!(
                "backward requires a scalar loss, got shape {:?}",
                self.value(loss).shape()
            )));
        }
        let mut grads: Vec<Vec<f64>> = self
            .nodes
            .iter()
            .map(|n| vec![0.0; n.value.len()])
            .collect();
        grads[loss.0][0] = 1.0;

        for idx in (0..=loss.0).rev() {
            let node = &self.nodes[idx];
            // Split off this node's gradient so operand slots can be borrowed mutably.
            let g = std::mem::take(&mut grads[idx]);
            match &node.op {
                Op::Input | Op::Param => {}
                Op::MatVec { w, x } => {
                    let wv = &self.nodes[w.0].value;
                    let xv = self.nodes[x.0].value.values().to_vec();
                    let (rows, cols) = (wv.shape()[0], wv.shape()[1]);
                    for i in 0..rows {
                        let gi = g[i];
                        for j in 0..cols {
                            grads[w.0][i * cols + j] += gi * xv[j];
                        }
                    }
                    let wvals = self.nodes[w.0].value.values();
                    for j in 0..cols {
                        let mut acc = 0.0;
                        for i in 0..rows {
                            acc += g[i] * wvals[i * cols + j];
                        }
                        grads[x.0][j] += acc;
                    }
                }
                Op::Add { a, b } => {
                    for (slot, gi) in grads[a.0].iter_mut().zip(&g) {
                        *slot += gi;
                    }
                    for (slot, gi) in grads[b.0].iter_mut().zip(&g) {
                        *slot += gi;
                    }
                }
                Op::Mul { a, b } => {
                    let av = self.nodes[a.0].value.values().to_vec();
                    let bv = self.nodes[b.0].value.values().to_vec();
                    for ((slot, gi), bi) in grads[a.0].iter_mut().zip(&g).zip(&bv) {
                        *slot += gi * bi;
                    }
                    for ((slot, gi), ai) in grads[b.0].iter_mut().zip(&g).zip(&av) {
                        *slot += gi * ai;
                    }
                }
                Op::Sigmoid { x } => {
                    let yv = node.value.values();
                    for ((slot, gi), yi) in grads[x.0].iter_mut().zip(&g).zip(yv) {
                        *slot += gi * yi * (1.0 - yi);
                    }
                }
                Op::Tanh { x } => {
                    let yv = node.value.values();
                    for ((slot, gi), yi) in grads[x.0].iter_mut().zip(&g).zip(yv) {
                        *slot += gi * (1.0 - yi * yi);
                    }
                }
                Op::Entry { m, row, col } => {
                    let cols = self.nodes[m.0].value.shape()[1];
                    grads[m.0][row * cols + col] += g[0];
                }
                Op::Scale { s, v } => {
                    let sv = self.nodes[s.0].value.values()[0];
                    let vv = self.nodes[v.0].value.values().to_vec();
                    let dot: f64 = g.iter().zip(&vv).map(|(gi, vi)| gi * vi).sum();
                    grads[s.0][0] += dot;
                    for (slot, gi) in grads[v.0].iter_mut().zip(&g) {
                        *slot += gi * sv;
                    }
                }
                Op::Concat { parts } => {
                    let mut offset = 0;
                    for &p in parts {
                        let plen = self.nodes[p.0].value.len();
                        for (slot, gi) in grads[p.0].iter_mut().zip(&g[offset..offset + plen]) {
                            *slot += gi;
                        }
                        offset += plen;
                    }
                }
                Op::Affine { w, x, b } => {
                    let wv = &self.nodes[w.0].value;
                    let xv = self.nodes[x.0].value.values().to_vec();
                    let (rows, cols) = (wv.shape()[0], wv.shape()[1]);
                    for i in 0..rows {
                        let gi = g[i];
                        for j in 0..cols {
                            grads[w.0][i * cols + j] += gi * xv[j];
                        }
                    }
                    let wvals = self.nodes[w.0].value.values();
                    for j in 0..cols {
                        let mut acc = 0.0;
                        for i in 0..rows {
                            acc += g[i] * wvals[i * cols + j];
                        }
                        grads[x.0][j] += acc;
                    }
                    for (slot, gi) in grads[b.0].iter_mut().zip(&g) {
                        *slot += gi;
                    }
                }
                Op::Mse { pred, target } => {
                    let pv = self.nodes[pred.0].value.values().to_vec();
                    let tv = self.nodes[target.0].value.values().to_vec();
                    let scale = 2.0 / pv.len() as f64 * g[0];
                    for ((slot, pi), ti) in grads[pred.0].iter_mut().zip(&pv).zip(&tv) {
                        *slot += scale * (pi - ti);
                    }
                    for ((slot, pi), ti) in grads[target.0].iter_mut().zip(&pv).zip(&tv) {
                        *slot -= scale * (pi - ti);
                    }
                }
                Op::MeanScalars { parts } => {
                    let share = g[0] / parts.len() as f64;
                    for &p in parts {
                        grads[p.0][0] += share;
                    }
                }
            }
            grads[idx] = g;
        }

        Ok(Gradients {
            node_grads: grads,
            params: self.params.clone(),
        })
    }
}

/// Plain matrix-vector product used by both the tape and the tape-free
/// forward paths; a single implementation keeps the two routes bitwise equal.
pub fn matvec_raw(w: &Tensor, x: &[f64]) -> Vec<f64> {
    let (rows, cols) = (w.shape()[0], w.shape()[1]);
    debug_assert_eq!(cols, x.len());
    let wv = w.values();
    let mut out = vec![0.0; rows];
    for i in 0..rows {
        let mut acc = 0.0;
        let row = &wv[i * cols..(i + 1) * cols];
        for (wij, xj) in row.iter().zip(x) {
            acc += wij * xj;
        }
        out[i] = acc;
    }
    out
}
