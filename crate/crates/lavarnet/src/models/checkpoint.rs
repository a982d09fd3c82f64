//! Versioned plain-text checkpoint files.
//!
//! Layout:
//!
//! ```text
//! lavarnet checkpoint v1
//! model <kind>
//! dims n <n> t <T> k <K> k_out <K_out>
//! tensor <name> <dim0> [<dim1> ...]
//! <row-major values, space separated, shortest round-trip decimal>
//! ...
//! end
//! ```
//!
//! Values are printed in Rust's shortest round-trip form, so a write/read
//! cycle reproduces every `f64` bit for bit. Tensor order is the canonical
//! order of [`Model::tensors`]; readers verify names and shapes.

use super::{Model, ModelKind};
use crate::error::{Error, Result};
use crate::tensor::Tensor;
use std::fmt::Write as _;
use std::path::Path;

const FORMAT_TAG: &str = "lavarnet checkpoint v1";

pub fn write_checkpoint(model: &Model, path: &Path) -> Result<()> {
    let (n, t, k, k_out) = model.dims();
    let mut out = String::new();
    let _ = writeln!(out, "{FORMAT_TAG}");
    let _ = writeln!(out, "model {}", model.kind().as_str());
    let _ = writeln!(out, "dims n {n} t {t} k {k} k_out {k_out}");
    for (name, tensor) in model.tensors() {
        let dims: Vec<String> = tensor.shape().iter().map(|d| d.to_string()).collect();
        let _ = writeln!(out, "tensor {name} {}", dims.join(" "));
        let mut first = true;
        for v in tensor.values() {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{v}");
            first = false;
        }
        out.push('\n');
    }
    out.push_str("end\n");
    std::fs::write(path, out)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Model> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines();
    let bad = |msg: &str| Error::Checkpoint(format!("{}: {msg}", path.display()));

    if lines.next() != Some(FORMAT_TAG) {
        return Err(bad("unknown format tag"));
    }
    let kind_line = lines.next().ok_or_else(|| bad("missing model line"))?;
    let kind_str = kind_line
        .strip_prefix("model ")
        .ok_or_else(|| bad("malformed model line"))?;
    let kind = ModelKind::parse(kind_str)?;

    let dims_line = lines.next().ok_or_else(|| bad("missing dims line"))?;
    let parts: Vec<&str> = dims_line.split_whitespace().collect();
    if parts.len() != 9 || parts[0] != "dims" {
        return Err(bad("malformed dims line"));
    }
    let field = |key: &str, at: usize| -> Result<usize> {
        if parts[at] != key {
            return Err(bad(&format!("expected '{key}' in dims line")));
        }
        parts[at + 1]
            .parse()
            .map_err(|_| bad(&format!("bad value for {key}")))
    };
    let n = field("n", 1)?;
    let t = field("t", 3)?;
    let k = field("k", 5)?;
    let k_out = field("k_out", 7)?;

    let mut model = Model::init(kind, n, t, k, k_out, 0)?;
    for (name, tensor) in model.tensors_mut() {
        let header = lines.next().ok_or_else(|| bad("unexpected end of file"))?;
        let mut hp = header.split_whitespace();
        if hp.next() != Some("tensor") {
            return Err(bad(&format!("expected tensor header, got '{header}'")));
        }
        let got_name = hp.next().ok_or_else(|| bad("tensor header missing name"))?;
        if got_name != name {
            return Err(bad(&format!("expected tensor '{name}', got '{got_name}'")));
        }
        let shape: Vec<usize> = hp
            .map(|d| d.parse().map_err(|_| bad("bad tensor dimension")))
            .collect::<Result<_>>()?;
        if shape != tensor.shape() {
            return Err(bad(&format!(
                "tensor '{name}' has shape {shape:?}, expected {:?}",
                tensor.shape()
            )));
        }
        let value_line = lines.next().ok_or_else(|| bad("missing tensor values"))?;
        let values: Vec<f64> = value_line
            .split_whitespace()
            .map(|v| v.parse().map_err(|_| bad("bad tensor value")))
            .collect::<Result<_>>()?;
        if values.len() != tensor.len() {
            return Err(bad(&format!(
                "tensor '{name}' has {} values, expected {}",
                values.len(),
                tensor.len()
            )));
        }
        *tensor = Tensor::new(shape, values)?;
    }
    if lines.next() != Some("end") {
        return Err(bad("missing end marker"));
    }
    if let Model::Lagged(p) = &model {
        p.validate()?;
    }
    Ok(model)
}
