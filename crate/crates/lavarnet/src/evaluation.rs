//! Forecast scoring and interpretability scoring of learned lagged-variable
//! weights.
//!
//! A trained lag-weight matrix `A_k` lives in window coordinates: row `t`
//! (0-based, oldest first) of a `T`-step window corresponds to lag
//! `tau = T - t` relative to the predicted step. The scoring functions bridge
//! to the lag space the ground-truth networks use.

use crate::datagen::CouplingNetwork;
use crate::error::{Error, Result};
use crate::tensor::Tensor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

/// Mean absolute deviation.
pub fn mae(preds: &[f64], actuals: &[f64]) -> Result<f64> {
    if preds.len() != actuals.len() || preds.is_empty() {
        return Err(Error::dim("mae", &[preds.len()], &[actuals.len()]));
    }
    let sum: f64 = preds
        .iter()
        .zip(actuals)
        .map(|(p, a)| (p - a).abs())
        .sum();
    Ok(sum / preds.len() as f64)
}

/// The `cardinality` cells of a lag-weight matrix with the largest absolute
/// values, as (window row, variable) pairs. Ties break deterministically to
/// the smaller row, then the smaller variable.
pub fn top_lagged_set(a: &Tensor, cardinality: usize) -> Result<BTreeSet<(usize, usize)>> {
    if !a.is_matrix() {
        return Err(Error::Contract(format!(
            "top_lagged_set expects a matrix, got shape {:?}",
            a.shape()
        )));
    }
    let (rows, cols) = (a.shape()[0], a.shape()[1]);
    if cardinality == 0 || cardinality > rows * cols {
        return Err(Error::Contract(format!(
            "cardinality {cardinality} outside 1..={}",
            rows * cols
        )));
    }
    let mut cells: Vec<(usize, usize)> = (0..rows)
        .flat_map(|t| (0..cols).map(move |k| (t, k)))
        .collect();
    cells.sort_by(|&(t1, k1), &(t2, k2)| {
        a.at(t2, k2)
            .abs()
            .total_cmp(&a.at(t1, k1).abs())
            .then(t1.cmp(&t2))
            .then(k1.cmp(&k2))
    });
    Ok(cells.into_iter().take(cardinality).collect())
}

/// Estimated driving lagged variables of one target: the top `|L_k|` cells of
/// its lag-weight matrix mapped to (variable, lag) space. The cardinality is
/// capped at the window size; with fewer window steps than the true model
/// order, lags beyond `T` are unreachable and score as misses.
fn estimated_lagged(a: &Tensor, true_cardinality: usize) -> Result<BTreeSet<(usize, usize)>> {
    let t_steps = a.shape()[0];
    let cells = top_lagged_set(a, true_cardinality.min(a.len()))?;
    Ok(cells.into_iter().map(|(t, k)| (k, t_steps - t)).collect())
}

/// Success fraction of true driving lagged variables recovered among the
/// highest-|weight| cells, summed over targets:
/// `sum_k |L_k intersect L~_k| / sum_k |L_k|`.
///
/// `a_mats[i]` is the trained lag-weight matrix whose target is variable
/// `targets[i]` of the ground-truth network.
pub fn score_rl(truth: &CouplingNetwork, targets: &[usize], a_mats: &[Tensor]) -> Result<f64> {
    check_scoring_args(truth, targets, a_mats)?;
    let mut hits = 0usize;
    let mut total = 0usize;
    for (&target, a) in targets.iter().zip(a_mats) {
        let true_set = truth.driving_lagged(target);
        if true_set.is_empty() {
            return Err(Error::Contract(format!(
                "target {target} has no ground-truth drivers"
            )));
        }
        let est = estimated_lagged(a, true_set.len())?;
        hits += true_set.intersection(&est).count();
        total += true_set.len();
    }
    Ok(hits as f64 / total as f64)
}

/// Success fraction of true driving variables recovered:
/// `sum_k |V_k intersect V~_k| / sum_k |V_k|`, where the estimated variable
/// set is the projection of the estimated lagged set.
pub fn score_rv(truth: &CouplingNetwork, targets: &[usize], a_mats: &[Tensor]) -> Result<f64> {
    check_scoring_args(truth, targets, a_mats)?;
    let mut hits = 0usize;
    let mut total = 0usize;
    for (&target, a) in targets.iter().zip(a_mats) {
        let true_lagged = truth.driving_lagged(target);
        if true_lagged.is_empty() {
            return Err(Error::Contract(format!(
                "target {target} has no ground-truth drivers"
            )));
        }
        let true_vars = truth.driving_vars(target);
        let est_vars: BTreeSet<usize> = estimated_lagged(a, true_lagged.len())?
            .into_iter()
            .map(|(var, _)| var)
            .collect();
        hits += true_vars.intersection(&est_vars).count();
        total += true_vars.len();
    }
    Ok(hits as f64 / total as f64)
}

fn check_scoring_args(truth: &CouplingNetwork, targets: &[usize], a_mats: &[Tensor]) -> Result<()> {
    if targets.is_empty() || targets.len() != a_mats.len() {
        return Err(Error::Contract(format!(
            "{} targets with {} weight matrices",
            targets.len(),
            a_mats.len()
        )));
    }
    for &t in targets {
        if t >= truth.k_vars() {
            return Err(Error::Contract(format!(
                "target {t} outside ground-truth network of {} variables",
                truth.k_vars()
            )));
        }
    }
    Ok(())
}

/// Forecast quality and interpretability scores of one evaluated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub model: String,
    pub n: usize,
    pub t_steps: usize,
    pub seed: u64,
    pub per_target: Vec<TargetReport>,
    pub mae_norm_avg: f64,
    pub mae_orig_avg: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_l: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_v: Option<f64>,
}

/// Per-target block of an [`EvalReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetReport {
    /// 1-based variable index, matching the `v1..vK` CSV convention.
    pub target: usize,
    pub name: String,
    pub mae_norm: f64,
    pub mae_orig: f64,
    /// Row-major snapshot of the trained lag-weight matrix (window rows),
    /// present for lagged-variable models.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lag_weights: Option<Vec<Vec<f64>>>,
}

impl EvalReport {
    pub fn validate(&self) -> Result<()> {
        if self.per_target.is_empty() {
            return Err(Error::Contract("report with empty target list".into()));
        }
        for t in &self.per_target {
            if t.mae_norm < 0.0 || t.mae_orig < 0.0 {
                return Err(Error::Contract("negative MAE".into()));
            }
        }
        for r in [self.r_l, self.r_v].into_iter().flatten() {
            if !(0.0..=1.0).contains(&r) {
                return Err(Error::Contract(format!("score {r} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Write the JSON report and the per-target CSV table
    /// (`target,mae_norm,mae_orig,r_l,r_v`); field order is deterministic.
    pub fn emit(&self, json_path: &Path, csv_path: &Path) -> Result<()> {
        self.validate()?;
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Data(format!("report serialization: {e}")))?;
        std::fs::write(json_path, json)?;

        let mut csv = String::from("target,mae_norm,mae_orig,r_l,r_v\n");
        let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for t in &self.per_target {
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                t.target,
                t.mae_norm,
                t.mae_orig,
                fmt_opt(self.r_l),
                fmt_opt(self.r_v)
            );
        }
        std::fs::write(csv_path, csv)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<EvalReport> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Data(format!("{}: {e}", path.display())))
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    /// Trained lag-weight matrix of the 6-variable order-3 interpretability
    /// fixture, stored in window coordinates (row 0 oldest = lag 3).
    pub fn fixture_lag_weights() -> Tensor {
        Tensor::matrix(
            3,
            6,
            vec![
                // lag 3
                0.014, 0.078, -0.012, 0.006, -0.125, -0.095,
                // lag 2
                -0.083, 0.102, -0.007, 0.001, 0.137, -0.010,
                // lag 1
                -0.172, 0.007, -0.039, -0.005, -0.007, -0.142,
            ],
        )
        .unwrap()
    }

    /// Matching ground truth: variables 1, 2, 5, 6 (1-based) drive the first
    /// target at every lag up to order 3.
    pub fn fixture_truth() -> CouplingNetwork {
        let mut edges = BTreeSet::new();
        for &source in &[0usize, 1, 4, 5] {
            for lag in 1..=3usize {
                edges.insert((source, lag, 0usize));
            }
        }
        CouplingNetwork::new(6, 3, edges).unwrap()
    }
}
