//! Synthetic multivariate series with known coupling structure.

mod henon;
mod var;

pub use henon::{gen_henon_chain, simulate_henon_chain, HENON_LINEAR, HENON_QUADRATIC};
pub use var::{draw_var_coefficients, gen_er_network, gen_var, simulate_var, spectral_radius, VarCoefficients};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

/// Ground-truth driving structure of a generated system.
///
/// An edge `(source, lag, target)` states that variable `source` at `lag`
/// steps in the past drives `target`. Variables are 0-based in memory and
/// 1-based in the JSON interchange format; lags are 1-based everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingNetwork {
    k_vars: usize,
    max_lag: usize,
    lagged_edges: BTreeSet<(usize, usize, usize)>,
}

impl CouplingNetwork {
    pub fn new(
        k_vars: usize,
        max_lag: usize,
        lagged_edges: BTreeSet<(usize, usize, usize)>,
    ) -> Result<Self> {
        for &(source, lag, target) in &lagged_edges {
            if source >= k_vars || target >= k_vars {
                return Err(Error::Contract(format!(
                    "edge ({source}, {lag}, {target}) references a variable outside 0..{k_vars}"
                )));
            }
            if lag == 0 || lag > max_lag {
                return Err(Error::Contract(format!(
                    "edge ({source}, {lag}, {target}) has lag outside 1..={max_lag}"
                )));
            }
        }
        Ok(CouplingNetwork {
            k_vars,
            max_lag,
            lagged_edges,
        })
    }

    pub fn k_vars(&self) -> usize {
        self.k_vars
    }

    pub fn max_lag(&self) -> usize {
        self.max_lag
    }

    pub fn lagged_edges(&self) -> &BTreeSet<(usize, usize, usize)> {
        &self.lagged_edges
    }

    pub fn contains(&self, source: usize, lag: usize, target: usize) -> bool {
        self.lagged_edges.contains(&(source, lag, target))
    }

    /// The set of driving lagged variables of `target`: pairs `(source, lag)`.
    pub fn driving_lagged(&self, target: usize) -> BTreeSet<(usize, usize)> {
        self.lagged_edges
            .iter()
            .filter(|&&(_, _, t)| t == target)
            .map(|&(s, lag, _)| (s, lag))
            .collect()
    }

    /// The set of driving variables of `target`: the projection of
    /// [`CouplingNetwork::driving_lagged`] onto variables.
    pub fn driving_vars(&self, target: usize) -> BTreeSet<usize> {
        self.driving_lagged(target)
            .into_iter()
            .map(|(s, _)| s)
            .collect()
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = NetworkFile {
            k: self.k_vars,
            p: self.max_lag,
            edges: self
                .lagged_edges
                .iter()
                .map(|&(s, lag, t)| EdgeRecord {
                    source: s + 1,
                    lag,
                    target: t + 1,
                })
                .collect(),
        };
        let text = serde_json::to_string_pretty(&file)
            .map_err(|e| Error::Data(format!("network serialization: {e}")))?;
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let file: NetworkFile = serde_json::from_str(&text)
            .map_err(|e| Error::Data(format!("{}: {e}", path.display())))?;
        let mut edges = BTreeSet::new();
        for e in file.edges {
            if e.source == 0 || e.target == 0 {
                return Err(Error::Data(format!(
                    "{}: edge indices are 1-based",
                    path.display()
                )));
            }
            edges.insert((e.source - 1, e.lag, e.target - 1));
        }
        CouplingNetwork::new(file.k, file.p, edges)
    }
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    k: usize,
    p: usize,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
struct EdgeRecord {
    source: usize,
    lag: usize,
    target: usize,
}
