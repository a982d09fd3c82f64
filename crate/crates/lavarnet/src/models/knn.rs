//! K-nearest-neighbors regression baseline.

use crate::error::{Error, Result};
use crate::tensor::Tensor;

/// Mean of the targets of the `k_neighbors` training windows closest to the
/// query in Euclidean distance over the flattened window. Distance ties are
/// broken by the earlier training index.
pub fn knn_predict(
    query: &Tensor,
    train_windows: &[Tensor],
    train_targets: &[Vec<f64>],
    k_neighbors: usize,
) -> Result<Vec<f64>> {
    if train_windows.is_empty() {
        return Err(Error::Contract("knn_predict: empty training set".into()));
    }
    if train_windows.len() != train_targets.len() {
        return Err(Error::Contract(format!(
            "knn_predict: {} windows but {} targets",
            train_windows.len(),
            train_targets.len()
        )));
    }
    if k_neighbors == 0 || k_neighbors > train_windows.len() {
        return Err(Error::Contract(format!(
            "knn_predict: k_neighbors={} with {} training windows",
            k_neighbors,
            train_windows.len()
        )));
    }
    let mut scored: Vec<(f64, usize)> = train_windows
        .iter()
        .enumerate()
        .map(|(i, w)| {
            if w.shape() != query.shape() {
                return Err(Error::dim("knn_predict", query.shape(), w.shape()));
            }
            let d2: f64 = query
                .values()
                .iter()
                .zip(w.values())
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            Ok((d2, i))
        })
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let out_dim = train_targets[0].len();
    let mut mean = vec![0.0; out_dim];
    for &(_, i) in scored.iter().take(k_neighbors) {
        for (m, t) in mean.iter_mut().zip(&train_targets[i]) {
            *m += t;
        }
    }
    for m in &mut mean {
        *m /= k_neighbors as f64;
    }
    Ok(mean)
}
