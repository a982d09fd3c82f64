//! Browser demo plumbing; see `www/index.html` for the page.

pub mod session;

use wasm_bindgen::prelude::*;

/// Generate a synthetic multivariate series and return it as JSON:
/// `{"names": [...], "rows": [[...], ...], "truth": [[source, lag, target], ...]}`
/// (indices 1-based, matching the on-disk formats).
#[wasm_bindgen]
pub fn generate_series(
    source: &str,
    k_vars: usize,
    length: usize,
    coupling: f64,
    density: f64,
    order: usize,
    seed: u64,
) -> Result<String, JsValue> {
    session::generate_series_json(source, k_vars, length, coupling, density, order, seed)
        .map_err(|e| JsValue::from_str(&e.to_string()))
}

/// A live training run of a lagged-variable forecaster in the page.
#[wasm_bindgen]
pub struct DemoSession {
    inner: session::Session,
}

#[wasm_bindgen]
impl DemoSession {
    /// Build the dataset (z-scored, 60/20/20 split, T-step windows) and
    /// initialize the model.
    #[wasm_bindgen(constructor)]
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        source: &str,
        variant: &str,
        k_vars: usize,
        length: usize,
        coupling: f64,
        density: f64,
        order: usize,
        t_steps: usize,
        neurons: usize,
        epochs: usize,
        seed: u64,
    ) -> Result<DemoSession, JsValue> {
        session::Session::new(
            source, variant, k_vars, length, coupling, density, order, t_steps, neurons, epochs,
            seed,
        )
        .map(|inner| DemoSession { inner })
        .map_err(|e| JsValue::from_str(&e.to_string()))
    }

    /// Run one training epoch; returns
    /// `{"epoch": i, "train_loss": .., "val_loss": .., "lr": .., "done": bool}`.
    pub fn step_epoch(&mut self) -> Result<String, JsValue> {
        self.inner
            .step_epoch()
            .map_err(|e| JsValue::from_str(&e.to_string()))
    }

    /// Test-split forecasts of the checkpointed model for one target:
    /// `{"actual": [...], "predicted": [...], "mae": ..}`.
    pub fn predictions(&self, target: usize) -> Result<String, JsValue> {
        self.inner
            .predictions(target)
            .map_err(|e| JsValue::from_str(&e.to_string()))
    }

    /// Lag-weight magnitudes of the checkpointed model for one target plus
    /// interpretability scores against the generated ground truth:
    /// `{"rows": T, "cols": K, "weights": [[...]], "hits": [[...]], "r_l": .., "r_v": ..}`.
    pub fn lag_weights(&self, target: usize) -> Result<String, JsValue> {
        self.inner
            .lag_weights(target)
            .map_err(|e| JsValue::from_str(&e.to_string()))
    }
}
