//! Plain-Rust demo logic, kept separate from the wasm bindings so it can be
//! unit tested natively.

use lavarnet::datagen::{gen_er_network, gen_henon_chain, gen_var, CouplingNetwork};
use lavarnet::dataio::{denormalize, make_windows, split_fractions, zscore, Dataset, WindowSet};
use lavarnet::error::{Error, Result};
use lavarnet::evaluation::{mae, score_rl, score_rv};
use lavarnet::models::{Model, ModelKind, Variant};
use lavarnet::seed::derive_seed;
use lavarnet::series::SeriesMatrix;
use lavarnet::training::{evaluate_mse, run_epoch, AdamState, TrainConfig};
use serde_json::json;

fn generate(
    source: &str,
    k_vars: usize,
    length: usize,
    coupling: f64,
    density: f64,
    order: usize,
    seed: u64,
) -> Result<(SeriesMatrix, CouplingNetwork)> {
    match source {
        "henon" => gen_henon_chain(k_vars, length, coupling, 1000, seed),
        "var" => {
            let net = gen_er_network(k_vars, order, density, seed)?;
            let series = gen_var(&net, length, 1000, seed)?;
            Ok((series, net))
        }
        other => Err(Error::Contract(format!("unknown source '{other}'"))),
    }
}

pub fn generate_series_json(
    source: &str,
    k_vars: usize,
    length: usize,
    coupling: f64,
    density: f64,
    order: usize,
    seed: u64,
) -> Result<String> {
    let (series, truth) = generate(source, k_vars, length, coupling, density, order, seed)?;
    let rows: Vec<Vec<f64>> = (0..series.rows()).map(|r| series.row(r).to_vec()).collect();
    let edges: Vec<[usize; 3]> = truth
        .lagged_edges()
        .iter()
        .map(|&(s, lag, t)| [s + 1, lag, t + 1])
        .collect();
    Ok(json!({
        "names": series.names(),
        "rows": rows,
        "truth": edges,
    })
    .to_string())
}

pub struct Session {
    windows: WindowSet,
    dataset: Dataset,
    truth: CouplingNetwork,
    model: Model,
    best: Model,
    best_val: f64,
    adam: AdamState,
    config: TrainConfig,
    epoch: usize,
}

impl Session {
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
    ) -> Result<Session> {
        let (series, truth) = generate(source, k_vars, length, coupling, density, order, seed)?;
        let dataset = zscore(&split_fractions(series, (0.6, 0.2, 0.2))?)?;
        let targets: Vec<usize> = (0..k_vars).collect();
        let windows = make_windows(&dataset, t_steps, &targets)?;
        let config = TrainConfig {
            epochs,
            batch_size: 32,
            seed: derive_seed(seed, &[0xde30]),
            ..TrainConfig::default()
        };
        config.validate()?;
        let kind = ModelKind::Lagged(Variant::parse(variant)?);
        let model = Model::init(
            kind,
            neurons,
            t_steps,
            k_vars,
            k_vars,
            derive_seed(config.seed, &[0x1217]),
        )?;
        let adam = AdamState::for_model(&model, &config);
        let best_val = evaluate_mse(&model, &windows.val)?;
        Ok(Session {
            windows,
            dataset,
            truth,
            best: model.clone(),
            model,
            best_val,
            adam,
            config,
            epoch: 0,
        })
    }

    pub fn step_epoch(&mut self) -> Result<String> {
        if self.epoch >= self.config.epochs {
            return Ok(json!({"done": true}).to_string());
        }
        let stats = run_epoch(
            &mut self.model,
            &mut self.adam,
            &self.windows,
            self.epoch,
            &self.config,
        )?;
        if stats.val_loss < self.best_val {
            self.best_val = stats.val_loss;
            self.best = self.model.clone();
        }
        self.epoch += 1;
        Ok(json!({
            "epoch": self.epoch,
            "train_loss": stats.train_loss,
            "val_loss": stats.val_loss,
            "lr": stats.lr,
            "done": self.epoch >= self.config.epochs,
        })
        .to_string())
    }

    pub fn predictions(&self, target: usize) -> Result<String> {
        if target >= self.windows.targets.len() {
            return Err(Error::Contract(format!("target {target} out of range")));
        }
        let col = self.windows.targets[target];
        let stats = &self.dataset.norm.as_ref().expect("session data is z-scored")[col];
        let mut actual = Vec::with_capacity(self.windows.test.len());
        let mut predicted = Vec::with_capacity(self.windows.test.len());
        for sample in &self.windows.test {
            let pred = self.best.predict(&sample.input)?;
            predicted.push(denormalize(stats, pred[target]));
            actual.push(denormalize(stats, sample.target[target]));
        }
        let score = mae(&predicted, &actual)?;
        Ok(json!({
            "actual": actual,
            "predicted": predicted,
            "mae": score,
        })
        .to_string())
    }

    pub fn lag_weights(&self, target: usize) -> Result<String> {
        let params = match &self.best {
            Model::Lagged(p) => p,
            _ => unreachable!("sessions train lagged models"),
        };
        if target >= params.lag_weights.len() {
            return Err(Error::Contract(format!("target {target} out of range")));
        }
        let a = &params.lag_weights[target];
        let (rows, cols) = (a.shape()[0], a.shape()[1]);
        let weights: Vec<Vec<f64>> = (0..rows)
            .map(|t| (0..cols).map(|k| a.at(t, k)).collect())
            .collect();
        // true-driver mask in window coordinates (row t = lag T - t)
        let truth_set = self.truth.driving_lagged(self.windows.targets[target]);
        let hits: Vec<Vec<bool>> = (0..rows)
            .map(|t| (0..cols).map(|k| truth_set.contains(&(k, rows - t))).collect())
            .collect();
        let r_l = score_rl(&self.truth, &self.windows.targets, &params.lag_weights)?;
        let r_v = score_rv(&self.truth, &self.windows.targets, &params.lag_weights)?;
        Ok(json!({
            "rows": rows,
            "cols": cols,
            "weights": weights,
            "hits": hits,
            "r_l": r_l,
            "r_v": r_v,
        })
        .to_string())
    }

}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generate_json_has_expected_shape() {
        let text = generate_series_json("henon", 3, 50, 0.3, 0.4, 2, 7).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 50);
        assert_eq!(v["names"].as_array().unwrap().len(), 3);
        assert!(!v["truth"].as_array().unwrap().is_empty());
    }

    #[test]
    fn session_trains_and_reports() {
        let mut s = Session::new("var", "lavarnet", 3, 300, 0.3, 0.4, 2, 3, 4, 2, 11).unwrap();
        let first: serde_json::Value = serde_json::from_str(&s.step_epoch().unwrap()).unwrap();
        assert_eq!(first["epoch"], 1);
        assert_eq!(first["done"], false);
        let second: serde_json::Value = serde_json::from_str(&s.step_epoch().unwrap()).unwrap();
        assert_eq!(second["done"], true);

        let preds: serde_json::Value = serde_json::from_str(&s.predictions(0).unwrap()).unwrap();
        assert!(preds["mae"].as_f64().unwrap() >= 0.0);
        let lw: serde_json::Value = serde_json::from_str(&s.lag_weights(1).unwrap()).unwrap();
        assert_eq!(lw["rows"], 3);
        assert_eq!(lw["cols"], 3);
        let rl = lw["r_l"].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&rl));
    }

    #[test]
    fn stepping_past_the_end_reports_done() {
        let mut s = Session::new("henon", "lavarnet", 2, 120, 0.3, 0.4, 2, 3, 3, 1, 3).unwrap();
        let _ = s.step_epoch().unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.step_epoch().unwrap()).unwrap();
        assert_eq!(v["done"], true);
    }
}
