//! Loss, optimizer, schedule and the epoch loop with validation
//! checkpointing, plus neuron-count grid search.

use crate::dataio::{WindowSample, WindowSet};
use crate::error::{Error, Result};
use crate::models::{Model, ModelKind};
use crate::seed::derive_seed;
use crate::tensor::Tape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use std::path::Path;

/// Hyperparameters of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub eta_max: f64,
    pub eta_min: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 70,
            batch_size: 64,
            eta_max: 0.01,
            eta_min: 0.0001,
            beta1: 0.9,
            beta2: 0.999,
            eps_adam: 1e-8,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Contract("epochs must be >= 1".into()));
        }
        if self.batch_size == 0 {
            return Err(Error::Contract("batch size must be >= 1".into()));
        }
        if !(0.0 < self.eta_min && self.eta_min <= self.eta_max) {
            return Err(Error::Contract(format!(
                "need 0 < eta_min <= eta_max, got {} and {}",
                self.eta_min, self.eta_max
            )));
        }
        Ok(())
    }
}

/// Mean of squared componentwise differences.
pub fn mse_loss(pred: &[f64], actual: &[f64]) -> Result<f64> {
    if pred.len() != actual.len() || pred.is_empty() {
        return Err(Error::dim("mse_loss", &[pred.len()], &[actual.len()]));
    }
    let sum: f64 = pred
        .iter()
        .zip(actual)
        .map(|(p, a)| (p - a) * (p - a))
        .sum();
    Ok(sum / pred.len() as f64)
}

/// Cosine annealing: `eta_min + (eta_max - eta_min)(1 + cos(i*pi/E))/2`.
pub fn cosine_lr(epoch: usize, total_epochs: usize, eta_min: f64, eta_max: f64) -> f64 {
    let phase = epoch as f64 * std::f64::consts::PI / total_epochs as f64;
    eta_min + 0.5 * (eta_max - eta_min) * (1.0 + phase.cos())
}

/// First/second moment accumulators of Adam, one slot per trainable scalar.
#[derive(Debug, Clone)]
pub struct AdamState {
    m: Vec<Vec<f64>>,
    v: Vec<Vec<f64>>,
    step: usize,
    beta1: f64,
    beta2: f64,
    eps: f64,
}

impl AdamState {
    pub fn new(param_sizes: &[usize], config: &TrainConfig) -> Self {
        AdamState {
            m: param_sizes.iter().map(|&s| vec![0.0; s]).collect(),
            v: param_sizes.iter().map(|&s| vec![0.0; s]).collect(),
            step: 0,
            beta1: config.beta1,
            beta2: config.beta2,
            eps: config.eps_adam,
        }
    }

    pub fn for_model(model: &Model, config: &TrainConfig) -> Self {
        let sizes: Vec<usize> = model.tensors().iter().map(|(_, t)| t.len()).collect();
        AdamState::new(&sizes, config)
    }

    /// One bias-corrected update; returns the deltas to add to the params.
    pub fn step(&mut self, grads: &[Vec<f64>], lr: f64) -> Vec<Vec<f64>> {
        assert_eq!(grads.len(), self.m.len());
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        let mut deltas = Vec::with_capacity(grads.len());
        for (slot, g_slot) in grads.iter().enumerate() {
            let m = &mut self.m[slot];
            let v = &mut self.v[slot];
            let mut d = vec![0.0; g_slot.len()];
            for i in 0..g_slot.len() {
                let g = g_slot[i];
                m[i] = self.beta1 * m[i] + (1.0 - self.beta1) * g;
                v[i] = self.beta2 * v[i] + (1.0 - self.beta2) * g * g;
                let m_hat = m[i] / bc1;
                let v_hat = v[i] / bc2;
                d[i] = -lr * m_hat / (v_hat.sqrt() + self.eps);
            }
            deltas.push(d);
        }
        deltas
    }
}

/// Standard Adam update applied in place to a model's tensors.
pub fn adam_step(model: &mut Model, grads: &[Vec<f64>], state: &mut AdamState, lr: f64) {
    let deltas = state.step(grads, lr);
    model.apply_deltas(&deltas);
}

/// Loss/learning-rate trajectory of one run plus the checkpointed best model.
#[derive(Debug, Clone)]
pub struct TrainHistory {
    pub epochs: Vec<EpochStats>,
    pub best_epoch: usize,
    pub best_val_loss: f64,
    pub best_model: Model,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub train_loss: f64,
    pub val_loss: f64,
    pub lr: f64,
}

impl TrainHistory {
    /// History CSV: `epoch,train_loss,val_loss,lr`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = String::from("epoch,train_loss,val_loss,lr\n");
        for (i, e) in self.epochs.iter().enumerate() {
            let _ = writeln!(out, "{i},{},{},{}", e.train_loss, e.val_loss, e.lr);
        }
        std::fs::write(path, out)?;
        Ok(())
    }
}

/// Mean per-sample MSE of a model over a sample set (tape-free route).
pub fn evaluate_mse(model: &Model, samples: &[WindowSample]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("evaluate_mse on empty sample set".into()));
    }
    let mut total = 0.0;
    for s in samples {
        let pred = model.predict(&s.input)?;
        total += mse_loss(&pred, &s.target)?;
    }
    Ok(total / samples.len() as f64)
}

/// Train one model: per epoch, shuffle the training samples (seeded),
/// run minibatch forward/backward/Adam with the cosine-annealed learning
/// rate, evaluate the validation loss, and checkpoint the parameters
/// whenever it strictly improves.
pub fn train(kind: ModelKind, n: usize, windows: &WindowSet, config: &TrainConfig) -> Result<TrainHistory> {
    config.validate()?;
    if windows.train.is_empty() || windows.val.is_empty() {
        return Err(Error::Data("training requires train and validation windows".into()));
    }
    let t_steps = windows.t_steps;
    let k_vars = windows.train[0].input.shape()[1];
    let k_out = windows.targets.len();
    let mut model = Model::init(kind, n, t_steps, k_vars, k_out, derive_seed(config.seed, &[0x1217]))?;
    let mut state = AdamState::for_model(&model, config);

    let mut history = Vec::with_capacity(config.epochs);
    let mut best: Option<(usize, f64, Model)> = None;

    for epoch in 0..config.epochs {
        let stats = run_epoch(&mut model, &mut state, windows, epoch, config)?;
        let improved = best.as_ref().is_none_or(|(_, b, _)| stats.val_loss < *b);
        if improved {
            best = Some((epoch, stats.val_loss, model.clone()));
        }
        history.push(stats);
    }
    let (best_epoch, best_val_loss, best_model) = best.expect("at least one epoch");
    Ok(TrainHistory {
        epochs: history,
        best_epoch,
        best_val_loss,
        best_model,
    })
}

/// One epoch of the training loop: seeded shuffle, minibatch
/// forward/backward/Adam at the cosine-annealed learning rate, then a
/// validation pass. Shared by [`train`] and incremental callers.
pub fn run_epoch(
    model: &mut Model,
    state: &mut AdamState,
    windows: &WindowSet,
    epoch: usize,
    config: &TrainConfig,
) -> Result<EpochStats> {
    let lr = cosine_lr(epoch, config.epochs, config.eta_min, config.eta_max);
    let mut order: Vec<usize> = (0..windows.train.len()).collect();
    shuffle(&mut order, derive_seed(config.seed, &[0x5f1e, epoch as u64]));

    let mut epoch_loss_sum = 0.0;
    for (batch_idx, chunk) in order.chunks(config.batch_size).enumerate() {
        let mut tape = Tape::new();
        let bound = model.bind(&mut tape);
        let mut sample_losses = Vec::with_capacity(chunk.len());
        for &si in chunk {
            let sample = &windows.train[si];
            let pred = model.build_prediction(&mut tape, &bound, &sample.input)?;
            let target = tape.input(crate::tensor::Tensor::vector(sample.target.clone()));
            sample_losses.push(tape.mse(pred, target)?);
        }
        let loss_node = tape.mean_scalars(&sample_losses)?;
        let loss_value = tape.value(loss_node).values()[0];
        if !loss_value.is_finite() {
            return Err(Error::Train {
                epoch,
                batch: batch_idx,
                msg: format!("non-finite loss {loss_value}"),
            });
        }
        epoch_loss_sum += loss_value * chunk.len() as f64;
        let grads = tape.backward(loss_node)?;
        let grad_vecs: Vec<Vec<f64>> = grads.param_grads().map(|(_, g)| g.to_vec()).collect();
        adam_step(model, &grad_vecs, state, lr);
    }
    let train_loss = epoch_loss_sum / windows.train.len() as f64;
    let val_loss = evaluate_mse(model, &windows.val)?;
    if !val_loss.is_finite() {
        return Err(Error::Train {
            epoch,
            batch: 0,
            msg: format!("non-finite validation loss {val_loss}"),
        });
    }
    Ok(EpochStats {
        train_loss,
        val_loss,
        lr,
    })
}

/// Fisher-Yates shuffle with a dedicated seeded generator.
fn shuffle(order: &mut [usize], seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for i in (1..order.len()).rev() {
        let j = rng.gen_range(0..=i);
        order.swap(i, j);
    }
}

/// Outcome of a neuron-count grid search.
#[derive(Debug, Clone)]
pub struct GridSearch {
    pub best: TrainHistory,
    /// `(candidate n, best validation loss)` for every candidate tried.
    pub candidates: Vec<(usize, f64)>,
}

/// Index of the candidate with the lowest loss; ties break to the smaller n.
pub fn argmin_candidate(candidates: &[(usize, f64)]) -> usize {
    let mut best = 0;
    for (i, &(n, loss)) in candidates.iter().enumerate().skip(1) {
        let (bn, bl) = candidates[best];
        if loss < bl || (loss == bl && n < bn) {
            best = i;
        }
    }
    best
}

/// Train one model per neuron-count candidate (seeds derived from the base
/// seed) and keep the history with the lowest best-validation loss.
pub fn grid_search(
    kind: ModelKind,
    candidates: &[usize],
    windows: &WindowSet,
    config: &TrainConfig,
) -> Result<GridSearch> {
    if candidates.is_empty() {
        return Err(Error::Contract("grid search needs at least one candidate".into()));
    }
    let mut results: Vec<(usize, TrainHistory)> = Vec::with_capacity(candidates.len());
    for &n in candidates {
        let mut sub = config.clone();
        sub.seed = derive_seed(config.seed, &[0x9d1d, n as u64]);
        results.push((n, train(kind, n, windows, &sub)?));
    }
    let summary: Vec<(usize, f64)> = results
        .iter()
        .map(|(n, h)| (*n, h.best_val_loss))
        .collect();
    let winner = argmin_candidate(&summary);
    Ok(GridSearch {
        best: results.swap_remove(winner).1,
        candidates: summary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{simulate_var, VarCoefficients};
    use crate::dataio::{make_windows, split_fractions};
    use crate::models::Variant;
    use crate::tensor::Tensor;

    #[test]
    fn mse_zero_when_equal() {
        assert_eq!(mse_loss(&[1.0, -2.0], &[1.0, -2.0]).unwrap(), 0.0);
    }

    #[test]
    fn mse_known_value() {
        assert_eq!(mse_loss(&[0.0, 0.0], &[1.0, 3.0]).unwrap(), 5.0);
    }

    #[test]
    fn mse_matches_summation_oracle() {
        let p = [0.5, -1.25, 3.0, 0.125];
        let a = [1.5, 0.75, -2.0, 4.0];
        let mut sum = 0.0;
        for i in 0..4 {
            sum += (p[i] - a[i]) * (p[i] - a[i]);
        }
        assert_eq!(mse_loss(&p, &a).unwrap(), sum / 4.0);
    }

    #[test]
    fn mse_length_mismatch_is_error() {
        assert!(mse_loss(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn cosine_schedule_endpoints_and_midpoint() {
        assert!((cosine_lr(0, 70, 0.0001, 0.01) - 0.01).abs() < 1e-12);
        assert!((cosine_lr(70, 70, 0.0001, 0.01) - 0.0001).abs() < 1e-12);
        assert!((cosine_lr(35, 70, 0.0001, 0.01) - 0.00505).abs() < 1e-12);
    }

    #[test]
    fn lr_sequence_non_increasing_within_bounds() {
        let (lo, hi) = (0.0001, 0.01);
        let mut prev = f64::INFINITY;
        for i in 0..=70 {
            let lr = cosine_lr(i, 70, lo, hi);
            assert!(lr <= prev && (lo..=hi).contains(&lr));
            prev = lr;
        }
    }

    #[test]
    fn adam_zero_gradient_leaves_params_unchanged() {
        let cfg = TrainConfig::default();
        let mut state = AdamState::new(&[3], &cfg);
        let deltas = state.step(&[vec![0.0; 3]], 0.01);
        assert_eq!(deltas, vec![vec![0.0; 3]]);
    }

    #[test]
    fn adam_first_step_is_signed_learning_rate() {
        // bias correction cancels at t=1: delta = -lr * g / (|g| + eps)
        let cfg = TrainConfig::default();
        let mut state = AdamState::new(&[1], &cfg);
        let g = 3.0;
        let lr = 0.05;
        let deltas = state.step(&[vec![g]], lr);
        let expect = -lr * g / (g.abs() + cfg.eps_adam);
        assert_eq!(deltas[0][0], expect);
        assert!((deltas[0][0] + lr).abs() < 1e-8);
    }

    #[test]
    fn adam_trajectory_matches_reference_implementation() {
        // 10 steps on f(x) = (x1 - 3)^2 + 2*(x2 + 1)^2 against an
        // independently written textbook Adam.
        let cfg = TrainConfig::default();
        let lr = 0.1;
        let grad = |x: &[f64]| vec![2.0 * (x[0] - 3.0), 4.0 * (x[1] + 1.0)];

        let mut x = vec![0.0, 0.0];
        let mut state = AdamState::new(&[2], &cfg);
        // reference state
        let mut rx = vec![0.0, 0.0];
        let (mut rm, mut rv) = (vec![0.0, 0.0], vec![0.0, 0.0]);

        for t in 1..=10 {
            let g = grad(&x);
            let deltas = state.step(&[g.clone()], lr);
            for i in 0..2 {
                x[i] += deltas[0][i];
            }

            let rg = grad(&rx);
            for i in 0..2 {
                rm[i] = 0.9 * rm[i] + 0.1 * rg[i];
                rv[i] = 0.999 * rv[i] + 0.001 * rg[i] * rg[i];
                let mh = rm[i] / (1.0 - 0.9f64.powi(t));
                let vh = rv[i] / (1.0 - 0.999f64.powi(t));
                rx[i] -= lr * mh / (vh.sqrt() + 1e-8);
            }
            for i in 0..2 {
                assert!((x[i] - rx[i]).abs() < 1e-12, "step {t}, coord {i}");
            }
        }
    }

    #[test]
    fn adam_step_decreases_convex_objective() {
        let cfg = TrainConfig::default();
        let mut state = AdamState::new(&[1], &cfg);
        let x0 = 1.0;
        let loss = |x: f64| x * x;
        let deltas = state.step(&[vec![2.0 * x0]], 1e-4);
        let x1 = x0 + deltas[0][0];
        assert!(loss(x1) < loss(x0));
    }

    /// Noiseless linear 2-variable system (damped rotation): persistent
    /// oscillation, exactly learnable.
    fn rotation_windows() -> WindowSet {
        let theta: f64 = 0.3;
        let damp = 0.999;
        let coeffs = VarCoefficients {
            lag_mats: vec![Tensor::matrix(
                2,
                2,
                vec![
                    damp * theta.cos(),
                    -damp * theta.sin(),
                    damp * theta.sin(),
                    damp * theta.cos(),
                ],
            )
            .unwrap()],
            noise_std: 0.0,
        };
        let series = simulate_var(&coeffs, &[vec![1.0, 0.0]], 160, 0, 0).unwrap();
        let ds = split_fractions(series, (0.6, 0.2, 0.2)).unwrap();
        make_windows(&ds, 3, &[0, 1]).unwrap()
    }

    #[test]
    fn training_learns_noiseless_linear_system() {
        let windows = rotation_windows();
        let cfg = TrainConfig {
            epochs: 200,
            batch_size: 16,
            seed: 5,
            ..TrainConfig::default()
        };
        let history = train(ModelKind::Lagged(Variant::Lavarnet), 8, &windows, &cfg).unwrap();
        let first = history.epochs.first().unwrap().train_loss;
        let last = history.epochs.last().unwrap().train_loss;
        assert!(
            last < 0.1 * first,
            "train loss only moved {first} -> {last}"
        );
    }

    #[test]
    fn training_is_deterministic() {
        let windows = rotation_windows();
        let cfg = TrainConfig {
            epochs: 3,
            batch_size: 8,
            seed: 42,
            ..TrainConfig::default()
        };
        let a = train(ModelKind::Rnn, 4, &windows, &cfg).unwrap();
        let b = train(ModelKind::Rnn, 4, &windows, &cfg).unwrap();
        assert_eq!(a.epochs, b.epochs);
        assert_eq!(a.best_model, b.best_model);
    }

    #[test]
    fn zero_epochs_rejected_one_epoch_gives_one_row() {
        let windows = rotation_windows();
        let bad = TrainConfig {
            epochs: 0,
            ..TrainConfig::default()
        };
        assert!(train(ModelKind::Rnn, 3, &windows, &bad).is_err());
        let one = TrainConfig {
            epochs: 1,
            ..TrainConfig::default()
        };
        let h = train(ModelKind::Rnn, 3, &windows, &one).unwrap();
        assert_eq!(h.epochs.len(), 1);
    }

    #[test]
    fn checkpoint_is_minimum_of_validation_losses() {
        let windows = rotation_windows();
        let cfg = TrainConfig {
            epochs: 12,
            batch_size: 16,
            seed: 9,
            ..TrainConfig::default()
        };
        let h = train(ModelKind::Lstm, 4, &windows, &cfg).unwrap();
        let min = h
            .epochs
            .iter()
            .map(|e| e.val_loss)
            .fold(f64::INFINITY, f64::min);
        assert_eq!(h.best_val_loss, min);
        assert_eq!(h.epochs[h.best_epoch].val_loss, min);
    }

    #[test]
    fn grid_single_candidate_equals_plain_train() {
        let windows = rotation_windows();
        let cfg = TrainConfig {
            epochs: 2,
            seed: 3,
            ..TrainConfig::default()
        };
        let gs = grid_search(ModelKind::Rnn, &[6], &windows, &cfg).unwrap();
        let mut sub = cfg.clone();
        sub.seed = derive_seed(cfg.seed, &[0x9d1d, 6]);
        let direct = train(ModelKind::Rnn, 6, &windows, &sub).unwrap();
        assert_eq!(gs.best.epochs, direct.epochs);
        assert_eq!(gs.best.best_model, direct.best_model);
    }

    #[test]
    fn grid_tries_every_candidate() {
        let windows = rotation_windows();
        let cfg = TrainConfig {
            epochs: 1,
            seed: 3,
            ..TrainConfig::default()
        };
        let gs = grid_search(ModelKind::Rnn, &[5, 10, 20], &windows, &cfg).unwrap();
        let ns: Vec<usize> = gs.candidates.iter().map(|&(n, _)| n).collect();
        assert_eq!(ns, vec![5, 10, 20]);
        let chosen = gs.best.best_model.dims().0;
        assert!([5, 10, 20].contains(&chosen));
    }

    #[test]
    fn selection_matches_argmin_oracle() {
        let fake = [(5usize, 0.4), (10, 0.2), (20, 0.3)];
        assert_eq!(argmin_candidate(&fake), 1);
        // tie breaks to the smaller n
        let tie = [(20usize, 0.2), (5, 0.2), (10, 0.9)];
        assert_eq!(argmin_candidate(&tie), 1);
    }
}
