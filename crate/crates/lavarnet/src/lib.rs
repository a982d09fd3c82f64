//! Forecasting laboratory for lagged-variable representation networks.
//!
//! The crate bundles everything needed to study how much a forecaster gains
//! from modeling *lagged variables* (variable `k` at lag `tau`) instead of
//! whole time steps:
//!
//! * [`tensor`] — a small dense tensor type plus a reverse-mode tape that can
//!   differentiate every model in this crate.
//! * [`models`] — the LAVARNET family (plain, recurrent, fully recurrent),
//!   Elman RNN, LSTM and KNN baselines behind one predict contract.
//! * [`datagen`] — coupled Henon map chains and stationary VAR processes with
//!   known ground-truth coupling structure.
//! * [`dataio`] — CSV ingestion, preprocessing, chronological splits and
//!   sliding-window sample construction.
//! * [`training`] — MSE loss, Adam, cosine annealing and a validation
//!   checkpointing loop, plus neuron-count grid search.
//! * [`evaluation`] — MAE scoring and interpretability scores that compare a
//!   trained model's lagged-variable weights against ground truth.

pub mod datagen;
pub mod dataio;
pub mod error;
pub mod evaluation;
pub mod models;
pub mod seed;
pub mod series;
pub mod tensor;
pub mod training;

pub use error::{Error, Result};
