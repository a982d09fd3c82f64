//! The five experiment subcommands: generate, train, evaluate, interpret,
//! bench. Every output file path is a pure function of (config, seed), so
//! reruns are byte-for-byte reproducible except for timing fields.

use crate::config::{ExperimentConfig, Targets};
use crate::pool::run_indexed;
use crate::CliError;
use lavarnet::datagen::{gen_er_network, gen_henon_chain, gen_var, CouplingNetwork};
use lavarnet::dataio::{
    audit_windows, denormalize, drop_sparse_or_constant, linear_interpolate_missing, load_csv,
    make_windows, moving_average, split_counts, split_fractions, zscore, Dataset, WindowSet,
};
use lavarnet::evaluation::{mae, score_rl, score_rv, EvalReport, TargetReport};
use lavarnet::models::{knn_predict, read_checkpoint, write_checkpoint, Model, ModelKind};
use lavarnet::seed::derive_seed;
use lavarnet::training::TrainConfig;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Shared invocation context from the command line.
#[derive(Debug, Clone)]
pub struct RunContext {
    pub out_dir: PathBuf,
    pub seed: u64,
    pub jobs: usize,
}

/// FNV-1a fold of a name into a seed tag.
fn tag(s: &str) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn series_path(out: &Path, rep: usize) -> PathBuf {
    out.join(format!("series-rep{rep}.csv"))
}

fn truth_path(out: &Path, rep: usize) -> PathBuf {
    out.join(format!("truth-rep{rep}.json"))
}

fn manifest_path(out: &Path) -> PathBuf {
    out.join("manifest.json")
}

// ---------------------------------------------------------------- generate

#[derive(Debug, Serialize, Deserialize)]
pub struct GenerateSummary {
    pub reps: usize,
    pub series_files: Vec<String>,
    pub truth_files: Vec<String>,
}

/// Write one series CSV and one ground-truth JSON per Monte-Carlo seed.
pub fn cmd_generate(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<GenerateSummary, CliError> {
    std::fs::create_dir_all(&ctx.out_dir).map_err(lavarnet::Error::from)?;
    let mut summary = GenerateSummary {
        reps: cfg.data.reps,
        series_files: Vec::new(),
        truth_files: Vec::new(),
    };
    for rep in 0..cfg.data.reps {
        let seed = derive_seed(ctx.seed, &[tag("data"), rep as u64]);
        let (series, truth): (_, CouplingNetwork) = match cfg.data.source.as_str() {
            "henon" => {
                let k = cfg.data.k.expect("validated");
                let length = cfg.data.length.expect("validated");
                gen_henon_chain(k, length, cfg.data.coupling, cfg.data.burn_in, seed)
                    .map_err(|e| rep_error(e, rep))?
            }
            "var" => {
                let k = cfg.data.k.expect("validated");
                let p = cfg.data.p.expect("validated");
                let length = cfg.data.length.expect("validated");
                let net = gen_er_network(k, p, cfg.data.density, seed)?;
                let series = gen_var(&net, length, cfg.data.burn_in, seed)
                    .map_err(|e| rep_error(e, rep))?;
                (series, net)
            }
            "csv" => {
                return Err(CliError::Config(
                    "generate applies to synthetic sources, not csv".into(),
                ))
            }
            _ => unreachable!("validated"),
        };
        let sp = series_path(&ctx.out_dir, rep);
        let tp = truth_path(&ctx.out_dir, rep);
        series.write_csv(&sp)?;
        truth.write_json(&tp)?;
        summary.series_files.push(sp.display().to_string());
        summary.truth_files.push(tp.display().to_string());
    }
    Ok(summary)
}

fn rep_error(e: lavarnet::Error, rep: usize) -> CliError {
    CliError::Core(lavarnet::Error::Generation(format!("rep {rep}: {e}")))
}

// ------------------------------------------------------------ data loading

/// Dataset plus windows for one repetition, after the configured
/// preprocessing. Returns the window set, the dataset and the target column
/// indices (within the post-preprocessing series).
pub fn load_rep_data(
    cfg: &ExperimentConfig,
    ctx: &RunContext,
    rep: usize,
) -> Result<(Dataset, WindowSet), CliError> {
    let path = match cfg.data.source.as_str() {
        "csv" => PathBuf::from(cfg.data.path.as_ref().expect("validated")),
        _ => series_path(&ctx.out_dir, rep),
    };
    let mut series = load_csv(&path)?;

    if cfg.preprocess.interpolate {
        series = linear_interpolate_missing(&series)?;
    }
    if let Some(max_zeros) = cfg.preprocess.drop_sparse_or_constant {
        let protected = resolve_targets(&cfg.window.targets, &series)?;
        let (kept, _) = drop_sparse_or_constant(&series, max_zeros, &protected)?;
        series = kept;
    }
    if let Some(order) = cfg.preprocess.moving_average {
        series = moving_average(&series, order)?;
    }
    let targets = resolve_targets(&cfg.window.targets, &series)?;

    let dataset = match cfg.split.counts {
        Some([a, b, c]) => split_counts(series, (a, b, c))?,
        None => {
            let [ft, fv, fe] = cfg.split.fractions;
            split_fractions(series, (ft, fv, fe))?
        }
    };
    let dataset = if cfg.preprocess.zscore {
        zscore(&dataset)?
    } else {
        dataset
    };
    let windows = make_windows(&dataset, cfg.window.t_steps, &targets)?;
    audit_windows(&windows, &dataset.split)?;
    Ok((dataset, windows))
}

fn resolve_targets(
    targets: &Targets,
    series: &lavarnet::series::SeriesMatrix,
) -> Result<Vec<usize>, CliError> {
    match targets {
        Targets::All => Ok((0..series.cols()).collect()),
        Targets::Names(names) => names
            .iter()
            .map(|n| {
                series
                    .names()
                    .iter()
                    .position(|c| c == n)
                    .ok_or_else(|| CliError::Config(format!("target column '{n}' not found")))
            })
            .collect(),
    }
}

// ---------------------------------------------------------------- train

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TrainedRun {
    pub model: String,
    pub rep: usize,
    pub n: usize,
    pub best_val_loss: f64,
    pub best_epoch: usize,
    /// File name inside the output directory.
    pub checkpoint: String,
    /// File name inside the output directory.
    pub history: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct TrainManifest {
    pub runs: Vec<TrainedRun>,
}

impl TrainManifest {
    pub fn read(out: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(manifest_path(out)).map_err(lavarnet::Error::from)?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Core(lavarnet::Error::Data(format!("manifest: {e}"))))
    }

    /// The grid winner of one (model, rep): lowest validation loss, ties to
    /// the smaller neuron count.
    pub fn winner(&self, model: &str, rep: usize) -> Option<&TrainedRun> {
        self.runs
            .iter()
            .filter(|r| r.model == model && r.rep == rep)
            .min_by(|a, b| {
                a.best_val_loss
                    .total_cmp(&b.best_val_loss)
                    .then(a.n.cmp(&b.n))
            })
    }
}

/// Train every (model, repetition, grid candidate) combination on a bounded
/// worker pool; write one checkpoint and one history CSV per run plus a
/// manifest indexing them.
pub fn cmd_train(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<TrainManifest, CliError> {
    std::fs::create_dir_all(&ctx.out_dir).map_err(lavarnet::Error::from)?;
    let kinds: Vec<ModelKind> = cfg
        .model_kinds()
        .into_iter()
        .filter(|k| k.is_trainable())
        .collect();
    let mut tasks = Vec::new();
    for kind in &kinds {
        for rep in 0..cfg.data.reps {
            for &n in &cfg.train.grid {
                tasks.push((*kind, rep, n));
            }
        }
    }
    let results = run_indexed(tasks.len(), ctx.jobs, |i| {
        let (kind, rep, n) = tasks[i];
        train_one(cfg, ctx, kind, rep, n)
    });
    let mut runs = Vec::with_capacity(results.len());
    for r in results {
        runs.push(r?);
    }
    runs.sort_by(|a, b| {
        a.model
            .cmp(&b.model)
            .then(a.rep.cmp(&b.rep))
            .then(a.n.cmp(&b.n))
    });
    let manifest = TrainManifest { runs };
    let text = serde_json::to_string_pretty(&manifest)
        .map_err(|e| CliError::Core(lavarnet::Error::Data(format!("manifest: {e}"))))?;
    std::fs::write(manifest_path(&ctx.out_dir), text).map_err(lavarnet::Error::from)?;
    Ok(manifest)
}

fn train_one(
    cfg: &ExperimentConfig,
    ctx: &RunContext,
    kind: ModelKind,
    rep: usize,
    n: usize,
) -> Result<TrainedRun, CliError> {
    let (_, windows) = load_rep_data(cfg, ctx, rep)?;
    let train_cfg = TrainConfig {
        epochs: cfg.train.epochs,
        batch_size: cfg.train.batch_size,
        eta_max: cfg.train.eta_max,
        eta_min: cfg.train.eta_min,
        seed: derive_seed(ctx.seed, &[tag("train"), tag(kind.as_str()), rep as u64, n as u64]),
        ..TrainConfig::default()
    };
    let history = lavarnet::training::train(kind, n, &windows, &train_cfg)?;
    let name = kind.as_str();
    let ckpt_name = format!("ckpt-{name}-rep{rep}-n{n}.txt");
    let hist_name = format!("history-{name}-rep{rep}-n{n}.csv");
    write_checkpoint(&history.best_model, &ctx.out_dir.join(&ckpt_name))?;
    history.write_csv(&ctx.out_dir.join(&hist_name))?;
    Ok(TrainedRun {
        model: name.to_string(),
        rep,
        n,
        best_val_loss: history.best_val_loss,
        best_epoch: history.best_epoch,
        checkpoint: ckpt_name,
        history: hist_name,
    })
}

// ---------------------------------------------------------------- evaluate

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalSummary {
    /// One row per model: mean and std of the repetition-level MAE
    /// (original units, averaged across targets).
    pub models: Vec<ModelSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    pub reps: usize,
    pub mae_mean: f64,
    pub mae_std: f64,
}

/// Score every model's grid winner on the test split of every repetition;
/// write per-run reports and a cross-model summary table.
pub fn cmd_evaluate(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<EvalSummary, CliError> {
    let needs_manifest = cfg.model_kinds().iter().any(|k| k.is_trainable());
    let manifest = if needs_manifest {
        TrainManifest::read(&ctx.out_dir)?
    } else {
        TrainManifest::default()
    };
    let mut summary = EvalSummary { models: Vec::new() };
    for kind in cfg.model_kinds() {
        let mut rep_maes = Vec::with_capacity(cfg.data.reps);
        for rep in 0..cfg.data.reps {
            let report = evaluate_one(cfg, ctx, &manifest, kind, rep)?;
            let json = ctx
                .out_dir
                .join(format!("eval-{}-rep{rep}.json", kind.as_str()));
            let csv = ctx
                .out_dir
                .join(format!("eval-{}-rep{rep}.csv", kind.as_str()));
            report.emit(&json, &csv)?;
            rep_maes.push(report.mae_orig_avg);
        }
        let (mean, std) = mean_std(&rep_maes);
        summary.models.push(ModelSummary {
            model: kind.as_str().to_string(),
            reps: cfg.data.reps,
            mae_mean: mean,
            mae_std: std,
        });
    }
    let mut csv = String::from("model,reps,mae_mean,mae_std\n");
    for m in &summary.models {
        let _ = writeln!(csv, "{},{},{},{}", m.model, m.reps, m.mae_mean, m.mae_std);
    }
    std::fs::write(ctx.out_dir.join("summary.csv"), csv).map_err(lavarnet::Error::from)?;
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Core(lavarnet::Error::Data(format!("summary: {e}"))))?;
    std::fs::write(ctx.out_dir.join("summary.json"), json).map_err(lavarnet::Error::from)?;
    Ok(summary)
}

/// Population mean and standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}

fn evaluate_one(
    cfg: &ExperimentConfig,
    ctx: &RunContext,
    manifest: &TrainManifest,
    kind: ModelKind,
    rep: usize,
) -> Result<EvalReport, CliError> {
    let (dataset, windows) = load_rep_data(cfg, ctx, rep)?;
    let (preds, model_n, lag_mats): (Vec<Vec<f64>>, usize, Option<Vec<lavarnet::tensor::Tensor>>) =
        match kind {
            ModelKind::Knn => {
                let train_inputs: Vec<_> = windows.train.iter().map(|s| s.input.clone()).collect();
                let train_targets: Vec<_> =
                    windows.train.iter().map(|s| s.target.clone()).collect();
                let preds = windows
                    .test
                    .iter()
                    .map(|s| {
                        knn_predict(&s.input, &train_inputs, &train_targets, cfg.train.knn_neighbors)
                    })
                    .collect::<Result<_, _>>()?;
                (preds, cfg.train.knn_neighbors, None)
            }
            _ => {
                let run = manifest.winner(kind.as_str(), rep).ok_or_else(|| {
                    CliError::Core(lavarnet::Error::Checkpoint(format!(
                        "no trained run for {} rep {rep}",
                        kind.as_str()
                    )))
                })?;
                let model = read_checkpoint(&ctx.out_dir.join(&run.checkpoint))?;
                if model.kind() != kind {
                    return Err(CliError::Core(lavarnet::Error::Checkpoint(format!(
                        "checkpoint {} holds a {} model",
                        run.checkpoint,
                        model.kind().as_str()
                    ))));
                }
                let preds = windows
                    .test
                    .iter()
                    .map(|s| model.predict(&s.input))
                    .collect::<Result<_, _>>()?;
                let lag_mats = match &model {
                    Model::Lagged(p) => Some(p.lag_weights.clone()),
                    _ => None,
                };
                (preds, run.n, lag_mats)
            }
        };
    write_predictions_csv(
        &ctx.out_dir.join(format!("preds-{}-rep{rep}.csv", kind.as_str())),
        &dataset,
        &windows,
        &preds,
    )?;
    build_report(&dataset, &windows, kind, model_n, ctx.seed, &preds, lag_mats)
}

/// Test-split forecasts in original (denormalized) units:
/// `t,target,actual,predicted`, one row per (sample, target).
fn write_predictions_csv(
    path: &Path,
    dataset: &Dataset,
    windows: &WindowSet,
    preds: &[Vec<f64>],
) -> Result<(), CliError> {
    let mut csv = String::from("t,target,actual,predicted\n");
    for (sample, pred) in windows.test.iter().zip(preds) {
        for (ti, &col) in windows.targets.iter().enumerate() {
            let (actual, predicted) = match &dataset.norm {
                Some(stats) => (
                    denormalize(&stats[col], sample.target[ti]),
                    denormalize(&stats[col], pred[ti]),
                ),
                None => (sample.target[ti], pred[ti]),
            };
            let _ = writeln!(csv, "{},{},{actual},{predicted}", sample.target_row, col + 1);
        }
    }
    std::fs::write(path, csv).map_err(lavarnet::Error::from)?;
    Ok(())
}

fn build_report(
    dataset: &Dataset,
    windows: &WindowSet,
    kind: ModelKind,
    model_n: usize,
    seed: u64,
    preds: &[Vec<f64>],
    lag_mats: Option<Vec<lavarnet::tensor::Tensor>>,
) -> Result<EvalReport, CliError> {
    let mut per_target = Vec::with_capacity(windows.targets.len());
    let mut norm_sum = 0.0;
    let mut orig_sum = 0.0;
    for (ti, &col) in windows.targets.iter().enumerate() {
        let pred_col: Vec<f64> = preds.iter().map(|p| p[ti]).collect();
        let actual_col: Vec<f64> = windows.test.iter().map(|s| s.target[ti]).collect();
        let mae_norm = mae(&pred_col, &actual_col)?;
        let mae_orig = match &dataset.norm {
            Some(stats) => {
                let p: Vec<f64> = pred_col.iter().map(|&v| denormalize(&stats[col], v)).collect();
                let a: Vec<f64> = actual_col
                    .iter()
                    .map(|&v| denormalize(&stats[col], v))
                    .collect();
                mae(&p, &a)?
            }
            None => mae_norm,
        };
        norm_sum += mae_norm;
        orig_sum += mae_orig;
        let lag_weights = lag_mats.as_ref().map(|mats| {
            let m = &mats[ti];
            (0..m.shape()[0])
                .map(|t| (0..m.shape()[1]).map(|k| m.at(t, k)).collect())
                .collect()
        });
        per_target.push(TargetReport {
            target: col + 1,
            name: dataset.series.names()[col].clone(),
            mae_norm,
            mae_orig,
            lag_weights,
        });
    }
    let count = windows.targets.len() as f64;
    Ok(EvalReport {
        model: kind.as_str().to_string(),
        n: model_n,
        t_steps: windows.t_steps,
        seed,
        per_target,
        mae_norm_avg: norm_sum / count,
        mae_orig_avg: orig_sum / count,
        r_l: None,
        r_v: None,
    })
}

// ---------------------------------------------------------------- interpret

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretSummary {
    pub per_run: Vec<InterpretRun>,
    pub models: Vec<InterpretModelSummary>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretRun {
    pub model: String,
    pub rep: usize,
    pub r_l: f64,
    pub r_v: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InterpretModelSummary {
    pub model: String,
    pub r_l_mean: f64,
    pub r_v_mean: f64,
}

/// Score the trained lag weights of every lagged-variable model against the
/// generated ground truth.
pub fn cmd_interpret(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<InterpretSummary, CliError> {
    if cfg.data.source == "csv" {
        return Err(CliError::Config(
            "interpret needs generated data with ground-truth files".into(),
        ));
    }
    if cfg.preprocess.drop_sparse_or_constant.is_some() {
        return Err(CliError::Config(
            "interpret requires the generated columns to be kept intact".into(),
        ));
    }
    let manifest = TrainManifest::read(&ctx.out_dir)?;
    let kinds: Vec<ModelKind> = cfg
        .model_kinds()
        .into_iter()
        .filter(|k| matches!(k, ModelKind::Lagged(_)))
        .collect();
    if kinds.is_empty() {
        return Err(CliError::Config(
            "interpret needs at least one lagged-variable model".into(),
        ));
    }
    let mut summary = InterpretSummary {
        per_run: Vec::new(),
        models: Vec::new(),
    };
    for kind in &kinds {
        let mut rls = Vec::new();
        let mut rvs = Vec::new();
        for rep in 0..cfg.data.reps {
            let truth = CouplingNetwork::read_json(&truth_path(&ctx.out_dir, rep))?;
            let run = manifest.winner(kind.as_str(), rep).ok_or_else(|| {
                CliError::Core(lavarnet::Error::Checkpoint(format!(
                    "no trained run for {} rep {rep}",
                    kind.as_str()
                )))
            })?;
            let params = match read_checkpoint(&ctx.out_dir.join(&run.checkpoint))? {
                Model::Lagged(p) => p,
                other => {
                    return Err(CliError::Core(lavarnet::Error::Checkpoint(format!(
                        "checkpoint {} holds a {} model",
                        run.checkpoint,
                        other.kind().as_str()
                    ))))
                }
            };
            // Generated columns map 1:1 onto network variables.
            let (_, windows) = load_rep_data(cfg, ctx, rep)?;
            let r_l = score_rl(&truth, &windows.targets, &params.lag_weights)?;
            let r_v = score_rv(&truth, &windows.targets, &params.lag_weights)?;
            if cfg.interpret.dump_weights {
                dump_weights(ctx, kind.as_str(), rep, &windows.targets, &params.lag_weights)?;
            }
            summary.per_run.push(InterpretRun {
                model: kind.as_str().to_string(),
                rep,
                r_l,
                r_v,
            });
            rls.push(r_l);
            rvs.push(r_v);
        }
        summary.models.push(InterpretModelSummary {
            model: kind.as_str().to_string(),
            r_l_mean: mean_std(&rls).0,
            r_v_mean: mean_std(&rvs).0,
        });
    }
    let json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Core(lavarnet::Error::Data(format!("interpret: {e}"))))?;
    std::fs::write(ctx.out_dir.join("interpret.json"), json).map_err(lavarnet::Error::from)?;
    Ok(summary)
}

/// CSV heatmap data: one file per (model, rep, target), rows = window rows
/// (oldest first), columns = variables.
fn dump_weights(
    ctx: &RunContext,
    model: &str,
    rep: usize,
    targets: &[usize],
    lag_weights: &[lavarnet::tensor::Tensor],
) -> Result<(), CliError> {
    for (ti, m) in lag_weights.iter().enumerate() {
        let mut csv = String::new();
        let (rows, cols) = (m.shape()[0], m.shape()[1]);
        let header: Vec<String> = (1..=cols).map(|k| format!("v{k}")).collect();
        csv.push_str(&header.join(","));
        csv.push('\n');
        for t in 0..rows {
            for k in 0..cols {
                if k > 0 {
                    csv.push(',');
                }
                let _ = write!(csv, "{}", m.at(t, k));
            }
            csv.push('\n');
        }
        let path = ctx.out_dir.join(format!(
            "weights-{model}-rep{rep}-target{}.csv",
            targets[ti] + 1
        ));
        std::fs::write(path, csv).map_err(lavarnet::Error::from)?;
    }
    Ok(())
}

// ---------------------------------------------------------------- bench

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReport {
    pub epochs: usize,
    pub realizations: usize,
    pub rows: Vec<BenchRow>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRow {
    pub model: String,
    pub mean_seconds: f64,
}

/// Wall-clock seconds of model initialization plus training for a fixed
/// number of epochs, averaged over realizations. Runs serially so timings
/// are not distorted by sibling tasks.
pub fn cmd_bench(cfg: &ExperimentConfig, ctx: &RunContext) -> Result<BenchReport, CliError> {
    let (_, windows) = load_rep_data(cfg, ctx, 0)?;
    let n = cfg.train.grid[0];
    let mut report = BenchReport {
        epochs: cfg.train.epochs,
        realizations: cfg.bench.realizations,
        rows: Vec::new(),
    };
    for kind in cfg.model_kinds() {
        if !kind.is_trainable() {
            continue;
        }
        let mut seconds = Vec::with_capacity(cfg.bench.realizations);
        for real in 0..cfg.bench.realizations {
            let train_cfg = TrainConfig {
                epochs: cfg.train.epochs,
                batch_size: cfg.train.batch_size,
                eta_max: cfg.train.eta_max,
                eta_min: cfg.train.eta_min,
                seed: derive_seed(ctx.seed, &[tag("bench"), tag(kind.as_str()), real as u64]),
                ..TrainConfig::default()
            };
            let start = Instant::now();
            lavarnet::training::train(kind, n, &windows, &train_cfg)?;
            seconds.push(start.elapsed().as_secs_f64());
        }
        report.rows.push(BenchRow {
            model: kind.as_str().to_string(),
            mean_seconds: mean_std(&seconds).0,
        });
    }
    let mut csv = String::from("model,realizations,mean_seconds\n");
    for row in &report.rows {
        let _ = writeln!(csv, "{},{},{}", row.model, report.realizations, row.mean_seconds);
    }
    std::fs::write(ctx.out_dir.join("bench.csv"), csv).map_err(lavarnet::Error::from)?;
    Ok(report)
}

