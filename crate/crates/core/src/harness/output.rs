//! CSV and SVG artefacts of a sweep.

use std::fs;
use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::run::{ExperimentResult, TrialRecord};
use super::svg;
use crate::error::Result;
use crate::metrics::{embed, CloudSource};

pub const RECORDS_HEADER: [&str; 19] = [
    "task",
    "activation",
    "size",
    "trial",
    "seed",
    "data_seed",
    "log_nmse",
    "teacher_forced_log_nmse",
    "diverged",
    "sigma",
    "lambda",
    "lambda_used",
    "spectral_radius",
    "washout",
    "train_len",
    "eval_len",
    "mge_variant",
    "log_base",
    "wall_ms",
];

/// Shortest round-trip form (`1e-8`, `0.95`, `inf`).
fn num(v: f64) -> String {
    format!("{v:?}")
}

fn record_row(r: &TrialRecord) -> Vec<String> {
    vec![
        r.task.to_string(),
        r.activation.clone(),
        r.size.to_string(),
        r.trial.to_string(),
        r.seed.to_string(),
        r.data_seed.to_string(),
        num(r.log_nmse),
        r.teacher_forced_log_nmse.map(num).unwrap_or_default(),
        r.diverged.to_string(),
        num(r.sigma),
        num(r.lambda),
        num(r.lambda_used),
        num(r.spectral_radius),
        r.washout.to_string(),
        r.train_len.to_string(),
        r.eval_len.to_string(),
        r.mge_variant.map(|v| v.to_string()).unwrap_or_default(),
        r.log_base().to_string(),
        format!("{:.3}", r.wall_ms),
    ]
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_path(path)?)
}

/// Writes `records.csv`, `medians.csv` and `accuracy_vs_size.svg`, plus
/// `trajectory.csv`, `attractors.csv` and `wasserstein.csv` for free-running
/// sweeps. Returns the paths written.
pub fn emit_outputs(result: &ExperimentResult, cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    let dir = &cfg.out_dir;
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let path = dir.join("records.csv");
    let mut w = writer(&path)?;
    w.write_record(RECORDS_HEADER)?;
    for r in &result.records {
        w.write_record(record_row(r))?;
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("medians.csv");
    let mut w = writer(&path)?;
    w.write_record(["task", "activation", "size", "median_log_nmse", "trials", "diverged"])?;
    for m in &result.medians {
        w.write_record([
            cfg.task.to_string(),
            m.activation.clone(),
            m.size.to_string(),
            num(m.median),
            m.trials.to_string(),
            m.diverged.to_string(),
        ])?;
    }
    w.flush()?;
    written.push(path);

    let path = dir.join("accuracy_vs_size.svg");
    let title = format!("{}: median logNMSE over {} trials (sigma = {})", cfg.task, cfg.trials, cfg.sigma());
    fs::write(&path, svg::accuracy_vs_size(&result.medians, &title))?;
    written.push(path);

    if result.free_running.is_empty() {
        return Ok(written);
    }

    let path = dir.join("wasserstein.csv");
    let mut w = writer(&path)?;
    w.write_record(["activation", "size", "trial", "pair", "distance", "m", "seed"])?;
    for a in &result.free_running {
        for row in &a.wasserstein {
            w.write_record([
                a.activation.clone(),
                a.size.to_string(),
                a.trial.to_string(),
                row.pair.to_string(),
                num(row.distance),
                row.m.to_string(),
                row.seed.to_string(),
            ])?;
        }
    }
    w.flush()?;
    written.push(path);

    // Series and point clouds are written for the first trial of each
    // (activation, size) cell only.
    let firsts = || result.free_running.iter().filter(|a| a.trial == 0);

    let path = dir.join("trajectory.csv");
    let mut w = writer(&path)?;
    w.write_record(["activation", "size", "trial", "step", "target", "predicted", "surrogate"])?;
    for a in firsts() {
        for (k, t) in a.target.iter().enumerate() {
            w.write_record([
                a.activation.clone(),
                a.size.to_string(),
                a.trial.to_string(),
                k.to_string(),
                num(*t),
                a.predicted.get(k).copied().map(num).unwrap_or_default(),
                num(a.surrogate[k]),
            ])?;
        }
    }
    w.flush()?;
    written.push(path);

    let (tau, dim) = (cfg.embed_tau(), cfg.embed_dim);
    let path = dir.join("attractors.csv");
    let mut w = writer(&path)?;
    let mut header = vec!["activation".to_string(), "size".into(), "trial".into(), "source".into(), "index".into()];
    header.extend((0..dim).map(|j| format!("x{j}")));
    w.write_record(&header)?;
    for a in firsts() {
        let mut clouds = vec![
            embed(&a.target, tau, dim, CloudSource::Target)?,
            embed(&a.surrogate, tau, dim, CloudSource::Surrogate)?,
        ];
        if a.predicted.len() == a.target.len() {
            clouds.insert(1, embed(&a.predicted, tau, dim, CloudSource::Predicted)?);
        }
        for cloud in clouds {
            for (k, p) in cloud.points.iter().enumerate() {
                let mut row = vec![
                    a.activation.clone(),
                    a.size.to_string(),
                    a.trial.to_string(),
                    cloud.source.as_str().to_string(),
                    k.to_string(),
                ];
                row.extend(p.iter().copied().map(num));
                w.write_record(&row)?;
            }
        }
    }
    w.flush()?;
    written.push(path);

    Ok(written)
}
