//! The `run`, `sweep`, `ensemble` and `validate` commands.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{Resolved, RunConfig};
use crate::analysis::{marginals, SchmidtReport};
use crate::error::{Error, Result};
use crate::fluctuations::RNG_ALGORITHM;
use crate::grid::JointAmplitude;
use crate::io::write_atomic;
use crate::propagator::{Calibration, Effects, PropagationMeta};
use crate::schemes::{Method, SchemeRun, SchemeSpec};
use crate::validation::{validate, Regime, ValidationReport};

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    version: &'static str,
    command: &'a str,
    seed: u64,
    method: Method,
    rng: &'static str,
    config: &'a RunConfig,
    spec: &'a SchemeSpec,
}

impl<'a> Metadata<'a> {
    fn new(command: &'a str, config: &'a RunConfig, r: &'a Resolved) -> Self {
        Metadata {
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: r.seed,
            method: r.method,
            rng: RNG_ALGORITHM,
            config,
            spec: &r.spec,
        }
    }
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.into()))?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

fn jsa_csv(a: &JointAmplitude) -> String {
    let w = a.grid().omegas();
    let mut out = String::from("omega_s,omega_i,abs,arg\n");
    for (i, ws) in w.iter().enumerate() {
        for (j, wi) in w.iter().enumerate() {
            let v = a.values()[[i, j]];
            let _ = writeln!(out, "{ws},{wi},{},{}", v.norm(), v.arg());
        }
    }
    out
}

fn marginals_csv(a: &JointAmplitude) -> String {
    let (s, i) = marginals(a);
    let mut out = String::from("omega,signal,idler\n");
    for ((w, ps), pi) in a.grid().omegas().iter().zip(&s).zip(&i) {
        let _ = writeln!(out, "{w},{ps},{pi}");
    }
    out
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    #[serde(flatten)]
    meta: Metadata<'a>,
    report: &'a SchmidtReport,
    calibration: Calibration,
    propagation: Option<&'a PropagationMeta>,
}

/// One calibrated evaluation with full outputs.
pub fn run(config: &RunConfig, r: &Resolved) -> Result<SchemeRun> {
    let out = r.spec.run(r.method, r.seed)?;
    let dir = &r.out_dir;
    if r.jsa_csv {
        write_atomic(&dir.join("jsa.csv"), jsa_csv(&out.amplitude).as_bytes())?;
    }
    write_atomic(
        &dir.join("marginals.csv"),
        marginals_csv(&out.amplitude).as_bytes(),
    )?;
    if r.spec.effects.fluctuations {
        let wg = r.spec.waveguide(r.seed)?;
        if let Some(path) = &wg.fluctuation {
            path.save_csv(&dir.join("mismatch_path.csv"))?;
        }
    }
    write_json(
        &dir.join("report.json"),
        &RunReport {
            meta: Metadata::new("run", config, r),
            report: &out.report,
            calibration: out.calibration,
            propagation: out.propagation.as_ref(),
        },
    )?;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub effects: String,
    pub length: f64,
    /// Mean over the realizations (one unless DF is on).
    pub purity: f64,
    pub purity_std: f64,
    pub pair_probability: f64,
    pub paths: usize,
    pub runtime_s: f64,
}

#[derive(Debug, Serialize)]
struct SweepReport<'a> {
    #[serde(flatten)]
    meta: Metadata<'a>,
    rows: Vec<SweepRowJson<'a>>,
}

// runtime is left out of the JSON so it stays reproducible
#[derive(Debug, Serialize)]
struct SweepRowJson<'a> {
    effects: &'a str,
    length: f64,
    purity: f64,
    purity_std: f64,
    pair_probability: f64,
    paths: usize,
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    (mean, var.sqrt())
}

/// Purity over lengths × effect sets. DF points average `paths` seeds
/// starting at the base seed; the same seeds serve every length.
pub fn sweep(config: &RunConfig, r: &Resolved) -> Result<Vec<SweepRow>> {
    let paths = r.sweep_paths;
    if r.sweep_lengths.is_empty() {
        return Err(Error::Config(
            "sweep needs lengths (--lengths or [sweep] lengths)".into(),
        ));
    }
    if paths == 0 {
        return Err(Error::Config("`sweep.paths` must be at least 1".into()));
    }
    let jobs: Vec<(Effects, f64)> = r
        .sweep_effects
        .iter()
        .flat_map(|&e| r.sweep_lengths.iter().map(move |&l| (e, l)))
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(effects, length)| -> Result<SweepRow> {
            let start = Instant::now();
            let spec = r.spec.with_length(length)?.with_effects(effects);
            let n = if effects.fluctuations { paths } else { 1 };
            let runs = (0..n as u64)
                .map(|k| spec.run(r.method, r.seed + k))
                .collect::<Result<Vec<_>>>()?;
            let purities: Vec<f64> = runs.iter().map(|x| x.report.purity).collect();
            let (purity, purity_std) = mean_std(&purities);
            Ok(SweepRow {
                effects: effects.label(),
                length,
                purity,
                purity_std,
                pair_probability: runs.iter().map(|x| x.report.pair_probability).sum::<f64>()
                    / n as f64,
                paths: n,
                runtime_s: start.elapsed().as_secs_f64(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let scheme = r.spec.name.to_string();
    let mut csv = String::from(
        "scheme,effects,length_m,purity,purity_std,pair_probability,paths,runtime_s\n",
    );
    for row in &rows {
        let _ = writeln!(
            csv,
            "{scheme},{},{},{},{},{},{},{:.3}",
            row.effects,
            row.length,
            row.purity,
            row.purity_std,
            row.pair_probability,
            row.paths,
            row.runtime_s
        );
    }
    write_atomic(&r.out_dir.join("sweep.csv"), csv.as_bytes())?;
    let json_rows = rows
        .iter()
        .map(|x| SweepRowJson {
            effects: &x.effects,
            length: x.length,
            purity: x.purity,
            purity_std: x.purity_std,
            pair_probability: x.pair_probability,
            paths: x.paths,
        })
        .collect();
    write_json(
        &r.out_dir.join("sweep.json"),
        &SweepReport {
            meta: Metadata::new("sweep", config, r),
            rows: json_rows,
        },
    )?;
    Ok(rows)
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct EnsembleRecord {
    pub seed: u64,
    pub purity: f64,
    pub pair_probability: f64,
    pub power_scale: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleSummary {
    pub paths: usize,
    pub mean: f64,
    pub std: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub records: Vec<EnsembleRecord>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(records: Vec<EnsembleRecord>) -> EnsembleSummary {
    let purities: Vec<f64> = records.iter().map(|r| r.purity).collect();
    let (mean, std) = mean_std(&purities);
    let mut sorted = purities;
    sorted.sort_by(f64::total_cmp);
    EnsembleSummary {
        paths: records.len(),
        mean,
        std,
        q05: quantile(&sorted, 0.05),
        q50: quantile(&sorted, 0.5),
        q95: quantile(&sorted, 0.95),
        records,
    }
}

#[derive(Debug, Serialize)]
struct EnsembleReport<'a> {
    #[serde(flatten)]
    meta: Metadata<'a>,
    #[serde(flatten)]
    summary: &'a EnsembleSummary,
}

/// Independent fluctuation realizations with seeds `seed, seed+1, …`.
pub fn ensemble(config: &RunConfig, r: &Resolved) -> Result<EnsembleSummary> {
    if !r.spec.effects.fluctuations {
        return Err(Error::Config("ensemble needs df among the effects".into()));
    }
    if r.ensemble_paths == 0 {
        return Err(Error::Config("`ensemble.paths` must be at least 1".into()));
    }
    let records = (0..r.ensemble_paths as u64)
        .into_par_iter()
        .map(|k| {
            let seed = r.seed + k;
            let run = r.spec.run(r.method, seed)?;
            Ok(EnsembleRecord {
                seed,
                purity: run.report.purity,
                pair_probability: run.report.pair_probability,
                power_scale: run.calibration.scale,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let summary = summarize(records);
    let mut csv = String::from("seed,purity,pair_probability,power_scale\n");
    for x in &summary.records {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            x.seed, x.purity, x.pair_probability, x.power_scale
        );
    }
    write_atomic(&r.out_dir.join("ensemble.csv"), csv.as_bytes())?;
    write_json(
        &r.out_dir.join("ensemble.json"),
        &EnsembleReport {
            meta: Metadata::new("ensemble", config, r),
            summary: &summary,
        },
    )?;
    Ok(summary)
}

#[derive(Debug, Serialize)]
struct ValidateOutput<'a> {
    #[serde(flatten)]
    meta: Metadata<'a>,
    #[serde(flatten)]
    report: &'a ValidationReport,
}

/// Split-step against the closed form; the regime defaults to `hod` when
/// GVD is on and `no_gvd` otherwise.
pub fn validate_cmd(config: &RunConfig, r: &Resolved) -> Result<ValidationReport> {
    let regime = r.regime.unwrap_or(if r.spec.effects.gvd {
        Regime::Hod
    } else {
        Regime::NoGvd
    });
    let report = validate(&r.spec, regime, r.seed, r.levels)?;
    let mut csv = String::from("dz,steps,error,ratio\n");
    for row in &report.convergence {
        let ratio = row.ratio.map(|q| q.to_string()).unwrap_or_default();
        let _ = writeln!(csv, "{},{},{},{ratio}", row.dz, row.steps, row.error);
    }
    write_atomic(&r.out_dir.join("convergence.csv"), csv.as_bytes())?;
    write_json(
        &r.out_dir.join("validate.json"),
        &ValidateOutput {
            meta: Metadata::new("validate", config, r),
            report: &report,
        },
    )?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(quantile(&xs, 0.5), 3.0);
        assert_eq!(quantile(&xs, 0.0), 1.0);
        assert!((quantile(&xs, 0.95) - 4.8).abs() < 1e-12);
    }

    #[test]
    fn summary_statistics() {
        let recs: Vec<_> = [0.9, 0.8, 1.0]
            .iter()
            .enumerate()
            .map(|(k, &p)| EnsembleRecord {
                seed: k as u64,
                purity: p,
                pair_probability: 0.2,
                power_scale: 1.0,
            })
            .collect();
        let s = summarize(recs);
        assert!((s.mean - 0.9).abs() < 1e-12);
        assert!((s.std - 0.1).abs() < 1e-12);
        assert_eq!(s.q50, 0.9);
        assert_eq!(s.records[0].seed, 0);
    }
}
