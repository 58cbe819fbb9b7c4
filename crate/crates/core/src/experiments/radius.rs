use std::fs::File;
use std::path::Path;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use super::stats::{exceedance_of, median, Exceedance};
use super::trial_seed;
use crate::densela::{eigenvalues, operator_norm};
use crate::ensemble::{sample_matrix, EntryDistribution};
use crate::error::{Error, Result};
use crate::recpoly::{degree_residual, eval_qn_from_eigenvalues, DEGREE_TOL};

/// Largest tolerated fraction of trials whose numerics did not converge.
pub const MAX_FAILURE_RATE: f64 = 0.01;

const FIXED_COLUMNS: [&str; 8] = ["trial", "n", "dist", "seed", "rho", "sigma", "converged", "wall_ms"];

/// One sampled matrix: its spectral radius, operator norm and `q_n` on the grid.
///
/// `converged` is false when the eigensolver or the power iteration ran out of
/// budget, or when the Newton coefficients past degree n failed to vanish.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub n: usize,
    pub dist: String,
    pub seed: u64,
    pub rho: f64,
    pub sigma: f64,
    pub converged: bool,
    pub wall_ms: f64,
    pub q: Vec<Complex64>,
}

/// Runs trial `trial` at dimension `n`; a pure function of its arguments
/// apart from `wall_ms`.
pub fn run_trial(
    dist: &EntryDistribution,
    n: usize,
    master_seed: u64,
    trial: u64,
    grid: &[Complex64],
    timing: bool,
) -> Result<TrialRecord> {
    let start = Instant::now();
    let seed = trial_seed(master_seed, n, trial);
    let a = sample_matrix(dist, n, seed)?.normalized();
    let spectrum = eigenvalues(&a);
    let sigma = operator_norm(&a);
    let degree_ok = degree_residual(&spectrum.eigenvalues)? <= DEGREE_TOL;
    let q = grid.iter().map(|&z| eval_qn_from_eigenvalues(&spectrum.eigenvalues, z)).collect();
    Ok(TrialRecord {
        trial,
        n,
        dist: dist.id().to_string(),
        seed: seed.derived_seed(),
        rho: spectrum.spectral_radius(),
        sigma: sigma.value,
        converged: spectrum.converged && sigma.converged && degree_ok,
        wall_ms: if timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 },
        q,
    })
}

/// Aggregates over the converged trials at one dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSummary {
    pub n: usize,
    pub trials: usize,
    pub failures: usize,
    pub median_rho: f64,
    pub median_abs_gap: f64,
    pub median_sigma: f64,
    pub exceedance: Exceedance,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadiusSweep {
    pub records: Vec<TrialRecord>,
    pub summaries: Vec<RadiusSummary>,
}

/// Fraction of converged trials with `|rho - 1| >= eps`. All records must
/// share one dimension.
pub fn estimate_exceedance(records: &[TrialRecord], eps: f64) -> Result<Exceedance> {
    let Some(first) = records.first() else {
        return Err(Error::InvalidArgument("no trial records".into()));
    };
    if records.iter().any(|r| r.n != first.n) {
        return Err(Error::InvalidArgument("records mix several dimensions".into()));
    }
    let rhos: Vec<f64> = records.iter().filter(|r| r.converged).map(|r| r.rho).collect();
    exceedance_of(&rhos, eps)
}

pub fn summarize(records: &[TrialRecord], eps: f64) -> Result<RadiusSummary> {
    let exceedance = estimate_exceedance(records, eps)?;
    let good: Vec<&TrialRecord> = records.iter().filter(|r| r.converged).collect();
    let pick = |f: &dyn Fn(&TrialRecord) -> f64| median(&good.iter().map(|r| f(r)).collect::<Vec<_>>()).unwrap_or(f64::NAN);
    Ok(RadiusSummary {
        n: records[0].n,
        trials: records.len(),
        failures: records.len() - good.len(),
        median_rho: pick(&|r| r.rho),
        median_abs_gap: pick(&|r| (r.rho - 1.0).abs()),
        median_sigma: pick(&|r| r.sigma),
        exceedance,
    })
}

/// Samples `trials` matrices at every n, in parallel on `workers` threads.
/// Records are produced in `(n, trial)` order and, when an output path is
/// configured, appended to the CSV one chunk at a time.
pub fn run_radius_sweep(config: &ExperimentConfig) -> Result<RadiusSweep> {
    config.validate()?;
    let dist = config.distribution()?;
    let master = config.seed()?;
    let pool = config.pool()?;
    let mut sink = match &config.out {
        Some(path) => Some(CsvSink::create(path, config.z.len())?),
        None => None,
    };
    let jobs: Vec<(usize, u64)> = config
        .n
        .iter()
        .flat_map(|&n| (0..config.trials as u64).map(move |t| (n, t)))
        .collect();
    let chunk = (4 * config.workers).max(16);
    let mut records = Vec::with_capacity(jobs.len());
    for block in jobs.chunks(chunk) {
        let done: Vec<TrialRecord> = pool.install(|| {
            block
                .par_iter()
                .map(|&(n, t)| run_trial(&dist, n, master, t, &config.z, config.timing))
                .collect::<Result<_>>()
        })?;
        if let Some(sink) = sink.as_mut() {
            sink.append(&done)?;
        }
        records.extend(done);
    }
    let failures = records.iter().filter(|r| !r.converged).count();
    if failures as f64 >= MAX_FAILURE_RATE * records.len() as f64 && failures > 0 {
        return Err(Error::Experiment(format!(
            "{failures} of {} trials did not converge",
            records.len()
        )));
    }
    let summaries = config
        .n
        .iter()
        .map(|&n| {
            let at_n: Vec<TrialRecord> = records.iter().filter(|r| r.n == n).cloned().collect();
            summarize(&at_n, config.eps)
        })
        .collect::<Result<_>>()?;
    Ok(RadiusSweep { records, summaries })
}

pub fn csv_header(grid_len: usize) -> Vec<String> {
    let mut h: Vec<String> = FIXED_COLUMNS.iter().map(|s| s.to_string()).collect();
    for i in 0..grid_len {
        h.push(format!("q_re_{i}"));
        h.push(format!("q_im_{i}"));
    }
    h
}

/// Append-only CSV writer that flushes after every chunk.
struct CsvSink {
    writer: csv::Writer<File>,
}

impl CsvSink {
    fn create(path: &Path, grid_len: usize) -> Result<Self> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(csv_header(grid_len))?;
        Ok(Self { writer })
    }

    fn append(&mut self, records: &[TrialRecord]) -> Result<()> {
        for r in records {
            let mut row = vec![
                r.trial.to_string(),
                r.n.to_string(),
                r.dist.clone(),
                r.seed.to_string(),
                r.rho.to_string(),
                r.sigma.to_string(),
                r.converged.to_string(),
                r.wall_ms.to_string(),
            ];
            for z in &r.q {
                row.push(z.re.to_string());
                row.push(z.im.to_string());
            }
            self.writer.write_record(&row)?;
        }
        self.writer
            .flush()
            .map_err(|e| Error::Experiment(format!("cannot flush trial records: {e}")))
    }
}

/// Writes `records` to `path` in the sweep's CSV layout.
pub fn write_trial_csv(path: &Path, records: &[TrialRecord]) -> Result<()> {
    let grid_len = records.first().map_or(0, |r| r.q.len());
    let mut sink = CsvSink::create(path, grid_len)?;
    sink.append(records)
}

/// Reads back a CSV written by the sweep.
pub fn read_trial_csv(path: &Path) -> Result<Vec<TrialRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    if header.len() < FIXED_COLUMNS.len() || header.len() % 2 != 0 {
        return Err(Error::Experiment(format!("{}: unexpected CSV header", path.display())));
    }
    let grid_len = (header.len() - FIXED_COLUMNS.len()) / 2;
    if header.iter().ne(csv_header(grid_len).iter().map(String::as_str)) {
        return Err(Error::Experiment(format!("{}: unexpected CSV header", path.display())));
    }
    let bad = |what: &str| Error::Experiment(format!("{}: malformed {what}", path.display()));
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let f = |i: usize| row[i].parse::<f64>().map_err(|_| bad(FIXED_COLUMNS.get(i).copied().unwrap_or("q value")));
        let q = (0..grid_len)
            .map(|i| {
                let base = FIXED_COLUMNS.len() + 2 * i;
                Ok(Complex64::new(f(base)?, f(base + 1)?))
            })
            .collect::<Result<_>>()?;
        out.push(TrialRecord {
            trial: row[0].parse().map_err(|_| bad("trial"))?,
            n: row[1].parse().map_err(|_| bad("n"))?,
            dist: row[2].to_string(),
            seed: row[3].parse().map_err(|_| bad("seed"))?,
            rho: f(4)?,
            sigma: f(5)?,
            converged: row[6].parse().map_err(|_| bad("converged"))?,
            wall_ms: f(7)?,
            q,
        });
    }
    Ok(out)
}
