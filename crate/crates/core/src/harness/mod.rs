//! Monte Carlo sweep over SNR and relay antenna count.
//!
//! Every `(snr, M, trial)` cell draws one channel realization from its own
//! seed ([`seed::trial_seed`]) and evaluates all selected schemes on it.
//! Cells run on a rayon pool; records come back in `(snr, M, trial,
//! registry)` order whatever the thread count.

pub mod cli;
pub mod csv;
pub mod seed;

use std::collections::hash_map::DefaultHasher;
use std::fs::File;
use std::hash::{Hash, Hasher};
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use anyhow::Context;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algorithms::PiaConfig;
use crate::model::{sample_channels, ChannelSet, SystemParams};
use crate::registry::{Instance, Scheme, SchemeRegistry, SchemeSettings, DEFAULT_NAMES};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub antennas: Vec<usize>,
    pub snr_db: Vec<f64>,
    pub trials: usize,
    pub algorithms: Vec<String>,
    pub seed: u64,
    pub out: PathBuf,
    pub pia: PiaConfig,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            antennas: vec![1, 2, 4, 8],
            snr_db: (0..=6).map(|k| 5.0 * k as f64).collect(),
            trials: 500,
            algorithms: DEFAULT_NAMES.iter().map(|s| s.to_string()).collect(),
            seed: 1,
            out: PathBuf::from("results.csv"),
            pia: PiaConfig::default(),
            threads: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.antennas.is_empty() || self.antennas.contains(&0) {
            return bad("antenna counts must be a non-empty list of positive integers");
        }
        if self.snr_db.is_empty() || self.snr_db.iter().any(|x| !x.is_finite()) {
            return bad("SNR list must be non-empty and finite");
        }
        if self.algorithms.is_empty() {
            return bad("algorithm set is empty");
        }
        if self.threads == Some(0) {
            return bad("threads must be at least 1");
        }
        if self.pia.max_iter == 0 {
            return bad("pia max iterations must be at least 1");
        }
        self.registry().select(&self.algorithms)?;
        Ok(())
    }

    pub fn registry(&self) -> SchemeRegistry {
        SchemeRegistry::with_settings(&SchemeSettings {
            pia: self.pia,
            ..Default::default()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub snr_db: f64,
    pub antennas: usize,
    pub algorithm: &'static str,
    pub trial: usize,
    pub r1: f64,
    pub r2: f64,
    pub sum_rate: f64,
    pub iterations: usize,
    pub converged: bool,
    pub degenerate: bool,
    /// Fingerprint of the channel draw; identical across a trial's records.
    pub channel_hash: u64,
}

/// Hash of the exact bit patterns of every channel coefficient.
pub fn channel_hash(cs: &ChannelSet) -> u64 {
    let mut h = DefaultHasher::new();
    let all = cs
        .h_r1
        .iter()
        .chain(cs.h_rb.iter())
        .chain(cs.h_br.iter())
        .chain(cs.h_2r.iter());
    for z in all.chain([cs.h_21, cs.h_2b].iter()) {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}

/// The channel realization of one cell.
pub fn trial_channels(seed: u64, params: &SystemParams, snr_db: f64, trial: usize) -> ChannelSet {
    let s = seed::trial_seed(seed, snr_db, params.antennas, trial);
    sample_channels(params, &mut ChaCha8Rng::seed_from_u64(s))
}

fn evaluate_cell(
    schemes: &[&dyn Scheme],
    master: u64,
    snr_db: f64,
    m: usize,
    trial: usize,
) -> Result<Vec<TrialRecord>> {
    let params = SystemParams::from_snr_db(m, snr_db)?;
    let channels = trial_channels(master, &params, snr_db, trial);
    let hash = channel_hash(&channels);
    let record = |name, r1, r2, sum, iterations, converged, degenerate| TrialRecord {
        snr_db,
        antennas: m,
        algorithm: name,
        trial,
        r1,
        r2,
        sum_rate: sum,
        iterations,
        converged,
        degenerate,
        channel_hash: hash,
    };
    let instance = match Instance::new(params, channels) {
        Ok(i) => i,
        Err(Error::Degenerate(_)) => {
            let nan = f64::NAN;
            return Ok(schemes
                .iter()
                .map(|s| record(s.name(), nan, nan, nan, 0, false, true))
                .collect());
        }
        Err(e) => return Err(e),
    };
    schemes
        .iter()
        .map(|s| {
            let o = s.evaluate(&instance)?;
            Ok(record(
                s.name(),
                o.r1,
                o.r2,
                o.sum,
                o.iterations,
                o.converged,
                o.degenerate,
            ))
        })
        .collect()
}

/// Records of one `(snr, M, trial)` cell, one per selected scheme.
pub fn run_trial(
    cfg: &SweepConfig,
    snr_db: f64,
    antennas: usize,
    trial: usize,
) -> Result<Vec<TrialRecord>> {
    let registry = cfg.registry();
    let schemes = registry.select(&cfg.algorithms)?;
    evaluate_cell(&schemes, cfg.seed, snr_db, antennas, trial)
}

/// All records of the sweep, in deterministic order.
pub fn execute(cfg: &SweepConfig) -> anyhow::Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let registry = cfg.registry();
    let schemes = registry.select(&cfg.algorithms)?;
    let mut cells = Vec::with_capacity(cfg.snr_db.len() * cfg.antennas.len() * cfg.trials);
    for &snr in &cfg.snr_db {
        for &m in &cfg.antennas {
            cells.extend((0..cfg.trials).map(|t| (snr, m, t)));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.unwrap_or(0))
        .build()
        .context("building thread pool")?;
    let per_cell: Result<Vec<Vec<TrialRecord>>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(snr, m, t)| evaluate_cell(&schemes, cfg.seed, snr, m, t))
            .collect()
    });
    Ok(per_cell?.into_iter().flatten().collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub algorithm: &'static str,
    pub snr_db: f64,
    pub antennas: usize,
    /// Mean sum rate over non-degenerate trials.
    pub mean_sum_rate: f64,
    pub trials: usize,
    pub degenerate: usize,
}

/// Per `(algorithm, snr, M)` means, ordered as the records first mention them.
pub fn summarize(records: &[TrialRecord]) -> Vec<SummaryRow> {
    let mut rows: Vec<(SummaryRow, f64)> = Vec::new();
    for r in records {
        let i = match rows.iter().position(|(s, _)| {
            s.algorithm == r.algorithm && s.snr_db == r.snr_db && s.antennas == r.antennas
        }) {
            Some(i) => i,
            None => {
                rows.push((
                    SummaryRow {
                        algorithm: r.algorithm,
                        snr_db: r.snr_db,
                        antennas: r.antennas,
                        mean_sum_rate: f64::NAN,
                        trials: 0,
                        degenerate: 0,
                    },
                    0.0,
                ));
                rows.len() - 1
            }
        };
        let (row, total) = &mut rows[i];
        if r.degenerate {
            row.degenerate += 1;
        } else {
            row.trials += 1;
            *total += r.sum_rate;
        }
    }
    rows.into_iter()
        .map(|(mut row, total)| {
            if row.trials > 0 {
                row.mean_sum_rate = total / row.trials as f64;
            }
            row
        })
        .collect()
}

pub fn write_summary<W: Write>(out: &mut W, rows: &[SummaryRow]) -> std::io::Result<()> {
    writeln!(
        out,
        "{:<10} {:>8} {:>4} {:>14} {:>7} {:>10}",
        "algorithm", "snr_db", "M", "mean_sum_rate", "trials", "degenerate"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:<10} {:>8} {:>4} {:>14.4} {:>7} {:>10}",
            r.algorithm,
            csv::fmt_g10(r.snr_db),
            r.antennas,
            r.mean_sum_rate,
            r.trials,
            r.degenerate
        )?;
    }
    Ok(())
}

/// Runs the sweep, writes the CSV to `cfg.out` and returns the summary.
pub fn run_sweep(cfg: &SweepConfig) -> anyhow::Result<Vec<SummaryRow>> {
    let records = execute(cfg)?;
    let file = File::create(&cfg.out).with_context(|| format!("creating {}", cfg.out.display()))?;
    let mut w = BufWriter::new(file);
    csv::write_csv(&mut w, &records)
        .and_then(|_| w.flush())
        .with_context(|| format!("writing {}", cfg.out.display()))?;
    Ok(summarize(&records))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingleConfig {
    pub antennas: usize,
    pub snr_db: f64,
    pub seed: u64,
    pub dump_solution: bool,
}

/// Runs trial 0 of the given cell with every scheme and reports it.
pub fn run_single<W: Write>(cfg: &SingleConfig, out: &mut W) -> anyhow::Result<()> {
    let params = SystemParams::from_snr_db(cfg.antennas, cfg.snr_db)?;
    let channels = trial_channels(cfg.seed, &params, cfg.snr_db, 0);
    let instance = Instance::new(params, channels)?;
    let registry = SchemeRegistry::default();
    writeln!(
        out,
        "M = {}, SNR = {} dB, seed = {}",
        cfg.antennas,
        csv::fmt_g10(cfg.snr_db),
        cfg.seed
    )?;
    writeln!(
        out,
        "{:<10} {:>10} {:>10} {:>10} {:>10} {:>6}",
        "algorithm", "rate1", "rate2", "sum_rate", "||W||_F", "iters"
    )?;
    let mut pia_report = None;
    for s in registry.iter() {
        let o = s.evaluate(&instance)?;
        let norm = o.solution.as_ref().map_or("-".to_string(), |sol| {
            format!("{:.6}", sol.beamformer.frobenius_norm())
        });
        writeln!(
            out,
            "{:<10} {:>10.6} {:>10.6} {:>10.6} {:>10} {:>6}",
            s.name(),
            o.r1,
            o.r2,
            o.sum,
            norm,
            o.iterations
        )?;
        if let Some(sol) = &o.solution {
            if s.name() == "pia" {
                pia_report = Some((
                    sol.iterations,
                    sol.converged,
                    instance.forms.kkt_residual(&sol.w_tilde),
                ));
            }
            if cfg.dump_solution {
                writeln!(out, "  W ({}):", s.name())?;
                let w = sol.beamformer.matrix();
                for i in 0..w.nrows() {
                    let row: Vec<String> = (0..w.ncols())
                        .map(|j| format!("{:+.6e}{:+.6e}i", w[(i, j)].re, w[(i, j)].im))
                        .collect();
                    writeln!(out, "    {}", row.join("  "))?;
                }
            }
        }
        if let (Some(b), true) = (&o.bound, cfg.dump_solution) {
            writeln!(
                out,
                "  kappa1 = {:.6}, P1 = {:.6}, P2 = {:.6}",
                b.kappa1, b.p1, b.p2
            )?;
        }
    }
    if let Some((iters, converged, kkt)) = pia_report {
        writeln!(
            out,
            "pia: {iters} iterations, converged = {converged}, kkt residual = {kkt:.3e}"
        )?;
    }
    Ok(())
}
