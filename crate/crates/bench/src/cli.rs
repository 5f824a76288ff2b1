// Licensed to the Apache Software Foundation (ASF) under one
// or more contributor license agreements.  See the NOTICE file
// distributed with this work for additional information
// regarding copyright ownership.  The ASF licenses this file
// to you under the Apache License, Version 2.0 (the
// "License"); you may not use this file except in compliance
// with the License.  You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing,
// software distributed under the License is distributed on an
// "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, either express or implied.  See the License for the
// specific language governing permissions and limitations
// under the License.

//! Command-line interface.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use freqsketch::streamgen::{read_stream, write_stream, zipf_stream};
use freqsketch::{ErrorMode, SelectionStrategy, StreamUpdate, WeightDist, ZipfSpec};

use crate::algo::{AlgoParams, Algorithm};
use crate::experiments::{compare, parse_quantile, quantile_sweep, CompareConfig, Sizing, SweepConfig};
use crate::harness::{exact_counts, report_row, run_timed, verify};
use crate::merge::{merge_bench, MergeConfig, MergeMethod};
use crate::report::{write_reports, BenchReport};
use crate::space::space_bytes;

/// Phi values checked by `--verify` in addition to `--phi`.
pub const VERIFY_PHIS: [f64; 3] = [0.001, 0.01, 0.1];

#[derive(Debug, Parser)]
#[command(name = "freqbench", version, about = "Benchmarks and verifies weighted frequent-items summaries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a Zipfian stream file.
    Gen(GenArgs),
    /// Run one algorithm over a stream and report one CSV row.
    Run(RunArgs),
    /// Compare algorithms at equal counters or equal space.
    Compare(CompareArgs),
    /// Sweep the decrement quantile of the sampled sketch.
    QuantileSweep(SweepArgs),
    /// Time pairwise merges against the Agarwal-style merges.
    MergeBench(MergeArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ZipfArgs {
    /// Number of distinct items the generator draws from.
    #[arg(long, default_value_t = 1_000_000)]
    pub universe: u64,
    /// Zipf skew.
    #[arg(long, default_value_t = 1.05)]
    pub alpha: f64,
    /// Number of updates.
    #[arg(long, default_value_t = 1_000_000)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub min_weight: i64,
    #[arg(long, default_value_t = 10_000)]
    pub max_weight: i64,
    #[arg(long, default_value_t = 0)]
    pub stream_seed: u64,
}

impl ZipfArgs {
    pub fn spec(&self) -> ZipfSpec {
        let weights = if self.min_weight == self.max_weight {
            WeightDist::Constant(self.min_weight)
        } else {
            WeightDist::UniformInt(self.min_weight, self.max_weight)
        };
        ZipfSpec {
            universe: self.universe,
            alpha: self.alpha,
            length: self.length,
            weights,
            seed: self.stream_seed,
        }
    }
}

/// A stream file, or a generated stream when no file is given.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Stream file, one "item weight" pair per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub zipf: ZipfArgs,
}

impl SourceArgs {
    pub fn load(&self) -> Result<Vec<StreamUpdate>> {
        Ok(match &self.input {
            Some(path) => read_stream(path).with_context(|| format!("reading {}", path.display()))?,
            None => zipf_stream(&self.zipf.spec())?,
        })
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub zipf: ZipfArgs,
    #[arg(long, short)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Algorithm,
    #[arg(long)]
    pub k: usize,
    /// Decrement rank for `med`; defaults to k/2.
    #[arg(long)]
    pub kstar: Option<u32>,
    /// Decrement quantile for `smed`.
    #[arg(long, default_value_t = 0.5)]
    pub quantile: f64,
    /// Sample size for `smed` and `smin`.
    #[arg(long, default_value_t = freqsketch::DEFAULT_SAMPLE_SIZE)]
    pub ell: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// List heavy hitters at this fraction of the stream weight (to stderr).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Error mode of the heavy-hitter listing.
    #[arg(long, value_enum, default_value_t = ModeArg::NoFalseNegatives)]
    pub mode: ModeArg,
    /// Check bounds and heavy-hitter containment against exact counts.
    #[arg(long)]
    pub verify: bool,
    /// Append the CSV row to this file instead of printing it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ModeArg {
    NoFalseNegatives,
    NoFalsePositives,
}

impl From<ModeArg> for ErrorMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::NoFalseNegatives => ErrorMode::NoFalseNegatives,
            ModeArg::NoFalsePositives => ErrorMode::NoFalsePositives,
        }
    }
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated algorithms.
    #[arg(long, value_enum, value_delimiter = ',', required = true, num_args = 1..)]
    pub algos: Vec<Algorithm>,
    /// Equal counters: every algorithm gets k counters.
    #[arg(long, conflicts_with = "space_budget", required_unless_present = "space_budget")]
    pub k: Option<usize>,
    /// Equal space: every algorithm gets the largest k fitting this many bytes.
    #[arg(long)]
    pub space_budget: Option<u64>,
    #[arg(long)]
    pub kstar: Option<u32>,
    #[arg(long, default_value_t = 0.5)]
    pub quantile: f64,
    #[arg(long, default_value_t = freqsketch::DEFAULT_SAMPLE_SIZE)]
    pub ell: u32,
    #[arg(long, default_value_t = 10)]
    pub repeats: u32,
    /// Base seed; randomized algorithms use seed + repeat.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated counter counts.
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub k: Vec<usize>,
    /// Comma-separated quantiles in [0, 1].
    #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
    pub quantiles: Vec<f64>,
    #[arg(long, default_value_t = freqsketch::DEFAULT_SAMPLE_SIZE)]
    pub ell: u32,
    #[arg(long, default_value_t = 1)]
    pub repeats: u32,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
}

#[derive(Debug, Args)]
pub struct MergeArgs {
    #[arg(long, default_value_t = 1 << 14)]
    pub k: usize,
    #[arg(long, default_value_t = 50)]
    pub pairs: usize,
    /// Comma-separated merge methods.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = MergeMethod::ALL.to_vec())]
    pub method: Vec<MergeMethod>,
    /// Use exact-rank sketches with this k* instead of sampled medians.
    #[arg(long)]
    pub kstar: Option<u32>,
    #[arg(long, default_value_t = 1.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub universe: u64,
    /// Updates per sketch.
    #[arg(long, default_value_t = 100_000)]
    pub length: usize,
    #[arg(long, default_value_t = 1)]
    pub min_weight: i64,
    #[arg(long, default_value_t = 10_000)]
    pub max_weight: i64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(rows: &[BenchReport], out: Option<&Path>) -> Result<()> {
    match out {
        None => write_reports(io::stdout().lock(), rows),
        Some(path) => {
            let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
            let file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            if fresh {
                write_reports(file, rows)
            } else {
                let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(file);
                for row in rows {
                    row.validate()?;
                    writer.serialize(row)?;
                }
                writer.flush()?;
                Ok(())
            }
        }
    }
}

pub fn cmd_gen(args: &GenArgs) -> Result<()> {
    let updates = zipf_stream(&args.zipf.spec())?;
    write_stream(&args.out, &updates).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(())
}

pub fn cmd_run(args: &RunArgs) -> Result<BenchReport> {
    let updates = args.source.load()?;
    let params = AlgoParams {
        algorithm: args.algo,
        k: args.k,
        k_star: args.kstar,
        ell: args.ell,
        quantile: parse_quantile(args.quantile)?,
        seed: args.seed,
    };
    let outcome = run_timed(&params, &updates)?;
    let oracle = exact_counts(&updates)?;
    let row = report_row(&params, Some(0), &outcome, &oracle, updates.len());
    if let Some(phi) = args.phi {
        let threshold = oracle.threshold(phi);
        let rows = outcome.summary.frequent_items(args.mode.into(), threshold);
        let mut err = io::stderr().lock();
        writeln!(err, "# heavy hitters at phi={phi} (threshold {threshold}), mode {:?}", args.mode)?;
        writeln!(err, "item,lower,upper")?;
        for b in rows {
            writeln!(err, "{},{},{}", b.item, b.lower, b.upper)?;
        }
    }
    if args.verify {
        let mut phis = VERIFY_PHIS.to_vec();
        phis.extend(args.phi);
        let violations = verify(&outcome.summary, &oracle, &phis)?;
        if !violations.is_empty() {
            let shown: Vec<_> = violations.iter().take(10).cloned().collect();
            bail!("verification failed ({} violations):\n  {}", violations.len(), shown.join("\n  "));
        }
    }
    emit(std::slice::from_ref(&row), args.out.as_deref())?;
    Ok(row)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<Vec<BenchReport>> {
    let sizing = match (args.k, args.space_budget) {
        (Some(k), None) => Sizing::Counters(k),
        (None, Some(bytes)) => Sizing::SpaceBudget(bytes),
        _ => bail!("give exactly one of --k and --space-budget"),
    };
    let updates = args.source.load()?;
    let oracle = exact_counts(&updates)?;
    let config = CompareConfig {
        k_star: args.kstar,
        ell: args.ell,
        quantile: parse_quantile(args.quantile)?,
        repeats: args.repeats,
        seed: args.seed,
        ..CompareConfig::new(args.algos.clone(), sizing)
    };
    let rows = compare(&updates, &oracle, &config)?;
    emit(&rows, args.out.as_deref())?;
    Ok(rows)
}

pub fn cmd_quantile_sweep(args: &SweepArgs) -> Result<Vec<BenchReport>> {
    let updates = args.source.load()?;
    let oracle = exact_counts(&updates)?;
    let config = SweepConfig {
        ks: args.k.clone(),
        quantiles: args.quantiles.clone(),
        ell: args.ell,
        repeats: args.repeats,
        seed: args.seed,
    };
    let (rows, trends) = quantile_sweep(&updates, &oracle, &config)?;
    for t in &trends {
        let show = |r: Option<f64>| r.map_or("n/a".to_string(), |v| format!("{v:.3}"));
        eprintln!(
            "# k={}: rank correlation with q: error {}, time {}",
            t.k,
            show(t.error_vs_q),
            show(t.time_vs_q)
        );
    }
    emit(&rows, args.out.as_deref())?;
    Ok(rows)
}

pub fn cmd_merge_bench(args: &MergeArgs) -> Result<Vec<BenchReport>> {
    let strategy = match args.kstar {
        Some(k_star) => SelectionStrategy::ExactRank { k_star },
        None => SelectionStrategy::sample_median(),
    };
    let weights = if args.min_weight == args.max_weight {
        WeightDist::Constant(args.min_weight)
    } else {
        WeightDist::UniformInt(args.min_weight, args.max_weight)
    };
    let config = MergeConfig {
        k: args.k,
        strategy,
        pairs: args.pairs,
        universe: args.universe,
        alpha: args.alpha,
        length: args.length,
        weights,
        seed: args.seed,
        methods: args.method.clone(),
    };
    let (kstar, ell, q) = match strategy {
        SelectionStrategy::ExactRank { k_star } => (Some(k_star), None, None),
        SelectionStrategy::SampledQuantile { ell, quantile } => (None, Some(ell), Some(quantile.as_f64())),
    };
    let rows: Vec<BenchReport> = merge_bench(&config)?
        .into_iter()
        .map(|o| {
            let time_s = o.total_time.as_secs_f64();
            BenchReport {
                algo: format!("merge-{}", o.method),
                k: args.k as u64,
                kstar,
                ell,
                q,
                n: o.total_updates,
                total_weight: o.total_weight as u64,
                seed: args.seed,
                repeat: None,
                time_s,
                updates_per_s: if time_s > 0.0 { o.merged_counters as f64 / time_s } else { 0.0 },
                decrements: 0.0,
                max_err: o.max_err as f64,
                space_bytes: space_bytes(Algorithm::Smed, args.k).unwrap_or(0),
            }
        })
        .collect();
    emit(&rows, args.out.as_deref())?;
    Ok(rows)
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(args) => cmd_gen(args),
        Command::Run(args) => cmd_run(args).map(drop),
        Command::Compare(args) => cmd_compare(args).map(drop),
        Command::QuantileSweep(args) => cmd_quantile_sweep(args).map(drop),
        Command::MergeBench(args) => cmd_merge_bench(args).map(drop),
    }
}
