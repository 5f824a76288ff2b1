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

//! The algorithm comparison and the quantile sweep.

use anyhow::{bail, ensure, Context, Result};
use freqsketch::{ExactCounts, Quantile, StreamUpdate};

use crate::algo::{AlgoParams, Algorithm};
use crate::harness::{report_row, run_timed, rank_correlation};
use crate::report::BenchReport;
use crate::space::k_for_budget;

/// How each algorithm's counter count is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sizing {
    /// Every algorithm gets `k` counters.
    Counters(usize),
    /// Every algorithm gets the largest `k` fitting the byte budget.
    SpaceBudget(u64),
}

impl Sizing {
    pub fn k_for(self, algorithm: Algorithm) -> Result<usize> {
        match self {
            Sizing::Counters(k) => Ok(k),
            Sizing::SpaceBudget(bytes) => k_for_budget(algorithm, bytes)
                .with_context(|| format!("budget of {bytes} bytes fits no {algorithm} summary")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompareConfig {
    pub algorithms: Vec<Algorithm>,
    pub sizing: Sizing,
    pub k_star: Option<u32>,
    pub ell: u32,
    pub quantile: Quantile,
    pub repeats: u32,
    pub seed: u64,
}

impl CompareConfig {
    pub fn new(algorithms: Vec<Algorithm>, sizing: Sizing) -> Self {
        Self {
            algorithms,
            sizing,
            k_star: None,
            ell: freqsketch::DEFAULT_SAMPLE_SIZE,
            quantile: Quantile::MEDIAN,
            repeats: 10,
            seed: 0,
        }
    }

    fn params(&self, algorithm: Algorithm, repeat: u32) -> Result<AlgoParams> {
        let seed = if algorithm.is_randomized() {
            self.seed.wrapping_add(u64::from(repeat))
        } else {
            self.seed
        };
        Ok(AlgoParams {
            algorithm,
            k: self.sizing.k_for(algorithm)?,
            k_star: self.k_star,
            ell: self.ell,
            quantile: self.quantile,
            seed,
        })
    }
}

/// Runs every algorithm `repeats` times, round-robin so that slow drift in
/// machine speed is shared. Rows come out grouped by algorithm, each group
/// followed by its summary row.
pub fn compare(
    updates: &[StreamUpdate],
    oracle: &ExactCounts,
    config: &CompareConfig,
) -> Result<Vec<BenchReport>> {
    ensure!(!config.algorithms.is_empty(), "no algorithms given");
    ensure!(config.repeats >= 1, "repeats must be at least 1");
    for &algo in &config.algorithms {
        crate::harness::check_compatible(algo, updates)?;
    }
    let mut groups: Vec<Vec<BenchReport>> = vec![Vec::new(); config.algorithms.len()];
    for repeat in 0..config.repeats {
        for (group, &algo) in groups.iter_mut().zip(&config.algorithms) {
            let params = config.params(algo, repeat)?;
            let outcome = run_timed(&params, updates)?;
            group.push(report_row(&params, Some(repeat), &outcome, oracle, updates.len()));
        }
    }
    let mut rows = Vec::new();
    for group in groups {
        let summary = BenchReport::summarize(&group);
        rows.extend(group);
        rows.extend(summary);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ks: Vec<usize>,
    pub quantiles: Vec<f64>,
    pub ell: u32,
    pub repeats: u32,
    pub seed: u64,
}

/// Per-`k` trend of error and time against the quantile.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepTrend {
    pub k: usize,
    /// Rank correlation of mean max error with `q`.
    pub error_vs_q: Option<f64>,
    /// Rank correlation of mean time with `q`.
    pub time_vs_q: Option<f64>,
}

pub fn parse_quantile(q: f64) -> Result<Quantile> {
    if !(0.0..=1.0).contains(&q) {
        bail!("quantile {q} outside [0, 1]");
    }
    Ok(Quantile::from_f64(q)?)
}

/// Runs sampled-quantile sketches for every `(k, q)` pair. Returns the rows
/// (one per repeat, plus a summary row per pair when `repeats > 1`) and the
/// per-`k` trends.
pub fn quantile_sweep(
    updates: &[StreamUpdate],
    oracle: &ExactCounts,
    config: &SweepConfig,
) -> Result<(Vec<BenchReport>, Vec<SweepTrend>)> {
    ensure!(!config.ks.is_empty() && !config.quantiles.is_empty(), "empty sweep");
    ensure!(config.repeats >= 1, "repeats must be at least 1");
    let quantiles: Vec<Quantile> =
        config.quantiles.iter().map(|&q| parse_quantile(q)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut trends = Vec::new();
    for &k in &config.ks {
        let (mut qs, mut errs, mut times) = (Vec::new(), Vec::new(), Vec::new());
        for &quantile in &quantiles {
            let mut group = Vec::new();
            for repeat in 0..config.repeats {
                let params = AlgoParams {
                    quantile,
                    ell: config.ell,
                    seed: config.seed.wrapping_add(u64::from(repeat)),
                    ..AlgoParams::new(Algorithm::Smed, k)
                };
                let outcome = run_timed(&params, updates)?;
                group.push(report_row(&params, Some(repeat), &outcome, oracle, updates.len()));
            }
            let summary = BenchReport::summarize(&group).expect("at least one repeat");
            qs.push(quantile.as_f64());
            errs.push(summary.max_err);
            times.push(summary.time_s);
            rows.extend(group);
            if config.repeats > 1 {
                rows.push(summary);
            }
        }
        trends.push(SweepTrend {
            k,
            error_vs_q: rank_correlation(&qs, &errs),
            time_vs_q: rank_correlation(&qs, &times),
        });
    }
    Ok((rows, trends))
}
