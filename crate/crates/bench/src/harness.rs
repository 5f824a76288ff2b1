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

//! Timed runs, error measurement and oracle verification.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use freqsketch::{ErrorMode, ExactCounts, StreamUpdate, Weight};

use crate::algo::{AlgoParams, Algorithm, Bounds, Summary};
use crate::report::BenchReport;
use crate::space::space_bytes;

/// A summary after ingesting a stream, with the time the updates took.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub summary: Summary,
    pub elapsed: Duration,
    /// False when a time cap stopped the run early; `elapsed` is then a
    /// lower bound on the full run's time.
    pub completed: bool,
}

/// Updates between checks of the time cap.
const CAP_CHECK_BLOCK: usize = 1 << 14;

pub fn exact_counts(updates: &[StreamUpdate]) -> Result<ExactCounts> {
    let mut oracle = ExactCounts::new();
    for u in updates {
        oracle.ingest(u.item, u.weight)?;
    }
    Ok(oracle)
}

/// Rejects weighted input for the unit-weight algorithms.
pub fn check_compatible(algorithm: Algorithm, updates: &[StreamUpdate]) -> Result<()> {
    if algorithm.requires_unit_weights() {
        if let Some((line, u)) = updates.iter().enumerate().find(|(_, u)| u.weight != 1) {
            bail!(
                "{algorithm} requires unit-weight input, but update {} has weight {}; \
                 use rtuc-{algorithm} for weighted streams",
                line + 1,
                u.weight
            );
        }
    }
    Ok(())
}

/// Builds the summary and times only the update loop.
pub fn run_timed(params: &AlgoParams, updates: &[StreamUpdate]) -> Result<RunOutcome> {
    check_compatible(params.algorithm, updates)?;
    let mut summary = params.build()?;
    let start = Instant::now();
    summary.ingest(updates)?;
    let elapsed = start.elapsed();
    Ok(RunOutcome { summary, elapsed, completed: true })
}

/// Like [`run_timed`], but stops once `cap` has elapsed. A stopped run's
/// summary covers only a prefix of the stream.
pub fn run_timed_capped(
    params: &AlgoParams,
    updates: &[StreamUpdate],
    cap: Duration,
) -> Result<RunOutcome> {
    check_compatible(params.algorithm, updates)?;
    let mut summary = params.build()?;
    let start = Instant::now();
    for block in updates.chunks(CAP_CHECK_BLOCK) {
        summary.ingest(block)?;
        if start.elapsed() >= cap {
            let elapsed = start.elapsed();
            return Ok(RunOutcome { summary, elapsed, completed: false });
        }
    }
    let elapsed = start.elapsed();
    Ok(RunOutcome { summary, elapsed, completed: true })
}

/// Largest `f_i - lower(i)` over the stream's items and a panel of unseen
/// identifiers.
pub fn max_lower_error(summary: &Summary, oracle: &ExactCounts) -> Weight {
    oracle.max_lower_error(|item| summary.lower_bound(item))
}

/// One CSV row for a finished run.
pub fn report_row(
    params: &AlgoParams,
    repeat: Option<u32>,
    outcome: &RunOutcome,
    oracle: &ExactCounts,
    n: usize,
) -> BenchReport {
    let time_s = outcome.elapsed.as_secs_f64();
    let strategy = params.strategy();
    let (kstar, ell, q) = match strategy {
        Some(freqsketch::SelectionStrategy::ExactRank { k_star }) => (Some(k_star), None, None),
        Some(freqsketch::SelectionStrategy::SampledQuantile { ell, quantile }) => {
            (None, Some(ell), Some(quantile.as_f64()))
        }
        None => (None, None, None),
    };
    BenchReport {
        algo: params.algorithm.name().to_string(),
        k: params.k as u64,
        kstar,
        ell,
        q,
        n: n as u64,
        total_weight: oracle.total() as u64,
        seed: params.seed,
        repeat,
        time_s,
        updates_per_s: if time_s > 0.0 { n as f64 / time_s } else { 0.0 },
        decrements: outcome.summary.decrement_count() as f64,
        max_err: max_lower_error(&outcome.summary, oracle) as f64,
        space_bytes: space_bytes(params.algorithm, params.k).unwrap_or(0),
    }
}

/// Checks the summary against exact counts: `lower <= f <= upper` for
/// every stream item and a panel of unseen ones, and heavy-hitter
/// containment in both error modes at each `phi`. Returns one message per
/// violation.
pub fn verify(summary: &Summary, oracle: &ExactCounts, phis: &[f64]) -> Result<Vec<String>> {
    let mut violations = Vec::new();
    let bounds: HashMap<_, Bounds> = summary.bounds().into_iter().map(|b| (b.item, b)).collect();
    let slack = summary.unassigned_upper();
    let seen = oracle.iter().map(|(item, _)| item);
    for item in seen.chain(oracle.unseen_panel(100)) {
        let f = oracle.frequency(item);
        let (lower, upper) = match bounds.get(&item) {
            Some(b) => (b.lower, b.upper),
            None => (0, slack),
        };
        if lower != summary.lower_bound(item) {
            violations.push(format!("item {item}: inconsistent lower bound"));
        }
        if !(lower <= f && f <= upper) {
            violations.push(format!("item {item}: f = {f} outside [{lower}, {upper}]"));
        }
    }
    for &phi in phis {
        let exact = oracle.heavy_hitters(phi)?;
        let threshold = oracle.threshold(phi);
        for row in summary.frequent_items(ErrorMode::NoFalsePositives, threshold) {
            if !exact.contains(&row.item) {
                violations.push(format!("phi {phi}: false positive {}", row.item));
            }
        }
        // unassigned items can only qualify when the threshold is within slack
        if threshold > slack {
            let listed: Vec<_> = summary
                .frequent_items(ErrorMode::NoFalseNegatives, threshold)
                .into_iter()
                .map(|b| b.item)
                .collect();
            for item in &exact {
                if !listed.contains(item) {
                    violations.push(format!("phi {phi}: missed heavy hitter {item}"));
                }
            }
        }
    }
    Ok(violations)
}

/// Spearman rank correlation of two equal-length samples, with average
/// ranks for ties. `None` when either sample is constant or too short.
pub fn rank_correlation(xs: &[f64], ys: &[f64]) -> Option<f64> {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut order: Vec<usize> = (0..v.len()).collect();
        order.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < order.len() {
            let mut j = i;
            while j + 1 < order.len() && v[order[j + 1]] == v[order[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0;
            for &idx in &order[i..=j] {
                r[idx] = avg;
            }
            i = j + 1;
        }
        r
    }
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        return None;
    }
    Some(cov / (vx * vy).sqrt())
}
