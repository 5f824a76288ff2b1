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

//! Pairwise merge benchmark: fills pairs of sketches from independent
//! Zipfian streams, merges each pair with every method, and measures merge
//! time and post-merge error against the exact counts of both streams.

use std::fmt;
use std::time::{Duration, Instant};

use anyhow::{ensure, Result};
use clap::ValueEnum;
use freqsketch::baselines::{ach_merge_quickselect, ach_merge_sort};
use freqsketch::streamgen::zipf_stream;
use freqsketch::{SelectionStrategy, Sketch, Weight, WeightDist, ZipfSpec};

use crate::harness::exact_counts;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum MergeMethod {
    /// Replay one sketch's counters into the other.
    Ours,
    /// Sum counters, sort, subtract the (k+1)-th largest.
    AchSort,
    /// As `ach-sort`, with quickselect in place of the sort.
    AchQs,
}

impl MergeMethod {
    pub const ALL: [MergeMethod; 3] = [MergeMethod::Ours, MergeMethod::AchSort, MergeMethod::AchQs];

    pub fn name(self) -> &'static str {
        match self {
            MergeMethod::Ours => "ours",
            MergeMethod::AchSort => "ach-sort",
            MergeMethod::AchQs => "ach-qs",
        }
    }

    pub fn merge(self, s1: Sketch, s2: Sketch) -> Result<Sketch> {
        let k = s1.capacity();
        Ok(match self {
            MergeMethod::Ours => {
                let mut merged = s1;
                merged.merge(s2)?;
                merged
            }
            MergeMethod::AchSort => ach_merge_sort(&s1, &s2, k)?,
            MergeMethod::AchQs => ach_merge_quickselect(&s1, &s2, k)?,
        })
    }
}

impl fmt::Display for MergeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeConfig {
    pub k: usize,
    pub strategy: SelectionStrategy,
    pub pairs: usize,
    pub universe: u64,
    pub alpha: f64,
    /// Updates per sketch.
    pub length: usize,
    pub weights: WeightDist,
    pub seed: u64,
    pub methods: Vec<MergeMethod>,
}

impl MergeConfig {
    pub fn new(k: usize, pairs: usize) -> Self {
        Self {
            k,
            strategy: SelectionStrategy::sample_median(),
            pairs,
            universe: 1_000_000,
            alpha: 1.05,
            length: 100_000,
            weights: WeightDist::UniformInt(1, 10_000),
            seed: 0,
            methods: MergeMethod::ALL.to_vec(),
        }
    }
}

/// Totals for one method over all pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    pub method: MergeMethod,
    pub total_time: Duration,
    /// Largest post-merge `f_i - lower(i)` over all pairs.
    pub max_err: Weight,
    /// Largest post-merge error relative to `(N - C) / k*` for exact-rank
    /// sketches, over all pairs.
    pub worst_bound_ratio: Option<f64>,
    /// Counters held by both inputs, over all pairs.
    pub merged_counters: u64,
    pub total_updates: u64,
    pub total_weight: Weight,
}

fn stream_spec(config: &MergeConfig, index: u64) -> ZipfSpec {
    ZipfSpec {
        universe: config.universe,
        alpha: config.alpha,
        length: config.length,
        weights: config.weights,
        seed: config.seed.wrapping_mul(1_000_003).wrapping_add(index),
    }
}

/// Runs the benchmark. Methods are interleaved within each pair so that
/// drift in machine speed affects all of them alike.
pub fn merge_bench(config: &MergeConfig) -> Result<Vec<MergeOutcome>> {
    ensure!(config.pairs >= 1, "pairs must be at least 1");
    ensure!(!config.methods.is_empty(), "no merge methods given");
    let mut outcomes: Vec<MergeOutcome> = config
        .methods
        .iter()
        .map(|&method| MergeOutcome {
            method,
            total_time: Duration::ZERO,
            max_err: 0,
            worst_bound_ratio: None,
            merged_counters: 0,
            total_updates: 0,
            total_weight: 0,
        })
        .collect();
    for pair in 0..config.pairs as u64 {
        let a = zipf_stream(&stream_spec(config, 2 * pair))?;
        let b = zipf_stream(&stream_spec(config, 2 * pair + 1))?;
        let fill = |updates: &[freqsketch::StreamUpdate], seed| -> Result<Sketch> {
            let mut s = Sketch::with_seed(config.k, config.strategy, seed)?;
            for u in updates {
                s.update(u.item, u.weight)?;
            }
            Ok(s)
        };
        let s1 = fill(&a, 2 * pair + 1)?;
        let s2 = fill(&b, 2 * pair + 2)?;
        let mut both = a;
        both.extend_from_slice(&b);
        let oracle = exact_counts(&both)?;
        for outcome in &mut outcomes {
            let (c1, c2) = (s1.clone(), s2.clone());
            let counters = (c1.num_active() + c2.num_active()) as u64;
            let start = Instant::now();
            let merged = outcome.method.merge(c1, c2)?;
            outcome.total_time += start.elapsed();
            let err = oracle.max_lower_error(|item| merged.lower_bound(item));
            outcome.max_err = outcome.max_err.max(err);
            if let SelectionStrategy::ExactRank { k_star } = merged.strategy() {
                let gap = (merged.stream_weight() - merged.stored_weight()) as f64;
                let ratio = err as f64 * k_star as f64 / gap.max(1.0);
                outcome.worst_bound_ratio = Some(outcome.worst_bound_ratio.unwrap_or(0.0).max(ratio));
            }
            outcome.merged_counters += counters;
            outcome.total_updates += both.len() as u64;
            outcome.total_weight += oracle.total();
        }
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_smoke_run_respects_bound() {
        let config = MergeConfig {
            strategy: SelectionStrategy::ExactRank { k_star: 32 },
            length: 5_000,
            universe: 2_000,
            ..MergeConfig::new(64, 1)
        };
        let outcomes = merge_bench(&config).unwrap();
        assert_eq!(outcomes.len(), 3);
        for o in &outcomes {
            assert!(o.worst_bound_ratio.unwrap() <= 1.0, "{}: {:?}", o.method, o.worst_bound_ratio);
            assert_eq!(o.total_updates, 10_000);
        }
        // both agarwal variants produce identical sketches
        assert_eq!(outcomes[1].max_err, outcomes[2].max_err);
    }

    #[test]
    fn rejects_zero_pairs() {
        assert!(merge_bench(&MergeConfig::new(8, 0)).is_err());
    }
}
