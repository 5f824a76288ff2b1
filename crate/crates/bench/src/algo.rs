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

//! The benchmarked algorithms behind one enum, so the timed update loop is
//! monomorphized per algorithm rather than dispatched per update.

use std::fmt;

use anyhow::{bail, Result};
use clap::ValueEnum;
use freqsketch::baselines::{MgSummary, MheSummary, RbmcSummary, Rtuc, SsSummary};
use freqsketch::{
    ErrorMode, FrequencySummary, Item, Quantile, SelectionStrategy, Sketch, StreamUpdate, Weight,
    DEFAULT_SAMPLE_SIZE,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algorithm {
    /// Sampled-quantile decrements (quantile from `--quantile`, default median).
    Smed,
    /// Sampled-minimum decrements.
    Smin,
    /// Exact k*-th largest decrements.
    Med,
    /// Reduce by the minimum counter.
    Rbmc,
    /// Heap-based weighted Space Saving.
    Mhe,
    /// Unit-weight Misra-Gries.
    Mg,
    /// Unit-weight Space Saving.
    Ss,
    /// Misra-Gries with weights expanded into unit updates.
    RtucMg,
    /// Space Saving with weights expanded into unit updates.
    RtucSs,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::Smed,
        Algorithm::Smin,
        Algorithm::Med,
        Algorithm::Rbmc,
        Algorithm::Mhe,
        Algorithm::Mg,
        Algorithm::Ss,
        Algorithm::RtucMg,
        Algorithm::RtucSs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Smed => "smed",
            Algorithm::Smin => "smin",
            Algorithm::Med => "med",
            Algorithm::Rbmc => "rbmc",
            Algorithm::Mhe => "mhe",
            Algorithm::Mg => "mg",
            Algorithm::Ss => "ss",
            Algorithm::RtucMg => "rtuc-mg",
            Algorithm::RtucSs => "rtuc-ss",
        }
    }

    pub fn requires_unit_weights(self) -> bool {
        matches!(self, Algorithm::Mg | Algorithm::Ss)
    }

    /// Whether the summary draws random samples, so repeats reseed it.
    pub fn is_randomized(self) -> bool {
        matches!(self, Algorithm::Smed | Algorithm::Smin)
    }

    /// Whether all state lives in one counter table (no heap or side index).
    pub fn is_table_only(self) -> bool {
        !matches!(self, Algorithm::Mhe | Algorithm::Ss | Algorithm::RtucSs)
    }

    pub fn parse(name: &str) -> Result<Self> {
        match Algorithm::from_str(name, true) {
            Ok(algo) => Ok(algo),
            Err(_) => bail!("unknown algorithm {name:?}"),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Everything needed to construct one summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlgoParams {
    pub algorithm: Algorithm,
    pub k: usize,
    /// Rank for `med`; `k / 2` when absent.
    pub k_star: Option<u32>,
    pub ell: u32,
    /// Quantile for `smed`.
    pub quantile: Quantile,
    pub seed: u64,
}

impl AlgoParams {
    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        Self {
            algorithm,
            k,
            k_star: None,
            ell: DEFAULT_SAMPLE_SIZE,
            quantile: Quantile::MEDIAN,
            seed: 0,
        }
    }

    /// The sketch strategy for the sketch-based algorithms.
    pub fn strategy(&self) -> Option<SelectionStrategy> {
        match self.algorithm {
            Algorithm::Smed => Some(SelectionStrategy::SampledQuantile {
                ell: self.ell,
                quantile: self.quantile,
            }),
            Algorithm::Smin => Some(SelectionStrategy::SampledQuantile {
                ell: self.ell,
                quantile: Quantile::MIN,
            }),
            Algorithm::Med => Some(match self.k_star {
                Some(k_star) => SelectionStrategy::ExactRank { k_star },
                None => SelectionStrategy::exact_median(self.k),
            }),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Summary> {
        let k = self.k;
        Ok(match self.algorithm {
            Algorithm::Smed | Algorithm::Smin | Algorithm::Med => {
                let strategy = self.strategy().expect("sketch algorithm");
                Summary::Sketch(Sketch::with_seed(k, strategy, self.seed)?)
            }
            Algorithm::Rbmc => Summary::Rbmc(RbmcSummary::new(k)?),
            Algorithm::Mhe => Summary::Mhe(MheSummary::new(k)?),
            Algorithm::Mg => Summary::Mg(MgSummary::new(k)?),
            Algorithm::Ss => Summary::Ss(SsSummary::new(k)?),
            Algorithm::RtucMg => Summary::RtucMg(Rtuc(MgSummary::new(k)?)),
            Algorithm::RtucSs => Summary::RtucSs(Rtuc(SsSummary::new(k)?)),
        })
    }
}

/// A constructed summary of any benchmarked algorithm.
#[derive(Debug, Clone)]
pub enum Summary {
    Sketch(Sketch),
    Rbmc(RbmcSummary),
    Mhe(MheSummary),
    Mg(MgSummary),
    Ss(SsSummary),
    RtucMg(Rtuc<MgSummary>),
    RtucSs(Rtuc<SsSummary>),
}

/// Per-item bounds of an assigned counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    pub item: Item,
    pub lower: Weight,
    pub upper: Weight,
}

fn feed<S: FrequencySummary>(s: &mut S, updates: &[StreamUpdate]) -> freqsketch::Result<()> {
    for u in updates {
        s.update(u.item, u.weight)?;
    }
    Ok(())
}

fn mg_slack(mg: &MgSummary) -> Weight {
    // Misra-Gries never undercounts by more than (N - C) / (k + 1)
    let stored: Weight = mg.table().iter().map(|(_, c)| c).sum();
    (mg.stream_weight() - stored) / (mg.capacity() as Weight + 1)
}

impl Summary {
    /// Applies every update in order.
    pub fn ingest(&mut self, updates: &[StreamUpdate]) -> freqsketch::Result<()> {
        match self {
            Summary::Sketch(s) => feed(s, updates),
            Summary::Rbmc(s) => feed(s, updates),
            Summary::Mhe(s) => feed(s, updates),
            Summary::Mg(s) => feed(s, updates),
            Summary::Ss(s) => feed(s, updates),
            Summary::RtucMg(s) => feed(s, updates),
            Summary::RtucSs(s) => feed(s, updates),
        }
    }

    fn as_dyn(&self) -> &dyn FrequencySummary {
        match self {
            Summary::Sketch(s) => s,
            Summary::Rbmc(s) => s,
            Summary::Mhe(s) => s,
            Summary::Mg(s) => s,
            Summary::Ss(s) => s,
            Summary::RtucMg(s) => s,
            Summary::RtucSs(s) => s,
        }
    }

    pub fn lower_bound(&self, item: Item) -> Weight {
        self.as_dyn().lower_bound(item)
    }

    pub fn decrement_count(&self) -> u64 {
        self.as_dyn().decrement_count()
    }

    pub fn stream_weight(&self) -> Weight {
        self.as_dyn().stream_weight()
    }

    /// Largest true frequency an item without a counter can have.
    pub fn unassigned_upper(&self) -> Weight {
        match self {
            Summary::Sketch(s) => s.offset(),
            Summary::Rbmc(s) => s.offset(),
            Summary::Mhe(s) => s.min_count(),
            Summary::Mg(s) | Summary::RtucMg(Rtuc(s)) => mg_slack(s),
            Summary::Ss(s) | Summary::RtucSs(Rtuc(s)) => s.min_count(),
        }
    }

    /// Bounds for every assigned item.
    pub fn bounds(&self) -> Vec<Bounds> {
        let entries: Vec<(Item, Weight)> = match self {
            Summary::Sketch(s) => s.entries().collect(),
            Summary::Rbmc(s) => s.table().iter().collect(),
            Summary::Mhe(s) => s.entries().collect(),
            Summary::Mg(s) | Summary::RtucMg(Rtuc(s)) => s.table().iter().collect(),
            Summary::Ss(s) | Summary::RtucSs(Rtuc(s)) => s.entries().collect(),
        };
        let slack = self.unassigned_upper();
        let heap_like = matches!(self, Summary::Mhe(_) | Summary::Ss(_) | Summary::RtucSs(_));
        entries
            .into_iter()
            .map(|(item, c)| {
                if heap_like {
                    Bounds { item, lower: c - slack, upper: c }
                } else {
                    Bounds { item, lower: c, upper: c + slack }
                }
            })
            .collect()
    }

    /// Assigned items whose chosen bound reaches `threshold`, sorted by
    /// bound descending then item ascending.
    pub fn frequent_items(&self, mode: ErrorMode, threshold: Weight) -> Vec<Bounds> {
        let mut rows: Vec<Bounds> = self
            .bounds()
            .into_iter()
            .filter(|b| match mode {
                ErrorMode::NoFalseNegatives => b.upper >= threshold,
                ErrorMode::NoFalsePositives => b.lower >= threshold,
            })
            .collect();
        rows.sort_by_key(|b| (std::cmp::Reverse(b.upper), b.item));
        rows
    }
}
