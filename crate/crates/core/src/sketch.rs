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

//! Weighted frequent-items sketch.
//!
//! A [`Sketch`] keeps at most `k` counters in a [`CounterTable`]. When an
//! unassigned item arrives at a full table, every counter is decremented by
//! a value `c*` chosen by the [`SelectionStrategy`], counters that reach
//! zero are released, and the item is inserted with whatever weight exceeds
//! `c*`. The running sum of all `c*` values is kept as `offset`, which is
//! the width of every item's frequency interval.
//!
//! With [`SelectionStrategy::ExactRank`], `c*` is the `k*`-th largest
//! counter and the guarantees are deterministic: for every item,
//! `f_i - lower_bound(i) <= (N - C) / k*`, where `C` is the sum of stored
//! counts. [`SelectionStrategy::SampledQuantile`] replaces the exact rank by
//! a quantile of `ell` sampled counters, which avoids the scratch copy of all
//! `k` counts and, at the median, keeps the same bound with `k* ~ k/3` with
//! overwhelming probability.

use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::select::{select_nth_largest, select_nth_smallest};
use crate::table::{mix64, CounterTable, Upsert};
use crate::{Item, Weight};

/// Sample size giving the tail guarantee at `0.33 k` for streams up to
/// `10^20` updates.
pub const DEFAULT_SAMPLE_SIZE: u32 = 1024;

const HASH_SEED_SALT: u64 = 0x6a09_e667_f3bc_c908;

/// A rational quantile `num / den` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quantile {
    num: u16,
    den: u16,
}

impl Quantile {
    pub const MIN: Quantile = Quantile { num: 0, den: 1 };
    pub const MEDIAN: Quantile = Quantile { num: 1, den: 2 };

    pub fn new(num: u16, den: u16) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!(
                "quantile {num}/{den} is not in [0, 1]"
            )));
        }
        Ok(Self { num, den })
    }

    /// Rounds `q` to the nearest multiple of `1/10000`.
    pub fn from_f64(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("quantile {q} is not in [0, 1]")));
        }
        Self::new((q * 10_000.0).round() as u16, 10_000)
    }

    pub fn numerator(self) -> u16 {
        self.num
    }

    pub fn denominator(self) -> u16 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Zero-based ascending rank `floor(q * (len - 1))`.
    pub fn rank(self, len: usize) -> usize {
        debug_assert!(len > 0);
        ((self.num as u128 * (len as u128 - 1)) / self.den as u128) as usize
    }
}

impl fmt::Display for Quantile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// How the decrement value `c*` is chosen when the table is full.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStrategy {
    /// `c*` is the `k_star`-th largest count, counting multiplicity.
    ExactRank { k_star: u32 },
    /// `c*` is the sample quantile of `ell` counts drawn with replacement.
    SampledQuantile { ell: u32, quantile: Quantile },
}

impl SelectionStrategy {
    /// Exact median rank, `k* = k / 2`.
    pub fn exact_median(k: usize) -> Self {
        SelectionStrategy::ExactRank { k_star: (k / 2).max(1) as u32 }
    }

    /// Sample median over the default sample size.
    pub fn sample_median() -> Self {
        SelectionStrategy::SampledQuantile {
            ell: DEFAULT_SAMPLE_SIZE,
            quantile: Quantile::MEDIAN,
        }
    }

    /// Sample minimum over the default sample size.
    pub fn sample_min() -> Self {
        SelectionStrategy::SampledQuantile {
            ell: DEFAULT_SAMPLE_SIZE,
            quantile: Quantile::MIN,
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        match *self {
            SelectionStrategy::ExactRank { k_star } => {
                if k_star == 0 || k_star as usize > k {
                    return Err(Error::InvalidParameter(format!(
                        "k* = {k_star} must be in [1, {k}]"
                    )));
                }
            }
            SelectionStrategy::SampledQuantile { ell, .. } => {
                if ell == 0 {
                    return Err(Error::InvalidParameter("sample size must be positive".into()));
                }
            }
        }
        Ok(())
    }
}

/// Whether a frequent-items query may report items below the threshold or
/// may omit items above it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorMode {
    /// Report items whose lower bound reaches the threshold.
    NoFalsePositives,
    /// Report items whose upper bound reaches the threshold.
    NoFalseNegatives,
}

/// One entry of a frequent-items query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Row {
    pub item: Item,
    pub estimate: Weight,
    pub lower: Weight,
    pub upper: Weight,
}

#[derive(Debug, Clone)]
pub struct Sketch {
    table: CounterTable,
    offset: Weight,
    stream_weight: Weight,
    strategy: SelectionStrategy,
    seed: u64,
    rng: ChaCha8Rng,
    decrements: u64,
    scratch: Vec<Weight>,
}

impl Sketch {
    /// Creates an empty sketch with `k` counters and seed 0.
    pub fn new(k: usize, strategy: SelectionStrategy) -> Result<Self> {
        Self::with_seed(k, strategy, 0)
    }

    /// Creates an empty sketch. The seed drives counter sampling, pivot
    /// choice and the table's hash function.
    pub fn with_seed(k: usize, strategy: SelectionStrategy, seed: u64) -> Result<Self> {
        strategy.validate(k)?;
        let table = CounterTable::with_hash_seed(k, mix64(seed ^ HASH_SEED_SALT))?;
        Ok(Self {
            table,
            offset: 0,
            stream_weight: 0,
            strategy,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            decrements: 0,
            scratch: Vec::new(),
        })
    }

    pub(crate) fn from_parts(
        k: usize,
        strategy: SelectionStrategy,
        seed: u64,
        offset: Weight,
        stream_weight: Weight,
        entries: impl IntoIterator<Item = (Item, Weight)>,
    ) -> Result<Self> {
        let mut sketch = Self::with_seed(k, strategy, seed)?;
        for (item, count) in entries {
            match sketch.table.upsert_add(item, count)? {
                Upsert::Inserted => {}
                Upsert::Added(_) => {
                    return Err(Error::InvalidParameter(format!("duplicate item {item}")))
                }
                Upsert::TableFull => {
                    return Err(Error::InvalidParameter(format!("more than {k} entries")))
                }
            }
        }
        sketch.offset = offset;
        sketch.stream_weight = stream_weight;
        Ok(sketch)
    }

    pub fn capacity(&self) -> usize {
        self.table.capacity()
    }

    pub fn strategy(&self) -> SelectionStrategy {
        self.strategy
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Sum of all decrement values applied so far.
    pub fn offset(&self) -> Weight {
        self.offset
    }

    /// Total weight `N` of the summarized stream.
    pub fn stream_weight(&self) -> Weight {
        self.stream_weight
    }

    /// Number of bulk decrements performed.
    pub fn decrement_count(&self) -> u64 {
        self.decrements
    }

    /// Number of assigned counters.
    pub fn num_active(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Sum `C` of the stored counts.
    pub fn stored_weight(&self) -> Weight {
        self.table.iter().map(|(_, count)| count).sum()
    }

    pub fn table(&self) -> &CounterTable {
        &self.table
    }

    /// Assigned `(item, count)` pairs in table order.
    pub fn entries(&self) -> impl Iterator<Item = (Item, Weight)> + '_ {
        self.table.iter()
    }

    pub fn update(&mut self, item: Item, delta: Weight) -> Result<()> {
        if delta <= 0 {
            return Err(Error::NonPositiveWeight(delta));
        }
        let stream_weight = self
            .stream_weight
            .checked_add(delta)
            .ok_or(Error::WeightOverflow)?;
        if self.table.upsert_add(item, delta)? != Upsert::TableFull {
            self.stream_weight = stream_weight;
            return Ok(());
        }
        let c_star = self.select_decrement_value()?;
        let offset = self.offset.checked_add(c_star).ok_or(Error::WeightOverflow)?;
        self.table.decrement_and_compact(c_star)?;
        self.offset = offset;
        self.stream_weight = stream_weight;
        self.decrements += 1;
        // A remainder of exactly zero is indistinguishable from unassigned.
        if delta > c_star {
            let outcome = self.table.upsert_add(item, delta - c_star)?;
            debug_assert_eq!(outcome, Upsert::Inserted);
        }
        Ok(())
    }

    /// Chooses the decrement value for a full table.
    pub fn select_decrement_value(&mut self) -> Result<Weight> {
        if !self.table.is_full() {
            return Err(Error::TableNotFull {
                size: self.table.len(),
                capacity: self.table.capacity(),
            });
        }
        let c_star = match self.strategy {
            SelectionStrategy::ExactRank { k_star } => {
                self.scratch.clear();
                self.table.counts_into(&mut self.scratch);
                select_nth_largest(&mut self.scratch, k_star as usize, &mut self.rng)
            }
            SelectionStrategy::SampledQuantile { ell, quantile } => {
                self.table
                    .sample_counts_into(ell as usize, &mut self.rng, &mut self.scratch)?;
                let rank = quantile.rank(self.scratch.len());
                select_nth_smallest(&mut self.scratch, rank, &mut self.rng)
            }
        };
        Ok(c_star)
    }

    /// Guaranteed lower bound on the item's frequency: its counter, or 0.
    pub fn lower_bound(&self, item: Item) -> Weight {
        self.table.lookup(item).unwrap_or(0)
    }

    /// Guaranteed upper bound on the item's frequency.
    pub fn upper_bound(&self, item: Item) -> Weight {
        self.lower_bound(item) + self.offset
    }

    /// Upper bound for assigned items, 0 for unassigned ones.
    pub fn estimate(&self, item: Item) -> Weight {
        match self.table.lookup(item) {
            Some(count) => count + self.offset,
            None => 0,
        }
    }

    /// Assigned items whose bound (selected by `mode`) is at least
    /// `threshold`, by descending estimate.
    ///
    /// Unassigned items are never listed, even when `threshold <= offset`
    /// makes their upper bound qualify.
    pub fn frequent_items(&self, mode: ErrorMode, threshold: Weight) -> Vec<Row> {
        let mut rows: Vec<Row> = self
            .table
            .iter()
            .map(|(item, count)| Row {
                item,
                estimate: count + self.offset,
                lower: count,
                upper: count + self.offset,
            })
            .filter(|row| match mode {
                ErrorMode::NoFalsePositives => row.lower >= threshold,
                ErrorMode::NoFalseNegatives => row.upper >= threshold,
            })
            .collect();
        rows.sort_by(|a, b| b.estimate.cmp(&a.estimate).then(a.item.cmp(&b.item)));
        rows
    }

    /// Merges `other` into `self` by replaying each of its counters as a
    /// weighted update.
    ///
    /// When both tables hash identically the replay order is shuffled, so
    /// the receiving table is not filled front to back in its own probe
    /// order. Afterwards the stream weight is that of the concatenated
    /// streams and the offset includes `other`'s offset, keeping both bounds
    /// valid.
    pub fn merge(&mut self, other: Sketch) -> Result<()> {
        let stream_weight = self
            .stream_weight
            .checked_add(other.stream_weight)
            .ok_or(Error::WeightOverflow)?;
        let mut entries: Vec<(Item, Weight)> = other.table.iter().collect();
        if self.table.hash_seed() == other.table.hash_seed() {
            entries.shuffle(&mut self.rng);
        }
        for (item, count) in entries {
            self.update(item, count)?;
        }
        self.offset = self
            .offset
            .checked_add(other.offset)
            .ok_or(Error::WeightOverflow)?;
        self.stream_weight = stream_weight;
        Ok(())
    }
}
