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

//! Exact frequency counting and error metrics.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::{Item, Weight};

/// Exact per-item frequencies and total stream weight.
#[derive(Debug, Clone, Default)]
pub struct ExactCounts {
    counts: HashMap<Item, Weight>,
    total: Weight,
}

impl ExactCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn ingest(&mut self, item: Item, delta: Weight) -> Result<()> {
        if delta <= 0 {
            return Err(Error::NonPositiveWeight(delta));
        }
        let total = self.total.checked_add(delta).ok_or(Error::WeightOverflow)?;
        let count = self.counts.entry(item).or_insert(0);
        *count = count.checked_add(delta).ok_or(Error::WeightOverflow)?;
        self.total = total;
        Ok(())
    }

    /// Exact frequency, 0 for unseen items.
    pub fn frequency(&self, item: Item) -> Weight {
        self.counts.get(&item).copied().unwrap_or(0)
    }

    /// Total weight `N`.
    pub fn total(&self) -> Weight {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, Weight)> + '_ {
        self.counts.iter().map(|(&item, &count)| (item, count))
    }

    /// Frequencies in descending order.
    pub fn sorted_frequencies(&self) -> Vec<Weight> {
        let mut freqs: Vec<Weight> = self.counts.values().copied().collect();
        freqs.sort_unstable_by(|a, b| b.cmp(a));
        freqs
    }

    /// `N^res(j)`: total weight minus the `j` largest frequencies.
    pub fn residual_weight(&self, j: usize) -> Weight {
        self.total - self.sorted_frequencies().iter().take(j).sum::<Weight>()
    }

    /// Residual weights for several `j` at once, sorting only once.
    pub fn residual_weights(&self, js: &[usize]) -> Vec<Weight> {
        let freqs = self.sorted_frequencies();
        js.iter()
            .map(|&j| self.total - freqs.iter().take(j).sum::<Weight>())
            .collect()
    }

    /// `max_i (f_i - probe(i))` over every seen item and the extra `unseen`
    /// identifiers (whose true frequency is taken from the counts, usually 0).
    /// Returns 0 for an empty oracle with no extra probes.
    pub fn max_error<F>(&self, probe: F, unseen: impl IntoIterator<Item = Item>) -> Weight
    where
        F: Fn(Item) -> Weight,
    {
        let seen = self.counts.iter().map(|(&item, &f)| f - probe(item));
        let extra = unseen.into_iter().map(|item| self.frequency(item) - probe(item));
        seen.chain(extra).max().unwrap_or(0)
    }

    /// [`Self::max_error`] with the standard panel of never-seen identifiers.
    pub fn max_lower_error<F>(&self, probe: F) -> Weight
    where
        F: Fn(Item) -> Weight,
    {
        let panel = self.unseen_panel(100);
        self.max_error(probe, panel)
    }

    /// `n` identifiers that do not occur in the stream, counted down from
    /// `u64::MAX`.
    pub fn unseen_panel(&self, n: usize) -> Vec<Item> {
        (0..=u64::MAX)
            .rev()
            .filter(|item| !self.counts.contains_key(item))
            .take(n)
            .collect()
    }

    /// Smallest integer weight `t` with `t >= phi * N`.
    pub fn threshold(&self, phi: f64) -> Weight {
        (phi * self.total as f64).ceil() as Weight
    }

    /// Items with `f_i >= phi * N`.
    pub fn heavy_hitters(&self, phi: f64) -> Result<HashSet<Item>> {
        if !(0.0..=1.0).contains(&phi) {
            return Err(Error::InvalidParameter(format!("phi {phi} is not in [0, 1]")));
        }
        let threshold = self.threshold(phi);
        Ok(self
            .counts
            .iter()
            .filter(|(_, &f)| f >= threshold)
            .map(|(&item, _)| item)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn oracle(pairs: &[(Item, Weight)]) -> ExactCounts {
        let mut o = ExactCounts::new();
        for &(item, w) in pairs {
            o.ingest(item, w).unwrap();
        }
        o
    }

    #[test]
    fn ingest_examples() {
        let o = oracle(&[(1, 5), (2, 3), (1, 2)]);
        assert_eq!((o.frequency(1), o.frequency(2), o.total()), (7, 3, 10));
        assert_eq!(ExactCounts::new().total(), 0);
        assert_eq!(ExactCounts::new().ingest(1, 0), Err(Error::NonPositiveWeight(0)));
    }

    #[test]
    fn total_matches_independent_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut o = ExactCounts::new();
        let mut sum = 0;
        for _ in 0..10_000 {
            let w = rng.random_range(1..1000);
            sum += w;
            o.ingest(rng.random_range(0..300), w).unwrap();
        }
        assert_eq!(o.total(), sum);
        assert_eq!(o.iter().map(|(_, f)| f).sum::<Weight>(), sum);
    }

    #[test]
    fn residuals() {
        let o = oracle(&[(1, 7), (2, 3)]);
        assert_eq!(o.residual_weight(1), 3);
        assert_eq!(o.residual_weight(0), 10);
        assert_eq!(o.residual_weight(5), 0);
        let ties = oracle(&[(1, 5), (2, 5), (3, 2)]);
        assert_eq!(ties.residual_weight(1), 7);
        assert_eq!(ties.residual_weights(&[0, 1, 2, 3]), vec![12, 7, 2, 0]);
    }

    #[test]
    fn max_error_examples() {
        let o = oracle(&[(1, 9), (2, 7), (3, 5), (4, 3), (5, 4)]);
        assert_eq!(o.max_lower_error(|item| o.frequency(item)), 0);
        // the MED trace leaves only item 1 with count 2
        assert_eq!(o.max_lower_error(|item| if item == 1 { 2 } else { 0 }), 7);
        assert_eq!(ExactCounts::new().max_lower_error(|_| 0), 0);
        assert_eq!(o.unseen_panel(3), vec![u64::MAX, u64::MAX - 1, u64::MAX - 2]);
    }

    #[test]
    fn heavy_hitter_examples() {
        let o = oracle(&[(1, 7), (2, 3)]);
        assert_eq!(o.heavy_hitters(0.5).unwrap(), HashSet::from([1]));
        assert_eq!(o.heavy_hitters(0.0).unwrap(), HashSet::from([1, 2]));
        assert_eq!(o.heavy_hitters(0.7).unwrap(), HashSet::from([1]));
        assert!(o.heavy_hitters(1.5).is_err());
    }
}
