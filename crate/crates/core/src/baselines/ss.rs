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

//! Space Saving for unit updates, with a linear scan for the minimum.
//!
//! Deliberately simple: it serves as the reference that the heap-based
//! weighted variant is checked against.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::{FrequencySummary, Item, Weight};

use super::UnitSummary;

#[derive(Debug, Clone)]
pub struct SsSummary {
    items: Vec<Item>,
    counts: Vec<Weight>,
    index: HashMap<Item, usize>,
    capacity: usize,
    stream_len: Weight,
}

impl SsSummary {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroCapacity);
        }
        Ok(Self {
            items: Vec::with_capacity(k),
            counts: Vec::with_capacity(k),
            index: HashMap::with_capacity(k),
            capacity: k,
            stream_len: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.items.len() == self.capacity
    }

    /// Smallest counter once all `k` are assigned, 0 before that.
    pub fn min_count(&self) -> Weight {
        if self.is_full() {
            self.counts.iter().copied().min().unwrap_or(0)
        } else {
            0
        }
    }

    pub fn count_sum(&self) -> Weight {
        self.counts.iter().sum()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Item, Weight)> + '_ {
        self.items.iter().copied().zip(self.counts.iter().copied())
    }

    /// Assigned counter, otherwise the minimum counter when full.
    pub fn estimate(&self, item: Item) -> Weight {
        match self.index.get(&item) {
            Some(&slot) => self.counts[slot],
            None => self.min_count(),
        }
    }
}

impl UnitSummary for SsSummary {
    fn unit_update(&mut self, item: Item) -> Result<()> {
        self.stream_len += 1;
        if let Some(&slot) = self.index.get(&item) {
            self.counts[slot] += 1;
        } else if !self.is_full() {
            self.index.insert(item, self.items.len());
            self.items.push(item);
            self.counts.push(1);
        } else {
            // minimum count, ties to the smallest item
            let slot = (0..self.counts.len())
                .min_by_key(|&s| (self.counts[s], self.items[s]))
                .expect("full summary has counters");
            self.index.remove(&self.items[slot]);
            self.items[slot] = item;
            self.counts[slot] += 1;
            self.index.insert(item, slot);
        }
        Ok(())
    }
}

impl FrequencySummary for SsSummary {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        super::require_unit(weight)?;
        self.unit_update(item)
    }

    /// `c(i) - min`, a valid lower bound since an item's overcount never
    /// exceeds the minimum at the time it took its counter.
    fn lower_bound(&self, item: Item) -> Weight {
        match self.index.get(&item) {
            Some(&slot) => self.counts[slot] - self.min_count(),
            None => 0,
        }
    }

    fn estimate(&self, item: Item) -> Weight {
        SsSummary::estimate(self, item)
    }

    fn decrement_count(&self) -> u64 {
        0
    }

    fn stream_weight(&self) -> Weight {
        self.stream_len
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn third_item_takes_a_minimum_counter() {
        let mut ss = SsSummary::new(2).unwrap();
        for item in [1, 2, 3] {
            ss.unit_update(item).unwrap();
        }
        assert_eq!(ss.estimate(3), 2);
        // tie between 1 and 2 goes to the smaller item
        assert_eq!(ss.estimate(2), 1);
        assert_eq!(ss.estimate(1), 1);
        assert_eq!(ss.count_sum(), 3);
    }

    #[test]
    fn unseen_item_is_overestimated_when_full() {
        let mut ss = SsSummary::new(2).unwrap();
        ss.unit_update(1).unwrap();
        assert_eq!(ss.estimate(99), 0);
        for item in [1, 2, 2, 3] {
            ss.unit_update(item).unwrap();
        }
        assert!(ss.estimate(99) > 0);
        assert_eq!(ss.count_sum(), 5);
    }
}
