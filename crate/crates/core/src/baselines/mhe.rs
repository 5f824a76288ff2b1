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

//! Space Saving with a min-heap, extended to weighted updates.
//!
//! Counters live in an array-backed binary min-heap ordered by
//! `(count, item)`, so the root is the minimum counter with the smallest
//! item. A [`CounterTable`] maps each assigned item to its heap position
//! (stored as position + 1, since the table only holds positive values).
//! Every update costs `O(log k)` sift steps.

use crate::error::{Error, Result};
use crate::table::CounterTable;
use crate::{FrequencySummary, Item, Weight};

#[derive(Debug, Clone)]
pub struct MheSummary {
    heap: Vec<(Weight, Item)>,
    positions: CounterTable,
    capacity: usize,
    stream_weight: Weight,
}

impl MheSummary {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self {
            heap: Vec::with_capacity(k),
            positions: CounterTable::new(k)?,
            capacity: k,
            stream_weight: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn is_full(&self) -> bool {
        self.heap.len() == self.capacity
    }

    pub fn min_count(&self) -> Weight {
        if self.is_full() {
            self.heap[0].0
        } else {
            0
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Item, Weight)> + '_ {
        self.heap.iter().map(|&(count, item)| (item, count))
    }

    fn position(&self, item: Item) -> Option<usize> {
        self.positions.lookup(item).map(|p| p as usize - 1)
    }

    pub fn count(&self, item: Item) -> Option<Weight> {
        self.position(item).map(|p| self.heap[p].0)
    }

    pub fn update(&mut self, item: Item, delta: Weight) -> Result<()> {
        if delta <= 0 {
            return Err(Error::NonPositiveWeight(delta));
        }
        let stream_weight = self
            .stream_weight
            .checked_add(delta)
            .ok_or(Error::WeightOverflow)?;
        if let Some(pos) = self.position(item) {
            let count = self.heap[pos].0.checked_add(delta).ok_or(Error::WeightOverflow)?;
            self.heap[pos].0 = count;
            self.sift_down(pos);
        } else if !self.is_full() {
            let pos = self.heap.len();
            self.heap.push((delta, item));
            self.positions.insert_absent(item, pos as Weight + 1)?;
            self.sift_up(pos);
        } else {
            let (min, evicted) = self.heap[0];
            let count = min.checked_add(delta).ok_or(Error::WeightOverflow)?;
            self.positions.remove(evicted);
            self.heap[0] = (count, item);
            self.positions.insert_absent(item, 1)?;
            self.sift_down(0);
        }
        self.stream_weight = stream_weight;
        Ok(())
    }

    fn set(&mut self, pos: usize, entry: (Weight, Item)) {
        self.heap[pos] = entry;
        *self
            .positions
            .value_mut(entry.1)
            .expect("heap item is indexed") = pos as Weight + 1;
    }

    fn sift_up(&mut self, mut pos: usize) {
        let entry = self.heap[pos];
        while pos > 0 {
            let parent = (pos - 1) / 2;
            if self.heap[parent] <= entry {
                break;
            }
            let moved = self.heap[parent];
            self.set(pos, moved);
            pos = parent;
        }
        self.set(pos, entry);
    }

    fn sift_down(&mut self, mut pos: usize) {
        let entry = self.heap[pos];
        let len = self.heap.len();
        loop {
            let left = 2 * pos + 1;
            if left >= len {
                break;
            }
            let right = left + 1;
            let child = if right < len && self.heap[right] < self.heap[left] {
                right
            } else {
                left
            };
            if self.heap[child] >= entry {
                break;
            }
            let moved = self.heap[child];
            self.set(pos, moved);
            pos = child;
        }
        self.set(pos, entry);
    }

    /// Verifies heap order and index consistency.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        for pos in 1..self.heap.len() {
            let parent = (pos - 1) / 2;
            if self.heap[parent] > self.heap[pos] {
                return Err(format!("heap order violated at {pos}"));
            }
        }
        for (pos, &(_, item)) in self.heap.iter().enumerate() {
            if self.position(item) != Some(pos) {
                return Err(format!("item {item} indexed at {:?}, stored at {pos}", self.position(item)));
            }
        }
        if self.positions.len() != self.heap.len() {
            return Err("index and heap sizes differ".into());
        }
        Ok(())
    }
}

impl FrequencySummary for MheSummary {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        MheSummary::update(self, item, weight)
    }

    fn lower_bound(&self, item: Item) -> Weight {
        self.count(item).map_or(0, |c| c - self.min_count())
    }

    /// Counter value, or the minimum counter for unassigned items.
    fn estimate(&self, item: Item) -> Weight {
        self.count(item).unwrap_or_else(|| self.min_count())
    }

    fn decrement_count(&self) -> u64 {
        0
    }

    fn stream_weight(&self) -> Weight {
        self.stream_weight
    }
}
