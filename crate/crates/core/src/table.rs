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

//! Linear-probing counter table with bulk decrement.
//!
//! Keys, counts and probe states live in three parallel arrays of length
//! `L`, the smallest power of two holding `4k/3` slots, so the table never
//! exceeds a 3/4 load factor. A state of zero marks an empty slot; a state
//! `v > 0` means the key sits `v - 1` slots past its home slot.
//!
//! Deletion is backward-shift only (no tombstones), which is what lets
//! [`CounterTable::decrement_and_compact`] purge in a single sweep.

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::{Item, Weight};

/// Largest probe displacement the 16-bit state array may record.
pub const MAX_DISPLACEMENT: usize = 1 << 14;

const MAX_TABLE_LEN: usize = 1 << 31;

/// Slots scanned at a time for deletion candidates.
const DELETE_SCAN_CHUNK: usize = 64;

/// Result of [`CounterTable::upsert_add`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Upsert {
    /// The item was already present; holds its new count.
    Added(Weight),
    /// The item was inserted with the given delta as its count.
    Inserted,
    /// The item is absent and all `k` counters are assigned. Nothing changed.
    TableFull,
}

/// 64-bit avalanche mixer (splitmix64 finalizer).
#[inline]
pub fn mix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Number of slots used for a table with capacity `k`, or `None` when it
/// would exceed the addressable range.
pub fn table_len_for(k: usize) -> Option<usize> {
    let min_len = k.checked_mul(4)?.div_ceil(3);
    let len = min_len.checked_next_power_of_two()?;
    (len <= MAX_TABLE_LEN).then_some(len)
}

#[derive(Debug, Clone)]
pub struct CounterTable {
    keys: Vec<Item>,
    counts: Vec<Weight>,
    states: Vec<u16>,
    capacity: usize,
    mask: usize,
    size: usize,
    hash_seed: u64,
}

impl CounterTable {
    pub fn new(k: usize) -> Result<Self> {
        Self::with_hash_seed(k, 0)
    }

    pub fn with_hash_seed(k: usize, hash_seed: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroCapacity);
        }
        let len = table_len_for(k).ok_or(Error::CapacityTooLarge(k))?;
        Ok(Self {
            keys: vec![0; len],
            counts: vec![0; len],
            states: vec![0; len],
            capacity: k,
            mask: len - 1,
            size: 0,
            hash_seed,
        })
    }

    /// Maximum number of assigned counters.
    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Number of slots `L`.
    pub fn table_len(&self) -> usize {
        self.states.len()
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn is_full(&self) -> bool {
        self.size == self.capacity
    }

    pub fn hash_seed(&self) -> u64 {
        self.hash_seed
    }

    /// Home slot of `item`.
    #[inline]
    pub fn home_slot(&self, item: Item) -> usize {
        (mix64(item ^ self.hash_seed) as usize) & self.mask
    }

    /// Returns `Ok(slot)` holding `item`, or `Err(slot)` with the first empty
    /// slot of its probe sequence.
    #[inline]
    fn find(&self, item: Item) -> std::result::Result<usize, usize> {
        let mut slot = self.home_slot(item);
        loop {
            if self.states[slot] == 0 {
                return Err(slot);
            }
            if self.keys[slot] == item {
                return Ok(slot);
            }
            slot = (slot + 1) & self.mask;
        }
    }

    pub fn lookup(&self, item: Item) -> Option<Weight> {
        self.find(item).ok().map(|slot| self.counts[slot])
    }

    pub fn contains(&self, item: Item) -> bool {
        self.find(item).is_ok()
    }

    pub fn upsert_add(&mut self, item: Item, delta: Weight) -> Result<Upsert> {
        if delta <= 0 {
            return Err(Error::NonPositiveWeight(delta));
        }
        match self.find(item) {
            Ok(slot) => {
                let count = self.counts[slot]
                    .checked_add(delta)
                    .ok_or(Error::WeightOverflow)?;
                self.counts[slot] = count;
                Ok(Upsert::Added(count))
            }
            Err(_) if self.size == self.capacity => Ok(Upsert::TableFull),
            Err(slot) => {
                self.occupy(slot, item, delta)?;
                Ok(Upsert::Inserted)
            }
        }
    }

    /// Inserts an absent item with an arbitrary positive value, ignoring the
    /// `k` limit check done by `upsert_add`. Used by baselines that store
    /// positions rather than counts.
    pub(crate) fn insert_absent(&mut self, item: Item, value: Weight) -> Result<()> {
        debug_assert!(value > 0);
        match self.find(item) {
            Ok(_) => Err(Error::InvalidParameter(format!("item {item} already present"))),
            Err(_) if self.size == self.capacity => Err(Error::InvalidParameter("table full".into())),
            Err(slot) => self.occupy(slot, item, value),
        }
    }

    pub(crate) fn value_mut(&mut self, item: Item) -> Option<&mut Weight> {
        match self.find(item) {
            Ok(slot) => Some(&mut self.counts[slot]),
            Err(_) => None,
        }
    }

    /// Removes `item`, returning its count.
    pub fn remove(&mut self, item: Item) -> Option<Weight> {
        let slot = self.find(item).ok()?;
        let count = self.counts[slot];
        self.delete_slot(slot);
        self.size -= 1;
        Some(count)
    }

    fn occupy(&mut self, slot: usize, item: Item, value: Weight) -> Result<()> {
        let displacement = slot.wrapping_sub(self.home_slot(item)) & self.mask;
        if displacement >= MAX_DISPLACEMENT {
            return Err(Error::ProbeOverflow(displacement));
        }
        self.keys[slot] = item;
        self.counts[slot] = value;
        self.states[slot] = displacement as u16 + 1;
        self.size += 1;
        Ok(())
    }

    /// Backward-shift deletion: pulls later members of the probe run into the
    /// hole until the run ends.
    fn delete_slot(&mut self, hole: usize) {
        let mut hole = hole;
        let mut probe = (hole + 1) & self.mask;
        while self.states[probe] != 0 {
            let displacement = self.states[probe] as usize - 1;
            let distance = probe.wrapping_sub(hole) & self.mask;
            if displacement >= distance {
                self.keys[hole] = self.keys[probe];
                self.counts[hole] = self.counts[probe];
                self.states[hole] = (displacement - distance + 1) as u16;
                hole = probe;
            }
            probe = (probe + 1) & self.mask;
        }
        self.states[hole] = 0;
    }

    /// Subtracts `amount` from every count and removes entries that drop to
    /// zero or below. Returns the number of removed entries.
    ///
    /// Deletion candidates are visited backwards starting just below an
    /// empty slot, so every entry a deletion shifts into a hole has already
    /// been checked.
    pub fn decrement_and_compact(&mut self, amount: Weight) -> Result<usize> {
        if amount <= 0 {
            return Err(Error::NonPositiveWeight(amount));
        }
        if self.size == 0 {
            return Ok(0);
        }
        let len = self.table_len();
        // size <= k < L, so an empty slot always exists.
        let boundary = (0..len)
            .rev()
            .find(|&slot| self.states[slot] == 0)
            .expect("load factor keeps at least one slot empty");
        // Subtract everywhere first; empty slots hold stale counts, so this
        // is harmless for them and keeps the pass branch-free.
        for count in &mut self.counts {
            *count = count.wrapping_sub(amount);
        }
        // Deletions only ever shift already-visited entries, which are
        // positive by then.
        let mut removed = 0;
        for range in [(0..boundary), (boundary + 1..len)] {
            let mut end = range.end;
            while end > range.start {
                let start = end.saturating_sub(DELETE_SCAN_CHUNK).max(range.start);
                let any = self.counts[start..end]
                    .iter()
                    .zip(&self.states[start..end])
                    .fold(false, |acc, (&count, &state)| acc | ((count <= 0) & (state != 0)));
                if any {
                    for slot in (start..end).rev() {
                        if self.states[slot] != 0 && self.counts[slot] <= 0 {
                            self.delete_slot(slot);
                            removed += 1;
                        }
                    }
                }
                end = start;
            }
        }
        self.size -= removed;
        Ok(removed)
    }

    /// Draws `min(ell, len)` counts uniformly with replacement from the
    /// occupied slots.
    pub fn sample_counts<R: RngCore + ?Sized>(
        &self,
        ell: usize,
        rng: &mut R,
    ) -> Result<Vec<Weight>> {
        let mut out = Vec::new();
        self.sample_counts_into(ell, rng, &mut out)?;
        Ok(out)
    }

    /// Like [`Self::sample_counts`] but reuses `out`.
    pub fn sample_counts_into<R: RngCore + ?Sized>(
        &self,
        ell: usize,
        rng: &mut R,
        out: &mut Vec<Weight>,
    ) -> Result<()> {
        if self.size == 0 {
            return Err(Error::EmptyTable);
        }
        let draws = ell.min(self.size);
        out.clear();
        if self.size * 4 >= self.table_len() {
            // Rejection sampling over slots; at least a quarter are occupied.
            // A rejected draw is overwritten by the next one.
            out.resize(draws, 0);
            let mut filled = 0;
            while filled < draws {
                let slot = (rng.next_u64() as usize) & self.mask;
                out[filled] = self.counts[slot];
                filled += usize::from(self.states[slot] != 0);
            }
        } else {
            out.reserve(draws);
            let occupied: Vec<usize> = (0..self.table_len())
                .filter(|&slot| self.states[slot] != 0)
                .collect();
            for _ in 0..draws {
                out.push(self.counts[occupied[rng.random_range(0..occupied.len())]]);
            }
        }
        Ok(())
    }

    /// Appends every count to `out` in slot order.
    pub fn counts_into(&self, out: &mut Vec<Weight>) {
        out.extend(
            self.states
                .iter()
                .zip(&self.counts)
                .filter(|(&state, _)| state != 0)
                .map(|(_, &count)| count),
        );
    }

    /// Smallest assigned count.
    pub fn min_count(&self) -> Option<Weight> {
        if self.size == 0 {
            return None;
        }
        self.states
            .iter()
            .zip(&self.counts)
            .map(|(&state, &count)| if state != 0 { count } else { Weight::MAX })
            .min()
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter { table: self, slot: 0 }
    }

    /// Largest displacement currently recorded in the state array.
    pub fn max_displacement(&self) -> usize {
        self.states
            .iter()
            .map(|&state| (state as usize).saturating_sub(1))
            .max()
            .unwrap_or(0)
    }

    /// Checks the structural invariants; returns a description of the first
    /// violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut occupied = 0;
        for slot in 0..self.table_len() {
            let state = self.states[slot];
            if state == 0 {
                continue;
            }
            occupied += 1;
            let item = self.keys[slot];
            let displacement = slot.wrapping_sub(self.home_slot(item)) & self.mask;
            if displacement + 1 != state as usize {
                return Err(format!("slot {slot}: state {state} but displacement {displacement}"));
            }
            if self.counts[slot] <= 0 {
                return Err(format!("slot {slot}: non-positive count {}", self.counts[slot]));
            }
            if self.find(item) != Ok(slot) {
                return Err(format!("slot {slot}: item {item} not reachable"));
            }
        }
        if occupied != self.size {
            return Err(format!("size {} but {occupied} occupied slots", self.size));
        }
        if self.size > self.capacity {
            return Err(format!("size {} exceeds capacity {}", self.size, self.capacity));
        }
        Ok(())
    }
}

/// Iterator over `(item, count)` pairs in slot order.
pub struct Iter<'a> {
    table: &'a CounterTable,
    slot: usize,
}

impl Iterator for Iter<'_> {
    type Item = (Item, Weight);

    fn next(&mut self) -> Option<Self::Item> {
        let table = self.table;
        while self.slot < table.table_len() {
            let slot = self.slot;
            self.slot += 1;
            if table.states[slot] != 0 {
                return Some((table.keys[slot], table.counts[slot]));
            }
        }
        None
    }
}

impl<'a> IntoIterator for &'a CounterTable {
    type Item = (Item, Weight);
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use std::collections::HashMap;

    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    /// Finds `n` distinct items sharing one home slot.
    fn colliding_items(table: &CounterTable, n: usize) -> Vec<Item> {
        let target = table.home_slot(1);
        (1..)
            .filter(|&item| table.home_slot(item) == target)
            .take(n)
            .collect()
    }

    #[test]
    fn table_len_examples() {
        assert_eq!(CounterTable::new(12).unwrap().table_len(), 16);
        assert_eq!(CounterTable::new(24).unwrap().table_len(), 32);
        assert_eq!(CounterTable::new(2).unwrap().table_len(), 4);
        assert_eq!(CounterTable::new(1).unwrap().table_len(), 2);
        assert_eq!(CounterTable::new(1536).unwrap().table_len(), 2048);
        assert_eq!(CounterTable::new(1537).unwrap().table_len(), 4096);
    }

    #[test]
    fn rejects_bad_capacity() {
        assert_eq!(CounterTable::new(0).unwrap_err(), Error::ZeroCapacity);
        assert!(matches!(
            CounterTable::new(usize::MAX / 2),
            Err(Error::CapacityTooLarge(_))
        ));
        assert!(table_len_for(3 << 29).is_some());
        assert!(table_len_for((3 << 29) + 1).is_none());
    }

    #[test]
    fn upsert_and_lookup() {
        let mut t = CounterTable::new(4).unwrap();
        assert_eq!(t.upsert_add(10, 5), Ok(Upsert::Inserted));
        assert_eq!(t.lookup(10), Some(5));
        assert_eq!(t.upsert_add(10, 2), Ok(Upsert::Added(7)));
        assert_eq!(t.lookup(11), None);
        assert_eq!(t.upsert_add(10, 0), Err(Error::NonPositiveWeight(0)));
        assert_eq!(t.upsert_add(10, -3), Err(Error::NonPositiveWeight(-3)));
    }

    #[test]
    fn full_table_is_unchanged() {
        let mut t = CounterTable::new(1).unwrap();
        t.upsert_add(1, 5).unwrap();
        assert_eq!(t.upsert_add(2, 3), Ok(Upsert::TableFull));
        assert_eq!(t.len(), 1);
        assert_eq!(t.lookup(1), Some(5));
        assert_eq!(t.lookup(2), None);
    }

    #[test]
    fn overflow_is_an_error() {
        let mut t = CounterTable::new(2).unwrap();
        t.upsert_add(1, Weight::MAX).unwrap();
        assert_eq!(t.upsert_add(1, 1), Err(Error::WeightOverflow));
        assert_eq!(t.lookup(1), Some(Weight::MAX));
    }

    #[test]
    fn colliding_keys_keep_their_counts() {
        let mut t = CounterTable::new(12).unwrap();
        let items = colliding_items(&t, 3);
        for (i, &item) in items.iter().enumerate() {
            t.upsert_add(item, 10 + i as Weight).unwrap();
        }
        for (i, &item) in items.iter().enumerate() {
            assert_eq!(t.lookup(item), Some(10 + i as Weight));
        }
        assert_eq!(t.max_displacement(), 2);
        t.check_invariants().unwrap();
    }

    #[test]
    fn decrement_example() {
        let mut t = CounterTable::new(4).unwrap();
        t.upsert_add(1, 5).unwrap();
        t.upsert_add(2, 2).unwrap();
        t.upsert_add(3, 7).unwrap();
        assert_eq!(t.decrement_and_compact(3), Ok(1));
        assert_eq!(t.lookup(1), Some(2));
        assert_eq!(t.lookup(3), Some(4));
        assert_eq!(t.lookup(2), None);
        assert_eq!(t.len(), 2);

        let mut t = CounterTable::new(4).unwrap();
        t.upsert_add(1, 5).unwrap();
        t.upsert_add(2, 2).unwrap();
        assert_eq!(t.decrement_and_compact(10), Ok(2));
        assert!(t.is_empty());
        assert_eq!(t.iter().count(), 0);
    }

    #[test]
    fn decrement_rejects_zero() {
        let mut t = CounterTable::new(4).unwrap();
        t.upsert_add(1, 5).unwrap();
        assert_eq!(t.decrement_and_compact(0), Err(Error::NonPositiveWeight(0)));
        assert_eq!(t.lookup(1), Some(5));
    }

    #[test]
    fn entry_behind_removed_collider_stays_reachable() {
        let mut t = CounterTable::new(12).unwrap();
        let items = colliding_items(&t, 3);
        t.upsert_add(items[0], 5).unwrap();
        t.upsert_add(items[1], 2).unwrap();
        t.upsert_add(items[2], 9).unwrap();
        assert_eq!(t.decrement_and_compact(2), Ok(1));
        assert_eq!(t.lookup(items[0]), Some(3));
        assert_eq!(t.lookup(items[1]), None);
        assert_eq!(t.lookup(items[2]), Some(7));
        t.check_invariants().unwrap();
        // first entry removed; the survivor moves back to its home slot
        assert_eq!(t.decrement_and_compact(3), Ok(1));
        assert_eq!(t.lookup(items[2]), Some(4));
        assert_eq!(t.max_displacement(), 0);
        t.check_invariants().unwrap();
    }

    #[test]
    fn runs_wrapping_past_the_end() {
        let mut t = CounterTable::new(12).unwrap();
        let last = t.table_len() - 1;
        let items: Vec<Item> = (1..)
            .filter(|&item| t.home_slot(item) == last)
            .take(4)
            .collect();
        for (i, &item) in items.iter().enumerate() {
            t.upsert_add(item, if i % 2 == 0 { 1 } else { 5 }).unwrap();
        }
        t.check_invariants().unwrap();
        assert_eq!(t.decrement_and_compact(1), Ok(2));
        assert_eq!(t.lookup(items[1]), Some(4));
        assert_eq!(t.lookup(items[3]), Some(4));
        t.check_invariants().unwrap();
    }

    #[test]
    fn remove_shifts_back() {
        let mut t = CounterTable::new(12).unwrap();
        let items = colliding_items(&t, 3);
        for &item in &items {
            t.upsert_add(item, 1).unwrap();
        }
        assert_eq!(t.remove(items[0]), Some(1));
        assert_eq!(t.remove(items[0]), None);
        t.check_invariants().unwrap();
        assert_eq!(t.lookup(items[2]), Some(1));
    }

    #[test]
    fn sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = CounterTable::new(4).unwrap();
        assert_eq!(t.sample_counts(3, &mut rng), Err(Error::EmptyTable));
        t.upsert_add(1, 5).unwrap();
        assert_eq!(t.sample_counts(3, &mut rng).unwrap(), vec![5]);
        t.upsert_add(2, 9).unwrap();
        let sample = t.sample_counts(1024, &mut rng).unwrap();
        assert_eq!(sample.len(), 2);
        assert!(sample.iter().all(|c| *c == 5 || *c == 9));

        let mut a = ChaCha8Rng::seed_from_u64(99);
        let mut b = ChaCha8Rng::seed_from_u64(99);
        let mut big = CounterTable::new(64).unwrap();
        for item in 0..64 {
            big.upsert_add(item, item as Weight + 1).unwrap();
        }
        assert_eq!(
            big.sample_counts(32, &mut a).unwrap(),
            big.sample_counts(32, &mut b).unwrap()
        );
    }

    #[test]
    fn sampling_is_roughly_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut t = CounterTable::new(8).unwrap();
        for item in 0..8 {
            t.upsert_add(item, item as Weight + 1).unwrap();
        }
        let mut hist = [0usize; 8];
        for _ in 0..4000 {
            for c in t.sample_counts(8, &mut rng).unwrap() {
                hist[c as usize - 1] += 1;
            }
        }
        // 4000 draws per value expected, sd ~ 59
        for h in hist {
            assert!((3700..4300).contains(&h), "{hist:?}");
        }
    }

    #[test]
    fn iterate_matches_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut t = CounterTable::new(16).unwrap();
        let mut reference: HashMap<Item, Weight> = HashMap::new();
        for _ in 0..500 {
            let item = rng.random_range(0..40);
            let delta = rng.random_range(1..20);
            match t.upsert_add(item, delta).unwrap() {
                Upsert::TableFull => {
                    let c = rng.random_range(1..15);
                    t.decrement_and_compact(c).unwrap();
                    reference.retain(|_, v| {
                        *v -= c;
                        *v > 0
                    });
                }
                _ => *reference.entry(item).or_default() += delta,
            }
            let got: HashMap<Item, Weight> = t.iter().collect();
            assert_eq!(got, reference);
            assert_eq!(t.len(), reference.len());
        }
    }
}
