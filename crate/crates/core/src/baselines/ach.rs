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

//! Agarwal-style merge: sum counters into a scratch table, keep the top `k`.
//!
//! The `(k+1)`-th largest summed count is subtracted from the survivors
//! (and added to the offset). Everything tied with it drops out, so the
//! sort and quickselect variants always keep the same set.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::select::select_nth_largest;
use crate::sketch::Sketch;
use crate::table::CounterTable;
use crate::{Item, Weight};

fn summed_counts(s1: &Sketch, s2: &Sketch) -> Result<CounterTable> {
    let mut scratch = CounterTable::new(s1.capacity() + s2.capacity())?;
    for (item, count) in s1.entries().chain(s2.entries()) {
        scratch.upsert_add(item, count)?;
    }
    Ok(scratch)
}

fn assemble(
    s1: &Sketch,
    s2: &Sketch,
    k: usize,
    cut: Weight,
    survivors: impl IntoIterator<Item = (Item, Weight)>,
) -> Result<Sketch> {
    let offset = s1
        .offset()
        .checked_add(s2.offset())
        .and_then(|o| o.checked_add(cut))
        .ok_or(Error::WeightOverflow)?;
    let stream_weight = s1
        .stream_weight()
        .checked_add(s2.stream_weight())
        .ok_or(Error::WeightOverflow)?;
    let strategy = match s1.strategy() {
        crate::SelectionStrategy::ExactRank { k_star } => crate::SelectionStrategy::ExactRank {
            k_star: k_star.min(k as u32),
        },
        other => other,
    };
    Sketch::from_parts(
        k,
        strategy,
        s1.seed(),
        offset,
        stream_weight,
        survivors
            .into_iter()
            .filter(|&(_, count)| count > cut)
            .map(|(item, count)| (item, count - cut)),
    )
}

/// Merge by sorting all summed counters.
pub fn ach_merge_sort(s1: &Sketch, s2: &Sketch, k: usize) -> Result<Sketch> {
    let scratch = summed_counts(s1, s2)?;
    let mut pairs: Vec<(Item, Weight)> = scratch.iter().collect();
    pairs.sort_unstable_by(|a, b| b.1.cmp(&a.1));
    let cut = pairs.get(k).map_or(0, |&(_, count)| count);
    pairs.truncate(k);
    assemble(s1, s2, k, cut, pairs)
}

/// Merge that finds the `(k+1)`-th largest count with quickselect, then
/// keeps the larger counters in one more pass.
pub fn ach_merge_quickselect(s1: &Sketch, s2: &Sketch, k: usize) -> Result<Sketch> {
    let scratch = summed_counts(s1, s2)?;
    let cut = if scratch.len() > k {
        let mut counts = Vec::with_capacity(scratch.len());
        scratch.counts_into(&mut counts);
        let mut rng = ChaCha8Rng::seed_from_u64(s1.seed() ^ s2.seed());
        select_nth_largest(&mut counts, k + 1, &mut rng)
    } else {
        0
    };
    assemble(s1, s2, k, cut, scratch.iter())
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::SelectionStrategy;

    fn sketch(seed: u64, entries: &[(Item, Weight)]) -> Sketch {
        let mut s = Sketch::with_seed(4, SelectionStrategy::sample_median(), seed).unwrap();
        for &(item, w) in entries {
            s.update(item, w).unwrap();
        }
        s
    }

    #[test]
    fn keeps_top_k_of_summed_counts() {
        let s1 = sketch(1, &[(1, 3), (2, 1)]);
        let s2 = sketch(2, &[(1, 2), (3, 4)]);
        for merged in [ach_merge_sort(&s1, &s2, 2).unwrap(), ach_merge_quickselect(&s1, &s2, 2).unwrap()] {
            // summed {1:5, 2:1, 3:4}; third largest (1) is subtracted
            let entries: BTreeMap<_, _> = merged.entries().collect();
            assert_eq!(entries, BTreeMap::from([(1, 4), (3, 3)]));
            assert_eq!(merged.offset(), 1);
            assert_eq!(merged.stream_weight(), 10);
            assert_eq!((merged.upper_bound(1), merged.upper_bound(3)), (5, 4));
        }
    }

    #[test]
    fn empty_input_keeps_other() {
        let s1 = sketch(1, &[(1, 3), (2, 1), (3, 2)]);
        let empty = sketch(2, &[]);
        let merged = ach_merge_sort(&s1, &empty, 4).unwrap();
        assert_eq!(
            merged.entries().collect::<BTreeMap<_, _>>(),
            s1.entries().collect::<BTreeMap<_, _>>()
        );
        let merged = ach_merge_quickselect(&empty, &s1, 2).unwrap();
        assert_eq!(merged.entries().collect::<BTreeMap<_, _>>(), BTreeMap::from([(1, 2), (3, 1)]));
    }

    #[test]
    fn ties_at_the_cut_drop_out_in_both_variants() {
        let s1 = sketch(1, &[(1, 5), (2, 2), (3, 2)]);
        let s2 = sketch(2, &[(4, 2)]);
        let a = ach_merge_sort(&s1, &s2, 2).unwrap();
        let b = ach_merge_quickselect(&s1, &s2, 2).unwrap();
        let expected = BTreeMap::from([(1, 3)]);
        assert_eq!(a.entries().collect::<BTreeMap<_, _>>(), expected);
        assert_eq!(b.entries().collect::<BTreeMap<_, _>>(), expected);
    }
}
