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

//! Model-based space accounting.
//!
//! A counter table of `L` slots costs 18 bytes per slot: an 8-byte item,
//! an 8-byte count and a 2-byte probe state. Heap-based summaries add a
//! 16-byte `(count, item)` heap entry per counter on top of their index
//! table.

use freqsketch::table::table_len_for;

use crate::algo::Algorithm;

pub const TABLE_SLOT_BYTES: u64 = 18;
pub const HEAP_ENTRY_BYTES: u64 = 16;

/// Modelled bytes for `algorithm` with `k` counters.
pub fn space_bytes(algorithm: Algorithm, k: usize) -> Option<u64> {
    let table = TABLE_SLOT_BYTES * table_len_for(k)? as u64;
    Some(if algorithm.is_table_only() {
        table
    } else {
        table + HEAP_ENTRY_BYTES * k as u64
    })
}

/// Largest `k` whose modelled space fits in `budget` bytes, if any does.
pub fn k_for_budget(algorithm: Algorithm, budget: u64) -> Option<usize> {
    let mut best = None;
    // table lengths are powers of two; the largest k for length L is 3L/4
    let mut len: u64 = 2;
    while TABLE_SLOT_BYTES * len <= budget && len <= 1 << 31 {
        let by_table = (3 * len / 4) as usize;
        let k = if algorithm.is_table_only() {
            by_table
        } else {
            let rest = (budget - TABLE_SLOT_BYTES * len) / HEAP_ENTRY_BYTES;
            by_table.min(rest as usize)
        };
        if k >= 1 && space_bytes(algorithm, k).is_some_and(|b| b <= budget) {
            best = best.max(Some(k));
        }
        len *= 2;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_only_cost_is_eighteen_bytes_per_slot() {
        // k = 3L/4 fills the table to exactly 24 bytes per counter
        assert_eq!(space_bytes(Algorithm::Smed, 768), Some(24 * 768));
        assert_eq!(space_bytes(Algorithm::Rbmc, 1024), Some(18 * 2048));
        assert_eq!(space_bytes(Algorithm::Mhe, 768), Some(18 * 1024 + 16 * 768));
    }

    #[test]
    fn budget_inversion() {
        assert_eq!(k_for_budget(Algorithm::Smed, 24 * 768), Some(768));
        assert_eq!(k_for_budget(Algorithm::Smed, 24 * 768 - 1), Some(384));
        assert_eq!(k_for_budget(Algorithm::Mhe, 18 * 2048), Some(768));
        assert_eq!(k_for_budget(Algorithm::Mhe, 10), None);
    }

    #[test]
    fn budget_choice_is_maximal() {
        for algo in [Algorithm::Smed, Algorithm::Mhe] {
            for budget in (40..20_000).step_by(37) {
                if let Some(k) = k_for_budget(algo, budget) {
                    assert!(space_bytes(algo, k).unwrap() <= budget);
                    assert!(space_bytes(algo, k + 1).unwrap() > budget, "{algo} {budget}");
                } else {
                    assert!(space_bytes(algo, 1).unwrap() > budget);
                }
            }
        }
    }
}
