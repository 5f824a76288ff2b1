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

//! Expected linear-time selection.

use rand::Rng;

/// Returns the element of zero-based ascending rank `rank`, counting
/// duplicates with multiplicity. May reorder `data`.
///
/// Quickselect with a random pivot and a three-way partition, so runs of
/// equal counts (common after decrements) do not degrade to quadratic time.
///
/// # Panics
///
/// Panics if `rank >= data.len()`.
pub fn select_nth_smallest<T: Ord + Copy, R: Rng + ?Sized>(
    data: &mut [T],
    rank: usize,
    rng: &mut R,
) -> T {
    assert!(rank < data.len(), "rank {rank} out of range for {} elements", data.len());
    // the extremes need one scan and no reordering
    if rank == 0 {
        return *data.iter().min().expect("non-empty");
    }
    if rank == data.len() - 1 {
        return *data.iter().max().expect("non-empty");
    }
    let mut lo = 0;
    let mut hi = data.len();
    loop {
        if hi - lo == 1 {
            return data[lo];
        }
        let pivot = data[rng.random_range(lo..hi)];
        // [lo, lt) < pivot, [lt, i) == pivot, [gt, hi) > pivot
        let mut lt = lo;
        let mut i = lo;
        let mut gt = hi;
        while i < gt {
            if data[i] < pivot {
                data.swap(lt, i);
                lt += 1;
                i += 1;
            } else if data[i] > pivot {
                gt -= 1;
                data.swap(i, gt);
            } else {
                i += 1;
            }
        }
        if rank < lt {
            hi = lt;
        } else if rank >= gt {
            lo = gt;
        } else {
            return pivot;
        }
    }
}

/// Returns the `n`-th largest element (1-based), counting multiplicity.
pub fn select_nth_largest<T: Ord + Copy, R: Rng + ?Sized>(
    data: &mut [T],
    n: usize,
    rng: &mut R,
) -> T {
    assert!(n >= 1 && n <= data.len(), "n = {n} out of range for {} elements", data.len());
    let rank = data.len() - n;
    select_nth_smallest(data, rank, rng)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(select_nth_largest(&mut [9, 7, 5, 3], 2, &mut rng), 7);
        assert_eq!(select_nth_smallest(&mut [5, 1, 9, 3, 7], 2, &mut rng), 5);
        assert_eq!(select_nth_smallest(&mut [5, 1, 9, 3, 7], 0, &mut rng), 1);
        assert_eq!(select_nth_smallest(&mut [5, 1, 9, 3, 7], 3, &mut rng), 7);
        assert_eq!(select_nth_largest(&mut [4, 4, 4, 1], 3, &mut rng), 4);
        assert_eq!(select_nth_largest(&mut [4, 4, 4, 1], 4, &mut rng), 1);
    }

    #[test]
    #[should_panic]
    fn rank_out_of_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        select_nth_smallest(&mut [1, 2], 2, &mut rng);
    }

    proptest! {
        #[test]
        fn agrees_with_sorting(
            mut data in prop::collection::vec(0i64..20, 1..200),
            rank_frac in 0.0f64..1.0,
            seed: u64,
        ) {
            let rank = ((data.len() as f64) * rank_frac) as usize;
            let mut sorted = data.clone();
            sorted.sort_unstable();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prop_assert_eq!(select_nth_smallest(&mut data, rank, &mut rng), sorted[rank]);
        }
    }
}
