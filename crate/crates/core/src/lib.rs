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

//! Frequent-items estimation over weighted streams.
//!
//! The central type is [`Sketch`], a Misra-Gries style summary with `k`
//! counters that handles weighted updates in amortized constant time by
//! decrementing all counters by a quantile of a small random sample of
//! counters (or by an exact rank, for the deterministic variant). Sketches
//! can be merged along any aggregation tree by replaying one sketch's
//! counters into another.
//!
//! Alongside it live the comparison algorithms ([`baselines`]), an exact
//! oracle for error measurement ([`oracle`]) and a Zipfian stream generator
//! ([`streamgen`]).
//!
//! ```
//! use freqsketch::{ErrorMode, SelectionStrategy, Sketch};
//!
//! let mut sketch = Sketch::new(64, SelectionStrategy::sample_median()).unwrap();
//! for (item, weight) in [(7, 1500), (3, 20), (7, 700)] {
//!     sketch.update(item, weight).unwrap();
//! }
//! assert_eq!(sketch.estimate(7), 2200);
//! let heavy = sketch.frequent_items(ErrorMode::NoFalsePositives, 1000);
//! assert_eq!(heavy[0].item, 7);
//! ```

pub mod baselines;
pub mod codec;
pub mod error;
pub mod oracle;
pub mod select;
pub mod sketch;
pub mod streamgen;
pub mod table;

pub use error::{DecodeError, Error, Result};
pub use oracle::ExactCounts;
pub use sketch::{ErrorMode, Quantile, Row, SelectionStrategy, Sketch, DEFAULT_SAMPLE_SIZE};
pub use streamgen::{StreamUpdate, WeightDist, ZipfSpec};
pub use table::{CounterTable, Upsert};

/// Item identifier.
pub type Item = u64;

/// Frequency and weight unit.
pub type Weight = i64;

/// Common interface of every frequency summary, used by the benchmark
/// harness to drive all algorithms through one code path.
pub trait FrequencySummary {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()>;

    /// A value never above the item's true frequency.
    fn lower_bound(&self, item: Item) -> Weight;

    /// The algorithm's point estimate.
    fn estimate(&self, item: Item) -> Weight;

    fn decrement_count(&self) -> u64;

    fn stream_weight(&self) -> Weight;
}

impl FrequencySummary for Sketch {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        Sketch::update(self, item, weight)
    }

    fn lower_bound(&self, item: Item) -> Weight {
        Sketch::lower_bound(self, item)
    }

    fn estimate(&self, item: Item) -> Weight {
        Sketch::estimate(self, item)
    }

    fn decrement_count(&self) -> u64 {
        Sketch::decrement_count(self)
    }

    fn stream_weight(&self) -> Weight {
        Sketch::stream_weight(self)
    }
}
