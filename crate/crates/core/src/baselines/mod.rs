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

//! Comparison algorithms: unit-weight Misra-Gries and Space Saving, their
//! unit-expansion extensions to weighted updates, reduce-by-min-counter,
//! heap-based weighted Space Saving, and two Agarwal-style merges.

mod ach;
mod mg;
mod mhe;
mod rbmc;
mod ss;

pub use ach::{ach_merge_quickselect, ach_merge_sort};
pub use mg::MgSummary;
pub use mhe::MheSummary;
pub use rbmc::RbmcSummary;
pub use ss::SsSummary;

use crate::error::{Error, Result};
use crate::{FrequencySummary, Item, Weight};

/// Largest weight [`rtuc_update`] will expand into unit updates.
pub const RTUC_MAX_WEIGHT: Weight = 1_000_000;

/// A summary defined on unit-weight streams.
pub trait UnitSummary {
    fn unit_update(&mut self, item: Item) -> Result<()>;
}

fn require_unit(weight: Weight) -> Result<()> {
    if weight != 1 {
        return Err(Error::InvalidParameter(format!(
            "unit-weight summary given weight {weight}"
        )));
    }
    Ok(())
}

/// Applies a weighted update as `delta` unit updates.
pub fn rtuc_update<S: UnitSummary + ?Sized>(s: &mut S, item: Item, delta: Weight) -> Result<()> {
    if delta <= 0 {
        return Err(Error::NonPositiveWeight(delta));
    }
    if delta > RTUC_MAX_WEIGHT {
        return Err(Error::InvalidParameter(format!(
            "weight {delta} exceeds unit-expansion cap {RTUC_MAX_WEIGHT}"
        )));
    }
    for _ in 0..delta {
        s.unit_update(item)?;
    }
    Ok(())
}

/// Adapts a unit summary to weighted updates by unit expansion.
#[derive(Debug, Clone)]
pub struct Rtuc<S>(pub S);

impl<S: UnitSummary + FrequencySummary> FrequencySummary for Rtuc<S> {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        rtuc_update(&mut self.0, item, weight)
    }

    fn lower_bound(&self, item: Item) -> Weight {
        self.0.lower_bound(item)
    }

    fn estimate(&self, item: Item) -> Weight {
        self.0.estimate(item)
    }

    fn decrement_count(&self) -> u64 {
        self.0.decrement_count()
    }

    fn stream_weight(&self) -> Weight {
        self.0.stream_weight()
    }
}
