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

//! Reduce-by-min-counter weighted Misra-Gries.

use crate::error::{Error, Result};
use crate::table::{CounterTable, Upsert};
use crate::{FrequencySummary, Item, Weight};

/// Weighted Misra-Gries that, on a full table, decrements by
/// `min(delta, c_min)`. Estimates match unit-expanded Misra-Gries exactly,
/// but a decrement may occur on nearly every update.
#[derive(Debug, Clone)]
pub struct RbmcSummary {
    table: CounterTable,
    offset: Weight,
    stream_weight: Weight,
    decrements: u64,
}

impl RbmcSummary {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self {
            table: CounterTable::new(k)?,
            offset: 0,
            stream_weight: 0,
            decrements: 0,
        })
    }

    pub fn table(&self) -> &CounterTable {
        &self.table
    }

    pub fn offset(&self) -> Weight {
        self.offset
    }

    pub fn update(&mut self, item: Item, delta: Weight) -> Result<()> {
        if delta <= 0 {
            return Err(Error::NonPositiveWeight(delta));
        }
        let stream_weight = self
            .stream_weight
            .checked_add(delta)
            .ok_or(Error::WeightOverflow)?;
        if self.table.upsert_add(item, delta)? == Upsert::TableFull {
            let c_min = self.table.min_count().expect("full table");
            let amount = delta.min(c_min);
            self.table.decrement_and_compact(amount)?;
            self.offset += amount;
            self.decrements += 1;
            if delta > c_min {
                self.table.upsert_add(item, delta - c_min)?;
            }
        }
        self.stream_weight = stream_weight;
        Ok(())
    }

    pub fn upper_bound(&self, item: Item) -> Weight {
        self.table.lookup(item).unwrap_or(0) + self.offset
    }
}

impl FrequencySummary for RbmcSummary {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        RbmcSummary::update(self, item, weight)
    }

    fn lower_bound(&self, item: Item) -> Weight {
        self.table.lookup(item).unwrap_or(0)
    }

    fn estimate(&self, item: Item) -> Weight {
        self.table.lookup(item).map_or(0, |c| c + self.offset)
    }

    fn decrement_count(&self) -> u64 {
        self.decrements
    }

    fn stream_weight(&self) -> Weight {
        self.stream_weight
    }
}
