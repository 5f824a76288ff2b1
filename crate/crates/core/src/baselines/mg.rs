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

//! Misra-Gries for unit updates.

use crate::error::Result;
use crate::table::{CounterTable, Upsert};
use crate::{FrequencySummary, Item, Weight};

use super::UnitSummary;

#[derive(Debug, Clone)]
pub struct MgSummary {
    table: CounterTable,
    stream_len: Weight,
    decrements: u64,
}

impl MgSummary {
    pub fn new(k: usize) -> Result<Self> {
        Ok(Self {
            table: CounterTable::new(k)?,
            stream_len: 0,
            decrements: 0,
        })
    }

    pub fn capacity(&self) -> usize {
        self.table.capacity()
    }

    pub fn table(&self) -> &CounterTable {
        &self.table
    }

    /// Counter value, or 0 for unassigned items.
    pub fn estimate(&self, item: Item) -> Weight {
        self.table.lookup(item).unwrap_or(0)
    }
}

impl UnitSummary for MgSummary {
    fn unit_update(&mut self, item: Item) -> Result<()> {
        self.stream_len += 1;
        if self.table.upsert_add(item, 1)? == Upsert::TableFull {
            self.table.decrement_and_compact(1)?;
            self.decrements += 1;
        }
        Ok(())
    }
}

impl FrequencySummary for MgSummary {
    fn update(&mut self, item: Item, weight: Weight) -> Result<()> {
        super::require_unit(weight)?;
        self.unit_update(item)
    }

    fn lower_bound(&self, item: Item) -> Weight {
        self.estimate(item)
    }

    fn estimate(&self, item: Item) -> Weight {
        MgSummary::estimate(self, item)
    }

    fn decrement_count(&self) -> u64 {
        self.decrements
    }

    fn stream_weight(&self) -> Weight {
        self.stream_len
    }
}
