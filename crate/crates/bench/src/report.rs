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

//! CSV benchmark records.
//!
//! Columns, in order: `algo,k,kstar,ell,q,n,N,seed,repeat,time_s,
//! updates_per_s,decrements,max_err,space_bytes`. Parameters that do not
//! apply to an algorithm are left empty. Summary rows leave `repeat` empty
//! and hold means over the repeats they summarize.

use std::io::{Read, Write};

use anyhow::{ensure, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub algo: String,
    pub k: u64,
    pub kstar: Option<u32>,
    pub ell: Option<u32>,
    pub q: Option<f64>,
    /// Number of updates.
    pub n: u64,
    /// Total stream weight.
    #[serde(rename = "N")]
    pub total_weight: u64,
    pub seed: u64,
    pub repeat: Option<u32>,
    pub time_s: f64,
    pub updates_per_s: f64,
    pub decrements: f64,
    /// Largest `f_i - lower(i)` over all items.
    pub max_err: f64,
    pub space_bytes: u64,
}

impl BenchReport {
    /// Checks that every numeric field is finite and non-negative.
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("time_s", self.time_s),
            ("updates_per_s", self.updates_per_s),
            ("decrements", self.decrements),
            ("max_err", self.max_err),
            ("q", self.q.unwrap_or(0.0)),
        ] {
            ensure!(v.is_finite() && v >= 0.0, "{name} = {v} must be finite and non-negative");
        }
        Ok(())
    }

    pub fn is_summary(&self) -> bool {
        self.repeat.is_none()
    }

    /// Mean row over `rows`, which must share parameters.
    pub fn summarize(rows: &[BenchReport]) -> Option<BenchReport> {
        let first = rows.first()?;
        let count = rows.len() as f64;
        let mean = |f: fn(&BenchReport) -> f64| rows.iter().map(f).sum::<f64>() / count;
        Some(BenchReport {
            repeat: None,
            time_s: mean(|r| r.time_s),
            updates_per_s: mean(|r| r.updates_per_s),
            decrements: mean(|r| r.decrements),
            max_err: mean(|r| r.max_err),
            ..first.clone()
        })
    }
}

pub fn write_reports<W: Write>(writer: W, rows: &[BenchReport]) -> Result<()> {
    let mut out = csv::Writer::from_writer(writer);
    for row in rows {
        row.validate()?;
        out.serialize(row)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_reports<R: Read>(reader: R) -> Result<Vec<BenchReport>> {
    let mut input = csv::Reader::from_reader(reader);
    let mut rows = Vec::new();
    for row in input.deserialize() {
        let row: BenchReport = row?;
        row.validate()?;
        rows.push(row);
    }
    Ok(rows)
}
