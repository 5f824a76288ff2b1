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

//! Benchmark and verification harness for the `freqsketch` summaries.
//!
//! Every algorithm runs over a stream held in memory, so timings cover the
//! update loop alone. Errors are measured against exact counts, and results
//! are written as CSV rows ([`report::BenchReport`]).

pub mod algo;
pub mod cli;
pub mod experiments;
pub mod harness;
pub mod merge;
pub mod report;
pub mod space;

pub use algo::{AlgoParams, Algorithm, Summary};
pub use report::BenchReport;
