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

//! Error types.

use thiserror::Error;

/// Errors raised by sketch, table and baseline operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("capacity must be at least 1")]
    ZeroCapacity,
    #[error("capacity {0} needs more table slots than can be addressed")]
    CapacityTooLarge(usize),
    #[error("weight must be positive, got {0}")]
    NonPositiveWeight(i64),
    #[error("weight overflows a 64-bit signed counter")]
    WeightOverflow,
    #[error("probe displacement reached {0}, table is degenerate")]
    ProbeOverflow(usize),
    #[error("operation requires a non-empty table")]
    EmptyTable,
    #[error("decrement value selection requires a full table ({size} of {capacity})")]
    TableNotFull { size: usize, capacity: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Errors raised while decoding a serialized sketch.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("bad magic bytes {0:02x?}")]
    BadMagic([u8; 4]),
    #[error("unsupported serialization version {0}")]
    UnsupportedVersion(u8),
    #[error("unknown strategy tag {0}")]
    UnknownStrategy(u8),
    #[error("payload truncated: need {needed} bytes, have {available}")]
    Truncated { needed: usize, available: usize },
    #[error("{0} trailing bytes after payload")]
    TrailingBytes(usize),
    #[error("malformed payload: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
