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

//! Binary encoding of [`Sketch`].
//!
//! Version 1 layout, all integers little-endian:
//!
//! ```text
//! magic "FQSK" | version u8 | strategy tag u8 | k u32
//! tag 0: k_star u32
//! tag 1: ell u32 | q numerator u16 | q denominator u16
//! seed u64 | offset i64 | stream weight i64 | entry count u32
//! entry count x (item u64 | count i64)
//! ```

use crate::error::{DecodeError, Error};
use crate::sketch::{Quantile, SelectionStrategy, Sketch};
use crate::{Item, Weight};

pub const MAGIC: [u8; 4] = *b"FQSK";
pub const VERSION: u8 = 1;

const TAG_EXACT_RANK: u8 = 0;
const TAG_SAMPLED_QUANTILE: u8 = 1;
const ENTRY_BYTES: usize = 16;

impl Sketch {
    pub fn serialize(&self) -> Vec<u8> {
        let entries = self.num_active();
        let mut out = Vec::with_capacity(48 + entries * ENTRY_BYTES);
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        match self.strategy() {
            SelectionStrategy::ExactRank { k_star } => {
                out.push(TAG_EXACT_RANK);
                out.extend_from_slice(&(self.capacity() as u32).to_le_bytes());
                out.extend_from_slice(&k_star.to_le_bytes());
            }
            SelectionStrategy::SampledQuantile { ell, quantile } => {
                out.push(TAG_SAMPLED_QUANTILE);
                out.extend_from_slice(&(self.capacity() as u32).to_le_bytes());
                out.extend_from_slice(&ell.to_le_bytes());
                out.extend_from_slice(&quantile.numerator().to_le_bytes());
                out.extend_from_slice(&quantile.denominator().to_le_bytes());
            }
        }
        out.extend_from_slice(&self.seed().to_le_bytes());
        out.extend_from_slice(&self.offset().to_le_bytes());
        out.extend_from_slice(&self.stream_weight().to_le_bytes());
        out.extend_from_slice(&(entries as u32).to_le_bytes());
        // ascending item order makes the encoding independent of probe layout
        let mut sorted: Vec<(Item, Weight)> = self.entries().collect();
        sorted.sort_unstable();
        for (item, count) in sorted {
            out.extend_from_slice(&item.to_le_bytes());
            out.extend_from_slice(&count.to_le_bytes());
        }
        out
    }

    /// Decodes a sketch, validating every invariant the encoder guarantees.
    /// Nothing is returned unless the whole payload is accepted.
    pub fn deserialize(bytes: &[u8]) -> Result<Sketch, DecodeError> {
        let mut r = Reader { bytes, pos: 0 };
        let magic: [u8; 4] = r.take(4)?.try_into().unwrap();
        if magic != MAGIC {
            return Err(DecodeError::BadMagic(magic));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(DecodeError::UnsupportedVersion(version));
        }
        let tag = r.u8()?;
        let k = r.u32()? as usize;
        let strategy = match tag {
            TAG_EXACT_RANK => SelectionStrategy::ExactRank { k_star: r.u32()? },
            TAG_SAMPLED_QUANTILE => {
                let ell = r.u32()?;
                let num = r.u16()?;
                let den = r.u16()?;
                let quantile = Quantile::new(num, den).map_err(malformed)?;
                SelectionStrategy::SampledQuantile { ell, quantile }
            }
            other => return Err(DecodeError::UnknownStrategy(other)),
        };
        let seed = r.u64()?;
        let offset = r.i64()?;
        let stream_weight = r.i64()?;
        let count = r.u32()? as usize;
        if count > k {
            return Err(DecodeError::Malformed(format!("{count} entries exceed capacity {k}")));
        }
        let needed = count * ENTRY_BYTES;
        if r.remaining() < needed {
            return Err(DecodeError::Truncated {
                needed: r.pos + needed,
                available: bytes.len(),
            });
        }
        if r.remaining() > needed {
            return Err(DecodeError::TrailingBytes(r.remaining() - needed));
        }
        let mut entries: Vec<(Item, Weight)> = Vec::with_capacity(count);
        let mut stored: Weight = 0;
        for _ in 0..count {
            let item = r.u64()?;
            let weight = r.i64()?;
            if weight <= 0 {
                return Err(DecodeError::Malformed(format!(
                    "item {item} has non-positive count {weight}"
                )));
            }
            stored = stored
                .checked_add(weight)
                .ok_or_else(|| DecodeError::Malformed("stored counts overflow".into()))?;
            entries.push((item, weight));
        }
        if offset < 0 {
            return Err(DecodeError::Malformed(format!("negative offset {offset}")));
        }
        if stream_weight < stored {
            return Err(DecodeError::Malformed(format!(
                "stream weight {stream_weight} below stored weight {stored}"
            )));
        }
        Sketch::from_parts(k, strategy, seed, offset, stream_weight, entries).map_err(malformed)
    }
}

fn malformed(err: Error) -> DecodeError {
    DecodeError::Malformed(err.to_string())
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn remaining(&self) -> usize {
        self.bytes.len() - self.pos
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8], DecodeError> {
        if self.remaining() < n {
            return Err(DecodeError::Truncated {
                needed: self.pos + n,
                available: self.bytes.len(),
            });
        }
        let out = &self.bytes[self.pos..self.pos + n];
        self.pos += n;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8, DecodeError> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16, DecodeError> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().unwrap()))
    }

    fn u32(&mut self) -> Result<u32, DecodeError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, DecodeError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i64(&mut self) -> Result<i64, DecodeError> {
        Ok(i64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}
