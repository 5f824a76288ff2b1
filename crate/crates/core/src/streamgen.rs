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

//! Synthetic Zipfian streams and the plain-text stream format.
//!
//! A stream file holds one update per line, `item weight`, separated by
//! whitespace. Blank lines and lines starting with `#` are ignored.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::{Item, Weight};

/// One weighted stream element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamUpdate {
    pub item: Item,
    pub weight: Weight,
}

impl StreamUpdate {
    pub fn new(item: Item, weight: Weight) -> Self {
        Self { item, weight }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightDist {
    Constant(Weight),
    /// Uniform over the inclusive range.
    UniformInt(Weight, Weight),
}

/// Parameters of a Zipfian stream over items `1..=universe` with
/// `P(i) = i^-alpha / H`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfSpec {
    pub universe: u64,
    pub alpha: f64,
    pub length: usize,
    pub weights: WeightDist,
    pub seed: u64,
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("invalid stream spec: {0}")]
    InvalidSpec(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl ZipfSpec {
    fn validate(&self) -> Result<(), StreamError> {
        if self.universe == 0 {
            return Err(StreamError::InvalidSpec("universe must be at least 1".into()));
        }
        if !(self.alpha.is_finite() && self.alpha > 0.0) {
            return Err(StreamError::InvalidSpec(format!("alpha {} must be positive", self.alpha)));
        }
        match self.weights {
            WeightDist::Constant(w) if w < 1 => {
                Err(StreamError::InvalidSpec(format!("constant weight {w} must be >= 1")))
            }
            WeightDist::UniformInt(lo, hi) if lo < 1 || hi < lo => Err(StreamError::InvalidSpec(
                format!("weight range [{lo}, {hi}] must satisfy 1 <= lo <= hi"),
            )),
            _ => Ok(()),
        }
    }

    /// Item probabilities `p_1..p_m`.
    pub fn probabilities(&self) -> Vec<f64> {
        let raw: Vec<f64> = (1..=self.universe)
            .map(|i| (i as f64).powf(-self.alpha))
            .collect();
        let norm: f64 = raw.iter().sum();
        raw.into_iter().map(|p| p / norm).collect()
    }
}

/// Inverse-CDF sampler over a precomputed cumulative table.
#[derive(Debug, Clone)]
pub struct ZipfSampler {
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(universe: u64, alpha: f64) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (1..=universe)
            .map(|i| {
                acc += (i as f64).powf(-alpha);
                acc
            })
            .collect();
        let norm = acc;
        for c in &mut cdf {
            *c /= norm;
        }
        Self { cdf }
    }

    /// Draws an item in `1..=universe`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Item {
        let u: f64 = rng.random();
        let idx = self.cdf.partition_point(|&c| c <= u);
        idx.min(self.cdf.len() - 1) as Item + 1
    }
}

pub fn zipf_stream(spec: &ZipfSpec) -> Result<Vec<StreamUpdate>, StreamError> {
    spec.validate()?;
    let sampler = ZipfSampler::new(spec.universe, spec.alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut out = Vec::with_capacity(spec.length);
    for _ in 0..spec.length {
        let item = sampler.sample(&mut rng);
        let weight = match spec.weights {
            WeightDist::Constant(w) => w,
            WeightDist::UniformInt(lo, hi) => rng.random_range(lo..=hi),
        };
        out.push(StreamUpdate { item, weight });
    }
    Ok(out)
}

pub fn parse_stream<R: BufRead>(reader: R) -> Result<Vec<StreamUpdate>, StreamError> {
    let mut out = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| StreamError::Parse { line: lineno, message };
        let mut fields = trimmed.split_whitespace();
        let item = fields
            .next()
            .ok_or_else(|| parse_err("missing item".into()))?
            .parse::<Item>()
            .map_err(|e| parse_err(format!("bad item: {e}")))?;
        let weight = fields
            .next()
            .ok_or_else(|| parse_err("missing weight".into()))?
            .parse::<Weight>()
            .map_err(|e| parse_err(format!("bad weight: {e}")))?;
        if weight < 1 {
            return Err(parse_err(format!("weight {weight} must be >= 1")));
        }
        if let Some(extra) = fields.next() {
            return Err(parse_err(format!("unexpected field {extra:?}")));
        }
        out.push(StreamUpdate { item, weight });
    }
    Ok(out)
}

pub fn read_stream(path: impl AsRef<Path>) -> Result<Vec<StreamUpdate>, StreamError> {
    parse_stream(BufReader::new(File::open(path)?))
}

pub fn write_stream_to<W: Write>(writer: W, updates: &[StreamUpdate]) -> io::Result<()> {
    let mut w = BufWriter::new(writer);
    for u in updates {
        writeln!(w, "{} {}", u.item, u.weight)?;
    }
    w.flush()
}

pub fn write_stream(path: impl AsRef<Path>, updates: &[StreamUpdate]) -> io::Result<()> {
    write_stream_to(File::create(path)?, updates)
}
