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

use freqsketch::streamgen::{read_stream, write_stream, zipf_stream};
use freqsketch::{ExactCounts, Sketch, WeightDist, ZipfSpec};

fn spec(seed: u64) -> ZipfSpec {
    ZipfSpec {
        universe: 500,
        alpha: 1.05,
        length: 5_000,
        weights: WeightDist::UniformInt(1, 10_000),
        seed,
    }
}

#[test]
fn stream_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream.txt");
    let updates = zipf_stream(&spec(3)).unwrap();
    write_stream(&path, &updates).unwrap();
    assert_eq!(read_stream(&path).unwrap(), updates);
}

#[test]
fn generation_is_reproducible_per_seed() {
    assert_eq!(zipf_stream(&spec(9)).unwrap(), zipf_stream(&spec(9)).unwrap());
    assert_ne!(zipf_stream(&spec(9)).unwrap(), zipf_stream(&spec(10)).unwrap());
}

#[test]
fn sketch_from_file_matches_sketch_from_memory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stream.txt");
    let updates = zipf_stream(&spec(4)).unwrap();
    write_stream(&path, &updates).unwrap();

    let run = |updates: &[freqsketch::StreamUpdate]| {
        let mut s = Sketch::with_seed(32, freqsketch::SelectionStrategy::sample_median(), 5).unwrap();
        for u in updates {
            s.update(u.item, u.weight).unwrap();
        }
        s.serialize()
    };
    assert_eq!(run(&updates), run(&read_stream(&path).unwrap()));

    let mut oracle = ExactCounts::new();
    for u in &updates {
        oracle.ingest(u.item, u.weight).unwrap();
    }
    let top = oracle.sorted_frequencies()[0];
    assert_eq!(oracle.frequency(1), top);
}
