// Copyright 2026 The trendminer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Fixtures shared by the benchmarks.

use trendminer_core::synth::ZipfSpec;
use trendminer_core::Corpus;

/// Zipf corpus with the given transaction count and vocabulary, mean basket 8.
pub fn zipf_corpus(transactions: usize, vocabulary: usize) -> Corpus {
    ZipfSpec { transactions, vocabulary, ..ZipfSpec::default() }.corpus()
}
