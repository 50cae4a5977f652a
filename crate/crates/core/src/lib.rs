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

//! Frequent term sets, association rules and their daily dynamics over
//! keyword-filtered short-message corpora.
//!
//! The pipeline runs [`corpus`] (tokenize, keyword filter, vocabulary
//! pruning), [`miner`] (Apriori with an exhaustive oracle), [`rules`]
//! (bidirectional confidence) and [`temporal`] (daily series, peak timing
//! against an event date, threshold markers, thematic filtering). All
//! supports and confidences are exact rationals.

pub mod cache;
mod count;
pub mod corpus;
pub mod error;
pub mod miner;
pub mod number;
pub mod rules;
pub mod synth;
pub mod temporal;

pub use corpus::{Corpus, RawMessage, TermId, Transaction, Vocabulary};
pub use error::{Error, Result};
pub use miner::{apriori, brute_force_frequent, support, Comparison, FrequentSet, ItemSet, MinSupport, MiningConfig};
pub use number::Rational;
pub use rules::{confidence, generate_rules, AssociationRule, Direction, RuleConfig};
pub use temporal::{
    bucket_daily, classify_peak, detect_markers, detect_periodicity, series_confidence, series_support,
    thematic_filter, DailyBuckets, DailySeries, MarkerReport, PeakClass, PeakProfile, Subject, ThematicField,
};
