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

//! Corpus cache written by `ingest` and read by every later stage.
//!
//! The cache is a single JSON document followed by a newline:
//!
//! ```text
//! {"format":"trendminer-corpus","version":1,
//!  "keywords":["end","world"],"stop_list":[...],"min_df":10,
//!  "terms":["21st",...],"doc_freq":[...],"dropped":3,
//!  "transactions":[[1355140800,"id-1",[0,5,9]],...]}
//! ```
//!
//! `terms` is in id order, so a term's id is its position. Each transaction
//! is `[unix_seconds, source_id, items]`. Keys are written in the order
//! above; identical corpora give identical bytes.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use chrono::DateTime;
use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, TermId, Transaction, Vocabulary};
use crate::error::{Error, Result};

pub const FORMAT: &str = "trendminer-corpus";
pub const VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheRepr {
    format: String,
    version: u32,
    keywords: BTreeSet<String>,
    stop_list: BTreeSet<String>,
    min_df: u64,
    terms: Vec<String>,
    doc_freq: Vec<u64>,
    dropped: usize,
    transactions: Vec<(i64, String, Vec<TermId>)>,
}

pub fn write_cache<W: Write>(corpus: &Corpus, mut writer: W) -> Result<()> {
    let vocab = corpus.vocabulary();
    let repr = CacheRepr {
        format: FORMAT.into(),
        version: VERSION,
        keywords: corpus.keywords().clone(),
        stop_list: vocab.stop_list().clone(),
        min_df: vocab.min_df(),
        terms: vocab.terms().to_vec(),
        doc_freq: vocab.doc_freqs().to_vec(),
        dropped: corpus.dropped(),
        transactions: corpus
            .transactions()
            .iter()
            .map(|t| (t.timestamp.timestamp(), t.source_id.clone(), t.items.clone()))
            .collect(),
    };
    serde_json::to_writer(&mut writer, &repr).map_err(|e| Error::Cache(e.to_string()))?;
    writer.write_all(b"\n")?;
    writer.flush()?;
    Ok(())
}

pub fn read_cache<R: BufRead>(reader: R) -> Result<Corpus> {
    let repr: CacheRepr = serde_json::from_reader(reader).map_err(|e| Error::Cache(e.to_string()))?;
    if repr.format != FORMAT {
        return Err(Error::Cache(format!("not a corpus cache (format {:?})", repr.format)));
    }
    if repr.version != VERSION {
        return Err(Error::Cache(format!("unsupported cache version {}", repr.version)));
    }
    let vocab = Vocabulary::from_parts(repr.terms, repr.doc_freq, repr.min_df, repr.stop_list)?;
    let transactions = repr
        .transactions
        .into_iter()
        .map(|(secs, source_id, items)| {
            let timestamp = DateTime::from_timestamp(secs, 0)
                .ok_or_else(|| Error::Cache(format!("timestamp {secs} out of range")))?;
            Ok(Transaction { items, timestamp, source_id })
        })
        .collect::<Result<Vec<_>>>()?;
    Corpus::new(transactions, vocab, repr.keywords, repr.dropped)
}
