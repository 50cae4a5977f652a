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

//! Raw messages to keyword-filtered, vocabulary-pruned transactions.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::BufRead;

use chrono::{DateTime, Utc};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Stop list shipped with the toolkit, one term per line.
pub const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords_en.txt");

/// Keywords the toolkit filters on unless told otherwise.
pub const DEFAULT_KEYWORDS: [&str; 2] = ["end", "world"];

pub const DEFAULT_MIN_DF: u64 = 10;

/// Dense term id, `0..V`.
pub type TermId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMessage {
    pub id: String,
    pub timestamp: DateTime<Utc>,
    pub text: String,
}

impl RawMessage {
    pub fn new(id: impl Into<String>, timestamp: DateTime<Utc>, text: impl Into<String>) -> Self {
        RawMessage { id: id.into(), timestamp, text: text.into() }
    }
}

/// Splits text into lowercase terms.
///
/// Terms are maximal runs of Unicode letters and digits. Whitespace-separated
/// chunks carrying a URL scheme (`http://...`) are dropped from the scheme
/// onward, `@`-mentions are dropped, and `#` is treated as punctuation so the
/// body of a hashtag survives as a term.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut terms = Vec::new();
    for chunk in text.split_whitespace() {
        let chunk = match url_start(chunk) {
            Some(start) => &chunk[..start],
            None => chunk,
        };
        let mut current = String::new();
        let mut in_mention = false;
        for ch in chunk.chars() {
            if ch.is_alphanumeric() {
                if !in_mention {
                    current.extend(ch.to_lowercase());
                }
                continue;
            }
            if in_mention && ch == '_' {
                continue;
            }
            in_mention = false;
            if !current.is_empty() {
                terms.push(std::mem::take(&mut current));
            }
            if ch == '@' {
                in_mention = true;
            }
        }
        if !current.is_empty() {
            terms.push(current);
        }
    }
    terms
}

/// Byte offset where a `scheme://` URL begins inside a chunk.
fn url_start(chunk: &str) -> Option<usize> {
    let sep = chunk.find("://")?;
    let head = &chunk[..sep];
    let scheme_len = head
        .bytes()
        .rev()
        .take_while(|b| b.is_ascii_alphanumeric() || matches!(b, b'+' | b'.' | b'-'))
        .count();
    let start = sep - scheme_len;
    let scheme = &chunk[start..sep];
    if scheme.as_bytes().first().is_some_and(u8::is_ascii_alphabetic) {
        Some(start)
    } else {
        None
    }
}

fn token_set(text: &str) -> BTreeSet<String> {
    tokenize(text).into_iter().collect()
}

/// Normalizes a user-supplied keyword or term list: lowercased, trimmed, blanks dropped.
pub fn normalize_terms<I, S>(terms: I) -> BTreeSet<String>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    terms
        .into_iter()
        .map(|t| t.as_ref().trim().to_lowercase())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Keeps the messages whose token set contains every keyword, in input order.
pub fn filter_keywords(messages: Vec<RawMessage>, keywords: &BTreeSet<String>) -> Result<Vec<RawMessage>> {
    if keywords.is_empty() {
        return Err(Error::Config("keyword set is empty".into()));
    }
    Ok(messages
        .into_iter()
        .filter(|m| {
            let tokens = token_set(&m.text);
            keywords.iter().all(|k| tokens.contains(k))
        })
        .collect())
}

/// Term-to-id mapping with document frequencies. Ids follow lexicographic term order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vocabulary {
    terms: Vec<String>,
    doc_freq: Vec<u64>,
    min_df: u64,
    stop_list: BTreeSet<String>,
    index: HashMap<String, TermId>,
}

impl Vocabulary {
    /// Reassembles a vocabulary, checking every invariant.
    pub fn from_parts(
        terms: Vec<String>,
        doc_freq: Vec<u64>,
        min_df: u64,
        stop_list: BTreeSet<String>,
    ) -> Result<Self> {
        if terms.len() != doc_freq.len() {
            return Err(Error::InvalidInput("terms and document frequencies differ in length".into()));
        }
        if terms.len() > TermId::MAX as usize {
            return Err(Error::InvalidInput("vocabulary too large".into()));
        }
        if terms.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidInput("terms not strictly increasing".into()));
        }
        for (term, &df) in terms.iter().zip(&doc_freq) {
            if df < min_df {
                return Err(Error::InvalidInput(format!("term {term:?} has df {df} < min_df {min_df}")));
            }
            if stop_list.contains(term) {
                return Err(Error::InvalidInput(format!("stop-listed term {term:?} in vocabulary")));
            }
        }
        let index = terms.iter().enumerate().map(|(i, t)| (t.clone(), i as TermId)).collect();
        Ok(Vocabulary { terms, doc_freq, min_df, stop_list, index })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn id(&self, term: &str) -> Option<TermId> {
        self.index.get(term).copied()
    }

    pub fn term(&self, id: TermId) -> Option<&str> {
        self.terms.get(id as usize).map(String::as_str)
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_freq(&self, id: TermId) -> Option<u64> {
        self.doc_freq.get(id as usize).copied()
    }

    pub fn doc_freqs(&self) -> &[u64] {
        &self.doc_freq
    }

    pub fn min_df(&self) -> u64 {
        self.min_df
    }

    pub fn stop_list(&self) -> &BTreeSet<String> {
        &self.stop_list
    }

    /// Space-joined terms for a sorted id slice.
    pub fn render(&self, ids: &[TermId]) -> String {
        ids.iter()
            .map(|&id| self.term(id).unwrap_or("?"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Counts per-message document frequency and keeps terms with `df >= min_df`
/// that are not stop-listed.
pub fn build_vocabulary(messages: &[RawMessage], min_df: u64, stop_list: &BTreeSet<String>) -> Result<Vocabulary> {
    if min_df == 0 {
        return Err(Error::Config("min_df must be at least 1".into()));
    }
    let mut df: BTreeMap<String, u64> = BTreeMap::new();
    for message in messages {
        for term in token_set(&message.text) {
            *df.entry(term).or_default() += 1;
        }
    }
    let (terms, doc_freq) = df
        .into_iter()
        .filter(|(term, count)| *count >= min_df && !stop_list.contains(term))
        .unzip();
    Vocabulary::from_parts(terms, doc_freq, min_df, stop_list.clone())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transaction {
    pub items: Vec<TermId>,
    pub timestamp: DateTime<Utc>,
    pub source_id: String,
}

/// The keyword-filtered transaction collection. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    transactions: Vec<Transaction>,
    vocabulary: Vocabulary,
    keywords: BTreeSet<String>,
    dropped: usize,
}

impl Corpus {
    pub fn new(
        transactions: Vec<Transaction>,
        vocabulary: Vocabulary,
        keywords: BTreeSet<String>,
        dropped: usize,
    ) -> Result<Self> {
        let v = vocabulary.len();
        for t in &transactions {
            if t.items.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidInput(format!("transaction {:?} items not strictly increasing", t.source_id)));
            }
            if t.items.last().is_some_and(|&last| last as usize >= v) {
                return Err(Error::InvalidInput(format!("transaction {:?} item outside vocabulary", t.source_id)));
            }
        }
        Ok(Corpus { transactions, vocabulary, keywords, dropped })
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn keywords(&self) -> &BTreeSet<String> {
        &self.keywords
    }

    /// Replaces the recorded keyword set.
    pub fn with_keywords(mut self, keywords: BTreeSet<String>) -> Self {
        self.keywords = keywords;
        self
    }

    /// Ids of the keywords that made it into the vocabulary, ascending.
    pub fn keyword_ids(&self) -> Vec<TermId> {
        self.keywords.iter().filter_map(|k| self.vocabulary.id(k)).collect()
    }

    /// N, the transaction count.
    pub fn total(&self) -> usize {
        self.transactions.len()
    }

    /// Messages dropped because no vocabulary term survived.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.transactions.is_empty() {
            Err(Error::EmptyCorpus)
        } else {
            Ok(())
        }
    }
}

/// Maps each message to the sorted set of its in-vocabulary term ids.
/// Messages left with no items are dropped and counted.
pub fn to_transactions(messages: &[RawMessage], vocab: Vocabulary, keywords: BTreeSet<String>) -> Corpus {
    let mut transactions = Vec::with_capacity(messages.len());
    let mut dropped = 0;
    for message in messages {
        let mut items: Vec<TermId> = tokenize(&message.text).iter().filter_map(|t| vocab.id(t)).collect();
        items.sort_unstable();
        items.dedup();
        if items.is_empty() {
            dropped += 1;
            continue;
        }
        transactions.push(Transaction { items, timestamp: message.timestamp, source_id: message.id.clone() });
    }
    Corpus { transactions, vocabulary: vocab, keywords, dropped }
}

/// Counters reported at the end of ingestion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub read: usize,
    pub malformed: usize,
    pub keyword_retained: usize,
    pub empty_dropped: usize,
    pub vocabulary_size: usize,
}

/// Keyword filter, vocabulary and transaction reduction in one go.
pub fn build_corpus(
    messages: Vec<RawMessage>,
    keywords: &BTreeSet<String>,
    min_df: u64,
    stop_list: &BTreeSet<String>,
) -> Result<(Corpus, IngestStats)> {
    let read = messages.len();
    let retained = filter_keywords(messages, keywords)?;
    let vocab = build_vocabulary(&retained, min_df, stop_list)?;
    let vocabulary_size = vocab.len();
    let corpus = to_transactions(&retained, vocab, keywords.clone());
    let stats = IngestStats {
        read,
        malformed: 0,
        keyword_retained: retained.len(),
        empty_dropped: corpus.dropped(),
        vocabulary_size,
    };
    Ok((corpus, stats))
}

#[derive(Deserialize)]
struct JsonMessage {
    id: String,
    created_at: String,
    text: String,
}

/// Result of reading one JSON-Lines archive.
#[derive(Debug, Default)]
pub struct JsonlBatch {
    pub messages: Vec<RawMessage>,
    pub malformed: usize,
}

/// Parses one JSON-Lines message object. Unknown fields are ignored.
pub fn parse_message_line(line: &str) -> Option<RawMessage> {
    let raw: JsonMessage = serde_json::from_str(line).ok()?;
    if raw.id.is_empty() {
        return None;
    }
    let ts = DateTime::parse_from_rfc3339(raw.created_at.trim()).ok()?;
    // second resolution
    let timestamp = DateTime::from_timestamp(ts.timestamp(), 0)?;
    Some(RawMessage { id: raw.id, timestamp, text: raw.text })
}

/// Reads `{"id", "created_at", "text"}` objects, one per line. Blank lines are
/// ignored; anything else that fails to parse is counted as malformed.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<JsonlBatch> {
    let mut batch = JsonlBatch::default();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_message_line(&line) {
            Some(message) => batch.messages.push(message),
            None => batch.malformed += 1,
        }
    }
    Ok(batch)
}

/// Reads a one-term-per-line file; `#` lines are comments.
pub fn read_term_list<R: BufRead>(reader: R) -> Result<BTreeSet<String>> {
    let mut lines = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim_start().starts_with('#') {
            continue;
        }
        lines.push(line);
    }
    Ok(normalize_terms(lines))
}

pub fn default_stop_list() -> BTreeSet<String> {
    read_term_list(DEFAULT_STOPWORDS.as_bytes()).expect("bundled stop list")
}
