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

//! Deterministic synthetic corpora for tests, benchmarks and demos.

use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Duration, NaiveDate, Utc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Poisson, Zipf};

use crate::corpus::{Corpus, RawMessage, TermId, Transaction, Vocabulary};

fn noon(date: NaiveDate) -> DateTime<Utc> {
    date.and_hms_opt(12, 0, 0).expect("valid time").and_utc()
}

fn default_day() -> NaiveDate {
    NaiveDate::from_ymd_opt(2012, 12, 10).expect("valid date")
}

/// Builds a corpus whose vocabulary is exactly the terms used, all dated the same day.
pub fn corpus_from_baskets(baskets: &[&[&str]]) -> Corpus {
    let groups: Vec<(&[&str], usize)> = baskets.iter().map(|b| (*b, 1)).collect();
    corpus_from_counts(&groups, &[])
}

/// Like [`corpus_from_baskets`] with each basket repeated `count` times;
/// `extra_terms` enter the vocabulary without appearing in any transaction.
pub fn corpus_from_counts(groups: &[(&[&str], usize)], extra_terms: &[&str]) -> Corpus {
    let dated: Vec<(&[&str], usize, NaiveDate)> = groups.iter().map(|&(b, n)| (b, n, default_day())).collect();
    dated_corpus(&dated, extra_terms)
}

/// Repeated baskets, each group stamped at noon on its own date.
pub fn dated_corpus(groups: &[(&[&str], usize, NaiveDate)], extra_terms: &[&str]) -> Corpus {
    let mut df: BTreeMap<String, u64> = extra_terms.iter().map(|t| (t.to_string(), 0)).collect();
    for (basket, n, _) in groups {
        let distinct: BTreeSet<&str> = basket.iter().copied().collect();
        for term in distinct {
            *df.entry(term.to_string()).or_default() += *n as u64;
        }
    }
    let (terms, doc_freq): (Vec<String>, Vec<u64>) = df.into_iter().unzip();
    let vocab = Vocabulary::from_parts(terms, doc_freq, 0, BTreeSet::new()).expect("synthetic vocabulary");
    let mut transactions = Vec::new();
    for (basket, n, date) in groups {
        let mut items: Vec<TermId> = basket.iter().map(|t| vocab.id(t).expect("known term")).collect();
        items.sort_unstable();
        items.dedup();
        for _ in 0..*n {
            let source_id = transactions.len().to_string();
            transactions.push(Transaction { items: items.clone(), timestamp: noon(*date), source_id });
        }
    }
    Corpus::new(transactions, vocab, BTreeSet::new(), 0).expect("synthetic corpus")
}

/// Corpus over `items` abstract terms (`i00`, `i01`, ...) from explicit id lists.
pub fn corpus_from_ids(items: usize, baskets: &[Vec<TermId>]) -> Corpus {
    let width = items.to_string().len().max(2);
    let terms: Vec<String> = (0..items).map(|i| format!("i{i:0width$}")).collect();
    let mut df = vec![0u64; items];
    let transactions: Vec<Transaction> = baskets
        .iter()
        .enumerate()
        .map(|(n, b)| {
            let mut items = b.clone();
            items.sort_unstable();
            items.dedup();
            for &i in &items {
                df[i as usize] += 1;
            }
            Transaction { items, timestamp: noon(default_day()), source_id: n.to_string() }
        })
        .collect();
    let vocab = Vocabulary::from_parts(terms, df, 0, BTreeSet::new()).expect("synthetic vocabulary");
    Corpus::new(transactions, vocab, BTreeSet::new(), 0).expect("synthetic corpus")
}

/// Shape of a Zipf-distributed synthetic corpus.
#[derive(Debug, Clone)]
pub struct ZipfSpec {
    pub seed: u64,
    pub transactions: usize,
    pub vocabulary: usize,
    pub mean_basket: f64,
    pub exponent: f64,
    pub start: NaiveDate,
    pub days: u32,
}

impl Default for ZipfSpec {
    fn default() -> Self {
        ZipfSpec {
            seed: 2012,
            transactions: 10_000,
            vocabulary: 1_000,
            mean_basket: 8.0,
            exponent: 1.0,
            start: default_day(),
            days: 27,
        }
    }
}

impl ZipfSpec {
    fn baskets(&self) -> impl Iterator<Item = (Vec<TermId>, DateTime<Utc>)> + '_ {
        let mut rng = StdRng::seed_from_u64(self.seed);
        let zipf = Zipf::new(self.vocabulary as f64, self.exponent).expect("zipf parameters");
        // basket size is 1 + Poisson(mean - 1)
        let extra = Poisson::new((self.mean_basket - 1.0).max(1e-9)).expect("poisson parameters");
        let start = noon(self.start) - Duration::hours(12);
        let days = self.days.max(1) as i64;
        (0..self.transactions).map(move |_| {
            let want = (1 + extra.sample(&mut rng) as usize).min(self.vocabulary);
            let mut items: Vec<TermId> = Vec::with_capacity(want);
            while items.len() < want {
                let id = zipf.sample(&mut rng) as TermId - 1;
                if !items.contains(&id) {
                    items.push(id);
                }
            }
            items.sort_unstable();
            let offset = rng.random_range(0..days * 86_400);
            (items, start + Duration::seconds(offset))
        })
    }

    fn term(&self, id: TermId) -> String {
        let width = self.vocabulary.to_string().len();
        format!("w{id:0width$}")
    }

    /// A corpus with term ids drawn by rank from a Zipf law.
    pub fn corpus(&self) -> Corpus {
        let terms: Vec<String> = (0..self.vocabulary as TermId).map(|i| self.term(i)).collect();
        let mut df = vec![0u64; self.vocabulary];
        let transactions: Vec<Transaction> = self
            .baskets()
            .enumerate()
            .map(|(n, (items, timestamp))| {
                for &i in &items {
                    df[i as usize] += 1;
                }
                Transaction { items, timestamp, source_id: n.to_string() }
            })
            .collect();
        let vocab = Vocabulary::from_parts(terms, df, 0, BTreeSet::new()).expect("synthetic vocabulary");
        Corpus::new(transactions, vocab, BTreeSet::new(), 0).expect("synthetic corpus")
    }

    /// The same draws rendered as messages; every `keyword_every`-th message
    /// lacks the keywords so the keyword filter has something to do.
    pub fn messages(&self, keywords: &[&str], keyword_every: usize) -> Vec<RawMessage> {
        self.baskets()
            .enumerate()
            .map(|(n, (items, timestamp))| {
                let mut words: Vec<String> = items.iter().map(|&i| self.term(i)).collect();
                if keyword_every == 0 || n % keyword_every != 0 {
                    words.extend(keywords.iter().map(|k| k.to_string()));
                }
                RawMessage::new(format!("m{n}"), timestamp, words.join(" "))
            })
            .collect()
    }
}

/// Small random corpora for oracle comparisons.
pub fn random_corpus<R: Rng>(rng: &mut R, max_transactions: usize, max_items: usize) -> Corpus {
    let items = rng.random_range(1..=max_items);
    let n = rng.random_range(1..=max_transactions);
    let density: f64 = rng.random_range(0.1..0.7);
    let baskets: Vec<Vec<TermId>> = (0..n)
        .map(|_| {
            let mut b: Vec<TermId> = (0..items as TermId).filter(|_| rng.random_bool(density)).collect();
            if b.is_empty() {
                b.push(rng.random_range(0..items as TermId));
            }
            b
        })
        .collect();
    corpus_from_ids(items, &baskets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zipf_corpus_is_reproducible() {
        let spec = ZipfSpec { transactions: 500, vocabulary: 200, ..Default::default() };
        let a = spec.corpus();
        assert_eq!(a, spec.corpus());
        assert_eq!(a.total(), 500);
        let mean = a.transactions().iter().map(|t| t.items.len()).sum::<usize>() as f64 / 500.0;
        assert!((mean - 8.0).abs() < 1.0, "mean basket {mean}");
        let first = a.transactions().iter().map(|t| t.timestamp).min().unwrap();
        assert_eq!(first.date_naive(), spec.start);
    }

    #[test]
    fn messages_follow_baskets() {
        let spec = ZipfSpec { transactions: 20, vocabulary: 50, ..Default::default() };
        let msgs = spec.messages(&["end", "world"], 4);
        assert_eq!(msgs.len(), 20);
        assert!(!msgs[0].text.contains("end"));
        assert!(msgs[1].text.ends_with("end world"));
    }
}
