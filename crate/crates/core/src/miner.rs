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

//! Frequent itemset mining: level-wise Apriori plus an exhaustive oracle.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use rayon::prelude::*;

use crate::corpus::{Corpus, TermId, Vocabulary};
use crate::count::ItemsetTrie;
use crate::error::{Error, Result};
use crate::number::Rational;

/// Distinct-item ceiling above which the exhaustive oracle refuses to run.
pub const DEFAULT_ORACLE_GUARD: usize = 20;

// Frequent-item pair counts go in a dense triangular array up to this many
// cells (4 bytes each); beyond it pairs are counted in hash maps.
const TRIANGULAR_LIMIT: usize = 1 << 27;

/// A non-empty, strictly increasing set of term ids.
///
/// Ordered by size first, then lexicographically, which is the order every
/// output of this crate uses.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemSet(Vec<TermId>);

impl ItemSet {
    pub fn new(items: Vec<TermId>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::InvalidItemSet("empty itemset".into()));
        }
        if items.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidItemSet(format!("{items:?} is not strictly increasing")));
        }
        Ok(ItemSet(items))
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut items: Vec<TermId>) -> Result<Self> {
        items.sort_unstable();
        items.dedup();
        Self::new(items)
    }

    /// Resolves space- or comma-separated terms against a vocabulary.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Self> {
        let ids = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                let t = t.to_lowercase();
                vocab
                    .id(&t)
                    .ok_or_else(|| Error::InvalidItemSet(format!("term {t:?} not in vocabulary")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_unsorted(ids)
    }

    pub fn items(&self) -> &[TermId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, item: TermId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn is_subset_of(&self, sorted: &[TermId]) -> bool {
        is_subset(&self.0, sorted)
    }

    pub(crate) fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<()> {
        match self.0.last() {
            Some(&last) if last as usize >= vocab.len() => Err(Error::InvalidItemSet(format!(
                "item id {last} outside vocabulary of {} terms",
                vocab.len()
            ))),
            _ => Ok(()),
        }
    }
}

impl Ord for ItemSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ItemSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ItemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Merge test on two sorted slices.
pub fn is_subset(small: &[TermId], big: &[TermId]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut rest = big.iter();
    'outer: for &want in small {
        for &have in rest.by_ref() {
            match have.cmp(&want) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}

/// How a count is compared against the minimum support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Comparison {
    /// `support > min`
    #[default]
    Strict,
    /// `support >= min`
    Inclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinSupport {
    /// Absolute transaction count.
    Count(u64),
    /// Fraction of N, in `[0, 1)`.
    Fraction(Rational),
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinSupport::Count(c) => write!(f, "{c}"),
            MinSupport::Fraction(r) => write!(f, "{r}f"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MiningConfig {
    pub min_support: MinSupport,
    pub max_size: Option<usize>,
    pub comparison: Comparison,
}

impl MiningConfig {
    pub fn new(min_support: MinSupport) -> Self {
        MiningConfig { min_support, max_size: None, comparison: Comparison::Strict }
    }

    pub fn with_max_size(mut self, max_size: usize) -> Self {
        self.max_size = Some(max_size);
        self
    }

    pub fn with_comparison(mut self, comparison: Comparison) -> Self {
        self.comparison = comparison;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let MinSupport::Fraction(f) = self.min_support {
            if f >= Rational::from_integer(1) {
                return Err(Error::Config(format!("fractional min support {f} must be below 1")));
            }
        }
        if self.max_size == Some(0) {
            return Err(Error::Config("max_size must be at least 1".into()));
        }
        Ok(())
    }

    /// Smallest count that passes the threshold over `total` transactions, never below 1.
    pub fn min_count(&self, total: u64) -> u64 {
        let bound = match (self.min_support, self.comparison) {
            (MinSupport::Count(c), Comparison::Strict) => c.saturating_add(1),
            (MinSupport::Count(c), Comparison::Inclusive) => c,
            (MinSupport::Fraction(f), cmp) => {
                let num = *f.numer() as u128 * total as u128;
                let den = *f.denom() as u128;
                let q = num / den;
                let exact = num.is_multiple_of(den);
                match cmp {
                    Comparison::Strict => q + 1,
                    Comparison::Inclusive if exact => q,
                    Comparison::Inclusive => q + 1,
                }
                .min(u64::MAX as u128) as u64
            }
        };
        bound.max(1)
    }

    fn size_allowed(&self, size: usize) -> bool {
        self.max_size.is_none_or(|m| size <= m)
    }
}

/// An itemset with its exact count over a corpus of `total` transactions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequentSet {
    pub itemset: ItemSet,
    pub count: u64,
    pub total: u64,
}

impl FrequentSet {
    pub fn support(&self) -> Rational {
        Rational::new(self.count, self.total)
    }
}

/// Number of transactions containing `itemset`.
pub fn count(corpus: &Corpus, itemset: &ItemSet) -> Result<u64> {
    itemset.check_vocabulary(corpus.vocabulary())?;
    Ok(corpus
        .transactions()
        .par_iter()
        .filter(|t| itemset.is_subset_of(&t.items))
        .count() as u64)
}

/// Counts many itemsets in one pass over the corpus; `result[i]` belongs to `itemsets[i]`.
pub fn count_many(corpus: &Corpus, itemsets: &[ItemSet]) -> Result<Vec<u64>> {
    for set in itemsets {
        set.check_vocabulary(corpus.vocabulary())?;
    }
    let mut slot_of: HashMap<&[TermId], usize> = HashMap::new();
    let mut distinct: Vec<&[TermId]> = Vec::new();
    let slots: Vec<usize> = itemsets
        .iter()
        .map(|s| {
            *slot_of.entry(s.items()).or_insert_with(|| {
                distinct.push(s.items());
                distinct.len() - 1
            })
        })
        .collect();
    let trie = ItemsetTrie::new(distinct.iter().copied());
    let slot_count = trie.slots();
    let counts = corpus
        .transactions()
        .par_iter()
        .fold(
            || vec![0u64; slot_count],
            |mut acc, t| {
                trie.for_each_subset(&t.items, &mut |slot| acc[slot] += 1);
                acc
            },
        )
        .reduce(
            || vec![0u64; slot_count],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(slots.into_iter().map(|slot| counts[slot]).collect())
}

/// Exact support `|{t : itemset ⊆ t}| / N`.
pub fn support(corpus: &Corpus, itemset: &ItemSet) -> Result<Rational> {
    corpus.require_nonempty()?;
    Ok(Rational::new(count(corpus, itemset)?, corpus.total() as u64))
}

/// Level-wise Apriori.
///
/// Level one counts items directly. Level two counts every pair of frequent
/// items (no pruning is possible there) in a triangular array. From level
/// three on, candidates come from joining frequent (k-1)-sets that share a
/// (k-2)-prefix and dropping any candidate with an infrequent (k-1)-subset;
/// surviving candidates are counted with one trie walk per transaction.
/// Output is sorted by size, then lexicographically.
pub fn apriori(corpus: &Corpus, config: &MiningConfig) -> Result<Vec<FrequentSet>> {
    corpus.require_nonempty()?;
    config.validate()?;
    let total = corpus.total() as u64;
    if total > u32::MAX as u64 {
        return Err(Error::InvalidInput(format!("{total} transactions exceed the counting width")));
    }
    let min_count = config.min_count(total);
    let transactions = corpus.transactions();
    let vocab_len = corpus.vocabulary().len();

    let item_counts = transactions
        .par_iter()
        .fold(
            || vec![0u64; vocab_len],
            |mut acc, t| {
                for &item in &t.items {
                    acc[item as usize] += 1;
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; vocab_len],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );

    let mut out = Vec::new();
    let mut level: Vec<(Vec<TermId>, u64)> = item_counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c >= min_count)
        .map(|(id, &c)| (vec![id as TermId], c))
        .collect();

    let mut size = 1;
    while !level.is_empty() {
        out.extend(level.iter().map(|(items, count)| FrequentSet {
            itemset: ItemSet(items.clone()),
            count: *count,
            total,
        }));
        size += 1;
        if !config.size_allowed(size) {
            break;
        }
        level = if size == 2 {
            count_pairs(corpus, &level, min_count)
        } else {
            let candidates = join_and_prune(&level);
            count_candidates(corpus, candidates, min_count)
        };
    }
    Ok(out)
}

fn count_pairs(corpus: &Corpus, singles: &[(Vec<TermId>, u64)], min_count: u64) -> Vec<(Vec<TermId>, u64)> {
    let frequent: Vec<TermId> = singles.iter().map(|(s, _)| s[0]).collect();
    let m = frequent.len();
    if m < 2 {
        return Vec::new();
    }
    let mut rank = vec![u32::MAX; corpus.vocabulary().len()];
    for (r, &item) in frequent.iter().enumerate() {
        rank[item as usize] = r as u32;
    }
    let ranked = |items: &[TermId], buf: &mut Vec<usize>| {
        buf.clear();
        buf.extend(items.iter().map(|&i| rank[i as usize]).filter(|&r| r != u32::MAX).map(|r| r as usize));
    };

    let cells = m * (m - 1) / 2;
    let mut pairs = Vec::new();
    if cells <= TRIANGULAR_LIMIT {
        let row_start = |i: usize| i * (2 * m - i - 1) / 2;
        let counts: Vec<AtomicU32> = (0..cells).map(|_| AtomicU32::new(0)).collect();
        corpus.transactions().par_iter().for_each_init(Vec::new, |buf, t| {
            ranked(&t.items, buf);
            for (a, &i) in buf.iter().enumerate() {
                let base = row_start(i);
                for &j in &buf[a + 1..] {
                    counts[base + j - i - 1].fetch_add(1, AtomicOrdering::Relaxed);
                }
            }
        });
        for i in 0..m {
            let base = row_start(i);
            for j in i + 1..m {
                let c = counts[base + j - i - 1].load(AtomicOrdering::Relaxed) as u64;
                if c >= min_count {
                    pairs.push((vec![frequent[i], frequent[j]], c));
                }
            }
        }
    } else {
        let counts = corpus
            .transactions()
            .par_iter()
            .fold(
                || (HashMap::<(u32, u32), u64>::new(), Vec::new()),
                |(mut acc, mut buf), t| {
                    ranked(&t.items, &mut buf);
                    for (a, &i) in buf.iter().enumerate() {
                        for &j in &buf[a + 1..] {
                            *acc.entry((i as u32, j as u32)).or_default() += 1;
                        }
                    }
                    (acc, buf)
                },
            )
            .map(|(acc, _)| acc)
            .reduce(HashMap::new, |mut a, b| {
                for (k, v) in b {
                    *a.entry(k).or_default() += v;
                }
                a
            });
        let mut kept: Vec<_> = counts.into_iter().filter(|&(_, c)| c >= min_count).collect();
        kept.sort_unstable();
        pairs = kept
            .into_iter()
            .map(|((i, j), c)| (vec![frequent[i as usize], frequent[j as usize]], c))
            .collect();
    }
    pairs
}

/// Joins lexicographically sorted frequent (k-1)-sets sharing a (k-2)-prefix,
/// then drops candidates with any infrequent (k-1)-subset. Output is sorted.
fn join_and_prune(level: &[(Vec<TermId>, u64)]) -> Vec<Vec<TermId>> {
    let known: HashSet<&[TermId]> = level.iter().map(|(s, _)| s.as_slice()).collect();
    let k_minus_1 = level.first().map_or(0, |(s, _)| s.len());
    let prefix_len = k_minus_1 - 1;
    let mut candidates = Vec::new();
    let mut start = 0;
    let mut probe = Vec::with_capacity(k_minus_1);
    while start < level.len() {
        let prefix = &level[start].0[..prefix_len];
        let end = start + level[start..].iter().take_while(|(s, _)| &s[..prefix_len] == prefix).count();
        for i in start..end {
            for j in i + 1..end {
                let mut candidate = level[i].0.clone();
                candidate.push(level[j].0[prefix_len]);
                // subsets dropping one of the last two items are level[i] and level[j]
                let all_frequent = (0..prefix_len).all(|skip| {
                    probe.clear();
                    probe.extend(candidate.iter().enumerate().filter(|&(p, _)| p != skip).map(|(_, &x)| x));
                    known.contains(probe.as_slice())
                });
                if all_frequent {
                    candidates.push(candidate);
                }
            }
        }
        start = end;
    }
    candidates
}

fn count_candidates(corpus: &Corpus, candidates: Vec<Vec<TermId>>, min_count: u64) -> Vec<(Vec<TermId>, u64)> {
    if candidates.is_empty() {
        return Vec::new();
    }
    let k = candidates[0].len();
    let mut active = vec![false; corpus.vocabulary().len()];
    for c in &candidates {
        for &item in c {
            active[item as usize] = true;
        }
    }
    let trie = ItemsetTrie::new(candidates.iter().map(Vec::as_slice));
    let counts: Vec<AtomicU32> = (0..trie.slots()).map(|_| AtomicU32::new(0)).collect();
    corpus.transactions().par_iter().for_each_init(Vec::new, |buf: &mut Vec<TermId>, t| {
        if t.items.len() < k {
            return;
        }
        buf.clear();
        buf.extend(t.items.iter().copied().filter(|&i| active[i as usize]));
        if buf.len() < k {
            return;
        }
        trie.for_each_subset(buf, &mut |slot| {
            counts[slot].fetch_add(1, AtomicOrdering::Relaxed);
        });
    });
    candidates
        .into_iter()
        .zip(counts)
        .map(|(c, n)| (c, n.into_inner() as u64))
        .filter(|&(_, n)| n >= min_count)
        .collect()
}

/// Exhaustive oracle with the same contract as [`apriori`], refusing corpora
/// with more than [`DEFAULT_ORACLE_GUARD`] distinct items.
pub fn brute_force_frequent(corpus: &Corpus, config: &MiningConfig) -> Result<Vec<FrequentSet>> {
    brute_force_frequent_guarded(corpus, config, DEFAULT_ORACLE_GUARD)
}

/// Enumerates the power set of every transaction and tallies each non-empty
/// subset, then applies the threshold to each tally directly.
pub fn brute_force_frequent_guarded(corpus: &Corpus, config: &MiningConfig, guard: usize) -> Result<Vec<FrequentSet>> {
    corpus.require_nonempty()?;
    config.validate()?;
    let distinct: BTreeSet<TermId> = corpus.transactions().iter().flat_map(|t| t.items.iter().copied()).collect();
    if distinct.len() > guard {
        return Err(Error::OracleRefused { distinct: distinct.len(), guard });
    }
    let total = corpus.total() as u64;
    let mut tally: HashMap<Vec<TermId>, u64> = HashMap::new();
    for t in corpus.transactions() {
        let n = t.items.len();
        for mask in 1u32..(1u32 << n) {
            let subset: Vec<TermId> = (0..n).filter(|b| mask & (1 << b) != 0).map(|b| t.items[b]).collect();
            *tally.entry(subset).or_default() += 1;
        }
    }
    let passes = |count: u64| -> bool {
        let ord = match config.min_support {
            MinSupport::Count(c) => count.cmp(&c),
            MinSupport::Fraction(f) => {
                (count as u128 * *f.denom() as u128).cmp(&(*f.numer() as u128 * total as u128))
            }
        };
        match config.comparison {
            Comparison::Strict => ord == Ordering::Greater,
            Comparison::Inclusive => ord != Ordering::Less,
        }
    };
    let mut out: Vec<FrequentSet> = tally
        .into_iter()
        .filter(|(items, count)| passes(*count) && config.max_size.is_none_or(|m| items.len() <= m))
        .map(|(items, count)| FrequentSet { itemset: ItemSet(items), count, total })
        .collect();
    out.sort_by(|a, b| a.itemset.cmp(&b.itemset));
    Ok(out)
}
