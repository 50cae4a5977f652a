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

//! Daily dynamics of sets and rules relative to an event date.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use chrono::{Days, NaiveDate};
use rayon::prelude::*;

use crate::corpus::{normalize_terms, Corpus, TermId, Vocabulary};
use crate::count::ItemsetTrie;
use crate::error::{Error, Result};
use crate::miner::{FrequentSet, ItemSet};
use crate::number::{to_f64, Rational};
use crate::rules::AssociationRule;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DayBucket {
    pub date: NaiveDate,
    /// Positions in `Corpus::transactions`, ascending.
    pub indices: Vec<usize>,
}

impl DayBucket {
    pub fn count(&self) -> usize {
        self.indices.len()
    }
}

/// Contiguous UTC calendar days from the first to the last transaction;
/// days without transactions are present with no indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailyBuckets {
    days: Vec<DayBucket>,
}

impl DailyBuckets {
    pub fn days(&self) -> &[DayBucket] {
        &self.days
    }

    pub fn len(&self) -> usize {
        self.days.len()
    }

    pub fn is_empty(&self) -> bool {
        self.days.is_empty()
    }

    pub fn start(&self) -> NaiveDate {
        self.days[0].date
    }

    pub fn end(&self) -> NaiveDate {
        self.days[self.days.len() - 1].date
    }

    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start() <= date && date <= self.end()
    }

    pub fn total(&self) -> usize {
        self.days.iter().map(DayBucket::count).sum()
    }
}

pub fn bucket_daily(corpus: &Corpus) -> Result<DailyBuckets> {
    corpus.require_nonempty()?;
    let dates: Vec<NaiveDate> = corpus.transactions().iter().map(|t| t.timestamp.date_naive()).collect();
    let first = *dates.iter().min().expect("non-empty");
    let last = *dates.iter().max().expect("non-empty");
    let span = (last - first).num_days() as usize + 1;
    let mut days: Vec<DayBucket> = (0..span)
        .map(|i| DayBucket { date: first + Days::new(i as u64), indices: Vec::new() })
        .collect();
    for (i, date) in dates.iter().enumerate() {
        days[(*date - first).num_days() as usize].indices.push(i);
    }
    Ok(DailyBuckets { days })
}

/// Per-day containment counts, `result[k][d]` for `itemsets[k]` on day `d`.
pub fn day_counts(buckets: &DailyBuckets, corpus: &Corpus, itemsets: &[ItemSet]) -> Result<Vec<Vec<u64>>> {
    for set in itemsets {
        set.check_vocabulary(corpus.vocabulary())?;
    }
    // the trie needs distinct itemsets
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
    let transactions = corpus.transactions();
    let per_day: Vec<Vec<u64>> = buckets
        .days
        .par_iter()
        .map(|day| {
            let mut counts = vec![0u64; trie.slots()];
            for &i in &day.indices {
                trie.for_each_subset(&transactions[i].items, &mut |slot| counts[slot] += 1);
            }
            counts
        })
        .collect();
    Ok(slots
        .iter()
        .map(|&slot| per_day.iter().map(|day| day[slot]).collect())
        .collect())
}

/// What a series tracks: a term set's support, or a rule's measures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Subject {
    Set(ItemSet),
    Rule { antecedent: ItemSet, consequent: ItemSet },
}

impl Subject {
    pub fn rule(antecedent: ItemSet, consequent: ItemSet) -> Result<Self> {
        if antecedent.items().iter().any(|&i| consequent.contains(i)) {
            return Err(Error::InvalidItemSet("antecedent and consequent overlap".into()));
        }
        Ok(Subject::Rule { antecedent, consequent })
    }

    /// `"a b"` for a set, `"a b => c"` for a rule.
    pub fn parse(text: &str, vocab: &Vocabulary) -> Result<Self> {
        match text.split_once("=>") {
            Some((x, y)) => Subject::rule(ItemSet::parse(x, vocab)?, ItemSet::parse(y, vocab)?),
            None => Ok(Subject::Set(ItemSet::parse(text, vocab)?)),
        }
    }

    pub fn label(&self, vocab: &Vocabulary) -> String {
        match self {
            Subject::Set(s) => vocab.render(s.items()),
            Subject::Rule { antecedent, consequent } => {
                format!("{} => {}", vocab.render(antecedent.items()), vocab.render(consequent.items()))
            }
        }
    }

    /// The set whose support the subject carries: the set itself, or X ∪ Y.
    pub fn support_set(&self) -> ItemSet {
        match self {
            Subject::Set(s) => s.clone(),
            Subject::Rule { antecedent, consequent } => {
                ItemSet::from_unsorted([antecedent.items(), consequent.items()].concat()).expect("non-empty union")
            }
        }
    }
}

impl From<&FrequentSet> for Subject {
    fn from(f: &FrequentSet) -> Self {
        Subject::Set(f.itemset.clone())
    }
}

impl From<&AssociationRule> for Subject {
    fn from(r: &AssociationRule) -> Self {
        Subject::Rule { antecedent: r.antecedent.clone(), consequent: r.consequent.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Support,
    ConfFwd,
    ConfBwd,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::Support => "support",
            Metric::ConfFwd => "conf_fwd",
            Metric::ConfBwd => "conf_bwd",
        })
    }
}

/// Denominator of daily support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    /// The day's own transaction count.
    #[default]
    PerDay,
    /// The whole-corpus N.
    Global,
}

/// One exact value per bucket day. A day whose denominator is zero is undefined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DailySeries {
    pub subject: Subject,
    pub metric: Metric,
    pub start: NaiveDate,
    pub numerators: Vec<u64>,
    pub denominators: Vec<u64>,
}

impl DailySeries {
    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    pub fn date(&self, day: usize) -> NaiveDate {
        self.start + Days::new(day as u64)
    }

    pub fn value(&self, day: usize) -> Option<Rational> {
        match self.denominators[day] {
            0 => None,
            d => Some(Rational::new(self.numerators[day], d)),
        }
    }

    pub fn values(&self) -> Vec<Option<Rational>> {
        (0..self.len()).map(|d| self.value(d)).collect()
    }

    pub fn defined(&self) -> impl Iterator<Item = (usize, Rational)> + '_ {
        (0..self.len()).filter_map(|d| self.value(d).map(|v| (d, v)))
    }

    pub fn defined_count(&self) -> usize {
        self.denominators.iter().filter(|&&d| d > 0).count()
    }
}

fn day_sizes(buckets: &DailyBuckets) -> Vec<u64> {
    buckets.days.iter().map(|d| d.count() as u64).collect()
}

/// Per-day support of one itemset, normalized by each day's transaction count.
pub fn series_support(buckets: &DailyBuckets, corpus: &Corpus, itemset: &ItemSet) -> Result<DailySeries> {
    series_support_with(buckets, corpus, itemset, Denominator::PerDay)
}

pub fn series_support_with(
    buckets: &DailyBuckets,
    corpus: &Corpus,
    itemset: &ItemSet,
    denominator: Denominator,
) -> Result<DailySeries> {
    let counts = day_counts(buckets, corpus, std::slice::from_ref(itemset))?.remove(0);
    Ok(support_series(Subject::Set(itemset.clone()), buckets, counts, corpus.total() as u64, denominator))
}

fn support_series(subject: Subject, buckets: &DailyBuckets, counts: Vec<u64>, total: u64, denominator: Denominator) -> DailySeries {
    let denominators = match denominator {
        Denominator::PerDay => day_sizes(buckets),
        Denominator::Global => vec![total; buckets.len()],
    };
    DailySeries { subject, metric: Metric::Support, start: buckets.start(), numerators: counts, denominators }
}

/// Which confidence of a rule to track.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSide {
    /// Conf(X -> Y)
    Fwd,
    /// Conf(Y -> X)
    Bwd,
}

/// Per-day confidence; days where the conditioning side never occurs are undefined.
pub fn series_confidence(
    buckets: &DailyBuckets,
    corpus: &Corpus,
    rule: &AssociationRule,
    side: RuleSide,
) -> Result<DailySeries> {
    let subject = Subject::from(rule);
    let sets = [rule.parent.clone(), rule.antecedent.clone(), rule.consequent.clone()];
    let mut counts = day_counts(buckets, corpus, &sets)?;
    let consequent = counts.pop().expect("three");
    let antecedent = counts.pop().expect("three");
    let parent = counts.pop().expect("three");
    let (metric, denominators) = match side {
        RuleSide::Fwd => (Metric::ConfFwd, antecedent),
        RuleSide::Bwd => (Metric::ConfBwd, consequent),
    };
    Ok(DailySeries { subject, metric, start: buckets.start(), numerators: parent, denominators })
}

/// All series for a batch of subjects: support for sets; support,
/// conf_fwd and conf_bwd for rules. Counting is shared across subjects.
pub fn compute_series(
    buckets: &DailyBuckets,
    corpus: &Corpus,
    subjects: &[Subject],
    denominator: Denominator,
) -> Result<Vec<DailySeries>> {
    let mut sets = Vec::new();
    for subject in subjects {
        sets.push(subject.support_set());
        if let Subject::Rule { antecedent, consequent } = subject {
            sets.push(antecedent.clone());
            sets.push(consequent.clone());
        }
    }
    let counts = day_counts(buckets, corpus, &sets)?;
    let total = corpus.total() as u64;
    let mut counts = counts.into_iter();
    let mut out = Vec::new();
    for subject in subjects {
        let parent = counts.next().expect("parent counts");
        out.push(support_series(subject.clone(), buckets, parent.clone(), total, denominator));
        if let Subject::Rule { .. } = subject {
            let x = counts.next().expect("antecedent counts");
            let y = counts.next().expect("consequent counts");
            for (metric, denominators) in [(Metric::ConfFwd, x), (Metric::ConfBwd, y)] {
                out.push(DailySeries {
                    subject: subject.clone(),
                    metric,
                    start: buckets.start(),
                    numerators: parent.clone(),
                    denominators,
                });
            }
        }
    }
    Ok(out)
}

/// Timing of a series' global maximum relative to the event date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PeakClass {
    PreEventEarly,
    PreEventLate,
    OnEvent,
    PostEvent,
    Periodic,
    Flat,
}

impl PeakClass {
    pub fn is_pre_event(self) -> bool {
        matches!(self, PeakClass::PreEventEarly | PeakClass::PreEventLate)
    }
}

impl fmt::Display for PeakClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PeakClass::PreEventEarly => "pre_event_early",
            PeakClass::PreEventLate => "pre_event_late",
            PeakClass::OnEvent => "on_event",
            PeakClass::PostEvent => "post_event",
            PeakClass::Periodic => "periodic",
            PeakClass::Flat => "flat",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicityConfig {
    /// Circular autocorrelation must exceed this.
    pub min_autocorrelation: f64,
    /// Local maxima count as comparable when within this fraction of the global maximum.
    pub peak_tolerance: Rational,
    pub min_defined: usize,
}

impl Default for PeriodicityConfig {
    fn default() -> Self {
        PeriodicityConfig { min_autocorrelation: 0.5, peak_tolerance: Rational::new(1, 4), min_defined: 8 }
    }
}

/// Lead-day windows, inclusive on both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifyConfig {
    pub early: (i64, i64),
    pub late: (i64, i64),
    pub periodicity: PeriodicityConfig,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { early: (6, 8), late: (1, 5), periodicity: PeriodicityConfig::default() }
    }
}

impl ClassifyConfig {
    pub fn validate(&self) -> Result<()> {
        let (late_lo, late_hi) = self.late;
        let (early_lo, early_hi) = self.early;
        if !(1 <= late_lo && late_lo <= late_hi && late_hi < early_lo && early_lo <= early_hi) {
            return Err(Error::Config(format!(
                "windows must satisfy 1 <= late.lo <= late.hi < early.lo <= early.hi, got late {late_lo}-{late_hi}, early {early_lo}-{early_hi}"
            )));
        }
        let p = &self.periodicity;
        if !(0.0..=1.0).contains(&p.min_autocorrelation) || p.peak_tolerance > Rational::from_integer(1) {
            return Err(Error::Config("periodicity thresholds must lie in [0, 1]".into()));
        }
        if p.min_defined < 2 {
            return Err(Error::Config("periodicity needs at least 2 defined values".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakProfile {
    pub class: PeakClass,
    pub global_max_date: NaiveDate,
    pub global_max_value: Rational,
    /// `event_date - global_max_date`; positive before the event.
    pub lead_days: i64,
    /// Other local maxima within the peak tolerance of the global maximum.
    pub secondary_peaks: Vec<(NaiveDate, Rational)>,
    pub period: Option<usize>,
    /// The lead falls outside the configured window of its class.
    pub beyond_window: bool,
}

/// Local maxima over the defined values, as (day, value). A plateau counts
/// once, at its first day; a plateau touching either end counts when its
/// one neighbour is lower.
fn local_maxima(defined: &[(usize, Rational)]) -> Vec<(usize, Rational)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < defined.len() {
        let value = defined[start].1;
        let end = start + defined[start..].iter().take_while(|(_, v)| *v == value).count();
        let left_lower = start == 0 || defined[start - 1].1 < value;
        let right_lower = end == defined.len() || defined[end].1 < value;
        let whole = start == 0 && end == defined.len();
        if left_lower && right_lower && !whole {
            out.push(defined[start]);
        }
        start = end;
    }
    out
}

fn comparable(value: Rational, max: Rational, tolerance: Rational) -> bool {
    value >= max * (Rational::from_integer(1) - tolerance.min(Rational::from_integer(1)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Periodicity {
    pub periodic: bool,
    /// Lag of the strongest circular autocorrelation, in days.
    pub period: Option<usize>,
    pub autocorrelation: f64,
}

/// Flags oscillating series: the strongest circular autocorrelation over
/// lags `2..=len/2` of the mean-removed series (undefined days set to the
/// mean) must exceed the threshold, and at least two local maxima must be
/// comparable to the global maximum.
pub fn detect_periodicity(series: &DailySeries, config: &PeriodicityConfig) -> Result<Periodicity> {
    let defined: Vec<(usize, Rational)> = series.defined().collect();
    if defined.len() < config.min_defined {
        return Err(Error::SeriesTooShort { defined: defined.len(), required: config.min_defined });
    }
    let n = series.len();
    let mean = defined.iter().map(|(_, v)| to_f64(*v)).sum::<f64>() / defined.len() as f64;
    let mut centered = vec![0.0; n];
    for &(d, v) in &defined {
        centered[d] = to_f64(v) - mean;
    }
    let energy: f64 = centered.iter().map(|x| x * x).sum();
    let none = Periodicity { periodic: false, period: None, autocorrelation: 0.0 };
    let scale = defined.iter().map(|(_, v)| to_f64(*v).abs()).fold(0.0, f64::max);
    if energy <= f64::EPSILON * scale * scale * n as f64 || energy == 0.0 {
        return Ok(none);
    }
    let mut best: Option<(usize, f64)> = None;
    for lag in 2..=n / 2 {
        let r = (0..n).map(|i| centered[i] * centered[(i + lag) % n]).sum::<f64>() / energy;
        if best.is_none_or(|(_, b)| r > b + 1e-12) {
            best = Some((lag, r));
        }
    }
    let Some((lag, r)) = best else {
        return Ok(none);
    };
    let max = defined.iter().map(|(_, v)| *v).max().expect("non-empty");
    let peaks = local_maxima(&defined)
        .into_iter()
        .filter(|(_, v)| comparable(*v, max, config.peak_tolerance))
        .count();
    let periodic = r > config.min_autocorrelation && peaks >= 2;
    Ok(Periodicity { periodic, period: Some(lag), autocorrelation: r })
}

/// Assigns exactly one timing class. Periodic wins, then flat, then the
/// lead-day windows. Ties for the maximum resolve to the earliest day.
pub fn classify_peak(series: &DailySeries, event_date: NaiveDate, config: &ClassifyConfig) -> Result<PeakProfile> {
    config.validate()?;
    let defined: Vec<(usize, Rational)> = series.defined().collect();
    let Some(&(first_day, first_value)) = defined.first() else {
        return Err(Error::AllUndefined);
    };
    let (mut max_day, mut max_value) = (first_day, first_value);
    let mut min_value = first_value;
    for &(d, v) in &defined[1..] {
        if v > max_value {
            max_day = d;
            max_value = v;
        }
        min_value = min_value.min(v);
    }
    let global_max_date = series.date(max_day);
    let lead_days = (event_date - global_max_date).num_days();

    let secondary_peaks = local_maxima(&defined)
        .into_iter()
        .filter(|&(d, v)| d != max_day && comparable(v, max_value, config.periodicity.peak_tolerance))
        .map(|(d, v)| (series.date(d), v))
        .collect();

    let periodicity = if defined.len() >= config.periodicity.min_defined {
        Some(detect_periodicity(series, &config.periodicity)?)
    } else {
        None
    };

    let mut beyond_window = false;
    let mut period = None;
    let class = if let Some(p) = periodicity.filter(|p| p.periodic) {
        period = p.period;
        PeakClass::Periodic
    } else if max_value == min_value {
        PeakClass::Flat
    } else if lead_days == 0 {
        PeakClass::OnEvent
    } else if lead_days < 0 {
        PeakClass::PostEvent
    } else if lead_days >= config.early.0 {
        beyond_window = lead_days > config.early.1;
        PeakClass::PreEventEarly
    } else {
        beyond_window = lead_days < config.late.0 || lead_days > config.late.1;
        PeakClass::PreEventLate
    };

    Ok(PeakProfile { class, global_max_date, global_max_value: max_value, lead_days, secondary_peaks, period, beyond_window })
}

/// A classified series, keyed by what it measures.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfiledSeries {
    pub subject: Subject,
    pub metric: Metric,
    pub profile: PeakProfile,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkerReport {
    pub subject: Subject,
    pub metric: Metric,
    pub profile: PeakProfile,
    pub threshold: Rational,
    pub exceeded: bool,
    /// `[global_max_date, event_date]`, only for pre-event maxima above the threshold.
    pub window: Option<(NaiveDate, NaiveDate)>,
}

impl MarkerReport {
    /// Days between the maximum and the event, zero without a window.
    pub fn window_days(&self) -> i64 {
        self.window.map_or(0, |(a, b)| (b - a).num_days())
    }
}

/// One report per profile: exceeded when the maximum is strictly above the
/// threshold. Sorted by descending maximum, then subject and metric.
pub fn detect_markers(profiles: Vec<ProfiledSeries>, threshold: Rational, event_date: NaiveDate) -> Vec<MarkerReport> {
    let mut reports: Vec<MarkerReport> = profiles
        .into_iter()
        .map(|p| {
            let exceeded = p.profile.global_max_value > threshold;
            let lead = (event_date - p.profile.global_max_date).num_days();
            let window = (exceeded && lead > 0 && p.profile.class.is_pre_event())
                .then_some((p.profile.global_max_date, event_date));
            MarkerReport { subject: p.subject, metric: p.metric, profile: p.profile, threshold, exceeded, window }
        })
        .collect();
    reports.sort_by(marker_order);
    reports
}

/// Terms defining the topic under analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThematicField(BTreeSet<String>);

impl ThematicField {
    pub fn new<I, S>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let terms = normalize_terms(terms);
        if terms.is_empty() {
            return Err(Error::EmptyField);
        }
        Ok(ThematicField(terms))
    }

    pub fn contains(&self, term: &str) -> bool {
        self.0.contains(term)
    }

    pub fn terms(&self) -> &BTreeSet<String> {
        &self.0
    }
}

/// Anything made of vocabulary terms.
pub trait Themed {
    fn term_ids(&self) -> Vec<TermId>;
}

impl Themed for ItemSet {
    fn term_ids(&self) -> Vec<TermId> {
        self.items().to_vec()
    }
}

impl Themed for FrequentSet {
    fn term_ids(&self) -> Vec<TermId> {
        self.itemset.term_ids()
    }
}

impl Themed for AssociationRule {
    fn term_ids(&self) -> Vec<TermId> {
        self.parent.term_ids()
    }
}

impl Themed for Subject {
    fn term_ids(&self) -> Vec<TermId> {
        self.support_set().term_ids()
    }
}

impl Themed for ProfiledSeries {
    fn term_ids(&self) -> Vec<TermId> {
        self.subject.term_ids()
    }
}

impl Themed for MarkerReport {
    fn term_ids(&self) -> Vec<TermId> {
        self.subject.term_ids()
    }
}

/// Splits subjects into those made only of field terms and the rest.
pub fn thematic_filter<T: Themed>(subjects: Vec<T>, field: &ThematicField, vocab: &Vocabulary) -> Result<(Vec<T>, Vec<T>)> {
    if field.0.is_empty() {
        return Err(Error::EmptyField);
    }
    Ok(subjects.into_iter().partition(|s| {
        s.term_ids()
            .iter()
            .all(|&id| vocab.term(id).is_some_and(|t| field.contains(t)))
    }))
}

/// Descending maximum, then subject, then metric.
pub fn marker_order(a: &MarkerReport, b: &MarkerReport) -> Ordering {
    b.profile
        .global_max_value
        .cmp(&a.profile.global_max_value)
        .then_with(|| a.subject.cmp(&b.subject))
        .then_with(|| a.metric.cmp(&b.metric))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{corpus_from_baskets, dated_corpus};

    fn date(m: u32, d: u32) -> NaiveDate {
        let y = if m == 1 { 2013 } else { 2012 };
        NaiveDate::from_ymd_opt(y, m, d).unwrap()
    }

    fn event() -> NaiveDate {
        date(12, 21)
    }

    fn set(items: &[TermId]) -> ItemSet {
        ItemSet::new(items.to_vec()).unwrap()
    }

    /// Support-metric series from exact per-day fractions.
    fn series(start: NaiveDate, values: &[(u64, u64)]) -> DailySeries {
        DailySeries {
            subject: Subject::Set(set(&[0])),
            metric: Metric::Support,
            start,
            numerators: values.iter().map(|v| v.0).collect(),
            denominators: values.iter().map(|v| v.1).collect(),
        }
    }

    fn hundredths(values: &[u64]) -> DailySeries {
        let v: Vec<(u64, u64)> = values.iter().map(|&x| (x, 100)).collect();
        series(date(12, 10), &v)
    }

    #[test]
    fn buckets_materialize_empty_days() {
        let c = dated_corpus(&[(&["a"], 1, date(12, 10)), (&["b"], 2, date(12, 12))], &[]);
        let b = bucket_daily(&c).unwrap();
        let counts: Vec<usize> = b.days().iter().map(DayBucket::count).collect();
        assert_eq!(counts, [1, 0, 2]);
        assert_eq!(b.start(), date(12, 10));
        assert_eq!(b.days()[1].date, date(12, 11));
        assert_eq!(b.total(), 3);
    }

    #[test]
    fn single_day_bucket() {
        let c = corpus_from_baskets(&[&["a"], &["b"]]);
        let b = bucket_daily(&c).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b.days()[0].count(), 2);
    }

    #[test]
    fn support_series_per_day() {
        let c = dated_corpus(
            &[
                (&["a", "b"], 2, date(12, 10)),
                (&["a"], 2, date(12, 10)),
                (&["a", "b"], 1, date(12, 12)),
            ],
            &["z"],
        );
        let b = bucket_daily(&c).unwrap();
        let s = series_support(&b, &c, &set(&[0, 1])).unwrap();
        assert_eq!(s.values(), vec![Some(Rational::new(1, 2)), None, Some(Rational::from_integer(1))]);
        let z = series_support(&b, &c, &set(&[2])).unwrap();
        assert!(z.defined().all(|(_, v)| v == Rational::from_integer(0)));
        let g = series_support_with(&b, &c, &set(&[0, 1]), Denominator::Global).unwrap();
        assert_eq!(g.values(), vec![Some(Rational::new(2, 5)), Some(Rational::from_integer(0)), Some(Rational::new(1, 5))]);
        assert!(series_support(&b, &c, &set(&[9])).is_err());
    }

    #[test]
    fn confidence_series_per_day() {
        // day 1: X={a} in 4, X∪Y in 1; day 2: no a; day 3: every a has b
        let c = dated_corpus(
            &[
                (&["a", "b"], 1, date(12, 10)),
                (&["a"], 3, date(12, 10)),
                (&["b"], 1, date(12, 11)),
                (&["a", "b"], 2, date(12, 12)),
            ],
            &[],
        );
        let b = bucket_daily(&c).unwrap();
        let rule = AssociationRule {
            antecedent: set(&[0]),
            consequent: set(&[1]),
            parent: set(&[0, 1]),
            count_parent: 3,
            count_antecedent: 6,
            count_consequent: 4,
            total: 7,
        };
        let s = series_confidence(&b, &c, &rule, RuleSide::Fwd).unwrap();
        assert_eq!(s.values(), vec![Some(Rational::new(1, 4)), None, Some(Rational::from_integer(1))]);
        let back = series_confidence(&b, &c, &rule, RuleSide::Bwd).unwrap();
        assert_eq!(back.values(), vec![Some(Rational::from_integer(1)), Some(Rational::from_integer(0)), Some(Rational::from_integer(1))]);

        let batch = compute_series(&b, &c, &[Subject::from(&rule)], Denominator::PerDay).unwrap();
        assert_eq!(batch.len(), 3);
        assert_eq!(batch[1], s);
        assert_eq!(batch[2], back);
    }

    #[test]
    fn classify_basic_classes() {
        let cfg = ClassifyConfig::default();
        // span Dec 10..Dec 26, event Dec 21 at index 11
        let mut v = [1u64; 17];
        v[4] = 9; // Dec 14, lead 7
        let p = classify_peak(&hundredths(&v), event(), &cfg).unwrap();
        assert_eq!((p.class, p.lead_days), (PeakClass::PreEventEarly, 7));
        assert!(!p.beyond_window);

        let mut v = [1u64; 17];
        v[11] = 9;
        let p = classify_peak(&hundredths(&v), event(), &cfg).unwrap();
        assert_eq!((p.class, p.lead_days), (PeakClass::OnEvent, 0));

        let p = classify_peak(&hundredths(&[3; 17]), event(), &cfg).unwrap();
        assert_eq!(p.class, PeakClass::Flat);

        let mut v = [1u64; 17];
        v[0] = 9; // Dec 10, lead 11
        let p = classify_peak(&hundredths(&v), event(), &cfg).unwrap();
        assert_eq!((p.class, p.lead_days, p.beyond_window), (PeakClass::PreEventEarly, 11, true));

        let mut v = [1u64; 17];
        v[13] = 9;
        let p = classify_peak(&hundredths(&v), event(), &cfg).unwrap();
        assert_eq!((p.class, p.lead_days), (PeakClass::PostEvent, -2));
    }

    #[test]
    fn classify_ties_pick_earliest() {
        let mut v = [1u64; 17];
        v[8] = 9;
        v[10] = 9;
        let p = classify_peak(&hundredths(&v), event(), &ClassifyConfig::default()).unwrap();
        assert_eq!(p.global_max_date, date(12, 18));
        assert_eq!(p.lead_days, 3);
        assert_eq!(p.secondary_peaks, vec![(date(12, 20), Rational::new(9, 100))]);
    }

    #[test]
    fn classify_masks_undefined_days() {
        let s = series(date(12, 20), &[(1, 0), (1, 2), (5, 0)]);
        let p = classify_peak(&s, event(), &ClassifyConfig::default()).unwrap();
        assert_eq!(p.global_max_date, date(12, 21));
        assert_eq!(p.class, PeakClass::Flat);
        let s = series(date(12, 20), &[(1, 0), (5, 0)]);
        assert!(matches!(classify_peak(&s, event(), &ClassifyConfig::default()), Err(Error::AllUndefined)));
    }

    #[test]
    fn config_windows_validated() {
        let cfg = ClassifyConfig { early: (5, 8), late: (1, 5), ..Default::default() };
        assert!(cfg.validate().is_err());
        let cfg = ClassifyConfig { early: (7, 8), late: (1, 3), ..Default::default() };
        assert!(cfg.validate().is_ok());
        let mut v = [1u64; 17];
        v[6] = 9; // lead 5: between windows, reported late and flagged
        let p = classify_peak(&hundredths(&v), event(), &cfg).unwrap();
        assert_eq!((p.class, p.beyond_window), (PeakClass::PreEventLate, true));
    }

    #[test]
    fn periodicity_square_wave() {
        let s = hundredths(&[1, 1, 1, 0, 0, 0, 1, 1, 1, 0, 0, 0]);
        let p = detect_periodicity(&s, &PeriodicityConfig::default()).unwrap();
        assert!(p.periodic);
        assert_eq!(p.period, Some(6));
        assert!((p.autocorrelation - 1.0).abs() < 1e-12);
    }

    #[test]
    fn periodicity_negatives() {
        let cfg = PeriodicityConfig::default();
        assert!(!detect_periodicity(&hundredths(&[4; 12]), &cfg).unwrap().periodic);
        let mut spike = [1u64; 12];
        spike[5] = 50;
        assert!(!detect_periodicity(&hundredths(&spike), &cfg).unwrap().periodic);
        assert!(matches!(
            detect_periodicity(&hundredths(&[1, 2, 3]), &cfg),
            Err(Error::SeriesTooShort { defined: 3, required: 8 })
        ));
    }

    #[test]
    fn local_maxima_plateaus_and_edges() {
        let r = |v: u64| Rational::from_integer(v);
        let d: Vec<(usize, Rational)> = [3, 3, 1, 2, 2, 0, 5].iter().enumerate().map(|(i, &v)| (i, r(v))).collect();
        assert_eq!(local_maxima(&d), vec![(0, r(3)), (3, r(2)), (6, r(5))]);
        let flat: Vec<(usize, Rational)> = (0..4).map(|i| (i, r(1))).collect();
        assert!(local_maxima(&flat).is_empty());
    }

    fn profiled(max: Rational, max_date: NaiveDate, class: PeakClass) -> ProfiledSeries {
        ProfiledSeries {
            subject: Subject::Set(set(&[0])),
            metric: Metric::Support,
            profile: PeakProfile {
                class,
                global_max_date: max_date,
                global_max_value: max,
                lead_days: (event() - max_date).num_days(),
                secondary_peaks: vec![],
                period: None,
                beyond_window: false,
            },
        }
    }

    #[test]
    fn markers_threshold_and_window() {
        let p = profiled(Rational::new(1, 100), date(12, 14), PeakClass::PreEventEarly);
        let r = &detect_markers(vec![p.clone()], Rational::new(5, 1000), event())[0];
        assert!(r.exceeded);
        assert_eq!(r.window, Some((date(12, 14), event())));
        assert_eq!(r.window_days(), 7);

        let r = &detect_markers(vec![p.clone()], Rational::from_integer(1), event())[0];
        assert!(!r.exceeded);
        assert_eq!(r.window, None);

        let post = profiled(Rational::new(1, 100), date(12, 23), PeakClass::PostEvent);
        let r = &detect_markers(vec![post], Rational::new(5, 1000), event())[0];
        assert!(r.exceeded);
        assert_eq!(r.window, None);

        let r = &detect_markers(vec![p], Rational::new(1, 100), event())[0];
        assert!(!r.exceeded, "equal to threshold is not exceeded");
    }

    #[test]
    fn markers_sorted_by_descending_max() {
        let a = profiled(Rational::new(1, 100), date(12, 14), PeakClass::PreEventEarly);
        let mut b = profiled(Rational::new(3, 100), date(12, 18), PeakClass::PreEventLate);
        b.subject = Subject::Set(set(&[1]));
        let reports = detect_markers(vec![a, b], Rational::from_integer(0), event());
        assert_eq!(reports[0].profile.global_max_value, Rational::new(3, 100));
        assert!(reports.windows(2).all(|w| marker_order(&w[0], &w[1]) != Ordering::Greater));
    }

    #[test]
    fn thematic_field_filtering() {
        let c = corpus_from_baskets(&[&["calendar", "lol", "mayan"]]);
        let v = c.vocabulary();
        let field = ThematicField::new(["mayan", "calendar", "nasa"]).unwrap();
        let kept = Subject::parse("mayan calendar", v).unwrap();
        let gone = Subject::parse("mayan lol", v).unwrap();
        let rule = Subject::parse("mayan => lol", v).unwrap();
        let (retained, discarded) = thematic_filter(vec![kept.clone(), gone.clone(), rule.clone()], &field, v).unwrap();
        assert_eq!(retained, vec![kept]);
        assert_eq!(discarded, vec![gone, rule]);
        assert!(matches!(ThematicField::new(Vec::<String>::new()), Err(Error::EmptyField)));
        assert!(matches!(ThematicField::new(["  "]), Err(Error::EmptyField)));
    }

    #[test]
    fn subject_parse_and_label() {
        let c = corpus_from_baskets(&[&["21st", "december", "mayans"]]);
        let v = c.vocabulary();
        let s = Subject::parse("december 21st => mayans", v).unwrap();
        assert_eq!(s.label(v), "21st december => mayans");
        assert_eq!(s.support_set().items(), [0, 1, 2]);
        assert!(Subject::parse("21st => 21st", v).is_err());
    }
}
