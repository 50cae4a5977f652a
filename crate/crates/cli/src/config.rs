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

//! Parsing of thresholds, windows and term-list files.

use std::collections::BTreeSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use trendminer_core::corpus::read_term_list;
use trendminer_core::number::parse_decimal;
use trendminer_core::{MinSupport, Rational};

pub const CACHE_FILE: &str = "corpus.cache.json";
pub const REPORT_FILE: &str = "ingest_report.tsv";
pub const FREQUENT_FILE: &str = "frequent_sets.tsv";
pub const RULES_FILE: &str = "rules.tsv";
pub const PROFILES_FILE: &str = "profiles.tsv";
pub const MARKERS_FILE: &str = "markers.tsv";
pub const DISCARDED_FILE: &str = "discarded.tsv";
pub const SERIES_DIR: &str = "series";

/// `300` is an absolute count, `0.0005f` a fraction of N.
pub fn parse_min_support(text: &str) -> Result<MinSupport> {
    let text = text.trim();
    if let Some(frac) = text.strip_suffix('f') {
        let f = parse_decimal(frac)?;
        if f >= Rational::from_integer(1) {
            bail!("fractional min support {text} must be below 1");
        }
        return Ok(MinSupport::Fraction(f));
    }
    let count = text
        .parse::<u64>()
        .with_context(|| format!("min support {text:?} is neither a count nor a fraction with an `f` suffix"))?;
    Ok(MinSupport::Count(count))
}

pub fn parse_unit_interval(text: &str) -> Result<Rational> {
    let r = parse_decimal(text)?;
    if r > Rational::from_integer(1) {
        bail!("{text} is above 1");
    }
    Ok(r)
}

pub fn parse_threshold(text: &str) -> Result<Rational> {
    Ok(parse_decimal(text)?)
}

/// `6-8` or a single day `7`.
pub fn parse_window(text: &str) -> Result<(i64, i64)> {
    let (lo, hi) = text.split_once('-').unwrap_or((text, text));
    let lo: i64 = lo.trim().parse().with_context(|| format!("bad window {text:?}"))?;
    let hi: i64 = hi.trim().parse().with_context(|| format!("bad window {text:?}"))?;
    if lo > hi {
        bail!("window {text:?} is reversed");
    }
    Ok((lo, hi))
}

pub fn parse_date(text: &str) -> Result<NaiveDate> {
    NaiveDate::parse_from_str(text.trim(), "%Y-%m-%d").with_context(|| format!("event date {text:?} is not YYYY-MM-DD"))
}

pub fn read_terms(path: &Path) -> Result<BTreeSet<String>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_term_list(BufReader::new(file)).with_context(|| format!("cannot read {}", path.display()))
}

pub fn cache_path(out: &Path, cache: Option<&PathBuf>) -> PathBuf {
    cache.cloned().unwrap_or_else(|| out.join(CACHE_FILE))
}

/// Thread cap from `TRENDMINER_THREADS`; unset or 0 means one per core.
pub fn thread_cap(value: Option<&str>) -> Result<usize> {
    match value.map(str::trim) {
        None | Some("") => Ok(0),
        Some(v) => v.parse().with_context(|| format!("TRENDMINER_THREADS={v:?} is not a number")),
    }
}
