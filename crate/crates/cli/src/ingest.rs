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

use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use trendminer_core::cache::write_cache;
use trendminer_core::corpus::{build_corpus, default_stop_list, normalize_terms, read_jsonl, JsonlBatch};

use crate::config::{read_terms, CACHE_FILE, REPORT_FILE};
use crate::output::{write_table, Echo};

pub struct IngestArgs {
    pub keywords: BTreeSet<String>,
    pub stopwords: Option<PathBuf>,
    pub min_df: u64,
    pub out: PathBuf,
    pub inputs: Vec<PathBuf>,
}

pub fn keywords_from(inline: &str, file: Option<&Path>) -> Result<BTreeSet<String>> {
    let mut keywords = normalize_terms(inline.split(','));
    if let Some(path) = file {
        keywords.extend(read_terms(path)?);
    }
    if keywords.is_empty() {
        bail!("no keywords given");
    }
    Ok(keywords)
}

fn read_input(path: &Path) -> Result<JsonlBatch> {
    let file = File::open(path).with_context(|| format!("cannot open input {}", path.display()))?;
    read_jsonl(BufReader::new(file)).with_context(|| format!("cannot read input {}", path.display()))
}

pub fn run(args: IngestArgs) -> Result<()> {
    if args.inputs.is_empty() {
        bail!("no input files");
    }
    // files parse concurrently, then concatenate in the order given
    let batches: Vec<JsonlBatch> = args.inputs.par_iter().map(|p| read_input(p)).collect::<Result<_>>()?;
    let malformed: usize = batches.iter().map(|b| b.malformed).sum();
    let messages: Vec<_> = batches.into_iter().flat_map(|b| b.messages).collect();
    if malformed > 0 {
        eprintln!("trendminer: skipped {malformed} malformed line(s)");
    }
    if messages.is_empty() {
        bail!("no valid messages in input ({malformed} malformed line(s) skipped)");
    }

    let (stop_list, stop_source) = match &args.stopwords {
        Some(path) => (read_terms(path)?, path.display().to_string()),
        None => (default_stop_list(), "bundled".to_string()),
    };
    let (corpus, mut stats) = build_corpus(messages, &args.keywords, args.min_df, &stop_list)?;
    stats.malformed = malformed;
    if stats.keyword_retained == 0 {
        bail!("no message contains all keywords {:?} ({} read)", args.keywords, stats.read);
    }
    if corpus.total() == 0 {
        bail!("every keyword-filtered message became an empty transaction");
    }

    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let cache = args.out.join(CACHE_FILE);
    let file = File::create(&cache).with_context(|| format!("cannot write {}", cache.display()))?;
    write_cache(&corpus, BufWriter::new(file))?;

    let mut echo = Echo::new("ingest");
    echo.set("inputs", args.inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join(" "))
        .set("keywords", join(&args.keywords))
        .set("stopwords", stop_source)
        .set("min_df", args.min_df);
    let rows: Vec<Vec<String>> = [
        ("read", stats.read),
        ("malformed_skipped", stats.malformed),
        ("keyword_retained", stats.keyword_retained),
        ("empty_dropped", stats.empty_dropped),
        ("transactions", corpus.total()),
        ("vocabulary_size", stats.vocabulary_size),
    ]
    .iter()
    .map(|(k, v)| vec![k.to_string(), v.to_string()])
    .collect();
    for row in &rows {
        eprintln!("{}: {}", row[0], row[1]);
    }
    write_table(&args.out.join(REPORT_FILE), &echo, '\t', &["metric", "value"], &rows)
}

pub fn join(terms: &BTreeSet<String>) -> String {
    terms.iter().cloned().collect::<Vec<_>>().join(" ")
}
