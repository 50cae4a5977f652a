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

use std::fs::{self, File};
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use trendminer_core::cache::read_cache;
use trendminer_core::miner::count_many;
use trendminer_core::rules::{generate_rules, Direction, RuleConfig};
use trendminer_core::{apriori, Comparison, Corpus, FrequentSet, ItemSet, MinSupport, MiningConfig, Rational};

use crate::config::{FREQUENT_FILE, RULES_FILE};
use crate::ingest::join;
use crate::output::{read_rows, render, render_count, write_table, Echo};

pub fn load_corpus(path: &Path) -> Result<Corpus> {
    let file = File::open(path).with_context(|| format!("cannot open corpus cache {} (run `trendminer ingest` first)", path.display()))?;
    read_cache(BufReader::new(file)).with_context(|| format!("cannot load corpus cache {}", path.display()))
}

/// Echo lines describing the corpus every later stage works on.
pub fn corpus_echo(command: &'static str, corpus: &Corpus) -> Echo {
    let mut echo = Echo::new(command);
    echo.set("keywords", join(corpus.keywords()))
        .set("min_df", corpus.vocabulary().min_df())
        .set("transactions", corpus.total());
    echo
}

pub struct MineArgs {
    pub cache: PathBuf,
    pub out: PathBuf,
    pub min_support: MinSupport,
    pub inclusive: bool,
    pub max_size: Option<usize>,
    pub exact: bool,
}

pub fn mine(args: MineArgs) -> Result<()> {
    let corpus = load_corpus(&args.cache)?;
    let comparison = if args.inclusive { Comparison::Inclusive } else { Comparison::Strict };
    let mut config = MiningConfig::new(args.min_support).with_comparison(comparison);
    config.max_size = args.max_size;
    let frequent = apriori(&corpus, &config)?;

    let vocab = corpus.vocabulary();
    let mut echo = corpus_echo("mine", &corpus);
    echo.set("min_support", args.min_support)
        .set("comparison", if args.inclusive { "inclusive" } else { "strict" })
        .set("max_size", args.max_size.map_or("none".to_string(), |m| m.to_string()));
    let rows: Vec<Vec<String>> = frequent
        .iter()
        .map(|f| {
            vec![
                vocab.render(f.itemset.items()),
                f.itemset.len().to_string(),
                f.count.to_string(),
                render_count(f.count, f.total, args.exact),
            ]
        })
        .collect();
    eprintln!("frequent sets: {}", frequent.len());
    write_table(&args.out.join(FREQUENT_FILE), &echo, '\t', &["items", "size", "count", "support"], &rows)
}

/// Reads `frequent_sets.tsv` back and recounts every set against the corpus.
pub fn load_frequent(path: &Path, corpus: &Corpus) -> Result<Vec<FrequentSet>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {} (run `trendminer mine` first)", path.display()))?;
    let sets: Vec<ItemSet> = read_rows(&text)
        .into_iter()
        .map(|row| ItemSet::parse(row[0], corpus.vocabulary()))
        .collect::<trendminer_core::Result<_>>()
        .with_context(|| format!("bad frequent set in {}", path.display()))?;
    let counts = count_many(corpus, &sets)?;
    let total = corpus.total() as u64;
    Ok(sets.into_iter().zip(counts).map(|(itemset, count)| FrequentSet { itemset, count, total }).collect())
}

pub struct RulesArgs {
    pub cache: PathBuf,
    pub out: PathBuf,
    pub frequent: Option<PathBuf>,
    pub min_confidence: Rational,
    pub antecedents: Vec<String>,
    pub direction: Direction,
    pub include_keywords: bool,
    pub exact: bool,
}

pub fn rules(args: RulesArgs) -> Result<()> {
    let corpus = load_corpus(&args.cache)?;
    let frequent_path = args.frequent.clone().unwrap_or_else(|| args.out.join(FREQUENT_FILE));
    let frequent = load_frequent(&frequent_path, &corpus)?;
    if frequent.iter().any(|f| f.count == 0) {
        bail!("{} lists a set absent from the corpus", frequent_path.display());
    }
    let vocab = corpus.vocabulary();
    let whitelist = if args.antecedents.is_empty() {
        None
    } else {
        Some(
            args.antecedents
                .iter()
                .map(|a| ItemSet::parse(a, vocab))
                .collect::<trendminer_core::Result<Vec<_>>>()?,
        )
    };
    let config = RuleConfig {
        min_confidence: args.min_confidence,
        antecedent_whitelist: whitelist,
        direction: args.direction,
        include_keywords: args.include_keywords,
    };
    let rules = generate_rules(&corpus, &frequent, &config)?;

    let mut echo = corpus_echo("rules", &corpus);
    echo.set("frequent_sets", frequent.len())
        .set("min_confidence", render(args.min_confidence, true))
        .set("direction", format!("{:?}", args.direction).to_lowercase())
        .set("include_keywords", args.include_keywords)
        .set("antecedents", if args.antecedents.is_empty() { "all".to_string() } else { args.antecedents.join(" | ") });
    let rows: Vec<Vec<String>> = rules
        .iter()
        .map(|r| {
            vec![
                vocab.render(r.antecedent.items()),
                vocab.render(r.consequent.items()),
                render_count(r.count_parent, r.total, args.exact),
                render(r.conf_fwd(), args.exact),
                render(r.conf_bwd(), args.exact),
                r.count_parent.to_string(),
                r.count_antecedent.to_string(),
                r.count_consequent.to_string(),
            ]
        })
        .collect();
    eprintln!("rules: {}", rules.len());
    write_table(
        &args.out.join(RULES_FILE),
        &echo,
        '\t',
        &["antecedent", "consequent", "support", "conf_fwd", "conf_bwd", "count_F", "count_X", "count_Y"],
        &rows,
    )
}
