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

//! `trendminer`: ingest message archives, mine frequent term sets and
//! association rules, and track their daily dynamics around an event date.

mod config;
mod ingest;
mod mine;
mod output;
mod trends;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};
use trendminer_core::corpus::DEFAULT_MIN_DF;
use trendminer_core::rules::Direction;
use trendminer_core::temporal::{ClassifyConfig, PeriodicityConfig};

use crate::config::{
    cache_path, parse_date, parse_min_support, parse_threshold, parse_unit_interval, parse_window, thread_cap,
};

#[derive(Parser)]
#[command(name = "trendminer", version, about = "Frequent term sets, association rules and their daily dynamics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read JSON-Lines archives and write the corpus cache.
    Ingest {
        /// Comma-separated keywords every retained message must contain.
        #[arg(long, default_value = "end,world")]
        keywords: String,
        /// Extra keywords, one per line.
        #[arg(long)]
        keywords_file: Option<PathBuf>,
        /// Stop-word file, one term per line; defaults to the bundled English list.
        #[arg(long)]
        stopwords: Option<PathBuf>,
        /// Minimum document frequency of a retained term.
        #[arg(long, default_value_t = DEFAULT_MIN_DF)]
        min_df: u64,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
    },
    /// Mine frequent term sets with Apriori.
    Mine {
        /// Absolute count (`300`) or fraction of N with an `f` suffix (`0.0005f`).
        #[arg(long, default_value = "300")]
        min_support: String,
        /// Keep sets whose support equals the minimum.
        #[arg(long)]
        inclusive: bool,
        #[arg(long)]
        max_size: Option<usize>,
        /// Render supports as count/N.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Generate association rules from the mined sets.
    Rules {
        #[arg(long, default_value = "0.0")]
        min_confidence: String,
        /// Only this antecedent (terms separated by spaces); repeatable.
        #[arg(long = "antecedent")]
        antecedents: Vec<String>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Fwd)]
        direction: DirectionArg,
        /// Keep rules over sets containing the corpus keywords.
        #[arg(long)]
        include_keywords: bool,
        /// Frequent-set table to read; defaults to the one in the output directory.
        #[arg(long)]
        frequent: Option<PathBuf>,
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        io: Io,
    },
    /// Daily series and peak-timing profiles.
    Trends {
        #[command(flatten)]
        trend: TrendOpts,
    },
    /// Threshold the profiles into predictive markers.
    Markers {
        #[arg(long)]
        threshold: String,
        /// Terms of the analysed topic; subjects using other terms are discarded.
        #[arg(long)]
        thematic_field: Option<PathBuf>,
        #[command(flatten)]
        trend: TrendOpts,
    },
}

#[derive(Args)]
struct Io {
    /// Output directory; also where the corpus cache is looked up.
    #[arg(short, long)]
    out: PathBuf,
    /// Corpus cache, if not in the output directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct TrendOpts {
    #[arg(long, default_value = "2012-12-21")]
    event_date: String,
    /// One subject per line: `a b` for a set, `a b => c` for a rule.
    #[arg(long)]
    subjects: Option<PathBuf>,
    /// Divide daily counts by the corpus size instead of the day's size.
    #[arg(long)]
    global_denominator: bool,
    #[arg(long, default_value = "6-8")]
    early_window: String,
    #[arg(long, default_value = "1-5")]
    late_window: String,
    #[arg(long, default_value_t = 0.5)]
    min_autocorr: f64,
    #[arg(long, default_value = "0.25")]
    peak_tolerance: String,
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    io: Io,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Fwd,
    Bwd,
    Both,
}

impl From<DirectionArg> for Direction {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Fwd => Direction::Fwd,
            DirectionArg::Bwd => Direction::Bwd,
            DirectionArg::Both => Direction::Both,
        }
    }
}

impl TrendOpts {
    fn into_args(self) -> Result<trends::TrendArgs> {
        let classify = ClassifyConfig {
            early: parse_window(&self.early_window)?,
            late: parse_window(&self.late_window)?,
            periodicity: PeriodicityConfig {
                min_autocorrelation: self.min_autocorr,
                peak_tolerance: parse_unit_interval(&self.peak_tolerance)?,
                ..PeriodicityConfig::default()
            },
        };
        Ok(trends::TrendArgs {
            cache: cache_path(&self.io.out, self.io.cache.as_ref()),
            out: self.io.out,
            event_date: parse_date(&self.event_date)?,
            subjects: self.subjects,
            global_denominator: self.global_denominator,
            classify,
            exact: self.exact,
        })
    }
}

fn run(cli: Cli) -> Result<()> {
    let threads = thread_cap(std::env::var("TRENDMINER_THREADS").ok().as_deref())?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;

    match cli.command {
        Command::Ingest { keywords, keywords_file, stopwords, min_df, out, inputs } => ingest::run(ingest::IngestArgs {
            keywords: ingest::keywords_from(&keywords, keywords_file.as_deref())?,
            stopwords,
            min_df,
            out,
            inputs,
        }),
        Command::Mine { min_support, inclusive, max_size, exact, io } => mine::mine(mine::MineArgs {
            cache: cache_path(&io.out, io.cache.as_ref()),
            out: io.out,
            min_support: parse_min_support(&min_support)?,
            inclusive,
            max_size,
            exact,
        }),
        Command::Rules { min_confidence, antecedents, direction, include_keywords, frequent, exact, io } => {
            mine::rules(mine::RulesArgs {
                cache: cache_path(&io.out, io.cache.as_ref()),
                out: io.out,
                frequent,
                min_confidence: parse_unit_interval(&min_confidence)?,
                antecedents,
                direction: direction.into(),
                include_keywords,
                exact,
            })
        }
        Command::Trends { trend } => trends::trends(trend.into_args()?),
        Command::Markers { threshold, thematic_field, trend } => trends::markers(trends::MarkerArgs {
            trend: trend.into_args()?,
            threshold: parse_threshold(&threshold)?,
            thematic_field,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("trendminer: error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
