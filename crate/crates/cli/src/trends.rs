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

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chrono::NaiveDate;
use trendminer_core::temporal::{
    bucket_daily, classify_peak, compute_series, detect_markers, thematic_filter, ClassifyConfig, DailySeries,
    Denominator, MarkerReport, ProfiledSeries, Subject, ThematicField,
};
use trendminer_core::{Corpus, Error as CoreError, ItemSet, Rational, Vocabulary};

use crate::config::{read_terms, DISCARDED_FILE, FREQUENT_FILE, MARKERS_FILE, PROFILES_FILE, RULES_FILE, SERIES_DIR};
use crate::mine::{corpus_echo, load_corpus};
use crate::output::{read_rows, render, write_table, Echo};

const PROFILE_HEADER: [&str; 12] = [
    "subject",
    "metric",
    "class",
    "max_date",
    "max_value",
    "lead_days",
    "exceeded",
    "window_start",
    "window_end",
    "period",
    "secondary_peaks",
    "note",
];

pub struct TrendArgs {
    pub cache: PathBuf,
    pub out: PathBuf,
    pub event_date: NaiveDate,
    pub subjects: Option<PathBuf>,
    pub global_denominator: bool,
    pub classify: ClassifyConfig,
    pub exact: bool,
}

impl TrendArgs {
    fn echo(&self, command: &'static str, corpus: &Corpus, subjects: usize) -> Echo {
        let mut echo = corpus_echo(command, corpus);
        let p = &self.classify.periodicity;
        echo.set("event_date", self.event_date)
            .set("denominator", if self.global_denominator { "global" } else { "per_day" })
            .set("early_window", format!("{}-{}", self.classify.early.0, self.classify.early.1))
            .set("late_window", format!("{}-{}", self.classify.late.0, self.classify.late.1))
            .set("min_autocorrelation", p.min_autocorrelation)
            .set("peak_tolerance", render(p.peak_tolerance, true))
            .set(
                "subjects",
                self.subjects.as_ref().map_or(format!("{FREQUENT_FILE} + {RULES_FILE}"), |p| p.display().to_string()),
            )
            .set("subject_count", subjects);
        echo
    }
}

fn parse_subject_file(path: &Path, vocab: &Vocabulary) -> Result<Vec<Subject>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read subjects {}", path.display()))?;
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|l| Subject::parse(l, vocab).with_context(|| format!("bad subject {l:?} in {}", path.display())))
        .collect()
}

/// Subjects from `--subjects`, or else every mined set and rule in the output directory.
fn load_subjects(args: &TrendArgs, corpus: &Corpus) -> Result<Vec<Subject>> {
    let vocab = corpus.vocabulary();
    let mut subjects = Vec::new();
    if let Some(path) = &args.subjects {
        subjects = parse_subject_file(path, vocab)?;
    } else {
        let sets = args.out.join(FREQUENT_FILE);
        let rules = args.out.join(RULES_FILE);
        if !sets.exists() && !rules.exists() {
            bail!("no --subjects file and no {FREQUENT_FILE} or {RULES_FILE} in {}", args.out.display());
        }
        if sets.exists() {
            let text = fs::read_to_string(&sets)?;
            for row in read_rows(&text) {
                subjects.push(Subject::Set(ItemSet::parse(row[0], vocab)?));
            }
        }
        if rules.exists() {
            let text = fs::read_to_string(&rules)?;
            for row in read_rows(&text) {
                if row.len() < 2 {
                    bail!("malformed row in {}", rules.display());
                }
                subjects.push(Subject::rule(ItemSet::parse(row[0], vocab)?, ItemSet::parse(row[1], vocab)?)?);
            }
        }
    }
    let mut seen = HashSet::new();
    subjects.retain(|s| seen.insert(s.clone()));
    if subjects.is_empty() {
        bail!("no subjects to track");
    }
    Ok(subjects)
}

struct Analysis {
    corpus: Corpus,
    subjects: Vec<Subject>,
    series: Vec<DailySeries>,
    profiles: Vec<ProfiledSeries>,
}

fn analyse(args: &TrendArgs) -> Result<Analysis> {
    args.classify.validate()?;
    let corpus = load_corpus(&args.cache)?;
    let subjects = load_subjects(args, &corpus)?;
    let buckets = bucket_daily(&corpus)?;
    if !buckets.contains(args.event_date) {
        eprintln!(
            "trendminer: warning: event date {} lies outside the corpus span {}..{}",
            args.event_date,
            buckets.start(),
            buckets.end()
        );
    }
    let denominator = if args.global_denominator { Denominator::Global } else { Denominator::PerDay };
    let series = compute_series(&buckets, &corpus, &subjects, denominator)?;
    let mut profiles = Vec::with_capacity(series.len());
    for s in &series {
        match classify_peak(s, args.event_date, &args.classify) {
            Ok(profile) => profiles.push(ProfiledSeries { subject: s.subject.clone(), metric: s.metric, profile }),
            Err(CoreError::AllUndefined) => eprintln!(
                "trendminer: warning: {} {} is undefined on every day; not classified",
                s.subject.label(corpus.vocabulary()),
                s.metric
            ),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(Analysis { corpus, subjects, series, profiles })
}

fn slug(label: &str) -> String {
    let s: String = label
        .replace("=>", "to")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join("-")
        .chars()
        .filter(|c| c.is_alphanumeric() || *c == '-')
        .collect();
    s.chars().take(80).collect()
}

fn profile_row(vocab: &Vocabulary, p: &ProfiledSeries, marker: Option<&MarkerReport>, exact: bool) -> Vec<String> {
    let profile = &p.profile;
    let peaks = profile
        .secondary_peaks
        .iter()
        .map(|(d, v)| format!("{d}:{}", render(*v, exact)))
        .collect::<Vec<_>>()
        .join(";");
    let (exceeded, start, end) = match marker {
        Some(m) => (
            m.exceeded.to_string(),
            m.window.map_or(String::new(), |w| w.0.to_string()),
            m.window.map_or(String::new(), |w| w.1.to_string()),
        ),
        None => Default::default(),
    };
    vec![
        p.subject.label(vocab),
        p.metric.to_string(),
        profile.class.to_string(),
        profile.global_max_date.to_string(),
        render(profile.global_max_value, exact),
        profile.lead_days.to_string(),
        exceeded,
        start,
        end,
        profile.period.map_or(String::new(), |p| p.to_string()),
        peaks,
        if profile.beyond_window { "beyond_window".into() } else { String::new() },
    ]
}

pub fn trends(args: TrendArgs) -> Result<()> {
    let analysis = analyse(&args)?;
    let vocab = analysis.corpus.vocabulary();
    let echo = args.echo("trends", &analysis.corpus, analysis.subjects.len());

    let series_dir = args.out.join(SERIES_DIR);
    if series_dir.exists() {
        fs::remove_dir_all(&series_dir).with_context(|| format!("cannot clear {}", series_dir.display()))?;
    }
    let index: std::collections::HashMap<&Subject, usize> =
        analysis.subjects.iter().enumerate().map(|(i, s)| (s, i)).collect();
    for s in &analysis.series {
        let label = s.subject.label(vocab);
        let name = format!("{:04}_{}.{}.csv", index[&s.subject], slug(&label), s.metric);
        let mut file_echo = echo.clone();
        file_echo.set("subject", &label).set("metric", s.metric);
        let rows: Vec<Vec<String>> = (0..s.len())
            .map(|d| match s.value(d) {
                Some(v) => vec![s.date(d).to_string(), render(v, args.exact), "true".into()],
                None => vec![s.date(d).to_string(), String::new(), "false".into()],
            })
            .collect();
        write_table(&series_dir.join(name), &file_echo, ',', &["date", "value", "defined"], &rows)?;
    }

    let rows: Vec<Vec<String>> = analysis.profiles.iter().map(|p| profile_row(vocab, p, None, args.exact)).collect();
    eprintln!("series: {}, profiles: {}", analysis.series.len(), analysis.profiles.len());
    write_table(&args.out.join(PROFILES_FILE), &echo, '\t', &PROFILE_HEADER, &rows)
}

pub struct MarkerArgs {
    pub trend: TrendArgs,
    pub threshold: Rational,
    pub thematic_field: Option<PathBuf>,
}

pub fn markers(args: MarkerArgs) -> Result<()> {
    let analysis = analyse(&args.trend)?;
    let vocab = analysis.corpus.vocabulary();
    let mut echo = args.trend.echo("markers", &analysis.corpus, analysis.subjects.len());
    echo.set("threshold", render(args.threshold, true));

    let (retained, discarded) = match &args.thematic_field {
        Some(path) => {
            let field = ThematicField::new(read_terms(path)?).with_context(|| format!("thematic field {}", path.display()))?;
            echo.set("thematic_field", path.display()).set("field_terms", field.terms().len());
            thematic_filter(analysis.profiles, &field, vocab)?
        }
        None => {
            echo.set("thematic_field", "none");
            (analysis.profiles, Vec::new())
        }
    };

    let reports = detect_markers(retained, args.threshold, args.trend.event_date);
    let to_row = |m: &MarkerReport| {
        let p = ProfiledSeries { subject: m.subject.clone(), metric: m.metric, profile: m.profile.clone() };
        profile_row(vocab, &p, Some(m), args.trend.exact)
    };
    let rows: Vec<Vec<String>> = reports.iter().map(to_row).collect();
    let exceeded = reports.iter().filter(|m| m.exceeded).count();
    eprintln!("markers: {} reports, {exceeded} above threshold, {} discarded", reports.len(), discarded.len());
    write_table(&args.trend.out.join(MARKERS_FILE), &echo, '\t', &PROFILE_HEADER, &rows)?;

    if args.thematic_field.is_some() {
        let discarded = detect_markers(discarded, args.threshold, args.trend.event_date);
        let rows: Vec<Vec<String>> = discarded.iter().map(to_row).collect();
        write_table(&args.trend.out.join(DISCARDED_FILE), &echo, '\t', &PROFILE_HEADER, &rows)?;
    }
    Ok(())
}
