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

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use chrono::{NaiveDate, TimeZone, Utc};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use trendminer_core::corpus::{build_corpus, default_stop_list};
use trendminer_core::miner::{count_many, MiningConfig};
use trendminer_core::number::format_significant;
use trendminer_core::synth::{random_corpus, ZipfSpec};
use trendminer_core::temporal::{day_counts, Metric, ProfiledSeries};
use trendminer_core::{
    apriori, brute_force_frequent, bucket_daily, classify_peak, detect_markers, generate_rules, support, Comparison,
    Corpus, DailySeries, FrequentSet, ItemSet, MinSupport, PeakClass, Rational, RawMessage, RuleConfig, Subject,
};

const CHILD: &str = "TRENDMINER_ACCEPTANCE_CHILD";
const ORACLE_CORPORA: usize = 600;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn event() -> NaiveDate {
    NaiveDate::from_ymd_opt(2012, 12, 21).unwrap()
}

fn span_start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2012, 12, 10).unwrap()
}

/// Corpora and mined sets shared by criteria 1 to 3.
struct OracleRun {
    cases: Vec<(Corpus, Vec<FrequentSet>)>,
    elapsed: Duration,
    mismatches: Vec<String>,
}

fn random_config(rng: &mut StdRng, n: u64) -> MiningConfig {
    let min = if rng.random_bool(0.5) {
        MinSupport::Count(rng.random_range(0..=n + 1))
    } else {
        let den = rng.random_range(1..=20u64);
        MinSupport::Fraction(Rational::new(rng.random_range(0..den), den))
    };
    let mut cfg = MiningConfig::new(min);
    if rng.random_bool(0.5) {
        cfg = cfg.with_comparison(Comparison::Inclusive);
    }
    if rng.random_bool(0.2) {
        cfg = cfg.with_max_size(rng.random_range(1..=4));
    }
    cfg
}

fn oracle_run() -> Result<OracleRun, String> {
    let mut rng = StdRng::seed_from_u64(500);
    let start = Instant::now();
    let mut cases = Vec::with_capacity(ORACLE_CORPORA);
    let mut mismatches = Vec::new();
    for case in 0..ORACLE_CORPORA {
        let corpus = random_corpus(&mut rng, 64, 12);
        let cfg = random_config(&mut rng, corpus.total() as u64);
        let mined = apriori(&corpus, &cfg).map_err(err)?;
        let oracle = brute_force_frequent(&corpus, &cfg).map_err(err)?;
        if mined != oracle {
            mismatches.push(format!("corpus {case} ({cfg:?}): {} vs {} sets", mined.len(), oracle.len()));
        }
        cases.push((corpus, mined));
    }
    Ok(OracleRun { cases, elapsed: start.elapsed(), mismatches })
}

fn criterion_1(run: &OracleRun) -> Outcome {
    check(run.mismatches.is_empty(), || format!("{} mismatches, first: {}", run.mismatches.len(), run.mismatches[0]))?;
    check(run.elapsed < Duration::from_secs(30), || format!("took {}", secs(run.elapsed)))?;
    let sets: usize = run.cases.iter().map(|c| c.1.len()).sum();
    Ok(format!("{} corpora, {sets} frequent sets, identical to the oracle in {}", run.cases.len(), secs(run.elapsed)))
}

fn proper_subsets(items: &[u32]) -> impl Iterator<Item = ItemSet> + '_ {
    let full = (1u32 << items.len()) - 1;
    (1..full).map(move |mask| {
        ItemSet::new((0..items.len()).filter(|i| mask >> i & 1 == 1).map(|i| items[i]).collect()).unwrap()
    })
}

fn criterion_2(run: &OracleRun) -> Outcome {
    let mut checked = 0usize;
    let mut violations = 0usize;
    for (corpus, sets) in &run.cases {
        for set in sets {
            let s = set.support();
            for sub in proper_subsets(set.itemset.items()) {
                checked += 1;
                if support(corpus, &sub).map_err(err)? < s {
                    violations += 1;
                }
            }
        }
    }
    check(violations == 0, || format!("{violations} violations among {checked} subset checks"))?;
    Ok(format!("{checked} subset checks, 0 violations"))
}

fn criterion_3(run: &OracleRun) -> Outcome {
    let mut rules = 0usize;
    for (corpus, sets) in &run.cases {
        let generated = generate_rules(corpus, sets, &RuleConfig::default()).map_err(err)?;
        let mut parent_support: BTreeMap<&ItemSet, Rational> = BTreeMap::new();
        for r in &generated {
            rules += 1;
            let f = Rational::from_integer(r.count_parent);
            check(r.conf_fwd() * Rational::from_integer(r.count_antecedent) == f, || format!("conf_fwd identity fails for {r:?}"))?;
            check(r.conf_bwd() * Rational::from_integer(r.count_consequent) == f, || format!("conf_bwd identity fails for {r:?}"))?;
            let counts = count_many(corpus, &[r.antecedent.clone(), r.consequent.clone(), r.parent.clone()]).map_err(err)?;
            check(counts == [r.count_antecedent, r.count_consequent, r.count_parent], || format!("stale counts in {r:?}"))?;
            let prev = *parent_support.entry(&r.parent).or_insert(r.support());
            check(prev == r.support(), || format!("parent {:?} reports two supports", r.parent))?;
        }
    }
    check(rules > 0, || "no rules generated".into())?;
    Ok(format!("{rules} rules, identities exact, shared support per parent"))
}

fn pair_count_messages() -> Vec<RawMessage> {
    const FILLER: [&str; 10] =
        ["apocalypse", "party", "friday", "calendar", "nasa", "doomsday", "prophecy", "survive", "december", "maya"];
    let mut rng = StdRng::seed_from_u64(1221);
    let groups: [(&str, usize); 3] = [
        ("21st december mayans", 700),
        ("21st december", 13_972 - 700),
        ("mayans", 31_390 - 700),
    ];
    let base = Utc.with_ymd_and_hms(2012, 12, 10, 0, 0, 0).unwrap();
    let mut texts: Vec<String> = Vec::with_capacity(1_000_000);
    for (text, n) in groups {
        texts.extend(std::iter::repeat_n(text.to_string(), n));
    }
    while texts.len() < 1_000_000 {
        let words: Vec<&str> = (0..rng.random_range(0..4)).map(|_| FILLER[rng.random_range(0..FILLER.len())]).collect();
        texts.push(words.join(" "));
    }
    texts
        .into_iter()
        .enumerate()
        .map(|(n, text)| {
            let at = base + chrono::Duration::seconds(rng.random_range(0..27 * 86_400));
            RawMessage::new(format!("m{n}"), at, format!("The end of the world {text}"))
        })
        .collect()
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let keywords: BTreeSet<String> = ["end", "world"].map(String::from).into();
    let (corpus, stats) = build_corpus(pair_count_messages(), &keywords, 10, &default_stop_list()).map_err(err)?;
    check(corpus.total() == 1_000_000, || format!("N = {}", corpus.total()))?;
    let frequent = apriori(&corpus, &MiningConfig::new(MinSupport::Count(300))).map_err(err)?;
    let vocab = corpus.vocabulary();
    let x = ItemSet::parse("21st december", vocab).map_err(err)?;
    let y = ItemSet::parse("mayans", vocab).map_err(err)?;
    let config = RuleConfig { antecedent_whitelist: Some(vec![x.clone()]), ..RuleConfig::default() };
    let rules = generate_rules(&corpus, &frequent, &config).map_err(err)?;
    let rule = rules.iter().find(|r| r.consequent == y).ok_or("rule 21st december -> mayans not generated")?;
    let elapsed = start.elapsed();
    let counts = (rule.count_parent, rule.count_antecedent, rule.count_consequent);
    check(counts == (700, 13_972, 31_390), || format!("counts {counts:?}"))?;
    check(rule.support() == Rational::new(7, 10_000), || format!("Supp(F) = {}", rule.support()))?;
    let near = |v: Rational, want: f64| (trendminer_core::number::to_f64(v) - want).abs() <= 1e-4;
    check(near(rule.conf_fwd(), 0.0501), || format!("conf_fwd = {}", rule.conf_fwd()))?;
    check(near(rule.conf_bwd(), 0.0223), || format!("conf_bwd = {}", rule.conf_bwd()))?;
    check(elapsed < Duration::from_secs(60), || format!("took {}", secs(elapsed)))?;
    Ok(format!(
        "N={} (vocabulary {}), Supp={} conf_fwd={} conf_bwd={} in {}",
        stats.keyword_retained,
        stats.vocabulary_size,
        format_significant(rule.support(), 3),
        format_significant(rule.conf_fwd(), 3),
        format_significant(rule.conf_bwd(), 3),
        secs(elapsed)
    ))
}

fn series(numerators: Vec<u64>) -> DailySeries {
    let denominators = vec![1000; numerators.len()];
    DailySeries {
        subject: Subject::Set(ItemSet::new(vec![0]).unwrap()),
        metric: Metric::Support,
        start: span_start(),
        numerators,
        denominators,
    }
}

fn single_peak(day: usize) -> DailySeries {
    let mut v = vec![10; 28];
    v[day] = 80;
    v[day - 1] = 30;
    v[day + 1] = 30;
    series(v)
}

fn criterion_5() -> Outcome {
    let e = (event() - span_start()).num_days() as usize;
    let periodic: Vec<u64> =
        (0..28).map(|i| (100.0 + 50.0 * (2.0 * std::f64::consts::PI * i as f64 / 14.0).cos()).round() as u64).collect();
    let cases = [
        ("event-7", single_peak(e - 7), PeakClass::PreEventEarly, Some(7)),
        ("event-3", single_peak(e - 3), PeakClass::PreEventLate, Some(3)),
        ("event", single_peak(e), PeakClass::OnEvent, Some(0)),
        ("event+2", single_peak(e + 2), PeakClass::PostEvent, Some(-2)),
        ("flat", series(vec![20; 28]), PeakClass::Flat, None),
        ("periodic", series(periodic), PeakClass::Periodic, None),
    ];
    let mut got = Vec::new();
    for (name, s, class, lead) in cases {
        let p = classify_peak(&s, event(), &Default::default()).map_err(err)?;
        check(p.class == class, || format!("{name}: expected {class}, got {}", p.class))?;
        if let Some(lead) = lead {
            check(p.lead_days == lead, || format!("{name}: lead {} instead of {lead}", p.lead_days))?;
        }
        got.push(format!("{name}={}", p.class));
    }
    Ok(format!("6/6: {}", got.join(", ")))
}

fn conserves(corpus: &Corpus, sets: &[ItemSet]) -> Result<(), String> {
    let buckets = bucket_daily(corpus).map_err(err)?;
    let per_day = day_counts(&buckets, corpus, sets).map_err(err)?;
    let global = count_many(corpus, sets).map_err(err)?;
    let n = corpus.total() as u64;
    for (i, set) in sets.iter().enumerate() {
        let total: u64 = per_day[i].iter().sum();
        check(total == global[i], || format!("{set:?}: day sum {total} != {}", global[i]))?;
        let mut mean = Rational::from_integer(0);
        for (day, &c) in buckets.days().iter().zip(&per_day[i]) {
            let size = day.count() as u64;
            if size > 0 {
                mean += Rational::new(size, n) * Rational::new(c, size);
            }
        }
        check(mean == Rational::new(global[i], n), || format!("{set:?}: weighted mean {mean} != global"))?;
    }
    Ok(())
}

fn criterion_6() -> Outcome {
    let mut corpora = Vec::new();
    let mut sets = 0usize;
    for seed in 0..40u64 {
        let spec = ZipfSpec { seed, transactions: 1 + (seed as usize * 37) % 300, vocabulary: 30, ..ZipfSpec::default() };
        corpora.push(spec.corpus());
    }
    corpora.push(ZipfSpec { transactions: 100_000, ..ZipfSpec::default() }.corpus());
    for corpus in &corpora {
        let frequent = apriori(corpus, &MiningConfig::new(MinSupport::Fraction(Rational::new(1, 100)))).map_err(err)?;
        let itemsets: Vec<ItemSet> = frequent.into_iter().map(|f| f.itemset).collect();
        conserves(corpus, &itemsets)?;
        sets += itemsets.len();
    }
    Ok(format!("{} corpora, {sets} itemsets, sums and weighted means exact", corpora.len()))
}

fn write_jsonl(path: &Path, messages: &[RawMessage]) -> std::io::Result<()> {
    let mut out = BufWriter::new(fs::File::create(path)?);
    for m in messages {
        writeln!(out, r#"{{"id":"{}","created_at":"{}","text":"{}"}}"#, m.id, m.timestamp.to_rfc3339(), m.text)?;
    }
    out.flush()
}

fn pipeline(input: &Path, out: &Path, threads: &str, field: &Path) -> Result<(), String> {
    let steps: [&[&str]; 5] = [
        &["ingest", input.to_str().unwrap()],
        &["mine", "--min-support", "0.02f"],
        &["rules", "--min-confidence", "0.2"],
        &["trends"],
        &["markers", "--threshold", "0.1", "--thematic-field", field.to_str().unwrap()],
    ];
    for args in steps {
        let status = Command::new(env!("CARGO_BIN_EXE_trendminer"))
            .env("TRENDMINER_THREADS", threads)
            .args(args)
            .arg("-o")
            .arg(out)
            .output()
            .map_err(err)?;
        check(status.status.success(), || {
            format!("{} failed: {}", args[0], String::from_utf8_lossy(&status.stderr))
        })?;
    }
    Ok(())
}

fn tree(root: &Path) -> std::io::Result<BTreeMap<String, Vec<u8>>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(dir) = stack.pop() {
        for entry in fs::read_dir(&dir)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(root).unwrap().display().to_string();
                out.insert(rel, fs::read(&path)?);
            }
        }
    }
    Ok(out)
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(err)?;
    let input = dir.path().join("messages.jsonl");
    let spec = ZipfSpec { seed: 7, transactions: 100_000, vocabulary: 2_000, ..ZipfSpec::default() };
    write_jsonl(&input, &spec.messages(&["end", "world"], 10)).map_err(err)?;
    let field = dir.path().join("field.txt");
    let terms: Vec<String> = (0..40).map(|i| format!("w{i:04}")).collect();
    fs::write(&field, terms.join("\n")).map_err(err)?;
    let one = dir.path().join("t1");
    let eight = dir.path().join("t8");
    pipeline(&input, &one, "1", &field)?;
    pipeline(&input, &eight, "8", &field)?;
    let a = tree(&one).map_err(err)?;
    let b = tree(&eight).map_err(err)?;
    let names_a: Vec<&String> = a.keys().collect();
    let names_b: Vec<&String> = b.keys().collect();
    check(names_a == names_b, || "file lists differ".into())?;
    let differing: Vec<&String> = a.iter().filter(|(k, v)| b[*k] != **v).map(|(k, _)| k).collect();
    check(differing.is_empty(), || format!("{} files differ, first {}", differing.len(), differing[0]))?;
    let bytes: usize = a.values().map(Vec::len).sum();
    check(a.len() > 10, || format!("only {} files written", a.len()))?;
    Ok(format!("{} files ({bytes} bytes) identical with 1 and 8 threads in {}", a.len(), secs(start.elapsed())))
}

fn peak_rss_kib() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

/// Runs in a fresh process so the peak resident size reflects this workload alone.
fn criterion_8_child() {
    let spec = ZipfSpec { seed: 8, transactions: 1_000_000, vocabulary: 50_000, mean_basket: 8.0, ..ZipfSpec::default() };
    let generated = Instant::now();
    let corpus = spec.corpus();
    let gen = generated.elapsed();
    let start = Instant::now();
    let frequent = apriori(&corpus, &MiningConfig::new(MinSupport::Count(100))).expect("mining");
    let mined = start.elapsed();
    let longest = frequent.iter().map(|f| f.itemset.len()).max().unwrap_or(0);
    println!(
        "{} {} {} {} {}",
        mined.as_secs_f64(),
        gen.as_secs_f64(),
        peak_rss_kib().unwrap_or(u64::MAX),
        frequent.len(),
        longest
    );
}

fn criterion_8() -> Outcome {
    let exe = std::env::current_exe().map_err(err)?;
    let out = Command::new(exe).env(CHILD, "8").output().map_err(err)?;
    check(out.status.success(), || format!("child failed: {}", String::from_utf8_lossy(&out.stderr)))?;
    let text = String::from_utf8_lossy(&out.stdout);
    let fields: Vec<&str> = text.split_whitespace().collect();
    check(fields.len() == 5, || format!("unexpected child output {text:?}"))?;
    let mined: f64 = fields[0].parse().map_err(err)?;
    let generated: f64 = fields[1].parse().map_err(err)?;
    let rss_kib: u64 = fields[2].parse().map_err(err)?;
    let rss_mib = rss_kib as f64 / 1024.0;
    check(mined < 120.0, || format!("mining took {mined:.2}s"))?;
    check(rss_mib < 2048.0, || format!("peak resident {rss_mib:.0} MiB"))?;
    Ok(format!(
        "{} frequent sets (longest {}), mined in {mined:.2}s (+{generated:.2}s generation), peak resident {rss_mib:.0} MiB",
        fields[3], fields[4]
    ))
}

fn criterion_9() -> Outcome {
    let e = (event() - span_start()).num_days() as usize;
    let s = single_peak(e - 4);
    let profile = classify_peak(&s, event(), &Default::default()).map_err(err)?;
    let max = profile.global_max_value;
    let profiled = ProfiledSeries { subject: s.subject.clone(), metric: s.metric, profile };
    let at = detect_markers(vec![profiled.clone()], max, event());
    check(!at[0].exceeded && at[0].window.is_none(), || format!("at threshold: {:?}", at[0]))?;
    let eps = Rational::new(1, 1_000_000_000);
    let below = detect_markers(vec![profiled], max - eps, event());
    let want = (s.date(e - 4), event());
    check(below[0].exceeded, || "not exceeded at threshold - eps".into())?;
    check(below[0].window == Some(want), || format!("window {:?}, expected {want:?}", below[0].window))?;
    Ok(format!(
        "max {max}: exceeded=false at equality, exceeded=true at max-1e-9 with window {} to {} ({} days)",
        want.0,
        want.1,
        below[0].window_days()
    ))
}

fn guarded(f: impl FnOnce() -> Outcome) -> Outcome {
    panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
        Err(format!("panicked: {}", msg.unwrap_or_default()))
    })
}

fn main() {
    if std::env::var(CHILD).as_deref() == Ok("8") {
        criterion_8_child();
        return;
    }
    let names = [
        "oracle equivalence",
        "antimonotonicity",
        "rule identities",
        "pair-count fixture",
        "peak classification",
        "conservation",
        "determinism across thread caps",
        "desk-scale performance",
        "marker boundary",
    ];
    let run = panic::catch_unwind(oracle_run).unwrap_or_else(|_| Err("oracle run panicked".into()));
    let with_run = |f: fn(&OracleRun) -> Outcome| match &run {
        Ok(r) => guarded(|| f(r)),
        Err(e) => Err(format!("oracle corpora unavailable: {e}")),
    };
    let results = [
        with_run(criterion_1),
        with_run(criterion_2),
        with_run(criterion_3),
        guarded(criterion_4),
        guarded(criterion_5),
        guarded(criterion_6),
        guarded(criterion_7),
        guarded(criterion_8),
        guarded(criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, result)) in names.iter().zip(&results).enumerate() {
        match result {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
