//! Acceptance gate: the worked ten-customer example reproduced table by
//! table, oracle equivalence over seeded fuzz instances, and the property
//! suite. Each check prints one PASS/FAIL line; run with `--nocapture` to
//! see them.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use tisminer_core::io::{dump_intermediate, render_report, ReportFormat};
use tisminer_core::miner::{mine_with_trace, support_interval, support_plain, MiningConfig};
use tisminer_core::oracle::{exhaustive_mine, naive_support, OracleConfig, MAX_PATTERN_LENGTH};
use tisminer_core::preprocess::{rereverse_pattern, reverse_sequence, TargetSpec};
use tisminer_core::synth::fuzz_instance;
use tisminer_core::{
    fixtures, mine, Error, IntervalPattern, Itemset, MiningTrace, Orientation, Scored,
};

struct Gate {
    criterion: u32,
    failures: Vec<String>,
}

impl Gate {
    fn new(criterion: u32) -> Self {
        Gate {
            criterion,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) {
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {}: {name} ({detail})", self.criterion);
        if !ok {
            self.failures.push(format!("{name}: {detail}"));
        }
    }

    fn finish(self) {
        assert!(
            self.failures.is_empty(),
            "criterion {} failed:\n  {}",
            self.criterion,
            self.failures.join("\n  ")
        );
    }
}

fn s7_config() -> MiningConfig {
    MiningConfig::new(
        "0.3".parse().unwrap(),
        TargetSpec::new(Itemset::single("s7")),
    )
}

fn timed_trace() -> (MiningTrace, Duration) {
    let start = Instant::now();
    let trace = mine_with_trace(&fixtures::sample(), &s7_config()).unwrap();
    (trace, start.elapsed())
}

fn rev(text: &str) -> IntervalPattern {
    IntervalPattern::parse(text, Orientation::Reversed).unwrap()
}

fn plain_key(p: &IntervalPattern) -> String {
    p.elements()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn texts(rows: &[Scored]) -> Vec<String> {
    rows.iter().map(|(p, _)| p.to_string()).collect()
}

#[test]
fn criterion_1_cs1_supports() {
    let mut gate = Gate::new(1);
    let (trace, elapsed) = timed_trace();
    let level1 = &trace.plain[0];
    let got: Vec<(String, String)> = level1
        .candidates
        .iter()
        .map(|(p, s)| (plain_key(p), s.render()))
        .collect();
    let expected: Vec<(String, String)> = [
        ("s1", "0.67"),
        ("s2", "0.5"),
        ("s3", "0.5"),
        ("s5", "0.17"),
        ("s6", "0.83"),
        ("s7", "1"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    gate.check(
        "CS1 supports render as expected",
        got == expected,
        format!("{got:?}"),
    );
    let fs1: Vec<String> = level1.frequent.iter().map(|(p, _)| plain_key(p)).collect();
    gate.check(
        "FS1 = {s1,s2,s3,s6,s7}",
        fs1 == ["s1", "s2", "s3", "s6", "s7"],
        format!("{fs1:?}"),
    );
    gate.check(
        "runtime < 50 ms",
        elapsed < Duration::from_millis(50),
        format!("{elapsed:?}"),
    );
    gate.finish();
}

#[test]
fn criterion_2_cs2_and_fs2() {
    let mut gate = Gate::new(2);
    let (trace, _) = timed_trace();
    let level2 = &trace.plain[1];
    gate.check(
        "|CS2| = 20",
        level2.candidates.len() == 20,
        level2.candidates.len(),
    );

    // Expected CS2 counts in sixths; <s2,s7> uses the derived 0 in place of the duplicated row
    let cs2_expected: BTreeMap<&str, u64> = [
        ("s1,s2", 2),
        ("s1,s3", 0),
        ("s1,s6", 0),
        ("s1,s7", 0),
        ("s2,s1", 1),
        ("s2,s3", 0),
        ("s2,s6", 0),
        ("s2,s7", 0),
        ("s3,s1", 3),
        ("s3,s2", 2),
        ("s3,s6", 0),
        ("s3,s7", 0),
        ("s6,s1", 4),
        ("s6,s2", 3),
        ("s6,s3", 3),
        ("s6,s7", 0),
        ("s7,s1", 4),
        ("s7,s2", 3),
        ("s7,s3", 3),
        ("s7,s6", 5),
    ]
    .into_iter()
    .collect();
    for (p, s) in &level2.candidates {
        let key = plain_key(p);
        let want = cs2_expected.get(key.as_str()).copied();
        gate.check(
            &format!("supp <{key}>"),
            want == Some(s.count()) && s.denominator() == 6,
            format!("got {}/{}, expected {want:?}/6", s.count(), s.denominator()),
        );
    }
    let fs2: Vec<String> = level2.frequent.iter().map(|(p, _)| plain_key(p)).collect();
    let expected = [
        "s1,s2", "s3,s1", "s3,s2", "s6,s1", "s6,s2", "s6,s3", "s7,s1", "s7,s2", "s7,s3", "s7,s6",
    ];
    gate.check(
        "FS2 has the 10 listed members",
        fs2 == expected,
        format!("{fs2:?}"),
    );
    gate.finish();
}

#[test]
fn criterion_3_gaps_and_clusters() {
    let mut gate = Gate::new(3);
    let (trace, _) = timed_trace();
    // (pair, gaps, clusters)
    type Row<'a> = (&'a str, &'a [i64], &'a [&'a [i64]]);
    let rows: &[Row] = &[
        ("s1,s2", &[1, 5], &[&[1, 5]]),
        ("s3,s1", &[3, 4, 5], &[&[3, 4, 5]]),
        ("s3,s2", &[4, 10], &[&[4, 10]]),
        ("s6,s1", &[8, 8, 10, 13], &[&[8, 8]]),
        ("s6,s2", &[2, 14, 15], &[&[14, 15]]),
        ("s6,s3", &[4, 5, 10], &[&[4, 5]]),
        ("s7,s1", &[12, 13, 15, 15], &[&[12, 13], &[15, 15]]),
        ("s7,s2", &[7, 16, 20], &[&[16, 20]]),
        ("s7,s3", &[8, 10, 12], &[&[8, 10, 12]]),
        ("s7,s6", &[2, 4, 5, 5, 5], &[&[5, 5, 5]]),
    ];
    gate.check(
        "10 gap lists",
        trace.intervals.len() == rows.len(),
        trace.intervals.len(),
    );
    for ((key, gaps, clusters), pi) in rows.iter().zip(&trace.intervals) {
        let pair = format!("{},{}", pi.gaps.pair.0, pi.gaps.pair.1);
        gate.check(
            &format!("gaps <{key}>"),
            pair == *key && pi.gaps.values() == *gaps,
            format!("{pair}: {:?}", pi.gaps.values()),
        );
        let got: Vec<Vec<i64>> = pi.clusters.iter().map(|c| c.values()).collect();
        let want: Vec<Vec<i64>> = clusters.iter().map(|c| c.to_vec()).collect();
        gate.check(
            &format!("clusters <{key}>"),
            got == want,
            format!("{got:?}"),
        );
    }
    gate.finish();
}

#[test]
fn criterion_4_ctis3_and_ftis() {
    let mut gate = Gate::new(4);
    let (trace, _) = timed_trace();

    let ftis2 = texts(&trace.ftis2);
    gate.check("|FTIS2| = 11", ftis2.len() == 11, format!("{ftis2:?}"));

    let ctis3 = &trace.timed[0];
    gate.check(
        "|CTIS3| = 11",
        ctis3.candidates.len() == 11,
        ctis3.candidates.len(),
    );
    let ctis3_expected: &[(&str, u64)] = &[
        ("<(s3), [3,5], (s1), [1,5], (s2)>", 2),
        ("<(s6), [8,8], (s1), [1,5], (s2)>", 1),
        ("<(s6), [4,5], (s3), [3,5], (s1)>", 2),
        ("<(s6), [4,5], (s3), [4,10], (s2)>", 1),
        ("<(s7), [12,13], (s1), [1,5], (s2)>", 0),
        ("<(s7), [15,15], (s1), [1,5], (s2)>", 2),
        ("<(s7), [8,12], (s3), [3,5], (s1)>", 3),
        ("<(s7), [8,12], (s3), [4,10], (s2)>", 2),
        ("<(s7), [5,5], (s6), [8,8], (s1)>", 1),
        ("<(s7), [5,5], (s6), [14,15], (s2)>", 1),
        ("<(s7), [5,5], (s6), [4,5], (s3)>", 1),
    ];
    let by_text: BTreeMap<String, (u64, u64)> = ctis3
        .candidates
        .iter()
        .map(|(p, s)| (p.to_string(), (s.count(), s.denominator())))
        .collect();
    for (text, count) in ctis3_expected {
        let got = by_text.get(*text).copied();
        gate.check(
            &format!("CTIS3 {text}"),
            got == Some((*count, 6)),
            format!("got {got:?}, expected {count}/6"),
        );
    }

    let ftis3 = texts(&ctis3.frequent);
    let mut want3 = vec![
        "<(s3), [3,5], (s1), [1,5], (s2)>",
        "<(s6), [4,5], (s3), [3,5], (s1)>",
        "<(s7), [15,15], (s1), [1,5], (s2)>",
        "<(s7), [8,12], (s3), [3,5], (s1)>",
        "<(s7), [8,12], (s3), [4,10], (s2)>",
    ];
    want3.sort();
    let mut got3 = ftis3.clone();
    got3.sort();
    gate.check(
        "FTIS3 has the 5 listed members",
        got3 == want3,
        format!("{ftis3:?}"),
    );

    let level4 = trace.timed.get(1);
    let want4 = [
        "<(s6), [4,5], (s3), [3,5], (s1), [1,5], (s2)>",
        "<(s7), [8,12], (s3), [3,5], (s1), [1,5], (s2)>",
    ];
    let ctis4: Vec<(String, u64, u64)> = level4
        .map(|l| {
            l.candidates
                .iter()
                .map(|(p, s)| (p.to_string(), s.count(), s.denominator()))
                .collect()
        })
        .unwrap_or_default();
    gate.check(
        "CTIS4 = 2 candidates at 2/6",
        ctis4.len() == 2
            && ctis4.iter().map(|c| c.0.as_str()).eq(want4)
            && ctis4.iter().all(|c| (c.1, c.2) == (2, 6)),
        format!("{ctis4:?}"),
    );
    let ftis4 = level4.map(|l| texts(&l.frequent)).unwrap_or_default();
    gate.check("FTIS4 keeps both", ftis4 == want4, format!("{ftis4:?}"));
    gate.check("no CTIS5", trace.timed.len() == 2, trace.timed.len());
    gate.finish();
}

#[test]
fn criterion_5_end_to_end() {
    let mut gate = Gate::new(5);
    let start = Instant::now();
    let out = mine(&fixtures::sample(), &s7_config()).unwrap();
    let elapsed = start.elapsed();
    let got: BTreeMap<String, (u64, u64)> = out
        .iter()
        .map(|(p, s)| (p.to_string(), (s.count(), s.denominator())))
        .collect();
    let expected: BTreeMap<String, (u64, u64)> = [
        ("<(s1), [12,13], (s7)>", 2),
        ("<(s1), [15,15], (s7)>", 2),
        ("<(s2), [16,20], (s7)>", 2),
        ("<(s3), [8,12], (s7)>", 3),
        ("<(s6), [5,5], (s7)>", 3),
        ("<(s2), [1,5], (s1), [15,15], (s7)>", 2),
        ("<(s1), [3,5], (s3), [8,12], (s7)>", 3),
        ("<(s2), [4,10], (s3), [8,12], (s7)>", 2),
        ("<(s2), [1,5], (s1), [3,5], (s3), [8,12], (s7)>", 2),
    ]
    .into_iter()
    .map(|(t, c)| (t.to_string(), (c, 6)))
    .collect();
    gate.check(
        "exactly the 9 final patterns",
        got == expected,
        format!("{got:?}"),
    );
    let s7 = Itemset::single("s7");
    gate.check(
        "target last, original orientation",
        out.iter().all(|(p, _)| {
            p.elements().last() == Some(&s7) && p.orientation() == Orientation::Original
        }),
        out.len(),
    );
    gate.check(
        "runtime < 200 ms",
        elapsed < Duration::from_millis(200),
        format!("{elapsed:?}"),
    );
    gate.finish();
}

fn same_result(a: &Result<Vec<Scored>, Error>, b: &Result<Vec<Scored>, Error>) -> bool {
    match (a, b) {
        (Ok(x), Ok(y)) => x == y,
        (Err(Error::EmptyResult(_)), Err(Error::EmptyResult(_))) => true,
        _ => false,
    }
}

/// Every support the miner computed, re-counted by brute force.
fn support_mismatches(trace: &MiningTrace) -> Vec<String> {
    let d = &trace.working;
    let mut bad = Vec::new();
    let mut check = |p: &IntervalPattern, count: u64| {
        let naive = naive_support(d, p).unwrap();
        if naive.count() != count {
            bad.push(format!("{p}: miner {count}, oracle {}", naive.count()));
        }
    };
    for level in trace.plain.iter().chain(&trace.timed) {
        for (p, s) in &level.candidates {
            check(p, s.count());
        }
    }
    for (p, s) in &trace.ftis2 {
        check(p, s.count());
    }
    bad
}

#[test]
fn criterion_6_oracle_equivalence() {
    let mut gate = Gate::new(6);
    let start = Instant::now();
    let mut set_mismatches = Vec::new();
    let mut support_bad = Vec::new();
    let mut queried = 0usize;
    let mut non_empty = 0usize;
    const INSTANCES: u64 = 500;
    for seed in 0..INSTANCES {
        let f = fuzz_instance(seed);
        let mut cfg = MiningConfig::new(f.min_supp, TargetSpec::new(f.target.clone()));
        cfg.max_length = Some(MAX_PATTERN_LENGTH);
        let ocfg = OracleConfig::new(f.min_supp, f.target.clone(), MAX_PATTERN_LENGTH).unwrap();

        let miner = mine_with_trace(&f.dataset, &cfg);
        let oracle = exhaustive_mine(&f.dataset, &ocfg);
        let miner_out = miner
            .as_ref()
            .map(|t| t.patterns.clone())
            .map_err(|e| match e {
                Error::EmptyResult(t) => Error::EmptyResult(t.clone()),
                other => Error::InvalidConfig(other.to_string()),
            });
        if !same_result(&miner_out, &oracle) {
            set_mismatches.push(seed);
        }
        if let Ok(trace) = &miner {
            if !trace.patterns.is_empty() {
                non_empty += 1;
            }
            queried += trace
                .plain
                .iter()
                .chain(&trace.timed)
                .map(|l| l.candidates.len())
                .sum::<usize>()
                + trace.ftis2.len();
            support_bad.extend(
                support_mismatches(trace)
                    .into_iter()
                    .map(|m| format!("seed {seed}: {m}")),
            );
        }
    }
    let elapsed = start.elapsed();
    gate.check(
        "mine = exhaustive_mine on 500 instances",
        set_mismatches.is_empty(),
        format!(
            "{} mismatches {set_mismatches:?}; {non_empty} instances with patterns",
            set_mismatches.len()
        ),
    );
    gate.check(
        "support_interval = naive_support on every queried candidate",
        support_bad.is_empty(),
        format!(
            "{queried} candidates, {} mismatches {:?}",
            support_bad.len(),
            support_bad.iter().take(5).collect::<Vec<_>>()
        ),
    );
    gate.check(
        "runtime < 60 s",
        elapsed < Duration::from_secs(60),
        format!("{elapsed:?}"),
    );
    gate.finish();
}

#[test]
fn criterion_7_properties() {
    let mut gate = Gate::new(7);

    let mut involution = true;
    let mut contiguous = true;
    let mut sound = true;
    for seed in 0..200 {
        let f = fuzz_instance(seed);
        for s in f.dataset.sequences() {
            let r = reverse_sequence(s).unwrap();
            involution &= r.reversed().events() == s.events();
        }
        let cfg = MiningConfig::new(f.min_supp, TargetSpec::new(f.target.clone()));
        let Ok(trace) = mine_with_trace(&f.dataset, &cfg) else {
            continue;
        };
        for (p, _) in &trace.patterns {
            let back = rereverse_pattern(&p.reversed()).unwrap();
            involution &= &back == p;
        }
        for pi in &trace.intervals {
            let all = pi.gaps.gaps();
            let mut cursor = 0;
            for c in &pi.clusters {
                // each cluster is a contiguous run, later clusters start further right
                let Some(offset) = all[cursor..]
                    .windows(c.gaps().len())
                    .position(|w| w == c.gaps())
                else {
                    contiguous = false;
                    break;
                };
                cursor += offset + c.gaps().len();
            }
            for w in pi.clusters.windows(2) {
                contiguous &= w[0].range().hi() < w[1].range().lo();
            }
        }
        let all_frequent = trace
            .plain
            .iter()
            .chain(&trace.timed)
            .flat_map(|l| l.frequent.iter())
            .chain(&trace.ftis2)
            .chain(&trace.patterns);
        for (_, s) in all_frequent {
            sound &= s.meets(f.min_supp);
        }
    }
    gate.check(
        "reversal and re-reversal are involutions",
        involution,
        "200 fuzz datasets",
    );
    gate.check(
        "clusters contiguous and disjoint",
        contiguous,
        "200 fuzz datasets",
    );
    gate.check(
        "every frequent support >= min_supp (exact)",
        sound,
        "200 fuzz datasets",
    );

    let (trace, _) = timed_trace();
    let d = &trace.working;
    let mut monotone = Vec::new();
    for level in &trace.timed {
        for (p, s) in &level.frequent {
            let k = p.len();
            let prefix = support_interval(d, &p.slice(0, k - 1));
            let suffix = support_interval(d, &p.slice(1, k));
            monotone.push(prefix.count() >= s.count() && suffix.count() >= s.count());
        }
    }
    gate.check(
        "prefix/suffix monotonicity on FTIS3/FTIS4",
        !monotone.is_empty() && monotone.iter().all(|&m| m),
        format!("{} patterns", monotone.len()),
    );
    let plain_ok = support_plain(d, &[Itemset::single("s7"), Itemset::single("s6")]).count()
        >= support_interval(d, &rev("<(s7), [5,5], (s6)>")).count();
    gate.check("interval support <= plain support", plain_ok, "<s7,s6>");

    let render = |parallel: bool| {
        let mut cfg = s7_config();
        cfg.parallel = parallel;
        let trace = mine_with_trace(&fixtures::sample(), &cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let files = dump_intermediate(&trace, dir.path()).unwrap();
        let mut bytes = render_report(&trace.patterns, ReportFormat::Json).into_bytes();
        bytes.extend(render_report(&trace.patterns, ReportFormat::Table).into_bytes());
        for f in files {
            bytes.extend(std::fs::read(f).unwrap());
        }
        bytes
    };
    let first = render(false);
    gate.check(
        "byte-identical across two runs",
        first == render(false),
        first.len(),
    );
    gate.check(
        "byte-identical serial vs parallel",
        first == render(true),
        first.len(),
    );
    gate.finish();
}

#[test]
fn criterion_8_scope_note() {
    // No large-scale experiments exist to reproduce; criteria 1-5 cover the
    // only empirical content and 6-7 stand in for scale.
    println!("PASS criterion 8: covered by criteria 1-7 (no additional experiments to reproduce)");
}
