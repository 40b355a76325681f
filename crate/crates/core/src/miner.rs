//! Level-wise mining of frequent time-interval sequences.
//!
//! Frequent 1- and 2-sequences are found on the working dataset without
//! time information. Each frequent 2-sequence is then annotated with its
//! frequent gap clusters, and longer patterns are grown by joining
//! overlapping (k-1)-patterns until no candidate survives.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::clustering::{cluster, collect_gaps, GapCluster};
use crate::error::{Error, Result};
use crate::model::{
    Dataset, GapList, IntervalPattern, Itemset, MinSupport, Orientation, Sequence, Support,
    TimeRange,
};
use crate::preprocess::{filter_patterns_by_target, prepare, rereverse_pattern, TargetSpec};

pub type Scored = (IntervalPattern, Support);

#[derive(Debug, Clone)]
pub struct MiningConfig {
    pub min_supp: MinSupport,
    pub target: TargetSpec,
    /// Longest pattern to mine; `None` runs until no candidate survives.
    pub max_length: Option<usize>,
    /// Count candidate supports on the rayon pool. Output is identical
    /// either way.
    pub parallel: bool,
}

impl MiningConfig {
    pub fn new(min_supp: MinSupport, target: TargetSpec) -> Self {
        MiningConfig {
            min_supp,
            target,
            max_length: None,
            parallel: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.max_length {
            Some(k) if k < 2 => Err(Error::InvalidConfig(format!(
                "max_length {k} is below 2; only patterns with intervals are reported"
            ))),
            _ => Ok(()),
        }
    }

    fn allows(&self, k: usize) -> bool {
        self.max_length.is_none_or(|m| k <= m)
    }
}

/// Candidates and frequent members of one level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelResult {
    pub k: usize,
    pub candidates: Vec<Scored>,
    pub frequent: Vec<Scored>,
}

/// Gap list of a frequent 2-sequence and the clusters kept from it.
#[derive(Debug, Clone, PartialEq)]
pub struct PairIntervals {
    pub gaps: GapList,
    pub clusters: Vec<GapCluster>,
}

/// Everything computed along the way, for inspection and dumping.
#[derive(Debug, Clone)]
pub struct MiningTrace {
    pub working: Dataset,
    /// Levels 1 and 2 without intervals.
    pub plain: Vec<LevelResult>,
    pub intervals: Vec<PairIntervals>,
    pub ftis2: Vec<Scored>,
    /// Levels 3 and up.
    pub timed: Vec<LevelResult>,
    /// Final target-filtered patterns in original orientation.
    pub patterns: Vec<Scored>,
}

/// Whether some order-preserving embedding of `elems` exists in `seq`,
/// with consecutive gaps inside `ranges` when given.
fn embeds(seq: &Sequence, elems: &[Itemset], ranges: &[TimeRange]) -> bool {
    let events = seq.events();
    let mut reach: Vec<bool> = events.iter().map(|e| e.itemset == elems[0]).collect();
    for (step, elem) in elems.iter().enumerate().skip(1) {
        let range = ranges.get(step - 1);
        let mut next = vec![false; events.len()];
        let mut any = false;
        for (q, ev) in events.iter().enumerate() {
            if &ev.itemset != elem {
                continue;
            }
            next[q] = (0..q).any(|p| {
                reach[p] && range.is_none_or(|r| r.contains((events[p].time - ev.time).abs()))
            });
            any |= next[q];
        }
        if !any {
            return false;
        }
        reach = next;
    }
    reach.into_iter().any(|r| r)
}

fn count_supporting(d: &Dataset, elems: &[Itemset], ranges: &[TimeRange]) -> Support {
    let count = d
        .sequences()
        .iter()
        .filter(|s| embeds(s, elems, ranges))
        .count();
    Support::new(count as u64, d.n() as u64).expect("count bounded by n")
}

pub fn support_plain(d: &Dataset, elems: &[Itemset]) -> Support {
    assert!(!elems.is_empty(), "pattern needs at least one element");
    count_supporting(d, elems, &[])
}

/// Sequences with at least one embedding whose consecutive gaps fall in
/// the pattern's closed ranges.
pub fn support_interval(d: &Dataset, p: &IntervalPattern) -> Support {
    count_supporting(d, p.elements(), p.intervals())
}

fn score<F>(cands: Vec<IntervalPattern>, parallel: bool, f: F) -> Vec<Scored>
where
    F: Fn(&IntervalPattern) -> Support + Sync,
{
    if parallel {
        cands
            .into_par_iter()
            .map(|p| {
                let s = f(&p);
                (p, s)
            })
            .collect()
    } else {
        cands
            .into_iter()
            .map(|p| {
                let s = f(&p);
                (p, s)
            })
            .collect()
    }
}

pub fn gen_cs1(d: &Dataset) -> Vec<IntervalPattern> {
    let distinct: BTreeSet<&Itemset> = d
        .sequences()
        .iter()
        .flat_map(|s| s.events().iter().map(|e| &e.itemset))
        .collect();
    distinct
        .into_iter()
        .map(|i| IntervalPattern::plain(vec![i.clone()], d.orientation()).expect("one element"))
        .collect()
}

pub fn filter_frequent(cands: Vec<Scored>, min_supp: MinSupport) -> Vec<Scored> {
    cands
        .into_iter()
        .filter(|(_, s)| s.meets(min_supp))
        .collect()
}

/// Every ordered pair of distinct frequent 1-sequences.
pub fn gen_cs2(fs1: &[IntervalPattern]) -> Vec<IntervalPattern> {
    let mut out = Vec::new();
    for a in fs1 {
        for b in fs1 {
            if a.elements()[0] != b.elements()[0] {
                let elems = vec![a.elements()[0].clone(), b.elements()[0].clone()];
                out.push(IntervalPattern::plain(elems, a.orientation()).expect("two elements"));
            }
        }
    }
    out.sort();
    out
}

pub fn interval_table(fs2: &[Scored], d: &Dataset, min_supp: MinSupport) -> Vec<PairIntervals> {
    fs2.iter()
        .map(|(p, _)| {
            let gaps = collect_gaps(d, &p.elements()[0], &p.elements()[1]);
            let clusters = cluster(&gaps, d.n(), min_supp);
            PairIntervals { gaps, clusters }
        })
        .collect()
}

fn ftis2_from_table(table: &[PairIntervals], d: &Dataset) -> Vec<Scored> {
    let mut out: Vec<Scored> = table
        .iter()
        .flat_map(|pi| {
            let (a, b) = &pi.gaps.pair;
            pi.clusters.iter().map(move |c| {
                IntervalPattern::new(vec![a.clone(), b.clone()], vec![c.range()], d.orientation())
                    .expect("two elements, one range")
            })
        })
        .map(|p| {
            let s = support_interval(d, &p);
            (p, s)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// One time-interval 2-pattern per frequent gap cluster of each frequent
/// 2-sequence.
pub fn extend_to_ftis2(fs2: &[Scored], d: &Dataset, min_supp: MinSupport) -> Vec<Scored> {
    ftis2_from_table(&interval_table(fs2, d, min_supp), d)
}

/// Joins (k-1)-patterns whose tail (elements and ranges) equals another's
/// head, appending the second pattern's last range and element.
pub fn join_ctis(prev: &[IntervalPattern]) -> Vec<IntervalPattern> {
    let mut by_head: HashMap<(&[Itemset], &[TimeRange]), Vec<&IntervalPattern>> = HashMap::new();
    for p in prev {
        let m = p.len();
        debug_assert!(m >= 2 && p.has_intervals());
        by_head
            .entry((&p.elements()[..m - 1], &p.intervals()[..m - 2]))
            .or_default()
            .push(p);
    }
    let mut out = BTreeSet::new();
    for s1 in prev {
        let tail = (&s1.elements()[1..], &s1.intervals()[1..]);
        for s2 in by_head.get(&tail).into_iter().flatten() {
            let range = *s2.intervals().last().expect("has intervals");
            let elem = s2.elements().last().expect("has elements").clone();
            out.insert(s1.extended(range, elem));
        }
    }
    out.into_iter().collect()
}

pub fn mine(d_original: &Dataset, cfg: &MiningConfig) -> Result<Vec<Scored>> {
    Ok(mine_with_trace(d_original, cfg)?.patterns)
}

pub fn mine_with_trace(d_original: &Dataset, cfg: &MiningConfig) -> Result<MiningTrace> {
    cfg.validate()?;
    if d_original.orientation() != Orientation::Original {
        return Err(Error::WrongOrientation {
            expected: Orientation::Original,
            found: d_original.orientation(),
        });
    }
    let min = cfg.min_supp;
    let working = prepare(d_original, &cfg.target)?;
    let d = &working;

    let plain_support = |p: &IntervalPattern| support_plain(d, p.elements());
    let cs1 = score(gen_cs1(d), cfg.parallel, plain_support);
    let fs1 = filter_frequent(cs1.clone(), min);
    let fs1_patterns: Vec<IntervalPattern> = fs1.iter().map(|(p, _)| p.clone()).collect();
    let cs2 = score(gen_cs2(&fs1_patterns), cfg.parallel, plain_support);
    let fs2 = filter_frequent(cs2.clone(), min);

    let intervals = interval_table(&fs2, d, min);
    let ftis2 = if cfg.allows(2) {
        ftis2_from_table(&intervals, d)
    } else {
        Vec::new()
    };

    let mut timed = Vec::new();
    let mut prev: Vec<IntervalPattern> = ftis2.iter().map(|(p, _)| p.clone()).collect();
    let mut k = 3;
    while cfg.allows(k) && !prev.is_empty() {
        let candidates = join_ctis(&prev);
        if candidates.is_empty() {
            break;
        }
        let candidates = score(candidates, cfg.parallel, |p| support_interval(d, p));
        let frequent = filter_frequent(candidates.clone(), min);
        prev = frequent.iter().map(|(p, _)| p.clone()).collect();
        timed.push(LevelResult {
            k,
            candidates,
            frequent,
        });
        k += 1;
    }

    let all_frequent: Vec<Scored> = ftis2
        .iter()
        .cloned()
        .chain(timed.iter().flat_map(|l| l.frequent.iter().cloned()))
        .collect();
    let mut patterns = filter_patterns_by_target(all_frequent, &cfg.target)
        .into_iter()
        .map(|(p, s)| Ok((rereverse_pattern(&p)?, s)))
        .collect::<Result<Vec<_>>>()?;
    patterns.sort_by(|a, b| a.0.cmp(&b.0));

    Ok(MiningTrace {
        plain: vec![
            LevelResult {
                k: 1,
                candidates: cs1,
                frequent: fs1,
            },
            LevelResult {
                k: 2,
                candidates: cs2,
                frequent: fs2,
            },
        ],
        working,
        intervals,
        ftis2,
        timed,
        patterns,
    })
}
