//! Brute-force reference miner for small instances.
//!
//! Supports are counted by trying every index tuple, and patterns are
//! found by enumerating every element tuple over the alphabet with no
//! level-wise reuse. Only the gap clustering is shared with the miner,
//! since it decides which time ranges exist in the first place.

use std::collections::{BTreeMap, BTreeSet};

use crate::clustering::cluster;
use crate::error::{Error, Result};
use crate::miner::Scored;
use crate::model::{
    Dataset, Gap, GapList, IntervalPattern, Itemset, MinSupport, Orientation, Sequence, Support,
    TimeRange,
};

pub const MAX_SEQUENCES: usize = 12;
pub const MAX_EVENTS: usize = 10;
pub const MAX_PATTERN_LENGTH: usize = 5;

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub max_pattern_length: usize,
    pub min_supp: MinSupport,
    pub target: Itemset,
}

impl OracleConfig {
    pub fn new(min_supp: MinSupport, target: Itemset, max_pattern_length: usize) -> Result<Self> {
        if !(2..=MAX_PATTERN_LENGTH).contains(&max_pattern_length) {
            return Err(Error::InvalidConfig(format!(
                "oracle pattern length {max_pattern_length} outside 2..={MAX_PATTERN_LENGTH}"
            )));
        }
        Ok(OracleConfig {
            max_pattern_length,
            min_supp,
            target,
        })
    }
}

pub fn check_size(d: &Dataset) -> Result<()> {
    if d.n() > MAX_SEQUENCES {
        return Err(Error::InstanceTooLarge(format!(
            "{} sequences (limit {MAX_SEQUENCES})",
            d.n()
        )));
    }
    if let Some(s) = d.sequences().iter().find(|s| s.len() > MAX_EVENTS) {
        return Err(Error::InstanceTooLarge(format!(
            "sequence {} has {} events (limit {MAX_EVENTS})",
            s.id(),
            s.len()
        )));
    }
    Ok(())
}

/// Calls `f` with every strictly increasing index tuple of length `k` below `n`.
fn for_each_tuple(n: usize, k: usize, f: &mut dyn FnMut(&[usize]) -> bool) {
    fn go(
        start: usize,
        n: usize,
        k: usize,
        buf: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if buf.len() == k {
            return f(buf);
        }
        for i in start..n {
            buf.push(i);
            if go(i + 1, n, k, buf, f) {
                return true;
            }
            buf.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

fn sequence_matches(seq: &Sequence, p: &IntervalPattern) -> bool {
    let events = seq.events();
    let mut found = false;
    for_each_tuple(events.len(), p.len(), &mut |idx| {
        let items_ok = idx
            .iter()
            .zip(p.elements())
            .all(|(&i, e)| &events[i].itemset == e);
        let gaps_ok = p
            .intervals()
            .iter()
            .enumerate()
            .all(|(j, r)| r.contains((events[idx[j]].time - events[idx[j + 1]].time).abs()));
        found = items_ok && gaps_ok;
        found
    });
    found
}

pub fn naive_support(d: &Dataset, p: &IntervalPattern) -> Result<Support> {
    check_size(d)?;
    let count = d
        .sequences()
        .iter()
        .filter(|s| sequence_matches(s, p))
        .count();
    Support::new(count as u64, d.n() as u64)
}

fn working_dataset(d: &Dataset, target: &Itemset) -> Result<Dataset> {
    let kept: Vec<Sequence> = d
        .sequences()
        .iter()
        .map(Sequence::reversed)
        .filter_map(|s| {
            let first = s.events().iter().position(|e| &e.itemset == target)?;
            Some(s.suffix(first))
        })
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyResult(target.to_string()));
    }
    Dataset::new(kept)
}

fn naive_gaps(d: &Dataset, a: &Itemset, b: &Itemset) -> GapList {
    let mut gaps = Vec::new();
    for s in d.sequences() {
        let ev = s.events();
        for_each_tuple(ev.len(), 2, &mut |idx| {
            if &ev[idx[0]].itemset == a && &ev[idx[1]].itemset == b {
                gaps.push(Gap {
                    value: ev[idx[0]].time - ev[idx[1]].time,
                    sequence: s.id().to_string(),
                });
            }
            false
        });
    }
    GapList::new((a.clone(), b.clone()), gaps).expect("reversed timestamps decrease")
}

/// Every element tuple over `alphabet` of length `k`.
fn element_tuples(alphabet: &[Itemset], k: usize) -> Vec<Vec<Itemset>> {
    let mut out: Vec<Vec<Itemset>> = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                alphabet.iter().map(move |a| {
                    let mut t = prefix.clone();
                    t.push(a.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Exhaustive counterpart of `miner::mine`, capped at
/// `cfg.max_pattern_length` elements.
pub fn exhaustive_mine(d: &Dataset, cfg: &OracleConfig) -> Result<Vec<Scored>> {
    check_size(d)?;
    let work = working_dataset(d, &cfg.target)?;
    let alphabet: Vec<Itemset> = work
        .sequences()
        .iter()
        .flat_map(|s| s.events().iter().map(|e| e.itemset.clone()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();

    let mut ranges: BTreeMap<(Itemset, Itemset), Vec<TimeRange>> = BTreeMap::new();
    for a in &alphabet {
        for b in &alphabet {
            if a == b {
                continue;
            }
            let plain = IntervalPattern::plain(vec![a.clone(), b.clone()], Orientation::Reversed)?;
            if !naive_support(&work, &plain)?.meets(cfg.min_supp) {
                continue;
            }
            let gaps = naive_gaps(&work, a, b);
            let found = cluster(&gaps, work.n(), cfg.min_supp);
            ranges.insert(
                (a.clone(), b.clone()),
                found.iter().map(|c| c.range()).collect(),
            );
        }
    }

    let mut found = Vec::new();
    for k in 2..=cfg.max_pattern_length {
        for elems in element_tuples(&alphabet, k) {
            let mut choices: Vec<Vec<TimeRange>> = vec![Vec::new()];
            for w in elems.windows(2) {
                let options = ranges
                    .get(&(w[0].clone(), w[1].clone()))
                    .cloned()
                    .unwrap_or_default();
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        options.iter().map(move |r| {
                            let mut c = c.clone();
                            c.push(*r);
                            c
                        })
                    })
                    .collect();
            }
            for intervals in choices {
                let p = IntervalPattern::new(elems.clone(), intervals, Orientation::Reversed)?;
                let s = naive_support(&work, &p)?;
                if s.meets(cfg.min_supp) && p.contains(&cfg.target) {
                    found.push((p.reversed(), s));
                }
            }
        }
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(found)
}
