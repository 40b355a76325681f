//! Target-orientation transforms applied before and after mining.
//!
//! Before mining, sequences are reversed, those lacking the target are
//! dropped, and each survivor is cut so it starts at the target. After
//! mining, patterns without the target are dropped and the rest are turned
//! back into original time order.

use crate::error::{Error, Result};
use crate::model::{Dataset, IntervalPattern, Itemset, Orientation, Sequence};

/// The itemset the analyst wants patterns to lead up to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSpec {
    pub target: Itemset,
}

impl TargetSpec {
    pub fn new(target: Itemset) -> Self {
        TargetSpec { target }
    }
}

fn expect(found: Orientation, expected: Orientation) -> Result<()> {
    if found != expected {
        return Err(Error::WrongOrientation { expected, found });
    }
    Ok(())
}

pub fn reverse_sequence(s: &Sequence) -> Result<Sequence> {
    expect(s.orientation(), Orientation::Original)?;
    Ok(s.reversed())
}

pub fn reverse_dataset(d: &Dataset) -> Result<Dataset> {
    let seqs = d
        .sequences()
        .iter()
        .map(reverse_sequence)
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(seqs)
}

/// Keeps the sequences containing the target. The retained count becomes
/// the support denominator for every later stage.
pub fn filter_by_target(d: &Dataset, t: &TargetSpec) -> Result<Dataset> {
    expect(d.orientation(), Orientation::Reversed)?;
    let kept: Vec<Sequence> = d
        .sequences()
        .iter()
        .filter(|s| s.contains(&t.target))
        .cloned()
        .collect();
    if kept.is_empty() {
        return Err(Error::EmptyResult(t.target.to_string()));
    }
    Dataset::new(kept)
}

/// Drops every event listed before the first target occurrence, i.e. after
/// the last occurrence in original time.
pub fn truncate_before_target(s: &Sequence, t: &TargetSpec) -> Result<Sequence> {
    expect(s.orientation(), Orientation::Reversed)?;
    let start = s
        .events()
        .iter()
        .position(|e| e.itemset == t.target)
        .ok_or_else(|| Error::TargetAbsent {
            id: s.id().to_string(),
        })?;
    Ok(s.suffix(start))
}

/// Reverse, filter and truncate: turns an original dataset into the working
/// dataset the miner operates on.
pub fn prepare(d: &Dataset, t: &TargetSpec) -> Result<Dataset> {
    let filtered = filter_by_target(&reverse_dataset(d)?, t)?;
    let seqs = filtered
        .sequences()
        .iter()
        .map(|s| truncate_before_target(s, t))
        .collect::<Result<Vec<_>>>()?;
    Dataset::new(seqs)
}

pub fn filter_patterns_by_target<T>(
    ps: Vec<(IntervalPattern, T)>,
    t: &TargetSpec,
) -> Vec<(IntervalPattern, T)> {
    ps.into_iter()
        .filter(|(p, _)| p.contains(&t.target))
        .collect()
}

pub fn rereverse_pattern(p: &IntervalPattern) -> Result<IntervalPattern> {
    expect(p.orientation(), Orientation::Reversed)?;
    Ok(p.reversed())
}
