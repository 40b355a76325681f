//! Frequent time-interval discovery for 2-sequences.
//!
//! The sorted gap list of a pair is split recursively at its widest
//! adjacent difference. Children that are frequent on their own replace the
//! parent; a parent with no frequent child, a singleton, or one whose
//! adjacent differences are all equal is non-dividable and kept as is.

use std::collections::HashSet;

use crate::model::{Dataset, Gap, GapList, Itemset, MinSupport, Support, Time, TimeRange};

/// Contiguous run of a sorted gap list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapCluster {
    gaps: Vec<Gap>,
}

impl GapCluster {
    /// `gaps` must be non-empty and sorted by value.
    pub fn new(gaps: Vec<Gap>) -> Option<Self> {
        if gaps.is_empty() || gaps.windows(2).any(|w| w[0].value > w[1].value) {
            return None;
        }
        Some(GapCluster { gaps })
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn values(&self) -> Vec<Time> {
        self.gaps.iter().map(|g| g.value).collect()
    }

    pub fn range(&self) -> TimeRange {
        let lo = self.gaps[0].value;
        let hi = self.gaps[self.gaps.len() - 1].value;
        TimeRange::new(lo, hi).expect("gaps are positive and sorted")
    }

    /// Number of distinct sequences contributing a gap, over `n`.
    pub fn support(&self, n: usize) -> Support {
        let distinct: HashSet<&str> = self.gaps.iter().map(|g| g.sequence.as_str()).collect();
        Support::new(distinct.len() as u64, n as u64).expect("cluster support within dataset size")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Split {
    NonDividable,
    Divided(GapCluster, GapCluster),
}

/// Every gap `time(a) - time(b)` over all embeddings of `a` listed before
/// `b`, not necessarily adjacent.
pub fn collect_gaps(d: &Dataset, a: &Itemset, b: &Itemset) -> GapList {
    let mut gaps = Vec::new();
    for seq in d.sequences() {
        let events = seq.events();
        for (i, first) in events.iter().enumerate() {
            if &first.itemset != a {
                continue;
            }
            for second in &events[i + 1..] {
                if &second.itemset == b {
                    gaps.push(Gap {
                        value: (first.time - second.time).abs(),
                        sequence: seq.id().to_string(),
                    });
                }
            }
        }
    }
    GapList::new((a.clone(), b.clone()), gaps).expect("timestamps strictly monotone")
}

/// Splits between the adjacent pair with the largest difference, leftmost
/// on ties.
pub fn split_at_max_gap(c: &GapCluster) -> Split {
    let diffs: Vec<Time> = c.gaps.windows(2).map(|w| w[1].value - w[0].value).collect();
    if diffs.is_empty() || diffs.iter().all(|&d| d == diffs[0]) {
        return Split::NonDividable;
    }
    let max = *diffs.iter().max().expect("non-empty");
    let at = diffs.iter().position(|&d| d == max).expect("max present") + 1;
    Split::Divided(
        GapCluster {
            gaps: c.gaps[..at].to_vec(),
        },
        GapCluster {
            gaps: c.gaps[at..].to_vec(),
        },
    )
}

/// Final non-dividable clusters of `gaps`, ordered by range.
pub fn cluster(gaps: &GapList, n: usize, min_supp: MinSupport) -> Vec<GapCluster> {
    let mut out = Vec::new();
    if let Some(root) = GapCluster::new(gaps.gaps().to_vec()) {
        refine(root, n, min_supp, &mut out);
    }
    out
}

fn refine(c: GapCluster, n: usize, min_supp: MinSupport, out: &mut Vec<GapCluster>) {
    let Split::Divided(left, right) = split_at_max_gap(&c) else {
        out.push(c);
        return;
    };
    let reserved: Vec<GapCluster> = [left, right]
        .into_iter()
        .filter(|child| child.support(n).meets(min_supp))
        .collect();
    if reserved.is_empty() {
        out.push(c);
        return;
    }
    for child in reserved {
        refine(child, n, min_supp, out);
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>, sep: &str) -> String {
    xs.into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

/// `(s7,s6): gaps=[2,4,5,5,5] clusters=[[5,5,5]]`
pub fn dump_line(gaps: &GapList, clusters: &[GapCluster]) -> String {
    format!(
        "({},{}): gaps=[{}] clusters=[{}]",
        gaps.pair.0,
        gaps.pair.1,
        join(gaps.values(), ","),
        join(
            clusters
                .iter()
                .map(|c| format!("[{}]", join(c.values(), ","))),
            ","
        )
    )
}
