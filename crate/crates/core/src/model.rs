//! Domain types shared by every stage of the pipeline.
//!
//! All types validate on construction and carry a canonical order, so any
//! list built from them can be sorted into a deterministic form.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Timestamp in an arbitrary integer unit (the worked example uses days).
pub type Time = i64;

const RESERVED: &[char] = &[',', '(', ')', '[', ']', '<', '>'];

/// Opaque item token such as `s5`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ItemId(String);

impl ItemId {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty()
            || token
                .chars()
                .any(|c| c.is_whitespace() || RESERVED.contains(&c))
        {
            return Err(Error::InvalidItem(token));
        }
        Ok(ItemId(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for ItemId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        ItemId::new(s)
    }
}

impl From<ItemId> for String {
    fn from(i: ItemId) -> String {
        i.0
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Non-empty set of items, stored as a sorted, deduplicated list.
///
/// Itemsets are compared as atomic symbols: two itemsets match only when
/// they are equal as sets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn new(items: impl IntoIterator<Item = ItemId>) -> Result<Self> {
        let mut items: Vec<ItemId> = items.into_iter().collect();
        items.sort();
        items.dedup();
        if items.is_empty() {
            return Err(Error::EmptyItemset);
        }
        Ok(Itemset(items))
    }

    /// Builds an itemset from raw string tokens.
    pub fn from_tokens<S: AsRef<str>>(tokens: impl IntoIterator<Item = S>) -> Result<Self> {
        let items = tokens
            .into_iter()
            .map(|t| ItemId::new(t.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Itemset::new(items)
    }

    /// Single-item itemset. Panics on an invalid token; intended for literals.
    pub fn single(token: &str) -> Self {
        Itemset::from_tokens([token]).expect("valid item token")
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, item) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{item}")?;
        }
        Ok(())
    }
}

impl FromStr for Itemset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Itemset::from_tokens(s.split_whitespace())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Event {
    pub itemset: Itemset,
    pub time: Time,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Original,
    Reversed,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Original => Orientation::Reversed,
            Orientation::Reversed => Orientation::Original,
        }
    }
}

/// Time-ordered events of one entity.
///
/// Original sequences have strictly increasing timestamps, reversed ones
/// strictly decreasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: String,
    events: Vec<Event>,
    orientation: Orientation,
}

impl Sequence {
    /// Validates raw `(itemset, time)` pairs into an original-orientation
    /// sequence. Input order does not matter; events are sorted by time.
    pub fn new(id: impl Into<String>, raw: Vec<(Itemset, Time)>) -> Result<Self> {
        let id = id.into();
        if raw.is_empty() {
            return Err(Error::EmptySequence { id });
        }
        if let Some(&(_, time)) = raw.iter().find(|(_, t)| *t < 0) {
            return Err(Error::NegativeTimestamp { id, time });
        }
        let mut events: Vec<Event> = raw
            .into_iter()
            .map(|(itemset, time)| Event { itemset, time })
            .collect();
        events.sort_by_key(|e| e.time);
        if let Some(w) = events.windows(2).find(|w| w[0].time == w[1].time) {
            return Err(Error::DuplicateTimestamp {
                id,
                time: w[0].time,
            });
        }
        Ok(Sequence {
            id,
            events,
            orientation: Orientation::Original,
        })
    }

    /// Parses the `(s5,8), (s4,15)` event-list rendering.
    pub fn parse(id: impl Into<String>, text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            rest = rest.strip_prefix(',').unwrap_or(rest).trim_start();
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::InvalidPattern(format!("expected '(' in {text:?}")))?;
            let close = body
                .find(')')
                .ok_or_else(|| Error::InvalidPattern(format!("unclosed '(' in {text:?}")))?;
            let (inner, tail) = body.split_at(close);
            let (items, time) = inner
                .rsplit_once(',')
                .ok_or_else(|| Error::InvalidPattern(format!("event without time: {inner:?}")))?;
            let time: Time = time
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPattern(format!("bad timestamp {time:?}")))?;
            raw.push((items.parse()?, time));
            rest = tail[1..].trim_start();
        }
        Sequence::new(id, raw)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn contains(&self, itemset: &Itemset) -> bool {
        self.events.iter().any(|e| &e.itemset == itemset)
    }

    /// Same events listed in the opposite order, orientation flipped.
    pub fn reversed(&self) -> Sequence {
        Sequence {
            id: self.id.clone(),
            events: self.events.iter().rev().cloned().collect(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Keeps the events from `start` onwards.
    pub(crate) fn suffix(&self, start: usize) -> Sequence {
        Sequence {
            id: self.id.clone(),
            events: self.events[start..].to_vec(),
            orientation: self.orientation,
        }
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.events.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "({},{})", e.itemset, e.time)?;
        }
        Ok(())
    }
}

/// Non-empty collection of uniquely identified sequences sharing one
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    sequences: Vec<Sequence>,
}

impl Dataset {
    pub fn new(sequences: Vec<Sequence>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let orientation = sequences[0].orientation;
        if sequences.iter().any(|s| s.orientation != orientation) {
            return Err(Error::MixedOrientation);
        }
        let mut seen = HashSet::new();
        for s in &sequences {
            if !seen.insert(s.id.as_str()) {
                return Err(Error::DuplicateSequenceId(s.id.clone()));
            }
        }
        Ok(Dataset { sequences })
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn n(&self) -> usize {
        self.sequences.len()
    }

    pub fn orientation(&self) -> Orientation {
        self.sequences[0].orientation
    }

    pub fn get(&self, id: &str) -> Option<&Sequence> {
        self.sequences.iter().find(|s| s.id == id)
    }
}

/// Sequence-count support: `count` of `denominator` sequences contain the
/// pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Support {
    count: u64,
    denominator: u64,
}

impl Support {
    pub fn new(count: u64, denominator: u64) -> Result<Self> {
        if denominator == 0 || count > denominator {
            return Err(Error::InvalidConfig(format!(
                "support {count}/{denominator} out of range"
            )));
        }
        Ok(Support { count, denominator })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn meets(&self, min: MinSupport) -> bool {
        self.count as u128 * min.den as u128 >= min.num as u128 * self.denominator as u128
    }

    /// Rounds half-up to two decimals and drops trailing zeros:
    /// 4/6 is `0.67`, 3/6 is `0.5`, 6/6 is `1`.
    pub fn render(&self) -> String {
        let (c, d) = (self.count as u128, self.denominator as u128);
        let hundredths = (200 * c + d) / (2 * d);
        let (whole, frac) = (hundredths / 100, hundredths % 100);
        match frac {
            0 => format!("{whole}"),
            f if f % 10 == 0 => format!("{whole}.{}", f / 10),
            f => format!("{whole}.{f:02}"),
        }
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

pub fn render_support(s: Support) -> String {
    s.render()
}

/// Minimum support threshold held as an exact decimal fraction in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinSupport {
    num: u64,
    den: u64,
}

impl MinSupport {
    pub fn from_f64(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "min_supp {value} is not finite"
            )));
        }
        format!("{value}").parse()
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for MinSupport {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("min_supp {s:?} must be a decimal in (0,1]"));
        let t = s.trim();
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let digits = |p: &str| p.chars().all(|c| c.is_ascii_digit());
        if (int.is_empty() && frac.is_empty()) || !digits(int) || !digits(frac) || frac.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() {
            0
        } else {
            int.parse().map_err(|_| bad())?
        };
        let frac: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse().map_err(|_| bad())?
        };
        let num = int
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac))
            .ok_or_else(bad)?;
        if num == 0 || num > den {
            return Err(bad());
        }
        Ok(MinSupport { num, den })
    }
}

impl fmt::Display for MinSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_f64())
    }
}

/// One observed gap between a matched pair, tagged with its sequence.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gap {
    pub value: Time,
    pub sequence: String,
}

/// Sorted multiset of gaps observed for an ordered pair of itemsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapList {
    pub pair: (Itemset, Itemset),
    gaps: Vec<Gap>,
}

impl GapList {
    pub fn new(pair: (Itemset, Itemset), mut gaps: Vec<Gap>) -> Result<Self> {
        if let Some(g) = gaps.iter().find(|g| g.value <= 0) {
            return Err(Error::InvalidPattern(format!(
                "non-positive gap {} in sequence {}",
                g.value, g.sequence
            )));
        }
        gaps.sort();
        Ok(GapList { pair, gaps })
    }

    pub fn gaps(&self) -> &[Gap] {
        &self.gaps
    }

    pub fn values(&self) -> Vec<Time> {
        self.gaps.iter().map(|g| g.value).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.gaps.is_empty()
    }
}

/// Closed gap range `[lo, hi]` with `0 < lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TimeRange {
    lo: Time,
    hi: Time,
}

impl TimeRange {
    pub fn new(lo: Time, hi: Time) -> Result<Self> {
        if lo <= 0 || lo > hi {
            return Err(Error::InvalidTimeRange { lo, hi });
        }
        Ok(TimeRange { lo, hi })
    }

    pub fn lo(&self) -> Time {
        self.lo
    }

    pub fn hi(&self) -> Time {
        self.hi
    }

    pub fn contains(&self, gap: Time) -> bool {
        self.lo <= gap && gap <= self.hi
    }
}

impl fmt::Display for TimeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// Itemsets interleaved with the gap ranges between consecutive ones.
///
/// `intervals` is either empty (a plain sequence) or has exactly one range
/// per adjacent element pair. Ordering is lexicographic on elements, then
/// intervals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntervalPattern {
    elements: Vec<Itemset>,
    intervals: Vec<TimeRange>,
    orientation: Orientation,
}

impl IntervalPattern {
    pub fn new(
        elements: Vec<Itemset>,
        intervals: Vec<TimeRange>,
        orientation: Orientation,
    ) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidPattern("pattern has no elements".into()));
        }
        if !intervals.is_empty() && intervals.len() + 1 != elements.len() {
            return Err(Error::InvalidPattern(format!(
                "{} elements need {} intervals, got {}",
                elements.len(),
                elements.len() - 1,
                intervals.len()
            )));
        }
        Ok(IntervalPattern {
            elements,
            intervals,
            orientation,
        })
    }

    /// Pattern without time ranges.
    pub fn plain(elements: Vec<Itemset>, orientation: Orientation) -> Result<Self> {
        IntervalPattern::new(elements, Vec::new(), orientation)
    }

    pub fn elements(&self) -> &[Itemset] {
        &self.elements
    }

    pub fn intervals(&self) -> &[TimeRange] {
        &self.intervals
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn has_intervals(&self) -> bool {
        !self.intervals.is_empty()
    }

    pub fn contains(&self, itemset: &Itemset) -> bool {
        self.elements.iter().any(|e| e == itemset)
    }

    /// Elements and intervals both reversed, orientation flipped. Each range
    /// stays between the same two elements.
    pub fn reversed(&self) -> IntervalPattern {
        IntervalPattern {
            elements: self.elements.iter().rev().cloned().collect(),
            intervals: self.intervals.iter().rev().copied().collect(),
            orientation: self.orientation.flipped(),
        }
    }

    /// Contiguous sub-pattern over elements `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> IntervalPattern {
        let intervals = if self.has_intervals() {
            self.intervals[start..end - 1].to_vec()
        } else {
            Vec::new()
        };
        IntervalPattern {
            elements: self.elements[start..end].to_vec(),
            intervals,
            orientation: self.orientation,
        }
    }

    pub(crate) fn extended(&self, range: TimeRange, element: Itemset) -> IntervalPattern {
        let mut p = self.clone();
        p.intervals.push(range);
        p.elements.push(element);
        p
    }

    /// Parses the canonical rendering `<(s2), [1,5], (s1)>`.
    pub fn parse(text: &str, orientation: Orientation) -> Result<Self> {
        let bad = |why: &str| Error::InvalidPattern(format!("{why} in {text:?}"));
        let body = text
            .trim()
            .strip_prefix('<')
            .and_then(|t| t.strip_suffix('>'))
            .ok_or_else(|| bad("missing angle brackets"))?;
        let mut elements = Vec::new();
        let mut intervals = Vec::new();
        let mut rest = body.trim();
        let mut expect_element = true;
        while !rest.is_empty() {
            if expect_element {
                let inner = rest.strip_prefix('(').ok_or_else(|| bad("expected '('"))?;
                let close = inner.find(')').ok_or_else(|| bad("unclosed '('"))?;
                elements.push(inner[..close].parse()?);
                rest = &inner[close + 1..];
            } else {
                let inner = rest.strip_prefix('[').ok_or_else(|| bad("expected '['"))?;
                let close = inner.find(']').ok_or_else(|| bad("unclosed '['"))?;
                let (lo, hi) = inner[..close].split_once(',').ok_or_else(|| bad("range"))?;
                let lo = lo.trim().parse().map_err(|_| bad("range bound"))?;
                let hi = hi.trim().parse().map_err(|_| bad("range bound"))?;
                intervals.push(TimeRange::new(lo, hi)?);
                rest = &inner[close + 1..];
            }
            rest = rest.trim_start();
            if let Some(r) = rest.strip_prefix(',') {
                rest = r.trim_start();
                if rest.is_empty() {
                    return Err(bad("trailing comma"));
                }
            } else if !rest.is_empty() {
                return Err(bad("expected ','"));
            }
            // an element may be followed by a range; a range always by an element
            expect_element = !(expect_element && rest.starts_with('['));
        }
        IntervalPattern::new(elements, intervals, orientation)
    }
}

impl fmt::Display for IntervalPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
                if let Some(r) = self.intervals.get(i - 1) {
                    write!(f, "{r}, ")?;
                }
            }
            write!(f, "({e})")?;
        }
        f.write_str(">")
    }
}
