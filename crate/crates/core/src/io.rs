//! Dataset ingestion, report rendering and intermediate table dumps.
//!
//! Two input layouts are accepted. CSV has one item per row,
//! `sequence_id,timestamp,item`, with an optional header; rows sharing a
//! sequence and timestamp form one itemset. JSONL has one sequence per
//! line: `{"id": "C001", "events": [{"t": 8, "items": ["s5"]}]}`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::dump_line;
use crate::error::{Error, Result};
use crate::miner::{MiningTrace, Scored};
use crate::model::{Dataset, IntervalPattern, ItemId, Itemset, Sequence, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Csv,
    Jsonl,
}

impl FromStr for InputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(InputFormat::Csv),
            "jsonl" => Ok(InputFormat::Jsonl),
            other => Err(Error::InvalidConfig(format!(
                "unknown input format {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "table" => Ok(ReportFormat::Table),
            other => Err(Error::InvalidConfig(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

/// Collects items per (sequence, timestamp), keeping sequences in order of
/// first appearance.
#[derive(Default)]
struct Aggregator {
    order: Vec<String>,
    events: HashMap<String, BTreeMap<Time, BTreeSet<ItemId>>>,
}

impl Aggregator {
    fn add(&mut self, id: &str, time: Time, item: ItemId) {
        if !self.events.contains_key(id) {
            self.order.push(id.to_string());
        }
        self.events
            .entry(id.to_string())
            .or_default()
            .entry(time)
            .or_default()
            .insert(item);
    }

    fn touch(&mut self, id: &str) {
        if !self.events.contains_key(id) {
            self.order.push(id.to_string());
            self.events.insert(id.to_string(), BTreeMap::new());
        }
    }

    fn finish(mut self) -> Result<Dataset> {
        let seqs = self
            .order
            .iter()
            .map(|id| {
                let raw = self
                    .events
                    .remove(id)
                    .unwrap_or_default()
                    .into_iter()
                    .map(|(t, items)| Ok((Itemset::new(items)?, t)))
                    .collect::<Result<Vec<_>>>()?;
                Sequence::new(id.clone(), raw)
            })
            .collect::<Result<Vec<_>>>()?;
        Dataset::new(seqs)
    }
}

fn parse_error(line: u64, column: u64, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_csv(reader: impl Read) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut agg = Aggregator::default();
    for (n, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(line, 1, e.to_string())
        })?;
        let line = record.position().map_or(n as u64 + 1, |p| p.line());
        if n == 0 && record.iter().eq(["sequence_id", "timestamp", "item"]) {
            continue;
        }
        if record.len() != 3 {
            return Err(parse_error(
                line,
                1,
                format!(
                    "expected 3 fields (sequence_id,timestamp,item), found {}",
                    record.len()
                ),
            ));
        }
        let time: Time = record[1].parse().map_err(|_| {
            parse_error(
                line,
                2,
                format!("timestamp {:?} is not an integer", &record[1]),
            )
        })?;
        let item = ItemId::new(&record[2]).map_err(|e| parse_error(line, 3, e.to_string()))?;
        if record[0].is_empty() {
            return Err(parse_error(line, 1, "empty sequence id"));
        }
        agg.add(&record[0], time, item);
    }
    agg.finish()
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonEvent {
    t: Time,
    items: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonSequence {
    id: String,
    events: Vec<JsonEvent>,
}

pub fn parse_jsonl(reader: impl Read) -> Result<Dataset> {
    let mut agg = Aggregator::default();
    for (n, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = n as u64 + 1;
        if line.trim().is_empty() {
            continue;
        }
        let seq: JsonSequence = serde_json::from_str(&line)
            .map_err(|e| parse_error(lineno, e.column() as u64, e.to_string()))?;
        agg.touch(&seq.id);
        for ev in seq.events {
            if ev.items.is_empty() {
                return Err(parse_error(
                    lineno,
                    1,
                    format!("event at t={} has no items", ev.t),
                ));
            }
            for item in ev.items {
                let item = ItemId::new(item).map_err(|e| parse_error(lineno, 1, e.to_string()))?;
                agg.add(&seq.id, ev.t, item);
            }
        }
    }
    agg.finish()
}

pub fn load_dataset(path: impl AsRef<Path>, fmt: InputFormat) -> Result<Dataset> {
    let file = fs::File::open(path)?;
    match fmt {
        InputFormat::Csv => parse_csv(file),
        InputFormat::Jsonl => parse_jsonl(file),
    }
}

/// Serializes an original-orientation dataset in either input layout.
pub fn write_dataset(d: &Dataset, fmt: InputFormat) -> String {
    let mut out = String::new();
    match fmt {
        InputFormat::Csv => {
            out.push_str("sequence_id,timestamp,item\n");
            for s in d.sequences() {
                for e in s.events() {
                    for item in e.itemset.items() {
                        let _ = writeln!(out, "{},{},{}", s.id(), e.time, item);
                    }
                }
            }
        }
        InputFormat::Jsonl => {
            for s in d.sequences() {
                let seq = JsonSequence {
                    id: s.id().to_string(),
                    events: s
                        .events()
                        .iter()
                        .map(|e| JsonEvent {
                            t: e.time,
                            items: e.itemset.items().iter().map(|i| i.to_string()).collect(),
                        })
                        .collect(),
                };
                out.push_str(&serde_json::to_string(&seq).expect("plain data serializes"));
                out.push('\n');
            }
        }
    }
    out
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportInterval {
    pub lo: Time,
    pub hi: Time,
}

/// One row of the JSON report.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportRow {
    pub elements: Vec<Vec<String>>,
    pub intervals: Vec<ReportInterval>,
    pub support: String,
    pub count: u64,
    pub denominator: u64,
}

impl ReportRow {
    pub fn from_scored((p, s): &Scored) -> Self {
        ReportRow {
            elements: p
                .elements()
                .iter()
                .map(|e| e.items().iter().map(|i| i.to_string()).collect())
                .collect(),
            intervals: p
                .intervals()
                .iter()
                .map(|r| ReportInterval {
                    lo: r.lo(),
                    hi: r.hi(),
                })
                .collect(),
            support: s.render(),
            count: s.count(),
            denominator: s.denominator(),
        }
    }
}

pub fn render_report(patterns: &[Scored], fmt: ReportFormat) -> String {
    match fmt {
        ReportFormat::Json => {
            let rows: Vec<ReportRow> = patterns.iter().map(ReportRow::from_scored).collect();
            let mut out = serde_json::to_string_pretty(&rows).expect("plain data serializes");
            out.push('\n');
            out
        }
        ReportFormat::Table => {
            let texts: Vec<String> = patterns.iter().map(|(p, _)| p.to_string()).collect();
            let width = texts
                .iter()
                .map(String::len)
                .max()
                .unwrap_or(0)
                .max("Pattern".len());
            let mut out = format!("{:<width$}  Supp\n", "Pattern");
            for (text, (_, s)) in texts.iter().zip(patterns) {
                let _ = writeln!(out, "{text:<width$}  {s}");
            }
            out
        }
    }
}

fn plain_row(p: &IntervalPattern) -> String {
    p.elements()
        .iter()
        .map(|e| e.to_string())
        .collect::<Vec<_>>()
        .join("\t")
}

fn join_values<T: ToString>(xs: &[T]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Writes every intermediate table of a mining run into `dir`:
///
/// | file | rows |
/// |------|------|
/// | `cs1.tsv`, `fs1.tsv` | `item<TAB>support` |
/// | `cs2.tsv`, `fs2.tsv` | `item<TAB>item<TAB>support` |
/// | `gaps.tsv` | `item<TAB>item<TAB>g1,g2,...` |
/// | `clusters.tsv` | `item<TAB>item<TAB>g1,g2,...<TAB>[lo,hi]`, one row per cluster |
/// | `intervals.txt` | `(a,b): gaps=[...] clusters=[[...],...]` |
/// | `ftis2.tsv`, `ctisK.tsv`, `ftisK.tsv` | `pattern<TAB>support` (reversed orientation) |
/// | `patterns.tsv` | final patterns, `pattern<TAB>support` |
///
/// Returns the written paths in creation order.
pub fn dump_intermediate(trace: &MiningTrace, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut files: Vec<(String, String)> = Vec::new();

    let plain_table = |rows: &[Scored]| {
        rows.iter()
            .map(|(p, s)| format!("{}\t{}\n", plain_row(p), s))
            .collect::<String>()
    };
    let timed_table = |rows: &[Scored]| {
        rows.iter()
            .map(|(p, s)| format!("{p}\t{s}\n"))
            .collect::<String>()
    };

    for level in &trace.plain {
        files.push((format!("cs{}.tsv", level.k), plain_table(&level.candidates)));
        files.push((format!("fs{}.tsv", level.k), plain_table(&level.frequent)));
    }

    let mut gaps = String::new();
    let mut clusters = String::new();
    let mut intervals = String::new();
    for pi in &trace.intervals {
        let (a, b) = &pi.gaps.pair;
        let _ = writeln!(gaps, "{a}\t{b}\t{}", join_values(&pi.gaps.values()));
        for c in &pi.clusters {
            let _ = writeln!(
                clusters,
                "{a}\t{b}\t{}\t{}",
                join_values(&c.values()),
                c.range()
            );
        }
        intervals.push_str(&dump_line(&pi.gaps, &pi.clusters));
        intervals.push('\n');
    }
    files.push(("gaps.tsv".into(), gaps));
    files.push(("clusters.tsv".into(), clusters));
    files.push(("intervals.txt".into(), intervals));
    files.push(("ftis2.tsv".into(), timed_table(&trace.ftis2)));

    for level in &trace.timed {
        files.push((
            format!("ctis{}.tsv", level.k),
            timed_table(&level.candidates),
        ));
        files.push((format!("ftis{}.tsv", level.k), timed_table(&level.frequent)));
    }
    files.push(("patterns.tsv".into(), timed_table(&trace.patterns)));

    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(path)
        })
        .collect()
}
