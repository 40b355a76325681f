//! `tisminer` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 miner/oracle
//! mismatch in `check`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use tisminer_core::io::{
    dump_intermediate, load_dataset, render_report, write_dataset, InputFormat, ReportFormat,
};
use tisminer_core::miner::{mine_with_trace, MiningConfig, MiningTrace};
use tisminer_core::oracle::{self, exhaustive_mine, naive_support, OracleConfig};
use tisminer_core::{synth, Dataset, Error, Itemset, MinSupport, Scored, TargetSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tisminer",
    version,
    about = "Mine target-oriented sequential patterns with time-intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Mine patterns that lead up to a target itemset.
    Mine {
        #[arg(long)]
        input: PathBuf,
        /// csv or jsonl; inferred from the file extension when omitted
        #[arg(long, value_parser = parse_input_format)]
        format: Option<InputFormat>,
        /// Target itemset, items joined by commas
        #[arg(long, value_parser = parse_target)]
        target: Itemset,
        #[arg(long, value_parser = parse_min_supp)]
        min_supp: MinSupport,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        max_length: Option<u64>,
        #[arg(long, default_value = "table", value_parser = parse_report_format)]
        output: ReportFormat,
        /// Write per-level candidate/frequent tables into this directory
        #[arg(long)]
        dump_intermediate: Option<PathBuf>,
        /// Count supports on all cores
        #[arg(long)]
        parallel: bool,
    },
    /// Write a seeded synthetic dataset.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        sequences: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        items: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_events: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_parser = parse_input_format)]
        format: Option<InputFormat>,
    },
    /// Run the miner and the brute-force oracle and compare their output.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_input_format)]
        format: Option<InputFormat>,
        #[arg(long, value_parser = parse_target)]
        target: Itemset,
        #[arg(long, value_parser = parse_min_supp)]
        min_supp: MinSupport,
        /// Longest pattern compared (the oracle allows 2 to 5)
        #[arg(long, default_value_t = oracle::MAX_PATTERN_LENGTH as u64,
              value_parser = clap::value_parser!(u64).range(2..=oracle::MAX_PATTERN_LENGTH as u64))]
        max_length: u64,
    },
}

fn parse_input_format(s: &str) -> Result<InputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_report_format(s: &str) -> Result<ReportFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_min_supp(s: &str) -> Result<MinSupport, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_target(s: &str) -> Result<Itemset, String> {
    Itemset::from_tokens(s.split(',').map(str::trim)).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Data(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_data_error() {
            Failure::Data(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn resolve_format(path: &Path, given: Option<InputFormat>) -> Result<InputFormat, Failure> {
    if let Some(f) = given {
        return Ok(f);
    }
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase)
        .as_deref()
    {
        Some("csv") => Ok(InputFormat::Csv),
        Some("jsonl") | Some("json") => Ok(InputFormat::Jsonl),
        _ => Err(Failure::Usage(format!(
            "cannot infer format of {}; pass --format csv|jsonl",
            path.display()
        ))),
    }
}

fn load(path: &Path, fmt: Option<InputFormat>) -> Result<Dataset, Failure> {
    let fmt = resolve_format(path, fmt)?;
    load_dataset(path, fmt).map_err(|e| match e {
        Error::Io(io) => Failure::Data(format!("{}: {io}", path.display())),
        other => Failure::Data(format!("{}: {other}", path.display())),
    })
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match run(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DATA
        }
        Err(Failure::Mismatch(msg)) => {
            let _ = writeln!(err, "mismatch: {msg}");
            EXIT_MISMATCH
        }
    }
}

fn run(command: Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Mine {
            input,
            format,
            target,
            min_supp,
            max_length,
            output,
            dump_intermediate: dump_dir,
            parallel,
        } => {
            let dataset = load(&input, format)?;
            let mut cfg = MiningConfig::new(min_supp, TargetSpec::new(target));
            cfg.max_length = max_length.map(|k| k as usize);
            cfg.parallel = parallel;
            let trace = mine_with_trace(&dataset, &cfg)?;
            if let Some(dir) = dump_dir {
                dump_intermediate(&trace, &dir)?;
            }
            out.write_all(render_report(&trace.patterns, output).as_bytes())?;
            Ok(())
        }
        Command::Gen {
            sequences,
            items,
            max_events,
            seed,
            out: path,
            format,
        } => {
            let fmt = format
                .or_else(|| resolve_format(&path, None).ok())
                .unwrap_or(InputFormat::Jsonl);
            let d = synth::generate(
                sequences as usize,
                items as usize,
                max_events as usize,
                seed,
            );
            std::fs::write(&path, write_dataset(&d, fmt))?;
            writeln!(out, "wrote {} sequences to {}", d.n(), path.display())?;
            Ok(())
        }
        Command::Check {
            input,
            format,
            target,
            min_supp,
            max_length,
        } => {
            let dataset = load(&input, format)?;
            oracle::check_size(&dataset)?;
            let mut cfg = MiningConfig::new(min_supp, TargetSpec::new(target.clone()));
            cfg.max_length = Some(max_length as usize);
            let ocfg = OracleConfig::new(min_supp, target, max_length as usize)?;
            check(&dataset, &cfg, &ocfg, out)
        }
    }
}

fn check(
    dataset: &Dataset,
    cfg: &MiningConfig,
    ocfg: &OracleConfig,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let (trace, expected) = match (
        mine_with_trace(dataset, cfg),
        exhaustive_mine(dataset, ocfg),
    ) {
        (Ok(t), Ok(o)) => (t, o),
        (Err(Error::EmptyResult(a)), Err(Error::EmptyResult(_))) => {
            writeln!(out, "ok: no sequence contains {a} (miner and oracle agree)")?;
            return Ok(());
        }
        (Err(e), _) | (_, Err(e)) => return Err(e.into()),
    };
    let mut problems = pattern_differences(&trace.patterns, &expected);
    let checked = support_differences(&trace, &mut problems)?;
    if !problems.is_empty() {
        return Err(Failure::Mismatch(problems.join("\n")));
    }
    writeln!(
        out,
        "ok: {} patterns match, {checked} candidate supports match",
        expected.len()
    )?;
    Ok(())
}

fn pattern_differences(mined: &[Scored], expected: &[Scored]) -> Vec<String> {
    let mut problems = Vec::new();
    for (p, s) in mined {
        match expected.iter().find(|(q, _)| q == p) {
            None => problems.push(format!("miner only: {p} {s}")),
            Some((_, t)) if t != s => {
                problems.push(format!("support differs: {p} miner {s} oracle {t}"))
            }
            _ => {}
        }
    }
    for (q, t) in expected {
        if !mined.iter().any(|(p, _)| p == q) {
            problems.push(format!("oracle only: {q} {t}"));
        }
    }
    problems
}

fn support_differences(trace: &MiningTrace, problems: &mut Vec<String>) -> Result<usize, Failure> {
    let queried = trace
        .plain
        .iter()
        .chain(&trace.timed)
        .flat_map(|l| l.candidates.iter())
        .chain(&trace.ftis2);
    let mut checked = 0;
    for (p, s) in queried {
        let naive = naive_support(&trace.working, p)?;
        if naive != *s {
            problems.push(format!("candidate {p}: miner {s} oracle {naive}"));
        }
        checked += 1;
    }
    Ok(checked)
}
