//! Command-line front end: argument model, command runners, and the text
//! formats each command emits (with parsers for the machine-readable ones).

use std::fmt::Write as _;

use clap::builder::TypedValueParser as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use csix_core::{
    baseline_no_coding_count, build_schedule, optimal_count, plan_transmissions, run_exchange,
    verify_sweep, ExchangeReport, PlanRecord, ProblemInstance, ScheduleRecord, VerifyCell,
    DEFAULT_PAYLOAD_BITS,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub mod table;

pub use table::{ComparisonTable, TableRow};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] csix_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Human,
    Csv,
    #[value(alias = "record", alias = "json-like-record")]
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "csix", version, about = "Minimal-broadcast channel-state exchange with pairwise XOR coding")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct InstanceArgs {
    /// Number of clients.
    #[arg(long)]
    pub n: usize,
    /// Number of clients (c1..ck) that must learn every packet.
    #[arg(long)]
    pub k: usize,
}

impl InstanceArgs {
    fn instance(&self) -> Result<ProblemInstance, CliError> {
        ProblemInstance::new(self.n, self.k).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum number of transmissions, with the uncoded baseline.
    Optimal(InstanceArgs),
    /// Per-client transmission counts.
    Plan(InstanceArgs),
    /// The coded packets each client sends.
    Schedule(InstanceArgs),
    /// Run the exchange and check every privileged client decodes.
    Simulate {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PAYLOAD_BITS, value_parser = clap::value_parser!(u32).range(1..=65536).map(|v| v as usize))]
        payload_bits: usize,
    },
    /// Coded vs uncoded transmission counts over a grid of (n, k).
    Table {
        #[arg(long, value_delimiter = ',', default_values_t = [4usize, 7, 12, 15])]
        nlist: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 4, 7, 10, 15])]
        klist: Vec<usize>,
    },
    /// Cross-check the closed forms against brute-force oracles.
    Verify {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(2..=20).map(|v| v as usize))]
        nmax: usize,
    },
}

/// What a command wants printed, and how to exit.
#[derive(Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            ..Self::default()
        }
    }
}

/// Runs one command. All flags are validated before anything is computed,
/// and output is only returned whole.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let fmt = cli.format;
    match &cli.command {
        Command::Optimal(args) => Ok(Outcome::ok(render_optimal(&args.instance()?, fmt))),
        Command::Plan(args) => Ok(Outcome::ok(render_plan(&args.instance()?, fmt))),
        Command::Schedule(args) => Ok(Outcome::ok(render_schedule(&args.instance()?, fmt))),
        Command::Simulate {
            instance,
            seed,
            payload_bits,
        } => {
            let instance = instance.instance()?;
            let report = run_exchange(&instance, *seed, *payload_bits)?;
            Ok(simulate_outcome(&report, fmt))
        }
        Command::Table { nlist, klist } => {
            if let Some(n) = nlist.iter().find(|&&n| n < 2) {
                return Err(CliError::Usage(format!("--nlist entries must be at least 2, got {n}")));
            }
            if let Some(k) = klist.iter().find(|&&k| k < 1) {
                return Err(CliError::Usage(format!("--klist entries must be at least 1, got {k}")));
            }
            let table = ComparisonTable::build(nlist, klist);
            Ok(Outcome::ok(table.render(fmt)))
        }
        Command::Verify { nmax } => {
            let cells = verify_sweep(*nmax, optimal_count)?;
            Ok(verify_outcome(&cells, fmt))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalRecord {
    pub n: usize,
    pub k: usize,
    pub coded: usize,
    /// `None` for `k = 1`, where no baseline is defined.
    pub uncoded: Option<usize>,
    pub saved: Option<usize>,
}

impl OptimalRecord {
    pub fn new(instance: &ProblemInstance) -> Self {
        let coded = optimal_count(instance);
        let uncoded = baseline_no_coding_count(instance).ok();
        Self {
            n: instance.n(),
            k: instance.k(),
            coded,
            uncoded,
            saved: uncoded.map(|u| u - coded),
        }
    }

    pub const CSV_HEADER: &'static str = "n,k,coded,uncoded,saved";

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{}\n",
            Self::CSV_HEADER,
            self.n,
            self.k,
            self.coded,
            na(self.uncoded),
            na(self.saved)
        )
    }

    pub fn parse_csv(text: &str) -> Result<Self, String> {
        let mut lines = text.lines();
        if lines.next() != Some(Self::CSV_HEADER) {
            return Err("missing header".into());
        }
        let row = lines.next().ok_or("missing row")?;
        let f: Vec<&str> = row.split(',').collect();
        if f.len() != 5 {
            return Err(format!("expected 5 fields: {row}"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|e| format!("{s}: {e}"));
        Ok(Self {
            n: num(f[0])?,
            k: num(f[1])?,
            coded: num(f[2])?,
            uncoded: parse_na(f[3])?,
            saved: parse_na(f[4])?,
        })
    }
}

pub(crate) fn na(v: Option<usize>) -> String {
    v.map_or_else(|| "NA".to_string(), |v| v.to_string())
}

pub(crate) fn parse_na(s: &str) -> Result<Option<usize>, String> {
    match s.trim() {
        "NA" => Ok(None),
        s => s.parse().map(Some).map_err(|e| format!("{s}: {e}")),
    }
}

pub fn render_optimal(instance: &ProblemInstance, fmt: OutputFormat) -> String {
    let rec = OptimalRecord::new(instance);
    match fmt {
        OutputFormat::Human => {
            let mut out = format!("n={} k={}\ncoded: {}\n", rec.n, rec.k, rec.coded);
            match (rec.uncoded, rec.saved) {
                (Some(u), Some(s)) => {
                    let _ = writeln!(out, "uncoded: {u}\nsaved: {s}");
                }
                _ => out.push_str("uncoded: undefined for k=1\n"),
            }
            out
        }
        OutputFormat::Csv => rec.to_csv(),
        OutputFormat::Json => json_line(&rec),
    }
}

pub fn render_plan(instance: &ProblemInstance, fmt: OutputFormat) -> String {
    let plan = plan_transmissions(instance);
    match fmt {
        OutputFormat::Human => {
            let mut out = String::new();
            for (c, y) in instance.clients().zip(plan.counts()) {
                let _ = writeln!(out, "{c}: {y}");
            }
            let _ = writeln!(out, "total: {}", plan.total());
            out
        }
        OutputFormat::Csv => format!("{}\n", plan.to_csv()),
        OutputFormat::Json => json_line(&plan.to_record(instance)),
    }
}

pub fn parse_plan_record(text: &str) -> Result<PlanRecord, serde_json::Error> {
    serde_json::from_str(text)
}

pub const SCHEDULE_CSV_HEADER: &str = "sender,j,packet";

pub fn render_schedule(instance: &ProblemInstance, fmt: OutputFormat) -> String {
    let schedule = build_schedule(instance);
    match fmt {
        OutputFormat::Human => schedule.to_lines(),
        OutputFormat::Csv => {
            let mut out = format!("{SCHEDULE_CSV_HEADER}\n");
            for e in schedule.entries() {
                let _ = writeln!(out, "{},{},{}", e.sender.index(), e.j, e.vector);
            }
            out
        }
        OutputFormat::Json => json_line(&schedule.to_record()),
    }
}

pub fn parse_schedule_record(text: &str) -> Result<ScheduleRecord, serde_json::Error> {
    serde_json::from_str(text)
}

/// One row of the simulate CSV: instance-level columns repeated per client.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportCsvRow {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub payload_width: usize,
    pub total_transmissions: usize,
    pub success: bool,
    pub client: usize,
    pub privileged: bool,
    pub solved: usize,
    pub received: usize,
    pub redundant: usize,
    pub mismatched: usize,
}

pub const REPORT_CSV_HEADER: &str =
    "n,k,seed,payload_width,total_transmissions,success,client,privileged,solved,received,redundant,mismatched";

pub fn report_to_csv(report: &ExchangeReport) -> String {
    let mut out = format!("{REPORT_CSV_HEADER}\n");
    for c in &report.clients {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            report.n,
            report.k,
            report.seed,
            report.payload_width,
            report.total_transmissions,
            report.success,
            c.client,
            c.privileged,
            c.solved,
            c.received,
            c.redundant,
            c.mismatched
        );
    }
    out
}

pub fn parse_report_csv(text: &str) -> Result<Vec<ReportCsvRow>, String> {
    let mut lines = text.lines();
    if lines.next() != Some(REPORT_CSV_HEADER) {
        return Err("missing header".into());
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 12 {
                return Err(format!("expected 12 fields: {line}"));
            }
            let u = |i: usize| f[i].parse::<usize>().map_err(|e| format!("{}: {e}", f[i]));
            let b = |i: usize| f[i].parse::<bool>().map_err(|e| format!("{}: {e}", f[i]));
            Ok(ReportCsvRow {
                n: u(0)?,
                k: u(1)?,
                seed: f[2].parse().map_err(|e| format!("{}: {e}", f[2]))?,
                payload_width: u(3)?,
                total_transmissions: u(4)?,
                success: b(5)?,
                client: u(6)?,
                privileged: b(7)?,
                solved: u(8)?,
                received: u(9)?,
                redundant: u(10)?,
                mismatched: u(11)?,
            })
        })
        .collect()
}

pub fn parse_report(text: &str) -> Result<ExchangeReport, serde_json::Error> {
    serde_json::from_str(text)
}

pub fn simulate_outcome(report: &ExchangeReport, fmt: OutputFormat) -> Outcome {
    let stdout = match fmt {
        OutputFormat::Human => format!("{report}\n"),
        OutputFormat::Csv => report_to_csv(report),
        OutputFormat::Json => json_line(report),
    };
    let mut outcome = Outcome::ok(stdout);
    if !report.success {
        outcome.code = 1;
        if let Some(f) = &report.first_failure {
            let missing: Vec<String> = f.missing.iter().map(ToString::to_string).collect();
            let wrong: Vec<String> = f.mismatched.iter().map(ToString::to_string).collect();
            outcome.stderr = format!(
                "decoding failed at c{}: missing [{}] wrong [{}]\n",
                f.client,
                missing.join(" "),
                wrong.join(" ")
            );
        }
    }
    outcome
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub passed: bool,
    pub cells: Vec<VerifyCell>,
    pub failures: Vec<(usize, usize)>,
}

pub const VERIFY_CSV_HEADER: &str = "n,k,brute_force,feasibility,decodable,passed";

fn tier(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "skip",
    }
}

pub fn verify_outcome(cells: &[VerifyCell], fmt: OutputFormat) -> Outcome {
    let failures: Vec<(usize, usize)> = cells.iter().filter(|c| !c.passed()).map(|c| (c.n, c.k)).collect();
    let stdout = match fmt {
        OutputFormat::Human => {
            let n_max = cells.iter().map(|c| c.n).max().unwrap_or(2);
            let mut out = String::from("n\\k");
            for k in 1..=n_max {
                let _ = write!(out, " {k:>4}");
            }
            out.push('\n');
            for n in 2..=n_max {
                let _ = write!(out, "{n:<3}");
                for c in cells.iter().filter(|c| c.n == n) {
                    let _ = write!(out, " {:>4}", if c.passed() { "ok" } else { "FAIL" });
                }
                out.push('\n');
            }
            if failures.is_empty() {
                let _ = writeln!(out, "all {} instances pass", cells.len());
            } else {
                let list: Vec<String> = failures.iter().map(|(n, k)| format!("({n},{k})")).collect();
                let _ = writeln!(out, "failing: {}", list.join(" "));
            }
            out
        }
        OutputFormat::Csv => {
            let mut out = format!("{VERIFY_CSV_HEADER}\n");
            for c in cells {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    c.n,
                    c.k,
                    tier(c.brute_force),
                    tier(c.feasibility),
                    tier(Some(c.decodable)),
                    c.passed()
                );
            }
            out
        }
        OutputFormat::Json => json_line(&VerifyRecord {
            passed: failures.is_empty(),
            cells: cells.to_vec(),
            failures: failures.clone(),
        }),
    };
    let mut outcome = Outcome::ok(stdout);
    if !failures.is_empty() {
        outcome.code = 1;
        let list: Vec<String> = failures.iter().map(|(n, k)| format!("({n},{k})")).collect();
        outcome.stderr = format!("verification failed for {}\n", list.join(" "));
    }
    outcome
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("plain data serializes");
    s.push('\n');
    s
}
