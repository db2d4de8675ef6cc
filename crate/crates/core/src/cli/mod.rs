//! The `ktrace` command line: argument parsing, the four commands, and
//! report rendering.
//!
//! Every command builds a [`Report`]. Integers in reports are decimal
//! strings. The process exit status is 0 when every verdict passes, 1 on a
//! mismatch or failed computation, and 2 on a usage or range error.

pub mod cache;
pub mod verify;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::classical::{dc_trace_histogram, Family, GroupContext, DEFAULT_BUDGET};
use crate::dcsum::{dc_histogram_closed, dchat_histogram_closed, TraceHistogram};
use crate::error::{Error, Result};
use crate::gf2r::FieldDescriptor;
use crate::ksum::{kloosterman_table, moments};
use crate::pmi::RecursionSession;

use cache::{histogram_map, HistogramCache};
use verify::{run_suite, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ktrace", version, about = "Kloosterman moments from double-coset codes over GF(2^r)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit a JSON report (the default).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit CSV rows instead (tables and histogram only).
    #[arg(long, global = true)]
    pub csv: bool,

    /// Enumeration worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run a named invariant suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Evaluate the trace-one moment recursion.
    Recursion {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        h: u32,
        /// Also compute T1K^h by direct summation and compare.
        #[arg(long)]
        compare: bool,
    },
    /// Trace histogram of a Bruhat cell P sigma_r P.
    Histogram {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long = "r-coset")]
        r_coset: u32,
        #[arg(long, value_enum, default_value_t = FamilyArg::Orthogonal)]
        family: FamilyArg,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Use the closed-form distribution instead of enumerating.
        #[arg(long)]
        closed_form: bool,
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Kloosterman sums K(a) and their power moments.
    Tables {
        #[command(flatten)]
        field: FieldArgs,
        /// Largest moment exponent.
        #[arg(long, default_value_t = 0)]
        h: u32,
    },
    /// Leading weight-distribution terms C_j and their symplectic analogues.
    Weights {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 4)]
        jmax: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field order, a power of two.
    #[arg(long)]
    pub q: u64,
    /// Hex modulus overriding the built-in one, e.g. 0x19.
    #[arg(long, value_parser = parse_hex)]
    pub modulus: Option<u32>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldDescriptor> {
        let base = FieldDescriptor::of_order(self.q)?;
        match self.modulus {
            Some(m) => FieldDescriptor::with_modulus(base.degree(), m),
            None => Ok(base),
        }
    }
}

fn parse_hex(s: &str) -> std::result::Result<u32, String> {
    let digits = s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")).unwrap_or(s);
    u32::from_str_radix(digits, 16).map_err(|e| format!("invalid hex modulus {s:?}: {e}"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Orthogonal,
    Symplectic,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Orthogonal => Family::Orthogonal,
            FamilyArg::Symplectic => Family::Symplectic,
        }
    }
}

/// A structured report. Apart from `wall_time_ms` it is a deterministic
/// function of the command line.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub params: BTreeMap<String, String>,
    pub results: Value,
    pub verdicts: Vec<verify::Check>,
    pub wall_time_ms: u128,
    #[serde(skip)]
    pub csv: Option<String>,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            params: BTreeMap::new(),
            results: json!({}),
            verdicts: Vec::new(),
            wall_time_ms: 0,
            csv: None,
        }
    }

    fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.insert(key.into(), value.to_string());
        self
    }

    fn field_params(&mut self, field: &FieldDescriptor) -> &mut Self {
        self.param("q", field.order()).param("modulus", format!("{:#x}", field.modulus()))
    }

    fn verdict(&mut self, name: impl Into<String>, expected: impl ToString, actual: impl ToString) {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        let status = if expected == actual { "pass" } else { "fail" };
        self.verdicts.push(verify::Check { suite: self.command, name: name.into(), expected, actual, status });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|c| c.passed())
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn error_code(err: &Error) -> i32 {
    match err {
        Error::UnsupportedDegree(_)
        | Error::InvalidModulus { .. }
        | Error::ElementOutOfRange { .. }
        | Error::OutOfRange(_)
        | Error::Precondition(_) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

fn error_report(command: &str, err: &Error) -> Value {
    json!({ "command": command, "error": err.to_string() })
}

/// Parses `args` (including the program name), runs the command and writes
/// its output to `out` and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let name = command_name(&cli.command);
    if cli.csv && !matches!(cli.command, Command::Tables { .. } | Command::Histogram { .. }) {
        let _ = writeln!(err, "--csv is available for the tables and histogram commands only");
        return EXIT_USAGE;
    }
    let started = Instant::now();
    match execute(&cli) {
        Ok(mut report) => {
            report.wall_time_ms = started.elapsed().as_millis();
            let text = match (&report.csv, cli.csv) {
                (Some(csv), true) => csv.clone(),
                _ => report.to_json() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            report.exit_code()
        }
        Err(e) => {
            let _ = writeln!(err, "{}", serde_json::to_string_pretty(&error_report(name, &e)).expect("json"));
            error_code(&e)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Recursion { .. } => "recursion",
        Command::Histogram { .. } => "histogram",
        Command::Tables { .. } => "tables",
        Command::Weights { .. } => "weights",
    }
}

fn workers(cli: &Cli) -> usize {
    cli.threads
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
        .max(1)
}

pub fn execute(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Verify { suite, budget } => Ok(cmd_verify(*suite, *budget, workers(cli))),
        Command::Recursion { field, n, h, compare } => cmd_recursion(&field.field()?, *n, *h, *compare),
        Command::Histogram { field, n, r_coset, family, budget, closed_form, cache_dir } => cmd_histogram(
            &field.field()?,
            *n,
            *r_coset,
            (*family).into(),
            *budget,
            *closed_form,
            cache_dir.as_ref().map(HistogramCache::new).as_ref(),
            workers(cli),
        ),
        Command::Tables { field, h } => cmd_tables(&field.field()?, *h),
        Command::Weights { field, n, jmax } => cmd_weights(&field.field()?, *n, *jmax),
    }
}

pub fn cmd_verify(suite: Suite, budget: u64, workers: usize) -> Report {
    let mut report = Report::new("verify");
    report.param("suite", suite.name()).param("budget", budget);
    report.verdicts = run_suite(suite, budget, workers);
    let passed = report.verdicts.iter().filter(|c| c.passed()).count();
    report.results = json!({
        "checks": report.verdicts.len().to_string(),
        "passed": passed.to_string(),
    });
    report
}

pub fn cmd_recursion(field: &FieldDescriptor, n: u32, h: u32, compare: bool) -> Result<Report> {
    let mut report = Report::new("recursion");
    report.param("n", n).field_params(field).param("h", h).param("compare", compare);
    let rec = RecursionSession::new(n, field)?.report(h, compare)?;
    let mut results = json!({
        "n": rec.n.to_string(),
        "q": rec.q.to_string(),
        "h": rec.h.to_string(),
        "d_values": rec.d_values.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        "t1k_recursive": rec.t1k_recursive.to_string(),
    });
    if let (Some(direct), Some(matched)) = (&rec.t1k_direct, rec.verdict) {
        results["t1k_direct"] = json!(direct.to_string());
        results["match"] = json!(matched);
        report.verdict(format!("T1K^{h} recursion vs direct sum"), direct, &rec.t1k_recursive);
    }
    report.results = results;
    Ok(report)
}

fn closed_form_histogram(field: &FieldDescriptor, n: u32, r: u32, family: Family) -> Option<Result<TraceHistogram>> {
    if n.is_multiple_of(2) || r + 1 != n {
        return None;
    }
    Some(match family {
        Family::Orthogonal => dc_histogram_closed(n, field),
        Family::Symplectic => dchat_histogram_closed(n, field),
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_histogram(
    field: &FieldDescriptor,
    n: u32,
    r: u32,
    family: Family,
    budget: u64,
    closed_form: bool,
    cache: Option<&HistogramCache>,
    workers: usize,
) -> Result<Report> {
    let mut report = Report::new("histogram");
    report
        .param("n", n)
        .param("r_coset", r)
        .param("family", family.name())
        .field_params(field)
        .param("budget", budget)
        .param("closed_form", closed_form);
    if r > n {
        return Err(Error::OutOfRange(format!("r = {r} exceeds n = {n}")));
    }
    let closed = closed_form_histogram(field, n, r, family).transpose()?;
    let (primary, source, enumerated) = if closed_form {
        let h = closed.clone().ok_or_else(|| {
            Error::Precondition(format!("no closed form for r = {r} at n = {n}; it exists only for odd n and r = n - 1"))
        })?;
        (h, "closed_form", None)
    } else {
        let (h, source) = match cache.and_then(|c| c.load(family, n, r, field)) {
            Some(h) => (h, "cache"),
            None => {
                let ctx = GroupContext::new(n as usize, *field, family)?;
                let h = dc_trace_histogram(&ctx, r as usize, budget, workers)?;
                if let Some(c) = cache {
                    c.store(family, n, r, &h)?;
                }
                (h, "enumeration")
            }
        };
        (h.clone(), source, Some(h))
    };
    if let (Some(e), Some(c)) = (&enumerated, &closed) {
        for (beta, count) in e.iter() {
            report.verdict(format!("count at beta = {}", beta.bits()), c.count(beta), count);
        }
    }
    report.results = json!({
        "source": source,
        "total": primary.total().to_string(),
        "histogram": histogram_map(&primary),
    });
    report.csv = Some(
        std::iter::once("beta_bits,count".to_string())
            .chain(primary.iter().map(|(b, c)| format!("{},{c}", b.bits())))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    );
    Ok(report)
}

/// Largest field order accepted by `tables`.
pub const TABLES_MAX_Q: u32 = 1 << 10;

pub fn cmd_tables(field: &FieldDescriptor, hmax: u32) -> Result<Report> {
    if field.order() > TABLES_MAX_Q {
        return Err(Error::OutOfRange(format!("q = {} exceeds {TABLES_MAX_Q}", field.order())));
    }
    let mut report = Report::new("tables");
    report.field_params(field).param("h", hmax);
    let table = kloosterman_table(field);
    let rows: Vec<Value> = table
        .iter()
        .map(|(a, k)| json!({ "a_bits": a.bits().to_string(), "trace": a.trace().to_string(), "K": k.to_string() }))
        .collect();
    let moment_rows: Vec<Value> = (0..=hmax)
        .map(|h| {
            let m = moments(field, h);
            json!({ "h": h.to_string(), "MK": m.mk.to_string(), "T0K": m.t0k.to_string(), "T1K": m.t1k.to_string() })
        })
        .collect();
    report.results = json!({ "kloosterman": rows, "moments": moment_rows });
    report.csv = Some(
        std::iter::once("a_bits,trace,K".to_string())
            .chain(table.iter().map(|(a, k)| format!("{},{},{k}", a.bits(), a.trace())))
            .collect::<Vec<_>>()
            .join("\n")
            + "\n",
    );
    Ok(report)
}

pub fn cmd_weights(field: &FieldDescriptor, n: u32, jmax: usize) -> Result<Report> {
    let mut report = Report::new("weights");
    report.param("n", n).field_params(field).param("jmax", jmax);
    let c = crate::wcode::weight_prefix_thm_o(n, field, jmax)?;
    let chat = crate::wcode::weight_prefix_symplectic(n, field, jmax)?;
    let cs = crate::dcsum::coefs(n, field)?;
    let strings = |v: &[num_bigint::BigUint]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    report.results = json!({
        "length": cs.n_total.to_string(),
        "c": strings(&c.values),
        "c_hat": strings(&chat.values),
    });
    Ok(report)
}
