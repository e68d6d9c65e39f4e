//! `superext` command line: enumerate maximal linked systems, build and
//! analyze superextension tables, check certificates and run the
//! verification suites.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use superext_core::analysis::{check_two_sided_ideal, is_isomorphism, isomorphic, AnalysisReport};
use superext_core::checkers::{check_lemma41, check_prop45_all, CertificateFile, Lemma41Verdict};
use superext_core::hyperspace::{enumerate_inclusion_hyperspaces, enumerate_mls};
use superext_core::suite::verify_suite;
use superext_core::superext::DEFAULT_SEED;
use superext_core::{parse_spec, CayleyTable, Error, FiniteSemigroup, LambdaTable, SetFamily, Subset};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "superext", version, about = "Superextensions of finite groups")]
pub struct Cli {
    /// Cap on worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write output to this file instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output format; allowed values depend on the subcommand.
    #[arg(long, short, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all maximal linked systems on n points.
    Enumerate {
        #[arg(long)]
        n: usize,
    },
    /// List all inclusion hyperspaces on n points.
    Hyperspaces {
        #[arg(long)]
        n: usize,
    },
    /// Build the superextension table of a group.
    Table {
        #[arg(long)]
        group: String,
    },
    /// Structural report for a group or, with `lambda:<spec>`, its superextension.
    Analyze {
        #[arg(long)]
        group: String,
        /// Comma-separated items: center,idempotents,cancelable,zeros,ideals,commutative
        #[arg(long, value_delimiter = ',', default_value = "center,idempotents,cancelable,zeros,ideals,commutative")]
        report: Vec<ReportItem>,
    },
    /// Search for an isomorphism between two tables.
    Iso {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Check a non-centrality certificate file.
    #[command(name = "check-l41")]
    CheckL41 {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Check that systems supported on Y commute with principal ultrafilters on Z.
    #[command(name = "check-p45")]
    CheckP45 {
        #[arg(long)]
        group: String,
        /// Set such as `0,1,2`, `{0,1}` or `all`.
        #[arg(long)]
        y: String,
        #[arg(long)]
        z: String,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportItem {
    Center,
    Idempotents,
    Cancelable,
    Zeros,
    Ideals,
    Commutative,
}

/// Result of a subcommand: rendered output plus pass/fail.
struct Rendered {
    body: String,
    passed: bool,
}

impl Rendered {
    fn ok(body: String) -> Self {
        Rendered { body, passed: true }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Core(e.into())
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    if let Some(k) = cli.threads {
        // the global pool can only be configured once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match dispatch(&cli) {
        Ok(rendered) => {
            let mut body = rendered.body;
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, body.as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => out.write_all(body.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(msg) = written {
                let _ = writeln!(err, "error: {msg}");
                return EXIT_USAGE;
            }
            if rendered.passed {
                EXIT_OK
            } else {
                EXIT_FAIL
            }
        }
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nRun `superext --help` for the command grammar.");
            EXIT_USAGE
        }
        Err(CliError::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            if matches!(e, Error::Spec { .. }) {
                let _ = writeln!(
                    err,
                    "group specs: C<n> | S3 | <spec>x<spec> | <spec>e | (<spec>) | file:<path>"
                );
            }
            EXIT_USAGE
        }
    }
}

fn format_for(cli: &Cli, allowed: &[Format], default: Format, command: &str) -> Result<Format, CliError> {
    let f = cli.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        let names: Vec<String> = allowed
            .iter()
            .map(|a| format!("{a:?}").to_lowercase())
            .collect();
        Err(CliError::Usage(format!(
            "`{command}` supports --format {}",
            names.join("|")
        )))
    }
}

fn dispatch(cli: &Cli) -> Result<Rendered, CliError> {
    use Format::*;
    match &cli.command {
        Command::Enumerate { n } => {
            let fmt = format_for(cli, &[Json, Csv, Text], Text, "enumerate")?;
            let families: Vec<SetFamily> = enumerate_mls(*n)?
                .into_iter()
                .map(|m| m.into_family())
                .collect();
            Ok(Rendered::ok(render_families(&families, fmt)?))
        }
        Command::Hyperspaces { n } => {
            let fmt = format_for(cli, &[Json, Csv, Text], Text, "hyperspaces")?;
            let families = enumerate_inclusion_hyperspaces(*n)?;
            Ok(Rendered::ok(render_families(&families, fmt)?))
        }
        Command::Table { group } => {
            let fmt = format_for(cli, &[Json, Dot, Text], Json, "table")?;
            let g = parse_spec(strip_lambda(group))?;
            let t = LambdaTable::build(&g, cli.seed)?;
            let body = match fmt {
                Json => serde_json::to_string(&t.to_json())?,
                Dot => t.to_dot(),
                _ => render_table_text(&t),
            };
            Ok(Rendered::ok(body))
        }
        Command::Analyze { group, report } => {
            let fmt = format_for(cli, &[Json, Text], Text, "analyze")?;
            analyze(group, report, fmt, cli.seed)
        }
        Command::Iso { a, b } => {
            let fmt = format_for(cli, &[Json, Text], Text, "iso")?;
            iso(a, b, fmt, cli.seed)
        }
        Command::CheckL41 { cert } => {
            let fmt = format_for(cli, &[Json, Text], Text, "check-l41")?;
            let (g, cert) = CertificateFile::load(cert)?;
            let verdict = check_lemma41(&cert, &g)?;
            let passed = verdict.is_valid();
            let body = match fmt {
                Json => serde_json::to_string_pretty(&verdict)?,
                _ => render_l41(&verdict),
            };
            Ok(Rendered { body, passed })
        }
        Command::CheckP45 { group, y, z } => {
            let fmt = format_for(cli, &[Json, Text], Text, "check-p45")?;
            let g = parse_spec(group)?;
            let y = parse_set(y, g.order())?;
            let z = parse_set(z, g.order())?;
            let summary = check_prop45_all(&g, y, z)?;
            let passed = summary.failures.is_empty();
            let body = match fmt {
                Json => serde_json::to_string_pretty(&summary)?,
                _ => {
                    let mut s = format!(
                        "CLAIM prop45: {} ({} pairs checked, Y = {y}, Z = {z})\n",
                        if passed { "PASS" } else { "FAIL" },
                        summary.pairs_checked
                    );
                    for (l, u) in &summary.failures {
                        let _ = writeln!(s, "  {l} does not commute with <{{{u}}}>");
                    }
                    s
                }
            };
            Ok(Rendered { body, passed })
        }
        Command::Verify { suite } => {
            let fmt = format_for(cli, &[Json, Text], Text, "verify")?;
            let report = verify_suite(suite, cli.seed)?;
            let body = match fmt {
                Json => serde_json::to_string_pretty(&report)?,
                _ => report.to_string(),
            };
            Ok(Rendered {
                body,
                passed: report.passed(),
            })
        }
    }
}

fn strip_lambda(spec: &str) -> &str {
    spec.strip_prefix("lambda:").unwrap_or(spec)
}

fn parse_set(text: &str, n: usize) -> Result<Subset, CliError> {
    if text.trim() == "all" {
        return Ok(Subset::full(n));
    }
    let s: Subset = text.parse().map_err(CliError::Usage)?;
    if !s.fits(n) {
        return Err(CliError::Core(Error::OutOfGround { subset: s, n }));
    }
    Ok(s)
}

fn render_families(families: &[SetFamily], fmt: Format) -> Result<String, CliError> {
    Ok(match fmt {
        Format::Json => serde_json::to_string(families)?,
        Format::Csv => families
            .iter()
            .map(SetFamily::to_csv_line)
            .collect::<Vec<_>>()
            .join("\n"),
        _ => families
            .iter()
            .enumerate()
            .map(|(i, f)| format!("{i:>7}  {f}"))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

fn render_table_text(t: &LambdaTable) -> String {
    let m = t.order();
    let w = (m.max(1) - 1).to_string().len().max(2);
    let mut s = String::new();
    for (i, e) in t.elements().iter().enumerate() {
        let _ = writeln!(s, "{i:>w$}  {e}");
    }
    s.push('\n');
    let _ = write!(s, "{:>w$} |", "*");
    for b in 0..m {
        let _ = write!(s, " {b:>w$}");
    }
    s.push('\n');
    for a in 0..m {
        let _ = write!(s, "{a:>w$} |");
        for b in 0..m {
            let _ = write!(s, " {:>w$}", t.op(a, b));
        }
        s.push('\n');
    }
    s
}

/// A group or the superextension of a group, chosen by the `lambda:` prefix.
enum Subject {
    Group(FiniteSemigroup),
    Lambda(LambdaTable),
}

impl Subject {
    fn parse(spec: &str, seed: u64) -> Result<Self, CliError> {
        Ok(match spec.strip_prefix("lambda:") {
            Some(inner) => Subject::Lambda(LambdaTable::build(&parse_spec(inner)?, seed)?),
            None => Subject::Group(parse_spec(spec)?),
        })
    }

    fn table(&self) -> &dyn CayleyTable {
        match self {
            Subject::Group(g) => g,
            Subject::Lambda(t) => t,
        }
    }

    fn label(&self, i: usize) -> String {
        match self {
            Subject::Group(g) => g.labels()[i].clone(),
            Subject::Lambda(t) => t.element(i).to_string(),
        }
    }
}

#[derive(Serialize)]
struct AnalyzeJson {
    subject: String,
    #[serde(flatten)]
    report: AnalysisReport,
    /// For superextensions: whether the non-principal elements form a two-sided ideal.
    #[serde(skip_serializing_if = "Option::is_none")]
    nonprincipal_ideal: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elements: Option<Vec<SetFamily>>,
}

fn analyze(spec: &str, items: &[ReportItem], fmt: Format, seed: u64) -> Result<Rendered, CliError> {
    let subject = Subject::parse(spec, seed)?;
    let t = subject.table();
    let report = AnalysisReport::compute(t);
    let nonprincipal_ideal = match &subject {
        Subject::Lambda(l) => {
            let ideal = l.non_principal_indices();
            Some(!ideal.is_empty() && check_two_sided_ideal(l, &ideal).is_ok())
        }
        Subject::Group(_) => None,
    };
    if fmt == Format::Json {
        let elements = match &subject {
            Subject::Lambda(l) => Some(l.elements().iter().map(|e| e.family().clone()).collect()),
            Subject::Group(_) => None,
        };
        let json = AnalyzeJson {
            subject: spec.to_owned(),
            report,
            nonprincipal_ideal,
            elements,
        };
        return Ok(Rendered::ok(serde_json::to_string_pretty(&json)?));
    }
    let set = |v: &[usize]| {
        let inner: Vec<String> = v.iter().map(usize::to_string).collect();
        format!("{{{}}}", inner.join(", "))
    };
    let mut rows: Vec<(&str, String)> = vec![("subject", spec.to_owned()), ("order", report.order.to_string())];
    for item in items {
        match item {
            ReportItem::Commutative => rows.push(("commutative", yes_no(report.is_commutative))),
            ReportItem::Center => rows.push(("center", set(&report.center))),
            ReportItem::Idempotents => rows.push(("idempotents", set(&report.idempotents))),
            ReportItem::Cancelable => {
                rows.push(("left cancelable", set(&report.left_cancelable)));
                rows.push(("right cancelable", set(&report.right_cancelable)));
            }
            ReportItem::Zeros => {
                rows.push(("left zeros", set(&report.left_zeros)));
                rows.push(("right zeros", set(&report.right_zeros)));
            }
            ReportItem::Ideals => {
                let ideals: Vec<String> = report.minimal_left_ideals.iter().map(|l| set(l)).collect();
                rows.push(("minimal left ideals", ideals.join(" ")));
                if let Some(ok) = nonprincipal_ideal {
                    rows.push(("non-principal ideal", yes_no(ok)));
                }
            }
        }
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut body = String::new();
    for (k, v) in rows {
        let _ = writeln!(body, "{k:<width$}  {v}");
    }
    if let Subject::Lambda(l) = &subject {
        body.push_str("\nelements:\n");
        for i in 0..l.order() {
            let _ = writeln!(body, "{i:>6}  {}", subject.label(i));
        }
    }
    Ok(Rendered::ok(body))
}

fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_owned()
}

#[derive(Serialize)]
struct IsoJson<'a> {
    a: &'a str,
    b: &'a str,
    isomorphic: bool,
    bijection: Option<Vec<usize>>,
}

fn iso(a: &str, b: &str, fmt: Format, seed: u64) -> Result<Rendered, CliError> {
    let sa = Subject::parse(a, seed)?;
    let sb = Subject::parse(b, seed)?;
    let found = isomorphic(sa.table(), sb.table())?;
    if let Some(phi) = &found {
        debug_assert!(is_isomorphism(sa.table(), sb.table(), phi));
    }
    let passed = found.is_some();
    let body = match fmt {
        Format::Json => serde_json::to_string_pretty(&IsoJson {
            a,
            b,
            isomorphic: passed,
            bijection: found,
        })?,
        _ => {
            let mut s = format!(
                "CLAIM iso: {} ({a} {} {b})\n",
                if passed { "PASS" } else { "FAIL" },
                if passed { "≅" } else { "≇" }
            );
            if let Some(phi) = &found {
                for (x, &y) in phi.iter().enumerate() {
                    let _ = writeln!(s, "  {x:>3} {:<24} -> {y:>3} {}", sa.label(x), sb.label(y));
                }
            }
            s
        }
    };
    Ok(Rendered { body, passed })
}

fn render_l41(v: &Lemma41Verdict) -> String {
    match v {
        Lemma41Verdict::NotCentral {
            a_times_tee,
            tee_times_a,
            swapped_separation,
        } => format!(
            "CLAIM lemma41: PASS (A is not central)\n  A∘T = {a_times_tee}\n  T∘A = {tee_times_a}\n  \
             separation with TT^-1 in place of T^-1T: {}\n",
            if *swapped_separation { "also holds" } else { "fails" }
        ),
        Lemma41Verdict::ConclusionFailed { product } => format!(
            "CLAIM lemma41: FAIL (conditions hold but A∘T = T∘A = {product})\n"
        ),
        Lemma41Verdict::Invalid { condition, reason } => {
            format!("CLAIM lemma41: FAIL (condition ({condition}) fails: {reason})\n")
        }
    }
}
