//! Command-line front end. [`run`] is the whole program minus process
//! plumbing, so it can be driven from tests with in-memory streams.

mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypercycle_core::charpoly::{assemble, CanonicalOptions, RenderFormat};
use hypercycle_core::oracle::{brute_trace, BruteOptions};
use hypercycle_core::path::SquaredSource;
use hypercycle_core::trace::{trace_any, trace_dr};
use hypercycle_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_FEASIBILITY: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "hypercycle",
    version,
    about = "Exact characteristic polynomials of r-uniform hypercycles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Factored characteristic polynomial of C_l^(r)
    Compute(ComputeArgs),
    /// Higher-order trace from the closed formula, optionally by enumeration
    Trace(TraceArgs),
    /// Run a verification suite and print a pass/fail table
    Verify(VerifyArgs),
    /// Values of λ^r over the spectrum, with multiplicities
    Spectrum(SpectrumArgs),
}

#[derive(Args, Debug, Clone, Copy)]
struct Shape {
    /// Uniformity (vertices per hyperedge), at least 3
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    r: u32,
    /// Cycle length, at least 3
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    l: u32,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Latex,
    Json,
}

impl From<Format> for RenderFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Text => RenderFormat::Text,
            Format::Latex => RenderFormat::Latex,
            Format::Json => RenderFormat::Json,
        }
    }
}

#[derive(Args, Debug)]
struct ComputeArgs {
    #[command(flatten)]
    shape: Shape,
    /// Move μ-powers into the λ-power and merge repeated blocks
    #[arg(long)]
    canonical: bool,
    /// With --canonical, also split integer roots out of every block
    #[arg(long, requires = "canonical")]
    split_rational_roots: bool,
    /// Append the fully expanded polynomial
    #[arg(long)]
    expand: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the output to this file
    #[arg(long)]
    out: Option<PathBuf>,
    /// Refuse expansion beyond this degree
    #[arg(long, default_value_t = 1_000_000)]
    max_expand_degree: u64,
}

#[derive(Args, Debug)]
struct TraceArgs {
    #[command(flatten)]
    shape: Shape,
    /// Trace of order d·r
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), conflicts_with = "order", required_unless_present = "order")]
    d: Option<u32>,
    /// Trace of arbitrary order
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    order: Option<u64>,
    /// Also enumerate index tuples and compare
    #[arg(long)]
    brute: bool,
    #[command(flatten)]
    brute_opts: BruteArgs,
}

#[derive(Args, Debug, Clone, Copy)]
struct BruteArgs {
    /// Largest number of pattern multisets to enumerate
    #[arg(long, default_value_t = 100_000_000)]
    budget: u64,
    /// Worker threads for enumeration (default: all cores)
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

impl From<BruteArgs> for BruteOptions {
    fn from(a: BruteArgs) -> Self {
        BruteOptions {
            budget: a.budget,
            jobs: a.jobs.map(|j| j as usize),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Identities,
    LemmaMinors,
    Oracle,
    Corollaries,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    r: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(3..))]
    l: Option<u32>,
    /// lemma-minors: random draws per kind
    #[arg(long, default_value_t = 100)]
    draws: u32,
    /// lemma-minors: seed for the draws
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// oracle: compare orders 1..=N
    #[arg(long, default_value_t = 9, value_parser = clap::value_parser!(u64).range(1..))]
    max_order: u64,
    #[command(flatten)]
    brute_opts: BruteArgs,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

/// Why a command did not succeed; decides the exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Verification(String),
    Feasibility(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Verification(_) => EXIT_VERIFICATION,
            Failure::Feasibility(_) => EXIT_FEASIBILITY,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Verification(m) | Failure::Feasibility(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Feasibility(_) => Failure::Feasibility(e.to_string()),
            Error::Parameter(_) | Error::Parse(_) | Error::UnsupportedOrder { .. } => {
                Failure::Usage(e.to_string())
            }
            Error::Dimension(_) | Error::Singular | Error::Consistency(_) => {
                Failure::Verification(e.to_string())
            }
        }
    }
}

/// What a command produced: its stdout payload, and a failure if the run
/// did not succeed (the payload is still printed).
struct Report {
    payload: String,
    failure: Option<Failure>,
}

impl Report {
    fn ok(payload: String) -> Self {
        Report {
            payload,
            failure: None,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Compute(a) => compute(a),
        Command::Trace(a) => trace(a),
        Command::Verify(a) => verify(a),
        Command::Spectrum(a) => spectrum(a),
    };
    let report = match result {
        Ok(report) => report,
        Err(failure) => Report {
            payload: String::new(),
            failure: Some(failure),
        },
    };
    if out.write_all(report.payload.as_bytes()).is_err() {
        let _ = writeln!(err, "error: cannot write to standard output");
        return EXIT_VERIFICATION;
    }
    match report.failure {
        None => EXIT_OK,
        Some(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn compute(a: &ComputeArgs) -> Result<Report, Failure> {
    let mut poly = assemble(a.shape.r, a.shape.l)?;
    if a.canonical {
        poly = poly.canonicalize(CanonicalOptions {
            split_rational_roots: a.split_rational_roots,
        });
    }
    let expanded = if a.expand {
        Some(poly.expand(a.max_expand_degree)?)
    } else {
        None
    };
    let mut payload = poly.render(a.format.into());
    if let Some(e) = expanded {
        match a.format {
            Format::Json => {
                // Splice an extra field into the JSON object.
                let coeffs: Vec<String> = e.coeffs().iter().map(|c| format!("\"{c}\"")).collect();
                let body = payload.trim_end().trim_end_matches('}').trim_end();
                payload = format!(
                    "{body},\n  \"expanded_lambda_coeffs_low_to_high\": [{}]\n}}",
                    coeffs.join(", ")
                );
            }
            Format::Text => payload = format!("{payload}\nexpanded: {}", e.to_string_in("λ")),
            Format::Latex => payload = format!("{payload}\n{}", e.to_string_in("\\lambda")),
        }
    }
    payload.push('\n');
    if let Some(path) = &a.out {
        std::fs::write(path, &payload)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(Report::ok(payload))
}

fn trace(a: &TraceArgs) -> Result<Report, Failure> {
    let (r, l) = (a.shape.r, a.shape.l);
    let (order, formula) = match (a.d, a.order) {
        (Some(d), _) => (d as u64 * r as u64, trace_dr(r, l, d)?),
        (None, Some(order)) => (order, trace_any(r, l, order)?),
        (None, None) => return Err(Failure::Usage("one of --d or --order is required".into())),
    };
    if !a.brute {
        return Ok(Report::ok(format!("formula={formula}\n")));
    }
    let brute = brute_trace(r, l, order, &a.brute_opts.into())?;
    let agree = brute == formula;
    let payload = format!(
        "formula={formula} brute={brute} {}\n",
        if agree { "OK" } else { "MISMATCH" }
    );
    Ok(Report {
        payload,
        failure: (!agree).then(|| Failure::Verification(format!("trace of order {order} disagrees"))),
    })
}

fn verify(a: &VerifyArgs) -> Result<Report, Failure> {
    let (payload, failed) = match a.suite {
        Suite::Identities => suites::identities(a.l)?,
        Suite::LemmaMinors => suites::lemma_minors(a.r, a.l, a.draws, a.seed)?,
        Suite::Oracle => suites::oracle(
            a.r.unwrap_or(3),
            a.l.unwrap_or(3),
            a.max_order,
            &a.brute_opts.into(),
        )?,
        Suite::Corollaries => suites::closed_forms(a.r, a.l)?,
    };
    Ok(Report {
        payload,
        failure: (failed > 0).then(|| Failure::Verification(format!("{failed} check(s) failed"))),
    })
}

fn source_label(s: &SquaredSource) -> String {
    match s {
        SquaredSource::Cycle => "C".to_string(),
        SquaredSource::Path { j, k } => format!("P{j}:{k}"),
    }
}

fn spectrum(a: &SpectrumArgs) -> Result<Report, Failure> {
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    let rep = assemble(a.shape.r, a.shape.l)?.numeric_spectrum_check(a.tol)?;
    let mut payload = format!(
        "# values of λ^{} for C_{}^({}); multiplicity of 0 counts λ = 0\n",
        rep.r, rep.l, rep.r
    );
    payload.push_str(&format!(
        "{:<16} {:>24} {:>24}  sources\n",
        "value", "expected", "found"
    ));
    for v in &rep.values {
        let sources: Vec<String> = v.sources.iter().map(source_label).collect();
        payload.push_str(&format!(
            "{:<16.12} {:>24} {:>24}  {}\n",
            v.value,
            v.expected_multiplicity,
            v.found_multiplicity,
            sources.join(",")
        ));
    }
    for u in &rep.unexplained {
        payload.push_str(&format!(
            "block {}: {} of {} roots unexplained\n",
            u.factor_index + 1,
            u.degree - u.explained,
            u.degree
        ));
    }
    payload.push_str(&format!(
        "spectrum check (tol {:e}): {}\n",
        rep.tol,
        if rep.passed { "PASS" } else { "FAIL" }
    ));
    Ok(Report {
        payload,
        failure: (!rep.passed).then(|| Failure::Verification("spectrum check failed".into())),
    })
}
