//! Command-line front end: argument parsing, text reports and exit codes.

pub mod json;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use uclasses::analyzer::analyze;
use uclasses::bruteforce::{enumerate_classes, verify_families, Options};
use uclasses::classifier::classify;
use uclasses::report::{family_table, reference_class_count, render_family_table};
use uclasses::rings::{prime_power, GaloisField};
use uclasses::root_system::{RootKind, RootSystem};
use uclasses::Error;

pub use json::ClassifyReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const GRAMMAR: &str = "usage:
  uclass roots <T> <r>
  uclass classify <T> <r> <p> [--analyze] [--json PATH]
  uclass bruteforce <T> <r> <q> [--profile]
  uclass verify <T> <r> <p> --q LIST
  uclass tables [--type T]
<T> is one of A, B, C, D, G; --json - writes to standard output.";

#[derive(Debug, Parser)]
#[command(name = "uclass", about = "Conjugacy classes of maximal unipotent subgroups of Chevalley groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the enumeration of the positive roots.
    Roots { kind: String, rank: usize },
    /// Parameterize the conjugacy classes in characteristic p.
    Classify {
        kind: String,
        rank: usize,
        p: u64,
        /// Count the classes in each family.
        #[arg(long)]
        analyze: bool,
        /// Write the report as JSON to PATH (`-` for standard output).
        #[arg(long, value_name = "PATH")]
        json: Option<String>,
    },
    /// Enumerate the conjugacy classes of U(q) directly.
    Bruteforce {
        kind: String,
        rank: usize,
        q: u64,
        /// Report element and timing statistics.
        #[arg(long)]
        profile: bool,
    },
    /// Check the parameterization against enumeration for each q.
    Verify {
        kind: String,
        rank: usize,
        p: u64,
        /// Comma-separated powers of p.
        #[arg(long, value_delimiter = ',', required = true)]
        q: Vec<u64>,
    },
    /// Print the family tables of B2, G2, B3 and C3, or of one type.
    Tables {
        #[arg(long = "type", value_name = "T")]
        kind: Option<String>,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<String, Failure>;

fn root_system(kind: &str, rank: usize) -> Result<Arc<RootSystem>, Failure> {
    let kind: RootKind = kind.parse()?;
    Ok(Arc::new(RootSystem::new(kind, rank)?))
}

/// Parses a label such as `B3`.
fn root_system_label(label: &str) -> Result<Arc<RootSystem>, Failure> {
    let split = label.find(|c: char| c.is_ascii_digit()).unwrap_or(label.len());
    let rank = label[split..]
        .parse()
        .map_err(|_| Failure::Usage(format!("invalid type {label:?}")))?;
    root_system(&label[..split], rank)
}

fn roots(kind: &str, rank: usize) -> Outcome {
    Ok(root_system(kind, rank)?.enumeration_table())
}

fn classify_cmd(kind: &str, rank: usize, p: u64, with_analysis: bool, json: Option<&str>) -> Outcome {
    let rs = root_system(kind, rank)?;
    let cl = classify(rs.clone(), p)?;
    let analysis = with_analysis.then(|| analyze(&cl));
    let report = ClassifyReport::new(&cl, analysis.as_ref());
    let mut out = String::new();
    if let Some(path) = json {
        let text = serde_json::to_string_pretty(&report).expect("reports serialize") + "\n";
        if path == "-" {
            return Ok(text);
        }
        std::fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {path}: {e}")))?;
    }
    writeln!(out, "{} p={}: {} families", rs.label(), p, report.families.len()).unwrap();
    for f in &report.families {
        match (&f.count_poly_text, &f.centralizer, &f.manual) {
            (Some(count), Some(z), _) => writeln!(out, "{} | {count} | {z}", f.representative).unwrap(),
            (_, _, Some(reason)) => writeln!(out, "{} | manual: {reason}", f.representative).unwrap(),
            _ => writeln!(out, "{}", f.representative).unwrap(),
        }
        for (j, g) in &f.residuals {
            writeln!(out, "    g_{j} = {g}").unwrap();
        }
    }
    if let Some(k) = &report.k_poly_text {
        writeln!(out, "k(U) = {k}").unwrap();
    }
    Ok(out)
}

fn bruteforce_cmd(kind: &str, rank: usize, q: u64, profile: bool) -> Outcome {
    let rs = root_system(kind, rank)?;
    let bf = enumerate_classes(rs.clone(), q, Options::default())?;
    let mut histogram: BTreeMap<u64, (usize, u64)> = BTreeMap::new();
    for c in &bf.classes {
        let e = histogram.entry(c.centralizer).or_default();
        e.0 += 1;
        e.1 += c.size;
    }
    let mut out = String::new();
    writeln!(out, "{} q={}: {} classes", rs.label(), q, bf.class_count()).unwrap();
    writeln!(out, "centralizer | classes | elements").unwrap();
    for (z, (n, elements)) in &histogram {
        writeln!(out, "{z} | {n} | {elements}").unwrap();
    }
    if profile {
        let p = &bf.profile;
        writeln!(out, "elements: {}", p.elements).unwrap();
        writeln!(out, "conjugations: {}", p.conjugations).unwrap();
        writeln!(out, "orbit time: {:.3}s", p.orbit_time.as_secs_f64()).unwrap();
        writeln!(out, "centralizer time: {:.3}s", p.centralizer_time.as_secs_f64()).unwrap();
        writeln!(out, "parallel: {}", p.parallel).unwrap();
    }
    Ok(out)
}

fn verify_cmd(kind: &str, rank: usize, p: u64, qs: &[u64]) -> Outcome {
    let rs = root_system(kind, rank)?;
    for &q in qs {
        if prime_power(q).map(|(r, _)| r) != Some(p) {
            return Err(Failure::Usage(format!("{q} is not a power of {p}")));
        }
        GaloisField::with_order(q)?;
    }
    let cl = classify(rs.clone(), p)?;
    let analysis = analyze(&cl);
    let total = analysis.total()?;
    let reference = reference_class_count(&rs, p);
    let mut out = String::new();
    let mut failures = vec![];
    writeln!(out, "{} p={}: k(U) = {total}", rs.label(), p).unwrap();
    match &reference {
        Some(r) if r != &total => failures.push(format!("k(U) differs from the known polynomial {r}")),
        Some(_) => writeln!(out, "agrees with the known polynomial").unwrap(),
        None => {}
    }
    if analysis.mass_formula_holds() != Ok(true) {
        failures.push("class equation fails".to_string());
    }
    for &q in qs {
        let report = verify_families(&cl, &analysis, q, Options::default())?;
        let expected = total.eval_q(q);
        let status = if report.passed() && report.classes as i128 == expected { "ok" } else { "MISMATCH" };
        writeln!(
            out,
            "q={q}: {} classes, polynomial gives {expected}, {} families checked: {status}",
            report.classes,
            report.families.len()
        )
        .unwrap();
        if report.classes as i128 != expected {
            failures.push(format!("q={q}: {} classes, polynomial gives {expected}", report.classes));
        }
        failures.extend(report.failures().into_iter().map(|f| format!("q={q}: {f}")));
    }
    if failures.is_empty() {
        Ok(out)
    } else {
        for f in &failures {
            writeln!(out, "mismatch: {f}").unwrap();
        }
        Err(Failure::Mismatch(out))
    }
}

fn tables_cmd(kind: Option<&str>) -> Outcome {
    let systems = match kind {
        Some(label) => vec![root_system_label(label)?],
        None => ["B2", "G2", "B3", "C3"]
            .iter()
            .map(|l| root_system_label(l))
            .collect::<Result<_, _>>()?,
    };
    let mut blocks = vec![];
    for rs in systems {
        let rows = family_table(rs.clone())?;
        blocks.push(render_family_table(&rs, &rows));
    }
    Ok(blocks.join("\n"))
}

/// Runs one command line (including the program name) and returns the
/// exit code, writing reports to standard output and errors to standard
/// error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return EXIT_OK;
        }
        Err(e) => {
            eprintln!("error: {}", e.kind());
            eprintln!("{GRAMMAR}");
            return EXIT_USAGE;
        }
    };
    let outcome = match &cli.command {
        Command::Roots { kind, rank } => roots(kind, *rank),
        Command::Classify { kind, rank, p, analyze, json } => classify_cmd(kind, *rank, *p, *analyze, json.as_deref()),
        Command::Bruteforce { kind, rank, q, profile } => bruteforce_cmd(kind, *rank, *q, *profile),
        Command::Verify { kind, rank, p, q } => verify_cmd(kind, *rank, *p, q),
        Command::Tables { kind } => tables_cmd(kind.as_deref()),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            EXIT_OK
        }
        Err(Failure::Mismatch(text)) => {
            print!("{text}");
            EXIT_MISMATCH
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("{GRAMMAR}");
            EXIT_USAGE
        }
    }
}
