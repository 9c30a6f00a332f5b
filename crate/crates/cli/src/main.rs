mod report;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde::Serialize;

use cubic_codes::cubic::{
    build_cubic, classify, count_cubic_pairs, enumerate_cubic, parse_quaternary_file, ClassifyOptions, CubicPair,
};
use cubic_codes::gf2::{format_code_file, parse_code_file};
use cubic_codes::paut::{are_equivalent_with, paut_with, Equivalence, PautOptions, WordSet};
use cubic_codes::regression::{self, Category, RegressionOptions};
use cubic_codes::{Error, LinearCode};

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(name = "cubic", version, about = "Binary codes with a fixed-point-free automorphism of order 3")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct SearchArgs {
    /// Only codewords up to this weight drive refinement.
    #[arg(long)]
    weight_cap: Option<usize>,
    /// Give up after this many seconds; results are then marked inexact.
    #[arg(long, env = "CUBIC_TIMEOUT")]
    timeout: Option<f64>,
}

impl SearchArgs {
    fn options(self) -> PautOptions {
        PautOptions {
            words: self.weight_cap.map_or(WordSet::Auto, WordSet::WeightCap),
            timeout: self.timeout.map(Duration::from_secs_f64),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decomposition, canonical form, involutions and PAut in one report.
    Analyze {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Permutation automorphism group.
    Paut {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Fixed and even-block subcodes and the orbit-weight class.
    Decompose { file: PathBuf },
    /// Canonical [E|M] form of the even-block subcode.
    Canonical { file: PathBuf },
    /// Explicit involution constructions.
    Involutions { file: PathBuf },
    /// Builds the cubic code of a binary code B and a quaternary code Q.
    Construct {
        #[arg(short = 'B', long = "binary")]
        b: PathBuf,
        #[arg(short = 'Q', long = "quaternary")]
        q: PathBuf,
    },
    /// Enumerates and classifies all cubic codes of a length and dimension.
    Enumerate {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        jobs: Option<usize>,
        /// Refuse when the number of (B, Q) pairs exceeds this.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Exact number of (B, Q) pairs.
    Count {
        #[arg(long)]
        length: usize,
        #[arg(long)]
        dim: usize,
    },
    /// Permutation equivalence of two codes.
    Equivalent {
        first: PathBuf,
        second: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Runs the bundled reference checks.
    VerifyPaper {
        /// Restrict to categories: fixtures, sigma, involutions, canonical, paut, count, census.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Include the length-15 census.
        #[arg(long)]
        full: bool,
        /// Read fixtures from this directory instead of the bundled copies.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        search: SearchArgs,
    },
}

fn read_code(path: &Path) -> anyhow::Result<LinearCode> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let file = parse_code_file(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(file.code())
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce(&T) -> String) -> anyhow::Result<()> {
    let out = if json { serde_json::to_string_pretty(value)? + "\n" } else { text(value) };
    match std::io::stdout().lock().write_all(out.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn lines(rows: &[String], indent: &str) -> String {
    rows.iter().map(|r| format!("{indent}{r}\n")).collect()
}

fn paut_text(r: &report::PautReport) -> String {
    let mut s = format!("order: {}{}\n", r.order, if r.exact { "" } else { " (lower bound, search timed out)" });
    s += &format!("structure: {}\n", r.fingerprint);
    s += &format!("generators:\n{}", lines(&r.generators, "  "));
    s += &format!("elapsed: {} ms\n", r.elapsed_ms);
    s
}

fn decompose_text(d: &report::DecomposeReport) -> String {
    format!(
        "[{}, {}] code {}\nfixed subcode: dimension {}\n{}even subcode: dimension {}\n{}orbit weights: {:?} over {} orbits\n",
        d.code.n,
        d.code.k,
        d.code.hash,
        d.fixed.dim,
        lines(&d.fixed.rows, "  "),
        d.even.dim,
        lines(&d.even.rows, "  "),
        d.orbit_class,
        d.orbits
    )
}

fn canonical_text(c: &report::CanonicalReport) -> String {
    let hyp = match &c.hypothesis {
        cubic_codes::canonical::HypothesisClass::A => "A".to_string(),
        cubic_codes::canonical::HypothesisClass::B { column, r, s } => {
            format!("B (M-column {column}, row pairs {r} and {s})")
        }
    };
    format!(
        "k = {}, m = {}\ngamma: {}\nhypothesis: {hyp}\ngrid:\n{}matrix:\n{}",
        c.k,
        c.m,
        c.gamma,
        lines(&c.grid, "  "),
        lines(&c.matrix, "  ")
    )
}

fn involutions_text(r: &report::InvolutionsReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        match (e.outcome.permutation(), e.outcome.construction()) {
            (Some(p), Some(c)) => {
                s += &format!(
                    "{}: {p} via {} (automorphism: {}, inverts sigma: {})\n",
                    e.recipe,
                    c.as_str(),
                    e.automorphism.unwrap_or(false),
                    e.outcome.conjugates_sigma_to_inverse
                );
            }
            _ => {
                let why = e.outcome.reason().map(ToString::to_string).unwrap_or_default();
                s += &format!("{}: not applicable ({why})\n", e.recipe);
            }
        }
    }
    if let Some(a) = &r.hypothesis_a {
        s += &format!("hypothesis-a: {} (automorphism: {})\n", a.permutation, a.automorphism);
    }
    s
}

fn stage_text<T>(name: &str, stage: &report::Stage<T>, f: impl Fn(&T) -> String) -> String {
    match stage {
        report::Stage::Done(v) => format!("== {name}\n{}", f(v)),
        report::Stage::Failed { error } => format!("== {name}\nskipped: {error}\n"),
    }
}

fn analyze_text(a: &report::AnalysisReport) -> String {
    let mut s = format!(
        "[{}, {}] code {}\nsigma-invariant: {}\nself-dual: {}\nself-orthogonal: {}\n",
        a.code.n, a.code.k, a.code.hash, a.sigma_invariant, a.self_dual, a.self_orthogonal
    );
    s += &stage_text("decomposition", &a.decomposition, decompose_text);
    s += &stage_text("canonical form", &a.canonical, canonical_text);
    s += &stage_text("involutions", &a.involutions, involutions_text);
    s += &stage_text("automorphism group", &a.paut, paut_text);
    s
}

#[derive(Serialize)]
struct CountReport {
    length: usize,
    dim: usize,
    pairs: String,
}

#[derive(Serialize)]
struct EquivalenceReport {
    /// `None` when the search timed out.
    equivalent: Option<bool>,
    witness: Option<String>,
}

#[derive(Serialize)]
struct VerifyReport {
    rows: Vec<regression::CheckRow>,
    passed: usize,
    failed: usize,
    elapsed_ms: u128,
}

fn blocks_of(length: usize) -> anyhow::Result<usize> {
    if !length.is_multiple_of(3) {
        return Err(Error::LengthNotMultipleOfThree(length).into());
    }
    Ok(length / 3)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let json = cli.json;
    match cli.command {
        Command::Analyze { file, search } => {
            let c = read_code(&file)?;
            let a = report::analyze(&c, &search.options())?;
            emit(json, &a, analyze_text)?;
            let timed_out = a.paut.value().is_some_and(|p| !p.exact);
            Ok(if timed_out { EXIT_GUARD } else { 0 })
        }
        Command::Paut { file, search } => {
            let c = read_code(&file)?;
            let r = report::PautReport::from_result(&paut_with(&c, &search.options())?);
            emit(json, &r, paut_text)?;
            Ok(if r.exact { 0 } else { EXIT_GUARD })
        }
        Command::Decompose { file } => {
            emit(json, &report::decompose(&read_code(&file)?)?, decompose_text)?;
            Ok(0)
        }
        Command::Canonical { file } => {
            emit(json, &report::canonical(&read_code(&file)?)?, canonical_text)?;
            Ok(0)
        }
        Command::Involutions { file } => {
            emit(json, &report::involutions(&read_code(&file)?)?, involutions_text)?;
            Ok(0)
        }
        Command::Construct { b, q } => {
            let b = read_code(&b)?;
            let qtext = std::fs::read_to_string(&q).with_context(|| format!("reading {}", q.display()))?;
            let q = parse_quaternary_file(&qtext).with_context(|| format!("parsing {}", q.display()))?;
            let c = build_cubic(&CubicPair::new(b, q)?)?;
            #[derive(Serialize)]
            struct Built {
                n: usize,
                k: usize,
                rows: Vec<String>,
            }
            let built = Built {
                n: c.len(),
                k: c.dim(),
                rows: c.generator().rows().iter().map(|r| r.grouped(3)).collect(),
            };
            emit(json, &built, |_| format_code_file(&c))?;
            Ok(0)
        }
        Command::Enumerate { length, dim, jobs, budget, csv, search } => {
            let m = blocks_of(length)?;
            let codes: Vec<LinearCode> = enumerate_cubic(m, dim, budget)?.collect();
            let census = classify(codes, &ClassifyOptions { paut: search.options(), jobs })?;
            let r = report::census(length, dim, &census);
            if let Some(path) = csv {
                let mut w = csv::Writer::from_path(&path).with_context(|| format!("writing {}", path.display()))?;
                w.write_record(["class_id", "representative", "paut_order", "fingerprint"])?;
                for row in &r.rows {
                    w.write_record([
                        row.class_id.to_string(),
                        row.representative.clone(),
                        row.paut_order.clone(),
                        row.fingerprint.clone(),
                    ])?;
                }
                w.flush()?;
            }
            emit(json, &r, |r| {
                format!(
                    "length {} dimension {}: {} codes, {} classes\nminimum order: {} ({})\n{}elapsed: {} ms\n",
                    r.length,
                    r.dim,
                    r.codes,
                    r.classes,
                    r.min_order.as_deref().unwrap_or("-"),
                    r.min_fingerprints.join(", "),
                    if r.exact { "" } else { "some searches timed out; classes may be split\n" },
                    r.elapsed_ms
                )
            })?;
            Ok(if r.exact { 0 } else { EXIT_GUARD })
        }
        Command::Count { length, dim } => {
            let m = blocks_of(length)?;
            let r = CountReport { length, dim, pairs: count_cubic_pairs(m, dim).to_string() };
            emit(json, &r, |r| format!("{}\n", r.pairs))?;
            Ok(0)
        }
        Command::Equivalent { first, second, search } => {
            let (c1, c2) = (read_code(&first)?, read_code(&second)?);
            let opts = search.options();
            let out = are_equivalent_with(&c1, &c2, None, &opts)?;
            let r = match &out {
                Equivalence::Equivalent(p) => EquivalenceReport { equivalent: Some(true), witness: Some(p.to_string()) },
                Equivalence::NotEquivalent => EquivalenceReport { equivalent: Some(false), witness: None },
                Equivalence::Unknown => EquivalenceReport { equivalent: None, witness: None },
            };
            emit(json, &r, |r| match (r.equivalent, &r.witness) {
                (Some(true), Some(w)) => format!("equivalent: {w}\n"),
                (Some(false), _) => "not equivalent\n".to_string(),
                _ => "unknown: search timed out\n".to_string(),
            })?;
            Ok(if out == Equivalence::Unknown { EXIT_GUARD } else { 0 })
        }
        Command::VerifyPaper { only, full, fixtures, jobs, search } => {
            let only = only
                .iter()
                .map(|s| Category::parse(s).with_context(|| format!("unknown category {s:?}")))
                .collect::<anyhow::Result<Vec<_>>>()?;
            let opts = RegressionOptions {
                only,
                full,
                fixture_dir: fixtures,
                overrides: Default::default(),
                paut: search.options(),
                jobs,
            };
            let rows = regression::run(&opts);
            let failed = rows.iter().filter(|r| !r.pass).count();
            let r = VerifyReport {
                passed: rows.len() - failed,
                failed,
                elapsed_ms: regression::total_elapsed(&rows).as_millis(),
                rows,
            };
            emit(json, &r, |r| {
                let mut s = String::new();
                for row in &r.rows {
                    s += &format!(
                        "{} {:<12} {:<44} {:>7} ms\n",
                        if row.pass { "PASS" } else { "FAIL" },
                        row.category.as_str(),
                        row.id,
                        row.elapsed_ms
                    );
                    if !row.pass {
                        s += &format!("     expected: {}\n     actual:   {}\n", row.expected, row.actual);
                    }
                }
                s += &format!("{} passed, {} failed\n", r.passed, r.failed);
                s
            })?;
            Ok(if failed == 0 { 0 } else { EXIT_MISMATCH })
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. }) => EXIT_PARSE,
        Some(Error::Guard { .. }) => EXIT_GUARD,
        _ => EXIT_FAILURE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
