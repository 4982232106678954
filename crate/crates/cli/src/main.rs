//! `symprod`: decide, witness and verify symbolic matrix products, and run
//! the graph-homomorphism laboratory.

mod graphlab;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use symprod::decider::{classify, classify_adjoint, Verdict};
use symprod::linalg::io::{format_matrix, parse_assignment};
use symprod::linalg::Assignment;
use symprod::witness::{
    find_witness, verify_assignment, verify_witness, Claim, SearchOptions, Tolerances,
    Verification, WitnessReport,
};
use symprod::word::{parse_word, Word};
use symprod::Error;

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_WRONG_VERDICT: u8 = 3;
pub const EXIT_GUARD: u8 = 4;
pub const EXIT_SYM_TIMES_PSD: u8 = 10;
pub const EXIT_NOT_REAL: u8 = 20;
pub const EXIT_EXHAUSTED: u8 = 30;

#[derive(Parser)]
#[command(name = "symprod", version, about = "Spectral classification of symbolic matrix products")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Clone)]
pub struct Output {
    /// Output format; JSON carries `"schema": 1`.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a word as symmetric, sym-times-psd or not real-eigenvalued.
    Decide {
        word: String,
        #[command(flatten)]
        sym: SymArgs,
        /// Read `^T` as the conjugate transpose.
        #[arg(long)]
        adjoint: bool,
    },
    /// Find an assignment refuting real eigenvalues or positivity.
    Witness {
        word: String,
        #[command(flatten)]
        sym: SymArgs,
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Evaluate a word on stored matrices and report its spectrum.
    Verify {
        word: String,
        /// Matrix text file or a JSON witness report.
        #[arg(long)]
        assignment: PathBuf,
        #[command(flatten)]
        sym: SymArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Graph-homomorphism experiments.
    Graphlab {
        #[command(subcommand)]
        task: graphlab::Task,
    },
}

#[derive(Args, Clone)]
pub struct SymArgs {
    /// Comma-separated names of symmetric variables.
    #[arg(long, value_delimiter = ',')]
    sym: Vec<String>,
}

#[derive(Args, Clone, Copy)]
struct TolArgs {
    /// Imaginary-part tolerance; default `1e-8 (1 + ||P||)`.
    #[arg(long)]
    imag_tol: Option<f64>,
    /// Negative-eigenvalue tolerance; default `1e-8 (1 + ||P||)`.
    #[arg(long)]
    psd_tol: Option<f64>,
}

impl From<TolArgs> for Tolerances {
    fn from(t: TolArgs) -> Self {
        Tolerances {
            imag: t.imag_tol,
            psd: t.psd_tol,
        }
    }
}

/// A finished command: report and exit code.
pub struct Outcome {
    pub code: u8,
    pub json: Value,
    pub text: String,
}

pub fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::SizeGuard { .. } => EXIT_GUARD,
        Error::Precondition(_) => EXIT_WRONG_VERDICT,
        Error::Convergence(_) => EXIT_FAILED,
        _ => EXIT_INPUT,
    }
}

pub fn parse(word: &str, sym: &SymArgs) -> Result<Word, Error> {
    parse_word(word, &sym.sym)
}

fn decide(word: &str, sym: &SymArgs, adjoint: bool) -> Result<Outcome, Error> {
    let w = parse(word, sym)?;
    let cert = if adjoint {
        classify_adjoint(&w)?
    } else {
        classify(&w)
    };
    let code = match cert.verdict {
        Verdict::Symmetric => EXIT_OK,
        Verdict::SymTimesPsd => EXIT_SYM_TIMES_PSD,
        Verdict::NotRealEigenvalued => EXIT_NOT_REAL,
    };
    let rec = cert.record(&w);
    let mut text = format!("word: {}\nverdict: {}\n", w.product_string(), rec.verdict);
    if let Some(s) = rec.shift {
        text.push_str(&format!("shift: {s}\n"));
    }
    if let Some(h) = &rec.half {
        text.push_str(&format!("L: {h}\n"));
    }
    if let Some(v) = &rec.sym_var {
        text.push_str(&format!("sym: {v}\n"));
    }
    text.push_str(&format!("psd: {}\n", rec.psd));
    for warn in w.warnings() {
        text.push_str(&format!("warning: {warn}\n"));
    }
    let mut json = serde_json::to_value(&rec).expect("serializable");
    json["word"] = json!(w.product_string());
    Ok(Outcome { code, json, text })
}

fn verification_text(v: &Verification) -> String {
    let eig: Vec<String> = v
        .eigenvalues
        .iter()
        .map(|z| format!("{:.6}{:+.6}i", z.re, z.im))
        .collect();
    format!(
        "eigenvalues: {}\nmax |Im|: {:.3e} (tol {:.3e})\nmin Re: {:.3e} (tol {:.3e})\nresidual: {:.3e}\n",
        eig.join(", "),
        v.max_imag,
        v.imag_tol,
        v.min_real,
        v.psd_tol,
        v.residual
    )
}

fn assignment_text(a: &Assignment<f64>) -> String {
    a.iter()
        .map(|(name, m)| format!("{name}\n{}", format_matrix(m)))
        .collect()
}

fn witness(
    word: &str,
    sym: &SymArgs,
    dims: Vec<usize>,
    trials: u64,
    seed: u64,
    tol: Tolerances,
) -> Result<Outcome, Error> {
    let w = parse(word, sym)?;
    let opts = SearchOptions {
        dims,
        trials,
        seed,
        tol,
    };
    let verdict = classify(&w).verdict;
    let Some(report) = find_witness(&w, &opts)? else {
        return Ok(Outcome {
            code: EXIT_EXHAUSTED,
            json: json!({
                "schema": 1,
                "word": w.product_string(),
                "found": false,
                "dims": opts.dims,
                "trials": trials,
                "seed": seed,
            }),
            text: format!("no witness within {trials} trials (seed {seed})\n"),
        });
    };
    let v = verify_witness(&w, &report, &tol)?;
    let code = if v.passed { EXIT_OK } else { EXIT_FAILED };
    let text = format!(
        "word: {}\nkind: {:?}\ndim: {}\neigenvalue: {:.6}{:+.6}i\nseed: {}\ntrials: {}\n{}{}verified: {}\n",
        w.product_string(),
        report.kind,
        report.dim,
        report.eigenvalue.re,
        report.eigenvalue.im,
        seed,
        report.trials_used,
        assignment_text(&report.assignment),
        verification_text(&v),
        v.passed
    );
    let json = json!({
        "schema": 1,
        "word": w.product_string(),
        "verdict": format!("{verdict:?}"),
        "found": true,
        "seed": seed,
        "witness": report,
        "verification": v,
    });
    Ok(Outcome { code, json, text })
}

fn verify(word: &str, path: &PathBuf, sym: &SymArgs, tol: Tolerances) -> Result<Outcome, Error> {
    let w = parse(word, sym)?;
    let content = fs::read_to_string(path)?;
    let (assignment, claim) = if content.trim_start().starts_with('{') {
        let value: Value =
            serde_json::from_str(&content).map_err(|e| Error::Parse(e.to_string()))?;
        let inner = value.get("witness").cloned().unwrap_or(value);
        let r: WitnessReport =
            serde_json::from_value(inner).map_err(|e| Error::Parse(e.to_string()))?;
        (r.assignment, Some(r.kind.claim()))
    } else {
        (parse_assignment::<f64>(&content)?, None)
    };
    let v = verify_assignment(&w, &assignment, claim.unwrap_or(Claim::NotPsd), &tol)?;
    let real = v.max_imag <= v.imag_tol;
    let psd = real && v.min_real >= -v.psd_tol;
    let code = match claim {
        Some(_) if !v.passed => EXIT_FAILED,
        _ => EXIT_OK,
    };
    let mut text = format!("word: {}\n{}real: {real}\npsd: {psd}\n", w.product_string(), verification_text(&v));
    if let Some(c) = claim {
        text.push_str(&format!("claim {c:?}: {}\n", if v.passed { "pass" } else { "fail" }));
    }
    let json = json!({
        "schema": 1,
        "word": w.product_string(),
        "real": real,
        "psd": psd,
        "claim": claim,
        "claim_passed": claim.map(|_| v.passed),
        "verification": v,
    });
    Ok(Outcome { code, json, text })
}

fn emit(out: &Output, o: &Outcome) -> std::io::Result<()> {
    let body = match out.format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&o.json).expect("valid json")),
        Format::Text => o.text.clone(),
    };
    match &out.out {
        Some(p) => fs::write(p, body),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Command::Decide { word, sym, adjoint } => decide(word, sym, *adjoint),
        Command::Witness {
            word,
            sym,
            dims,
            trials,
            seed,
            tol,
        } => witness(word, sym, dims.clone(), *trials, *seed, (*tol).into()),
        Command::Verify {
            word,
            assignment,
            sym,
            tol,
        } => verify(word, assignment, sym, (*tol).into()),
        Command::Graphlab { task } => graphlab::run(task),
    };
    match result {
        Ok(o) => match emit(&cli.out, &o) {
            Ok(()) => ExitCode::from(o.code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_INPUT)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
