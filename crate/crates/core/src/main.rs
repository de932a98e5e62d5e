//! Command-line entry point: wires the parser, normalizer, engines, axiom
//! layer, graph polynomials, and the brute-force oracle. Emits text or JSON
//! reports. Exit codes: 0 success, 1 usage or input error, 2 computation
//! error.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use liftpoly::axioms::{plain_wfomc, shift_u, soft_cc_evaluate, wfomc_with_axiom};
use liftpoly::cells;
use liftpoly::error::Error;
use liftpoly::fol::{parse_sentence, PredId, Sentence};
use liftpoly::graphpoly::{directed_chromatic, parse_block_spec, EncodedGraphFamily};
use liftpoly::normalize::normalize;
use liftpoly::oracle;
use liftpoly::poly::{format_rational, parse_rational, Poly};
use liftpoly::scp::{compute_nscp_run, compute_sscp_run, ScpMode};
use liftpoly::wcp::{compute_extended_wcp_run, compute_wcp_run, EngineStats};

#[derive(Parser)]
#[command(
    name = "liftpoly",
    version,
    about = "Connectedness polynomials for weighted first-order model counting",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Strict,
    Nonstrict,
}

impl From<ModeArg> for ScpMode {
    fn from(m: ModeArg) -> ScpMode {
        match m {
            ModeArg::Strict => ScpMode::Strict,
            ModeArg::Nonstrict => ScpMode::NonStrict,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Complete,
    Blocks,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleWhat {
    Wfomc,
    Wcp,
    #[value(name = "scp-strict")]
    ScpStrict,
    #[value(name = "scp-nonstrict")]
    ScpNonstrict,
}

#[derive(Subcommand)]
enum Command {
    /// Weighted first-order model count of a sentence file
    Wfomc {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Weak connectedness polynomial (optionally the bivariate extension)
    Wcp {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        relation: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        extended: bool,
        /// Print f_n(u-1) instead of f_n(u)
        #[arg(long)]
        shifted: bool,
        #[arg(long)]
        dump_cells: bool,
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Strict or non-strict connectedness polynomial
    Scp {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        relation: String,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Print g_n(u-1, v) instead of g_n(u, v)
        #[arg(long)]
        shifted: bool,
        #[arg(long)]
        dump_cells: bool,
        #[arg(long)]
        dump_normalized: bool,
    },
    /// Weighted count under the axiom annotated in the sentence file
    Axiom {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Evaluate the weak connectedness polynomial at a rational point
    EvalWcp {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        relation: String,
        #[arg(long)]
        n: usize,
        /// Evaluation point as `p/q`, possibly negative
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Tutte polynomial of a built-in graph family
    Tutte {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Block structure, e.g. `sizes=2,2;adj=01,10`
        #[arg(long)]
        blocks: Option<String>,
    },
    /// Strict or non-strict directed chromatic polynomial of an encoded digraph
    Dichromatic {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Edge predicate; defaults to the unique binary predicate
        #[arg(long)]
        relation: Option<String>,
    },
    /// Brute-force ground truth for validation
    Oracle {
        #[arg(long)]
        sentence: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        what: OracleWhat,
        #[arg(long)]
        relation: Option<String>,
    },
}

#[derive(Serialize)]
struct StatsJson {
    cells: usize,
    configs: usize,
    layers: usize,
}

#[derive(Serialize)]
struct RunReport {
    command: String,
    input_digest: String,
    result: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    stats: Option<StatsJson>,
    wall_time_ms: f64,
}

enum Output {
    Rational(liftpoly::poly::Rational),
    Poly(Poly),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    let started = Instant::now();
    match run(&cli.command) {
        Ok((output, digest, stats)) => {
            let wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
            emit(&cli, output, digest, stats, wall_time_ms);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var("LIFTPOLY_THREADS") {
        if let Ok(k) = value.trim().parse::<usize>() {
            if k > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(k)
                    .build_global();
            }
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. }
        | Error::Parse { .. }
        | Error::UnknownPredicate(_)
        | Error::ArityMismatch { .. }
        | Error::VariableLimit(_)
        | Error::FreeVariable(_)
        | Error::ContradictoryEvidence { .. }
        | Error::EvidenceOutOfRange(..)
        | Error::AxiomCount(_)
        | Error::AxiomParameter { .. }
        | Error::BadBlockSpec(_)
        | Error::BlockSizeMismatch { .. }
        | Error::DomainTooSmall => 1,
        _ => 2,
    }
}

fn load_sentence(path: &PathBuf) -> Result<(Sentence, String), Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    let digest = hex_digest(text.as_bytes());
    Ok((parse_sentence(&text)?, digest))
}

fn hex_digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn resolve_relation(s: &Sentence, name: &str) -> Result<PredId, Error> {
    s.vocab
        .lookup(name)
        .ok_or_else(|| Error::UnknownPredicate(name.to_string()))
}

fn default_binary(s: &Sentence) -> Result<PredId, Error> {
    let binaries = s.vocab.binary_ids();
    match binaries.as_slice() {
        [single] => Ok(*single),
        _ => Err(Error::UnknownPredicate(
            "pass --relation: the sentence has no unique binary predicate".to_string(),
        )),
    }
}

fn maybe_dump(s: &Sentence, relation: PredId, dump_cells: bool, dump_normalized: bool) {
    if !dump_cells && !dump_normalized {
        return;
    }
    match normalize(s) {
        Ok(ns) => {
            if dump_normalized {
                eprint!("{}", ns.describe());
            }
            if dump_cells {
                let space = cells::enumerate_cells(&ns);
                match cells::compute_coefficients(&ns, &space, relation) {
                    Ok(coeffs) => eprint!("{}", cells::describe(&ns, &space, &coeffs)),
                    Err(e) => eprintln!("cell dump unavailable: {e}"),
                }
            }
        }
        Err(e) => eprintln!("normalized dump unavailable: {e}"),
    }
}

fn apply_shift(p: Poly, shifted: bool) -> Poly {
    if shifted {
        shift_u(&p)
    } else {
        p
    }
}

type RunOutcome = Result<(Output, String, Option<EngineStats>), Error>;

fn run(command: &Command) -> RunOutcome {
    match command {
        Command::Wfomc { sentence, n } => {
            let (s, digest) = load_sentence(sentence)?;
            if !s.axioms.is_empty() {
                eprintln!(
                    "note: ignoring {} axiom annotation(s); use the `axiom` subcommand to apply them",
                    s.axioms.len()
                );
            }
            let value = plain_wfomc(&s, *n)?;
            Ok((Output::Rational(value), digest, None))
        }
        Command::Wcp {
            sentence,
            relation,
            n,
            extended,
            shifted,
            dump_cells,
            dump_normalized,
        } => {
            let (s, digest) = load_sentence(sentence)?;
            let rel = resolve_relation(&s, relation)?;
            maybe_dump(&s, rel, *dump_cells, *dump_normalized);
            let ns = normalize(&s)?;
            let run = if *extended {
                compute_extended_wcp_run(&ns, *n, rel)?
            } else {
                compute_wcp_run(&ns, *n, rel)?
            };
            Ok((
                Output::Poly(apply_shift(run.poly, *shifted)),
                digest,
                Some(run.stats),
            ))
        }
        Command::Scp {
            sentence,
            relation,
            n,
            mode,
            shifted,
            dump_cells,
            dump_normalized,
        } => {
            let (s, digest) = load_sentence(sentence)?;
            let rel = resolve_relation(&s, relation)?;
            maybe_dump(&s, rel, *dump_cells, *dump_normalized);
            let ns = normalize(&s)?;
            let run = match ScpMode::from(*mode) {
                ScpMode::Strict => compute_sscp_run(&ns, *n, rel)?,
                ScpMode::NonStrict => compute_nscp_run(&ns, *n, rel)?,
            };
            Ok((
                Output::Poly(apply_shift(run.poly, *shifted)),
                digest,
                Some(run.stats),
            ))
        }
        Command::Axiom { sentence, n } => {
            let (s, digest) = load_sentence(sentence)?;
            let value = wfomc_with_axiom(&s, *n)?;
            Ok((Output::Rational(value), digest, None))
        }
        Command::EvalWcp {
            sentence,
            relation,
            n,
            at,
        } => {
            let (s, digest) = load_sentence(sentence)?;
            let rel = resolve_relation(&s, relation)?;
            let point = parse_rational(at)?;
            let value = soft_cc_evaluate(&s, *n, rel, &point)?;
            Ok((Output::Rational(value), digest, None))
        }
        Command::Tutte { family, n, blocks } => {
            let family = match family {
                FamilyArg::Complete => EncodedGraphFamily::Complete,
                FamilyArg::Blocks => {
                    let spec = blocks.as_deref().ok_or_else(|| {
                        Error::BadBlockSpec("--blocks is required for the blocks family".into())
                    })?;
                    parse_block_spec(spec)?
                }
            };
            let digest = hex_digest(format!("{family:?}/{n}").as_bytes());
            let t = liftpoly::graphpoly::tutte(&family, *n)?;
            Ok((Output::Poly(t), digest, None))
        }
        Command::Dichromatic {
            sentence,
            n,
            mode,
            relation,
        } => {
            let (s, digest) = load_sentence(sentence)?;
            let rel = match relation {
                Some(name) => resolve_relation(&s, name)?,
                None => default_binary(&s)?,
            };
            let chi = directed_chromatic(&s, rel, *n, (*mode).into())?;
            Ok((Output::Poly(chi), digest, None))
        }
        Command::Oracle {
            sentence,
            n,
            what,
            relation,
        } => {
            let (s, digest) = load_sentence(sentence)?;
            let output = match what {
                OracleWhat::Wfomc => Output::Rational(oracle::wfomc_by_enumeration(&s, *n)?),
                other => {
                    let rel = match relation {
                        Some(name) => resolve_relation(&s, name)?,
                        None => default_binary(&s)?,
                    };
                    let poly = match other {
                        OracleWhat::Wcp => oracle::wcp_by_enumeration(&s, *n, rel)?,
                        OracleWhat::ScpStrict => oracle::scp_by_enumeration(&s, *n, rel, true)?,
                        OracleWhat::ScpNonstrict => {
                            oracle::scp_by_enumeration(&s, *n, rel, false)?
                        }
                        OracleWhat::Wfomc => unreachable!("handled above"),
                    };
                    Output::Poly(poly)
                }
            };
            Ok((output, digest, None))
        }
    }
}

fn command_echo() -> String {
    let args: Vec<String> = std::env::args().skip(1).collect();
    args.join(" ")
}

fn emit(cli: &Cli, output: Output, digest: String, stats: Option<EngineStats>, wall_ms: f64) {
    match cli.format {
        Format::Json => {
            let result = match &output {
                Output::Rational(r) => serde_json::json!({ "rational": format_rational(r) }),
                Output::Poly(p) => p.to_json(),
            };
            let report = RunReport {
                command: command_echo(),
                input_digest: digest,
                result,
                stats: stats.map(|s| StatsJson {
                    cells: s.cells,
                    configs: s.configs,
                    layers: s.layers,
                }),
                wall_time_ms: wall_ms,
            };
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
        }
        Format::Text => {
            println!("command: {}", command_echo());
            println!("input_digest: {digest}");
            if let Some(s) = stats {
                println!(
                    "cells: {} configs: {} layers: {}",
                    s.cells, s.configs, s.layers
                );
            }
            println!("wall_time_ms: {wall_ms:.3}");
            match output {
                Output::Rational(r) => println!("{}", format_rational(&r)),
                Output::Poly(p) => println!("{p}"),
            }
        }
    }
}
