use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use scl_core::bounds::{self, BoundsConfig};
use scl_core::harness::{self, Counts, SuiteBudgets, SuiteReport};
use scl_core::io;
use scl_core::lp::{self, FillingOutcome};
use scl_core::marking::{Marking, Mode};
use scl_core::parallel::{self, Exec};
use scl_core::qm;
use scl_core::search::{self, Budget, SearchError};

/// Certified bounds for stable mixed commutator length in free groups.
#[derive(Parser)]
#[command(name = "scl-forge", version)]
struct Cli {
    /// Marking JSON describing (G, N); defaults to F₂ with a ↦ 1, b ↦ 0.
    #[arg(long, global = true)]
    pair: Option<PathBuf>,
    /// Also write the JSON result to this file.
    #[arg(long, global = true)]
    json_out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a short product of (mixed) commutators equal to a word.
    ClUpper {
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "mixed")]
        mode: Mode,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        #[arg(long, default_value_t = 6)]
        gen_len: usize,
        #[arg(long, default_value_t = 16)]
        beam: usize,
    },
    /// Truncated filling norm of a chain by exact LP (exit 3 when infeasible).
    ChainNorm {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long = "L", default_value_t = 4)]
        l: usize,
        /// Work modulo h(G,N).
        #[arg(long)]
        h: bool,
    },
    /// Certified interval for scl of a word or a chain.
    Scl {
        #[arg(long, conflicts_with = "chain", required_unless_present = "chain")]
        word: Option<String>,
        #[arg(long)]
        chain: Option<PathBuf>,
        #[arg(long, default_value = "mixed")]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        kmax: usize,
        #[arg(long = "L", default_value_t = 4)]
        l: usize,
        /// Skip the filling LP.
        #[arg(long)]
        no_lp: bool,
        #[arg(long, default_value_t = 6)]
        gen_len: usize,
        #[arg(long, default_value_t = 3)]
        max_terms: usize,
        /// Quasimorphism combinations to validate and use instead of the
        /// default set.
        #[arg(long)]
        certs: Option<PathBuf>,
    },
    /// Directed radii between two subsets of a metric sample.
    Coarse {
        #[arg(long)]
        sample: PathBuf,
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<String>,
        #[arg(long = "B", value_delimiter = ',', required = true)]
        b: Vec<String>,
    },
    /// Fixed reproduction suite.
    PaperChecks {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Three-cell fillings of [a,b^(2^(n+1))] − 2[a,b^(2^n)] for n ≤ N.
    Iotakernel {
        #[arg(long, default_value_t = 8)]
        n: u32,
    },
    /// Randomized property suite.
    Properties {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Input problems exit with 2, like argument errors.
struct UsageError(anyhow::Error);

fn usage<T>(r: Result<T>) -> Result<T, Outcome> {
    r.map_err(|e| Outcome::Usage(UsageError(e)))
}

enum Outcome {
    Usage(UsageError),
    Failed(anyhow::Error),
}

impl From<anyhow::Error> for Outcome {
    fn from(e: anyhow::Error) -> Self {
        Outcome::Failed(e)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_marking(path: Option<&Path>) -> Result<Marking> {
    match path {
        Some(p) => Ok(io::parse_marking(&read(p)?)?),
        None => Ok(io::parse_marking(r#"{"rank": 2, "quotient_matrix": [[1], [0]]}"#)?),
    }
}

fn emit(value: &Value, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    if let Err(e) = writeln!(std::io::stdout().lock(), "{text}") {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            return Err(e.into());
        }
    }
    if let Some(p) = out {
        std::fs::write(p, format!("{text}\n")).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(())
}

fn emit_report(r: &SuiteReport, out: Option<&Path>) -> Result<u8> {
    emit(&serde_json::to_value(r)?, out)?;
    Ok(if r.all_pass() { 0 } else { 1 })
}

fn run(cli: Cli) -> Result<u8, Outcome> {
    let exec = Exec::Parallel;
    let out = cli.json_out.as_deref();
    let pair = cli.pair.as_deref();
    match cli.command {
        Command::ClUpper {
            word,
            mode,
            max_terms,
            gen_len,
            beam,
        } => {
            let m = usage(load_marking(pair))?;
            let y = usage(m.parse_word(&word).map_err(anyhow::Error::from))?;
            let budget = Budget {
                max_terms,
                gen_len,
                beam,
            };
            let mm = m.for_mode(mode);
            let (status, cert, code) = match search::cl_upper_search(&m, &y, mode, &budget, exec) {
                Ok(c) => ("found", Some(c), 0),
                Err(SearchError::NotFound { .. }) => ("not_found", None, 1),
                Err(e @ SearchError::NotInSubgroup { .. }) => return Err(Outcome::Usage(UsageError(e.into()))),
                Err(e) => return Err(anyhow::Error::from(e).into()),
            };
            let body = json!({
                "marking": io::marking_json(&m),
                "word": m.format(&y),
                "mode": mode,
                "budget": budget,
                "status": status,
                "verified": cert.as_ref().map(|c| search::verify_cl_certificate(&mm, c)),
                "certificate": cert.as_ref().map(|c| io::cl_certificate_json(&m, c)),
            });
            emit(&io::document("cl-upper", body), out)?;
            Ok(code)
        }
        Command::ChainNorm { chain, l, h } => {
            let m = usage(load_marking(pair))?;
            let c = usage(read(&chain).and_then(|t| Ok(io::parse_chain(&m, &t)?)))?;
            let target = if h { c.h_normal_form_in(&m) } else { c.clone() };
            let outcome = usage(lp::truncated_filling_norm(&m, &target, l, h).map_err(anyhow::Error::from))?;
            let (body, code) = match outcome {
                FillingOutcome::Solved(cert) => (
                    json!({
                        "status": "solved",
                        "value": scl_core::rational::fmt_q(&cert.value),
                        "primal_verified": lp::verify_filling_certificate(&m, &cert),
                        "dual_verified": lp::verify_dual(&m, &cert),
                        "certificate": io::filling_json(&m, &cert),
                    }),
                    0,
                ),
                FillingOutcome::Infeasible => (json!({ "status": "infeasible", "length_budget": l }), 3),
            };
            emit(&io::document("chain-norm", body), out)?;
            Ok(code)
        }
        Command::Scl {
            word,
            chain,
            mode,
            kmax,
            l,
            no_lp,
            gen_len,
            max_terms,
            certs,
        } => {
            let m = usage(load_marking(pair))?;
            let config = BoundsConfig {
                k_max: kmax,
                search: Budget {
                    gen_len,
                    max_terms,
                    ..Budget::default()
                },
                lp_budget: (!no_lp).then_some(l),
                exec,
                ..BoundsConfig::default()
            };
            let certificates = match certs {
                None => qm::default_certificates(m.rank()).to_vec(),
                Some(p) => {
                    let combos = usage(read(&p).and_then(|t| Ok(io::parse_combinations(&m, &t)?)))?;
                    let validated = qm::validate_all(combos, m.rank(), exec).map_err(anyhow::Error::from)?;
                    validated
                        .into_iter()
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| anyhow!("combination rejected: {e}"))?
                }
            };
            let interval = match (&word, &chain) {
                (Some(w), _) => {
                    let y = usage(m.parse_word(w).map_err(anyhow::Error::from))?;
                    bounds::scl_interval(&m, &y, mode, &config, &certificates)
                }
                (None, Some(p)) => {
                    let c = usage(read(p).and_then(|t| Ok(io::parse_chain(&m, &t)?)))?;
                    bounds::scl_interval_chain(&m, &c, mode, &config, &certificates)
                }
                (None, None) => unreachable!("clap requires one of --word, --chain"),
            };
            let interval = usage(interval.map_err(anyhow::Error::from))?;
            let verified = bounds::verify_interval(&m, &interval);
            let mut body = io::interval_json(&m, &interval);
            body["verified"] = json!(verified);
            body["config"] = json!(config);
            emit(&io::document("scl-interval", body), out)?;
            Ok(if verified { 0 } else { 1 })
        }
        Command::Coarse { sample, a, b } => {
            let s = usage(read(&sample).and_then(|t| Ok(io::parse_sample(&t)?)))?;
            let ia = usage(s.indices(&a).map_err(anyhow::Error::from))?;
            let ib = usage(s.indices(&b).map_err(anyhow::Error::from))?;
            let (r_ab, r_ba) = usage(s.asymptotic_check(&ia, &ib).map_err(anyhow::Error::from))?;
            let body = json!({
                "scope": "within-sample",
                "A": a,
                "B": b,
                "radius_A_to_B": r_ab,
                "radius_B_to_A": r_ba,
                "asymptotic": r_ab.is_finite() && r_ba.is_finite(),
            });
            emit(&io::document("coarse", body), out)?;
            Ok(0)
        }
        Command::PaperChecks { seed } => Ok(emit_report(&harness::run_paper_checks(seed, exec), out)?),
        Command::Iotakernel { n } => Ok(emit_report(&harness::run_iotakernel(n), out)?),
        Command::Properties { seed } => {
            let r = harness::run_property_suite(seed, &Counts::default(), &SuiteBudgets::default(), exec);
            Ok(emit_report(&r, out)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads;
    match parallel::with_threads(threads, || run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(Outcome::Usage(UsageError(e))) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Outcome::Failed(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
