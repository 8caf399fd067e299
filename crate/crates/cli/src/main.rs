//! `sic`: command-line front end for symmetric interaction combinator nets.
//!
//! Nets are read as net-source from a file or from stdin (`-`). Output is
//! net-source for nets, JSON for analyses and verdicts, DOT for pictures.
//! Diagnostics go to stderr. Exit codes: 2 parse error, 3 invariant
//! violation, 4 interface mismatch, 1 anything else.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sic_core::dot::to_dot;
use sic_core::edifice::closure_agreement_depth;
use sic_core::encodings::{corpus, fixture_sources};
use sic_core::equivalence::{ax_eq_up_to, beta_eps_eq, fin_ax_eq, observability, replay_test, visible_eq, EqVerdict};
use sic_core::parse::parse_named;
use sic_core::rewrite::{reduce, Strategy};
use sic_core::structure::{decompose, Feedback};
use sic_core::{
    all_obs_paths, canonical_text, canonicalize, eps_reduce, execution_formula, goi_matrix, trace_addresses, truncate,
    Error, Net,
};

#[derive(Parser)]
#[command(name = "sic", version, about = "Symmetric interaction combinators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    BetaEps,
    FinAx,
    Ax,
    Visible,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a net and print its canonical form.
    Parse { file: PathBuf },
    /// Reduce a net and print the reduct followed by a status comment.
    Reduce {
        file: PathBuf,
        /// full-parallel, leftmost, or random:SEED.
        #[arg(long, default_value = "full-parallel")]
        strategy: String,
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        /// Run the ε-reduction instead of plain β-reduction.
        #[arg(long)]
        eps: bool,
    },
    /// Observable addresses met within the budget, as JSON.
    Obs {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        budget: usize,
    },
    /// GoI matrix of the cut-free part and the execution formula, as JSON.
    Goi {
        file: PathBuf,
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Canonical edifice generators and an optional truncation, as JSON.
    Ed {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        budget: usize,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Trace of the budgeted edifice along a feedback such as `3:4,5:6`.
    Trace {
        file: PathBuf,
        #[arg(long)]
        feedback: String,
        #[arg(long, default_value_t = 20)]
        budget: usize,
        #[arg(long, default_value_t = 16)]
        max_len: usize,
    },
    /// Compare two nets; prints a JSON verdict.
    Eq {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value = "fin-ax")]
        mode: Mode,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 10)]
        budget: usize,
    },
    /// Graphviz rendering.
    Dot { file: PathBuf },
    /// List the corpus, or print one corpus net.
    Corpus { name: Option<String> },
}

fn code(e: &Error) -> u8 {
    match e {
        Error::Parse { .. } => 2,
        Error::Invariant(_) => 3,
        Error::InterfaceMismatch { .. } | Error::InterfaceTooSmall { .. } => 4,
        _ => 1,
    }
}

enum Failure {
    Core(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

fn read(file: &PathBuf) -> Result<(String, Net), Failure> {
    let mut src = String::new();
    let res = if file.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut src).map(|_| ())
    } else {
        std::fs::read_to_string(file).map(|s| src = s)
    };
    res.map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let (name, net) = parse_named(&src)?;
    net.validate()?;
    Ok((name, net))
}

fn strategy(s: &str) -> Result<Strategy, Failure> {
    match s {
        "full-parallel" => Ok(Strategy::FullParallel),
        "leftmost" => Ok(Strategy::Leftmost),
        _ => s
            .strip_prefix("random:")
            .and_then(|seed| seed.parse().ok())
            .map(Strategy::Random)
            .ok_or_else(|| Failure::Usage(format!("unknown strategy {s}"))),
    }
}

fn feedback(s: &str) -> Result<Feedback, Failure> {
    let bad = || Failure::Usage(format!("bad feedback {s}; expected i:j,k:l"));
    let pairs = s
        .split(',')
        .filter(|p| !p.is_empty())
        .map(|p| {
            let (i, j) = p.split_once(':').ok_or_else(bad)?;
            Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
        })
        .collect::<Result<Vec<(usize, usize)>, Failure>>()?;
    Ok(Feedback::from_pairs(&pairs)?)
}

fn addrs_json(a: &sic_core::AddressSet) -> Value {
    serde_json::from_str(&a.to_json()).expect("address JSON")
}

fn verdict_json(v: &EqVerdict, a: &Net, b: &Net, budget: usize) -> Result<Value, Failure> {
    let mut replay = Vec::new();
    if let EqVerdict::Distinguished { witness, .. } = v {
        replay.push(format!("left: {:?}", replay_test(witness, a, budget)?));
        replay.push(format!("right: {:?}", replay_test(witness, b, budget)?));
    }
    Ok(serde_json::to_value(v.report(replay)).expect("report JSON"))
}

fn run(cli: Cli) -> Result<String, Failure> {
    Ok(match cli.command {
        Command::Parse { file } => {
            let (name, net) = read(&file)?;
            canonical_text(&net, &name)
        }
        Command::Reduce { file, strategy: s, budget, eps } => {
            let (name, net) = read(&file)?;
            let out = if eps { eps_reduce(&net, budget) } else { reduce(&net, strategy(&s)?, budget) };
            out.net.validate()?;
            format!("{}# status: {:?}\n", canonical_text(&out.net, &name), out.status)
        }
        Command::Obs { file, budget } => {
            let (_, net) = read(&file)?;
            let p = all_obs_paths(&net, budget);
            let v = json!({
                "addresses": addrs_json(&p.addrs),
                "exhausted": p.exhausted,
                "certificate": p.certificate,
                "rounds": p.rounds,
                "observability": observability(&net, budget),
            });
            format!("{v:#}\n")
        }
        Command::Goi { file, budget } => {
            let (_, net) = read(&file)?;
            let (nu, sigma) = decompose(&net);
            let exec = execution_formula(&nu, &sigma, budget)?;
            let v = json!({
                "interface": net.interface(),
                "cut_free_matrix": goi_matrix(&nu)?,
                "execution": exec,
            });
            format!("{v:#}\n")
        }
        Command::Ed { file, budget, depth } => {
            let (_, net) = read(&file)?;
            let p = all_obs_paths(&net, budget);
            let mut v = json!({ "generators": addrs_json(&canonicalize(&p.addrs)), "certificate": p.certificate });
            if let Some(k) = depth {
                v["truncation"] = serde_json::to_value(truncate(&p.addrs, k)).expect("truncation JSON");
            }
            format!("{v:#}\n")
        }
        Command::Trace { file, feedback: f, budget, max_len } => {
            let (_, net) = read(&file)?;
            let sigma = feedback(&f)?;
            let p = all_obs_paths(&net, budget);
            let t = trace_addresses(&p.addrs, &sigma, max_len, 10_000);
            format!("{:#}\n", json!({ "addresses": addrs_json(&t.addrs), "complete": t.complete }))
        }
        Command::Eq { a, b, mode, depth, budget } => {
            let ((_, x), (_, y)) = (read(&a)?, read(&b)?);
            let v = match mode {
                Mode::BetaEps => beta_eps_eq(&x, &y, budget)?,
                Mode::FinAx => fin_ax_eq(&x, &y, budget)?,
                Mode::Ax => ax_eq_up_to(&x, &y, depth, budget)?,
                Mode::Visible => visible_eq(&x, &y, budget)?,
            };
            let mut j = verdict_json(&v, &x, &y, budget)?;
            if matches!(mode, Mode::Ax) {
                let (p, q) = (all_obs_paths(&x, budget), all_obs_paths(&y, budget));
                j["agreement_depth"] = json!(closure_agreement_depth(&p.addrs, &q.addrs, depth));
            }
            format!("{j:#}\n")
        }
        Command::Dot { file } => {
            let (name, net) = read(&file)?;
            to_dot(&net, &name)
        }
        Command::Corpus { name: None } => {
            corpus().keys().map(|k| format!("{k}\n")).collect()
        }
        Command::Corpus { name: Some(n) } => fixture_sources()
            .iter()
            .find(|(k, _)| *k == n)
            .map(|(_, src)| src.to_string())
            .ok_or_else(|| Failure::Usage(format!("no corpus net named {n}")))?,
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(code(&e))
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
