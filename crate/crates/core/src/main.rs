use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use timdof::bounds::{best_condition1_bound, identical_neighbors_bound, DEFAULT_EXHAUSTIVE_LIMIT};
use timdof::repro::{self, ReproCase, ReproOptions};
use timdof::scheduler::{schedule_certificate, schedule_exact_unguarded, EXACT_SEARCH_LIMIT};
use timdof::verifier::monte_carlo_dof;
use timdof::{
    analyze, check_condition1, cyclic_wyner, figure4_example, fully_connected, schedule_greedy,
    schedule_to_scheme, upper_bound, wyner, Coherence, DofCertificate, Evidence, LinearScheme,
    ReceiverSet, Topology,
};

const EXIT_CLAIM_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "timdof", version)]
#[command(about = "Sum-DoF bounds and scheme verification for topological interference management")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Generator {
    Wyner,
    Cyclic,
    Full,
    Figure4,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Best,
    Condition1,
    IdenticalNeighbors,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a generated topology as JSON
    Topology {
        generator: Generator,
        /// Number of users (wyner, cyclic, full)
        #[arg(long)]
        k: Option<usize>,
        /// Override every link's coherence time (positive integer or "constant")
        #[arg(long)]
        coherence: Option<String>,
    },
    /// Lower and upper sum-DoF bounds for a topology
    Analyze {
        /// Topology JSON file, or - for stdin
        topology: PathBuf,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        exhaustive_limit: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Converse bound certificate for a topology
    Bound {
        topology: PathBuf,
        #[arg(long, value_enum, default_value = "best")]
        kind: BoundKind,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        exhaustive_limit: usize,
        /// Check Condition 1 for this receiver set instead of searching (comma separated)
        #[arg(long, value_delimiter = ',')]
        check_set: Option<Vec<usize>>,
        #[arg(long)]
        json: bool,
    },
    /// Achievable sum DoF from an interference-avoidance schedule
    Achieve {
        topology: PathBuf,
        /// Use the greedy scheduler regardless of K
        #[arg(long, conflicts_with = "force_exact")]
        greedy: bool,
        /// Run exact search even above K = 12
        #[arg(long)]
        force_exact: bool,
        /// Write the schedule's one-slot linear scheme to this file
        #[arg(long)]
        scheme_out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo zero-forcing check of a linear scheme
    VerifyScheme {
        topology: PathBuf,
        scheme: PathBuf,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Re-run a family of claims and print a pass/fail table
    Repro {
        case: String,
        #[arg(long, value_delimiter = ',')]
        k_list: Option<Vec<usize>>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_EXHAUSTIVE_LIMIT)]
        exhaustive_limit: usize,
        #[arg(long)]
        json: bool,
    },
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Claim,
}

impl From<timdof::Error> for Failure {
    fn from(e: timdof::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn load_topology(path: &Path) -> Result<Topology, Failure> {
    Topology::from_json(&read_input(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Writes a line to stdout, ignoring a closed pipe.
fn emit(line: impl fmt::Display) {
    let _ = writeln!(io::stdout().lock(), "{line}");
}

fn print_json<T: serde::Serialize>(value: &T) {
    emit(serde_json::to_string_pretty(value).expect("serializable"));
}

fn describe(c: &DofCertificate) -> String {
    let detail = match c.evidence() {
        Evidence::Schedule(s) => format!("pairs {:?}", s.pairs()),
        Evidence::Condition1(cc) => format!(
            "A = {:?}, matching (tx -> rx) {:?}",
            cc.receivers().iter().collect::<Vec<_>>(),
            cc.matching()
        ),
        Evidence::IdenticalNeighbors(g) => format!("groups {:?}", g.groups),
        Evidence::Trivial { k } => format!("K = {k}"),
    };
    format!("{} ({}): {}", c.value(), c.kind().name(), detail)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Topology {
            generator,
            k,
            coherence,
        } => {
            let need_k =
                || k.ok_or_else(|| Failure::Usage("--k is required for this generator".into()));
            let mut t = match generator {
                Generator::Wyner => wyner(need_k()?)?,
                Generator::Cyclic => cyclic_wyner(need_k()?)?,
                Generator::Full => fully_connected(need_k()?)?,
                Generator::Figure4 => figure4_example(),
            };
            if let Some(c) = coherence {
                let c =
                    match c.as_str() {
                        "constant" => Coherence::Constant,
                        other => Coherence::slots(other.parse().map_err(|_| {
                            Failure::Usage(format!("invalid --coherence {other:?}"))
                        })?)?,
                    };
                t = t.with_uniform_coherence(c);
            }
            emit(format_args!("{}", t.to_json()));
        }
        Command::Analyze {
            topology,
            exhaustive_limit,
            seed,
            json,
        } => {
            let t = load_topology(&topology)?;
            let report = analyze(&t, exhaustive_limit, seed)?;
            if !json {
                emit(format_args!("{report}"));
                emit(format_args!(
                    "lower certificate: {}",
                    describe(&report.lower)
                ));
                emit(format_args!(
                    "upper certificate: {}",
                    describe(&report.upper)
                ));
            }
            print_json(&report);
        }
        Command::Bound {
            topology,
            kind,
            exhaustive_limit,
            check_set,
            json,
        } => {
            let t = load_topology(&topology)?;
            if let Some(members) = check_set {
                let a = ReceiverSet::new(t.k(), members)?;
                return match check_condition1(&t, &a) {
                    Ok(cert) => {
                        if json {
                            print_json(&cert);
                        } else {
                            emit(format_args!(
                                "Condition 1 holds: bound {}, matching (tx -> rx) {:?}",
                                cert.bound(),
                                cert.matching()
                            ));
                        }
                        Ok(())
                    }
                    Err(reason) => {
                        emit(format_args!("Condition 1 fails: {reason}"));
                        Err(Failure::Claim)
                    }
                };
            }
            let cert = match kind {
                BoundKind::Best => upper_bound(&t, exhaustive_limit),
                BoundKind::Condition1 => best_condition1_bound(&t, exhaustive_limit),
                BoundKind::IdenticalNeighbors => identical_neighbors_bound(&t),
            };
            cert.validate(&t)?;
            if json {
                print_json(&cert);
            } else {
                emit(format_args!("upper bound {}", describe(&cert)));
            }
        }
        Command::Achieve {
            topology,
            greedy,
            force_exact,
            scheme_out,
            json,
        } => {
            let t = load_topology(&topology)?;
            let schedule = if greedy || (t.k() > EXACT_SEARCH_LIMIT && !force_exact) {
                schedule_greedy(&t)
            } else {
                schedule_exact_unguarded(&t)
            };
            let cert = schedule_certificate(&t, schedule.clone())?;
            if let Some(path) = scheme_out {
                let scheme = schedule_to_scheme(&schedule, &t)?;
                fs::write(&path, scheme.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            if json {
                print_json(&cert);
            } else {
                emit(format_args!("achievable {}", describe(&cert)));
            }
        }
        Command::VerifyScheme {
            topology,
            scheme,
            trials,
            seed,
            json,
        } => {
            let t = load_topology(&topology)?;
            let s = LinearScheme::from_json(&read_input(&scheme)?)
                .map_err(|e| Failure::Usage(format!("{}: {e}", scheme.display())))?;
            let verdict = monte_carlo_dof(&t, &s, trials, seed)?;
            if !json {
                emit(format_args!(
                    "DoF {} ({}), receivers {:?}",
                    verdict.dof,
                    if verdict.generic {
                        "generic".to_string()
                    } else {
                        format!("{} dissenting seeds", verdict.dissenting_seeds.len())
                    },
                    verdict.statuses
                ));
            }
            print_json(&verdict);
            if !verdict.fully_decodable {
                return Err(Failure::Claim);
            }
        }
        Command::Repro {
            case,
            k_list,
            trials,
            seed,
            exhaustive_limit,
            json,
        } => {
            let case: ReproCase = case.parse()?;
            let opts = ReproOptions {
                k_list,
                trials,
                seed,
                exhaustive_limit,
            };
            let table = repro::run(case, &opts)?;
            if json {
                print_json(&table);
            } else {
                emit(format_args!("{table}"));
            }
            if !table.pass {
                return Err(Failure::Claim);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Claim) => ExitCode::from(EXIT_CLAIM_FAILED),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
