//! Subcommand dispatch for the `flipgame` binary.

use std::io::Write;
use std::net::SocketAddr;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use flipgame_core::forms::{check_ao_bijection, check_congruence, check_q_invariance, Q_CHECK_MAX_N};
use flipgame_core::classify::OrbitEntry;
use flipgame_core::oracle::{sweep, Limits, DEFAULT_CAP};
use flipgame_core::summary::{self, GraphSummary};
use flipgame_core::{Classifier, Config, Error, GraphSpec};
use flipgame_server::ServerConfig;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "flipgame", version, about = "Orbits and reachability of the lit-only σ-game")]
pub struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Largest n for brute-force search (witnesses, verification).
    #[arg(long, global = true, env = "FLIPGAME_ORACLE_CAP", default_value_t = DEFAULT_CAP)]
    pub cap: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GraphArg {
    /// Graph as "n=5 attach=1,4" or {"n":5,"attach":[1,4]}.
    #[arg(long)]
    pub graph: String,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[command(flatten)]
    pub graph: GraphArg,
    /// Start configuration, e.g. 1000 (leftmost is s_1).
    #[arg(long)]
    pub from: String,
    /// Target configuration.
    #[arg(long)]
    pub to: String,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Π vectors, Π₀/Π₁, the simple basis and the index sets I/J.
    Pi(GraphArg),
    /// Orbit label of one or more configurations.
    Classify {
        #[command(flatten)]
        graph: GraphArg,
        /// Configuration bitstring; repeat for several.
        #[arg(long = "config", required = true)]
        configs: Vec<String>,
    },
    /// Decide whether --from can reach --to.
    Reach {
        #[command(flatten)]
        pair: PairArgs,
        /// Also search for a shortest move sequence (n within the cap).
        #[arg(long)]
        witness: bool,
    },
    /// Shortest legal move sequence from --from to --to.
    Solve(PairArgs),
    /// Every orbit with its size and minimum weight.
    Orbits(GraphArg),
    /// Check the classifier against brute force on every graph up to --nmax.
    Verify {
        #[arg(long)]
        nmax: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Emit one JSON line per graph before the summary.
        #[arg(long)]
        lines: bool,
    },
    /// Adjacency form checks: congruence, q-invariance, O ↦ AO.
    Forms(GraphArg),
    /// Serve the JSON API (and optionally a static UI bundle).
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: std::net::IpAddr,
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

/// A failure reported as a JSON error object with exit status 1.
#[derive(Debug)]
pub enum CliError {
    Domain(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn to_json(&self) -> Value {
        let (kind, message) = match self {
            CliError::Domain(e) => (e.kind(), e.to_string()),
            CliError::Io(e) => ("Io", e.to_string()),
        };
        json!({ "error": { "kind": kind, "message": message } })
    }
}

fn parse_graph(arg: &GraphArg) -> Result<GraphSpec, Error> {
    arg.graph.parse()
}

fn parse_pair(p: &PairArgs) -> Result<(GraphSpec, Config, Config), Error> {
    let g = parse_graph(&p.graph)?;
    let from = g.parse_config(&p.from)?;
    let to = g.parse_config(&p.to)?;
    Ok((g, from, to))
}

fn emit(out: &mut dyn Write, value: &impl Serialize, pretty: bool) -> std::io::Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable");
    writeln!(out, "{text}")
}

#[derive(Serialize)]
struct Classified {
    config: Config,
    #[serde(flatten)]
    orbit: OrbitEntry,
}

#[derive(Serialize)]
struct FormsOutput {
    rank: usize,
    nonsingular: bool,
    congruence: bool,
    /// `null` above the exhaustive-check size.
    q_invariant: Option<bool>,
    transpose_orbit_count: usize,
    orbit_count: usize,
    well_defined: bool,
    bijection: Option<bool>,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let limits = Limits::with_max_n(cli.cap);
    let pretty = cli.pretty;
    match cli.command {
        Command::Pi(arg) => {
            let cls = Classifier::new(&parse_graph(&arg)?)?;
            emit(out, &GraphSummary::new(&cls), pretty)?;
        }
        Command::Classify { graph, configs } => {
            let g = parse_graph(&graph)?;
            let cls = Classifier::new(&g)?;
            let rows = configs
                .iter()
                .map(|s| {
                    let u = g.parse_config(s)?;
                    let label = cls.classify(&u);
                    Ok(Classified {
                        config: u,
                        orbit: OrbitEntry {
                            size: cls.orbit_size(&label),
                            min_weight: cls.min_weight(&label),
                            label,
                        },
                    })
                })
                .collect::<Result<Vec<_>, Error>>()?;
            match rows.as_slice() {
                [one] => emit(out, one, pretty)?,
                _ => emit(out, &rows, pretty)?,
            }
        }
        Command::Reach { pair, witness } => {
            let (g, from, to) = parse_pair(&pair)?;
            let cls = Classifier::new(&g)?;
            let r = summary::reach(&cls, &from, &to, witness, &limits)?;
            let mut value = serde_json::to_value(&r).expect("serializable");
            if witness && r.reachable && r.witness.is_none() {
                value["witness"] = Value::Null;
            }
            emit(out, &value, pretty)?;
        }
        Command::Solve(pair) => {
            let (g, from, to) = parse_pair(&pair)?;
            let w = summary::solve(&g, &from, &to, &limits)?;
            let distance = w.as_ref().map(|w| w.len());
            emit(
                out,
                &json!({ "solvable": w.is_some(), "moves": w, "distance": distance }),
                pretty,
            )?;
        }
        Command::Orbits(arg) => {
            let cls = Classifier::new(&parse_graph(&arg)?)?;
            emit(out, &cls.orbit_table(), pretty)?;
        }
        Command::Verify { nmax, jobs, lines } => {
            let report = sweep(nmax, jobs, &limits)?;
            if lines {
                for r in &report.reports {
                    emit(out, r, false)?;
                }
            }
            emit(out, &report, pretty)?;
        }
        Command::Forms(arg) => {
            let g = parse_graph(&arg)?;
            let ao = check_ao_bijection(&g, &limits)?;
            let q_invariant = if g.n() <= Q_CHECK_MAX_N {
                Some(check_q_invariance(&g, &limits)?)
            } else {
                None
            };
            let forms = FormsOutput {
                rank: ao.rank,
                nonsingular: ao.nonsingular,
                congruence: check_congruence(&g),
                q_invariant,
                transpose_orbit_count: ao.transpose_orbit_count,
                orbit_count: ao.orbit_count,
                well_defined: ao.well_defined,
                bijection: ao.bijection,
            };
            emit(out, &forms, pretty)?;
        }
        Command::Serve { port, host, static_dir } => {
            let addr = SocketAddr::new(host, port);
            let config = ServerConfig { limits, static_dir };
            eprintln!("listening on http://{addr}");
            tokio::runtime::Runtime::new()?.block_on(flipgame_server::serve(addr, config))?;
        }
    }
    Ok(())
}
