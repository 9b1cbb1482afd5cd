use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use atlas_cli::import::{self, ImportReport};
use atlas_cli::render::{self, Scope};
use atlas_cli::sim::{self, Model, SimRequest};
use atlas_cli::{dump, CliError};
use atlas_core::sim::{SimPolicy, Strategy};
use atlas_core::PersonId;
use atlas_service::{Atlas, Config};
use clap::{Parser, Subcommand, ValueEnum};

/// Seed, inspect and serve an atlas store. Store commands need exclusive
/// access: stop the server first.
#[derive(Debug, Parser)]
#[command(name = "atlas", version)]
struct Cli {
    /// Store directory (event log and snapshot).
    #[arg(long, global = true, default_value = "atlas-data")]
    store: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Add people from a roster CSV.
    ImportRoster { file: PathBuf },
    /// Add co-authorship links from an edge CSV.
    ImportEdges { file: PathBuf },
    /// Store floor plans from a JSON manifest.
    ImportFloors { file: PathBuf },
    /// Draw the global network or one person's ego network as SVG.
    Render {
        #[arg(value_enum)]
        scope: RenderScope,
        /// Person whose ego network to draw.
        #[arg(long, required_if_eq("scope", "ego"))]
        person: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate how much of a network its participants would map.
    Sim {
        #[arg(long, value_enum)]
        model: ModelKind,
        #[arg(long)]
        n: usize,
        /// Links per new node (ba).
        #[arg(long)]
        m: Option<usize>,
        /// Lattice degree (ws).
        #[arg(long)]
        k: Option<usize>,
        /// Rewiring probability (ws).
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        #[arg(long, value_enum, default_value = "random")]
        strategy: StrategyKind,
        #[arg(long, value_enum, default_value = "ego")]
        policy: PolicyKind,
        /// Chance a participant knows a given link among their connections.
        #[arg(long, default_value_t = 1.0)]
        know_prob: f64,
        /// Participant counts, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// TSV output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write roster.csv and edges.csv into a directory.
    Dump { dir: PathBuf },
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RenderScope {
    Global,
    Ego,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelKind {
    Ba,
    Ws,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyKind {
    Random,
    Degree,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyKind {
    Ego,
    ThirdParty,
}

fn open(store: &Path) -> Result<Atlas, CliError> {
    Ok(Atlas::open(store, Config::default())?)
}

fn report(what: &str, r: ImportReport) {
    for w in &r.warnings {
        eprintln!("warning: {w}");
    }
    println!("{what}: {}", r.created);
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::ImportRoster { file } => report("people created", import::import_roster(&open(&cli.store)?, &file)?),
        Command::ImportEdges { file } => report("links created", import::import_edges(&open(&cli.store)?, &file)?),
        Command::ImportFloors { file } => report("floors stored", import::import_floors(&open(&cli.store)?, &file)?),
        Command::Render {
            scope,
            person,
            seed,
            out,
        } => {
            let atlas = open(&cli.store)?;
            let scope = match (scope, person) {
                (RenderScope::Ego, Some(p)) => Scope::Ego(PersonId(p)),
                (RenderScope::Ego, None) => return Err(CliError::Invalid("ego rendering needs --person".into())),
                (RenderScope::Global, _) => Scope::Global,
            };
            let svg = render::render(&atlas.state().graph, scope, seed)?;
            write_file(&out, &svg)?;
        }
        Command::Sim {
            model,
            n,
            m,
            k,
            p,
            strategy,
            policy,
            know_prob,
            ks,
            trials,
            seed,
            out,
        } => {
            let model = match (model, m, k) {
                (ModelKind::Ba, Some(m), _) => Model::ScaleFree { n, m },
                (ModelKind::Ws, _, Some(k)) => Model::Clustered { n, k, p },
                (ModelKind::Ba, None, _) => return Err(CliError::Invalid("--model ba needs --m".into())),
                (ModelKind::Ws, _, None) => return Err(CliError::Invalid("--model ws needs --k".into())),
            };
            let req = SimRequest {
                model,
                strategy: match strategy {
                    StrategyKind::Random => Strategy::Random,
                    StrategyKind::Degree => Strategy::DegreeDescending,
                },
                policy: match policy {
                    PolicyKind::Ego => SimPolicy::ego_only(),
                    PolicyKind::ThirdParty => SimPolicy::third_party(know_prob),
                },
                ks,
                trials,
                seed,
            };
            let tsv = sim::to_tsv(&sim::run(&req)?);
            match out {
                Some(path) => write_file(&path, &tsv)?,
                None => std::io::stdout()
                    .write_all(tsv.as_bytes())
                    .map_err(|e| CliError::io("<stdout>", e))?,
            }
        }
        Command::Dump { dir } => dump::dump(&open(&cli.store)?.state().graph, &dir)?,
        Command::Serve { addr } => {
            let atlas = Arc::new(open(&cli.store)?);
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::io("<runtime>", e))?;
            eprintln!("serving {} on http://{addr}", cli.store.display());
            runtime
                .block_on(atlas_service::http::serve(atlas, addr))
                .map_err(|e| CliError::io(addr.to_string(), e))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
