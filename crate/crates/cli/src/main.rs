//! `tsys`: compute, cross-check, specialize and export solutions of the
//! octahedron recurrence with principal coefficients.
//!
//! Exit codes: 0 on success, 2 for a bad request (including points outside
//! the solvable scope), 3 when an internal invariant fails, such as two
//! solvers disagreeing under `--method all`.

mod config;
mod error;
mod render;

use std::fs;
use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use tsys::graph::{build_closure, build_graph};
use tsys::matching::{
    edge_weight_set, enumerate_matchings, extend_matching, face_weight, pairing_weight, perfect_pairing,
};
use tsys::network::{network_matrix, NetworkInstance};
use tsys::oracle::Instance;
use tsys::solve::{solve, solve_all, Method};
use tsys::specialize::{lambda_scheme, pentagram_scheme, specialize_instance, speyer_scheme, Pentagram};

use crate::config::{RunConfig, SurfaceSource};
use crate::error::CliError;
use crate::render::{MatchingRow, Rendered};

#[derive(Parser)]
#[command(name = "tsys", version, about = "Octahedron recurrence with principal coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance with one method, or with all five and cross-check.
    Compute(ComputeArgs),
    /// Dump a graph, closure, network or matching list.
    Export(ExportArgs),
    /// Specialize the solution to another coefficient system (fund only).
    Specialize(SpecializeArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// Target point `i j k`, with `i+j+k` odd.
    #[arg(long, num_args = 3, value_names = ["I", "J", "K"], allow_negative_numbers = true, required = true)]
    point: Vec<i32>,
    /// `fund`, or a surface JSON file.
    #[arg(long, default_value = "fund")]
    surface: String,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Oracle,
    Matching,
    Edge,
    Path,
    Network,
    All,
}

impl MethodArg {
    fn method(self) -> Option<Method> {
        match self {
            MethodArg::Oracle => Some(Method::Oracle),
            MethodArg::Matching => Some(Method::Matching),
            MethodArg::Edge => Some(Method::Edge),
            MethodArg::Path => Some(Method::Path),
            MethodArg::Network => Some(Method::Network),
            MethodArg::All => None,
        }
    }
}

#[derive(Args)]
struct ComputeArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Oracle)]
    method: MethodArg,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExportWhat {
    Graph,
    Closure,
    Network,
    Matchings,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(value_enum)]
    what: ExportWhat,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    Speyer,
    Lambda,
    Pentagram,
}

#[derive(Args)]
struct SpecializeArgs {
    #[arg(long, value_enum)]
    scheme: SchemeArg,
    #[command(flatten)]
    instance: InstanceArgs,
    /// Pentagram polygon size.
    #[arg(long, required_if_eq("scheme", "pentagram"))]
    n: Option<i32>,
    /// Pentagram diagonal parameter, `3 <= kappa <= n-1`.
    #[arg(long, required_if_eq("scheme", "pentagram"))]
    kappa: Option<i32>,
    /// Also print the pentagram variables `q` and `p` with this index.
    #[arg(long, requires = "n")]
    index: Option<i32>,
    /// The step at which `--index` reads `q` and `p`.
    #[arg(long, default_value_t = 1, requires = "index")]
    step: i32,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Compute(args) => {
            let cfg = RunConfig::from_args(&args.instance)?;
            emit(None, &compute(&cfg, args.method)?)
        }
        Command::Export(args) => {
            let cfg = RunConfig::from_args(&args.instance)?;
            emit(args.out.as_deref(), &export(&cfg, args.what)?)
        }
        Command::Specialize(args) => {
            let cfg = RunConfig::from_args(&args.instance)?;
            emit(None, &specialize(&cfg, &args)?)
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|source| CliError::Io { path: "stdout".into(), source })
        }
    }
}

fn compute(cfg: &RunConfig, method: MethodArg) -> Result<String, CliError> {
    let inst = cfg.instance()?;
    let rendered = match method.method() {
        Some(m) => Rendered::solution(cfg, m.name(), &solve(&inst, m)?, None),
        None => {
            let all = solve_all(&inst)?;
            let dissenters = all.dissenters();
            if !dissenters.is_empty() {
                return Err(CliError::Disagreement(dissenters.iter().map(|m| m.name()).collect::<Vec<_>>().join(", ")));
            }
            let note = format!("{}/{} methods agree", all.agreeing(), all.values.len());
            Rendered::solution(cfg, "all", all.value(), Some(note))
        }
    };
    Ok(rendered.to_format(cfg.format))
}

fn export(cfg: &RunConfig, what: ExportWhat) -> Result<String, CliError> {
    let inst = cfg.instance()?;
    let (s, p) = (inst.surface(), inst.point());
    Ok(match what {
        ExportWhat::Graph => build_graph(s, p)?.to_dot(&Default::default()),
        ExportWhat::Closure => build_closure(s, p)?.to_dot(&Default::default()),
        ExportWhat::Matchings => {
            let g = build_graph(s, p)?;
            let gbar = build_closure(s, p)?;
            let rows = enumerate_matchings(&g)
                .iter()
                .map(|m| {
                    Ok(MatchingRow {
                        edges: m.edges().to_vec(),
                        w_f: face_weight(&g, m),
                        w_p: pairing_weight(s, &perfect_pairing(&g, m)?),
                        w_e: edge_weight_set(&gbar, s, extend_matching(&g, &gbar, m).edges()),
                    })
                })
                .collect::<Result<Vec<_>, tsys::matching::MatchingError>>()?;
            render::matchings(&rows, cfg.format)
        }
        ExportWhat::Network => {
            let ni = NetworkInstance::new(&inst)?;
            let order = ni.network.canonical_order()?;
            let chips = ni.generic_chips(&order)?;
            let matrix = network_matrix(ni.network.rows(), &chips);
            render::network(&ni, &order, &chips, &matrix, cfg.format)
        }
    })
}

fn specialize(cfg: &RunConfig, args: &SpecializeArgs) -> Result<String, CliError> {
    if cfg.surface != SurfaceSource::Fund {
        return Err(CliError::NotFund);
    }
    let inst: Instance = cfg.instance()?;
    let scheme = match args.scheme {
        SchemeArg::Speyer => speyer_scheme(),
        SchemeArg::Lambda => lambda_scheme(),
        SchemeArg::Pentagram => pentagram_scheme(args.n.unwrap_or_default(), args.kappa.unwrap_or_default())?,
    };
    let t = solve(&inst, Method::Oracle)?;
    let value = specialize_instance(&inst, &t, &scheme)?;
    let mut rendered = Rendered::solution(cfg, scheme.name(), &value, None);
    if let (Some(index), Some(n), Some(kappa)) = (args.index, args.n, args.kappa) {
        let pentagram = Pentagram::new(n, kappa)?;
        rendered.extra.push((format!("q({},{index})", args.step), pentagram.q(index, args.step)?.to_string()));
        rendered.extra.push((format!("p({},{index})", args.step), pentagram.p(index, args.step)?.to_string()));
    }
    Ok(rendered.to_format(cfg.format))
}
