use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lemlab::{replay, run, Command, CliError, MathParams, RunConfig, RunReport};

#[derive(Parser)]
#[command(name = "lemlab", version, about = "Numerical checks of minimum-modulus principles for psh functions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// JSON input document (polynomial, measure, Green spec or plane set).
    #[arg(long)]
    input: Option<PathBuf>,
    /// Directory for report.json and plot data.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for every random choice; mandatory.
    #[arg(long)]
    seed: Option<u64>,
    /// Grid side for grid-based checks.
    #[arg(long)]
    grid: Option<usize>,
    /// Number of random samples.
    #[arg(long)]
    samples: Option<usize>,
    /// Sphere quadrature nodes for numeric oracles.
    #[arg(long)]
    quad_nodes: Option<usize>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    /// The radius R.
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Content exponent for `essential`.
    #[arg(long)]
    p: Option<f64>,
    /// Overrides the empirical unit-ball mass constant.
    #[arg(long)]
    c_n: Option<f64>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cartan-Boutroux discs for the zeros of a polynomial.
    Cartan(RunArgs),
    /// Minimum modulus of f with f(0) = 1 outside small discs.
    Minmod(RunArgs),
    /// Lower bound for normalized functions of logarithmic growth.
    Thm42(RunArgs),
    /// Sublevel sets of normalized functions of logarithmic growth.
    Cor43(RunArgs),
    /// Logarithmic capacity of a plane set.
    Capacity(RunArgs),
    /// Content of a plane set against its capacity.
    Cor44(RunArgs),
    /// H(eta), nu(sigma, tau) and rho(sigma, tau).
    Constants(RunArgs),
    /// Hadamard three-circle maximum estimate.
    ThreeCircleMax(RunArgs),
    /// Lelong numbers of a normalized function against nu(sigma, tau).
    LelongBound(RunArgs),
    /// Three-circle minimum estimate.
    ThreeCircleMin(RunArgs),
    /// Simplified three-circle lower bound for V(0) = 0.
    Cor64(RunArgs),
    /// Essential lower bound for a sequence of content budgets.
    Essential(RunArgs),
    /// Lower bound for Green potentials of the unit ball.
    Lemma51(RunArgs),
    /// Atomic Green potentials of total weight at most one.
    Prop52(RunArgs),
    /// Lower bound for nonpositive psh functions on the unit ball.
    Thm53(RunArgs),
    /// Re-run a stored report and compare payloads byte for byte.
    Replay {
        report: PathBuf,
    },
}

fn config(command: Command, a: RunArgs) -> Result<RunConfig, CliError> {
    let seed = a.seed.ok_or(CliError::MissingSeed)?;
    let mut cfg = RunConfig::new(command, seed);
    cfg.input = a.input;
    cfg.out = a.out;
    cfg.grid = a.grid;
    cfg.samples = a.samples;
    cfg.quad_nodes = a.quad_nodes;
    cfg.params = MathParams {
        eps: a.eps,
        eta: a.eta,
        alpha: a.alpha,
        sigma: a.sigma,
        tau: a.tau,
        nu: a.nu,
        rho: a.rho,
        radius: a.radius,
        s: a.s,
        p: a.p,
        c_n: a.c_n,
    };
    Ok(cfg)
}

fn dispatch(cmd: Cmd) -> Result<RunReport, CliError> {
    let (command, args) = match cmd {
        Cmd::Replay { report } => return replay(&report),
        Cmd::Cartan(a) => (Command::Cartan, a),
        Cmd::Minmod(a) => (Command::Minmod, a),
        Cmd::Thm42(a) => (Command::Thm42, a),
        Cmd::Cor43(a) => (Command::Cor43, a),
        Cmd::Capacity(a) => (Command::Capacity, a),
        Cmd::Cor44(a) => (Command::Cor44, a),
        Cmd::Constants(a) => (Command::Constants, a),
        Cmd::ThreeCircleMax(a) => (Command::ThreeCircleMax, a),
        Cmd::LelongBound(a) => (Command::LelongBound, a),
        Cmd::ThreeCircleMin(a) => (Command::ThreeCircleMin, a),
        Cmd::Cor64(a) => (Command::Cor64, a),
        Cmd::Essential(a) => (Command::Essential, a),
        Cmd::Lemma51(a) => (Command::Lemma51, a),
        Cmd::Prop52(a) => (Command::Prop52, a),
        Cmd::Thm53(a) => (Command::Thm53, a),
    };
    run(&config(command, args)?)
}

fn init_threads() {
    if let Some(k) = std::env::var("LEMLAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            log::warn!("could not size the thread pool: {e}");
        }
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    init_threads();
    match dispatch(cli.cmd) {
        Ok(report) => {
            match serde_json::to_string_pretty(&report.payload) {
                Ok(s) => {
                    let _ = writeln!(std::io::stdout().lock(), "{s}");
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(lemlab::exit_code(&report) as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
