use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wsumci::coverage::{sweep, write_csv, SweepConfig};
use wsumci::{compute_interval, Error, IntervalRequest, Method, Model, SolverConfig};

mod report;

#[derive(Parser)]
#[command(name = "wsumci", version, about = "Confidence intervals for w1*theta1 + w2*theta2 from two binomial samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a confidence interval for an observed outcome
    Ci(CiArgs),
    /// Coverage probability and expected length over a grid of vartheta
    Coverage(CoverageArgs),
    /// List the attainable values of the estimator
    Support(SupportArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// weight of the first stratum, in (0, 1)
    #[arg(long, allow_negative_numbers = true)]
    w1: f64,
    /// trials in the first sample
    #[arg(long)]
    n1: u32,
    /// trials in the second sample
    #[arg(long)]
    n2: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Standard,
    Shortest,
    Randomized,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Standard => Method::Standard,
            MethodArg::Shortest => Method::Shortest,
            MethodArg::Randomized => Method::Randomized,
        }
    }
}

#[derive(Args)]
struct CiArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// successes in the first sample
    #[arg(long)]
    k1: u32,
    /// successes in the second sample
    #[arg(long)]
    k2: u32,
    /// confidence level, in (0.5, 1)
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Randomized)]
    method: MethodArg,
    /// auxiliary uniform for randomization, in [0, 1]
    #[arg(long, allow_negative_numbers = true)]
    y: Option<f64>,
    /// seed used to draw y when it is not given
    #[arg(long)]
    seed: Option<u64>,
    /// also write the report as JSON to this path
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct CoverageArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long, default_value_t = 0.95, allow_negative_numbers = true)]
    gamma: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Shortest)]
    method: MethodArg,
    /// number of interior vartheta points
    #[arg(long, default_value_t = 99)]
    grid: usize,
    /// midpoint nodes for averaging over y (randomized only)
    #[arg(long, default_value_t = 64)]
    y_nodes: usize,
    /// CSV destination; standard output if omitted
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SupportArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// show only the neighbors of this support point
    #[arg(long, allow_negative_numbers = true)]
    around: Option<f64>,
}

enum CliError {
    /// bad flags, exit code 2
    Usage(String),
    /// numerical failure, exit code 1
    Numeric(String),
    Io(io::Error),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn numeric(e: Error) -> CliError {
    match e {
        Error::InvalidModel(msg) | Error::InvalidRequest(msg) => CliError::Usage(msg),
        other => CliError::Numeric(other.to_string()),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn build_model(args: &ModelArgs) -> Result<Model, CliError> {
    if !(args.w1 > 0.0 && args.w1 < 1.0) {
        return Err(usage(format!("--w1 must lie in (0, 1), got {}", args.w1)));
    }
    if args.n1 == 0 {
        return Err(usage("--n1 must be at least 1"));
    }
    if args.n2 == 0 {
        return Err(usage("--n2 must be at least 1"));
    }
    Model::new(args.n1, args.n2, args.w1).map_err(numeric)
}

fn check_gamma(gamma: f64) -> Result<(), CliError> {
    if gamma > 0.5 && gamma < 1.0 {
        Ok(())
    } else {
        Err(usage(format!("--gamma must lie in (0.5, 1), got {gamma}")))
    }
}

fn cmd_ci(args: CiArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    if args.k1 > args.model.n1 {
        return Err(usage(format!("--k1 {} exceeds --n1 {} (k1 > n1)", args.k1, args.model.n1)));
    }
    if args.k2 > args.model.n2 {
        return Err(usage(format!("--k2 {} exceeds --n2 {} (k2 > n2)", args.k2, args.model.n2)));
    }
    check_gamma(args.gamma)?;
    if let Some(y) = args.y {
        if !(0.0..=1.0).contains(&y) {
            return Err(usage(format!("--y must lie in [0, 1], got {y}")));
        }
    }
    let method = Method::from(args.method);
    if method == Method::Randomized && args.y.is_none() && args.seed.is_none() {
        return Err(usage("--method randomized needs --y or --seed"));
    }

    let mut req = IntervalRequest::new(model, args.k1, args.k2, args.gamma, method);
    req.y = args.y;
    req.seed = args.seed;
    let interval = compute_interval(&req, &SolverConfig::default()).map_err(numeric)?;

    let rep = report::Report::new(&req, &interval);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    rep.write_text(&mut out)?;
    if let Some(path) = args.json {
        let mut file = BufWriter::new(File::create(&path)?);
        rep.write_json(&mut file)?;
        file.flush()?;
    }
    Ok(())
}

fn cmd_coverage(args: CoverageArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    check_gamma(args.gamma)?;
    if args.grid == 0 {
        return Err(usage("--grid must be at least 1"));
    }
    if args.y_nodes == 0 {
        return Err(usage("--y-nodes must be at least 1"));
    }
    let cfg = SweepConfig {
        grid_points: args.grid,
        y_nodes: args.y_nodes,
        method: args.method.into(),
        gamma: args.gamma,
        ..SweepConfig::default()
    };
    let points = sweep(&model, &cfg).map_err(numeric)?;

    let summary = report::coverage_summary(&points, cfg.method);
    match args.out {
        Some(path) => {
            write_csv(&points, BufWriter::new(File::create(&path)?))?;
            print!("{summary}");
        }
        None => {
            write_csv(&points, io::stdout().lock())?;
            eprint!("{summary}");
        }
    }
    Ok(())
}

fn cmd_support(args: SupportArgs) -> Result<(), CliError> {
    let model = build_model(&args.model)?;
    let grid = model.grid();
    let around = match args.around {
        Some(u) => Some(
            grid.find(u)
                .ok_or_else(|| usage(format!("--around {u} is not a support point")))?,
        ),
        None => None,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "grid size: {}", grid.len())?;
    match around {
        Some(idx) => {
            let (lo, hi) = grid.neighbors(grid.value(idx)).map_err(numeric)?;
            writeln!(
                out,
                "u- = {}, u = {}, u+ = {}",
                report::sig(lo),
                report::sig(grid.value(idx)),
                report::sig(hi)
            )?;
        }
        None => {
            for &v in grid.values() {
                writeln!(out, "{}", report::sig(v))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Ci(args) => cmd_ci(args),
        Command::Coverage(args) => cmd_coverage(args),
        Command::Support(args) => cmd_support(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: numerical failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
