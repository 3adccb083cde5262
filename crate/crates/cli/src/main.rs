use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nomasec_cli::sweep::Axis;
use nomasec_cli::{
    run_sweep, write_csv, CliError, Evaluator, Fault, Params, Preset, Result, ValidateOptions,
    Validator,
};
use nomasec_core::{Method, Metric, MetricEstimate, Mode, SystemConfig};
use serde::Serialize;

/// Secrecy outage and ergodic secrecy rates of two-user downlink NOMA
#[derive(Parser, Debug)]
#[command(name = "nomasec", version, about)]
struct Cli {
    /// Worker threads (defaults to one per core); results do not depend on it
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Secrecy outage probability at one operating point
    Sop(SopArgs),
    /// Ergodic rate at one operating point
    Ergodic(ErgodicArgs),
    /// Sweep one parameter and write CSV
    Sweep(SweepArgs),
    /// Cross-check closed forms, Monte Carlo and the integration oracle
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct SopArgs {
    #[command(flatten)]
    params: Params,
    /// analytic, monte-carlo (mc) or oracle
    #[arg(long, default_value = "analytic")]
    method: Method,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ErgodicKind {
    NearSecrecy,
    FarSecrecy,
    FarRate,
}

#[derive(Args, Debug)]
struct ErgodicArgs {
    #[command(flatten)]
    params: Params,
    #[arg(long, value_enum)]
    metric: ErgodicKind,
    /// analytic, monte-carlo (mc) or oracle
    #[arg(long, default_value = "analytic")]
    method: Method,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[command(flatten)]
    params: Params,
    /// Start from a named sweep; other sweep flags override it
    #[arg(long)]
    preset: Option<Preset>,
    /// pbs-db or am2
    #[arg(long)]
    axis: Option<Axis>,
    #[arg(long)]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long)]
    steps: Option<usize>,
    /// Comma-separated metric names
    #[arg(long, value_delimiter = ',')]
    metrics: Option<Vec<Metric>>,
    /// Comma-separated methods
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<Method>>,
    /// Write CSV here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FaultArg {
    FarLeakageSign,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Use 1e5 Monte-Carlo draws instead of 1e6
    #[arg(long)]
    quick: bool,
    #[arg(long)]
    iters: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    quad_n: Option<usize>,
    #[arg(long, value_enum, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Serialize)]
struct PointOutput<'a> {
    metric: Metric,
    #[serde(flatten)]
    estimate: &'a MetricEstimate,
}

fn base_config(params: &Params) -> SystemConfig {
    params.apply(SystemConfig::reference(30.0))
}

fn evaluate_point(
    params: Params,
    metric_for: impl FnOnce(Mode) -> Result<Metric>,
    method: Method,
) -> Result<()> {
    let params = params.resolve()?;
    let cfg = base_config(&params).validate()?;
    let metric = metric_for(cfg.mode())?;
    let eval = Evaluator::new(params.quad_n(), params.iters(), params.seed())?;
    let estimate = eval.evaluate(&cfg, metric, method, 0)?;
    let line = serde_json::to_string(&PointOutput {
        metric,
        estimate: &estimate,
    })
    .expect("estimate serializes");
    println!("{line}");
    Ok(())
}

fn sweep(args: SweepArgs) -> Result<()> {
    let params = args.params.resolve()?;
    let mut spec = match (args.preset, args.axis) {
        (Some(p), _) => p.spec(),
        (None, Some(axis)) => {
            let mut s = Preset::Fig3.spec();
            s.axis = axis;
            s.metrics.clear();
            s
        }
        (None, None) => return Err(CliError::usage("sweep needs --preset or --axis")),
    };
    if let Some(axis) = args.axis {
        spec.axis = axis;
    }
    spec.base = params.apply(spec.base);
    if let Some(v) = args.start {
        spec.start = v;
    }
    if let Some(v) = args.stop {
        spec.stop = v;
    }
    if let Some(v) = args.steps {
        spec.steps = v;
    }
    if let Some(m) = args.metrics {
        spec.metrics = m;
    }
    if let Some(m) = args.methods {
        spec.methods = m;
    }
    spec.iters = params.iters.unwrap_or(spec.iters);
    spec.seed = params.seed.unwrap_or(spec.seed);
    spec.quad_n = params.quad_n.unwrap_or(spec.quad_n);
    if args.preset.is_none()
        && (args.start.is_none() || args.stop.is_none() || spec.metrics.is_empty())
    {
        return Err(CliError::usage(
            "a custom sweep needs --start, --stop and --metrics",
        ));
    }

    let rows = run_sweep(&spec)?;
    match &args.out {
        Some(path) => {
            let file = File::create(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            write_csv(&rows, BufWriter::new(file)).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })
        }
        None => write_csv(&rows, io::stdout().lock()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn validate(args: ValidateArgs) -> Result<bool> {
    let mut opts = if args.quick {
        ValidateOptions::quick()
    } else {
        ValidateOptions::full()
    };
    opts.iters = args.iters.unwrap_or(opts.iters);
    opts.seed = args.seed.unwrap_or(opts.seed);
    opts.quad_n = args.quad_n.unwrap_or(opts.quad_n);
    opts.fault = args.inject_fault.map(|f| match f {
        FaultArg::FarLeakageSign => Fault::FarLeakageSign,
    });
    let report = Validator::new(opts)?.run()?;
    let mut out = io::stdout().lock();
    // A closed pipe is not worth a different exit status.
    let _ = writeln!(out, "{report}");
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::usage(format!("--workers: {e}")))?;
    }
    match cli.command {
        Command::Sop(a) => evaluate_point(
            a.params,
            |mode| {
                Ok(match mode {
                    Mode::WithExternalEve => Metric::SopWithEve,
                    Mode::NoExternalEve => Metric::SopNoEve,
                })
            },
            a.method,
        )?,
        Command::Ergodic(a) => evaluate_point(
            a.params,
            |mode| match (a.metric, mode) {
                (ErgodicKind::NearSecrecy, Mode::WithExternalEve) => Ok(Metric::NearSecrecy),
                (ErgodicKind::NearSecrecy, Mode::NoExternalEve) => Ok(Metric::NearSecrecyNoEve),
                (ErgodicKind::FarSecrecy, Mode::WithExternalEve) => Ok(Metric::FarSecrecy),
                (ErgodicKind::FarSecrecy, Mode::NoExternalEve) => Err(CliError::ModeMismatch {
                    metric: Metric::FarSecrecy,
                }),
                (ErgodicKind::FarRate, _) => Ok(Metric::FarRate),
            },
            a.method,
        )?,
        Command::Sweep(a) => sweep(a)?,
        Command::Validate(a) => {
            if !validate(a)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
