//! `irshcn`: evaluate coverage and throughput of IRS-assisted heterogeneous
//! networks from a TOML scenario, over sweeps or figure presets.
//!
//! Exit codes: 0 success, 1 comparison failed or output could not be
//! written, 2 configuration error (including mismatched comparison grids),
//! 3 numeric failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use irshcn::netmodel::load_scenario;
use irshcn::sweep::{
    compare_files, run_sweep, write_csv_file, write_gnuplot, Engine, EngineSet, Figure, SweepParam, SweepRow, SweepSpec,
};
use irshcn::{Error, Scenario};

#[derive(Parser)]
#[command(
    name = "irshcn",
    version,
    about = "Coverage and spatial throughput of IRS-assisted K-tier HCNs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario, a parameter sweep or a figure preset and write CSV.
    Run(RunArgs),
    /// Compare two sweep CSVs point by point.
    Compare(CompareArgs),
    /// Print the built-in reference scenario as TOML.
    Reference,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Analytical,
    Sim,
    Both,
}

impl From<EngineArg> for EngineSet {
    fn from(e: EngineArg) -> Self {
        match e {
            EngineArg::Analytical => EngineSet::Analytical,
            EngineArg::Sim => EngineSet::Simulation,
            EngineArg::Both => EngineSet::Both,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FigureArg {
    Fig2,
    Fig3,
    Fig4,
}

impl FigureArg {
    fn name(self) -> &'static str {
        match self {
            FigureArg::Fig2 => "fig2",
            FigureArg::Fig3 => "fig3",
            FigureArg::Fig4 => "fig4",
        }
    }
}

#[derive(clap::Args)]
struct RunArgs {
    /// Scenario file (TOML). The built-in reference scenario is used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "analytical")]
    engine: EngineArg,
    /// Monte Carlo trials per sweep point.
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Sweep one parameter: KEY=v1,v2,... (e.g. irs.density_lambda0=0,200,400).
    /// Tier indices count from 1: tiers[2].bias=1,10,100.
    #[arg(long, conflicts_with = "figure")]
    sweep: Option<String>,
    /// Run a figure preset.
    #[arg(long, value_enum)]
    figure: Option<FigureArg>,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write a gnuplot data file next to the CSV.
    #[arg(long)]
    gnuplot: bool,
}

#[derive(clap::Args)]
struct CompareArgs {
    first: PathBuf,
    second: PathBuf,
    /// Largest allowed absolute deviation of any metric.
    #[arg(long, default_value_t = 0.03)]
    tolerance: f64,
    /// Use only rows of this engine from the first file.
    #[arg(long)]
    engine_a: Option<String>,
    /// Use only rows of this engine from the second file.
    #[arg(long)]
    engine_b: Option<String>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::InvalidScenario(_) => 2,
        Error::NumericFailure { .. } | Error::Precondition(_) | Error::EmptyNetwork => 3,
        Error::Io(_) | Error::Csv(_) => 1,
    }
}

fn fail(e: Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(exit_code(&e))
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("IRSHCN_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("IRSHCN_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn load(args: &RunArgs) -> Result<Scenario, Error> {
    let sc = match &args.config {
        Some(p) => load_scenario(p)?,
        None => Scenario::reference(),
    };
    let report = sc.validate();
    if !report.is_ok() {
        return Err(Error::InvalidScenario(report));
    }
    Ok(sc)
}

fn plan(args: &RunArgs, base: &Scenario) -> Result<(String, Vec<(Scenario, SweepSpec)>), Error> {
    let engines = EngineSet::from(args.engine);
    if args.trials == 0 && engines != EngineSet::Analytical {
        return Err(Error::Config("--trials must be at least 1".into()));
    }
    if let Some(fig) = args.figure {
        let figure: Figure = fig.name().parse()?;
        return Ok((
            fig.name().to_string(),
            figure.sweeps(base, engines, args.trials, args.seed)?,
        ));
    }
    let (param, values) = match &args.sweep {
        Some(s) => SweepSpec::parse_assignment(s)?,
        None => (SweepParam::SinrThresholdDb, vec![base.eval.sinr_threshold_db()]),
    };
    let name = if args.sweep.is_some() { "sweep" } else { "run" };
    let spec = SweepSpec {
        series: String::new(),
        param,
        values,
        engines,
        trials: args.trials,
        seed: args.seed,
    };
    Ok((name.to_string(), vec![(base.clone(), spec)]))
}

fn print_rows(rows: &[SweepRow]) {
    for r in rows {
        let b = &r.breakdown;
        let ci = r
            .overall_ci
            .map(|i| format!(" [{:.4}, {:.4}]", i.lo, i.hi))
            .unwrap_or_default();
        let series = if r.series.is_empty() {
            String::new()
        } else {
            format!("{}  ", r.series)
        };
        println!(
            "{series}{} = {:<8} {:<10} coverage {:.4}{ci}  throughput {:.4e}  ({:.2} s)",
            r.param,
            r.value,
            r.engine.tag(),
            b.overall_coverage,
            b.throughput_bps_hz_per_m2,
            r.wall_time_s
        );
    }
}

fn run(args: RunArgs) -> Result<(), Error> {
    let base = load(&args)?;
    let (name, sweeps) = plan(&args, &base)?;
    std::fs::create_dir_all(&args.out)?;
    let mut rows = Vec::new();
    for (sc, spec) in &sweeps {
        let part = run_sweep(sc, spec)?;
        print_rows(&part);
        rows.extend(part);
    }
    let csv = args.out.join(format!("{name}.csv"));
    write_csv_file(&rows, &csv)?;
    eprintln!("wrote {}", csv.display());
    if args.gnuplot {
        let dat = args.out.join(format!("{name}.dat"));
        write_gnuplot(&rows, std::fs::File::create(&dat)?)?;
        eprintln!("wrote {}", dat.display());
    }
    Ok(())
}

fn engine_filter(v: &Option<String>) -> Result<Option<Engine>, Error> {
    v.as_deref().map(str::parse).transpose()
}

fn compare(args: CompareArgs) -> Result<bool, Error> {
    let report = compare_files(
        Path::new(&args.first),
        Path::new(&args.second),
        args.tolerance,
        engine_filter(&args.engine_a)?,
        engine_filter(&args.engine_b)?,
    )
    .map_err(|e| match e {
        // unreadable inputs are a usage problem, not an output failure
        Error::Io(io) => Error::Config(io.to_string()),
        other => other,
    })?;
    println!("{report}");
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = configure_threads() {
        return fail(e);
    }
    match cli.command {
        Command::Run(args) => match run(args) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => fail(e),
        },
        Command::Compare(args) => match compare(args) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => fail(e),
        },
        Command::Reference => match Scenario::reference().to_toml_string() {
            Ok(s) => {
                print!("{s}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
    }
}
