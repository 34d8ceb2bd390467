use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use graphene_dsmc::analysis::{seeded_property_suite, SuiteSizes};
use graphene_dsmc::io::{self, RunConfig};
use graphene_dsmc::{run_with, Error, Mode, RunOptions, SimConfig};

/// Ensemble Monte Carlo transport in graphene with electron-electron
/// scattering.
#[derive(Parser, Debug)]
#[command(name = "graphene-dsmc", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one simulation and write time series, snapshot and metadata.
    Run(RunArgs),
    /// Compare a run without e-e scattering against one with it.
    Compare(CompareArgs),
    /// Dump phonon (and optionally e-e) rates.
    Rates(RatesArgs),
    /// Run the collision-operator property suite.
    Analyze(AnalyzeArgs),
}

#[derive(Args, Debug)]
struct Overrides {
    /// JSON configuration file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Disable e-e scattering regardless of the file.
    #[arg(long)]
    no_ee: bool,
    /// Output directory (overrides `output_dir` in the file).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    /// Worker cap in parallel mode.
    #[arg(long, env = "GRAPHENE_DSMC_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    common: Overrides,
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// Directory of the run without e-e scattering.
    #[arg(required_unless_present = "config", requires = "ee_dir")]
    noee_dir: Option<PathBuf>,
    /// Directory of the run with e-e scattering.
    ee_dir: Option<PathBuf>,
    /// Run both variants from this configuration first.
    #[arg(long, conflicts_with = "noee_dir")]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long, env = "GRAPHENE_DSMC_THREADS")]
    threads: Option<usize>,
}

#[derive(Args, Debug)]
struct RatesArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also dump the e-e rate against |k1|.
    #[arg(long)]
    ee: bool,
    /// Energy points of the phonon table.
    #[arg(long, default_value_t = 241)]
    points: usize,
    /// Wave-vector points of the e-e curve.
    #[arg(long, default_value_t = 60)]
    ee_points: usize,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Directory for the machine-readable report.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Sample sizes reduced a hundredfold.
    #[arg(long)]
    quick: bool,
    /// Radius (1/nm) of the disk the incoming wave-vectors are drawn from.
    #[arg(long, default_value_t = 1.0)]
    k_scale: f64,
}

const DEFAULT_OUT: &str = "out";

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Compare(a) => cmd_compare(a),
        Command::Rates(a) => cmd_rates(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let config_error = matches!(
                err.downcast_ref::<Error>(),
                Some(Error::ConfigFile { .. } | Error::ConfigSyntax { .. } | Error::Config(_))
            );
            ExitCode::from(if config_error { 2 } else { 1 })
        }
    }
}

fn load(path: &Path, seed: Option<u64>, no_ee: bool, mode: Option<Mode>) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    let sim = &mut cfg.simulation;
    if let Some(seed) = seed {
        sim.seed = seed;
    }
    if no_ee {
        sim.ee_enabled = false;
    }
    if let Some(mode) = mode {
        sim.mode = mode;
    }
    sim.validate()?;
    Ok(cfg)
}

fn out_dir(flag: Option<PathBuf>, cfg: &RunConfig) -> PathBuf {
    flag.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| DEFAULT_OUT.into())
}

fn simulate(sim: &SimConfig, dir: &Path, threads: Option<usize>) -> anyhow::Result<()> {
    let start = Instant::now();
    let output = run_with(sim, RunOptions { threads })?;
    let files = io::write_run(dir, sim, &output)?;
    let d = &output.diagnostics;
    for w in &d.warnings {
        eprintln!("warning: {w}");
    }
    let (v, w) = output.series.steady_state(io::STEADY_FRACTION);
    println!(
        "{}: ee={} seed={} V=({:.3}, {:.3}) nm/ps W={:.5} eV max_f={:.4} (quantum {:.4}) in {:.1?}",
        dir.display(),
        sim.ee_enabled,
        sim.seed,
        v.x,
        v.y,
        w,
        d.max_occupancy,
        d.quantum,
        start.elapsed()
    );
    for path in [&files.time_series, &files.snapshot, &files.metadata] {
        println!("  wrote {}", path.display());
    }
    Ok(())
}

fn cmd_run(a: RunArgs) -> anyhow::Result<ExitCode> {
    let o = a.common;
    let cfg = load(&o.config, o.seed, o.no_ee, o.mode)?;
    let dir = out_dir(o.out, &cfg);
    simulate(&cfg.simulation, &dir, o.threads)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_compare(a: CompareArgs) -> anyhow::Result<ExitCode> {
    let (noee, ee, out) = match (&a.config, a.noee_dir, a.ee_dir) {
        (Some(path), _, _) => {
            let cfg = load(path, a.seed, false, a.mode)?;
            let out = out_dir(a.out, &cfg);
            let (noee, ee) = (out.join("noee"), out.join("ee"));
            let mut sim = cfg.simulation;
            sim.ee_enabled = false;
            simulate(&sim, &noee, a.threads)?;
            sim.ee_enabled = true;
            simulate(&sim, &ee, a.threads)?;
            (noee, ee, out)
        }
        (None, Some(noee), Some(ee)) => {
            let out = a.out.unwrap_or_else(|| ee.clone());
            (noee, ee, out)
        }
        _ => unreachable!("clap enforces either --config or two directories"),
    };
    let cmp = io::compare_runs(&noee, &ee, &out)
        .with_context(|| format!("comparing {} with {}", noee.display(), ee.display()))?;
    println!("steady drift speed without e-e: {:.4} nm/ps", cmp.v_noee);
    println!("steady drift speed with e-e:    {:.4} nm/ps", cmp.v_ee);
    println!("steady mean energy: {:.5} eV / {:.5} eV", cmp.w_noee, cmp.w_ee);
    println!("velocity reduction: {:.2}%", 100.0 * cmp.reduction);
    println!("  wrote {}", out.join(io::COMPARE_FILE).display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_rates(a: RatesArgs) -> anyhow::Result<ExitCode> {
    let cfg = load(&a.config, None, false, None)?;
    let dir = out_dir(a.out, &cfg);
    std::fs::create_dir_all(&dir)?;
    let sim = &cfg.simulation;
    let table = io::phonon_rate_table(sim, a.points)?;
    let path = dir.join(io::PHONON_RATES_FILE);
    io::write_phonon_rates(&path, sim, &table)?;
    println!("wrote {}", path.display());
    if a.ee {
        let rows = io::ee_rate_curve(sim, a.ee_points)?;
        let path = dir.join(io::EE_RATES_FILE);
        io::write_ee_rates(&path, sim, &rows)?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_analyze(a: AnalyzeArgs) -> anyhow::Result<ExitCode> {
    let mut sizes = SuiteSizes::default();
    if a.quick {
        sizes = SuiteSizes {
            quadruples: sizes.quadruples / 100,
            candidates: 10,
            kernel_members: 10,
            kernel_quadruples: sizes.kernel_quadruples / 100,
            entropy_evaluations: sizes.entropy_evaluations / 100,
        };
    }
    let results = seeded_property_suite(sizes, a.k_scale, a.seed);
    let mut failed = 0;
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!r.passed);
        println!("{status} {:<34} value={:.3e} threshold={:.1e} {}", r.name, r.value, r.threshold, r.detail);
    }
    if let Some(dir) = a.out {
        std::fs::create_dir_all(&dir)?;
        let path = dir.join("analysis.json");
        io::write_json(&path, &results)?;
        println!("wrote {}", path.display());
    }
    println!("{} of {} checks passed", results.len() - failed, results.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
