use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qwalk::dispersion::{dispersion_sweep, linspace, write_sweep_csv};
use qwalk::experiment::{presets, run_experiment, ExperimentConfig, RunOptions, RunSummary};
use qwalk::Error;

#[derive(Parser)]
#[command(name = "qwalk", version, about = "Disordered discrete-time quantum walks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a JSON config file.
    Run {
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run a shipped preset, or print it with --print.
    Preset {
        /// Preset name; omit with --list.
        name: Option<String>,
        /// Print the preset's JSON instead of running it.
        #[arg(long)]
        print: bool,
        /// List the available presets.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write a dispersion grid as CSV.
    Dispersion {
        #[arg(long, default_value_t = -std::f64::consts::SQRT_2, allow_negative_numbers = true)]
        k_min: f64,
        #[arg(long, default_value_t = std::f64::consts::SQRT_2, allow_negative_numbers = true)]
        k_max: f64,
        #[arg(long, default_value_t = 101)]
        k_steps: usize,
        /// Coin angles θ (radians), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.7853981633974483")]
        theta: Vec<f64>,
        /// Phase sums φ = ξ + ζ (radians), comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        phi: Vec<f64>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// First ensemble seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of seeds per disordered group.
    #[arg(long)]
    ensemble: Option<usize>,
    /// Worker threads.
    #[arg(long, env = "QWALK_WORKERS")]
    workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write into a non-empty output directory.
    #[arg(long)]
    overwrite: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config { .. } | Error::OutputExists(_) | Error::Domain(_) | Error::Json(_) | Error::Capacity(_) => 2,
        Error::Invariant(_) | Error::LightCone { .. } => 3,
        Error::Io(_) => 1,
    }
}

fn execute(mut cfg: ExperimentConfig, args: RunArgs) -> qwalk::Result<RunSummary> {
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(n) = args.ensemble {
        cfg.ensemble = n;
    }
    let opts = RunOptions {
        out: args.out,
        overwrite: args.overwrite,
        workers: args.workers,
    };
    run_experiment(&cfg, &opts)
}

fn report(summary: &RunSummary) {
    println!(
        "wrote {} files to {} (config-sha256 {})",
        summary.files.len(),
        summary.output_dir.display(),
        summary.config_sha256
    );
    let show = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_else(|| "-".into());
    for g in &summary.groups {
        println!(
            "{:<24} seeds={:<3} sigma={} entropy={} norm_drift={:.2e}",
            g.label,
            g.seeds.len(),
            show(g.sigma_final_mean),
            show(g.entropy_final_mean),
            g.max_norm_drift
        );
    }
    for v in &summary.velocities {
        println!(
            "{:<24} t={:<6} median|v_g|={:.6} var={:.3e}",
            v.label, v.t, v.v_g_median_abs, v.v_g_variance
        );
    }
}

fn main_inner(cli: Cli) -> qwalk::Result<()> {
    match cli.command {
        Command::Run { config, run } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            report(&execute(cfg, run)?);
        }
        Command::Preset { name, print, list, run } => {
            if list {
                for n in presets::names() {
                    println!("{n}");
                }
                return Ok(());
            }
            let name = name.ok_or_else(|| Error::Config {
                path: "preset".into(),
                message: "a preset name is required (see --list)".into(),
            })?;
            if print {
                print!("{}", presets::preset_text(&name)?);
                return Ok(());
            }
            report(&execute(presets::preset(&name)?, run)?);
        }
        Command::Dispersion { k_min, k_max, k_steps, theta, phi, out } => {
            let rows = dispersion_sweep(&linspace(k_min, k_max, k_steps), &theta, &phi)?;
            match out {
                Some(path) => {
                    let mut bytes = Vec::new();
                    write_sweep_csv(&mut bytes, &rows)?;
                    std::fs::write(path, bytes)?;
                }
                None => write_sweep_csv(std::io::stdout().lock(), &rows)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match main_inner(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qwalk: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
