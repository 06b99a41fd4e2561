use std::path::PathBuf;
use std::process::ExitCode;

use chainbath::{
    closed_form_zeros, derived_quantities, locate_zeros_numeric, spectral_density, tune_epsilon,
    Attachment, Branch,
};
use chainbath_cli::config::{load_config, Preset, Profile, SweepConfig};
use chainbath_cli::error::{CliError, Result};
use chainbath_cli::{output, sweep};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "chainbath", version)]
#[command(about = "Entanglement of two oscillators coupled through a harmonic chain")]
struct Cli {
    /// JSON configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Named base configuration
    #[arg(long, global = true)]
    preset: Option<Preset>,

    /// Output directory (overrides `out_dir`)
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// `desk` shrinks the chain for quick runs
    #[arg(long, global = true, value_enum, default_value = "paper")]
    profile: Profile,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Time series of one (r, T) point over the analysis window
    Simulate {
        /// Squeezing (default: first `r_grid` entry)
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        /// Temperature (default: first `T_grid` entry)
        #[arg(long = "T")]
        temperature: Option<f64>,
    },
    /// Long-time entanglement over the (r, T) grid
    PhaseDiagram,
    /// Line spectrum and smoothed spectral density
    Spectrum {
        #[arg(long, value_enum)]
        branch: Option<BranchArg>,
        /// Samples of the smoothed density
        #[arg(long, default_value_t = 2000)]
        points: usize,
    },
    /// Closed-form and numerically located zeros of the spectral densities
    Zeros {
        /// Requested accuracy (default: one mean mode spacing)
        #[arg(long)]
        resolution: Option<f64>,
    },
    /// Detuning that puts the shifted frequency on a spectral zero
    TuneEpsilon {
        #[arg(long, value_enum, default_value = "minus")]
        branch: BranchArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Window-mean entanglement against oscillator separation
    DistanceScan {
        /// Attachment sites, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        s: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        #[arg(long = "T")]
        temperature: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Plus,
    Minus,
    Single,
}

impl From<BranchArg> for Branch {
    fn from(b: BranchArg) -> Self {
        match b {
            BranchArg::Plus => Branch::Plus,
            BranchArg::Minus => Branch::Minus,
            BranchArg::Single => Branch::Single,
        }
    }
}

fn default_branch(attachment: Attachment) -> Branch {
    match attachment {
        Attachment::SingleEdge => Branch::Single,
        _ => Branch::Plus,
    }
}

fn branches(attachment: Attachment) -> Vec<Branch> {
    match attachment {
        Attachment::SingleEdge => vec![Branch::Single],
        _ => vec![Branch::Plus, Branch::Minus],
    }
}

fn report(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Invalid {
                field: "threads".into(),
                reason: "must be >= 1".into(),
            });
        }
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let mut config: SweepConfig =
        load_config(cli.config.as_deref(), cli.preset)?.with_profile(cli.profile);
    if let Some(out) = cli.out {
        config.out_dir = out;
    }
    config.validate()?;
    let out = config.out_dir.clone();

    match cli.command {
        Command::Simulate { r, temperature } => {
            let r = r.unwrap_or(config.r_grid[0]);
            let t = temperature.unwrap_or(config.temperature_grid[0]);
            let series = sweep::run_time_series(&config, r, t)?;
            println!(
                "r={r} T={t}: {} (eN min {:.6}, max {:.6}, mean {:.6})",
                series.stats.label, series.stats.min, series.stats.max, series.stats.mean
            );
            report(&output::write_time_series(&out, &series)?);
        }
        Command::PhaseDiagram => {
            let diagram = sweep::run_phase_diagram(&config)?;
            println!(
                "{}x{} grid, {} samples per cell",
                diagram.r_grid.len(),
                diagram.temperature_grid.len(),
                diagram.metadata.samples
            );
            report(&output::write_phase_diagram(&out, &diagram)?);
        }
        Command::Spectrum { branch, points } => {
            let branch = branch.map_or(default_branch(config.model.attachment), Branch::from);
            let density = spectral_density(&config.model, branch)?;
            report(&output::write_spectrum(&out, &density, points)?);
        }
        Command::Zeros { resolution } => {
            let derived = derived_quantities(&config.model)?;
            let mut found = serde_json::Map::new();
            for b in branches(config.model.attachment) {
                let density = spectral_density(&config.model, b)?;
                let search =
                    locate_zeros_numeric(&density, resolution.unwrap_or(density.mean_spacing()))?;
                if search.under_resolved {
                    eprintln!("warning: chain too short for the requested resolution ({b} branch)");
                }
                found.insert(
                    b.to_string(),
                    json!({
                        "zeros": search.zeros,
                        "mean_spacing": density.mean_spacing(),
                        "under_resolved": search.under_resolved,
                    }),
                );
            }
            let closed = match derived.separation {
                Some(d) if d > 1.0 => {
                    let (plus, minus) = closed_form_zeros(d, derived.omega_cut)?;
                    let freqs = |z: &chainbath::ZeroSet| z.zeros.iter().map(|p| p.1).collect::<Vec<_>>();
                    json!({ "separation": d, "plus": freqs(&plus), "minus": freqs(&minus) })
                }
                _ => serde_json::Value::Null,
            };
            let doc = json!({ "numeric": found, "closed_form": closed });
            std::fs::create_dir_all(&out).map_err(|e| CliError::Io {
                path: out.clone(),
                source: e,
            })?;
            let path = out.join("zeros.json");
            output::write_json(&path, &doc)?;
            println!("{}", serde_json::to_string_pretty(&doc).expect("zeros serialize"));
            report(&[path]);
        }
        Command::TuneEpsilon { branch, k } => {
            let eps = tune_epsilon(&config.model, branch.into(), k)?;
            println!("{eps}");
        }
        Command::DistanceScan { s, r, temperature } => {
            let r = r.unwrap_or(config.r_grid[0]);
            let t = temperature.unwrap_or(config.temperature_grid[0]);
            let scan = sweep::run_distance_scan(&config, &s, r, t)?;
            for row in &scan.rows {
                println!(
                    "d={} s={} eps={:.6} eN={:.6} {}",
                    row.separation, row.site, row.epsilon, row.e_n_mean, row.label
                );
            }
            for s in &scan.skipped {
                eprintln!("skipped s={s}: no real detuning reaches the zero");
            }
            report(&output::write_distance_scan(&out, &scan)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
