use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use swingby_cli::catalog::Catalog;
use swingby_cli::config::{parse_config, LoadedConfig};
use swingby_cli::heatmap::{figure_filename, render_heatmap, Metric};
use swingby_cli::manifest::{build_manifest, manifest_json, FigureEntry};
use swingby_cli::{csvout, sweep};
use swingby_core::aero::band_altitudes;
use swingby_core::maneuver::run_maneuver;
use swingby_core::SpacecraftModel;

#[derive(Parser)]
#[command(name = "swingby", version, about = "Planar Sun-planet flyby maneuver models")]
struct Cli {
    /// Replace the built-in planet catalog with a JSON file.
    #[arg(long, global = true, value_name = "FILE")]
    planets: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fly one maneuver and print the trajectory result as JSON.
    Run {
        /// Maneuver config, JSON.
        #[arg(long)]
        config: PathBuf,
        /// Write the result here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fly an altitude x L/D grid and write results.csv, heatmap SVGs, and
    /// manifest.json into a directory.
    Sweep {
        /// Sweep config, JSON.
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; overrides the config.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print the planet catalog as JSON.
    Planets,
    /// Print the analysis-band altitudes of a planet as JSON.
    Bands {
        /// Catalog id, e.g. venus.
        #[arg(long)]
        planet: String,
        /// Spacecraft reference length, m.
        #[arg(long, value_name = "METERS")]
        length_m: Option<f64>,
    },
}

/// Failure carrying its process exit code: 1 for config and usage problems,
/// 2 for runtime failures.
struct Failure {
    code: u8,
    message: String,
}

fn usage(err: impl Display) -> Failure {
    Failure { code: 1, message: err.to_string() }
}

fn runtime(err: impl Display) -> Failure {
    Failure { code: 2, message: err.to_string() }
}

/// Writes to stdout, treating a closed pipe as a normal early exit so that
/// `swingby run ... | head` truncates quietly instead of panicking.
fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(err) if err.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(runtime(format!("cannot write to stdout: {err}")))
        }
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let ok = matches!(err.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let _ = err.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    let catalog = match &cli.planets {
        Some(path) => Catalog::from_path(path).map_err(usage)?,
        None => Catalog::embedded(),
    };
    match cli.command {
        Command::Run { config, out } => cmd_run(&catalog, &config, out.as_deref()),
        Command::Sweep { config, out, workers } => {
            cmd_sweep(&catalog, &config, &out, workers)
        }
        Command::Planets => {
            let mut text = serde_json::to_string_pretty(&catalog).map_err(runtime)?;
            text.push('\n');
            emit(&text)
        }
        Command::Bands { planet, length_m } => cmd_bands(&catalog, &planet, length_m),
    }
}

fn read_config(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|err| usage(format!("cannot read config {}: {err}", path.display())))
}

fn cmd_run(catalog: &Catalog, config_path: &Path, out: Option<&Path>) -> Result<(), Failure> {
    let text = read_config(config_path)?;
    let LoadedConfig::Single(config) = parse_config(&text, catalog).map_err(usage)? else {
        return Err(usage("config describes a sweep; use the sweep subcommand"));
    };
    let result = run_maneuver(&config).map_err(runtime)?;
    let mut json = serde_json::to_string_pretty(&result).map_err(runtime)?;
    json.push('\n');
    match out {
        Some(path) => fs::write(path, json)
            .map_err(|err| runtime(format!("cannot write {}: {err}", path.display()))),
        None => emit(&json),
    }
}

fn cmd_sweep(
    catalog: &Catalog,
    config_path: &Path,
    out_dir: &Path,
    workers: Option<usize>,
) -> Result<(), Failure> {
    if workers == Some(0) {
        return Err(usage("--workers must be at least 1"));
    }
    let text = read_config(config_path)?;
    let LoadedConfig::Sweep(plan) = parse_config(&text, catalog).map_err(usage)? else {
        return Err(usage("config describes a single maneuver; use the run subcommand"));
    };
    let table = sweep::run_sweep(&plan, workers);

    fs::create_dir_all(out_dir)
        .map_err(|err| runtime(format!("cannot create {}: {err}", out_dir.display())))?;
    let write = |name: &str, bytes: &[u8]| -> Result<(), Failure> {
        let path = out_dir.join(name);
        fs::write(&path, bytes)
            .map_err(|err| runtime(format!("cannot write {}: {err}", path.display())))
    };

    write("results.csv", csvout::table_to_csv(&plan.planet().name, &table).as_bytes())?;

    let mut figures = Vec::new();
    for metric in Metric::ALL {
        for &kind in &plan.kinds {
            for &psi in &plan.psi_list {
                let rendered = render_heatmap(
                    &table,
                    &plan.altitudes_km,
                    &plan.ld_values,
                    metric,
                    kind,
                    psi,
                );
                let file = figure_filename(metric, psi, kind);
                write(&file, rendered.svg.as_bytes())?;
                figures.push(FigureEntry {
                    file,
                    metric: metric.column_name(),
                    kind: csvout::kind_name(kind),
                    psi_deg: psi,
                    min: rendered.min,
                    max: rendered.max,
                });
            }
        }
    }

    let manifest = build_manifest(&plan, &table, text.as_bytes(), figures);
    write("manifest.json", manifest_json(&manifest).as_bytes())
}

fn cmd_bands(catalog: &Catalog, planet_id: &str, length_m: Option<f64>) -> Result<(), Failure> {
    let planet = catalog.find(planet_id).map_err(usage)?;
    let mut craft = SpacecraftModel::default();
    if let Some(length) = length_m {
        if !(length.is_finite() && length > 0.0) {
            return Err(usage("--length-m must be a positive number"));
        }
        craft.reference_length_m = length;
    }
    if planet.surface_density_kg_m3 <= 0.0 {
        return Err(usage(format!("{} has no atmosphere model", planet.name)));
    }
    let (floor_km, ceiling_km) = band_altitudes(planet, &craft);
    let report = serde_json::json!({
        "planet": planet.name,
        "reference_length_m": craft.reference_length_m,
        "floor_km": floor_km,
        "ceiling_km": ceiling_km,
    });
    let mut text = serde_json::to_string_pretty(&report).map_err(runtime)?;
    text.push('\n');
    emit(&text)
}
