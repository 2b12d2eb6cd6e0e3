//! Command-line front end: scene evaluation, parameter sweeps, surface
//! configuration, model fitting, and the field-boundary query.
//!
//! Human-readable summaries go to standard output; tabular results go to
//! CSV files and optional SVG plots. Exit codes: 0 on success, 1 on any
//! computation or file error (with a single diagnostic line on stderr),
//! 2 on bad usage.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use risim_core::control::{self, BaselineKind};
use risim_core::experiments::{
    self, format_significant, ModelKind, SurfaceConfiguration, SweepParameter, SweepRow, SweepSpec,
};
use risim_core::geometry::{fraunhofer_distance, BoundaryConvention};
use risim_core::{link, plot, reflection, scene};

#[derive(Parser)]
#[command(
    name = "risim",
    version,
    about = "Received-power simulator for links assisted by a reconfigurable reflecting surface"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the received power of a scene under a chosen surface
    /// configuration.
    Eval {
        /// Scene description (JSON).
        #[arg(long)]
        scene: PathBuf,
        /// Surface configuration to evaluate.
        #[arg(long, value_enum, default_value_t = EvalConfig::OneBit)]
        config: EvalConfig,
        /// Reference angles scanned by the one-bit configuration search.
        #[arg(long, default_value_t = 64)]
        scan: usize,
    },
    /// Sweep one scene parameter and evaluate the requested models at
    /// every point.
    Sweep {
        /// Scene description (JSON).
        #[arg(long)]
        scene: PathBuf,
        /// Parameter to sweep.
        #[arg(long, value_enum)]
        param: ParamArg,
        /// Range start (metres for d1/d2, degrees for theta2).
        #[arg(long)]
        from: f64,
        /// Range end, inclusive.
        #[arg(long)]
        to: f64,
        /// Number of uniformly spaced points (at least 2).
        #[arg(long)]
        steps: usize,
        /// Models to evaluate.
        #[arg(long, value_enum, value_delimiter = ',',
              default_values_t = [ModelArg::Proposed, ModelArg::Specular])]
        models: Vec<ModelArg>,
        /// Surface configuration applied at every sweep point.
        #[arg(long, value_enum, default_value_t = ConfigArg::OneBit)]
        config: ConfigArg,
        /// Reference angles scanned by the one-bit configuration search.
        #[arg(long, default_value_t = 64)]
        scan: usize,
        /// Write the sweep table to this CSV file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write a line plot of the sweep to this SVG file.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Run the one-bit configuration search and export the chosen state
    /// grid as CSV.
    Configure {
        /// Scene description (JSON).
        #[arg(long)]
        scene: PathBuf,
        /// Output CSV: one line per row, comma-separated 0/1 states.
        #[arg(long)]
        out: PathBuf,
        /// Reference angles scanned by the one-bit configuration search.
        #[arg(long, default_value_t = 64)]
        scan: usize,
    },
    /// Fit element-model constants from sampled reflection data.
    Fit {
        /// Sample CSV with header `theta_deg,sigma_m2,phase_deg`.
        #[arg(long)]
        data: PathBuf,
        /// Which constants to fit.
        #[arg(long, value_enum)]
        target: FitTarget,
        /// Scene supplying element area and wavelength (required for the
        /// rcs target).
        #[arg(long)]
        scene: Option<PathBuf>,
    },
    /// Print the near/far field boundary distance of the scene's
    /// aperture.
    Boundary {
        /// Scene description (JSON).
        #[arg(long)]
        scene: PathBuf,
        #[arg(long, value_enum, default_value_t = ConventionArg::Effective)]
        convention: ConventionArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EvalConfig {
    OneBit,
    AllZero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConfigArg {
    OneBit,
    FrozenOneBit,
    ContinuousAligned,
    AllZero,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    D1,
    D2,
    Theta2,
}

impl From<ParamArg> for SweepParameter {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::D1 => SweepParameter::D1,
            ParamArg::D2 => SweepParameter::D2,
            ParamArg::Theta2 => SweepParameter::Theta2,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Proposed,
    Specular,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Proposed => ModelKind::Proposed,
            ModelArg::Specular => ModelKind::Specular,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FitTarget {
    Rcs,
    Phase,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConventionArg {
    Effective,
    AsPrinted,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

/// Write a file atomically: the target never holds partial content.
fn write_atomic(path: &Path, contents: &str) -> io::Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)
}

fn run(command: Command) -> risim_core::Result<()> {
    match command {
        Command::Eval {
            scene: scene_path,
            config,
            scan,
        } => {
            let cfg = scene::parse_scene(&scene_path)?;
            println!("scene: {}", scene_path.display());
            println!(
                "layout: {} x {} elements ({} total), pitch {} m x {} m",
                cfg.layout.rows,
                cfg.layout.cols,
                cfg.layout.element_count(),
                cfg.layout.dx_m,
                cfg.layout.dy_m
            );
            println!("wavelength: {:.7} m", cfg.wavelength_m());
            let result = match config {
                EvalConfig::OneBit => {
                    let report = control::one_bit_configure(&cfg, scan)?;
                    println!("configuration: {}", report.method);
                    println!(
                        "reference phase: {:.3} deg",
                        report.reference_phase_rad.to_degrees()
                    );
                    link::received_power(&cfg, &report.states)?
                }
                EvalConfig::AllZero => {
                    println!("configuration: all-zero");
                    let zeros = control::baseline_grids(&cfg, BaselineKind::AllZero);
                    link::received_power(&cfg, &zeros)?
                }
            };
            let paths = cfg.path_grid()?;
            let amplitudes = link::element_reflection_amplitudes(&cfg, &paths)?;
            let mu_bar = link::mean_reflection_amplitude(&amplitudes)?;
            println!("received power: {:.6e} W", result.pr_w);
            println!(
                "attenuation: {} dB",
                format_significant(result.attenuation_db, 6)
            );
            println!("mean reflection amplitude: {mu_bar:.4}");
            Ok(())
        }
        Command::Sweep {
            scene: scene_path,
            param,
            from,
            to,
            steps,
            models,
            config,
            scan,
            out,
            plot: plot_path,
        } => {
            let cfg = scene::parse_scene(&scene_path)?;
            let parameter: SweepParameter = param.into();
            let models: Vec<ModelKind> = models.into_iter().map(Into::into).collect();
            let spec = SweepSpec {
                parameter,
                from,
                to,
                steps,
                models: models.clone(),
                configuration: match config {
                    ConfigArg::OneBit => SurfaceConfiguration::OneBit {
                        reference_scan: scan,
                    },
                    ConfigArg::FrozenOneBit => SurfaceConfiguration::FrozenOneBit {
                        reference_scan: scan,
                    },
                    ConfigArg::ContinuousAligned => SurfaceConfiguration::ContinuousAligned,
                    ConfigArg::AllZero => SurfaceConfiguration::AllZero,
                },
            };
            let rows = experiments::run_sweep(&cfg, &spec)?;
            print_sweep_summary(parameter, &rows);
            if let Some(path) = &out {
                write_atomic(path, &experiments::rows_to_csv(parameter, &models, &rows))?;
                println!("csv: {}", path.display());
            }
            if let Some(path) = &plot_path {
                write_atomic(path, &plot::sweep_plot_svg(parameter, &rows))?;
                println!("plot: {}", path.display());
            }
            Ok(())
        }
        Command::Configure {
            scene: scene_path,
            out,
            scan,
        } => {
            let cfg = scene::parse_scene(&scene_path)?;
            let report = control::one_bit_configure(&cfg, scan)?;
            write_atomic(&out, &report.states.to_csv())?;
            println!("method: {}", report.method);
            println!(
                "reference phase: {:.3} deg",
                report.reference_phase_rad.to_degrees()
            );
            println!("achieved power: {:.6e} W", report.pr_w);
            println!(
                "attenuation: {} dB",
                format_significant(10.0 * (report.pr_w / cfg.pt_w).log10(), 6)
            );
            println!("states: {}", out.display());
            Ok(())
        }
        Command::Fit {
            data,
            target,
            scene: scene_path,
        } => {
            let samples = reflection::read_samples_csv(&data)?;
            match target {
                FitTarget::Phase => {
                    let fit = reflection::fit_phase(&samples)?;
                    println!(
                        "a = {:.3}°, b = {:.3}°",
                        fit.amplitude_rad.to_degrees(),
                        fit.offset_rad.to_degrees()
                    );
                    println!("rmse = {:.6}°", fit.rmse.to_degrees());
                }
                FitTarget::Rcs => {
                    let scene_path = scene_path.ok_or_else(|| {
                        risim_core::Error::InvalidInput(
                            "fit --target rcs needs --scene for the element area and wavelength"
                                .into(),
                        )
                    })?;
                    let cfg = scene::parse_scene(&scene_path)?;
                    let fit = reflection::fit_rcs_floor(
                        &samples,
                        cfg.layout.element_area_m2(),
                        cfg.wavelength_m(),
                    )?;
                    println!("c = {:.6e} m^2", fit.c_m2);
                    println!("rmse = {:.6e} m^2", fit.rmse);
                }
            }
            Ok(())
        }
        Command::Boundary {
            scene: scene_path,
            convention,
        } => {
            let cfg = scene::parse_scene(&scene_path)?;
            let distance = fraunhofer_distance(
                &cfg.layout,
                cfg.wavelength_m(),
                match convention {
                    ConventionArg::Effective => BoundaryConvention::Effective,
                    ConventionArg::AsPrinted => BoundaryConvention::AsPrinted,
                },
            );
            println!("{distance:.2} m");
            Ok(())
        }
    }
}

fn print_sweep_summary(parameter: SweepParameter, rows: &[SweepRow]) {
    println!(
        "sweep: {} over [{}, {}], {} points",
        parameter.as_str(),
        format_significant(rows[0].value, 6),
        format_significant(rows[rows.len() - 1].value, 6),
        rows.len()
    );
    let describe = |label: &str, column: &dyn Fn(&SweepRow) -> Option<f64>| {
        let values: Vec<f64> = rows.iter().filter_map(column).collect();
        if values.is_empty() {
            return;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in &values {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        println!(
            "{label}: {} dB at best, {} dB at worst",
            format_significant(hi, 6),
            format_significant(lo, 6)
        );
    };
    describe("proposed", &|r| r.proposed_db);
    describe("specular", &|r| r.specular_db);
}
