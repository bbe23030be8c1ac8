//! Argument parsing and dispatch for the `lineshape` binary.

use std::ffi::OsString;
use std::path::PathBuf;

use crate::error::{CliError, CliResult};
use crate::output::write_artifacts;
use crate::plot::{emit_gnuplot, emit_svg, PlotFormat, PlotStyle};
use crate::run::{execute, Artifact, Overrides};
use crate::scenario::{preset, Mode, Scenario, PRESETS};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gauge_lineshape::pulse::LaserTerm;
use gauge_lineshape::{GaugeRepresentation, GridScale, Spectrum};

#[derive(Parser, Debug)]
#[command(
    name = "lineshape",
    version,
    about = "Spontaneous-emission lineshapes in several gauge representations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Directory for all outputs (default: the scenario's, else the current directory).
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    /// Data file format.
    #[arg(long, global = true, value_enum, default_value_t = DataFormat::Csv)]
    format: DataFormat,
    /// Also write a plot.
    #[arg(long, global = true, value_enum)]
    plot: Option<PlotFormat>,
    /// Ultraviolet cutoff frequency for shift integrals.
    #[arg(long, global = true)]
    cutoff: Option<f64>,
    /// Reserved. Runs contain no randomness, so this flag is rejected.
    #[arg(long, global = true)]
    seedless: bool,
    /// Do not print the summary.
    #[arg(long, short, global = true)]
    quiet: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataFormat {
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spontaneous-emission lineshape S(ω_k).
    #[command(allow_negative_numbers = true)]
    Lineshape(LineshapeArgs),
    /// Fluorescence rate for a sharp incident line.
    #[command(allow_negative_numbers = true)]
    Fluorescence(FluorescenceArgs),
    /// Stimulated cascade rate across a microwave sweep.
    #[command(allow_negative_numbers = true)]
    LambLine(LambLineArgs),
    /// Emission spectrum after a π-pulse.
    #[command(allow_negative_numbers = true)]
    Pulse(PulseArgs),
    /// Run the gauge-invariance checks.
    #[command(allow_negative_numbers = true)]
    Verify(VerifyArgs),
    /// Plot existing CSV spectra.
    Plot(PlotArgs),
    /// Run a scenario file or a built-in preset.
    Run(RunArgs),
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Scenario file; flags given here override it.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Comma-separated representations, e.g. coulomb,poincare,symmetric,alpha:0.3
    #[arg(long, value_delimiter = ',')]
    reps: Option<Vec<GaugeRepresentation>>,
    #[arg(long)]
    grid_min: Option<f64>,
    #[arg(long)]
    grid_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Logarithmically spaced grid.
    #[arg(long)]
    log_grid: bool,
    /// Plot ln S.
    #[arg(long)]
    log_scale: bool,
    /// Output file name prefix.
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args, Debug)]
struct LineshapeArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    omega_eg: Option<f64>,
    #[arg(long, conflicts_with_all = ["suppress_lamb_shift", "compute_lamb_shift"])]
    lamb_shift: Option<f64>,
    /// Set the shift to zero.
    #[arg(long)]
    suppress_lamb_shift: bool,
    /// Use the two-level shift difference at the cutoff.
    #[arg(long, conflicts_with = "suppress_lamb_shift")]
    compute_lamb_shift: bool,
}

#[derive(Args, Debug)]
struct FluorescenceArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    omega_eg: Option<f64>,
    #[arg(long)]
    intensity: Option<f64>,
    #[arg(long)]
    dipole_proj: Option<f64>,
}

#[derive(Args, Debug)]
struct LambLineArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    intensity: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    omega_prime: Option<f64>,
    #[arg(long)]
    gamma_2p1s: Option<f64>,
    #[arg(long)]
    dipole_proj: Option<f64>,
}

#[derive(Args, Debug)]
struct PulseArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    rabi: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta_l: Option<f64>,
    #[arg(long)]
    omega_0: Option<f64>,
    /// Constant α for the laser coupling (default: the emission representation's).
    #[arg(long)]
    alpha_laser: Option<f64>,
    /// Drop the laser term and keep only the Lorentzian part.
    #[arg(long)]
    no_laser_term: bool,
    /// Also write the Lorentzian reference curves.
    #[arg(long)]
    references: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    scenario: Option<PathBuf>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    rabi: Option<f64>,
    #[arg(long)]
    stem: Option<String>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Spectrum CSV files.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// Output name without extension.
    #[arg(long, default_value = "plot")]
    stem: String,
    #[arg(long, default_value = "")]
    title: String,
    #[arg(long)]
    log_scale: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Scenario file.
    #[arg(required_unless_present_any = ["preset", "list_presets"], conflicts_with = "preset")]
    file: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Print the preset names and exit.
    #[arg(long)]
    list_presets: bool,
}

fn load(mode: Mode, path: &Option<PathBuf>) -> CliResult<Scenario> {
    let scenario = match path {
        Some(p) => Scenario::from_path(p)?,
        None => Scenario::for_mode(mode),
    };
    if scenario.mode != mode {
        return Err(CliError::Usage(format!(
            "scenario mode `{}` does not match subcommand `{}`",
            scenario.mode.name(),
            mode.name()
        )));
    }
    Ok(scenario)
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn apply_common(s: &mut Scenario, c: &Common) {
    if let Some(reps) = &c.reps {
        s.representations = reps.clone();
    }
    if c.scenario.is_none() {
        // the default grid follows the transition frequency given on the command line
        s.grid = None;
        s.fill_defaults();
    }
    let grid = s.grid.as_mut().expect("defaults filled");
    set(&mut grid.min, c.grid_min);
    set(&mut grid.max, c.grid_max);
    set(&mut grid.points, c.points);
    if c.log_grid {
        grid.scale = GridScale::Log;
    }
    if c.log_scale {
        s.output.log_scale = true;
    }
    if c.stem.is_some() {
        s.output.stem = c.stem.clone();
    }
}

fn build(command: &Command) -> CliResult<Option<Scenario>> {
    let scenario = match command {
        Command::Lineshape(a) => {
            let mut s = load(Mode::Lineshape, &a.common.scenario)?;
            let sec = s.lineshape.as_mut().expect("defaults filled");
            set(&mut sec.gamma, a.gamma);
            set(&mut sec.omega_eg, a.omega_eg);
            set(&mut sec.lamb_shift, a.lamb_shift);
            if a.suppress_lamb_shift {
                sec.lamb_shift = 0.0;
                sec.compute_lamb_shift = false;
            }
            if a.compute_lamb_shift {
                sec.lamb_shift = 0.0;
                sec.compute_lamb_shift = true;
            }
            apply_common(&mut s, &a.common);
            s
        }
        Command::Fluorescence(a) => {
            let mut s = load(Mode::Fluorescence, &a.common.scenario)?;
            let sec = s.fluorescence.as_mut().expect("defaults filled");
            set(&mut sec.gamma, a.gamma);
            set(&mut sec.omega_eg, a.omega_eg);
            set(&mut sec.intensity, a.intensity);
            set(&mut sec.dipole_proj, a.dipole_proj);
            apply_common(&mut s, &a.common);
            s
        }
        Command::LambLine(a) => {
            let mut s = load(Mode::LambLine, &a.common.scenario)?;
            let sec = s.lamb_line.as_mut().expect("defaults filled");
            set(&mut sec.intensity, a.intensity);
            set(&mut sec.omega, a.omega);
            set(&mut sec.omega_prime, a.omega_prime);
            set(&mut sec.gamma_2p1s, a.gamma_2p1s);
            set(&mut sec.dipole_proj, a.dipole_proj);
            apply_common(&mut s, &a.common);
            s
        }
        Command::Pulse(a) => {
            let mut s = load(Mode::Pulse, &a.common.scenario)?;
            let sec = s.pulse.as_mut().expect("defaults filled");
            set(&mut sec.rabi, a.rabi);
            set(&mut sec.gamma, a.gamma);
            set(&mut sec.delta_l, a.delta_l);
            set(&mut sec.omega_0, a.omega_0);
            if a.alpha_laser.is_some() {
                sec.alpha_laser = a.alpha_laser;
            }
            if a.no_laser_term {
                sec.laser_term = LaserTerm::Excluded;
            }
            if a.references {
                sec.references = true;
            }
            apply_common(&mut s, &a.common);
            s
        }
        Command::Verify(a) => {
            let mut s = load(Mode::Verify, &a.scenario)?;
            let sec = s.verify.as_mut().expect("defaults filled");
            set(&mut sec.omega, a.omega);
            set(&mut sec.gamma, a.gamma);
            set(&mut sec.rabi, a.rabi);
            if a.stem.is_some() {
                s.output.stem = a.stem.clone();
            }
            s
        }
        Command::Run(a) => {
            if a.list_presets {
                for (name, _) in PRESETS {
                    println!("{name}");
                }
                return Ok(None);
            }
            match (&a.file, &a.preset) {
                (Some(path), _) => Scenario::from_path(path)?,
                (None, Some(name)) => preset(name)?,
                (None, None) => {
                    return Err(CliError::Usage("give a scenario file or --preset".into()))
                }
            }
        }
        Command::Plot(_) => unreachable!("handled separately"),
    };
    Ok(Some(scenario))
}

fn plot_files(args: &PlotArgs, global: &Global) -> CliResult<()> {
    let mut spectra = Vec::new();
    for path in &args.files {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.clone(),
            source: e,
        })?;
        spectra.push(Spectrum::from_csv(&text)?);
    }
    let refs: Vec<&Spectrum> = spectra.iter().collect();
    let style = PlotStyle {
        title: args.title.clone(),
        subtitle: String::new(),
        x_label: "ω".into(),
        y_label: if args.log_scale {
            "ln S".into()
        } else {
            "S".into()
        },
        log_scale: args.log_scale,
    };
    let format = global.plot.unwrap_or(PlotFormat::Svg);
    let contents = match format {
        PlotFormat::Svg => emit_svg(&refs, &style)?,
        PlotFormat::Gnuplot => {
            let names: Vec<String> = args.files.iter().map(|p| p.display().to_string()).collect();
            emit_gnuplot(&refs, &names, &style, &format!("{}.gnuplot.svg", args.stem))?
        }
    };
    let dir = global.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let file_name = format!("{}.{}", args.stem, format.extension());
    for path in write_artifacts(
        &dir,
        &[Artifact {
            file_name,
            contents,
        }],
    )? {
        if !global.quiet {
            println!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    if cli.global.seedless {
        return Err(CliError::Usage(
            "--seedless is reserved: runs use no random numbers, so there is no seed to drop"
                .into(),
        ));
    }
    let DataFormat::Csv = cli.global.format;
    if let Command::Plot(args) = &cli.command {
        return plot_files(args, &cli.global);
    }
    let Some(scenario) = build(&cli.command)? else {
        return Ok(());
    };
    let overrides = Overrides {
        out_dir: cli.global.out_dir.clone(),
        plot: cli.global.plot,
        cutoff: cli.global.cutoff,
    };
    let output = execute(&scenario, &overrides)?;
    let written = write_artifacts(&output.dir, &output.artifacts)?;
    if !cli.global.quiet {
        print!("{}", output.summary);
        for path in &written {
            println!("wrote {}", path.display());
        }
    }
    if let Some(report) = &output.verification {
        if !report.all_passed() {
            let failed: Vec<&str> = report
                .checks
                .iter()
                .filter(|c| !c.acceptable())
                .map(|c| c.name.as_str())
                .collect();
            return Err(CliError::Verification(failed.join(", ")));
        }
    }
    Ok(())
}

/// Runs the command line `args` (program name first) and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
