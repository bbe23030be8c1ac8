//! Turns a scenario into in-memory artifacts; nothing touches the disk here.

use std::path::PathBuf;

use gauge_lineshape::fluorescence::{
    fluorescence_sweep, lamb_rate_sweep, LambLineScenario, SharpLineScenario,
};
use gauge_lineshape::lineshape::{lamb_shift, lineshape_s, LineshapeParams};
use gauge_lineshape::pulse::{
    pulse_spectrum, reference_spectrum, EnvelopeKind, PulseConfig, Reference,
};
use gauge_lineshape::verify::{run_all, VerificationReport, VerifyOptions};
use gauge_lineshape::{Error, GaugeRepresentation, Spectrum, TwoLevelAtom, DEFAULT_CUTOFF_RATIO};
use serde::Serialize;

use crate::error::CliResult;
use crate::plot::{emit_gnuplot, emit_svg, PlotFormat, PlotStyle};
use crate::scenario::{Mode, Scenario};

/// Settings from global command-line flags; they win over the scenario file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub plot: Option<PlotFormat>,
    pub cutoff: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub artifacts: Vec<Artifact>,
    pub spectra: Vec<Spectrum>,
    pub verification: Option<VerificationReport>,
    pub summary: String,
}

/// File-name-safe form of a representation or reference key.
pub fn slug(key: &str) -> String {
    key.chars()
        .map(|c| match c {
            ':' => '-',
            '+' => '_',
            c if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_' => c,
            _ => '_',
        })
        .collect()
}

#[derive(Serialize)]
struct RunMeta<'a> {
    tool: &'static str,
    version: &'static str,
    library_version: &'static str,
    mode: &'static str,
    cutoff: Option<f64>,
    grid_points: Option<usize>,
    files: Vec<String>,
    scenario: &'a Scenario,
    generated_unix_seconds: u64,
}

struct Computed {
    spectra: Vec<Spectrum>,
    cutoff: Option<f64>,
    style: PlotStyle,
}

fn style(scenario: &Scenario, title: &str, x: &str, y: &str, subtitle: String) -> PlotStyle {
    let log = scenario.output.log_scale;
    PlotStyle {
        title: title.into(),
        subtitle,
        x_label: x.into(),
        y_label: if log { format!("ln {y}") } else { y.into() },
        log_scale: log,
    }
}

fn compute(scenario: &Scenario, overrides: &Overrides) -> CliResult<Computed> {
    let grid = scenario.grid.expect("defaults filled").values()?;
    let reps = &scenario.representations;
    match scenario.mode {
        Mode::Lineshape => {
            let sec = scenario.lineshape.clone().unwrap_or_default();
            let cutoff = overrides
                .cutoff
                .or(sec.cutoff)
                .unwrap_or(DEFAULT_CUTOFF_RATIO * sec.omega_eg);
            let shift = if sec.compute_lamb_shift {
                let model = TwoLevelAtom::with_decay_rate(sec.omega_eg, sec.gamma)?.to_model();
                lamb_shift(&model, "e", cutoff)?.value - lamb_shift(&model, "g", cutoff)?.value
            } else {
                sec.lamb_shift
            };
            let spectra = reps
                .iter()
                .map(|&rep| {
                    let params = LineshapeParams {
                        rep,
                        omega_eg: sec.omega_eg,
                        gamma: sec.gamma,
                        lamb_shift: shift,
                        cutoff,
                        denominator: sec.denominator,
                    };
                    lineshape_s(&params, &grid)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let subtitle = format!(
                "Γ = {}, ω_eg = {}, Δω_LS = {shift}",
                sec.gamma, sec.omega_eg
            );
            Ok(Computed {
                spectra,
                cutoff: Some(cutoff),
                style: style(
                    scenario,
                    "Spontaneous emission lineshape",
                    "ω_k",
                    "S(ω_k)",
                    subtitle,
                ),
            })
        }
        Mode::Fluorescence => {
            let sec = scenario.fluorescence.clone().unwrap_or_default();
            let spectra = reps
                .iter()
                .map(|&rep| {
                    let s = SharpLineScenario {
                        intensity: sec.intensity,
                        omega_0: sec.omega_eg,
                        omega_eg: sec.omega_eg,
                        gamma: sec.gamma,
                        dipole_proj: sec.dipole_proj,
                        rep,
                    };
                    fluorescence_sweep(&s, &grid)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let subtitle = format!(
                "Γ = {}, ω_eg = {}, S = {}",
                sec.gamma, sec.omega_eg, sec.intensity
            );
            Ok(Computed {
                spectra,
                cutoff: None,
                style: style(
                    scenario,
                    "Resonance fluorescence rate",
                    "ω_0",
                    "rate",
                    subtitle,
                ),
            })
        }
        Mode::LambLine => {
            let sec = scenario.lamb_line.clone().unwrap_or_default();
            let spectra = reps
                .iter()
                .map(|&rep| {
                    let s = LambLineScenario {
                        intensity: sec.intensity,
                        omega_0: sec.omega,
                        omega: sec.omega,
                        omega_prime: sec.omega_prime,
                        gamma_2p1s: sec.gamma_2p1s,
                        dipole_proj: sec.dipole_proj,
                        rep,
                    };
                    lamb_rate_sweep(&s, &grid)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let subtitle = format!(
                "ω = {}, ω' = {}, Γ = {}",
                sec.omega, sec.omega_prime, sec.gamma_2p1s
            );
            Ok(Computed {
                spectra,
                cutoff: None,
                style: style(
                    scenario,
                    "Stimulated cascade rate",
                    "ω_0",
                    "γ(ω_0)",
                    subtitle,
                ),
            })
        }
        Mode::Pulse => {
            let sec = scenario.pulse.clone().unwrap_or_default();
            let config = PulseConfig {
                rabi: sec.rabi,
                omega_l: sec.omega_0 - sec.delta_l,
                envelope: EnvelopeKind::Rectangular,
                alpha_laser: sec.alpha_laser,
            };
            let mut spectra = reps
                .iter()
                .map(|&rep| {
                    pulse_spectrum(&config, rep, sec.omega_0, sec.gamma, &grid, sec.laser_term)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            if sec.references {
                let rep = reps
                    .first()
                    .copied()
                    .unwrap_or(GaugeRepresentation::Symmetric);
                for reference in [Reference::BareLorentzian, Reference::LorentzianWithLaser] {
                    spectra.push(reference_spectrum(
                        &config,
                        rep,
                        sec.omega_0,
                        sec.gamma,
                        &grid,
                        reference,
                    )?);
                }
            }
            let subtitle = format!(
                "Ω = {}, δ_l = {}, Γ = {}, ω_0 = {}",
                sec.rabi, sec.delta_l, sec.gamma, sec.omega_0
            );
            Ok(Computed {
                spectra,
                cutoff: None,
                style: style(
                    scenario,
                    "Emission after a π-pulse",
                    "ω_k",
                    "S(ω_k)",
                    subtitle,
                ),
            })
        }
        Mode::Verify => unreachable!("verify has no spectra"),
    }
}

fn verify_options(scenario: &Scenario) -> VerifyOptions {
    let sec = scenario.verify.clone().unwrap_or_default();
    VerifyOptions {
        omega: sec.omega,
        gamma: sec.gamma,
        rabi: sec.rabi,
        table_points: sec.table_points,
    }
}

fn now_unix() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Computes every output of `scenario` in memory.
pub fn execute(scenario: &Scenario, overrides: &Overrides) -> CliResult<RunOutput> {
    let mut scenario = scenario.clone();
    scenario.validate()?;
    scenario.fill_defaults();
    if let Some(c) = overrides.cutoff {
        if !(c.is_finite() && c > 0.0) {
            return Err(
                Error::Domain(format!("cutoff must be positive and finite, got {c}")).into(),
            );
        }
    }
    let stem = scenario.stem();
    let dir = overrides
        .out_dir
        .clone()
        .or_else(|| scenario.output.dir.clone())
        .unwrap_or_else(|| PathBuf::from("."));
    let mut artifacts = Vec::new();

    if scenario.mode == Mode::Verify {
        let report = run_all(&verify_options(&scenario))?;
        artifacts.push(Artifact {
            file_name: format!("{stem}.json"),
            contents: report.to_json()?,
        });
        let summary = report.to_table();
        return Ok(RunOutput {
            dir,
            artifacts,
            spectra: vec![],
            verification: Some(report),
            summary,
        });
    }

    let computed = compute(&scenario, overrides)?;
    let mut csv_names = Vec::new();
    for s in &computed.spectra {
        let name = format!("{stem}_{}.csv", slug(&s.meta.representation));
        csv_names.push(name.clone());
        artifacts.push(Artifact {
            file_name: name,
            contents: s.to_csv(),
        });
    }
    let refs: Vec<&Spectrum> = computed.spectra.iter().collect();
    match overrides.plot.or(scenario.output.plot) {
        Some(PlotFormat::Svg) => {
            artifacts.push(Artifact {
                file_name: format!("{stem}.svg"),
                contents: emit_svg(&refs, &computed.style)?,
            });
        }
        Some(PlotFormat::Gnuplot) => {
            let script = emit_gnuplot(
                &refs,
                &csv_names,
                &computed.style,
                &format!("{stem}.gnuplot.svg"),
            )?;
            artifacts.push(Artifact {
                file_name: format!("{stem}.gp"),
                contents: script,
            });
        }
        None => {}
    }

    let mut summary = String::new();
    for s in &computed.spectra {
        let (w, v) = s.peak();
        summary.push_str(&format!(
            "{:<18} peak {v:.6e} at {w:.6}, area {:.6e}\n",
            s.meta.representation,
            s.area()
        ));
    }
    let files: Vec<String> = artifacts.iter().map(|a| a.file_name.clone()).collect();
    let meta = RunMeta {
        tool: "lineshape",
        version: env!("CARGO_PKG_VERSION"),
        library_version: gauge_lineshape::VERSION,
        mode: scenario.mode.name(),
        cutoff: computed.cutoff,
        grid_points: scenario.grid.map(|g| g.points),
        files,
        scenario: &scenario,
        generated_unix_seconds: now_unix(),
    };
    let meta_json = serde_json::to_string_pretty(&meta).expect("metadata serializes") + "\n";
    artifacts.push(Artifact {
        file_name: format!("{stem}.meta.json"),
        contents: meta_json,
    });
    Ok(RunOutput {
        dir,
        artifacts,
        spectra: computed.spectra,
        verification: None,
        summary,
    })
}
