//! Scenario files: one mode, its parameter section, a grid and output settings.
//!
//! ```yaml
//! mode: lineshape
//! representations: [coulomb, poincare, symmetric]
//! grid: {min: 0.01, max: 3.0, points: 300}
//! lineshape:
//!   gamma: 0.1
//! output:
//!   stem: lineshape
//!   plot: svg
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use gauge_lineshape::lineshape::Denominator;
use gauge_lineshape::pulse::LaserTerm;
use gauge_lineshape::{Error, GaugeRepresentation, GridSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::plot::PlotFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Lineshape,
    Fluorescence,
    LambLine,
    Pulse,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Lineshape => "lineshape",
            Mode::Fluorescence => "fluorescence",
            Mode::LambLine => "lamb-line",
            Mode::Pulse => "pulse",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LineshapeSection {
    pub omega_eg: f64,
    pub gamma: f64,
    /// Constant shift added to the resonance; 0 suppresses it.
    pub lamb_shift: f64,
    /// Compute the shift of the equivalent two-level atom instead.
    pub compute_lamb_shift: bool,
    pub cutoff: Option<f64>,
    pub denominator: Denominator,
}

impl Default for LineshapeSection {
    fn default() -> Self {
        Self {
            omega_eg: 1.0,
            gamma: 0.1,
            lamb_shift: 0.0,
            compute_lamb_shift: false,
            cutoff: None,
            denominator: Denominator::OnShell,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FluorescenceSection {
    pub omega_eg: f64,
    pub gamma: f64,
    pub intensity: f64,
    pub dipole_proj: f64,
}

impl Default for FluorescenceSection {
    fn default() -> Self {
        Self {
            omega_eg: 1.0,
            gamma: 0.1,
            intensity: 1.0,
            dipole_proj: 1.0,
        }
    }
}

/// Defaults are legibility placeholders, not hydrogen values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LambLineSection {
    pub intensity: f64,
    pub omega: f64,
    pub omega_prime: f64,
    pub gamma_2p1s: f64,
    pub dipole_proj: f64,
}

impl Default for LambLineSection {
    fn default() -> Self {
        Self {
            intensity: 1.0,
            omega: 1.0,
            omega_prime: 1e3,
            gamma_2p1s: 0.6,
            dipole_proj: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PulseSection {
    pub omega_0: f64,
    pub gamma: f64,
    pub rabi: f64,
    pub delta_l: f64,
    pub alpha_laser: Option<f64>,
    pub laser_term: LaserTerm,
    /// Also write the bare and laser-inclusive Lorentzian curves.
    pub references: bool,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            omega_0: 1.0,
            gamma: 0.1,
            rabi: 1.0,
            delta_l: 0.0,
            alpha_laser: None,
            laser_term: LaserTerm::Included,
            references: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifySection {
    pub omega: f64,
    pub gamma: f64,
    pub rabi: f64,
    pub table_points: usize,
}

impl Default for VerifySection {
    fn default() -> Self {
        let d = gauge_lineshape::verify::VerifyOptions::default();
        Self {
            omega: d.omega,
            gamma: d.gamma,
            rabi: d.rabi,
            table_points: d.table_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSpec {
    pub dir: Option<PathBuf>,
    /// File name prefix; defaults to the mode name.
    pub stem: Option<String>,
    pub plot: Option<PlotFormat>,
    /// Plot `ln S` instead of `S`.
    pub log_scale: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    #[serde(default = "default_representations")]
    pub representations: Vec<GaugeRepresentation>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub output: OutputSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lineshape: Option<LineshapeSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fluorescence: Option<FluorescenceSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lamb_line: Option<LambLineSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse: Option<PulseSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifySection>,
}

fn default_representations() -> Vec<GaugeRepresentation> {
    GaugeRepresentation::NAMED.to_vec()
}

impl Scenario {
    /// A scenario for `mode` with every default filled in.
    pub fn for_mode(mode: Mode) -> Self {
        let mut s = Scenario {
            mode,
            representations: default_representations(),
            grid: None,
            output: OutputSpec::default(),
            lineshape: None,
            fluorescence: None,
            lamb_line: None,
            pulse: None,
            verify: None,
        };
        s.fill_defaults();
        s
    }

    /// A top-level `preset: <name>` key starts from that preset; the other keys override it.
    pub fn parse(text: &str, source_name: &str) -> CliResult<Self> {
        let parse_error = |e: serde_yaml::Error| {
            let (line, column) = e
                .location()
                .map(|l| (l.line(), l.column()))
                .unwrap_or((0, 0));
            CliError::Parse {
                source_name: source_name.into(),
                line,
                column,
                message: e.to_string(),
            }
        };
        let mut value: serde_yaml::Value = serde_yaml::from_str(text).map_err(parse_error)?;
        let base = match value.as_mapping_mut().and_then(|m| m.remove("preset")) {
            Some(serde_yaml::Value::String(name)) => Some(name),
            Some(_) => return Err(CliError::Usage("`preset` must be a preset name".into())),
            None => None,
        };
        let mut scenario: Scenario = match base {
            None => serde_yaml::from_str(text).map_err(parse_error)?,
            Some(name) => {
                let mut merged: serde_yaml::Value =
                    serde_yaml::from_str(preset_text(&name)?).map_err(parse_error)?;
                merge(&mut merged, value);
                serde_yaml::from_value(merged).map_err(|e| CliError::Parse {
                    source_name: source_name.into(),
                    line: 0,
                    column: 0,
                    message: format!("{e} (after applying preset `{name}`)"),
                })?
            }
        };
        scenario.validate()?;
        scenario.fill_defaults();
        Ok(scenario)
    }

    pub fn from_path(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    fn section_names(&self) -> Vec<(&'static str, bool, Mode)> {
        vec![
            ("lineshape", self.lineshape.is_some(), Mode::Lineshape),
            (
                "fluorescence",
                self.fluorescence.is_some(),
                Mode::Fluorescence,
            ),
            ("lamb_line", self.lamb_line.is_some(), Mode::LambLine),
            ("pulse", self.pulse.is_some(), Mode::Pulse),
            ("verify", self.verify.is_some(), Mode::Verify),
        ]
    }

    /// Structural checks; the physics parameters are validated by the library when run.
    pub fn validate(&self) -> CliResult<()> {
        for (name, present, mode) in self.section_names() {
            if present && mode != self.mode {
                return Err(Error::Config(format!(
                    "section `{name}` does not apply to mode `{}`",
                    self.mode.name()
                ))
                .into());
            }
        }
        if self.mode != Mode::Verify && self.representations.is_empty() {
            return Err(Error::Config("at least one representation is required".into()).into());
        }
        let mut seen = BTreeSet::new();
        for rep in &self.representations {
            if !seen.insert(rep.name()) {
                return Err(
                    Error::Config(format!("representation `{rep}` is listed twice")).into(),
                );
            }
        }
        if let Some(grid) = &self.grid {
            grid.validate()?;
        }
        if let Some(stem) = &self.output.stem {
            if stem.is_empty() || stem.contains(['/', '\\']) {
                return Err(Error::Config(format!(
                    "output stem `{stem}` must be a plain file name"
                ))
                .into());
            }
        }
        if let Some(l) = &self.lineshape {
            if l.compute_lamb_shift && l.lamb_shift != 0.0 {
                return Err(Error::Config(
                    "set either lamb_shift or compute_lamb_shift, not both".into(),
                )
                .into());
            }
        }
        Ok(())
    }

    /// Inserts the mode's section and grid when absent.
    pub fn fill_defaults(&mut self) {
        match self.mode {
            Mode::Lineshape => {
                let w = self.lineshape.get_or_insert_with(Default::default).omega_eg;
                self.grid
                    .get_or_insert(GridSpec::linear(0.01 * w, 3.0 * w, 300));
            }
            Mode::Fluorescence => {
                let w = self
                    .fluorescence
                    .get_or_insert_with(Default::default)
                    .omega_eg;
                self.grid
                    .get_or_insert(GridSpec::linear(0.5 * w, 1.5 * w, 201));
            }
            Mode::LambLine => {
                let w = self.lamb_line.get_or_insert_with(Default::default).omega;
                self.grid
                    .get_or_insert(GridSpec::linear(0.5 * w, 1.5 * w, 201));
            }
            Mode::Pulse => {
                let w = self.pulse.get_or_insert_with(Default::default).omega_0;
                self.grid
                    .get_or_insert(GridSpec::linear(0.01 * w, 3.0 * w, 300));
            }
            Mode::Verify => {
                self.verify.get_or_insert_with(Default::default);
            }
        }
    }

    pub fn stem(&self) -> String {
        self.output
            .stem
            .clone()
            .unwrap_or_else(|| self.mode.name().to_string())
    }

    pub fn to_yaml(&self) -> String {
        serde_yaml::to_string(self).expect("scenario serializes")
    }
}

/// Presets shipped with the binary, by name.
/// Presets shipped with the binary, by name.
pub const PRESETS: &[(&str, &str)] = &[
    ("lineshape", include_str!("../presets/lineshape.yaml")),
    (
        "lineshape-log",
        include_str!("../presets/lineshape-log.yaml"),
    ),
    ("pulse-broad", include_str!("../presets/pulse-broad.yaml")),
    ("pulse-narrow", include_str!("../presets/pulse-narrow.yaml")),
    (
        "pulse-references-broad",
        include_str!("../presets/pulse-references-broad.yaml"),
    ),
    (
        "pulse-references-narrow",
        include_str!("../presets/pulse-references-narrow.yaml"),
    ),
    ("fluorescence", include_str!("../presets/fluorescence.yaml")),
    (
        "lamb-hydrogen",
        include_str!("../presets/lamb-hydrogen.yaml"),
    ),
];

fn preset_text(name: &str) -> CliResult<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            CliError::Usage(format!(
                "unknown preset `{name}` (available: {})",
                names.join(", ")
            ))
        })
}

pub fn preset(name: &str) -> CliResult<Scenario> {
    Scenario::parse(preset_text(name)?, &format!("preset {name}"))
}

/// Keys of `over` replace those of `base`; nested mappings merge key by key.
fn merge(base: &mut serde_yaml::Value, over: serde_yaml::Value) {
    use serde_yaml::Value;
    match (base, over) {
        (Value::Mapping(b), Value::Mapping(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}
