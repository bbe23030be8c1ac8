//! Atomic level models: energies, dipole matrix elements and the momentum
//! elements derived from them.
//!
//! Natural units are used throughout (`hbar = c = eps0 = 1`). Dipole elements
//! are stored once per unordered level pair; the reverse element is always the
//! complex conjugate, so the dipole operator is Hermitian by construction.
//! Momentum elements are never stored: they follow from
//! `p_nm = i m omega_nm r_nm` with `r_nm = -d_nm / e`.

use std::collections::BTreeMap;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{require_non_negative, require_positive, Error, Result};

pub type Vector3 = [Complex64; 3];

pub const ZERO_VECTOR: Vector3 = [Complex64::new(0.0, 0.0); 3];

#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub label: String,
    pub energy: f64,
}

/// Cartesian directions along which the bound electron can move.
///
/// This fixes the diagonal `e^2 A^2 / 2m` term of the minimal-coupling
/// Hamiltonian: a particle confined to a line only sees the field component
/// along that line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Motion {
    Isotropic,
    /// Motion along a single unit axis.
    Linear([f64; 3]),
}

impl Motion {
    /// Trace of the projector onto the allowed directions.
    pub fn projector_trace(&self) -> f64 {
        match self {
            Motion::Isotropic => 3.0,
            Motion::Linear(_) => 1.0,
        }
    }

    /// `axis · P · axis` for the projector `P`.
    pub fn projector_along(&self, axis: [f64; 3]) -> f64 {
        match self {
            Motion::Isotropic => dot_real(axis, axis),
            Motion::Linear(u) => dot_real(*u, axis).powi(2),
        }
    }
}

fn dot_real(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn norm_sqr(v: &Vector3) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum()
}

pub(crate) fn project(v: &Vector3, axis: [f64; 3]) -> Complex64 {
    v[0] * axis[0] + v[1] * axis[1] + v[2] * axis[2]
}

/// An immutable atomic model.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomModel {
    levels: Vec<Level>,
    // keyed by (lower index, higher index); the transposed element is the conjugate
    dipoles: BTreeMap<(usize, usize), Vector3>,
    mass: f64,
    charge: f64,
    motion: Motion,
}

impl AtomModel {
    /// Creates a model with no dipole couplings. Energies must be strictly increasing.
    pub fn new(levels: Vec<Level>, mass: f64, charge: f64, motion: Motion) -> Result<Self> {
        require_positive("electron mass", mass)?;
        // zero charge switches the interaction off entirely
        require_non_negative("charge", charge)?;
        if levels.len() < 2 {
            return Err(Error::Config(
                "an atom model needs at least two levels".into(),
            ));
        }
        for pair in levels.windows(2) {
            if !(pair[1].energy > pair[0].energy) {
                return Err(Error::Domain(format!(
                    "level energies must be strictly increasing: `{}` ({}) then `{}` ({})",
                    pair[0].label, pair[0].energy, pair[1].label, pair[1].energy
                )));
            }
        }
        for (i, level) in levels.iter().enumerate() {
            if !level.energy.is_finite() {
                return Err(Error::Domain(format!(
                    "level `{}` has a non-finite energy",
                    level.label
                )));
            }
            if levels[..i].iter().any(|l| l.label == level.label) {
                return Err(Error::Config(format!(
                    "duplicate level label `{}`",
                    level.label
                )));
            }
        }
        if let Motion::Linear(axis) = motion {
            check_unit(axis)?;
        }
        Ok(Self {
            levels,
            dipoles: BTreeMap::new(),
            mass,
            charge,
            motion,
        })
    }

    /// Sets `d_nm` (and hence `d_mn = conj(d_nm)`).
    pub fn with_dipole(mut self, n: usize, m: usize, d_nm: Vector3) -> Result<Self> {
        self.set_dipole(n, m, d_nm)?;
        Ok(self)
    }

    fn set_dipole(&mut self, n: usize, m: usize, d_nm: Vector3) -> Result<()> {
        if n >= self.levels.len() || m >= self.levels.len() {
            return Err(Error::Config(format!(
                "dipole index ({n}, {m}) out of range"
            )));
        }
        if n == m {
            return Err(Error::Config(
                "diagonal dipole elements are not supported".into(),
            ));
        }
        if d_nm.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Domain(format!(
                "dipole element ({n}, {m}) is not finite"
            )));
        }
        if self.charge == 0.0 && norm_sqr(&d_nm) > 0.0 {
            return Err(Error::Domain(
                "an uncharged model cannot carry dipole elements".into(),
            ));
        }
        let (key, value) = if n < m {
            ((n, m), d_nm)
        } else {
            ((m, n), conj(&d_nm))
        };
        self.dipoles.insert(key, value);
        Ok(())
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn charge(&self) -> f64 {
        self.charge
    }

    pub fn motion(&self) -> Motion {
        self.motion
    }

    pub fn level_index(&self, label: &str) -> Result<usize> {
        self.levels
            .iter()
            .position(|l| l.label == label)
            .ok_or_else(|| Error::UnknownLevel(label.to_string()))
    }

    pub fn energy(&self, n: usize) -> f64 {
        self.levels[n].energy
    }

    /// `omega_nm = omega_n - omega_m`.
    pub fn omega(&self, n: usize, m: usize) -> f64 {
        self.levels[n].energy - self.levels[m].energy
    }

    pub fn dipole(&self, n: usize, m: usize) -> Vector3 {
        if n < m {
            self.dipoles.get(&(n, m)).copied().unwrap_or(ZERO_VECTOR)
        } else if n > m {
            self.dipoles.get(&(m, n)).map(conj).unwrap_or(ZERO_VECTOR)
        } else {
            ZERO_VECTOR
        }
    }

    /// `r_nm = -d_nm / e`.
    pub fn position(&self, n: usize, m: usize) -> Vector3 {
        if self.charge == 0.0 {
            return ZERO_VECTOR;
        }
        let d = self.dipole(n, m);
        d.map(|c| -c / self.charge)
    }

    /// `p_nm = i m omega_nm r_nm`.
    pub fn momentum(&self, n: usize, m: usize) -> Vector3 {
        let factor = Complex64::new(0.0, self.mass * self.omega(n, m));
        self.position(n, m).map(|c| factor * c)
    }

    /// Level pairs with a non-zero dipole element, as `(lower, higher)` indices.
    pub fn coupled_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.dipoles
            .iter()
            .filter(|(_, d)| norm_sqr(d) > 0.0)
            .map(|(k, _)| *k)
    }

    /// Loads a model from the YAML schema documented in `data/atoms/`.
    pub fn from_yaml_str(text: &str) -> Result<Self> {
        let file: AtomFile = serde_yaml::from_str(text).map_err(|e| {
            let (line, column) = e
                .location()
                .map(|l| (l.line(), l.column()))
                .unwrap_or((0, 0));
            Error::Parse {
                line,
                column,
                message: e.to_string(),
            }
        })?;
        file.into_model()
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_yaml_str(&text)
    }
}

fn conj(v: &Vector3) -> Vector3 {
    v.map(|c| c.conj())
}

fn check_unit(axis: [f64; 3]) -> Result<()> {
    let n = dot_real(axis, axis);
    if (n - 1.0).abs() > 1e-12 {
        return Err(Error::Domain(format!("axis {axis:?} is not a unit vector")));
    }
    Ok(())
}

fn real_vector(v: [f64; 3]) -> Vector3 {
    v.map(|x| Complex64::new(x, 0.0))
}

/// Two-level atom with a real transition dipole along `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelAtom {
    pub omega_eg: f64,
    pub d_eg: f64,
}

impl TwoLevelAtom {
    pub fn new(omega_eg: f64, d_eg: f64) -> Result<Self> {
        require_positive("transition frequency", omega_eg)?;
        require_non_negative("dipole magnitude", d_eg)?;
        Ok(Self { omega_eg, d_eg })
    }

    /// Dipole magnitude that yields the on-shell rate `gamma` at `omega_eg`.
    pub fn with_decay_rate(omega_eg: f64, gamma: f64) -> Result<Self> {
        require_positive("transition frequency", omega_eg)?;
        require_non_negative("decay rate", gamma)?;
        let d = (3.0 * std::f64::consts::PI * gamma / omega_eg.powi(3)).sqrt();
        Self::new(omega_eg, d)
    }

    pub fn to_model(self) -> AtomModel {
        build_two_level(self.omega_eg, self.d_eg).expect("validated on construction")
    }
}

/// Two levels `g` (energy 0) and `e` (energy `omega_eg`) with unit mass and charge.
pub fn build_two_level(omega_eg: f64, d_eg: f64) -> Result<AtomModel> {
    require_positive("transition frequency", omega_eg)?;
    require_non_negative("dipole magnitude", d_eg)?;
    let levels = vec![
        Level {
            label: "g".into(),
            energy: 0.0,
        },
        Level {
            label: "e".into(),
            energy: omega_eg,
        },
    ];
    AtomModel::new(levels, 1.0, 1.0, Motion::Isotropic)?.with_dipole(
        1,
        0,
        real_vector([0.0, 0.0, d_eg]),
    )
}

/// Truncated one-dimensional harmonic oscillator along `x`.
///
/// Levels `n = 0..n_levels` sit at `n * omega`; the only non-zero position
/// elements are `x_{n,n+1} = sqrt((n + 1) / (2 m omega))`. Interior states
/// satisfy the Thomas-Reiche-Kuhn sum rule exactly.
pub fn build_oscillator(omega: f64, mass: f64, n_levels: usize) -> Result<AtomModel> {
    require_positive("oscillator frequency", omega)?;
    require_positive("mass", mass)?;
    if n_levels < 3 {
        return Err(Error::Config(format!(
            "an oscillator model needs at least 3 levels, got {n_levels}"
        )));
    }
    let levels = (0..n_levels)
        .map(|n| Level {
            label: n.to_string(),
            energy: n as f64 * omega,
        })
        .collect();
    let charge = 1.0;
    let mut model = AtomModel::new(levels, mass, charge, Motion::Linear([1.0, 0.0, 0.0]))?;
    for n in 0..n_levels - 1 {
        let x = ((n + 1) as f64 / (2.0 * mass * omega)).sqrt();
        model.set_dipole(n, n + 1, real_vector([-charge * x, 0.0, 0.0]))?;
    }
    Ok(model)
}

/// Thomas-Reiche-Kuhn sum `sum_n omega_ns |r_ns · axis|^2` for state `s`.
///
/// Complete models give `1 / 2m` along every direction of motion.
pub fn trk_sum(model: &AtomModel, state: &str, axis: [f64; 3]) -> Result<f64> {
    check_unit(axis)?;
    let s = model.level_index(state)?;
    Ok((0..model.len())
        .filter(|&n| n != s)
        .map(|n| model.omega(n, s) * project(&model.position(n, s), axis).norm_sqr())
        .sum())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AtomFile {
    #[serde(default = "one")]
    mass: f64,
    #[serde(default = "one")]
    charge: f64,
    #[serde(default)]
    motion: MotionSpec,
    levels: Vec<LevelSpec>,
    #[serde(default)]
    dipoles: Vec<DipoleSpec>,
}

fn one() -> f64 {
    1.0
}

// `isotropic` or `{linear: [x, y, z]}`
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MotionSpec {
    Named(String),
    Axis(LinearSpec),
}

impl Default for MotionSpec {
    fn default() -> Self {
        MotionSpec::Named("isotropic".into())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LinearSpec {
    linear: [f64; 3],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct LevelSpec {
    label: String,
    energy: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct DipoleSpec {
    from: String,
    to: String,
    re: [f64; 3],
    #[serde(default)]
    im: [f64; 3],
}

impl AtomFile {
    fn into_model(self) -> Result<AtomModel> {
        let motion = match self.motion {
            MotionSpec::Named(name) if name == "isotropic" => Motion::Isotropic,
            MotionSpec::Named(name) => {
                return Err(Error::Config(format!(
                    "unknown motion `{name}`; expected `isotropic` or `{{linear: [x, y, z]}}`"
                )))
            }
            MotionSpec::Axis(spec) => Motion::Linear(spec.linear),
        };
        let levels = self
            .levels
            .into_iter()
            .map(|l| Level {
                label: l.label,
                energy: l.energy,
            })
            .collect();
        let mut model = AtomModel::new(levels, self.mass, self.charge, motion)?;
        for d in self.dipoles {
            let n = model.level_index(&d.from)?;
            let m = model.level_index(&d.to)?;
            let v = [0, 1, 2].map(|i| Complex64::new(d.re[i], d.im[i]));
            model.set_dipole(n, m, v)?;
        }
        Ok(model)
    }
}
