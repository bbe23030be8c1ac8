//! Resonance fluorescence from a sharp incident line and the stimulated Lamb line.
//!
//! Both rates have the damped-resonance form
//!
//! ```text
//! γ = S Γ |e·d|² / 2 · n / ((ω_0 - ω_res)² + Γ² / 4)
//! ```
//!
//! with a representation-dependent factor `n` that equals 1 on resonance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atom::{build_two_level, norm_sqr, project, AtomModel};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::lineshape::{
    gamma_offshell, gamma_onshell, mode_coupling_sq, numerator, numerator_from_first_principles,
};
use crate::repr::{coupling_pair, GaugeRepresentation};
use crate::spectrum::{Spectrum, SpectrumMeta};
use crate::DEFAULT_CUTOFF_RATIO;

/// Representation factor of the fluorescence rate for a sharp line at `omega_0`.
pub fn n_factor(rep: GaugeRepresentation, omega_0: f64, omega_eg: f64) -> Result<f64> {
    require_positive("incident frequency", omega_0)?;
    require_positive("transition frequency", omega_eg)?;
    Ok(match rep.canonical() {
        GaugeRepresentation::Coulomb => omega_eg / omega_0,
        GaugeRepresentation::Poincare => (omega_0 / omega_eg).powi(3),
        GaugeRepresentation::Symmetric => {
            16.0 * omega_eg * omega_0.powi(3) / (omega_eg + omega_0).powi(4)
        }
        custom => {
            // (ω_0 / ω_eg) |u⁻(ω_0; ω_eg)|⁴
            let u = coupling_pair(custom, omega_0, omega_eg)?.u_minus;
            omega_0 / omega_eg * u.powi(4)
        }
    })
}

/// The same factor assembled from the off-shell rate and the single-mode
/// coupling: `n = 2 Γ(ω_0) K(ω_0) / (ω_0 Γ |d|²)`.
pub fn n_factor_via_rate_route(
    rep: GaugeRepresentation,
    omega_0: f64,
    omega_eg: f64,
) -> Result<f64> {
    require_positive("incident frequency", omega_0)?;
    let model = build_two_level(omega_eg, 1.0)?;
    let gamma = gamma_onshell(&model, "e", "g")?;
    let gamma_at = gamma_offshell(omega_0, &model, "e", rep)?;
    let k = mode_coupling_sq(rep, &model, 1, 0, omega_0);
    Ok(2.0 * gamma_at * k / (omega_0 * gamma))
}

/// Resonance fluorescence with a sharp incident line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpLineScenario {
    pub intensity: f64,
    pub omega_0: f64,
    pub omega_eg: f64,
    pub gamma: f64,
    /// `|e·d_ge|`.
    pub dipole_proj: f64,
    pub rep: GaugeRepresentation,
}

impl SharpLineScenario {
    pub fn validate(&self) -> Result<()> {
        require_non_negative("intensity", self.intensity)?;
        require_positive("omega_0", self.omega_0)?;
        require_positive("omega_eg", self.omega_eg)?;
        require_positive("gamma", self.gamma)?;
        require_non_negative("dipole_proj", self.dipole_proj)
    }

    fn at(&self, omega_0: f64) -> Self {
        Self { omega_0, ..*self }
    }
}

fn damped_rate(intensity: f64, gamma: f64, dipole_proj: f64, n: f64, detuning: f64) -> f64 {
    intensity * gamma * dipole_proj * dipole_proj / 2.0 * n
        / (detuning * detuning + gamma * gamma / 4.0)
}

pub fn fluorescence_rate(scenario: &SharpLineScenario) -> Result<f64> {
    scenario.validate()?;
    let n = n_factor(scenario.rep, scenario.omega_0, scenario.omega_eg)?;
    Ok(damped_rate(
        scenario.intensity,
        scenario.gamma,
        scenario.dipole_proj,
        n,
        scenario.omega_0 - scenario.omega_eg,
    ))
}

/// Fluorescence rate over a grid of incident frequencies.
///
/// The returned spectrum stores the incident frequency in its `omega_k`
/// column and the rate in `S`; `n_factor` is attached.
pub fn fluorescence_sweep(scenario: &SharpLineScenario, omega_0_grid: &[f64]) -> Result<Spectrum> {
    scenario.validate()?;
    let rows = omega_0_grid
        .par_iter()
        .map(|&w| {
            let s = scenario.at(w);
            Ok((fluorescence_rate(&s)?, n_factor(s.rep, w, s.omega_eg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rates, ns): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let mut meta = SpectrumMeta::new(
        scenario.rep.name(),
        scenario.gamma,
        scenario.omega_eg,
        0.0,
        DEFAULT_CUTOFF_RATIO * scenario.omega_eg,
    );
    meta.note = "resonance fluorescence rate versus incident frequency".into();
    meta.params.insert("intensity".into(), scenario.intensity);
    meta.params
        .insert("dipole_proj".into(), scenario.dipole_proj);
    Spectrum::new(omega_0_grid.to_vec(), rates, meta)?.with_n_factor(ns)
}

/// Incident radiation as a set of sharp lines with a common polarization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IncidentSpectrum {
    /// `(frequency, integrated intensity)` pairs.
    pub lines: Vec<(f64, f64)>,
    /// Real unit polarization vector.
    pub polarization: [f64; 3],
}

impl IncidentSpectrum {
    pub fn sharp(omega: f64, intensity: f64, polarization: [f64; 3]) -> Self {
        Self {
            lines: vec![(omega, intensity)],
            polarization,
        }
    }

    /// Discretizes a sampled intensity density with trapezoidal weights.
    pub fn from_density(grid: &[f64], density: &[f64], polarization: [f64; 3]) -> Result<Self> {
        if grid.len() != density.len() || grid.len() < 2 {
            return Err(Error::Config(
                "incident density needs matching grid and values, at least 2 points".into(),
            ));
        }
        let mut lines: Vec<(f64, f64)> = grid.iter().map(|&w| (w, 0.0)).collect();
        for j in 0..grid.len() - 1 {
            let h = grid[j + 1] - grid[j];
            lines[j].1 += 0.5 * h * density[j];
            lines[j + 1].1 += 0.5 * h * density[j + 1];
        }
        Ok(Self {
            lines,
            polarization,
        })
    }
}

/// Multi-channel damped absorption rate out of `initial`.
///
/// Each incident line at `ω_j` drives every level `n` above `initial`; the
/// channel contributes `S_j Γ_n(ω_i + ω_j) K_n(ω_j) / (ω_j ((ω_j - ω_ni)² + Γ_n² / 4))`,
/// with `K` projected on the polarization and `Γ_n` the on-shell width of `n`.
pub fn damped_rate_general(
    model: &AtomModel,
    rep: GaugeRepresentation,
    initial: &str,
    incident: &IncidentSpectrum,
) -> Result<f64> {
    if incident.lines.is_empty() {
        return Err(Error::Config("incident spectrum is empty".into()));
    }
    let i = model.level_index(initial)?;
    let mut channels = Vec::new();
    for n in (i + 1)..model.len() {
        let d2 = norm_sqr(&model.dipole(n, i));
        if d2 == 0.0 {
            continue;
        }
        let label = &model.levels()[n].label;
        let width: f64 = (0..n)
            .map(|m| gamma_onshell(model, label, &model.levels()[m].label))
            .sum::<Result<f64>>()?;
        let pol = project(&model.dipole(n, i), incident.polarization).norm_sqr() / d2;
        channels.push((n, label, width, pol));
    }
    let mut total = 0.0;
    for &(w, s) in &incident.lines {
        require_positive("incident frequency", w)?;
        require_non_negative("incident intensity", s)?;
        for (n, label, width, pol) in &channels {
            let gamma_at = gamma_offshell(model.energy(i) + w, model, label, rep)?;
            let k = mode_coupling_sq(rep, model, *n, i, w) * pol;
            let detuning = w - model.omega(*n, i);
            total += s * gamma_at * k / (w * (detuning * detuning + width * width / 4.0));
        }
    }
    Ok(total)
}

/// Representation factor of the Lamb-line rate.
///
/// `omega_0` is the microwave frequency, `omega` the 2s-2p separation and
/// `omega_prime` the 2p-1s frequency; the cascade photon has frequency
/// `omega + omega_prime - omega_0`.
pub fn lamb_n_factor(
    rep: GaugeRepresentation,
    omega_0: f64,
    omega: f64,
    omega_prime: f64,
) -> Result<f64> {
    require_positive("microwave frequency", omega_0)?;
    require_positive("Lamb separation", omega)?;
    require_positive("2p-1s frequency", omega_prime)?;
    let emitted = omega + omega_prime - omega_0;
    if !(emitted > 0.0) {
        return Err(Error::Domain(format!(
            "emitted frequency ω + ω' - ω_0 = {emitted} must be positive"
        )));
    }
    Ok(match rep.canonical() {
        GaugeRepresentation::Coulomb => {
            emitted / omega_prime * (omega * omega) / (omega_0 * omega_0)
        }
        GaugeRepresentation::Poincare => (emitted / omega_prime).powi(3),
        GaugeRepresentation::Symmetric => {
            4.0 * emitted.powi(3) / (omega_prime * (omega + 2.0 * omega_prime - omega_0).powi(2))
                * 4.0
                * omega
                * omega
                / (omega + omega_0).powi(2)
        }
        custom => {
            let u = coupling_pair(custom, omega_0, omega)?.u_minus;
            numerator(custom, emitted, omega_prime)? * omega / omega_0 * u * u
        }
    })
}

/// The Lamb-line factor from first principles: cascade numerator at the
/// emitted frequency times the normalized microwave coupling `2 K(ω_0) / (ω_0 |d|²)`.
pub fn lamb_n_factor_via_coupling(
    rep: GaugeRepresentation,
    omega_0: f64,
    omega: f64,
    omega_prime: f64,
) -> Result<f64> {
    require_positive("microwave frequency", omega_0)?;
    let emitted = omega + omega_prime - omega_0;
    if !(emitted > 0.0) {
        return Err(Error::Domain(format!(
            "emitted frequency {emitted} must be positive"
        )));
    }
    let cascade = numerator_from_first_principles(rep, emitted, omega_prime)?;
    let microwave = build_two_level(omega, 1.0)?;
    Ok(cascade * 2.0 * mode_coupling_sq(rep, &microwave, 1, 0, omega_0) / omega_0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambLineScenario {
    pub intensity: f64,
    /// Microwave frequency for single-point evaluation.
    pub omega_0: f64,
    /// 2s-2p separation.
    pub omega: f64,
    /// 2p-1s frequency.
    pub omega_prime: f64,
    pub gamma_2p1s: f64,
    /// `|e·d_2s,2p|`.
    pub dipole_proj: f64,
    pub rep: GaugeRepresentation,
}

impl LambLineScenario {
    /// Plot-friendly placeholder values (`ω' / ω = 10³`, `Γ / ω = 0.6`); not hydrogen data.
    pub fn hydrogen_placeholder(rep: GaugeRepresentation) -> Self {
        Self {
            intensity: 1.0,
            omega_0: 1.0,
            omega: 1.0,
            omega_prime: 1e3,
            gamma_2p1s: 0.6,
            dipole_proj: 1.0,
            rep,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("intensity", self.intensity)?;
        require_positive("omega_0", self.omega_0)?;
        require_positive("omega", self.omega)?;
        require_positive("omega_prime", self.omega_prime)?;
        require_positive("gamma_2p1s", self.gamma_2p1s)?;
        require_non_negative("dipole_proj", self.dipole_proj)
    }
}

pub fn lamb_rate(scenario: &LambLineScenario) -> Result<f64> {
    scenario.validate()?;
    let n = lamb_n_factor(
        scenario.rep,
        scenario.omega_0,
        scenario.omega,
        scenario.omega_prime,
    )?;
    Ok(damped_rate(
        scenario.intensity,
        scenario.gamma_2p1s,
        scenario.dipole_proj,
        n,
        scenario.omega_0 - scenario.omega,
    ))
}

/// Lamb-line rate over microwave frequencies; `omega_eg` in the metadata holds `ω`.
pub fn lamb_rate_sweep(scenario: &LambLineScenario, omega_0_grid: &[f64]) -> Result<Spectrum> {
    scenario.validate()?;
    let rows = omega_0_grid
        .par_iter()
        .map(|&w| {
            let s = LambLineScenario {
                omega_0: w,
                ..*scenario
            };
            Ok((
                lamb_rate(&s)?,
                lamb_n_factor(s.rep, w, s.omega, s.omega_prime)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let (rates, ns): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let mut meta = SpectrumMeta::new(
        scenario.rep.name(),
        scenario.gamma_2p1s,
        scenario.omega,
        0.0,
        DEFAULT_CUTOFF_RATIO * scenario.omega,
    );
    meta.note = "Lamb-line stimulated decay rate versus microwave frequency".into();
    meta.params
        .insert("omega_prime".into(), scenario.omega_prime);
    meta.params.insert("intensity".into(), scenario.intensity);
    meta.params
        .insert("dipole_proj".into(), scenario.dipole_proj);
    Spectrum::new(omega_0_grid.to_vec(), rates, meta)?.with_n_factor(ns)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const REPS: [GaugeRepresentation; 3] = GaugeRepresentation::NAMED;

    #[test]
    fn n_factor_examples() {
        for rep in REPS {
            assert_eq!(n_factor(rep, 1.0, 1.0).unwrap(), 1.0);
        }
        assert_relative_eq!(
            n_factor(GaugeRepresentation::Symmetric, 3.0, 1.0).unwrap(),
            1.6875,
            max_relative = 1e-15
        );
        assert_eq!(
            n_factor(GaugeRepresentation::Coulomb, 2.0, 1.0).unwrap(),
            0.5
        );
        assert!(n_factor(GaugeRepresentation::Coulomb, 0.0, 1.0).is_err());
    }

    #[test]
    fn fluorescence_examples() {
        let base = SharpLineScenario {
            intensity: 2.0,
            omega_0: 1.0,
            omega_eg: 1.0,
            gamma: 0.1,
            dipole_proj: 0.5,
            rep: GaugeRepresentation::Symmetric,
        };
        assert_relative_eq!(
            fluorescence_rate(&base).unwrap(),
            2.0 * 0.25 * 2.0 / 0.1,
            max_relative = 1e-14
        );
        assert_eq!(
            fluorescence_rate(&SharpLineScenario {
                intensity: 0.0,
                ..base
            })
            .unwrap(),
            0.0
        );
        let p = fluorescence_rate(&SharpLineScenario {
            omega_0: 2.0,
            rep: GaugeRepresentation::Poincare,
            ..base
        })
        .unwrap();
        let c = fluorescence_rate(&SharpLineScenario {
            omega_0: 2.0,
            rep: GaugeRepresentation::Coulomb,
            ..base
        })
        .unwrap();
        assert_relative_eq!(p / c, 16.0, max_relative = 1e-14);
    }

    #[test]
    fn lamb_examples() {
        for rep in REPS {
            assert_relative_eq!(
                lamb_n_factor(rep, 1.0, 1.0, 1e3).unwrap(),
                1.0,
                max_relative = 1e-15
            );
        }
        assert_eq!(
            lamb_n_factor(GaugeRepresentation::Poincare, 1.0, 1.0, 10.0).unwrap(),
            1.0
        );
        assert!(matches!(
            lamb_n_factor(GaugeRepresentation::Poincare, 11.0, 1.0, 10.0),
            Err(Error::Domain(_))
        ));
        assert_relative_eq!(
            lamb_n_factor(GaugeRepresentation::Coulomb, 2.0, 1.0, 10.0).unwrap(),
            0.225,
            max_relative = 1e-15
        );
    }

    #[test]
    fn lamb_sweep_zero_intensity() {
        let s = LambLineScenario {
            intensity: 0.0,
            ..LambLineScenario::hydrogen_placeholder(GaugeRepresentation::Coulomb)
        };
        let sweep = lamb_rate_sweep(&s, &[0.5, 1.0, 1.5]).unwrap();
        assert!(sweep.values().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn empty_incident_spectrum_is_rejected() {
        let model = build_two_level(1.0, 1.0).unwrap();
        let empty = IncidentSpectrum {
            lines: vec![],
            polarization: [0.0, 0.0, 1.0],
        };
        assert!(matches!(
            damped_rate_general(&model, GaugeRepresentation::Coulomb, "g", &empty),
            Err(Error::Config(_))
        ));
    }
}
