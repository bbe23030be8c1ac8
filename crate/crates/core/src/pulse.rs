//! A two-level atom excited by a rectangular laser π-pulse, then decaying.
//!
//! The pulse occupies `-π/Ω < t < 0`. During the pulse spontaneous emission
//! is neglected in the atomic equations but the emitted-field amplitudes keep
//! accumulating; after it the excited amplitude decays as `e^{-Γt/2}`. The
//! long-time amplitude of a mode at `ω_k` is
//!
//! ```text
//! b_k(∞) = -i g* u_k⁻ β(ω_k)
//! β = 1 / (iδ_k + Γ/2) + laser term
//! ```
//!
//! with `δ_k = ω_0 - ω_k`. [`laser_term`] evaluates the general (detuned)
//! laser term and [`laser_term_resonant`] the resonant reduction; both have a
//! removable singularity that is evaluated by Taylor expansion.
//!
//! Conventions: with `b_g(-π/Ω) = 1` the RWA equations give
//! `b_e(t) = (Ω u_l⁻ / μ) e^{iδ_l (t - π/Ω)/2} sin(μ (t + π/Ω) / 2)`, so a
//! resonant π-pulse leaves `b_e(0) = 1`, matching the post-pulse ansatz.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::lineshape::{lorentzian, numerator, LineshapeParams};
use crate::ode::Dopri5;
use crate::repr::{coupling_pair, coupling_pair_from_alpha, CouplingPair, GaugeRepresentation};
use crate::spectrum::{Spectrum, SpectrumMeta};
use crate::DEFAULT_CUTOFF_RATIO;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative distance from a removable singularity inside which the series is used.
pub const SERIES_RADIUS: f64 = 1e-3;

/// Time-dependent coupling envelope `Ω(t)`.
pub trait Envelope {
    fn start(&self) -> f64;
    fn end(&self) -> f64;
    fn rabi_at(&self, t: f64) -> f64;
}

/// `Ω(t) = Ω` on `[-π/Ω, 0]`, zero elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rectangular {
    pub rabi: f64,
}

impl Envelope for Rectangular {
    fn start(&self) -> f64 {
        -PI / self.rabi
    }

    fn end(&self) -> f64 {
        0.0
    }

    fn rabi_at(&self, t: f64) -> f64 {
        if t >= self.start() && t <= self.end() {
            self.rabi
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnvelopeKind {
    #[default]
    Rectangular,
}

/// Laser pulse parameters. `rabi = 0` means no pulse at all.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseConfig {
    pub rabi: f64,
    pub omega_l: f64,
    pub envelope: EnvelopeKind,
    /// Mixing parameter of the laser coupling. `None` evaluates the
    /// representation's own rule at the laser frequency (0, 1 or 1/2 on resonance).
    pub alpha_laser: Option<f64>,
}

impl PulseConfig {
    pub fn resonant(rabi: f64, omega_0: f64) -> Self {
        Self {
            rabi,
            omega_l: omega_0,
            envelope: EnvelopeKind::Rectangular,
            alpha_laser: None,
        }
    }

    /// Laser detuned by `delta_l = omega_0 - omega_l`.
    pub fn detuned(rabi: f64, omega_0: f64, delta_l: f64) -> Self {
        Self {
            omega_l: omega_0 - delta_l,
            ..Self::resonant(rabi, omega_0)
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_non_negative("rabi", self.rabi)?;
        require_positive("omega_l", self.omega_l)?;
        if let Some(a) = self.alpha_laser {
            if !a.is_finite() {
                return Err(Error::Domain("alpha_laser must be finite".into()));
            }
        }
        Ok(())
    }

    pub fn envelope(&self) -> Rectangular {
        match self.envelope {
            EnvelopeKind::Rectangular => Rectangular { rabi: self.rabi },
        }
    }

    /// `π / Ω`; infinite without a pulse.
    pub fn duration(&self) -> f64 {
        PI / self.rabi
    }
}

/// `u_l±` of the atom-laser coupling.
pub fn laser_coupling(
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
) -> Result<CouplingPair> {
    config.validate()?;
    require_positive("omega_0", omega_0)?;
    match config.alpha_laser {
        Some(a) => Ok(coupling_pair_from_alpha(a, config.omega_l, omega_0)),
        None => coupling_pair(rep, config.omega_l, omega_0),
    }
}

/// The detunings of one emitted mode. `delta_kl` is derived so that
/// `delta_k + delta_kl = delta_l` up to rounding of a single subtraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetuningSet {
    pub delta_l: f64,
    pub delta_k: f64,
    pub mu: f64,
}

impl DetuningSet {
    pub fn new(
        config: &PulseConfig,
        rep: GaugeRepresentation,
        omega_0: f64,
        omega_k: f64,
    ) -> Result<Self> {
        require_positive("omega_k", omega_k)?;
        let u = laser_coupling(config, rep, omega_0)?.u_minus;
        let delta_l = omega_0 - config.omega_l;
        Ok(Self {
            delta_l,
            delta_k: omega_0 - omega_k,
            mu: (config.rabi * u).hypot(delta_l),
        })
    }

    /// `ω_k - ω_l`.
    pub fn delta_kl(&self) -> f64 {
        self.delta_l - self.delta_k
    }
}

fn pulse_window(config: &PulseConfig, t: f64) -> Result<()> {
    config.validate()?;
    if config.rabi == 0.0 {
        return Err(Error::Domain(
            "there is no pulse window when rabi = 0".into(),
        ));
    }
    let start = -config.duration();
    let slack = 1e-12 * config.duration();
    if !(t >= start - slack && t <= slack) {
        return Err(Error::Domain(format!(
            "t = {t} lies outside the pulse window [{start}, 0]"
        )));
    }
    Ok(())
}

/// Excited amplitude during the pulse (RWA, no emission back-action).
pub fn excited_amplitude_during_pulse(
    t: f64,
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
) -> Result<Complex64> {
    pulse_window(config, t)?;
    let u = laser_coupling(config, rep, omega_0)?.u_minus;
    let delta_l = omega_0 - config.omega_l;
    let mu = (config.rabi * u).hypot(delta_l);
    if mu == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let tau = config.duration();
    let phase = Complex64::from_polar(1.0, delta_l * (t - tau) / 2.0);
    Ok(phase * (config.rabi * u / mu * (mu * (t + tau) / 2.0).sin()))
}

/// Ground amplitude during the pulse, the companion of [`excited_amplitude_during_pulse`].
pub fn ground_amplitude_during_pulse(
    t: f64,
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
) -> Result<Complex64> {
    pulse_window(config, t)?;
    let u = laser_coupling(config, rep, omega_0)?.u_minus;
    let delta_l = omega_0 - config.omega_l;
    let mu = (config.rabi * u).hypot(delta_l);
    let tau = config.duration();
    let phase = Complex64::from_polar(1.0, -delta_l * (t + tau) / 2.0);
    if mu == 0.0 {
        return Ok(phase);
    }
    let s = mu * (t + tau) / 2.0;
    Ok(phase * Complex64::new(s.cos(), delta_l / mu * s.sin()))
}

// B(y) / (μ² - y²) with B(y) = e^{iθy} - cos θμ - (i/μ) y sin θμ.
fn bracket_ratio(y: f64, mu: f64, theta: f64) -> Complex64 {
    for y0 in [mu, -mu] {
        let eps = y - y0;
        if eps.abs() <= SERIES_RADIUS * mu {
            // B(y0) = 0 and μ² - y² = -ε (2 y0 + ε)
            let e0 = Complex64::from_polar(1.0, theta * y0);
            let mut sum = I * theta * e0 - I * ((theta * mu).sin() / mu);
            let mut term = I * theta * e0;
            for n in 2..60 {
                term *= I * theta * eps / n as f64;
                sum += term;
                if term.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            return -sum / (2.0 * y0 + eps);
        }
    }
    let (s, c) = (theta * mu).sin_cos();
    let b = Complex64::from_polar(1.0, theta * y) - c - I * (y * s / mu);
    b / ((mu - y) * (mu + y))
}

/// Laser contribution to the braced factor for a general laser detuning.
pub fn laser_term(delta_k: f64, delta_l: f64, rabi: f64, u_l: f64) -> Complex64 {
    if rabi == 0.0 || u_l == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let theta = PI / (2.0 * rabi);
    let mu = (rabi * u_l).hypot(delta_l);
    let prefactor = Complex64::from_polar(2.0 * u_l * rabi, -theta * delta_l);
    prefactor * bracket_ratio(2.0 * delta_k - delta_l, mu, theta)
}

/// Laser contribution for a resonant pulse: `2 (Ω e^{iπδ_k/Ω} - 2iδ_k) / (Ω² - 4δ_k²)`.
pub fn laser_term_resonant(delta_k: f64, rabi: f64) -> Complex64 {
    if rabi == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let half = rabi / 2.0;
    for z0 in [half, -half] {
        let eps = delta_k - z0;
        if eps.abs() <= SERIES_RADIUS * half {
            // N(z0) = 0 and Ω² - 4z² = -4ε (2 z0 + ε)
            let k = PI / rabi;
            let e0 = Complex64::from_polar(1.0, k * z0);
            let mut sum = I * PI * e0 - 2.0 * I;
            let mut term = I * PI * e0;
            for n in 2..60 {
                term *= I * k * eps / n as f64;
                sum += term;
                if term.norm() <= 1e-18 * sum.norm() {
                    break;
                }
            }
            return -sum / (2.0 * (2.0 * z0 + eps));
        }
    }
    let numer = Complex64::from_polar(rabi, PI * delta_k / rabi) - 2.0 * I * delta_k;
    2.0 * numer / ((rabi - 2.0 * delta_k) * (rabi + 2.0 * delta_k))
}

/// Whether the laser contribution is kept in the braced factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LaserTerm {
    #[default]
    Included,
    Excluded,
}

/// Long-time emission amplitude of one mode, with the coupling `g*` left symbolic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmissionAmplitude {
    pub u_k_minus: f64,
    pub lorentzian: Complex64,
    pub laser: Complex64,
}

impl EmissionAmplitude {
    /// `β = 1 / (iδ_k + Γ/2) + laser term`.
    pub fn braced(&self) -> Complex64 {
        self.lorentzian + self.laser
    }

    /// `b_k(∞) / g*`.
    pub fn per_coupling(&self) -> Complex64 {
        -I * self.u_k_minus * self.braced()
    }
}

/// Evaluates the long-time amplitude of the mode at `omega_k` for a general laser detuning.
pub fn closed_form_amplitude(
    omega_k: f64,
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
    gamma: f64,
) -> Result<EmissionAmplitude> {
    require_positive("gamma", gamma)?;
    let d = DetuningSet::new(config, rep, omega_0, omega_k)?;
    let u_l = laser_coupling(config, rep, omega_0)?.u_minus;
    Ok(EmissionAmplitude {
        u_k_minus: coupling_pair(rep, omega_k, omega_0)?.u_minus,
        lorentzian: 1.0 / Complex64::new(gamma / 2.0, d.delta_k),
        laser: laser_term(d.delta_k, d.delta_l, config.rabi, u_l),
    })
}

/// The resonant-pulse reduction of [`closed_form_amplitude`]; ignores `omega_l`.
pub fn closed_form_amplitude_resonant(
    omega_k: f64,
    rabi: f64,
    rep: GaugeRepresentation,
    omega_0: f64,
    gamma: f64,
) -> Result<EmissionAmplitude> {
    require_positive("gamma", gamma)?;
    require_non_negative("rabi", rabi)?;
    let delta_k = omega_0 - omega_k;
    Ok(EmissionAmplitude {
        u_k_minus: coupling_pair(rep, omega_k, omega_0)?.u_minus,
        lorentzian: 1.0 / Complex64::new(gamma / 2.0, delta_k),
        laser: laser_term_resonant(delta_k, rabi),
    })
}

/// Options for [`integrate_dynamics`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DynamicsOptions {
    /// Drop the counter-rotating laser terms.
    pub rwa: bool,
    /// Couple the discretized modes back into the excited amplitude at all
    /// times and drop the exponential-decay ansatz.
    pub include_field_during_pulse: bool,
    /// End of integration; defaults to `60 / Γ`.
    pub t_max: Option<f64>,
    /// Trajectory samples in the pulse window and after it.
    pub samples: usize,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for DynamicsOptions {
    fn default() -> Self {
        Self {
            rwa: true,
            include_field_during_pulse: false,
            t_max: None,
            samples: 101,
            rtol: 1e-10,
            atol: 1e-12,
        }
    }
}

/// Amplitudes at one instant. Mode amplitudes are divided by `g*` of the mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeState {
    pub b_g0: Complex64,
    pub b_e0: Complex64,
    /// `(ω_k, b_k / g*)` pairs.
    pub b_gk: Vec<(f64, Complex64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub b_g0: Vec<Complex64>,
    pub b_e0: Vec<Complex64>,
    /// State at the end of integration.
    pub last: AmplitudeState,
    pub accepted_steps: usize,
}

impl Trajectory {
    /// `t,re_bg0,im_bg0,re_be0,im_be0` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,re_bg0,im_bg0,re_be0,im_be0\n");
        for ((t, g), e) in self.times.iter().zip(&self.b_g0).zip(&self.b_e0) {
            out.push_str(&format!(
                "{t:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                g.re, g.im, e.re, e.im
            ));
        }
        out
    }

    /// Long-time braced factor of each mode, `(b_k / g*) / (-i u_k⁻)`.
    pub fn braced_factors(&self, rep: GaugeRepresentation, omega_0: f64) -> Result<Vec<Complex64>> {
        self.last
            .b_gk
            .iter()
            .map(|(w, c)| Ok(*c / (-I * coupling_pair(rep, *w, omega_0)?.u_minus)))
            .collect()
    }
}

struct System {
    omega_0: f64,
    omega_l: f64,
    delta_l: f64,
    u_l: CouplingPair,
    rwa: bool,
    // (δ_k, u_k⁻, |g|² weight for back-action)
    modes: Vec<(f64, f64, f64)>,
    back_action: bool,
}

impl System {
    // d/dt of [b_g, b_e, c_0, ...] while the laser is on (or after it, in full-field mode)
    fn rhs(&self, t: f64, rabi: f64, y: &[Complex64], dy: &mut [Complex64]) {
        let (bg, be) = (y[0], y[1]);
        let drive = if rabi == 0.0 {
            Complex64::new(0.0, 0.0)
        } else if self.rwa {
            Complex64::from_polar(self.u_l.u_minus, -self.delta_l * t)
        } else {
            (Complex64::from_polar(self.u_l.u_plus, -self.omega_l * t)
                + Complex64::from_polar(self.u_l.u_minus, self.omega_l * t))
                * Complex64::from_polar(1.0, -self.omega_0 * t)
        };
        dy[0] = -(rabi / 2.0) * drive * be;
        let mut dbe = (rabi / 2.0) * drive.conj() * bg;
        for (j, &(dk, u, w)) in self.modes.iter().enumerate() {
            let rot = Complex64::from_polar(1.0, -dk * t);
            dy[2 + j] = -I * u * rot * be;
            if self.back_action {
                dbe -= I * w * u * rot.conj() * y[2 + j];
            }
        }
        dy[1] = dbe;
    }

    // after the pulse with b_e = e^{-Γt/2} imposed
    fn rhs_ansatz(&self, gamma: f64, t: f64, dy: &mut [Complex64]) {
        let be = (-gamma * t / 2.0).exp();
        dy[0] = Complex64::new(0.0, 0.0);
        dy[1] = Complex64::new(-gamma / 2.0 * be, 0.0);
        for (j, &(dk, u, _)) in self.modes.iter().enumerate() {
            dy[2 + j] = -I * u * Complex64::from_polar(be, -dk * t);
        }
    }
}

fn sample_times(start: f64, end: f64, samples: usize) -> Vec<f64> {
    crate::spectrum::linspace(start, end, samples.max(2))
}

/// Numerically integrates the amplitude equations for the modes in `mode_grid`.
///
/// By default the excited amplitude feels only the laser during the pulse and
/// follows `e^{-Γt/2}` afterwards, while every mode amplitude is integrated
/// from its own equation; the long-time mode amplitudes are then an
/// independent check of [`closed_form_amplitude`]. With
/// `include_field_during_pulse` the modes act back on the atom with weights
/// that reproduce `Γ` in the continuum limit, and no ansatz is imposed.
pub fn integrate_dynamics(
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
    gamma: f64,
    mode_grid: &[f64],
    options: &DynamicsOptions,
) -> Result<Trajectory> {
    config.validate()?;
    require_positive("omega_0", omega_0)?;
    require_positive("gamma", gamma)?;
    for &w in mode_grid {
        require_positive("mode frequency", w)?;
    }
    if mode_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config(
            "mode grid must be strictly increasing".into(),
        ));
    }
    let t_max = options.t_max.unwrap_or(60.0 / gamma);
    require_positive("t_max", t_max)?;
    let u_l = laser_coupling(config, rep, omega_0)?;

    let mut modes = Vec::with_capacity(mode_grid.len());
    for (j, &w) in mode_grid.iter().enumerate() {
        let u = coupling_pair(rep, w, omega_0)?.u_minus;
        // |g|² summed over the frequency bin and all directions and polarizations
        let width = match mode_grid.len() {
            1 => 0.0,
            n => {
                let lo = if j == 0 {
                    w
                } else {
                    0.5 * (w + mode_grid[j - 1])
                };
                let hi = if j + 1 == n {
                    w
                } else {
                    0.5 * (w + mode_grid[j + 1])
                };
                hi - lo
            }
        };
        let weight = width * gamma / (2.0 * PI) * numerator(rep, w, omega_0)? / (u * u);
        modes.push((omega_0 - w, u, weight));
    }
    let system = System {
        omega_0,
        omega_l: config.omega_l,
        delta_l: omega_0 - config.omega_l,
        u_l,
        rwa: options.rwa,
        modes,
        back_action: options.include_field_during_pulse,
    };
    let solver = Dopri5 {
        rtol: options.rtol,
        atol: options.atol,
        ..Dopri5::default()
    };
    let dim = 2 + mode_grid.len();
    let mut y0 = vec![Complex64::new(0.0, 0.0); dim];
    y0[0] = Complex64::new(1.0, 0.0);

    let mut times = Vec::new();
    let mut bg = Vec::new();
    let mut be = Vec::new();
    let mut accepted = 0;
    let mut record = |ts: &[f64], ys: &[Vec<Complex64>], skip_first: bool| {
        for (k, (t, y)) in ts.iter().zip(ys).enumerate() {
            if skip_first && k == 0 {
                continue;
            }
            times.push(*t);
            bg.push(y[0]);
            be.push(y[1]);
        }
    };

    if config.rabi == 0.0 {
        // nothing ever drives the atom out of |g;0>
        let ts = sample_times(0.0, t_max, options.samples);
        let ys = vec![y0.clone(); ts.len()];
        record(&ts, &ys, false);
        return Ok(Trajectory {
            times,
            b_g0: bg,
            b_e0: be,
            last: AmplitudeState {
                b_g0: y0[0],
                b_e0: y0[1],
                b_gk: mode_grid
                    .iter()
                    .map(|&w| (w, Complex64::new(0.0, 0.0)))
                    .collect(),
            },
            accepted_steps: 0,
        });
    }

    let envelope = config.envelope();
    let start = envelope.start();
    let pulse_times = sample_times(start, envelope.end(), options.samples);
    let pulse_rhs =
        |t: f64, y: &[Complex64], dy: &mut [Complex64]| system.rhs(t, envelope.rabi, y, dy);
    let (ys, stats) = solver.integrate(pulse_rhs, start, &y0, &pulse_times)?;
    accepted += stats.accepted;
    record(&pulse_times, &ys, false);

    let mut y = ys.last().expect("pulse samples").clone();
    let after = sample_times(0.0, t_max, options.samples);
    let (ys, stats) = if options.include_field_during_pulse {
        solver.integrate(
            |t, y: &[Complex64], dy: &mut [Complex64]| system.rhs(t, 0.0, y, dy),
            0.0,
            &y,
            &after,
        )?
    } else {
        y[1] = Complex64::new(1.0, 0.0);
        solver.integrate(
            |t, _y: &[Complex64], dy: &mut [Complex64]| system.rhs_ansatz(gamma, t, dy),
            0.0,
            &y,
            &after,
        )?
    };
    accepted += stats.accepted;
    let mut ys = ys;
    if !options.include_field_during_pulse {
        // the ansatz is exact; report it without integration error
        for (t, y) in after.iter().zip(ys.iter_mut()) {
            y[1] = Complex64::new((-gamma * t / 2.0).exp(), 0.0);
        }
    }
    record(&after, &ys, true);
    let end = ys.last().expect("post-pulse samples");
    Ok(Trajectory {
        times,
        b_g0: bg,
        b_e0: be,
        last: AmplitudeState {
            b_g0: end[0],
            b_e0: end[1],
            b_gk: mode_grid
                .iter()
                .zip(&end[2..])
                .map(|(w, c)| (*w, *c))
                .collect(),
        },
        accepted_steps: accepted,
    })
}

fn pulse_meta(
    rep: GaugeRepresentation,
    config: &PulseConfig,
    omega_0: f64,
    gamma: f64,
    note: &str,
) -> SpectrumMeta {
    let mut meta = SpectrumMeta::new(
        rep.name(),
        gamma,
        omega_0,
        0.0,
        DEFAULT_CUTOFF_RATIO * omega_0,
    );
    meta.note = note.into();
    meta.params.insert("rabi".into(), config.rabi);
    meta.params.insert("omega_l".into(), config.omega_l);
    meta.params
        .insert("delta_l".into(), omega_0 - config.omega_l);
    if let Some(a) = config.alpha_laser {
        meta.params.insert("alpha_laser".into(), a);
    }
    meta
}

/// Emission frequencies at which the laser term has its removable singularity.
pub fn removable_singularities(
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
) -> Result<Vec<f64>> {
    if config.rabi == 0.0 {
        return Ok(vec![]);
    }
    let u = laser_coupling(config, rep, omega_0)?.u_minus;
    let delta_l = omega_0 - config.omega_l;
    let mu = (config.rabi * u).hypot(delta_l);
    // 2δ_k - δ_l = ±μ
    Ok([-mu, mu]
        .iter()
        .map(|m| omega_0 - (delta_l + m) / 2.0)
        .collect())
}

/// `S(ω_k) = numerator · (Γ/2π) |β|²`.
///
/// With [`LaserTerm::Excluded`] this is exactly the constant-width lineshape
/// with the shift suppressed.
pub fn pulse_spectrum(
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
    gamma: f64,
    grid: &[f64],
    laser: LaserTerm,
) -> Result<Spectrum> {
    config.validate()?;
    let values = grid
        .par_iter()
        .map(|&w| match laser {
            // without a pulse only the laser-free path is meaningful
            _ if config.rabi == 0.0 => LineshapeParams::new(rep, omega_0, gamma).evaluate(w),
            LaserTerm::Excluded => LineshapeParams::new(rep, omega_0, gamma).evaluate(w),
            LaserTerm::Included => {
                let amp = closed_form_amplitude(w, config, rep, omega_0, gamma)?;
                Ok(numerator(rep, w, omega_0)? * gamma / (2.0 * PI) * amp.braced().norm_sqr())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let note = match laser {
        LaserTerm::Included => "pulse-excited emission spectrum including the laser term",
        LaserTerm::Excluded => "pulse-excited emission spectrum without the laser term",
    };
    let mut meta = pulse_meta(rep, config, omega_0, gamma, note);
    if laser == LaserTerm::Included {
        let (lo, hi) = (
            grid.first().copied().unwrap_or(0.0),
            grid.last().copied().unwrap_or(0.0),
        );
        let inside = removable_singularities(config, rep, omega_0)?
            .iter()
            .filter(|w| **w >= lo && **w <= hi)
            .count();
        meta.params
            .insert("removable_singularities_in_range".into(), inside as f64);
    }
    let spectrum = Spectrum::new(grid.to_vec(), values, meta)?;
    let area = spectrum.area();
    let mut spectrum = spectrum;
    spectrum.meta.params.insert("area".into(), area);
    Ok(spectrum)
}

/// Comparison curves for the pulse spectra, both with unit numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    /// `(Γ/2π) / (δ_k² + Γ²/4)`.
    BareLorentzian,
    /// `(Γ/2π) |β|²`.
    LorentzianWithLaser,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Reference::BareLorentzian => "lorentzian",
            Reference::LorentzianWithLaser => "lorentzian+laser",
        }
    }
}

pub fn reference_spectrum(
    config: &PulseConfig,
    rep: GaugeRepresentation,
    omega_0: f64,
    gamma: f64,
    grid: &[f64],
    reference: Reference,
) -> Result<Spectrum> {
    config.validate()?;
    require_positive("gamma", gamma)?;
    let values = grid
        .par_iter()
        .map(|&w| {
            require_positive("grid frequency", w)?;
            Ok(match reference {
                Reference::BareLorentzian => lorentzian(omega_0 - w, gamma),
                Reference::LorentzianWithLaser => {
                    gamma / (2.0 * PI)
                        * closed_form_amplitude(w, config, rep, omega_0, gamma)?
                            .braced()
                            .norm_sqr()
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut meta = pulse_meta(
        rep,
        config,
        omega_0,
        gamma,
        "reference curve with unit numerator",
    );
    meta.representation = reference.name().into();
    Spectrum::new(grid.to_vec(), values, meta)
}

/// One row of [`detuning_sensitivity_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub representation: String,
    pub delta_l: f64,
    /// `max |S_δl - S_0| / S_0` over the grid.
    pub max_relative_deviation: f64,
}

/// How much the laser-inclusive spectrum moves when the laser is detuned.
pub fn detuning_sensitivity_scan(
    config_base: &PulseConfig,
    reps: &[GaugeRepresentation],
    delta_l_list: &[f64],
    omega_0: f64,
    gamma: f64,
    grid: &[f64],
) -> Result<Vec<SensitivityRow>> {
    if reps.is_empty() || delta_l_list.is_empty() {
        return Err(Error::Config(
            "detuning scan needs at least one representation and one detuning".into(),
        ));
    }
    let mut rows = Vec::new();
    for &rep in reps {
        let base = PulseConfig {
            omega_l: omega_0,
            ..*config_base
        };
        let reference = pulse_spectrum(&base, rep, omega_0, gamma, grid, LaserTerm::Included)?;
        for &delta_l in delta_l_list {
            let config = PulseConfig {
                omega_l: omega_0 - delta_l,
                ..*config_base
            };
            let s = pulse_spectrum(&config, rep, omega_0, gamma, grid, LaserTerm::Included)?;
            let dev = s
                .values()
                .iter()
                .zip(reference.values())
                .map(|(a, b)| if *b > 0.0 { (a - b).abs() / b } else { 0.0 })
                .fold(0.0, f64::max);
            rows.push(SensitivityRow {
                representation: rep.name(),
                delta_l,
                max_relative_deviation: dev,
            });
        }
    }
    Ok(rows)
}
