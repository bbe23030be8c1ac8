//! Spontaneous-emission lineshape: numerators, decay rates, level shifts and `S(omega_k)`.
//!
//! Mode sums are always taken in the continuum limit. After the polarization
//! and angular sums, `Σ_kλ |d·e|² f(ω_k) / L³` becomes
//! `|d|² / (3π²) ∫ ω² f(ω) dω`, so no quantization volume appears anywhere.
//!
//! For a transition `i -> n` with `ω_in = ω_i - ω_n` and emitted frequency
//! `ω'`, the squared single-mode matrix element (stripped of `1/L³` and of the
//! polarization factor) is written `K(ω')`; its gauge-specific forms are
//! collected in [`mode_coupling_sq`]. The spectral density of the channel is
//! `J(ω') = ω'² K(ω') / (3π²)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atom::{build_two_level, norm_sqr, AtomModel};
use crate::error::{require_positive, Error, Result};
use crate::quadrature::{principal_value, Estimate, DEFAULT_PANELS};
use crate::repr::GaugeRepresentation;
use crate::spectrum::{Spectrum, SpectrumMeta};
use crate::DEFAULT_CUTOFF_RATIO;

/// Frequency dependence of the lineshape numerator, equal to 1 on resonance.
pub fn numerator(rep: GaugeRepresentation, omega_k: f64, omega_eg: f64) -> Result<f64> {
    require_positive("mode frequency", omega_k)?;
    require_positive("transition frequency", omega_eg)?;
    let x = omega_k / omega_eg;
    Ok(match rep.canonical() {
        GaugeRepresentation::Symmetric => {
            4.0 * omega_k.powi(3) / (omega_eg * (omega_eg + omega_k).powi(2))
        }
        other => {
            let a = other.constant_alpha().expect("constant representation");
            let m = (1.0 - a) + a * x;
            x * m * m
        }
    })
}

/// Squared single-mode coupling `K(ω')` for the transition `i -> n` of `model`.
///
/// Coulomb uses the momentum element, Poincaré the dipole element, and the
/// symmetric representation its own rotating-only form, so the three routes
/// share no arithmetic. Channels in which the atom is promoted (`ω_i < ω_n`)
/// carry the counter-rotating weight, which vanishes in the symmetric case.
pub fn mode_coupling_sq(
    rep: GaugeRepresentation,
    model: &AtomModel,
    i: usize,
    n: usize,
    omega_mode: f64,
) -> f64 {
    let w_in = model.omega(i, n);
    match rep.canonical() {
        GaugeRepresentation::Coulomb => {
            let (e, m) = (model.charge(), model.mass());
            e * e * norm_sqr(&model.momentum(n, i)) / (m * m * 2.0 * omega_mode)
        }
        GaugeRepresentation::Poincare => omega_mode * norm_sqr(&model.dipole(n, i)) / 2.0,
        GaugeRepresentation::Symmetric => {
            if w_in <= 0.0 {
                0.0
            } else {
                let d2 = norm_sqr(&model.dipole(n, i));
                0.5 * w_in * d2 * 4.0 * w_in * omega_mode / (w_in + omega_mode).powi(2)
            }
        }
        GaugeRepresentation::CustomConstant(a) => {
            let a = a.value();
            let d2 = norm_sqr(&model.dipole(n, i));
            let c = (1.0 - a) * w_in + a * omega_mode;
            d2 * c * c / (2.0 * omega_mode)
        }
    }
}

/// Spectral density `J(ω') = ω'² K(ω') / (3π²)` of one channel.
pub fn spectral_density(
    rep: GaugeRepresentation,
    model: &AtomModel,
    i: usize,
    n: usize,
    omega_mode: f64,
) -> f64 {
    omega_mode * omega_mode * mode_coupling_sq(rep, model, i, n, omega_mode) / (3.0 * PI * PI)
}

/// `ω_k² K(ω_k)` normalized to its on-shell value, for a two-level atom.
///
/// This is the cross-check route for [`numerator`]: it is assembled from the
/// mode density and the gauge-specific matrix elements rather than from the
/// closed forms.
pub fn numerator_from_first_principles(
    rep: GaugeRepresentation,
    omega_k: f64,
    omega_eg: f64,
) -> Result<f64> {
    require_positive("mode frequency", omega_k)?;
    let model = build_two_level(omega_eg, 1.0)?;
    let weight = |w: f64| w * w * mode_coupling_sq(rep, &model, 1, 0, w);
    Ok(weight(omega_k) / weight(omega_eg))
}

fn transition(model: &AtomModel, upper: &str, lower: &str) -> Result<(usize, usize, f64)> {
    let u = model.level_index(upper)?;
    let l = model.level_index(lower)?;
    let w = model.omega(u, l);
    if !(w > 0.0) {
        return Err(Error::Domain(format!(
            "`{upper}` must lie above `{lower}`, got ω = {w}"
        )));
    }
    Ok((u, l, w))
}

/// Golden-rule decay rate `ω³ |d|² / (3π)`; the same for every representation.
pub fn gamma_onshell(model: &AtomModel, upper: &str, lower: &str) -> Result<f64> {
    let (u, l, w) = transition(model, upper, lower)?;
    Ok(w.powi(3) * norm_sqr(&model.dipole(u, l)) / (3.0 * PI))
}

/// The on-shell rate computed from the mode coupling of `rep`, `2π J(ω_ul)`.
pub fn gamma_onshell_via(
    model: &AtomModel,
    upper: &str,
    lower: &str,
    rep: GaugeRepresentation,
) -> Result<f64> {
    let (u, l, w) = transition(model, upper, lower)?;
    Ok(2.0 * PI * spectral_density(rep, model, u, l, w))
}

/// Off-shell rate `Γ(ω) = 2π Σ_n J_n(ω - ω_n)` for decay out of `state`.
///
/// Only channels with a positive emitted frequency contribute; below every
/// threshold the rate is zero.
pub fn gamma_offshell(
    omega: f64,
    model: &AtomModel,
    state: &str,
    rep: GaugeRepresentation,
) -> Result<f64> {
    let i = model.level_index(state)?;
    let mut total = 0.0;
    for n in 0..model.len() {
        if n == i {
            continue;
        }
        let emitted = omega - model.energy(n);
        if emitted > 0.0 {
            total += 2.0 * PI * spectral_density(rep, model, i, n, emitted);
        }
    }
    Ok(total)
}

fn check_cutoff(model: &AtomModel, i: usize, cutoff: f64) -> Result<()> {
    require_positive("cutoff", cutoff)?;
    let widest = (0..model.len())
        .map(|n| model.omega(i, n).abs())
        .fold(0.0, f64::max);
    if cutoff <= widest {
        return Err(Error::Config(format!(
            "cutoff {cutoff} must exceed every transition frequency out of the state (largest {widest})"
        )));
    }
    Ok(())
}

fn coupled(model: &AtomModel, i: usize, n: usize) -> bool {
    n != i && norm_sqr(&model.dipole(n, i)) > 0.0
}

fn accumulate(total: &mut Estimate, part: Estimate) {
    total.value += part.value;
    total.error += part.error;
}

/// Off-shell level shift `P Σ_n ∫_0^cutoff J_n(ω') / (ω - ω_n - ω') dω'`.
pub fn delta_offshell(
    omega: f64,
    model: &AtomModel,
    state: &str,
    rep: GaugeRepresentation,
    cutoff: f64,
) -> Result<Estimate> {
    let i = model.level_index(state)?;
    check_cutoff(model, i, cutoff)?;
    let mut total = Estimate {
        value: 0.0,
        error: 0.0,
    };
    for n in (0..model.len()).filter(|&n| coupled(model, i, n)) {
        let pole = omega - model.energy(n);
        let part = principal_value(
            |w| spectral_density(rep, model, i, n, w),
            pole,
            0.0,
            cutoff,
            DEFAULT_PANELS,
        )?;
        accumulate(&mut total, part);
    }
    Ok(total)
}

// Splits the per-mode total-shift density of `state` into pole terms
// `f_n(ω) / (ω_in - ω)` and a regular remainder.
struct ShiftTerms<'a> {
    model: &'a AtomModel,
    i: usize,
    rep: GaugeRepresentation,
}

impl ShiftTerms<'_> {
    fn new(model: &AtomModel, i: usize, rep: GaugeRepresentation) -> ShiftTerms<'_> {
        // the symmetric total is delegated to the Coulomb form: on shell the
        // two representations are related by a unitary transformation
        let rep = match rep.canonical() {
            GaugeRepresentation::Symmetric => GaugeRepresentation::Coulomb,
            other => other,
        };
        ShiftTerms { model, i, rep }
    }

    fn pole(&self, n: usize) -> f64 {
        self.model.omega(self.i, n)
    }

    fn numerator(&self, n: usize, w: f64) -> f64 {
        let model = self.model;
        let w_in = model.omega(self.i, n);
        match self.rep {
            GaugeRepresentation::Coulomb => {
                let (e, m) = (model.charge(), model.mass());
                e * e * norm_sqr(&model.momentum(n, self.i)) * w / (6.0 * PI * PI * m * m)
            }
            GaugeRepresentation::Poincare => {
                norm_sqr(&model.dipole(n, self.i)) * w_in * w * w / (6.0 * PI * PI)
            }
            GaugeRepresentation::CustomConstant(a) => {
                let a = a.value();
                let c = (1.0 - a) * w_in + a * w;
                w * norm_sqr(&model.dipole(n, self.i)) * c * c / (6.0 * PI * PI)
            }
            GaugeRepresentation::Symmetric => unreachable!("delegated to Coulomb"),
        }
    }

    fn contact_coefficients(&self) -> (f64, f64) {
        // regular part = c1 ω + c2 ω²
        let model = self.model;
        let a2 = || {
            (0..model.len())
                .map(|n| norm_sqr(&model.dipole(n, self.i)))
                .sum::<f64>()
        };
        let a_sq = model.charge().powi(2) * model.motion().projector_trace()
            / (12.0 * PI * PI * model.mass());
        match self.rep {
            GaugeRepresentation::Coulomb => (a_sq, 0.0),
            GaugeRepresentation::Poincare => (0.0, 0.0),
            GaugeRepresentation::CustomConstant(a) => {
                let a = a.value();
                ((1.0 - a).powi(2) * a_sq, a * a * a2() / (6.0 * PI * PI))
            }
            GaugeRepresentation::Symmetric => unreachable!("delegated to Coulomb"),
        }
    }

    fn density(&self, w: f64) -> f64 {
        let (c1, c2) = self.contact_coefficients();
        let poles: f64 = (0..self.model.len())
            .filter(|&n| coupled(self.model, self.i, n))
            .map(|n| self.numerator(n, w) / (self.pole(n) - w))
            .sum();
        poles + c1 * w + c2 * w * w
    }
}

/// Integrand of the total on-shell shift per unit mode frequency.
///
/// Includes the diagonal first-order term (`e² A² / 2m` in the Coulomb gauge,
/// the polarization self-energy in the Poincaré gauge). Poles sit at the
/// frequencies of the downward transitions out of `state`.
pub fn total_shift_density(
    model: &AtomModel,
    state: &str,
    rep: GaugeRepresentation,
    omega_mode: f64,
) -> Result<f64> {
    require_positive("mode frequency", omega_mode)?;
    let i = model.level_index(state)?;
    Ok(ShiftTerms::new(model, i, rep).density(omega_mode))
}

/// Total second-order on-shell shift of `state`, integrated up to `cutoff`.
pub fn total_shift(
    model: &AtomModel,
    state: &str,
    rep: GaugeRepresentation,
    cutoff: f64,
) -> Result<Estimate> {
    let i = model.level_index(state)?;
    check_cutoff(model, i, cutoff)?;
    let terms = ShiftTerms::new(model, i, rep);
    let (c1, c2) = terms.contact_coefficients();
    let mut total = Estimate {
        value: c1 * cutoff * cutoff / 2.0 + c2 * cutoff.powi(3) / 3.0,
        error: 0.0,
    };
    for n in (0..model.len()).filter(|&n| coupled(model, i, n)) {
        let part = principal_value(
            |w| terms.numerator(n, w),
            terms.pole(n),
            0.0,
            cutoff,
            DEFAULT_PANELS,
        )?;
        accumulate(&mut total, part);
    }
    Ok(total)
}

/// Mass-renormalized level shift with its cutoff dependence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambShift {
    pub value: f64,
    /// Quadrature error estimate from panel doubling.
    pub error: f64,
    pub cutoff: f64,
    /// Asymptotic `d value / d ln(cutoff)`.
    pub log_slope: f64,
}

/// `Σ_n (e² |p_ne|² ω_ne / (6π² m²)) P ∫_0^cutoff dω / (ω_ne + ω)`.
pub fn lamb_shift(model: &AtomModel, state: &str, cutoff: f64) -> Result<LambShift> {
    let i = model.level_index(state)?;
    check_cutoff(model, i, cutoff)?;
    let (e, m) = (model.charge(), model.mass());
    let mut value = 0.0;
    let mut error = 0.0;
    let mut log_slope = 0.0;
    for n in (0..model.len()).filter(|&n| coupled(model, i, n)) {
        let w_ne = model.omega(n, i);
        let coefficient = e * e * norm_sqr(&model.momentum(n, i)) * w_ne / (6.0 * PI * PI * m * m);
        // 1 / (ω_ne + ω) = -1 / (-ω_ne - ω)
        let part = principal_value(|_| -coefficient, -w_ne, 0.0, cutoff, DEFAULT_PANELS)?;
        value += part.value;
        error += part.error;
        log_slope += coefficient;
    }
    Ok(LambShift {
        value,
        error,
        cutoff,
        log_slope,
    })
}

/// `(Γ/2π) / (detuning² + Γ²/4)`, unit area over the whole line.
pub fn lorentzian(detuning: f64, gamma: f64) -> f64 {
    gamma / (2.0 * PI) / (detuning * detuning + gamma * gamma / 4.0)
}

/// Which width enters the resonance denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Denominator {
    /// Constant on-shell `Γ`.
    #[default]
    OnShell,
    /// Experimental: `Γ(ω_k)` of the equivalent two-level atom. The shift stays constant.
    OffShellWidth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineshapeParams {
    pub rep: GaugeRepresentation,
    pub omega_eg: f64,
    pub gamma: f64,
    /// Set to 0 to suppress the shift.
    pub lamb_shift: f64,
    /// Only echoed into metadata.
    pub cutoff: f64,
    pub denominator: Denominator,
}

impl LineshapeParams {
    pub fn new(rep: GaugeRepresentation, omega_eg: f64, gamma: f64) -> Self {
        Self {
            rep,
            omega_eg,
            gamma,
            lamb_shift: 0.0,
            cutoff: DEFAULT_CUTOFF_RATIO * omega_eg,
            denominator: Denominator::OnShell,
        }
    }

    pub fn validate(&self) -> Result<()> {
        require_positive("omega_eg", self.omega_eg)?;
        require_positive("gamma", self.gamma)?;
        require_positive("cutoff", self.cutoff)?;
        if !self.lamb_shift.is_finite() {
            return Err(Error::Domain("lamb_shift must be finite".into()));
        }
        Ok(())
    }

    /// Single-point value of the lineshape.
    pub fn evaluate(&self, omega_k: f64) -> Result<f64> {
        let n = numerator(self.rep, omega_k, self.omega_eg)?;
        let detuning = omega_k - self.omega_eg - self.lamb_shift;
        let width = match self.denominator {
            Denominator::OnShell => self.gamma,
            Denominator::OffShellWidth => {
                let model = crate::atom::TwoLevelAtom::with_decay_rate(self.omega_eg, self.gamma)?
                    .to_model();
                gamma_offshell(omega_k, &model, "e", self.rep)?
            }
        };
        Ok(n * lorentzian(detuning, width))
    }
}

/// Samples `S(ω_k) = numerator · (Γ/2π) / ((ω_k - ω_eg - Δ)² + Γ²/4)` on `grid`.
///
/// The result is not normalized; its area is recorded in `meta.params["area"]`.
pub fn lineshape_s(params: &LineshapeParams, grid: &[f64]) -> Result<Spectrum> {
    params.validate()?;
    for &w in grid {
        require_positive("grid frequency", w)?;
    }
    let values = grid
        .par_iter()
        .map(|&w| params.evaluate(w))
        .collect::<Result<Vec<_>>>()?;
    let mut meta = SpectrumMeta::new(
        params.rep.name(),
        params.gamma,
        params.omega_eg,
        params.lamb_shift,
        params.cutoff,
    );
    meta.note = match params.denominator {
        Denominator::OnShell => "unnormalized density; constant on-shell width".into(),
        Denominator::OffShellWidth => {
            "unnormalized density; EXPERIMENTAL frequency-dependent width".into()
        }
    };
    let spectrum = Spectrum::new(grid.to_vec(), values, meta)?;
    let area = spectrum.area();
    let mut spectrum = spectrum;
    spectrum.meta.params.insert("area".into(), area);
    Ok(spectrum)
}
