//! Cross-representation invariance checks and oracle comparisons.
//!
//! Every check yields a residual and a tolerance. Some checks are expected to
//! fail: they record residuals that document where the invariance argument
//! needs a complete set of intermediate states.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atom::{build_oscillator, build_two_level, trk_sum, AtomModel};
use crate::error::Result;
use crate::fluorescence::{
    lamb_n_factor, lamb_n_factor_via_coupling, n_factor, n_factor_via_rate_route,
};
use crate::lineshape::{
    gamma_onshell, gamma_onshell_via, numerator, numerator_from_first_principles, total_shift,
    total_shift_density,
};
use crate::pulse::{
    closed_form_amplitude, closed_form_amplitude_resonant, excited_amplitude_during_pulse,
    ground_amplitude_during_pulse, integrate_dynamics, laser_term_resonant, pulse_spectrum,
    DynamicsOptions, LaserTerm, PulseConfig,
};
use crate::repr::GaugeRepresentation;
use crate::spectrum::{linspace, logspace};

/// Names every suite run must contain.
pub const REQUIRED_CHECKS: &[&str] = &[
    "gamma_invariance_oscillator",
    "gamma_invariance_two_level",
    "gamma_invariance_zero_dipole",
    "lamb_n_factor_coupling_route",
    "lamb_n_factor_onshell_unity",
    "n_factor_onshell_unity",
    "n_factor_rate_route",
    "numerator_first_principles",
    "numerator_onshell_unity",
    "pulse_ode_oracle",
    "pulse_pi_inversion",
    "pulse_resonant_reduction",
    "pulse_strong_drive_limit",
    "pulse_unitarity",
    "pulse_zero_rabi",
    "total_shift_invariance_oscillator_cutoff_100",
    "total_shift_invariance_oscillator_cutoff_1000",
    "total_shift_two_level",
    "total_shift_zero_coupling",
    "trk_sum_oscillator",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// The residual documents a known breakdown and is not required to pass.
    pub expected_fail: bool,
    /// The statement being tested.
    pub anchor: String,
}

impl Check {
    fn new(name: &str, description: &str, anchor: &str, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
            residual,
            tolerance,
            pass: residual <= tolerance,
            expected_fail: false,
            anchor: anchor.into(),
        }
    }

    fn expected_to_fail(mut self) -> Self {
        self.expected_fail = true;
        self
    }

    /// True if this check does not count against the suite.
    pub fn acceptable(&self) -> bool {
        self.pass || self.expected_fail
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub checks: Vec<Check>,
    pub environment: BTreeMap<String, f64>,
}

impl VerificationReport {
    /// All checks not marked expected-fail pass.
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::acceptable)
    }

    pub fn names(&self) -> Vec<&str> {
        self.checks.iter().map(|c| c.name.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Required checks absent from this report.
    pub fn missing_checks(&self) -> Vec<&'static str> {
        REQUIRED_CHECKS
            .iter()
            .copied()
            .filter(|n| self.get(n).is_none())
            .collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(
            serde_json::to_string_pretty(self).map_err(|e| crate::Error::Config(e.to_string()))?
                + "\n",
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| crate::Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    /// Fixed-width text table, one row per check.
    pub fn to_table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.name.len())
            .max()
            .unwrap_or(4)
            .max(5);
        let mut out = format!(
            "{:<width$}  {:>10}  {:>10}  status\n",
            "check", "residual", "tolerance"
        );
        for c in &self.checks {
            let status = match (c.pass, c.expected_fail) {
                (true, false) => "PASS",
                (false, false) => "FAIL",
                (false, true) => "expected-fail",
                (true, true) => "PASS (expected-fail)",
            };
            let _ = writeln!(
                out,
                "{:<width$}  {:>10.3e}  {:>10.3e}  {status}",
                c.name, c.residual, c.tolerance
            );
        }
        out
    }
}

/// Parameters of a suite run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub omega: f64,
    pub gamma: f64,
    pub rabi: f64,
    pub table_points: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            omega: 1.0,
            gamma: 0.1,
            rabi: 1.0,
            table_points: 1000,
        }
    }
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn relative_c(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}

fn all_reps() -> Vec<GaugeRepresentation> {
    let mut reps = GaugeRepresentation::NAMED.to_vec();
    reps.push(GaugeRepresentation::custom(0.3).expect("valid alpha"));
    reps
}

fn spread(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::MIN, f64::max);
    let min = values.iter().copied().fold(f64::MAX, f64::min);
    if max == 0.0 && min == 0.0 {
        0.0
    } else {
        (max - min) / max.abs().max(min.abs())
    }
}

/// Relative spread of the on-shell rate computed through each representation's coupling.
pub fn check_gamma_invariance(
    name: &str,
    model: &AtomModel,
    upper: &str,
    lower: &str,
) -> Result<Check> {
    let mut rates = vec![gamma_onshell(model, upper, lower)?];
    for rep in all_reps() {
        rates.push(gamma_onshell_via(model, upper, lower, rep)?);
    }
    Ok(Check::new(
        name,
        &format!("on-shell decay rate {upper} -> {lower} from every representation"),
        "on-shell golden-rule rate is representation independent",
        spread(&rates),
        1e-12,
    ))
}

fn shift_residual(model: &AtomModel, state: &str, cutoff: f64) -> Result<f64> {
    let c = total_shift(model, state, GaugeRepresentation::Coulomb, cutoff)?.value;
    let p = total_shift(model, state, GaugeRepresentation::Poincare, cutoff)?.value;
    let mut worst = relative(c, p);
    for w in logspace(1e-3 * cutoff.min(1.0), cutoff, 400) {
        let dc = total_shift_density(model, state, GaugeRepresentation::Coulomb, w)?;
        let dp = total_shift_density(model, state, GaugeRepresentation::Poincare, w)?;
        worst = worst.max(relative(dc, dp));
    }
    Ok(worst)
}

/// Coulomb vs Poincaré total shift, per mode frequency and integrated.
pub fn check_total_shift_invariance(cutoff_ratio: f64, omega: f64) -> Result<Check> {
    let model = build_oscillator(omega, 1.0, 6)?;
    Ok(Check::new(
        &format!(
            "total_shift_invariance_oscillator_cutoff_{}",
            cutoff_ratio.round() as u64
        ),
        &format!("oscillator level 1, cutoff {cutoff_ratio} ω"),
        "total shifts agree once the sum rule holds",
        shift_residual(&model, "1", cutoff_ratio * omega)?,
        1e-10,
    ))
}

fn check_two_level_shift(omega: f64) -> Result<Check> {
    let model = build_two_level(omega, 1.0)?;
    Ok(Check::new(
        "total_shift_two_level",
        "two-level atom, excited state; the sum rule is violated so the totals differ",
        "invariance needs complete sets of intermediate states",
        shift_residual(&model, "e", 1e3 * omega)?,
        1e-10,
    )
    .expected_to_fail())
}

fn check_zero_coupling(omega: f64) -> Result<Check> {
    let model = AtomModel::new(
        build_two_level(omega, 0.0)?.levels().to_vec(),
        1.0,
        0.0,
        crate::Motion::Isotropic,
    )?;
    let mut worst: f64 = 0.0;
    for rep in all_reps() {
        worst = worst.max(total_shift(&model, "e", rep, 1e3 * omega)?.value.abs());
    }
    Ok(Check::new(
        "total_shift_zero_coupling",
        "uncharged atom has no shift in any representation",
        "shift vanishes without coupling",
        worst,
        0.0,
    ))
}

/// Table entries against the first-principles route and on-shell unity.
pub fn check_table_consistency(options: &VerifyOptions) -> Result<Vec<Check>> {
    let w = options.omega;
    let grid = linspace(0.05 * w, 5.0 * w, options.table_points);
    let reps = all_reps();
    let mut first = 0.0f64;
    let mut rate = 0.0f64;
    let mut coupling = 0.0f64;
    let mut unity = [0.0f64; 3];
    for &rep in &reps {
        for &x in &grid {
            first = first.max(relative(
                numerator(rep, x, w)?,
                numerator_from_first_principles(rep, x, w)?,
            ));
            rate = rate.max(relative(
                n_factor(rep, x, w)?,
                n_factor_via_rate_route(rep, x, w)?,
            ));
            // microwave drive swept across the separation ω, cascade line far above it
            let wp = 1e2 * w;
            coupling = coupling.max(relative(
                lamb_n_factor(rep, x, w, wp)?,
                lamb_n_factor_via_coupling(rep, x, w, wp)?,
            ));
        }
        unity[0] = unity[0].max((numerator(rep, w, w)? - 1.0).abs());
        unity[1] = unity[1].max((n_factor(rep, w, w)? - 1.0).abs());
        unity[2] = unity[2].max((lamb_n_factor(rep, w, w, 1e3 * w)? - 1.0).abs());
    }
    Ok(vec![
        Check::new(
            "numerator_first_principles",
            "closed-form numerator vs mode density times coupling, ω_k in [0.05, 5] ω",
            "lineshape numerator table",
            first,
            1e-12,
        ),
        Check::new(
            "numerator_onshell_unity",
            "numerator at ω_k = ω",
            "lineshape numerator table",
            unity[0],
            1e-12,
        ),
        Check::new(
            "n_factor_rate_route",
            "fluorescence factor vs off-shell rate and coupling",
            "fluorescence factor table",
            rate,
            1e-12,
        ),
        Check::new(
            "n_factor_onshell_unity",
            "fluorescence factor at ω_0 = ω",
            "fluorescence factor table",
            unity[1],
            1e-12,
        ),
        Check::new(
            "lamb_n_factor_coupling_route",
            "cascade factor vs explicit microwave and emission couplings",
            "cascade factor table",
            coupling,
            1e-12,
        ),
        Check::new(
            "lamb_n_factor_onshell_unity",
            "cascade factor at ω_0 = ω",
            "cascade factor table",
            unity[2],
            1e-12,
        ),
    ])
}

fn check_trk(omega: f64) -> Result<Check> {
    let model = build_oscillator(omega, 1.0, 6)?;
    let mut worst: f64 = 0.0;
    for state in ["0", "1", "2", "3"] {
        worst = worst.max(relative(trk_sum(&model, state, [1.0, 0.0, 0.0])?, 0.5));
    }
    Ok(Check::new(
        "trk_sum_oscillator",
        "Σ_n ω_ns |x_ns|² = 1/2m for the low oscillator levels",
        "sum rule",
        worst,
        1e-12,
    ))
}

/// Pulse closed forms against each other and against direct integration.
pub fn check_ode_oracle(options: &VerifyOptions) -> Result<Vec<Check>> {
    let (w0, rabi, gamma) = (options.omega, options.rabi, options.gamma);
    let rep = GaugeRepresentation::Symmetric;
    let config = PulseConfig::resonant(rabi, w0);

    // modes over |δ_k| ≤ 5Ω with positive frequency
    let grid: Vec<f64> = linspace(-5.0 * rabi, 5.0 * rabi, 81)
        .into_iter()
        .map(|dk| w0 - dk)
        .filter(|w| *w > 0.0)
        .rev()
        .collect();
    let traj = integrate_dynamics(&config, rep, w0, gamma, &grid, &DynamicsOptions::default())?;
    let mut ode = 0.0f64;
    for ((w, _), beta) in traj.last.b_gk.iter().zip(traj.braced_factors(rep, w0)?) {
        ode = ode.max(relative_c(
            beta,
            closed_form_amplitude(*w, &config, rep, w0, gamma)?.braced(),
        ));
    }

    let mut unitarity = 0.0f64;
    let mut inversion = 0.0f64;
    for ((t, g), e) in traj.times.iter().zip(&traj.b_g0).zip(&traj.b_e0) {
        if *t <= 0.0 {
            unitarity = unitarity.max((g.norm_sqr() + e.norm_sqr() - 1.0).abs());
        }
        if *t == 0.0 && inversion == 0.0 {
            inversion = (e.norm() - 1.0).abs();
        }
    }
    inversion =
        inversion.max((excited_amplitude_during_pulse(0.0, &config, rep, w0)?.norm() - 1.0).abs());
    let detuned = PulseConfig::detuned(rabi, w0, 0.3 * rabi);
    for t in linspace(-detuned.duration(), 0.0, 101) {
        let e = excited_amplitude_during_pulse(t, &detuned, rep, w0)?;
        let g = ground_amplitude_during_pulse(t, &detuned, rep, w0)?;
        unitarity = unitarity.max((g.norm_sqr() + e.norm_sqr() - 1.0).abs());
    }

    let mut reduction = 0.0f64;
    let mut dks = linspace(-5.0 * rabi, 5.0 * rabi, 1000);
    dks.extend([-0.5 * rabi, 0.5 * rabi]);
    for dk in dks {
        let wk = w0 - dk;
        if wk <= 0.0 {
            continue;
        }
        let general = closed_form_amplitude(wk, &config, rep, w0, gamma)?.braced();
        let resonant = closed_form_amplitude_resonant(wk, rabi, rep, w0, gamma)?.braced();
        reduction = reduction.max(relative_c(general, resonant));
    }

    let grid_s = linspace(0.05 * w0, 3.0 * w0, 300);
    let none = PulseConfig::resonant(0.0, w0);
    let with = pulse_spectrum(&none, rep, w0, gamma, &grid_s, LaserTerm::Included)?;
    let without = pulse_spectrum(&none, rep, w0, gamma, &grid_s, LaserTerm::Excluded)?;
    let mut zero = with
        .values()
        .iter()
        .zip(without.values())
        .map(|(a, b)| relative(*a, *b))
        .fold(0.0, f64::max);
    let still = integrate_dynamics(
        &none,
        rep,
        w0,
        gamma,
        &grid[..3],
        &DynamicsOptions::default(),
    )?;
    if still.b_e0.iter().any(|b| b.norm() != 0.0) {
        zero = zero.max(1.0);
    }

    let mut strong = 0.0f64;
    for dk in [-2.0, -0.3, 0.0, 0.7, 3.0] {
        let big = 1e8 * rabi;
        let lor = 1.0 / Complex64::new(gamma / 2.0, dk * rabi);
        strong = strong.max(relative_c(lor + laser_term_resonant(dk * rabi, big), lor));
    }

    Ok(vec![
        Check::new(
            "pulse_ode_oracle",
            &format!("integrated mode amplitudes vs closed form, Ω = {rabi}, Γ = {gamma}, {} modes", grid.len()),
            "long-time emission amplitude after a π-pulse",
            ode,
            1e-6,
        ),
        Check::new("pulse_pi_inversion", "|b_e(0)| after a resonant π-pulse", "π-pulse inversion", inversion, 1e-9),
        Check::new(
            "pulse_unitarity",
            "|b_g|² + |b_e|² = 1 during the pulse, integrated and detuned closed form",
            "unitary evolution during the pulse",
            unitarity,
            1e-9,
        ),
        Check::new(
            "pulse_resonant_reduction",
            "general braced factor at zero laser detuning vs the resonant form, including δ_k = ±Ω/2",
            "resonant reduction of the braced factor",
            reduction,
            1e-12,
        ),
        Check::new(
            "pulse_zero_rabi",
            "Ω = 0 reproduces the laser-free spectrum and leaves the atom in its ground state",
            "laser-free limit",
            zero,
            0.0,
        ),
        Check::new(
            "pulse_strong_drive_limit",
            "laser term vanishes as Ω grows at fixed δ_k",
            "strong-drive limit",
            strong,
            1e-6,
        ),
    ])
}

/// Runs the whole suite. Checks run concurrently; the report is ordered by name.
pub fn run_all(options: &VerifyOptions) -> Result<VerificationReport> {
    type Job<'a> = Box<dyn Fn() -> Result<Vec<Check>> + Send + Sync + 'a>;
    let w = options.omega;
    let jobs: Vec<Job> = vec![
        Box::new(move || {
            Ok(vec![check_gamma_invariance(
                "gamma_invariance_two_level",
                &build_two_level(w, 1.0)?,
                "e",
                "g",
            )?])
        }),
        Box::new(move || {
            Ok(vec![check_gamma_invariance(
                "gamma_invariance_oscillator",
                &build_oscillator(w, 1.0, 6)?,
                "1",
                "0",
            )?])
        }),
        Box::new(move || {
            Ok(vec![check_gamma_invariance(
                "gamma_invariance_zero_dipole",
                &build_two_level(w, 0.0)?,
                "e",
                "g",
            )?])
        }),
        Box::new(move || Ok(vec![check_total_shift_invariance(1e2, w)?])),
        Box::new(move || Ok(vec![check_total_shift_invariance(1e3, w)?])),
        Box::new(move || Ok(vec![check_two_level_shift(w)?])),
        Box::new(move || Ok(vec![check_zero_coupling(w)?])),
        Box::new(move || Ok(vec![check_trk(w)?])),
        Box::new(move || check_table_consistency(options)),
        Box::new(move || check_ode_oracle(options)),
    ];
    let results: Vec<Result<Vec<Check>>> = jobs.par_iter().map(|job| job()).collect();
    let mut checks = Vec::new();
    for r in results {
        checks.extend(r?);
    }
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let environment = BTreeMap::from([
        ("omega".to_string(), options.omega),
        ("gamma".to_string(), options.gamma),
        ("rabi".to_string(), options.rabi),
        ("table_points".to_string(), options.table_points as f64),
        ("shift_cutoff_low".to_string(), 1e2),
        ("shift_cutoff_high".to_string(), 1e3),
        ("ode_rtol".to_string(), DynamicsOptions::default().rtol),
    ]);
    Ok(VerificationReport {
        version: env!("CARGO_PKG_VERSION").into(),
        checks,
        environment,
    })
}
