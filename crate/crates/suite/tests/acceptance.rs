//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::f64::consts::PI;
use std::fs;

use gauge_lineshape::fluorescence::{lamb_n_factor, n_factor};
use gauge_lineshape::lineshape::{
    gamma_onshell_via, lineshape_s, numerator, numerator_from_first_principles, LineshapeParams,
};
use gauge_lineshape::pulse::{
    laser_term, laser_term_resonant, pulse_spectrum, LaserTerm, PulseConfig,
};
use gauge_lineshape::spectrum::linspace;
use gauge_lineshape::verify::{
    check_ode_oracle, check_total_shift_invariance, run_all, VerificationReport, VerifyOptions,
    REQUIRED_CHECKS,
};
use gauge_lineshape::{
    build_oscillator, build_two_level, AtomModel, GaugeRepresentation, GridSpec,
};
use lineshape_cli::scenario::PRESETS;

use GaugeRepresentation::{Coulomb, Poincare, Symmetric};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn four_reps() -> [GaugeRepresentation; 4] {
    [
        Coulomb,
        Poincare,
        Symmetric,
        GaugeRepresentation::custom(0.3).unwrap(),
    ]
}

fn onshell_unity() -> Outcome {
    let mut worst = 0.0f64;
    for w in [0.2, 1.0, 7.5] {
        for rep in four_reps() {
            worst = worst.max((numerator(rep, w, w).unwrap() - 1.0).abs());
            worst = worst.max((n_factor(rep, w, w).unwrap() - 1.0).abs());
            worst = worst.max((lamb_n_factor(rep, w, w, 1e3 * w).unwrap() - 1.0).abs());
        }
    }
    outcome(
        worst <= 1e-12,
        format!("worst |factor - 1| = {worst:.3e} (tol 1e-12)"),
    )
}

fn table_consistency() -> Outcome {
    let weg = 1.0;
    let grid = GridSpec::linear(0.05 * weg, 5.0 * weg, 1000)
        .values()
        .unwrap();
    let mut worst = 0.0f64;
    for &w in &grid {
        // closed forms as tabulated
        let table = [
            (Coulomb, w / weg),
            (Poincare, (w / weg).powi(3)),
            (Symmetric, 4.0 * w.powi(3) / (weg * (w + weg).powi(2))),
        ];
        for (rep, closed) in table {
            let first = numerator_from_first_principles(rep, w, weg).unwrap();
            worst = worst.max(rel(first, closed));
        }
    }
    outcome(
        worst <= 1e-12,
        format!("worst relative deviation over 1000 points = {worst:.3e} (tol 1e-12)"),
    )
}

fn lineshape_figure() -> Outcome {
    let gamma = 0.1;
    let spec = GridSpec::linear(0.01, 3.0, 300);
    let grid = spec.values().unwrap();
    let step = (spec.max - spec.min) / (spec.points - 1) as f64;
    let expected_peak = 2.0 / (PI * gamma);
    let mut notes = Vec::new();
    let mut pass = true;
    for rep in GaugeRepresentation::NAMED {
        let s = lineshape_s(&LineshapeParams::new(rep, 1.0, gamma), &grid).unwrap();
        let (w, v) = s.peak();
        let ok = (w - 1.0).abs() <= step && rel(v, expected_peak) <= 1e-3;
        pass &= ok;
        notes.push(format!("{} peak {v:.6} at {w:.4}", rep.name()));
    }
    let mut interpolation_ok = true;
    for &w in &grid {
        if (w - 1.0).abs() < 0.5 * step {
            continue;
        }
        let c = numerator(Coulomb, w, 1.0).unwrap();
        let p = numerator(Poincare, w, 1.0).unwrap();
        let s = numerator(Symmetric, w, 1.0).unwrap();
        interpolation_ok &= c.min(p) < s && s < c.max(p);
    }
    pass &= interpolation_ok;
    let at = |rep| LineshapeParams::new(rep, 1.0, gamma).evaluate(2.0).unwrap();
    let ratio = at(Poincare) / at(Coulomb);
    pass &= (ratio - 4.0).abs() <= 1e-12;
    outcome(
        pass,
        format!(
            "(a) {} vs 2/(πΓ) = {expected_peak:.6}; (b) interpolation {}; (c) S_P/S_C at 2ω_eg = {ratio:.15}",
            notes.join(", "),
            if interpolation_ok { "holds" } else { "violated" }
        ),
    )
}

fn spread(model: &AtomModel, upper: &str, lower: &str) -> f64 {
    let rates: Vec<f64> = four_reps()
        .iter()
        .map(|&r| gamma_onshell_via(model, upper, lower, r).unwrap())
        .collect();
    let max = rates.iter().cloned().fold(f64::MIN, f64::max);
    let min = rates.iter().cloned().fold(f64::MAX, f64::min);
    (max - min) / max
}

fn gamma_invariance() -> Outcome {
    let two = spread(&build_two_level(1.0, 0.7).unwrap(), "e", "g");
    let osc = spread(&build_oscillator(1.0, 1.0, 6).unwrap(), "1", "0");
    let worst = two.max(osc);
    outcome(
        worst <= 1e-12,
        format!("relative spread two-level {two:.3e}, oscillator {osc:.3e} (tol 1e-12)"),
    )
}

fn shift_invariance() -> Outcome {
    let c2 = check_total_shift_invariance(1e2, 1.0).unwrap();
    let c3 = check_total_shift_invariance(1e3, 1.0).unwrap();
    let report = run_all(&VerifyOptions::default()).unwrap();
    let two = report.get("total_shift_two_level").unwrap();
    let pass =
        c2.residual <= 1e-10 && c3.residual <= 1e-10 && two.expected_fail && two.residual > 0.0;
    outcome(
        pass,
        format!(
            "oscillator Coulomb vs Poincaré cutoff 1e2: {:.3e}, 1e3: {:.3e} (tol 1e-10); two-level expected-fail residual {:.3e}",
            c2.residual, c3.residual, two.residual
        ),
    )
}

fn pulse_dynamics() -> Outcome {
    let rabi = 1.0;
    let mut dks = linspace(-5.0 * rabi, 5.0 * rabi, 1000);
    dks.extend([-0.5 * rabi, 0.5 * rabi]);
    let reduction = dks
        .iter()
        .map(|&dk| {
            let a = laser_term(dk, 0.0, rabi, 1.0);
            let b = laser_term_resonant(dk, rabi);
            (a - b).norm() / b.norm()
        })
        .fold(0.0, f64::max);
    // narrow line and weak drive keep every mode in |δ_k| ≤ 5Ω at positive frequency
    let checks = check_ode_oracle(&VerifyOptions {
        omega: 1.0,
        gamma: 0.01,
        rabi: 0.1,
        table_points: 1000,
    })
    .unwrap();
    let get = |n: &str| checks.iter().find(|c| c.name == n).unwrap().residual;
    let (ode, inversion, unitarity) = (
        get("pulse_ode_oracle"),
        get("pulse_pi_inversion"),
        get("pulse_unitarity"),
    );
    let pass = reduction <= 1e-12 && ode <= 1e-6 && inversion <= 1e-9 && unitarity <= 1e-9;
    outcome(
        pass,
        format!(
            "(a) reduction {reduction:.3e} (1e-12); (b) ODE vs closed form {ode:.3e} (1e-6); (c) |b_e(0)| - 1 = {inversion:.3e} (1e-9); (d) unitarity {unitarity:.3e} (1e-9)"
        ),
    )
}

fn pulse_figure() -> Vec<(String, Outcome)> {
    let w0 = 1.0;
    let rabi = w0;
    let config = PulseConfig::resonant(rabi, w0);
    // |δ_k| ≤ 2Ω restricted to positive mode frequencies, with the line centre on the grid
    let mut grid = linspace(1e-3, w0 + 2.0 * rabi, 4001);
    grid.push(w0);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    [(0.1, "ω_0/10"), (0.01, "ω_0/100")]
        .into_iter()
        .map(|(gamma, label)| {
            let s = pulse_spectrum(&config, Symmetric, w0, gamma, &grid, LaserTerm::Included).unwrap();
            let bare = |w: f64| {
                let dk = w0 - w;
                gamma / (2.0 * PI) / (dk * dk + gamma * gamma / 4.0)
            };
            let mut max_dev = 0.0f64;
            let mut at_centre = f64::NAN;
            for (&w, &v) in s.grid().iter().zip(s.values()) {
                let d = (v - bare(w)).abs() / bare(w);
                max_dev = max_dev.max(d);
                if w == w0 {
                    at_centre = d;
                }
            }
            let pass = max_dev > 0.1 && at_centre <= 0.05;
            (
                format!("Γ = {label}"),
                outcome(
                    pass,
                    format!("max deviation from bare Lorentzian {max_dev:.3} (> 0.10), at δ_k = 0 {at_centre:.4} (≤ 0.05)"),
                ),
            )
        })
        .collect()
}

/// Same entry point and exit code as the `lineshape` binary.
fn lineshape(args: &[&str]) -> i32 {
    lineshape_cli::app::main_with_args(std::iter::once("lineshape").chain(args.iter().copied()))
}

fn determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut compared = 0;
    let mut mismatched = Vec::new();
    for (name, _) in PRESETS {
        for dir in [a.path(), b.path()] {
            let code = lineshape(&[
                "-q",
                "--out-dir",
                dir.to_str().unwrap(),
                "run",
                "--preset",
                name,
            ]);
            if code != 0 {
                return outcome(false, format!("preset {name} exited with {code}"));
            }
        }
    }
    for entry in fs::read_dir(a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if !name.to_string_lossy().ends_with(".csv") {
            continue;
        }
        compared += 1;
        if fs::read(a.path().join(&name)).unwrap() != fs::read(b.path().join(&name)).unwrap() {
            mismatched.push(name.to_string_lossy().into_owned());
        }
    }
    outcome(
        mismatched.is_empty() && compared > 0,
        format!(
            "{} presets, {compared} CSV files compared, {} differ",
            PRESETS.len(),
            mismatched.len()
        ),
    )
}

fn verification_suite() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let code = lineshape(&["-q", "--out-dir", dir.path().to_str().unwrap(), "verify"]);
    let report =
        VerificationReport::from_json(&fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    let complete = report.missing_checks().is_empty();
    // dropping any one check must be caught by the inventory
    let mut inventory_catches_all = true;
    for name in REQUIRED_CHECKS {
        let mut reduced = report.clone();
        reduced.checks.retain(|c| c.name != *name);
        inventory_catches_all &= reduced.missing_checks() == vec![*name];
    }
    let pass = code == 0 && report.all_passed() && complete && inventory_catches_all;
    outcome(
        pass,
        format!(
            "exit code {code}, {} checks, all acceptable: {}, inventory detects each removal: {inventory_catches_all}",
            report.checks.len(),
            report.all_passed()
        ),
    )
}

fn main() {
    let mut results: Vec<(String, Outcome)> = vec![
        ("1 on-shell unity".into(), onshell_unity()),
        ("2 table consistency".into(), table_consistency()),
        ("3 lineshape figure".into(), lineshape_figure()),
        ("4 Γ invariance".into(), gamma_invariance()),
        ("5 shift invariance".into(), shift_invariance()),
        ("6 pulse dynamics".into(), pulse_dynamics()),
    ];
    for (label, o) in pulse_figure() {
        results.push((format!("7 pulse figure, {label}"), o));
    }
    results.push(("8 determinism".into(), determinism()));
    results.push(("9 verification suite".into(), verification_suite()));

    let mut failed = 0;
    for (name, o) in &results {
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
