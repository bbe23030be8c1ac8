//! Library results against independently derived closed forms.

use std::f64::consts::PI;

use approx::assert_relative_eq;
use gauge_lineshape::fluorescence::{
    damped_rate_general, fluorescence_rate, lamb_n_factor, n_factor, IncidentSpectrum,
    SharpLineScenario,
};
use gauge_lineshape::lineshape::{
    gamma_offshell, gamma_onshell, lamb_shift, lineshape_s, lorentzian, numerator, total_shift,
    LineshapeParams,
};
use gauge_lineshape::ode::rk4_fixed;
use gauge_lineshape::pulse::{
    closed_form_amplitude, excited_amplitude_during_pulse, laser_coupling, DetuningSet, PulseConfig,
};
use gauge_lineshape::{build_oscillator, build_two_level, GaugeRepresentation, GridSpec};
use num_complex::Complex64;

use GaugeRepresentation::{Coulomb, Poincare, Symmetric};

fn sweep() -> Vec<f64> {
    GridSpec::linear(0.05, 5.0, 97).values().unwrap()
}

#[test]
fn numerator_table_as_printed() {
    for w in sweep() {
        assert_relative_eq!(numerator(Coulomb, w, 1.0).unwrap(), w, max_relative = 1e-14);
        assert_relative_eq!(
            numerator(Poincare, w, 1.0).unwrap(),
            w * w * w,
            max_relative = 1e-14
        );
        let sym = 4.0 * w.powi(3) / ((1.0 + w) * (1.0 + w));
        assert_relative_eq!(
            numerator(Symmetric, w, 1.0).unwrap(),
            sym,
            max_relative = 1e-14
        );
    }
}

#[test]
fn fluorescence_table_as_printed() {
    let weg = 1.3;
    for w in sweep() {
        assert_relative_eq!(
            n_factor(Coulomb, w, weg).unwrap(),
            weg / w,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            n_factor(Poincare, w, weg).unwrap(),
            (w / weg).powi(3),
            max_relative = 1e-14
        );
        let sym = 16.0 * weg * w.powi(3) / (weg + w).powi(4);
        assert_relative_eq!(
            n_factor(Symmetric, w, weg).unwrap(),
            sym,
            max_relative = 1e-14
        );
    }
}

#[test]
fn cascade_table_as_printed() {
    let (w, wp) = (0.8, 40.0);
    for w0 in sweep() {
        let k = w + wp - w0;
        let c = k / wp * w * w / (w0 * w0);
        let p = (k / wp).powi(3);
        let s = 4.0 * k.powi(3) / (wp * (w + 2.0 * wp - w0).powi(2)) * 4.0 * w * w
            / ((w + w0) * (w + w0));
        assert_relative_eq!(
            lamb_n_factor(Coulomb, w0, w, wp).unwrap(),
            c,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lamb_n_factor(Poincare, w0, w, wp).unwrap(),
            p,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            lamb_n_factor(Symmetric, w0, w, wp).unwrap(),
            s,
            max_relative = 1e-14
        );
    }
}

#[test]
fn lineshape_ratio_and_peak() {
    let c = LineshapeParams::new(Coulomb, 1.0, 0.1)
        .evaluate(2.0)
        .unwrap();
    let p = LineshapeParams::new(Poincare, 1.0, 0.1)
        .evaluate(2.0)
        .unwrap();
    let s = LineshapeParams::new(Symmetric, 1.0, 0.1)
        .evaluate(2.0)
        .unwrap();
    assert_relative_eq!(p / c, 4.0, max_relative = 1e-14);
    assert_relative_eq!(s / c, 16.0 / 9.0, max_relative = 1e-14);
    for rep in GaugeRepresentation::NAMED {
        let peak = LineshapeParams::new(rep, 1.0, 0.1).evaluate(1.0).unwrap();
        assert_relative_eq!(peak, 2.0 / (PI * 0.1), max_relative = 1e-14);
    }
}

#[test]
fn lorentzian_has_unit_area() {
    let grid = GridSpec::linear(-2000.0, 2000.0, 400_001).values().unwrap();
    let h = grid[1] - grid[0];
    let area: f64 = grid.iter().map(|d| lorentzian(*d, 0.1) * h).sum();
    // tails beyond ±2000 carry Γ / (π · 2000)
    assert_relative_eq!(area, 1.0 - 0.1 / (PI * 2000.0), max_relative = 1e-6);
}

#[test]
fn coulomb_area_exceeds_poincare_wings() {
    let grid = GridSpec::linear(0.01, 3.0, 3000).values().unwrap();
    let area = |rep| {
        lineshape_s(&LineshapeParams::new(rep, 1.0, 0.1), &grid)
            .unwrap()
            .meta
            .params["area"]
    };
    // numerators above 1 in the blue wing weigh the Poincaré curve most
    assert!(area(Poincare) > area(Symmetric));
    assert!(area(Symmetric) > area(Coulomb));
}

#[test]
fn offshell_rates_follow_the_numerators() {
    let model = build_two_level(1.0, 0.7).unwrap();
    let g = gamma_onshell(&model, "e", "g").unwrap();
    assert_relative_eq!(g, 0.49 / (3.0 * PI), max_relative = 1e-15);
    for w in [0.2, 0.9, 1.0, 2.5] {
        assert_relative_eq!(
            gamma_offshell(w, &model, "e", Coulomb).unwrap(),
            g * w,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            gamma_offshell(w, &model, "e", Poincare).unwrap(),
            g * w.powi(3),
            max_relative = 1e-13
        );
    }
    assert_eq!(gamma_offshell(-0.5, &model, "e", Poincare).unwrap(), 0.0);
}

#[test]
fn lamb_shift_is_a_logarithm() {
    let model = build_two_level(1.0, 1.0).unwrap();
    let cutoff = 1e3;
    let c = 1.0 / (6.0 * PI * PI);
    // ground: one upward channel, no pole
    let g = lamb_shift(&model, "g", cutoff).unwrap();
    assert_relative_eq!(g.value, c * (1.0 + cutoff).ln(), max_relative = 1e-10);
    assert_relative_eq!(g.log_slope, c, max_relative = 1e-14);
    // excited: the pole at ω = 1 is taken as a principal value
    let e = lamb_shift(&model, "e", cutoff).unwrap();
    assert_relative_eq!(e.value, -c * (cutoff - 1.0).ln(), max_relative = 1e-10);
}

#[test]
fn poincare_total_shift_closed_form() {
    let model = build_two_level(1.0, 1.0).unwrap();
    for cutoff in [10.0f64, 1e2, 1e3] {
        // P ∫_0^Λ ω² / (1 - ω) dω
        let exact =
            (-cutoff * cutoff / 2.0 - cutoff + (1.0 / (cutoff - 1.0)).ln()) / (6.0 * PI * PI);
        let got = total_shift(&model, "e", Poincare, cutoff).unwrap();
        assert_relative_eq!(got.value, exact, max_relative = 1e-11);
    }
}

#[test]
fn coulomb_total_shift_closed_form() {
    let model = build_two_level(1.0, 1.0).unwrap();
    let trace = model.motion().projector_trace();
    for cutoff in [10.0f64, 1e3] {
        let pole = (-cutoff + (1.0 / (cutoff - 1.0)).ln()) / (6.0 * PI * PI);
        let contact = trace / (12.0 * PI * PI) * cutoff * cutoff / 2.0;
        let got = total_shift(&model, "e", Coulomb, cutoff).unwrap();
        assert_relative_eq!(got.value, pole + contact, max_relative = 1e-11);
    }
}

#[test]
fn oscillator_ground_shift_agrees_between_gauges() {
    let osc = build_oscillator(1.0, 2.0, 8).unwrap();
    let c = total_shift(&osc, "0", Coulomb, 1e3).unwrap().value;
    let p = total_shift(&osc, "0", Poincare, 1e3).unwrap().value;
    assert_relative_eq!(c, p, max_relative = 1e-10);
}

#[test]
fn sharp_incident_line_reduces_to_fluorescence_rate() {
    let model = build_two_level(1.0, 0.4).unwrap();
    let gamma = gamma_onshell(&model, "e", "g").unwrap();
    for rep in [
        Coulomb,
        Poincare,
        Symmetric,
        GaugeRepresentation::custom(0.3).unwrap(),
    ] {
        for w0 in [0.9, 1.0, 1.05] {
            let scenario = SharpLineScenario {
                intensity: 2.0,
                omega_0: w0,
                omega_eg: 1.0,
                gamma,
                dipole_proj: 0.4,
                rep,
            };
            let general = damped_rate_general(
                &model,
                rep,
                "g",
                &IncidentSpectrum::sharp(w0, 2.0, [0.0, 0.0, 1.0]),
            )
            .unwrap();
            assert_relative_eq!(
                general,
                fluorescence_rate(&scenario).unwrap(),
                max_relative = 1e-12
            );
        }
    }
}

// ∫_{-π/Ω}^0 e^{-iδ_k t} b_e(t) dt by composite Simpson
fn laser_integral(config: &PulseConfig, omega_0: f64, delta_k: f64) -> Complex64 {
    let n = 20_000;
    let a = -config.duration();
    let h = -a / n as f64;
    let f = |t: f64| {
        Complex64::from_polar(1.0, -delta_k * t)
            * excited_amplitude_during_pulse(t, config, Symmetric, omega_0).unwrap()
    };
    let mut sum = f(a) + f(0.0);
    for j in 1..n {
        sum += f(a + h * j as f64) * if j % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}

#[test]
fn laser_term_is_the_pulse_window_integral() {
    for (rabi, delta_l) in [(1.0, 0.0), (1.0, 0.35), (0.3, -0.1), (2.0, 0.6)] {
        let config = PulseConfig::detuned(rabi, 1.0, delta_l);
        for dk in [-2.0, -0.5, 0.0, 0.2, 0.5, 1.7] {
            let dk = dk * rabi;
            if dk >= 1.0 {
                continue;
            }
            let amp = closed_form_amplitude(1.0 - dk, &config, Symmetric, 1.0, 0.1).unwrap();
            let direct = laser_integral(&config, 1.0, dk);
            assert!(
                (amp.laser - direct).norm() < 1e-10 * direct.norm().max(1.0),
                "{rabi} {delta_l} {dk}"
            );
        }
    }
}

#[test]
fn laser_term_singular_points_agree_with_integral() {
    let config = PulseConfig::detuned(1.0, 1.0, 0.4);
    let mu = DetuningSet::new(&config, Symmetric, 1.0, 1.0).unwrap().mu;
    for y in [mu, -mu] {
        let dk = (y + 0.4) / 2.0;
        let direct = laser_integral(&config, 1.0, dk);
        let closed = closed_form_amplitude(1.0 - dk, &config, Symmetric, 1.0, 0.1)
            .unwrap()
            .laser;
        assert!((closed - direct).norm() < 1e-10 * direct.norm(), "{y}");
    }
}

#[test]
fn fixed_step_cross_check_converges_at_fourth_order() {
    let (rabi, delta_l) = (1.0, 0.3);
    let config = PulseConfig::detuned(rabi, 1.0, delta_l);
    let u = laser_coupling(&config, Symmetric, 1.0).unwrap().u_minus;
    let rhs = |t: f64, y: &[Complex64], dy: &mut [Complex64]| {
        let drive = Complex64::from_polar(u, -delta_l * t);
        dy[0] = -rabi / 2.0 * drive * y[1];
        dy[1] = rabi / 2.0 * drive.conj() * y[0];
    };
    let y0 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
    let exact = excited_amplitude_during_pulse(0.0, &config, Symmetric, 1.0).unwrap();
    let e1 = (rk4_fixed(rhs, -PI, &y0, 0.0, 50)[1] - exact).norm();
    let e2 = (rk4_fixed(rhs, -PI, &y0, 0.0, 100)[1] - exact).norm();
    assert!(
        ((e1 / e2).log2() - 4.0).abs() < 0.2,
        "{e1:e} {e2:e} {}",
        (e1 / e2).log2()
    );
}
