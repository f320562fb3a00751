use std::f64::consts::PI;

use ionwire::coupling;
use ionwire::exchange_sim::*;
use ionwire::model::IonSpecies;
use ionwire::numerics::rel_diff;
use ionwire::Error;
use proptest::prelude::*;

fn be() -> IonSpecies {
    IonSpecies::beryllium9()
}

fn swap_time(kappa: f64) -> (f64, f64) {
    let f = 5e6;
    let w = 2.0 * PI * f;
    let sys = CoupledOscillatorSystem::resonant(&be(), f, kappa * be().mass() * w * w).unwrap();
    let t_ex = sys.exchange_time();
    let tr = simulate_classical(&sys, 1.3 * t_ex, 1.0 / (f * 1000.0), 1e-8).unwrap();
    (measure_swap_time(&tr).unwrap(), t_ex)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn classical_swap_matches_closed_form(log_kappa in -9.0f64..-3.0) {
        let (ts, t_ex) = swap_time(10f64.powf(log_kappa));
        prop_assert!(rel_diff(ts, t_ex) < 0.01, "{} vs {}", ts, t_ex);
    }

    #[test]
    fn quantum_number_conserved(n in 1u32..4, log_kappa in -6.0f64..-2.0) {
        let w = 2.0 * PI * 5e6;
        let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 10f64.powf(log_kappa) * be().mass() * w * w).unwrap();
        let t = sys.exchange_time();
        let run = simulate_quantum_rwa(&sys, n, 2.0 * t, t / 2000.0).unwrap();
        prop_assert!(run.transfer.number_drift < 1e-12);
        prop_assert!(run.transfer.residual_ion1 < 1e-9);
        prop_assert!(angle_difference(run.transfer.theta, coupling_phase(&sys, n)).abs() < 1e-6);
    }
}

#[test]
fn doubled_coupling_halves_swap_time() {
    let (a, _) = swap_time(2e-4);
    let (b, _) = swap_time(4e-4);
    assert!(rel_diff(a, 2.0 * b) < 0.01);
}

#[test]
fn energy_drift_per_period_is_small() {
    let w = 2.0 * PI * 5e6;
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 1e-3 * be().mass() * w * w).unwrap();
    let period = 1.0 / 5e6;
    let tr = simulate_classical(&sys, 200.0 * period, period / 1000.0, 1e-8).unwrap();
    // Coupling energy is tiny at this κ; the sum of both oscillators tracks the total.
    let first = tr.e1[0] + tr.e2[0];
    let last = tr.e1.last().unwrap() + tr.e2.last().unwrap();
    assert!(((last - first) / first).abs() / 200.0 < 1e-8 + 2e-3 / 200.0);
    assert_eq!(tr.time_scale, 1.0);
}

#[test]
fn scaled_run_reports_stretch() {
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 8e-18).unwrap();
    let tr = simulate_classical(&sys, 0.3, 1.0 / 5e9, 1e-8).unwrap();
    assert!(tr.time_scale > 1e3);
    assert!(tr.rwa_parameter < 1e-6);
}

#[test]
fn detuning_suppresses_transfer() {
    let w = 2.0 * PI * 5e6;
    let kappa = 1e-4;
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, kappa * be().mass() * w * w).unwrap();
    let resonant = simulate_classical(&sys, 1.5 * sys.exchange_time(), 1.0 / 5e9, 1e-8).unwrap();
    let detuned = sys.with_detuning(1.001 * w).unwrap();
    let off = simulate_classical(&detuned, 1.5 * sys.exchange_time(), 1.0 / 5e9, 1e-8).unwrap();
    assert!(resonant.swap_fidelity > 0.99);
    assert!(off.swap_fidelity < 0.5, "{}", off.swap_fidelity);
}

#[test]
fn step_size_is_checked() {
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 1e-17).unwrap();
    assert!(matches!(simulate_classical(&sys, 1e-3, 1e-7, 1e-8), Err(Error::Invalid { .. })));
    assert!(CoupledOscillatorSystem::new(1.0, 1.0, 1.0, 1.0, -1.0).is_err());
}

#[test]
fn synthetic_envelope_recovered() {
    let n = 4000;
    let period = 2.0;
    let dt = period / 1000.0;
    let times: Vec<f64> = (0..n).map(|i| i as f64 * dt).collect();
    let e2: Vec<f64> = times.iter().map(|t| (PI * t / period).sin().powi(2)).collect();
    let trace = ExchangeTrace {
        e1: e2.iter().map(|e| 1.0 - e).collect(),
        e2,
        times,
        smoothing: 1,
        swap_fidelity: 1.0,
        rwa_parameter: 0.0,
        time_scale: 1.0,
        phase_convention: "synthetic",
    };
    let t = measure_swap_time(&trace).unwrap();
    assert!((t - period / 2.0).abs() < 1e-9);
}

#[test]
fn vacuum_is_stationary() {
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 1e-12).unwrap();
    let run = simulate_quantum_rwa(&sys, 0, sys.exchange_time(), sys.exchange_time() / 100.0).unwrap();
    assert!(run.trace.e1.iter().chain(&run.trace.e2).all(|x| *x == 0.0));
    assert_eq!(run.transfer.theta, 0.0);
}

#[test]
fn generic_two_quantum_phase() {
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, 3.7e-13).unwrap();
    let run = simulate_quantum_rwa(&sys, 2, sys.exchange_time(), sys.exchange_time() / 4000.0).unwrap();
    let expected = coupling::exchange_phase(2, &be(), 5e6, 3.7e-13).unwrap().rem_euclid(2.0 * PI);
    assert!(angle_difference(run.transfer.theta, expected).abs() < 1e-6);
    assert!(run.transfer.fidelity > 1.0 - 1e-9);
}

#[test]
fn full_exchange_condition_for_two_quanta() {
    let g = coupling::full_exchange_gamma(2, 3, &be(), 5e6).unwrap();
    let sys = CoupledOscillatorSystem::resonant(&be(), 5e6, g).unwrap();
    let run = simulate_quantum_rwa(&sys, 2, sys.exchange_time(), sys.exchange_time() / 4000.0).unwrap();
    assert!(angle_difference(run.transfer.theta, 0.0).abs() < 1e-6);
    assert!(run.transfer.fidelity > 1.0 - 1e-9);
    let csv = run.trace.to_csv();
    assert!(csv.starts_with("t_s,e1,e2\n"));
}
