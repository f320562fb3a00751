//! Signal and noise magnitudes on the coupling wire.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::Serialize;

use crate::capnet;
use crate::electrostatics::{self, ChargeAbovePlane};
use crate::error::{invalid, Result};
use crate::model::{CouplerGeometry, IonSpecies, TrapEnvironment, BOLTZMANN, ELEMENTARY_CHARGE, HBAR};

/// Ion oscillation amplitude used for the signal.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Amplitude {
    /// Ground-state spread `√(ħ/2mω)`.
    #[default]
    ZeroPoint,
    /// Multiple of the ground-state spread, for a driven ion.
    ScaledZeroPoint(f64),
    /// Explicit amplitude in metres.
    Fixed(f64),
}

impl Amplitude {
    pub fn resolve(self, ion: &IonSpecies, f: f64) -> f64 {
        match self {
            Amplitude::ZeroPoint => electrostatics::zero_point_amplitude(ion, f),
            Amplitude::ScaledZeroPoint(k) => k * electrostatics::zero_point_amplitude(ion, f),
            Amplitude::Fixed(b) => b,
        }
    }
}

/// RMS Johnson-Nyquist voltage `√(4kTRΔf)`.
pub fn johnson_voltage(t: f64, r: f64, delta_f: f64) -> f64 {
    (4.0 * BOLTZMANN * t * r * delta_f).sqrt()
}

/// Charge swept into disk 1 at distance `d`.
fn transferred_charge(ion: &IonSpecies, geom: &CouplerGeometry, f: f64, d: f64, amplitude: Amplitude) -> f64 {
    let r = geom.disk1_radius();
    let b = amplitude.resolve(ion, f);
    electrostatics::induced_charge_linear(ChargeAbovePlane::unchecked(ion.charge(), d), r, b)
}

/// Voltage between the two disks, `2·Q_transf/(C_a + C_b + C_c)`.
pub fn signal_voltage(ion: &IonSpecies, geom: &CouplerGeometry, f: f64, d: f64, amplitude: Amplitude) -> f64 {
    2.0 * transferred_charge(ion, geom, f, d, amplitude) / geom.capacitances().total()
}

/// Current through the wire, `2f·η·Q_transf`.
pub fn signal_current(ion: &IonSpecies, geom: &CouplerGeometry, f: f64, d: f64, amplitude: Amplitude) -> f64 {
    let q = transferred_charge(ion, geom, f, d, amplitude);
    let split = capnet::charge_split(geom.capacitances(), q);
    2.0 * f * split.on_disk1
}

/// Poisson shot-noise current `√(2eIΔf)`.
pub fn shot_noise_poisson(current: f64, delta_f: f64) -> f64 {
    (2.0 * ELEMENTARY_CHARGE * current.abs() * delta_f).sqrt()
}

/// Sample standard deviation of the current inferred from Poisson electron
/// counts. Each window lasts `1/(2Δf)`, the averaging time whose noise
/// bandwidth is `Δf`.
pub fn shot_noise_monte_carlo<R: Rng + ?Sized>(current: f64, delta_f: f64, windows: usize, rng: &mut R) -> Result<f64> {
    if !(current > 0.0) || windows < 2 {
        return Err(invalid("Monte-Carlo inputs", "a positive current and at least two windows"));
    }
    let tau = 1.0 / (2.0 * delta_f);
    let mean_count = current * tau / ELEMENTARY_CHARGE;
    let dist = Poisson::new(mean_count).map_err(|e| invalid("mean electron count", e.to_string()))?;
    let scale = ELEMENTARY_CHARGE / tau;
    let samples: Vec<f64> = (0..windows).map(|_| dist.sample(rng) * scale).collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(var.sqrt())
}

fn check_transmissions(ts: &[f64]) -> Result<()> {
    if ts.iter().all(|t| (0.0..=1.0).contains(t)) {
        Ok(())
    } else {
        Err(invalid("transmission", "in [0, 1]"))
    }
}

/// `ΣT(1−T)/ΣT`.
pub fn fano_factor(transmissions: &[f64]) -> Result<f64> {
    check_transmissions(transmissions)?;
    let sum: f64 = transmissions.iter().sum();
    if sum == 0.0 {
        return Err(invalid("transmissions", "include at least one open channel"));
    }
    Ok(transmissions.iter().map(|t| t * (1.0 - t)).sum::<f64>() / sum)
}

/// Landauer conductance `(e²/πħ)ΣT`.
pub fn landauer_conductance(transmissions: &[f64]) -> Result<f64> {
    check_transmissions(transmissions)?;
    Ok(ELEMENTARY_CHARGE.powi(2) / (PI * HBAR) * transmissions.iter().sum::<f64>())
}

/// Transmission-resolved shot noise and its Poisson reference.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionShotNoise {
    /// `(2e³/πħ)|V| coth(e|V|/2kT) ΣT(1−T)`
    pub s_act: f64,
    /// `(2e³/πħ)|V| ΣT`
    pub s_poisson: f64,
}

/// Shot-noise spectral density for conduction channels `transmissions` at bias `v`.
///
/// Both densities share the `2e³/πħ` prefactor so that `s_act/s_poisson`
/// tends to the Fano factor as `T → 0`.
pub fn shot_noise_transmission(v: f64, t: f64, transmissions: &[f64]) -> Result<TransmissionShotNoise> {
    check_transmissions(transmissions)?;
    if !(t >= 0.0) {
        return Err(invalid("temperature", ">= 0"));
    }
    let pref = 2.0 * ELEMENTARY_CHARGE.powi(3) / (PI * HBAR) * v.abs();
    let x = ELEMENTARY_CHARGE * v.abs() / (2.0 * BOLTZMANN * t);
    let coth = if v == 0.0 {
        0.0
    } else if x > 350.0 || t == 0.0 {
        1.0
    } else {
        1.0 / x.tanh()
    };
    let partition: f64 = transmissions.iter().map(|t| t * (1.0 - t)).sum();
    Ok(TransmissionShotNoise {
        s_act: pref * coth * partition,
        s_poisson: pref * transmissions.iter().sum::<f64>(),
    })
}

/// Voltage signal-to-noise ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Snr {
    pub value: f64,
    /// Set when the Johnson noise vanishes and `value` is `+∞`.
    pub noiseless: bool,
}

pub fn snr_from_parts(v_sig: f64, v_jn: f64) -> Snr {
    if v_jn == 0.0 {
        Snr {
            value: f64::INFINITY,
            noiseless: true,
        }
    } else {
        Snr {
            value: v_sig.abs() / v_jn,
            noiseless: false,
        }
    }
}

/// `V_sig/V_JN` at wire temperature `t` and resistance `r`.
#[allow(clippy::too_many_arguments)]
pub fn snr_voltage(
    ion: &IonSpecies,
    geom: &CouplerGeometry,
    f: f64,
    d: f64,
    t: f64,
    r: f64,
    delta_f: f64,
    amplitude: Amplitude,
) -> Snr {
    snr_from_parts(
        signal_voltage(ion, geom, f, d, amplitude),
        johnson_voltage(t, r, delta_f),
    )
}

/// Signal and noise magnitudes at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SignalNoiseBudget {
    pub v_sig: f64,
    pub v_jn: f64,
    pub i_sig: f64,
    /// Poisson bound; applicability to superconducting wires is unknown.
    pub i_shot_poisson: f64,
    /// Fully transmitting channels carry no shot noise.
    pub i_shot_ballistic: f64,
    pub snr_voltage: Snr,
    pub resistance: f64,
}

/// Budget for the configured coupler. The Johnson noise uses the coupler
/// temperature and the geometry's resistance at the trap frequency.
pub fn noise_budget(ion: &IonSpecies, trap: &TrapEnvironment, geom: &CouplerGeometry, amplitude: Amplitude) -> SignalNoiseBudget {
    let f = trap.secular_frequency();
    let d = trap.ion_distance();
    let r = geom.resistance(f);
    let v_sig = signal_voltage(ion, geom, f, d, amplitude);
    let v_jn = johnson_voltage(trap.coupler_temperature(), r, trap.motional_bandwidth());
    let i_sig = signal_current(ion, geom, f, d, amplitude);
    SignalNoiseBudget {
        v_sig,
        v_jn,
        i_sig,
        i_shot_poisson: shot_noise_poisson(i_sig, trap.motional_bandwidth()),
        i_shot_ballistic: 0.0,
        snr_voltage: snr_from_parts(v_sig, v_jn),
        resistance: r,
    }
}
