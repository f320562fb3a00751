//! Time-domain check of the exchange dynamics: two classical coupled
//! oscillators and the two-mode RWA beam splitter.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::coupling;
use crate::error::{invalid, require_non_negative, require_positive, Error, Result};
use crate::model::{omega, IonSpecies};

/// Samples recorded per oscillation period in classical runs.
pub const SAMPLES_PER_PERIOD: usize = 32;

/// Classical runs fail when the total energy drifts by more than this per period.
pub const ENERGY_DRIFT_LIMIT: f64 = 1e-6;

/// Weaker classical couplings are integrated at this `γ/(m₁ω₁²)` and the
/// time axis is stretched back. The slow envelope depends only on the
/// dimensionless coupling and detuning, so both are scaled together.
pub const SCALED_COUPLING: f64 = 1e-3;

/// Two harmonic oscillators coupled by `γ·x₁·x₂`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoupledOscillatorSystem {
    m1: f64,
    m2: f64,
    omega1: f64,
    omega2: f64,
    gamma: f64,
}

impl CoupledOscillatorSystem {
    pub fn new(m1: f64, m2: f64, omega1: f64, omega2: f64, gamma: f64) -> Result<Self> {
        require_positive("m1", m1)?;
        require_positive("m2", m2)?;
        require_positive("omega1", omega1)?;
        require_positive("omega2", omega2)?;
        require_non_negative("gamma", gamma)?;
        Ok(Self {
            m1,
            m2,
            omega1,
            omega2,
            gamma,
        })
    }

    /// Two identical ions at secular frequency `f`.
    pub fn resonant(ion: &IonSpecies, f: f64, gamma: f64) -> Result<Self> {
        let w = omega(f);
        Self::new(ion.mass(), ion.mass(), w, w, gamma)
    }

    pub fn with_detuning(&self, omega2: f64) -> Result<Self> {
        Self::new(self.m1, self.m2, self.omega1, omega2, self.gamma)
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }
    pub fn m2(&self) -> f64 {
        self.m2
    }
    pub fn omega1(&self) -> f64 {
        self.omega1
    }
    pub fn omega2(&self) -> f64 {
        self.omega2
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `γ/(m₁ω₁²)`
    pub fn rwa_parameter(&self) -> f64 {
        self.gamma / (self.m1 * self.omega1 * self.omega1)
    }

    /// `πωm/γ` for the first oscillator.
    pub fn exchange_time(&self) -> f64 {
        PI * self.omega1 * self.m1 / self.gamma
    }

    /// Beam-splitter rate `γ/(2√(m₁m₂ω₁ω₂))`.
    pub fn rwa_coupling_rate(&self) -> f64 {
        self.gamma / (2.0 * (self.m1 * self.m2 * self.omega1 * self.omega2).sqrt())
    }
}

/// Sampled energies (classical) or mean occupations (quantum) of both oscillators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExchangeTrace {
    pub times: Vec<f64>,
    pub e1: Vec<f64>,
    pub e2: Vec<f64>,
    /// Moving-average width, in samples, that removes the fast ripple.
    pub smoothing: usize,
    /// Largest fraction of the initial excitation found in oscillator 2.
    pub swap_fidelity: f64,
    pub rwa_parameter: f64,
    /// Factor applied to simulated times; 1 when the coupling was integrated as is.
    pub time_scale: f64,
    pub phase_convention: &'static str,
}

impl ExchangeTrace {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t_s,e1,e2\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{:.5e},{:.5e},{:.5e}\n",
                self.times[i], self.e1[i], self.e2[i]
            ));
        }
        out
    }
}

#[derive(Clone, Copy)]
struct State([f64; 4]);

/// Classical run starting with oscillator 1 displaced by `x0` and at rest.
///
/// Integration is RK4 in units where `ω₁ = 1`. Couplings below
/// [`SCALED_COUPLING`] are raised to it, with the detuning `ω₂/ω₁ − 1` raised
/// by the same factor, and times are multiplied back by that factor. A 180 ms
/// exchange at 5 MHz thus costs a few hundred periods instead of a million.
/// `dt` applies to the simulated period and is shrunk so that a period holds a
/// whole number of samples.
pub fn simulate_classical(sys: &CoupledOscillatorSystem, duration: f64, dt: f64, x0: f64) -> Result<ExchangeTrace> {
    require_positive("duration", duration)?;
    require_positive("dt", dt)?;
    let fmax = sys.omega1.max(sys.omega2) / (2.0 * PI);
    if dt > 1.0 / (100.0 * fmax) {
        return Err(invalid("dt", "<= 1/(100 * highest frequency)"));
    }
    let period = 2.0 * PI / sys.omega1;
    let per = (period / dt).ceil() as usize;
    let steps_per_period = per.div_ceil(SAMPLES_PER_PERIOD) * SAMPLES_PER_PERIOD;
    let stride = steps_per_period / SAMPLES_PER_PERIOD;
    let h = 2.0 * PI / steps_per_period as f64;

    let kappa = sys.rwa_parameter();
    let scale = if kappa > 0.0 && kappa < SCALED_COUPLING {
        SCALED_COUPLING / kappa
    } else {
        1.0
    };
    let w2 = 1.0 + (sys.omega2 / sys.omega1 - 1.0) * scale;
    let mu = sys.m2 / sys.m1;
    let k1 = kappa * scale;
    let k2 = k1 / mu;
    let deriv = |s: &State| {
        let [x1, v1, x2, v2] = s.0;
        State([v1, -x1 - k1 * x2, v2, -w2 * w2 * x2 - k2 * x1])
    };
    // Energies in units of m₁ω₁²; positions keep their SI scale.
    let energies = |s: &State| {
        let [x1, v1, x2, v2] = s.0;
        let e1 = 0.5 * (v1 * v1 + x1 * x1);
        let e2 = 0.5 * mu * (v2 * v2 + w2 * w2 * x2 * x2);
        (e1, e2, e1 + e2 + k1 * x1 * x2)
    };
    let unit = sys.m1 * sys.omega1 * sys.omega1;

    let tau_end = duration * sys.omega1 / scale;
    let n_steps = (tau_end / h).ceil() as usize;
    let mut s = State([x0, 0.0, 0.0, 0.0]);
    let (_, _, e_start) = energies(&s);
    let mut times = Vec::with_capacity(n_steps / stride + 1);
    let mut e1s = Vec::with_capacity(n_steps / stride + 1);
    let mut e2s = Vec::with_capacity(n_steps / stride + 1);
    let push = |s: &State, step: usize, t: &mut Vec<f64>, a: &mut Vec<f64>, b: &mut Vec<f64>| {
        let (e1, e2, _) = energies(s);
        t.push(step as f64 * h * scale / sys.omega1);
        a.push(e1 * unit);
        b.push(e2 * unit);
    };
    push(&s, 0, &mut times, &mut e1s, &mut e2s);
    for step in 1..=n_steps {
        let add = |a: &State, b: &State, c: f64| {
            let mut o = a.0;
            for (x, y) in o.iter_mut().zip(b.0) {
                *x += c * y;
            }
            State(o)
        };
        let q1 = deriv(&s);
        let q2 = deriv(&add(&s, &q1, 0.5 * h));
        let q3 = deriv(&add(&s, &q2, 0.5 * h));
        let q4 = deriv(&add(&s, &q3, h));
        for i in 0..4 {
            s.0[i] += h / 6.0 * (q1.0[i] + 2.0 * q2.0[i] + 2.0 * q3.0[i] + q4.0[i]);
        }
        if step % stride == 0 {
            push(&s, step, &mut times, &mut e1s, &mut e2s);
        }
    }
    let (_, _, e_end) = energies(&s);
    if e_start > 0.0 {
        let periods = (n_steps as f64 / steps_per_period as f64).max(1.0);
        let drift = ((e_end - e_start) / e_start).abs() / periods;
        if drift > ENERGY_DRIFT_LIMIT {
            return Err(Error::Unstable {
                drift,
                limit: ENERGY_DRIFT_LIMIT,
            });
        }
    }
    let swap_fidelity = if e_start > 0.0 {
        smoothed(&e2s, SAMPLES_PER_PERIOD)
            .iter()
            .map(|(_, v)| *v)
            .fold(0.0, f64::max)
            / (e_start * unit)
    } else {
        0.0
    };
    Ok(ExchangeTrace {
        times,
        e1: e1s,
        e2: e2s,
        smoothing: SAMPLES_PER_PERIOD,
        swap_fidelity,
        rwa_parameter: kappa,
        time_scale: scale,
        phase_convention: "classical",
    })
}

/// Moving average over `window` samples, paired with the window's centre
/// offset in samples.
fn smoothed(v: &[f64], window: usize) -> Vec<(f64, f64)> {
    let w = window.max(1);
    if v.len() < w {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(v.len() - w + 1);
    let mut sum: f64 = v[..w].iter().sum();
    let centre = (w - 1) as f64 / 2.0;
    out.push((centre, sum / w as f64));
    for i in w..v.len() {
        sum += v[i] - v[i - w];
        out.push((i as f64 - (w - 1) as f64 + centre, sum / w as f64));
    }
    out
}

/// Time of the first maximum of oscillator 2's smoothed energy, refined by a
/// parabola through the neighbouring samples.
pub fn measure_swap_time(trace: &ExchangeTrace) -> Result<f64> {
    let duration = trace.times.last().copied().unwrap_or(0.0);
    let none = Error::NoSwap { duration };
    if trace.times.len() < 3 {
        return Err(none);
    }
    let dt = trace.times[1] - trace.times[0];
    let s = smoothed(&trace.e2, trace.smoothing);
    let scale = s.iter().map(|p| p.1.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(none);
    }
    for i in 1..s.len().saturating_sub(1) {
        let (y0, y1, y2) = (s[i - 1].1, s[i].1, s[i + 1].1);
        if y1 >= y0 && y1 > y2 && y1 > 1e-6 * scale {
            let denom = y0 - 2.0 * y1 + y2;
            let shift = if denom != 0.0 {
                0.5 * (y0 - y2) / denom
            } else {
                0.0
            };
            return Ok(trace.times[0] + (s[i].0 + shift) * dt);
        }
    }
    Err(none)
}

/// State of the RWA run at the exchange time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferResult {
    /// `Θ` recovered from the simulated `|0,n⟩` amplitude, in `[0, 2π)`.
    pub theta: f64,
    /// Population left with ion 1 above its ground state.
    pub residual_ion1: f64,
    /// Overlap with `|0⟩⊗(|0⟩ + e^{−iΘ}|n⟩)/√2` for the closed-form `Θ`.
    pub fidelity: f64,
    /// `|⟨N⟩(t) − ⟨N⟩(0)|`
    pub number_drift: f64,
    pub rwa_valid: bool,
}

/// Quantum trace plus the state transfer at the exchange time.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantumRun {
    pub trace: ExchangeTrace,
    pub transfer: TransferResult,
}

/// Fock basis index of `|n1, n2⟩`.
fn idx(n1: usize, n2: usize, dim: usize) -> usize {
    n1 * dim + n2
}

struct BeamSplitter {
    dim: usize,
    detuning: f64,
    g: f64,
}

impl BeamSplitter {
    /// `−i H ψ / ħ` for `H/ħ = Δ b†b + g(a†b + a b†)`.
    fn apply(&self, psi: &[Complex64], out: &mut [Complex64]) {
        let d = self.dim;
        let mi = Complex64::new(0.0, -1.0);
        for n1 in 0..d {
            for n2 in 0..d {
                let mut acc = Complex64::new(self.detuning * n2 as f64, 0.0) * psi[idx(n1, n2, d)];
                // a†b: |n1-1, n2+1⟩ → |n1, n2⟩
                if n1 >= 1 && n2 + 1 < d {
                    acc += self.g * ((n1 * (n2 + 1)) as f64).sqrt() * psi[idx(n1 - 1, n2 + 1, d)];
                }
                // a b†: |n1+1, n2-1⟩ → |n1, n2⟩
                if n2 >= 1 && n1 + 1 < d {
                    acc += self.g * (((n1 + 1) * n2) as f64).sqrt() * psi[idx(n1 + 1, n2 - 1, d)];
                }
                out[idx(n1, n2, d)] = mi * acc;
            }
        }
    }

    fn rk4(&self, psi: &mut [Complex64], h: f64, scratch: &mut [Vec<Complex64>; 5]) {
        let n = psi.len();
        let [k1, k2, k3, k4, tmp] = scratch;
        self.apply(psi, k1);
        for i in 0..n {
            tmp[i] = psi[i] + k1[i] * (0.5 * h);
        }
        self.apply(tmp, k2);
        for i in 0..n {
            tmp[i] = psi[i] + k2[i] * (0.5 * h);
        }
        self.apply(tmp, k3);
        for i in 0..n {
            tmp[i] = psi[i] + k3[i] * h;
        }
        self.apply(tmp, k4);
        for i in 0..n {
            psi[i] += (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0);
        }
    }
}

fn occupations(psi: &[Complex64], dim: usize) -> (f64, f64, f64) {
    let (mut n1s, mut n2s, mut norm) = (0.0, 0.0, 0.0);
    for n1 in 0..dim {
        for n2 in 0..dim {
            let p = psi[idx(n1, n2, dim)].norm_sqr();
            n1s += n1 as f64 * p;
            n2s += n2 as f64 * p;
            norm += p;
        }
    }
    (n1s, n2s, norm)
}

fn edge_population(psi: &[Complex64], dim: usize) -> f64 {
    let top = dim - 1;
    (0..dim)
        .map(|k| psi[idx(top, k, dim)].norm_sqr() + if k != top { psi[idx(k, top, dim)].norm_sqr() } else { 0.0 })
        .sum()
}

/// Largest population tolerated on the truncation edge.
const TRUNCATION_TOLERANCE: f64 = 1e-12;

/// Evolve `(|0⟩+|n⟩)/√2 ⊗ |0⟩` under the RWA beam splitter.
///
/// The state lives in the frame rotating at `ω₁` for both modes. The phase
/// accumulated in the lab frame, `nω₁t`, is added back analytically when
/// `Θ` is extracted. `duration` sets the trace length; the transfer result
/// is always evaluated at exactly `πω₁m₁/γ`. `n = 0` leaves both ions in
/// the vacuum.
pub fn simulate_quantum_rwa(sys: &CoupledOscillatorSystem, n: u32, duration: f64, dt: f64) -> Result<QuantumRun> {
    require_positive("duration", duration)?;
    require_positive("dt", dt)?;
    if !(sys.gamma > 0.0) {
        return Err(invalid("gamma", "> 0 for a quantum exchange"));
    }
    let n = n as usize;
    let dim = n + 3; // occupations 0..=n+2
    let g = sys.rwa_coupling_rate();
    let bs = BeamSplitter {
        dim,
        detuning: (sys.omega2 - sys.omega1) / g,
        g: 1.0,
    };
    let t_ex = sys.exchange_time();

    let mut psi = vec![Complex64::new(0.0, 0.0); dim * dim];
    let amp = std::f64::consts::FRAC_1_SQRT_2;
    if n == 0 {
        psi[idx(0, 0, dim)] = Complex64::new(1.0, 0.0);
    } else {
        psi[idx(0, 0, dim)] = Complex64::new(amp, 0.0);
        psi[idx(n, 0, dim)] = Complex64::new(amp, 0.0);
    }
    let psi0 = psi.clone();
    let mut scratch: [Vec<Complex64>; 5] = std::array::from_fn(|_| vec![Complex64::new(0.0, 0.0); dim * dim]);

    // Dimensionless time τ = g·t; the step is rounded so t_ex is hit exactly.
    let tau_ex = g * t_ex;
    let steps_ex = ((tau_ex / (g * dt)).ceil() as usize).max(1);
    let h = tau_ex / steps_ex as f64;
    let total_steps = ((g * duration) / h).ceil() as usize;
    let stride = (total_steps / 2000).max(1);

    let (n1_0, n2_0, norm0) = occupations(&psi, dim);
    let number0 = (n1_0 + n2_0) / norm0;
    let mut times = vec![0.0];
    let mut e1 = vec![n1_0];
    let mut e2 = vec![n2_0];
    let mut number_drift: f64 = 0.0;
    let mut at_ex: Option<Vec<Complex64>> = None;

    let last = total_steps.max(steps_ex);
    for step in 1..=last {
        bs.rk4(&mut psi, h, &mut scratch);
        let edge = edge_population(&psi, dim);
        if edge > TRUNCATION_TOLERANCE {
            return Err(Error::Truncation {
                population: edge,
                cutoff: dim - 1,
            });
        }
        if step == steps_ex {
            at_ex = Some(psi.clone());
        }
        if step % stride == 0 || step == last {
            let (a, b, norm) = occupations(&psi, dim);
            number_drift = number_drift.max(((a + b) / norm - number0).abs());
            if step <= total_steps {
                times.push(step as f64 * h / g);
                e1.push(a);
                e2.push(b);
            }
        }
    }
    let psi_ex = at_ex.unwrap_or(psi0);

    let wt = sys.omega1 * t_ex;
    let (theta, fidelity, residual) = if n == 0 {
        (0.0, psi_ex[idx(0, 0, dim)].norm_sqr(), 0.0)
    } else {
        let c0n = psi_ex[idx(0, n, dim)];
        let c00 = psi_ex[idx(0, 0, dim)];
        let theta = (-(c0n / c00).arg() + n as f64 * wt).rem_euclid(2.0 * PI);
        let expected = coupling_phase(sys, n as u32);
        // Lab-frame amplitudes: the rotating frame hides e^{-i(n1+n2)ω₁t}.
        let lab_c0n = c0n * Complex64::from_polar(1.0, -(n as f64) * wt);
        let target = Complex64::from_polar(amp, -expected);
        let overlap = c00.conj() * amp + target.conj() * lab_c0n;
        let residual: f64 = (1..dim)
            .flat_map(|k| (0..dim).map(move |j| (k, j)))
            .map(|(k, j)| psi_ex[idx(k, j, dim)].norm_sqr())
            .sum();
        (theta, overlap.norm_sqr(), residual)
    };
    let swap_fidelity = if n == 0 { 1.0 } else { fidelity };
    Ok(QuantumRun {
        trace: ExchangeTrace {
            times,
            e1,
            e2,
            smoothing: 1,
            swap_fidelity,
            rwa_parameter: sys.rwa_parameter(),
            time_scale: 1.0,
            phase_convention: "interaction picture at omega1, lab phase n*omega1*t restored",
        },
        transfer: TransferResult {
            theta,
            residual_ion1: residual,
            fidelity,
            number_drift,
            rwa_valid: sys.rwa_parameter() < coupling::RWA_LIMIT,
        },
    })
}

/// Closed-form `Θ` for the system, reduced to `[0, 2π)`.
pub fn coupling_phase(sys: &CoupledOscillatorSystem, n: u32) -> f64 {
    let th = n as f64 * PI * (sys.m1 * sys.omega1 * sys.omega1 / sys.gamma + 0.5);
    th.rem_euclid(2.0 * PI)
}

/// Smallest signed difference between two angles.
pub fn angle_difference(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d - 2.0 * PI
    } else {
        d
    }
}
