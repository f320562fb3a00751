//! Two-criterion feasibility: decoherence-to-exchange ratio and voltage SNR
//! over the (frequency, distance) plane, plus auxiliary engineering checks.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::capnet;
use crate::coupling::{self, RwaCheck};
use crate::error::{invalid, require_positive, Error, Result};
use crate::heating::{self, ValidityFlags};
use crate::model::{
    omega, Config, CouplerGeometry, DiskRadiusRule, HeatingModel, IonSpecies, BOLTZMANN, EPSILON0,
    HBAR, PLANCK, SPEED_OF_LIGHT,
};
use crate::noise::{self, Amplitude, SignalNoiseBudget, Snr};
use crate::numerics;

/// Disk radius for ion distance `d` under `rule`.
pub fn disk_radius_for(rule: DiskRadiusRule, d: f64, wire_capacitance: f64) -> f64 {
    match rule {
        DiskRadiusRule::Optimal => coupling::optimal_disk_radius(d, wire_capacitance),
        DiskRadiusRule::Proportional(k) => k * d,
        DiskRadiusRule::Fixed(r) => r,
    }
}

/// `t_deco/t_ex` for disks of radius `r`. Independent of the ion species.
pub fn ratio_deco_ex_at_radius(model: &HeatingModel, wire_capacitance: f64, f: f64, d: f64, t: f64, r: f64) -> f64 {
    let a = model.a_coefficient();
    let dilution = r / (2.0 * r + wire_capacitance / (8.0 * EPSILON0));
    PLANCK * f.powf(model.alpha_tilde() - 1.0) * d.powf(model.delta() + 1.0)
        / (2.0 * a * PI.powi(3) * EPSILON0 * model.temperature_factor(t))
        * dilution
        * r
        * r
        / (d * d + r * r).powi(3)
}

/// `t_deco/t_ex` with the disk radius chosen by `rule`.
pub fn ratio_deco_ex(model: &HeatingModel, geom: &CouplerGeometry, f: f64, d: f64, t: f64, rule: DiskRadiusRule) -> f64 {
    let cb = geom.wire_capacitance();
    ratio_deco_ex_at_radius(model, cb, f, d, t, disk_radius_for(rule, d, cb))
}

/// Limit of [`ratio_deco_ex`] for a negligible wire and `r = d/√2`.
pub fn ratio_deco_ex_simplified(model: &HeatingModel, f: f64, d: f64, t: f64) -> f64 {
    PLANCK / (27.0 * model.a_coefficient() * PI.powi(3) * EPSILON0) * f.powf(model.alpha_tilde() - 1.0)
        * d.powf(model.delta() - 3.0)
        / model.temperature_factor(t)
}

/// Frequency at which `t_deco/t_ex` equals `threshold` at distance `d`.
///
/// The ratio is `K(d)·f^{α̃−1}` with a frequency-independent `K`, so the
/// contour is inverted in closed form.
pub fn contour_frequency_ratio(
    d: f64,
    model: &HeatingModel,
    geom: &CouplerGeometry,
    t: f64,
    threshold: f64,
    rule: DiskRadiusRule,
) -> Result<f64> {
    require_positive("threshold", threshold)?;
    let k = ratio_deco_ex(model, geom, 1.0, d, t, rule);
    Ok((threshold / k).powf(1.0 / (model.alpha_tilde() - 1.0)))
}

/// Geometry with the disk radius the rule assigns at `d`.
pub fn geometry_at(geom: &CouplerGeometry, rule: DiskRadiusRule, d: f64) -> Result<CouplerGeometry> {
    geom.with_disk_radius(disk_radius_for(rule, d, geom.wire_capacitance()))
}

/// Inputs of the SNR that do not vary over the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrEnvironment {
    pub temperature: f64,
    pub bandwidth: f64,
    pub amplitude: Amplitude,
}

fn snr_at(ion: &IonSpecies, geom: &CouplerGeometry, env: &SnrEnvironment, f: f64, d: f64) -> Snr {
    noise::snr_voltage(
        ion,
        geom,
        f,
        d,
        env.temperature,
        geom.resistance(f),
        env.bandwidth,
        env.amplitude,
    )
}

/// Frequency at which `V_sig/V_JN` equals `threshold` at distance `d`.
///
/// With a fixed resistance the SNR falls as `f^{-1/2}` and the contour is
/// closed form. A skin-effect resistance is inverted by bisection in `ln f`.
#[allow(clippy::too_many_arguments)]
pub fn contour_frequency_snr(
    d: f64,
    ion: &IonSpecies,
    geom: &CouplerGeometry,
    env: &SnrEnvironment,
    threshold: f64,
    rule: DiskRadiusRule,
) -> Result<f64> {
    require_positive("threshold", threshold)?;
    let g = geometry_at(geom, rule, d)?;
    if let Some(fixed) = g.explicit_resistance() {
        let vsig1 = noise::signal_voltage(ion, &g, 1.0, d, env.amplitude).abs();
        let vjn = noise::johnson_voltage(env.temperature, fixed, env.bandwidth);
        if vjn == 0.0 {
            return Ok(f64::INFINITY);
        }
        return Ok((vsig1 / vjn / threshold).powi(2));
    }
    let h = |lnf: f64| snr_at(ion, &g, env, lnf.exp(), d).value.ln() - threshold.ln();
    let lnf = numerics::bisect(h, 0.0, 60.0, 1e-14)?;
    Ok(lnf.exp())
}

/// Log-spaced rectangular grid in frequency and distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub f_min: f64,
    pub f_max: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub nf: usize,
    pub nd: usize,
}

impl GridSpec {
    pub fn new(f_min: f64, f_max: f64, d_min: f64, d_max: f64, nf: usize, nd: usize) -> Result<Self> {
        require_positive("f_min", f_min)?;
        require_positive("d_min", d_min)?;
        if !(f_max > f_min) {
            return Err(invalid("f_max", "> f_min"));
        }
        if !(d_max > d_min) {
            return Err(invalid("d_max", "> d_min"));
        }
        if nf < 2 || nd < 2 {
            return Err(invalid("grid size", "at least 2 x 2"));
        }
        Ok(Self {
            f_min,
            f_max,
            d_min,
            d_max,
            nf,
            nd,
        })
    }

    pub fn frequencies(&self) -> Vec<f64> {
        numerics::logspace(self.f_min, self.f_max, self.nf)
    }
    pub fn distances(&self) -> Vec<f64> {
        numerics::logspace(self.d_min, self.d_max, self.nd)
    }
}

impl Default for GridSpec {
    /// 200 x 200 over 0.5-20 MHz and 30-500 µm.
    fn default() -> Self {
        Self {
            f_min: 0.5e6,
            f_max: 20e6,
            d_min: 30e-6,
            d_max: 500e-6,
            nf: 200,
            nd: 200,
        }
    }
}

/// Both criteria at one grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityPoint {
    pub f: f64,
    pub d: f64,
    pub disk_radius: f64,
    pub ratio_deco_ex: f64,
    pub snr: f64,
    pub feasible: bool,
    pub flags: Vec<&'static str>,
}

/// Contour point `(d, f)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ContourPoint {
    pub d: f64,
    pub f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityMap {
    pub grid: GridSpec,
    /// Row-major: distance outer, frequency inner.
    pub points: Vec<FeasibilityPoint>,
    pub contour_ratio: Vec<ContourPoint>,
    pub contour_snr: Vec<ContourPoint>,
}

impl FeasibilityMap {
    pub fn feasible_count(&self) -> usize {
        self.points.iter().filter(|p| p.feasible).count()
    }
}

fn env_from(cfg: &Config) -> SnrEnvironment {
    SnrEnvironment {
        temperature: cfg.trap.coupler_temperature(),
        bandwidth: cfg.trap.motional_bandwidth(),
        amplitude: Amplitude::ZeroPoint,
    }
}

/// Evaluate both criteria over `grid`. Rows are computed in parallel and
/// returned in grid order.
pub fn feasibility_map(cfg: &Config, grid: &GridSpec) -> Result<FeasibilityMap> {
    let freqs = grid.frequencies();
    let dists = grid.distances();
    let env = env_from(cfg);
    let t = cfg.trap.electrode_temperature();
    let rule = cfg.radius_rule;
    let ratio_thr = cfg.criteria.ratio_threshold();
    let snr_thr = cfg.criteria.snr_threshold();
    let cb = cfg.coupler.wire_capacitance();

    let rows: Vec<Result<(Vec<FeasibilityPoint>, ContourPoint, ContourPoint)>> = dists
        .par_iter()
        .map(|&d| {
            let r = disk_radius_for(rule, d, cb);
            let g = cfg.coupler.with_disk_radius(r)?;
            let wire_warning = !g.validity_warnings().is_empty();
            let row = freqs
                .iter()
                .map(|&f| {
                    let ratio = ratio_deco_ex_at_radius(&cfg.heating, cb, f, d, t, r);
                    let snr = snr_at(&cfg.ion, &g, &env, f, d);
                    let mut flags = ValidityFlags::check(f, d, t).tags();
                    if snr.noiseless {
                        flags.push("snr-noiseless");
                    }
                    if wire_warning {
                        flags.push("wire-radius");
                    }
                    FeasibilityPoint {
                        f,
                        d,
                        disk_radius: r,
                        ratio_deco_ex: ratio,
                        snr: snr.value,
                        feasible: ratio >= ratio_thr && snr.value >= snr_thr,
                        flags,
                    }
                })
                .collect();
            let fr = contour_frequency_ratio(d, &cfg.heating, &cfg.coupler, t, ratio_thr, rule)?;
            let fs = contour_frequency_snr(d, &cfg.ion, &cfg.coupler, &env, snr_thr, rule)?;
            Ok((row, ContourPoint { d, f: fr }, ContourPoint { d, f: fs }))
        })
        .collect();

    let mut points = Vec::with_capacity(freqs.len() * dists.len());
    let mut contour_ratio = Vec::with_capacity(dists.len());
    let mut contour_snr = Vec::with_capacity(dists.len());
    for row in rows {
        let (p, cr, cs) = row?;
        points.extend(p);
        contour_ratio.push(cr);
        contour_snr.push(cs);
    }
    Ok(FeasibilityMap {
        grid: *grid,
        points,
        contour_ratio,
        contour_snr,
    })
}

/// Inductance that resonates with `c_total` at `f`.
pub fn resonance_inductance(f: f64, c_total: f64) -> f64 {
    let w = omega(f);
    1.0 / (w * w * c_total)
}

/// Wavelength on a line with the given velocity factor.
pub fn wavelength(f: f64, velocity_factor: f64) -> f64 {
    velocity_factor * SPEED_OF_LIGHT / f
}

/// A wire longer than a quarter wavelength needs transmission-line treatment.
pub fn transmission_line_needed(wire_length: f64, f: f64, velocity_factor: f64) -> bool {
    wire_length > wavelength(f, velocity_factor) / 4.0
}

/// Rough decoherence times of the wire itself. Literature estimates only;
/// they do not enter the feasibility criteria.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WireDecoherence {
    /// `hf/P_JN` with `P_JN = V_JN²/R`.
    pub t_power: f64,
    /// `Q/(ω·n̄)` with the Bose-Einstein occupation.
    pub t_qfactor: f64,
    /// `ħQ/(k_B T)`, the high-temperature limit of `t_qfactor`.
    pub t_qfactor_classical: f64,
    pub thermal_occupation: f64,
}

pub fn wire_decoherence_estimates(t: f64, r: f64, delta_f: f64, f: f64, q_factor: f64) -> Result<WireDecoherence> {
    require_positive("temperature", t)?;
    require_positive("resistance", r)?;
    require_positive("bandwidth", delta_f)?;
    require_positive("frequency", f)?;
    require_positive("quality factor", q_factor)?;
    let p = noise::johnson_voltage(t, r, delta_f).powi(2) / r;
    let n_bar = 1.0 / ((PLANCK * f / (BOLTZMANN * t)).exp_m1());
    Ok(WireDecoherence {
        t_power: PLANCK * f / p,
        t_qfactor: q_factor / (omega(f) * n_bar),
        t_qfactor_classical: HBAR * q_factor / (BOLTZMANN * t),
        thermal_occupation: n_bar,
    })
}

/// Everything the analysis command reports for one configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub disk_radius: f64,
    pub wire_capacitance: f64,
    pub total_capacitance: f64,
    pub zeta: f64,
    pub eta: f64,
    pub gamma: f64,
    pub exchange_time: f64,
    pub rwa_parameter: f64,
    pub rwa_parameter_f2: f64,
    pub rwa_valid: bool,
    pub transferred_charge: f64,
    pub budget: SignalNoiseBudget,
    /// Signal voltage with the disk at `√2·d`, where the transferred charge peaks.
    pub v_sig_peak_transfer: f64,
    pub heating_rate: f64,
    pub t_deco: f64,
    pub ratio_deco_ex: f64,
    pub ratio_feasible: bool,
    pub snr_feasible: bool,
    pub flags: Vec<String>,
}

/// Analyse the configured coupler as given, without applying the radius rule.
pub fn analyze(cfg: &Config) -> Result<AnalysisReport> {
    let ion = &cfg.ion;
    let trap = &cfg.trap;
    let geom = &cfg.coupler;
    let f = trap.secular_frequency();
    let d = trap.ion_distance();
    let caps = geom.capacitances();
    let gamma = coupling::gamma_pickup_disk(ion.charge(), d, d, geom.disk1_radius(), geom.disk2_radius(), &caps);
    if !(gamma > 0.0) {
        return Err(Error::Validity {
            model: "pickup-disk coupling",
            reason: "ion charge must be non-zero".into(),
        });
    }
    let t_ex = coupling::exchange_time(gamma, ion, f)?;
    let RwaCheck {
        parameter,
        parameter_f2,
        valid,
    } = coupling::rwa_parameter(gamma, ion, f);
    let budget = noise::noise_budget(ion, trap, geom, Amplitude::ZeroPoint);
    let peak_geom = geom.with_disk_radius(2f64.sqrt() * d)?;
    let v_sig_peak_transfer = noise::signal_voltage(ion, &peak_geom, f, d, Amplitude::ZeroPoint);
    let hr = heating::heating_report(&cfg.heating, ion, f, d, trap.electrode_temperature());
    let ratio = hr.t_deco / t_ex;
    let b = crate::electrostatics::zero_point_amplitude(ion, f);
    let mut flags: Vec<String> = hr.validity.tags().into_iter().map(String::from).collect();
    flags.extend(geom.validity_warnings());
    if !crate::electrostatics::linearization_valid(d, b) {
        flags.push("amplitude exceeds linearisation limit".into());
    }
    if budget.snr_voltage.noiseless {
        flags.push("snr infinite: no Johnson noise".into());
    }
    if !valid {
        flags.push("rwa violated".into());
    }
    Ok(AnalysisReport {
        disk_radius: geom.disk1_radius(),
        wire_capacitance: caps.wire(),
        total_capacitance: caps.total(),
        zeta: caps.zeta(),
        eta: caps.eta(),
        gamma,
        exchange_time: t_ex,
        rwa_parameter: parameter,
        rwa_parameter_f2: parameter_f2,
        rwa_valid: valid,
        transferred_charge: crate::electrostatics::induced_charge_linear(
            crate::electrostatics::ChargeAbovePlane::new(ion.charge(), d)?,
            geom.disk1_radius(),
            b,
        ),
        budget,
        v_sig_peak_transfer,
        heating_rate: hr.rate,
        t_deco: hr.t_deco,
        ratio_deco_ex: ratio,
        ratio_feasible: ratio >= cfg.criteria.ratio_threshold(),
        snr_feasible: budget.snr_voltage.value >= cfg.criteria.snr_threshold(),
        flags,
    })
}

/// Coupling versus disk radius at the configured distance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusOptimization {
    pub d: f64,
    pub r_opt: f64,
    pub gamma_max: f64,
    pub exchange_time: f64,
    pub curve: Vec<(f64, f64)>,
}

pub fn optimize_radius(cfg: &Config, samples: usize) -> Result<RadiusOptimization> {
    let d = cfg.trap.ion_distance();
    let cb = cfg.coupler.wire_capacitance();
    let q = cfg.ion.charge();
    let r_opt = coupling::optimal_disk_radius(d, cb);
    let gamma_max = coupling::gamma_symmetric(q, d, r_opt, cb);
    let curve = numerics::logspace(0.1 * d, 10.0 * d, samples.max(2))
        .into_iter()
        .map(|r| (r, coupling::gamma_symmetric(q, d, r, cb)))
        .collect();
    Ok(RadiusOptimization {
        d,
        r_opt,
        gamma_max,
        exchange_time: coupling::exchange_time(gamma_max, &cfg.ion, cfg.trap.secular_frequency())?,
        curve,
    })
}

/// Capacitance of the disk-wire-disk network with disks of radius `r`.
pub fn network_capacitance(geom: &CouplerGeometry, r: f64) -> f64 {
    2.0 * capnet::disk_self_capacitance(r) + geom.wire_capacitance()
}
