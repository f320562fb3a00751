//! Empirical anomalous-heating model: heating rate, field-noise spectral
//! density, decoherence time and prefactor extraction from measurements.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{omega, HeatingModel, IonSpecies, HBAR, PLANCK};

/// Ranges the model was fitted over.
pub const FREQUENCY_RANGE: (f64, f64) = (470e3, 1.2e6);
pub const DISTANCE_RANGE: (f64, f64) = (29e-6, 83e-6);
pub const TEMPERATURE_RANGE: (f64, f64) = (3.0, 300.0);

/// Whether each input lies inside the fitted range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidityFlags {
    pub frequency: bool,
    pub distance: bool,
    pub temperature: bool,
}

impl ValidityFlags {
    pub fn check(f: f64, d: f64, t: f64) -> Self {
        let within = |x: f64, (lo, hi): (f64, f64)| x >= lo && x <= hi;
        Self {
            frequency: within(f, FREQUENCY_RANGE),
            distance: within(d, DISTANCE_RANGE),
            temperature: within(t, TEMPERATURE_RANGE),
        }
    }

    pub fn all_valid(&self) -> bool {
        self.frequency && self.distance && self.temperature
    }

    /// Short tags for the out-of-range inputs, e.g. `"f-extrap"`.
    pub fn tags(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if !self.frequency {
            v.push("f-extrap");
        }
        if !self.distance {
            v.push("d-extrap");
        }
        if !self.temperature {
            v.push("T-extrap");
        }
        v
    }
}

/// Heating rate and derived quantities at one operating point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeatingReport {
    pub rate: f64,
    pub t_deco: f64,
    pub spectral_density: f64,
    pub validity: ValidityFlags,
}

/// Species-independent prefactor `A = Ã·4mh/q²` for prefactor `a_tilde`
/// quoted for `ion`.
pub fn a_from_a_tilde(a_tilde: f64, ion: &IonSpecies) -> f64 {
    a_tilde * 4.0 * ion.mass() * PLANCK / ion.charge().powi(2)
}

/// Heating rate in quanta per second.
///
/// The model's prefactor is converted to `A` and rescaled by `q²/(4mh)`, so
/// for the reference species this is `Ã·[1+(T/T_p)^β]/(f^α̃ d^δ)`.
pub fn heating_rate(model: &HeatingModel, ion: &IonSpecies, f: f64, d: f64, t: f64) -> f64 {
    let a = model.a_coefficient();
    a * ion.charge().powi(2) / (4.0 * ion.mass() * PLANCK) * model.temperature_factor(t)
        / (f.powf(model.alpha_tilde()) * d.powf(model.delta()))
}

/// Electric-field noise `S_E = A·[1+(T/T_p)^β]/(f^{α̃−1} d^δ)`.
pub fn spectral_density(model: &HeatingModel, f: f64, d: f64, t: f64) -> f64 {
    model.a_coefficient() * model.temperature_factor(t)
        / (f.powf(model.alpha_tilde() - 1.0) * d.powf(model.delta()))
}

/// Ground-to-first-excited transition rate driven by field noise `s_e`.
pub fn transition_rate_ground(ion: &IonSpecies, f: f64, s_e: f64) -> f64 {
    ion.charge().powi(2) / (4.0 * ion.mass() * HBAR * omega(f)) * s_e
}

/// `t_deco ≈ 1/(dn̄/dt)`. The approximation assumes decoherence is limited
/// by heating out of the motional ground state; it does not hold when
/// dephasing dominates.
pub fn decoherence_time(model: &HeatingModel, ion: &IonSpecies, f: f64, d: f64, t: f64) -> f64 {
    1.0 / heating_rate(model, ion, f, d, t)
}

pub fn heating_report(model: &HeatingModel, ion: &IonSpecies, f: f64, d: f64, t: f64) -> HeatingReport {
    let rate = heating_rate(model, ion, f, d, t);
    HeatingReport {
        rate,
        t_deco: 1.0 / rate,
        spectral_density: spectral_density(model, f, d, t),
        validity: ValidityFlags::check(f, d, t),
    }
}

/// One measured heating rate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatingMeasurement {
    #[serde(rename = "f_Hz")]
    pub frequency: f64,
    #[serde(rename = "d_m")]
    pub distance: f64,
    #[serde(rename = "T_K")]
    pub temperature: f64,
    #[serde(rename = "rate_quanta_per_s")]
    pub rate: f64,
    #[serde(rename = "material")]
    pub trap_material: String,
}

impl HeatingMeasurement {
    fn validate(self, line: usize) -> Result<Self> {
        let ok = [self.frequency, self.distance, self.temperature, self.rate]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0);
        if ok {
            Ok(self)
        } else {
            Err(Error::Data(format!("row {line}: all numeric columns must be > 0")))
        }
    }
}

/// `Ã = f^α̃ d^δ·rate/[1+(T/T_p)^β]` with the exponents of `model`.
pub fn extract_a_tilde(meas: &HeatingMeasurement, model: &HeatingModel) -> f64 {
    meas.frequency.powf(model.alpha_tilde()) * meas.distance.powf(model.delta()) * meas.rate
        / model.temperature_factor(meas.temperature)
}

/// Read measurements from CSV with header `f_Hz,d_m,T_K,rate_quanta_per_s,material`.
pub fn read_measurements<R: Read>(reader: R) -> Result<Vec<HeatingMeasurement>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize::<HeatingMeasurement>()
        .enumerate()
        .map(|(i, row)| {
            row.map_err(|e| Error::Data(e.to_string()))
                .and_then(|m| m.validate(i + 2))
        })
        .collect()
}

const MEASUREMENTS: &str = include_str!("../data/heating_rates.csv");

/// Reference heating data for niobium and gold surface traps. The rates are
/// regenerated from per-trap prefactors, so extraction with the default
/// exponents returns those prefactors.
pub fn bundled_measurements() -> Vec<HeatingMeasurement> {
    read_measurements(MEASUREMENTS.as_bytes()).expect("bundled data is well formed")
}

pub fn bundled_csv() -> &'static str {
    MEASUREMENTS
}

/// Mean and sample standard deviation of `Ã` for one material.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterialSummary {
    pub material: String,
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
}

/// Per-material `Ã` statistics, ordered by material name.
pub fn summarize_by_material(meas: &[HeatingMeasurement], model: &HeatingModel) -> Vec<MaterialSummary> {
    let mut groups: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for m in meas {
        groups
            .entry(m.trap_material.as_str())
            .or_default()
            .push(extract_a_tilde(m, model));
    }
    groups
        .into_iter()
        .map(|(material, v)| {
            let n = v.len() as f64;
            let mean = v.iter().sum::<f64>() / n;
            let var = if v.len() > 1 {
                v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
            } else {
                0.0
            };
            MaterialSummary {
                material: material.to_string(),
                count: v.len(),
                mean,
                std_dev: var.sqrt(),
            }
        })
        .collect()
}
