//! Shared domain types, physical constants and config loading.
//!
//! Every type here has private fields and a validating constructor, so any
//! instance that reaches the physics modules already satisfies its invariants.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::capnet::{self, CapacitanceTriple};
use crate::error::{invalid, require_non_negative, require_positive, Error, Result};

/// SI values of the physical constants used throughout.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub epsilon0: f64,
    pub hbar: f64,
    pub h: f64,
    pub kb: f64,
    pub e: f64,
    pub mu0: f64,
}

/// CODATA 2018.
pub const CODATA2018: PhysicalConstants = PhysicalConstants {
    epsilon0: 8.854_187_812_8e-12,
    hbar: 6.626_070_15e-34 / (2.0 * PI),
    h: 6.626_070_15e-34,
    kb: 1.380_649e-23,
    e: 1.602_176_634e-19,
    mu0: 1.256_637_062_12e-6,
};

pub const EPSILON0: f64 = CODATA2018.epsilon0;
pub const PLANCK: f64 = CODATA2018.h;
pub const HBAR: f64 = CODATA2018.hbar;
pub const BOLTZMANN: f64 = CODATA2018.kb;
pub const ELEMENTARY_CHARGE: f64 = CODATA2018.e;
pub const MU0: f64 = CODATA2018.mu0;
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

pub fn default_constants() -> PhysicalConstants {
    CODATA2018
}

/// How far `|q|/e` may sit from an integer. Loose enough to accept charges
/// quoted with a rounded elementary charge, such as 1.6e-19 C.
pub const CHARGE_QUANTUM_TOLERANCE: f64 = 5e-3;

/// Angular frequency for a frequency in Hz.
#[inline]
pub fn omega(f: f64) -> f64 {
    2.0 * PI * f
}

/// A trapped charged particle.
#[derive(Debug, Clone, PartialEq)]
pub struct IonSpecies {
    label: String,
    mass: f64,
    charge: f64,
}

impl IonSpecies {
    pub fn new(label: impl Into<String>, mass: f64, charge: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        if !charge.is_finite() {
            return Err(invalid("charge", "finite"));
        }
        let n = charge / ELEMENTARY_CHARGE;
        if (n - n.round()).abs() > CHARGE_QUANTUM_TOLERANCE {
            return Err(invalid(
                "charge",
                format!("an integer multiple of e (got {n:.6} e)"),
            ));
        }
        Ok(Self {
            label: label.into(),
            mass,
            charge,
        })
    }

    /// Beryllium-9 with the rounded mass of the reference parameter table.
    pub fn beryllium9() -> Self {
        Self {
            label: "Be-9".into(),
            mass: 1.5e-26,
            charge: ELEMENTARY_CHARGE,
        }
    }

    /// Strontium-88, the species the heating-model prefactor is normalised to.
    pub fn strontium88() -> Self {
        Self {
            label: "Sr-88".into(),
            mass: 87.905_612 * ATOMIC_MASS_UNIT,
            charge: ELEMENTARY_CHARGE,
        }
    }

    pub fn calcium40() -> Self {
        Self {
            label: "Ca-40".into(),
            mass: 39.962_591 * ATOMIC_MASS_UNIT,
            charge: ELEMENTARY_CHARGE,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    /// Charge in units of e, rounded.
    pub fn charge_number(&self) -> i64 {
        (self.charge / ELEMENTARY_CHARGE).round() as i64
    }
}

/// Trap operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapEnvironment {
    secular_frequency: f64,
    ion_distance: f64,
    electrode_temperature: f64,
    motional_bandwidth: f64,
    coupler_temperature: f64,
}

impl TrapEnvironment {
    pub fn new(
        secular_frequency: f64,
        ion_distance: f64,
        electrode_temperature: f64,
        motional_bandwidth: f64,
        coupler_temperature: f64,
    ) -> Result<Self> {
        require_positive("secular_frequency", secular_frequency)?;
        require_positive("ion_distance", ion_distance)?;
        require_non_negative("electrode_temperature", electrode_temperature)?;
        require_positive("motional_bandwidth", motional_bandwidth)?;
        require_non_negative("coupler_temperature", coupler_temperature)?;
        if motional_bandwidth >= secular_frequency {
            return Err(invalid(
                "motional_bandwidth",
                "< secular_frequency (resolved sidebands)",
            ));
        }
        Ok(Self {
            secular_frequency,
            ion_distance,
            electrode_temperature,
            motional_bandwidth,
            coupler_temperature,
        })
    }

    /// 5 MHz, 50 µm, 10 K, 500 Hz.
    pub fn reference() -> Self {
        Self {
            secular_frequency: 5e6,
            ion_distance: 50e-6,
            electrode_temperature: 10.0,
            motional_bandwidth: 500.0,
            coupler_temperature: 10.0,
        }
    }

    /// Same environment at a different operating point.
    pub fn at(&self, secular_frequency: f64, ion_distance: f64) -> Result<Self> {
        Self::new(
            secular_frequency,
            ion_distance,
            self.electrode_temperature,
            self.motional_bandwidth,
            self.coupler_temperature,
        )
    }

    pub fn secular_frequency(&self) -> f64 {
        self.secular_frequency
    }
    pub fn omega(&self) -> f64 {
        omega(self.secular_frequency)
    }
    pub fn ion_distance(&self) -> f64 {
        self.ion_distance
    }
    pub fn electrode_temperature(&self) -> f64 {
        self.electrode_temperature
    }
    pub fn motional_bandwidth(&self) -> f64 {
        self.motional_bandwidth
    }
    pub fn coupler_temperature(&self) -> f64 {
        self.coupler_temperature
    }
}

/// Two pickup disks joined by a thin wire.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplerGeometry {
    disk1_radius: f64,
    disk2_radius: f64,
    disk_thickness: f64,
    wire_length: f64,
    wire_radius: f64,
    conductivity: f64,
    explicit_resistance: Option<f64>,
}

/// Wire radius should stay below this fraction of the smaller disk radius.
pub const WIRE_TO_DISK_LIMIT: f64 = 0.2;

impl CouplerGeometry {
    pub fn new(
        disk1_radius: f64,
        disk2_radius: f64,
        disk_thickness: f64,
        wire_length: f64,
        wire_radius: f64,
        conductivity: f64,
        explicit_resistance: Option<f64>,
    ) -> Result<Self> {
        require_positive("disk1_radius", disk1_radius)?;
        require_positive("disk2_radius", disk2_radius)?;
        require_positive("disk_thickness", disk_thickness)?;
        require_positive("wire_length", wire_length)?;
        require_positive("wire_radius", wire_radius)?;
        require_positive("conductivity", conductivity)?;
        if let Some(r) = explicit_resistance {
            require_non_negative("explicit_resistance", r)?;
        }
        if wire_radius >= wire_length / 10.0 {
            return Err(invalid(
                "wire_radius",
                "< wire_length/10 (thin-wire capacitance)",
            ));
        }
        Ok(Self {
            disk1_radius,
            disk2_radius,
            disk_thickness,
            wire_length,
            wire_radius,
            conductivity,
            explicit_resistance,
        })
    }

    /// Symmetric coupler with disks of radius `d/√2`, a 1 cm wire of 10 µm
    /// radius and a 1 mΩ resistance.
    pub fn reference(ion_distance: f64) -> Self {
        let r = ion_distance / 2f64.sqrt();
        Self {
            disk1_radius: r,
            disk2_radius: r,
            disk_thickness: 1e-6,
            wire_length: 0.01,
            wire_radius: 10e-6,
            conductivity: 6.0e7,
            explicit_resistance: Some(1e-3),
        }
    }

    /// Copy with both disks set to `radius`.
    pub fn with_disk_radius(&self, radius: f64) -> Result<Self> {
        Self::new(
            radius,
            radius,
            self.disk_thickness,
            self.wire_length,
            self.wire_radius,
            self.conductivity,
            self.explicit_resistance,
        )
    }

    pub fn with_wire_radius(&self, wire_radius: f64) -> Result<Self> {
        Self::new(
            self.disk1_radius,
            self.disk2_radius,
            self.disk_thickness,
            self.wire_length,
            wire_radius,
            self.conductivity,
            self.explicit_resistance,
        )
    }

    pub fn with_resistance(&self, resistance: Option<f64>) -> Result<Self> {
        Self::new(
            self.disk1_radius,
            self.disk2_radius,
            self.disk_thickness,
            self.wire_length,
            self.wire_radius,
            self.conductivity,
            resistance,
        )
    }

    pub fn disk1_radius(&self) -> f64 {
        self.disk1_radius
    }
    pub fn disk2_radius(&self) -> f64 {
        self.disk2_radius
    }
    pub fn disk_thickness(&self) -> f64 {
        self.disk_thickness
    }
    pub fn wire_length(&self) -> f64 {
        self.wire_length
    }
    pub fn wire_radius(&self) -> f64 {
        self.wire_radius
    }
    pub fn conductivity(&self) -> f64 {
        self.conductivity
    }
    pub fn explicit_resistance(&self) -> Option<f64> {
        self.explicit_resistance
    }

    /// Thin-wire capacitance; the constructor already guarantees `l/a > 10`.
    pub fn wire_capacitance(&self) -> f64 {
        2.0 * PI * EPSILON0 * self.wire_length / (self.wire_length / self.wire_radius).ln()
    }

    /// Thin-disk capacitances of disk 1, wire and disk 2.
    pub fn capacitances(&self) -> CapacitanceTriple {
        CapacitanceTriple::from_parts(
            capnet::disk_self_capacitance(self.disk1_radius),
            self.wire_capacitance(),
            capnet::disk_self_capacitance(self.disk2_radius),
        )
    }

    /// Explicit resistance if set, otherwise the skin-effect wire resistance at `f`.
    pub fn resistance(&self, f: f64) -> f64 {
        self.explicit_resistance.unwrap_or_else(|| {
            capnet::wire_resistance_unchecked(
                self.wire_length,
                self.wire_radius,
                self.conductivity,
                f,
            )
        })
    }

    /// Soft model-validity checks that do not prevent evaluation.
    pub fn validity_warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let rmin = self.disk1_radius.min(self.disk2_radius);
        if self.wire_radius > WIRE_TO_DISK_LIMIT * rmin {
            out.push(format!(
                "wire_radius {:.3e} m exceeds {WIRE_TO_DISK_LIMIT}x the smaller disk radius {:.3e} m",
                self.wire_radius, rmin
            ));
        }
        out
    }
}

/// Empirical power-law heating model.
///
/// `a_tilde` is normalised to `reference`; for any other species the rate is
/// rescaled by `q²/m` through [`HeatingModel::a_coefficient`].
#[derive(Debug, Clone, PartialEq)]
pub struct HeatingModel {
    a_tilde: f64,
    alpha_tilde: f64,
    delta: f64,
    beta: f64,
    t_p: f64,
    reference: IonSpecies,
}

impl HeatingModel {
    pub fn new(
        a_tilde: f64,
        alpha_tilde: f64,
        delta: f64,
        beta: f64,
        t_p: f64,
        reference: IonSpecies,
    ) -> Result<Self> {
        require_positive("a_tilde", a_tilde)?;
        if !(alpha_tilde.is_finite() && alpha_tilde > 1.0) {
            return Err(invalid("alpha_tilde", "> 1"));
        }
        if !delta.is_finite() {
            return Err(invalid("delta", "finite"));
        }
        if !beta.is_finite() {
            return Err(invalid("beta", "finite"));
        }
        require_positive("t_p", t_p)?;
        if reference.charge() == 0.0 {
            return Err(invalid("reference charge", "non-zero"));
        }
        Ok(Self {
            a_tilde,
            alpha_tilde,
            delta,
            beta,
            t_p,
            reference,
        })
    }

    /// Niobium fit: Ã = 0.012, α̃ = 2.4, δ = 4, β = 1.51, T_p = 10 K, Sr-88 reference.
    pub fn niobium() -> Self {
        Self {
            a_tilde: 0.012,
            alpha_tilde: 2.4,
            delta: 4.0,
            beta: 1.51,
            t_p: 10.0,
            reference: IonSpecies::strontium88(),
        }
    }

    /// Same exponents with a different prefactor.
    pub fn with_a_tilde(&self, a_tilde: f64) -> Result<Self> {
        Self::new(
            a_tilde,
            self.alpha_tilde,
            self.delta,
            self.beta,
            self.t_p,
            self.reference.clone(),
        )
    }

    /// Same prefactor with different frequency and distance exponents.
    pub fn with_exponents(&self, alpha_tilde: f64, delta: f64) -> Result<Self> {
        Self::new(
            self.a_tilde,
            alpha_tilde,
            delta,
            self.beta,
            self.t_p,
            self.reference.clone(),
        )
    }

    /// Model whose species-independent prefactor `A` equals `a`.
    pub fn from_a_coefficient(
        a: f64,
        alpha_tilde: f64,
        delta: f64,
        beta: f64,
        t_p: f64,
        reference: IonSpecies,
    ) -> Result<Self> {
        let a_tilde = a * reference.charge().powi(2) / (4.0 * reference.mass() * PLANCK);
        Self::new(a_tilde, alpha_tilde, delta, beta, t_p, reference)
    }

    pub fn a_tilde(&self) -> f64 {
        self.a_tilde
    }
    pub fn alpha_tilde(&self) -> f64 {
        self.alpha_tilde
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn t_p(&self) -> f64 {
        self.t_p
    }
    pub fn reference(&self) -> &IonSpecies {
        &self.reference
    }

    /// Species-independent prefactor `A = Ã·4·m_ref·h / q_ref²`.
    pub fn a_coefficient(&self) -> f64 {
        self.a_tilde * 4.0 * self.reference.mass() * PLANCK / self.reference.charge().powi(2)
    }

    /// `1 + (T/T_p)^β`
    pub fn temperature_factor(&self, t: f64) -> f64 {
        1.0 + (t / self.t_p).powf(self.beta)
    }
}

/// Thresholds on `t_deco/t_ex` and `V_sig/V_JN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityCriteria {
    ratio_threshold: f64,
    snr_threshold: f64,
}

impl FeasibilityCriteria {
    pub fn new(ratio_threshold: f64, snr_threshold: f64) -> Result<Self> {
        require_positive("ratio_threshold", ratio_threshold)?;
        require_positive("snr_threshold", snr_threshold)?;
        Ok(Self {
            ratio_threshold,
            snr_threshold,
        })
    }
    pub fn ratio_threshold(&self) -> f64 {
        self.ratio_threshold
    }
    pub fn snr_threshold(&self) -> f64 {
        self.snr_threshold
    }
}

impl Default for FeasibilityCriteria {
    fn default() -> Self {
        Self {
            ratio_threshold: 10.0,
            snr_threshold: 10.0,
        }
    }
}

/// How the disk radius follows the ion distance in sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DiskRadiusRule {
    /// Maximise the symmetric coupling at each distance.
    #[default]
    Optimal,
    /// `r = k·d`.
    Proportional(f64),
    /// Fixed radius in metres.
    Fixed(f64),
}

// ---------------------------------------------------------------------------
// Config document

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IonSection {
    #[serde(default = "default_label")]
    pub label: String,
    pub mass: f64,
    pub charge: f64,
}

fn default_label() -> String {
    "ion".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    pub secular_frequency: f64,
    pub ion_distance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub electrode_temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motional_bandwidth: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupler_temperature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CouplerSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk1_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk2_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub disk_thickness: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wire_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wire_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conductivity: Option<f64>,
    /// Negative values are rejected; leave unset to use the wire resistance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_resistance: Option<f64>,
    /// Set to true to ignore `explicit_resistance` defaults and use the wire.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub use_wire_resistance: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_rule: Option<DiskRadiusRule>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct HeatingSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_tilde: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_charge: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CriteriaSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratio_threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snr_threshold: Option<f64>,
}

/// Raw TOML document before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub ion: IonSection,
    pub trap: TrapSection,
    #[serde(default)]
    pub coupler: CouplerSection,
    #[serde(default)]
    pub heating: HeatingSection,
    #[serde(default)]
    pub criteria: CriteriaSection,
}

/// Fully validated configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub ion: IonSpecies,
    pub trap: TrapEnvironment,
    pub coupler: CouplerGeometry,
    pub heating: HeatingModel,
    pub criteria: FeasibilityCriteria,
    pub radius_rule: DiskRadiusRule,
}

/// Parse and validate a TOML config.
///
/// `[ion]` needs `mass` and `charge`; `[trap]` needs `secular_frequency` and
/// `ion_distance`. Everything else falls back to the reference parameter set.
pub fn load_config(source: &str) -> Result<Config> {
    let doc: ConfigDocument = toml::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
    Config::from_document(&doc)
}

impl Config {
    pub fn from_document(doc: &ConfigDocument) -> Result<Self> {
        let ion = IonSpecies::new(doc.ion.label.clone(), doc.ion.mass, doc.ion.charge)?;

        let t = &doc.trap;
        let electrode_t = t.electrode_temperature.unwrap_or(10.0);
        let trap = TrapEnvironment::new(
            t.secular_frequency,
            t.ion_distance,
            electrode_t,
            t.motional_bandwidth.unwrap_or(500.0),
            t.coupler_temperature.unwrap_or(electrode_t),
        )?;

        let c = &doc.coupler;
        let reference = CouplerGeometry::reference(trap.ion_distance());
        let r1 = c.disk1_radius.unwrap_or(reference.disk1_radius);
        let resistance = if c.use_wire_resistance {
            None
        } else {
            Some(c.explicit_resistance.unwrap_or(1e-3))
        };
        let coupler = CouplerGeometry::new(
            r1,
            c.disk2_radius.unwrap_or(r1),
            c.disk_thickness.unwrap_or(reference.disk_thickness),
            c.wire_length.unwrap_or(reference.wire_length),
            c.wire_radius.unwrap_or(reference.wire_radius),
            c.conductivity.unwrap_or(reference.conductivity),
            resistance,
        )?;

        let h = &doc.heating;
        let nb = HeatingModel::niobium();
        let sr = IonSpecies::strontium88();
        let reference_ion = IonSpecies::new(
            "heating reference",
            h.reference_mass.unwrap_or(sr.mass()),
            h.reference_charge.unwrap_or(sr.charge()),
        )?;
        let heating = HeatingModel::new(
            h.a_tilde.unwrap_or(nb.a_tilde),
            h.alpha_tilde.unwrap_or(nb.alpha_tilde),
            h.delta.unwrap_or(nb.delta),
            h.beta.unwrap_or(nb.beta),
            h.t_p.unwrap_or(nb.t_p),
            reference_ion,
        )?;

        let cr = &doc.criteria;
        let criteria = FeasibilityCriteria::new(
            cr.ratio_threshold.unwrap_or(10.0),
            cr.snr_threshold.unwrap_or(10.0),
        )?;

        let radius_rule = c.radius_rule.unwrap_or_default();
        match radius_rule {
            DiskRadiusRule::Proportional(k) => {
                require_positive("radius_rule.proportional", k)?;
            }
            DiskRadiusRule::Fixed(r) => {
                require_positive("radius_rule.fixed", r)?;
            }
            DiskRadiusRule::Optimal => {}
        }

        Ok(Self {
            ion,
            trap,
            coupler,
            heating,
            criteria,
            radius_rule,
        })
    }

    /// Fully explicit document that reproduces this configuration.
    pub fn to_document(&self) -> ConfigDocument {
        ConfigDocument {
            ion: IonSection {
                label: self.ion.label.clone(),
                mass: self.ion.mass,
                charge: self.ion.charge,
            },
            trap: TrapSection {
                secular_frequency: self.trap.secular_frequency,
                ion_distance: self.trap.ion_distance,
                electrode_temperature: Some(self.trap.electrode_temperature),
                motional_bandwidth: Some(self.trap.motional_bandwidth),
                coupler_temperature: Some(self.trap.coupler_temperature),
            },
            coupler: CouplerSection {
                disk1_radius: Some(self.coupler.disk1_radius),
                disk2_radius: Some(self.coupler.disk2_radius),
                disk_thickness: Some(self.coupler.disk_thickness),
                wire_length: Some(self.coupler.wire_length),
                wire_radius: Some(self.coupler.wire_radius),
                conductivity: Some(self.coupler.conductivity),
                explicit_resistance: self.coupler.explicit_resistance,
                use_wire_resistance: self.coupler.explicit_resistance.is_none(),
                radius_rule: Some(self.radius_rule),
            },
            heating: HeatingSection {
                a_tilde: Some(self.heating.a_tilde),
                alpha_tilde: Some(self.heating.alpha_tilde),
                delta: Some(self.heating.delta),
                beta: Some(self.heating.beta),
                t_p: Some(self.heating.t_p),
                reference_mass: Some(self.heating.reference.mass),
                reference_charge: Some(self.heating.reference.charge),
            },
            criteria: CriteriaSection {
                ratio_threshold: Some(self.criteria.ratio_threshold),
                snr_threshold: Some(self.criteria.snr_threshold),
            },
        }
    }

    pub fn to_toml(&self) -> String {
        // Serialising plain numbers and strings cannot fail.
        toml::to_string(&self.to_document()).expect("config document serialises")
    }

    /// Disk radius the configured rule assigns at ion distance `d`.
    pub fn disk_radius_at(&self, d: f64) -> f64 {
        crate::feasibility::disk_radius_for(self.radius_rule, d, self.coupler.wire_capacitance())
    }
}

/// The reference parameter set as a TOML document.
pub const REFERENCE_CONFIG: &str = r#"[ion]
label = "Be-9"
mass = 1.5e-26
charge = 1.6e-19

[trap]
secular_frequency = 5.0e6
ion_distance = 50.0e-6
electrode_temperature = 10.0
motional_bandwidth = 500.0

[coupler]
wire_length = 0.01
wire_radius = 10.0e-6
explicit_resistance = 1.0e-3
"#;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hbar_is_h_over_two_pi() {
        let c = default_constants();
        assert!(((c.hbar * 2.0 * PI - c.h) / c.h).abs() < 1e-12);
        assert_eq!(c.e, 1.602176634e-19);
        assert_eq!(c.epsilon0, 8.8541878128e-12);
        assert_eq!(c.kb, 1.380649e-23);
    }

    #[test]
    fn reference_config_loads() {
        let cfg = load_config(REFERENCE_CONFIG).unwrap();
        assert_eq!(cfg.ion.mass(), 1.5e-26);
        assert_eq!(cfg.trap.ion_distance(), 50e-6);
        assert!((cfg.coupler.disk1_radius() - 50e-6 / 2f64.sqrt()).abs() < 1e-18);
        assert_eq!(cfg.radius_rule, DiskRadiusRule::Optimal);
        assert!(!cfg.coupler.validity_warnings().is_empty());
    }

    #[test]
    fn zero_distance_rejected() {
        let src = REFERENCE_CONFIG.replace("ion_distance = 50.0e-6", "ion_distance = 0.0");
        let err = load_config(&src).unwrap_err();
        assert_eq!(err.to_string(), "ion_distance must be > 0");
    }

    #[test]
    fn fat_wire_rejected() {
        let src = REFERENCE_CONFIG.replace("wire_radius = 10.0e-6", "wire_radius = 0.01");
        let err = load_config(&src).unwrap_err();
        assert!(err.to_string().starts_with("wire_radius must be"), "{err}");
    }

    #[test]
    fn fractional_charge_rejected() {
        assert!(IonSpecies::new("x", 1e-26, 0.5 * ELEMENTARY_CHARGE).is_err());
        assert!(IonSpecies::new("x", 1e-26, -2.0 * ELEMENTARY_CHARGE).is_ok());
        assert!(IonSpecies::new("x", 0.0, ELEMENTARY_CHARGE).is_err());
    }

    #[test]
    fn bandwidth_must_be_below_frequency() {
        assert!(TrapEnvironment::new(1e3, 1e-5, 4.0, 1e3, 4.0).is_err());
    }

    #[test]
    fn parse_error_reported() {
        assert!(matches!(load_config("[ion"), Err(Error::Parse(_))));
        assert!(matches!(load_config(""), Err(Error::Parse(_))));
    }

    #[test]
    fn roundtrip() {
        let cfg = load_config(REFERENCE_CONFIG).unwrap();
        let again = load_config(&cfg.to_toml()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn radius_rule_variants_parse() {
        let src = format!("{REFERENCE_CONFIG}radius_rule = {{ proportional = 0.7071067811865476 }}\n");
        let cfg = load_config(&src).unwrap();
        assert_eq!(cfg.radius_rule, DiskRadiusRule::Proportional(std::f64::consts::FRAC_1_SQRT_2));
        let src = format!("{REFERENCE_CONFIG}radius_rule = \"optimal\"\n");
        assert_eq!(load_config(&src).unwrap().radius_rule, DiskRadiusRule::Optimal);
    }

    #[test]
    fn a_coefficient_of_reference_model() {
        let a = HeatingModel::niobium().a_coefficient();
        assert!((a - 1.8e-22).abs() / 1.8e-22 < 0.01, "{a:e}");
    }
}
