//! Capacitances, wire resistance and the three-element charge-splitting network.

use std::f64::consts::PI;

use crate::error::{invalid, require_non_negative, require_positive, Error, Result};
use crate::model::{IonSpecies, BOLTZMANN, EPSILON0, MU0};

/// Thin-disk self-capacitance `8ε₀r`.
pub fn disk_self_capacitance(r: f64) -> f64 {
    8.0 * EPSILON0 * r
}

/// Finite-thickness correction `8ε₀r·(1 + 0.26√((t/2)/r))`.
pub fn disk_self_capacitance_corrected(r: f64, thickness: f64) -> f64 {
    disk_self_capacitance(r) * (1.0 + 0.26 * (0.5 * thickness / r).sqrt())
}

/// Isolated sphere `4πε₀S`.
pub fn sphere_self_capacitance(s: f64) -> f64 {
    4.0 * PI * EPSILON0 * s
}

/// Radius of the sphere with the same volume as a disk of radius `r`.
pub fn equivalent_sphere_radius(r: f64, thickness: f64) -> f64 {
    (3.0 / (4.0 * PI) * thickness * PI * r * r).cbrt()
}

/// Thin-wire capacitance `2πε₀l/ln(l/a)`, valid for `l/a > 10`.
pub fn wire_capacitance(length: f64, radius: f64) -> Result<f64> {
    require_positive("wire_length", length)?;
    require_positive("wire_radius", radius)?;
    let aspect = length / radius;
    if aspect <= 10.0 {
        return Err(Error::Validity {
            model: "thin-wire capacitance",
            reason: format!("l/a = {aspect:.3} must exceed 10"),
        });
    }
    Ok(2.0 * PI * EPSILON0 * length / aspect.ln())
}

/// Skin depth `1/√(πfµ₀σ)`.
pub fn skin_depth(f: f64, conductivity: f64) -> f64 {
    1.0 / (PI * f * MU0 * conductivity).sqrt()
}

/// Wire resistance at frequency `f`. Uses the DC form while the skin depth
/// exceeds the radius and the conducting annulus otherwise.
pub fn wire_resistance(length: f64, radius: f64, conductivity: f64, f: f64) -> Result<f64> {
    require_positive("wire_length", length)?;
    require_positive("wire_radius", radius)?;
    require_positive("conductivity", conductivity)?;
    require_positive("frequency", f)?;
    Ok(wire_resistance_unchecked(length, radius, conductivity, f))
}

pub(crate) fn wire_resistance_unchecked(length: f64, a: f64, sigma: f64, f: f64) -> f64 {
    let delta = skin_depth(f, sigma);
    if delta >= a {
        length / (sigma * PI * a * a)
    } else {
        length / (sigma * (2.0 * PI * a * delta - PI * delta * delta))
    }
}

/// Largest resistance that still drains capacitor `c` by `voltage_ratio`
/// within half a period.
pub fn max_drain_resistance(c: f64, f: f64, voltage_ratio: f64) -> Result<f64> {
    require_positive("capacitance", c)?;
    require_positive("frequency", f)?;
    if !(voltage_ratio > 1.0) {
        return Err(invalid("voltage_ratio", "> 1"));
    }
    Ok(1.0 / (2.0 * f) / (c * voltage_ratio.ln()))
}

/// Capacitances of disk 1, the wire and disk 2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacitanceTriple {
    disk1: f64,
    wire: f64,
    disk2: f64,
}

impl CapacitanceTriple {
    /// Disks must be positive; a zero wire capacitance is allowed as a limit.
    pub fn new(disk1: f64, wire: f64, disk2: f64) -> Result<Self> {
        require_positive("disk1 capacitance", disk1)?;
        require_non_negative("wire capacitance", wire)?;
        require_positive("disk2 capacitance", disk2)?;
        Ok(Self { disk1, wire, disk2 })
    }

    pub(crate) fn from_parts(disk1: f64, wire: f64, disk2: f64) -> Self {
        Self { disk1, wire, disk2 }
    }

    pub fn disk1(&self) -> f64 {
        self.disk1
    }
    pub fn wire(&self) -> f64 {
        self.wire
    }
    pub fn disk2(&self) -> f64 {
        self.disk2
    }
    pub fn total(&self) -> f64 {
        self.disk1 + self.wire + self.disk2
    }
    /// Share of the charge landing on disk 2.
    pub fn zeta(&self) -> f64 {
        self.disk2 / self.total()
    }
    /// Share of the charge staying on disk 1.
    pub fn eta(&self) -> f64 {
        self.disk1 / self.total()
    }
}

/// Equilibrium distribution of a transferred charge over the network.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeSplit {
    pub on_disk1: f64,
    pub on_wire: f64,
    pub on_disk2: f64,
    pub zeta: f64,
    pub eta: f64,
}

impl ChargeSplit {
    /// Common potential of all three elements.
    pub fn potential(&self, caps: &CapacitanceTriple) -> f64 {
        self.on_disk1 / caps.disk1
    }
}

/// Split `q_transf` so that every element sits at the same potential.
pub fn charge_split(caps: CapacitanceTriple, q_transf: f64) -> ChargeSplit {
    let total = caps.total();
    let zeta = caps.disk2 / total;
    let eta = caps.disk1 / total;
    ChargeSplit {
        on_disk1: eta * q_transf,
        on_wire: caps.wire / total * q_transf,
        on_disk2: zeta * q_transf,
        zeta,
        eta,
    }
}

/// Lumped inductance and capacitance that mimic the ion in a circuit.
/// Kept for comparison only; they do not give valid coupling constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalentElements {
    pub inductance: f64,
    pub capacitance: f64,
}

pub fn ion_equivalent_elements(ion: &IonSpecies, f: f64, d: f64, r: f64, eta: f64) -> Result<EquivalentElements> {
    require_positive("frequency", f)?;
    require_positive("ion_distance", d)?;
    require_positive("disk radius", r)?;
    require_non_negative("eta", eta)?;
    let w = 2.0 * PI * f;
    let m = ion.mass();
    let q2 = ion.charge().powi(2);
    let geom = (r * r + d * d).powf(1.5);
    let k = eta * q2 * r * r;
    if k == 0.0 {
        return Ok(EquivalentElements {
            inductance: f64::INFINITY,
            capacitance: 0.0,
        });
    }
    Ok(EquivalentElements {
        inductance: 2.0 * d * m * geom / k,
        capacitance: k / (2.0 * d * m * w * w * geom),
    })
}

/// Superconducting surface resistance: two-fluid value plus a BCS-scaled
/// extrapolation from a reference measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetResistance {
    pub two_fluid: f64,
    pub bcs_scaled: f64,
    /// Gap over Boltzmann constant, `1.75·T_c`.
    pub gap_over_kb: f64,
}

/// Reference point for BCS scaling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetReference {
    pub resistance: f64,
    pub frequency: f64,
    pub temperature: f64,
}

pub fn bcs_sheet_resistance(
    f: f64,
    t: f64,
    tc: f64,
    lambda_l: f64,
    sigma1: f64,
    reference: SheetReference,
) -> Result<SheetResistance> {
    require_positive("frequency", f)?;
    require_positive("temperature", t)?;
    require_positive("critical temperature", tc)?;
    if t >= tc {
        return Err(Error::Validity {
            model: "BCS surface resistance",
            reason: format!("T = {t} K is not below T_c = {tc} K"),
        });
    }
    require_positive("reference temperature", reference.temperature)?;
    require_positive("reference frequency", reference.frequency)?;
    let w = 2.0 * PI * f;
    let two_fluid = 0.5 * w * w * MU0 * MU0 * lambda_l.powi(3) * sigma1;
    let gap = bcs_gap_over_kb(tc);
    let shape = |f: f64, t: f64| f * f * (-gap / t).exp() / t;
    let bcs_scaled =
        reference.resistance * shape(f, t) / shape(reference.frequency, reference.temperature);
    Ok(SheetResistance {
        two_fluid,
        bcs_scaled,
        gap_over_kb: gap,
    })
}

/// `Δ/k_B` from `2Δ = 3.5 k_B T_c`.
pub fn bcs_gap_over_kb(tc: f64) -> f64 {
    1.75 * tc
}

/// Gap energy in joules.
pub fn bcs_gap(tc: f64) -> f64 {
    bcs_gap_over_kb(tc) * BOLTZMANN
}
