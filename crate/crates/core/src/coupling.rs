//! Coupling constants between two ions for the pickup-disk coupler and the
//! comparison systems, disk-radius optimisation, exchange time and phase, and
//! the direct Coulomb baseline.

use std::f64::consts::PI;

use serde::Serialize;

use crate::capnet::CapacitanceTriple;
use crate::error::{invalid, require_positive, Result};
use crate::model::{omega, CouplerGeometry, IonSpecies, TrapEnvironment, ELEMENTARY_CHARGE, EPSILON0};
use crate::numerics;

/// RWA holds while `γ/(mω²)` stays below this.
pub const RWA_LIMIT: f64 = 0.1;

/// Coupling constant with the derived exchange quantities.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingResult {
    pub system_label: String,
    pub gamma: f64,
    pub exchange_time: f64,
    pub rwa: RwaCheck,
}

impl CouplingResult {
    pub fn new(label: impl Into<String>, gamma: f64, ion: &IonSpecies, f: f64) -> Result<Self> {
        Ok(Self {
            system_label: label.into(),
            gamma,
            exchange_time: exchange_time(gamma, ion, f)?,
            rwa: rwa_parameter(gamma, ion, f),
        })
    }
}

/// Pickup-disk coupling for ions at heights `d1`, `d2` over disks `r1`, `r2`.
pub fn gamma_pickup_disk(q: f64, d1: f64, d2: f64, r1: f64, r2: f64, caps: &CapacitanceTriple) -> f64 {
    let g1 = (d1 * d1 + r1 * r1).powf(1.5);
    let g2 = (d2 * d2 + r2 * r2).powf(1.5);
    let bracket = d1 * r2 * r2 / (g1 * g2) + d2 * r1 * r1 / (g2 * g1);
    caps.zeta() / (8.0 * PI * EPSILON0) * q * q * bracket
}

/// Symmetric pickup-disk coupling with thin-disk capacitances `8ε₀r`.
pub fn gamma_symmetric(q: f64, d: f64, r: f64, wire_capacitance: f64) -> f64 {
    let dilution = 1.0 / (2.0 + wire_capacitance / (8.0 * EPSILON0 * r));
    q * q / (4.0 * PI * EPSILON0) * dilution * d * r * r / (d * d + r * r).powi(3)
}

/// Golden-section bracket tolerance for [`optimal_disk_radius`].
pub const RADIUS_TOLERANCE: f64 = 1e-12;

/// Disk radius maximising [`gamma_symmetric`]; lies in `[d/√2, d]`.
pub fn optimal_disk_radius(d: f64, wire_capacitance: f64) -> f64 {
    if wire_capacitance == 0.0 {
        return d / 2f64.sqrt();
    }
    let (r, _) = numerics::golden_section_max(
        |r| gamma_symmetric(1.0, d, r, wire_capacitance),
        1e-3 * d,
        10.0 * d,
        RADIUS_TOLERANCE,
    );
    r
}

/// `t_ex = πωm/γ`.
pub fn exchange_time(gamma: f64, ion: &IonSpecies, f: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(invalid("gamma", "> 0"));
    }
    Ok(PI * omega(f) * ion.mass() / gamma)
}

/// Size of the coupling relative to the trap spring constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RwaCheck {
    /// `γ/(mω²)`, the canonical parameter.
    pub parameter: f64,
    /// `γ/(mf²)`, the same ratio with `f` in place of `ω`.
    pub parameter_f2: f64,
    pub valid: bool,
}

pub fn rwa_parameter(gamma: f64, ion: &IonSpecies, f: f64) -> RwaCheck {
    let w = omega(f);
    let parameter = gamma / (ion.mass() * w * w);
    RwaCheck {
        parameter,
        parameter_f2: gamma / (ion.mass() * f * f),
        valid: parameter < RWA_LIMIT,
    }
}

/// Phase `Θ = nπ(mω²/γ + 1/2)` picked up by `|n⟩` during an exchange.
pub fn exchange_phase(n: u32, ion: &IonSpecies, f: f64, gamma: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    if !(gamma > 0.0) {
        return Err(invalid("gamma", "> 0"));
    }
    let w = omega(f);
    Ok(n as f64 * PI * (ion.mass() * w * w / gamma + 0.5))
}

/// Coupling for which the exchange phase of `|n⟩` is `2πj`.
pub fn full_exchange_gamma(n: u32, j: u32, ion: &IonSpecies, f: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("n", ">= 1"));
    }
    let denom = 4 * j as i64 - n as i64;
    if denom <= 0 {
        return Err(invalid("j", format!("such that 4j > n (got 4j - n = {denom})")));
    }
    let w = omega(f);
    Ok(2.0 * n as f64 * ion.mass() * w * w / denom as f64)
}

/// Wire suspended at height `H` over the ions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuspendedWireGeometry {
    wire_height: f64,
    ion_heights: (f64, f64),
    wire_radius: f64,
    wire_length: f64,
}

impl SuspendedWireGeometry {
    pub fn new(wire_height: f64, ion_heights: (f64, f64), wire_radius: f64, wire_length: f64) -> Result<Self> {
        require_positive("wire_height", wire_height)?;
        require_positive("ion_height", ion_heights.0)?;
        require_positive("ion_height", ion_heights.1)?;
        require_positive("wire_radius", wire_radius)?;
        require_positive("wire_length", wire_length)?;
        if ion_heights.0.max(ion_heights.1) >= wire_height {
            return Err(invalid("wire_height", "> both ion heights"));
        }
        if wire_radius >= wire_height {
            return Err(invalid("wire_radius", "< wire_height"));
        }
        Ok(Self {
            wire_height,
            ion_heights,
            wire_radius,
            wire_length,
        })
    }

    /// Stand-in for the unpublished layout: wire at `2d`, ions at `d`,
    /// 15.5 µm radius, 1 cm long.
    pub fn reconstructed(d: f64) -> Result<Self> {
        Self::new(2.0 * d, (d, d), 15.5e-6, 0.01)
    }

    pub fn wire_height(&self) -> f64 {
        self.wire_height
    }
    pub fn ion_heights(&self) -> (f64, f64) {
        self.ion_heights
    }
    pub fn wire_radius(&self) -> f64 {
        self.wire_radius
    }
    pub fn wire_length(&self) -> f64 {
        self.wire_length
    }

    fn log_term(&self) -> f64 {
        ((2.0 * self.wire_height - self.wire_radius) / self.wire_radius).ln()
    }
}

pub fn gamma_suspended_wire(g: &SuspendedWireGeometry, q: f64) -> f64 {
    let h2 = g.wire_height * g.wire_height;
    let (h1, h2b) = g.ion_heights;
    2.0 * q * q * h2
        / (PI * EPSILON0 * g.wire_length * g.log_term() * (h2 - h1 * h1) * (h2 - h2b * h2b))
}

/// Transmission line `γ = q²r⁴/((d²+r²)³C)`.
pub fn gamma_transmission_line(r: f64, d: f64, c_total: f64, q: f64) -> f64 {
    q * q * r.powi(4) / ((d * d + r * r).powi(3) * c_total)
}

/// Rectangular electrodes of width `a'`: `16q²a'²/(π²(4d²+a'²)²C)`.
pub fn gamma_rect_electrodes(a_prime: f64, d: f64, c_total: f64, q: f64) -> f64 {
    16.0 * q * q * a_prime * a_prime / (PI * PI * (4.0 * d * d + a_prime * a_prime).powi(2) * c_total)
}

/// Electrode width whose square area equals a disk of radius `d/√2`.
pub fn area_matched_electrode_width(d: f64) -> f64 {
    d * (PI / 2.0).sqrt()
}

/// Mass-spring picture: ions as capacitors `C1`, `C2` joined through `C`.
/// With `exact = false` the `C1, C2 ≪ C` approximation is used.
pub fn gamma_mass_spring(c1: f64, c2: f64, c: f64, ion: &IonSpecies, f: f64, exact: bool) -> f64 {
    let w = omega(f);
    let k = ion.mass() * w * w;
    if exact {
        k * (c1 * c2 / ((c1 + c) * (c2 + c))).sqrt()
    } else {
        k * (c1 * c2).sqrt() / c
    }
}

/// Ion capacitance between parallel plates `d_win` apart.
pub fn parallel_plate_ion_capacitance(ion: &IonSpecies, d_win: f64, f: f64, alpha: f64) -> f64 {
    let w = omega(f);
    alpha * alpha * ion.charge().powi(2) / (ion.mass() * d_win * d_win * w * w)
}

pub fn gamma_mass_spring_parallel_plate(ion: &IonSpecies, d_win: f64, f: f64, alpha: f64, c: f64) -> f64 {
    let c_ion = parallel_plate_ion_capacitance(ion, d_win, f, alpha);
    gamma_mass_spring(c_ion, c_ion, c, ion, f, false)
}

pub fn gamma_mass_spring_pickup_disk(q: f64, d: f64, r: f64, eta: f64, c: f64) -> f64 {
    eta * q * q * r * r / (2.0 * d * (r * r + d * d).powf(1.5) * c)
}

pub fn gamma_mass_spring_suspended_wire(q: f64, g: &SuspendedWireGeometry, c: f64) -> f64 {
    let h = g.ion_heights.0;
    2.0 * q * q / (g.log_term() * (g.wire_height.powi(2) - h * h) * c)
}

/// Direct Coulomb coupling at separation `l`.
pub fn gamma_coulomb(q1: f64, q2: f64, separation: f64) -> f64 {
    q1 * q2 / (2.0 * PI * EPSILON0 * separation.powi(3))
}

/// Largest ion separation at which direct Coulomb exchange beats `t_deco`.
pub fn l_coul_bound(t_deco: f64, q1: f64, q2: f64, ion: &IonSpecies, f: f64) -> f64 {
    (t_deco * q1 * q2 / (2.0 * PI * PI * EPSILON0 * ion.mass() * omega(f))).cbrt()
}

/// Ion separation beyond which the wire coupling exceeds `factor` times the
/// Coulomb coupling, for disks of radius `d/√2`.
pub fn dominance_cutoff(d: f64, wire_length: f64, wire_radius: f64, factor: f64) -> Result<f64> {
    let cb = crate::capnet::wire_capacitance(wire_length, wire_radius)?;
    let q = ELEMENTARY_CHARGE;
    let g = gamma_symmetric(q, d, d / 2f64.sqrt(), cb);
    Ok((factor * q * q / (2.0 * PI * EPSILON0 * g)).cbrt())
}

/// `(l_wire, cutoff)` pairs over the given wire lengths.
pub fn min_wire_for_dominance(d: f64, wire_radius: f64, factor: f64, wire_lengths: &[f64]) -> Result<Vec<(f64, f64)>> {
    wire_lengths
        .iter()
        .map(|&l| dominance_cutoff(d, l, wire_radius, factor).map(|c| (l, c)))
        .collect()
}

/// Log-log slope of a coupling formula over `[lo, hi]`.
pub fn asymptotic_exponent<F: Fn(f64) -> f64>(formula: F, lo: f64, hi: f64) -> Result<f64> {
    numerics::log_slope(formula, lo, hi, 61)
}

/// One row of the system comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub system: &'static str,
    pub gamma: f64,
    pub exchange_time: f64,
    /// Parameters not given with the original formula were filled in.
    pub reconstructed: bool,
    pub note: &'static str,
}

/// Coupling of all seven systems at the configured operating point.
///
/// Every comparison system shares the pickup-disk total capacitance.
pub fn comparison_table(ion: &IonSpecies, trap: &TrapEnvironment, geom: &CouplerGeometry) -> Result<Vec<ComparisonRow>> {
    let q = ion.charge();
    let d = trap.ion_distance();
    let f = trap.secular_frequency();
    let caps = geom.capacitances();
    let c_total = caps.total();
    let wire = SuspendedWireGeometry::reconstructed(d)?;
    let rows = [
        (
            "pickup-disk",
            gamma_pickup_disk(q, d, d, geom.disk1_radius(), geom.disk2_radius(), &caps),
            false,
            "",
        ),
        (
            "suspended-wire",
            gamma_suspended_wire(&wire, q),
            true,
            "wire height 2d, ion height d, radius 15.5 um, length 1 cm",
        ),
        (
            "transmission-line",
            gamma_transmission_line(d, d, c_total, q),
            true,
            "r = d",
        ),
        (
            "rectangular-electrodes",
            gamma_rect_electrodes(area_matched_electrode_width(d), d, c_total, q),
            true,
            "electrode area matched to a disk of radius d/sqrt2",
        ),
        (
            "mass-spring-parallel-plate",
            gamma_mass_spring_parallel_plate(ion, 2.0 * d, f, 1.0, c_total),
            false,
            "plate spacing 2d, alpha = 1",
        ),
        (
            "mass-spring-pickup-disk",
            gamma_mass_spring_pickup_disk(q, d, geom.disk1_radius(), caps.eta(), c_total),
            true,
            "reconstructed geometry falls about 17x below the reference value",
        ),
        (
            "mass-spring-suspended-wire",
            gamma_mass_spring_suspended_wire(q, &wire, c_total),
            true,
            "wire height 2d, ion height d, radius 15.5 um",
        ),
    ];
    rows.into_iter()
        .map(|(system, gamma, reconstructed, note)| {
            Ok(ComparisonRow {
                system,
                gamma,
                exchange_time: exchange_time(gamma, ion, f)?,
                reconstructed,
                note,
            })
        })
        .collect()
}
