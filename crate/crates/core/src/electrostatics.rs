//! Point charge above a grounded plane: image potential, induced surface
//! charge, the charge swept into a disk by ion motion, and the edge-charge
//! estimate for finite-thickness disks.

use std::f64::consts::PI;

use crate::error::{invalid, require_positive, Error, Result};
use crate::model::{IonSpecies, EPSILON0, HBAR};
use crate::numerics;

/// Motion amplitudes above this fraction of the ion height break the
/// small-displacement expansion.
pub const LINEARIZATION_LIMIT: f64 = 0.01;

/// A charge `q` at height `d` above the plane `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChargeAbovePlane {
    charge: f64,
    height: f64,
}

impl ChargeAbovePlane {
    pub fn new(charge: f64, height: f64) -> Result<Self> {
        if !charge.is_finite() {
            return Err(invalid("charge", "finite"));
        }
        require_positive("height", height)?;
        Ok(Self { charge, height })
    }

    pub(crate) fn unchecked(charge: f64, height: f64) -> Self {
        Self { charge, height }
    }
    pub fn charge(&self) -> f64 {
        self.charge
    }
    pub fn height(&self) -> f64 {
        self.height
    }
}

/// Polar point on the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfacePoint {
    radial: f64,
    azimuth: f64,
}

impl SurfacePoint {
    pub fn new(radial: f64, azimuth: f64) -> Result<Self> {
        if !(radial.is_finite() && radial >= 0.0) {
            return Err(invalid("radial", ">= 0"));
        }
        Ok(Self { radial, azimuth })
    }
    pub fn radial(&self) -> f64 {
        self.radial
    }
    pub fn azimuth(&self) -> f64 {
        self.azimuth
    }
}

/// Potential of the charge plus its image at `(x, y, z)`, `z ≥ 0`.
pub fn image_potential(cfg: ChargeAbovePlane, x: f64, y: f64, z: f64) -> Result<f64> {
    if z < 0.0 {
        return Err(invalid("z", ">= 0 (field below the plane is undefined)"));
    }
    let d = cfg.height;
    let rho2 = x * x + y * y;
    let direct = (rho2 + (z - d).powi(2)).sqrt();
    let image = (rho2 + (z + d).powi(2)).sqrt();
    Ok(cfg.charge / (4.0 * PI * EPSILON0) * (1.0 / direct - 1.0 / image))
}

/// Induced surface charge density at radius `r`.
pub fn surface_charge_density(cfg: ChargeAbovePlane, r: f64) -> f64 {
    let d = cfg.height;
    -cfg.charge * d / (2.0 * PI * (r * r + d * d).powf(1.5))
}

/// `∂σ/∂d` at radius `r`.
pub fn dsigma_dheight(cfg: ChargeAbovePlane, r: f64) -> f64 {
    let d = cfg.height;
    let a = -cfg.charge / (2.0 * PI);
    a * (r * r - 2.0 * d * d) / (r * r + d * d).powf(2.5)
}

/// Radius where the charge density does not change with height: `√2·d`.
pub fn zero_variation_radius(d: f64) -> f64 {
    2f64.sqrt() * d
}

/// Radii of extremal `|∂σ/∂d|`: the axis and `2d`.
pub fn extremal_radii(d: f64) -> (f64, f64) {
    (0.0, 2.0 * d)
}

/// Ground-state position spread `√(ħ/2mω)`.
pub fn zero_point_amplitude(ion: &IonSpecies, f: f64) -> f64 {
    (HBAR / (2.0 * ion.mass() * 2.0 * PI * f)).sqrt()
}

/// True when `amplitude` is small enough for the linear induced-charge model.
pub fn linearization_valid(d: f64, amplitude: f64) -> bool {
    amplitude.abs() <= LINEARIZATION_LIMIT * d
}

/// Charge moved into a disk of radius `r` when the ion oscillates by
/// `±amplitude` about height `d`, to first order in the amplitude.
pub fn induced_charge_linear(cfg: ChargeAbovePlane, r: f64, amplitude: f64) -> f64 {
    let d = cfg.height;
    2.0 * cfg.charge * r * r * amplitude / (r * r + d * d).powf(1.5)
}

/// Exact charge induced inside radius `r`: `qd/√(r²+d²) − q`.
pub fn induced_charge_exact(cfg: ChargeAbovePlane, r: f64) -> f64 {
    let d = cfg.height;
    cfg.charge * d / (r * r + d * d).sqrt() - cfg.charge
}

/// `∂Q/∂d` of the exact enclosed charge.
pub fn induced_charge_exact_dheight(cfg: ChargeAbovePlane, r: f64) -> f64 {
    let d = cfg.height;
    cfg.charge * r * r / (r * r + d * d).powf(1.5)
}

/// Total induced charge on the plane by quadrature (expected `−q`).
pub fn plane_induced_charge(cfg: ChargeAbovePlane) -> Result<f64> {
    let d = cfg.height;
    // u = r² turns 2πr dr into π du; the integrand then decays as u^{-3/2}.
    let g = |u: f64| PI * surface_charge_density(cfg, u.max(0.0).sqrt());
    let abs_tol = 1e-9 * cfg.charge.abs();
    numerics::integrate_to_infinity(g, 0.0, d * d, abs_tol, 1e-10).map(|q| q.value)
}

/// Charge inside radius `r` by quadrature of the density.
pub fn disk_induced_charge(cfg: ChargeAbovePlane, r: f64) -> Result<f64> {
    let g = |s: f64| 2.0 * PI * s * surface_charge_density(cfg, s);
    numerics::integrate(g, 0.0, r, 1e-14 * cfg.charge.abs(), 1e-12).map(|q| q.value)
}

/// Mean and peak current of a charge `q_transf` moved twice per period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InducedCurrent {
    pub average: f64,
    pub peak: f64,
}

pub fn average_induced_current(q_transf: f64, f: f64) -> InducedCurrent {
    let average = 2.0 * f * q_transf;
    InducedCurrent {
        average,
        peak: PI / 2.0 * average,
    }
}

/// On-axis field of a ring of charge `q` and radius `ring_radius` at height `z`.
pub fn ring_axial_field(q: f64, ring_radius: f64, z: f64) -> f64 {
    q * z / (4.0 * PI * EPSILON0 * (z * z + ring_radius * ring_radius).powf(1.5))
}

/// Which approximation produced an edge-charge fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeBranch {
    /// Annulus within the rounded edge: corner density `K/s^{1/3}`.
    Corner,
    /// Annulus wider than the edge: complement of the thin-disk central charge.
    ThinDisk,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeCharge {
    pub fraction: f64,
    pub branch: EdgeBranch,
}

/// Fraction of a charged disk's charge in its outer annulus of width `annulus`.
///
/// The disk has radius `a` and a rounded edge of radius `b` (half the
/// thickness). The flat-face density `1/√(a²−s²)` is matched to the corner
/// density at `s₀ = √(a²−(a−b)²)`.
pub fn edge_charge_fraction(disk_radius: f64, half_thickness: f64, annulus: f64) -> Result<EdgeCharge> {
    let a = require_positive("disk_radius", disk_radius)?;
    let b = require_positive("half_thickness", half_thickness)?;
    let xi = require_positive("annulus", annulus)?;
    if b >= a {
        return Err(invalid("half_thickness", "< disk_radius"));
    }
    if xi > a {
        return Err(invalid("annulus", "<= disk_radius"));
    }
    let s0 = (a * a - (a - b).powi(2)).sqrt();
    // Total charge in units of the face-density prefactor: the corner holds
    // 3b/s0 and the flat face 1 − s0/a.
    let total = 3.0 * b / s0 + 1.0 - s0 / a;
    if xi <= b {
        let corner = 3.0 * b / (2.0 * s0);
        let face = 3.0 * b.cbrt() * xi.powf(2.0 / 3.0) / (2.0 * s0);
        let fraction = (corner + face) / total;
        check_fraction(fraction, EdgeBranch::Corner)
    } else if xi >= 2.0 * b {
        let inner = 1.0 - (a * a - (a - xi).powi(2)).sqrt() / a;
        let fraction = 1.0 - inner / total;
        check_fraction(fraction, EdgeBranch::ThinDisk)
    } else {
        Err(Error::Validity {
            model: "edge charge",
            reason: format!(
                "annulus {xi:.3e} m lies between the corner branch (<= {b:.3e}) and the thin-disk branch (>= {:.3e})",
                2.0 * b
            ),
        })
    }
}

fn check_fraction(fraction: f64, branch: EdgeBranch) -> Result<EdgeCharge> {
    if (0.0..=1.0).contains(&fraction) {
        Ok(EdgeCharge { fraction, branch })
    } else {
        Err(Error::Validity {
            model: "edge charge",
            reason: format!("{branch:?} branch produced fraction {fraction:.4}"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ELEMENTARY_CHARGE as E;

    fn cfg() -> ChargeAbovePlane {
        ChargeAbovePlane::new(E, 50e-6).unwrap()
    }

    #[test]
    fn potential_vanishes_on_plane() {
        assert_eq!(image_potential(cfg(), 3e-6, -7e-5, 0.0).unwrap(), 0.0);
        assert!(image_potential(cfg(), 0.0, 0.0, -1e-9).is_err());
    }

    #[test]
    fn density_on_axis() {
        let s = surface_charge_density(cfg(), 0.0);
        assert!((s + 1.019e-11).abs() / 1.019e-11 < 1e-3, "{s:e}");
    }

    #[test]
    fn variation_ratio_two_d() {
        let c = cfg();
        let ratio = (dsigma_dheight(c, 100e-6) / dsigma_dheight(c, 0.0)).abs();
        assert!((ratio - 5f64.powf(-2.5)).abs() < 1e-12);
        assert!(dsigma_dheight(c, zero_variation_radius(50e-6)).abs() < 1e-20);
    }

    #[test]
    fn be9_zero_point() {
        let b = zero_point_amplitude(&IonSpecies::beryllium9(), 5e6);
        assert!((b - 1.06e-8).abs() / 1.06e-8 < 0.01, "{b:e}");
    }

    #[test]
    fn current_from_transferred_charge() {
        let i = average_induced_current(2.6e-23, 5e6);
        assert!((i.average - 2.6e-16).abs() < 1e-28);
        assert!((i.peak / i.average - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn edge_fractions() {
        let f = edge_charge_fraction(35e-6, 17.5e-6, 35e-6 / 4.0).unwrap();
        assert_eq!(f.branch, EdgeBranch::Corner);
        assert!((f.fraction - 0.76).abs() < 0.005);
        let f = edge_charge_fraction(140e-6, 50e-9, 35e-6).unwrap();
        assert_eq!(f.branch, EdgeBranch::ThinDisk);
        assert!((f.fraction - 0.67).abs() < 0.005);
        let f = edge_charge_fraction(140e-6, 50e-9, 70e-6).unwrap();
        assert!((f.fraction - 0.87).abs() < 0.01);
        assert!(edge_charge_fraction(140e-6, 1e-6, 1.5e-6).is_err());
    }
}
