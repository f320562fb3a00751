//! Feasibility toolkit for coupling the motion of two trapped ions through a
//! conducting wire.
//!
//! All quantities are SI `f64`. Domain types live in [`model`]; the physics
//! modules are plain functions over those types.

// `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod capnet;
pub mod coupling;
pub mod electrostatics;
pub mod error;
pub mod exchange_sim;
pub mod feasibility;
pub mod heating;
pub mod model;
pub mod noise;
pub mod numerics;

pub use capnet::{CapacitanceTriple, ChargeSplit};
pub use coupling::CouplingResult;
pub use electrostatics::{ChargeAbovePlane, SurfacePoint};
pub use error::{Error, Result};
pub use exchange_sim::{CoupledOscillatorSystem, ExchangeTrace};
pub use feasibility::{FeasibilityMap, FeasibilityPoint, GridSpec};
pub use heating::{HeatingMeasurement, HeatingReport};
pub use model::{
    default_constants, load_config, Config, CouplerGeometry, DiskRadiusRule, FeasibilityCriteria,
    HeatingModel, IonSpecies, PhysicalConstants, TrapEnvironment,
};
pub use noise::{Amplitude, SignalNoiseBudget};
