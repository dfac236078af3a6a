//! Robust path-following orbit keeping around small bodies.
//!
//! The crate is organised bottom-up:
//!
//! * [`shape`] parses triangulated shape models and computes mass properties.
//! * [`gravity`] evaluates point-mass, polyhedron and spherical-harmonics fields.
//! * [`frames`] holds state vectors, RTN bases and orbital-element conversions.
//! * [`control`] is the sliding-mode path-following law and its actuation layer
//!   (saturation, hysteresis switch, thrust clamp, PWPF modulation).
//! * [`sim`] runs the closed loop: perturbed plant, navigation noise, onboard
//!   propagation, thruster errors and delta-v accounting.
//! * [`scenario`] loads scenario files, provides the built-in presets, and runs
//!   event sequencers, parametric sweeps and Monte Carlo batches.

// `!(x > 0.0)` style checks deliberately reject NaN; index loops mirror the
// recurrences they implement.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod control;
pub mod frames;
pub mod gravity;
pub mod scenario;
pub mod shape;
pub mod sim;
pub mod units;

pub use nalgebra::{Matrix3, Vector3};

/// Newtonian constant of gravitation, m³/(kg·s²). Scenarios may override it.
pub const GRAVITATIONAL_CONSTANT: f64 = 6.6743e-11;

/// Astronomical unit in metres.
pub const ASTRONOMICAL_UNIT: f64 = 1.495_978_707e11;
