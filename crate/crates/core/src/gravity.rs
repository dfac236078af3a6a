//! Gravitational acceleration models, all evaluated in the body-fixed frame.

use std::sync::Arc;

use nalgebra::Vector3;
use thiserror::Error;

pub mod checks;
mod harmonics;
mod polyhedron;

pub use harmonics::{harmonics_from_polyhedron, parse_coefficients, HarmonicsModel, MAX_DEGREE};
pub use polyhedron::{polyhedron_accel, polyhedron_laplacian, PolyhedronGravity, PolyhedronSample};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GravityError {
    #[error("field point is at the origin")]
    ZeroRadius,
    #[error("field point lies on polyhedron edge {0}")]
    OnEdge(usize),
    #[error("field point lies on polyhedron face {0}")]
    OnFace(usize),
    #[error("degree {requested} exceeds the supported maximum {max}")]
    DegreeTooHigh { requested: usize, max: usize },
    #[error("invalid gravity model: {0}")]
    InvalidModel(String),
    #[error("coefficient file line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `-μ r / |r|³`.
pub fn point_mass_accel(mu: f64, r: &Vector3<f64>) -> Result<Vector3<f64>, GravityError> {
    let rn = r.norm();
    if rn == 0.0 {
        return Err(GravityError::ZeroRadius);
    }
    Ok(-r * (mu / (rn * rn * rn)))
}

pub fn point_mass_potential(mu: f64, r: &Vector3<f64>) -> Result<f64, GravityError> {
    let rn = r.norm();
    if rn == 0.0 {
        return Err(GravityError::ZeroRadius);
    }
    Ok(mu / rn)
}

/// Acceleration plus the polyhedron's interior flag (always false for the
/// other variants, which have no surface).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub accel: Vector3<f64>,
    pub interior: bool,
}

#[derive(Debug, Clone)]
pub enum GravityField {
    PointMass { mu: f64 },
    Polyhedron(Arc<PolyhedronGravity>),
    Harmonics(Arc<HarmonicsModel>),
}

impl GravityField {
    pub fn mu(&self) -> f64 {
        match self {
            GravityField::PointMass { mu } => *mu,
            GravityField::Polyhedron(p) => p.mu(),
            GravityField::Harmonics(h) => h.mu(),
        }
    }

    pub fn is_point_mass(&self) -> bool {
        matches!(self, GravityField::PointMass { .. })
    }

    pub fn accel(&self, r: &Vector3<f64>) -> Result<FieldSample, GravityError> {
        match self {
            GravityField::PointMass { mu } => Ok(FieldSample {
                accel: point_mass_accel(*mu, r)?,
                interior: false,
            }),
            GravityField::Polyhedron(p) => {
                let s = p.evaluate(r)?;
                Ok(FieldSample {
                    accel: s.accel,
                    interior: s.interior,
                })
            }
            GravityField::Harmonics(h) => Ok(FieldSample {
                accel: h.accel(r)?,
                interior: false,
            }),
        }
    }

    /// Gravitational potential (positive convention, `g = ∇U`).
    pub fn potential(&self, r: &Vector3<f64>) -> Result<f64, GravityError> {
        match self {
            GravityField::PointMass { mu } => point_mass_potential(*mu, r),
            GravityField::Polyhedron(p) => Ok(p.evaluate(r)?.potential),
            GravityField::Harmonics(h) => h.potential(r),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn point_mass_examples() {
        assert_eq!(point_mass_accel(1.0, &Vector3::x()).unwrap(), -Vector3::x());
        assert_eq!(
            point_mass_accel(8.0, &Vector3::new(0.0, 0.0, 2.0)).unwrap(),
            Vector3::new(0.0, 0.0, -2.0)
        );
        assert_eq!(point_mass_accel(1.0, &Vector3::zeros()), Err(GravityError::ZeroRadius));
    }

    #[test]
    fn bennu_point_mass_magnitude() {
        let mu = crate::GRAVITATIONAL_CONSTANT * 7.329e10;
        let g = point_mass_accel(mu, &Vector3::new(450.0, 0.0, 0.0)).unwrap();
        // μ/450² with G = 6.6743e-11
        assert_relative_eq!(g.norm(), 2.4157e-5, max_relative = 1e-4);
    }
}
