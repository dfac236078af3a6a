//! Perturbed plant, navigation model and the closed control loop.

use std::sync::Arc;

use nalgebra::{Rotation3, Vector3};
use thiserror::Error;

use crate::control::ControlError;
use crate::frames::{Frame, FrameError, StateVector};
use crate::gravity::{polyhedron_laplacian, GravityError, GravityField};
use crate::shape::PolyhedronShape;
use crate::ASTRONOMICAL_UNIT;

mod closed_loop;
pub mod events;
pub mod noise;
pub mod telemetry;

pub use closed_loop::{
    run_closed_loop, ElementErrors, IdleStats, RunInput, RunOutput, RunSummary, SimSettings, TerminalEvent,
};
pub use events::{Alignment, EventScript, ScriptState, TargetStage, Trigger, ZSignRule};
pub use noise::{apply_thruster_error, measure, stream_rng, NoiseConfig, NoiseStreams};
pub use telemetry::{write_csv, TelemetryRecord, CSV_COLUMNS};

/// Solar pressure constant, kg·km/(s²·m²).
pub const SOLAR_PRESSURE_CONSTANT: f64 = 1e8;

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Gravity(#[from] GravityError),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error("invalid simulation setup: {0}")]
    InvalidConfig(String),
}

/// Cannonball solar radiation pressure parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SrpConfig {
    /// ρ in [0, 2].
    pub reflectivity: f64,
    /// B, kg/m².
    pub mass_to_area: f64,
    /// Sun distance S, m.
    pub sun_distance: f64,
}

impl SrpConfig {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(0.0..=2.0).contains(&self.reflectivity) || !(self.mass_to_area > 0.0) || !(self.sun_distance > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "SRP needs ρ in [0, 2], B > 0, S > 0 (got ρ = {}, B = {}, S = {})",
                self.reflectivity, self.mass_to_area, self.sun_distance
            )));
        }
        Ok(())
    }

    /// `(1 + ρ) P₀ / (B S²)` in m/s².
    pub fn magnitude(&self) -> f64 {
        let s_km = self.sun_distance / 1e3;
        (1.0 + self.reflectivity) * SOLAR_PRESSURE_CONSTANT / (self.mass_to_area * s_km * s_km) * 1e3
    }

    pub fn from_au(reflectivity: f64, mass_to_area: f64, sun_distance_au: f64) -> Self {
        Self {
            reflectivity,
            mass_to_area,
            sun_distance: sun_distance_au * ASTRONOMICAL_UNIT,
        }
    }
}

/// What counts as hitting the body.
#[derive(Debug, Clone)]
pub enum Surface {
    None,
    Sphere(f64),
    Polyhedron { shape: Arc<PolyhedronShape>, radius: f64 },
}

impl Surface {
    pub fn polyhedron(shape: Arc<PolyhedronShape>) -> Self {
        let radius = shape.circumscribing_radius();
        Surface::Polyhedron { shape, radius }
    }

    /// `r_body` is a body-fixed position.
    pub fn contains(&self, r_body: &Vector3<f64>) -> bool {
        match self {
            Surface::None => false,
            Surface::Sphere(radius) => r_body.norm() < *radius,
            Surface::Polyhedron { shape, radius } => {
                if r_body.norm() >= *radius {
                    return false;
                }
                // on-surface errors count as contact
                polyhedron_laplacian(shape, r_body).map_or(true, |l| l < -2.0 * std::f64::consts::PI)
            }
        }
    }
}

/// Everything the truth model needs.
#[derive(Debug, Clone)]
pub struct Environment {
    pub field: GravityField,
    /// ν, rad/s about +Z.
    pub spin_rate: f64,
    pub srp: Option<SrpConfig>,
    pub frame: Frame,
    pub surface: Surface,
}

impl Environment {
    pub fn point_mass(mu: f64, frame: Frame) -> Self {
        Self {
            field: GravityField::PointMass { mu },
            spin_rate: 0.0,
            srp: None,
            frame,
            surface: Surface::None,
        }
    }

    pub fn mu(&self) -> f64 {
        self.field.mu()
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.mu() > 0.0) {
            return Err(SimError::InvalidConfig("μ must be positive".into()));
        }
        if !self.spin_rate.is_finite() {
            return Err(SimError::InvalidConfig("spin rate must be finite".into()));
        }
        if let Some(srp) = &self.srp {
            srp.validate()?;
        }
        Ok(())
    }

    /// Rotation taking simulation-frame vectors to body-fixed axes at `t`.
    fn to_body(&self, t: f64) -> Rotation3<f64> {
        match self.frame {
            Frame::BodyFixed => Rotation3::identity(),
            Frame::Inertial => Rotation3::from_axis_angle(&Vector3::z_axis(), -self.spin_rate * t),
        }
    }

    pub fn body_position(&self, r: &Vector3<f64>, t: f64) -> Vector3<f64> {
        self.to_body(t) * r
    }

    pub fn inside_body(&self, r: &Vector3<f64>, t: f64) -> bool {
        self.surface.contains(&self.body_position(r, t))
    }
}

/// SRP acceleration in the simulation frame; the sun sits on −X inertially.
pub fn srp_accel(env: &Environment, t: f64) -> Vector3<f64> {
    let Some(srp) = &env.srp else {
        return Vector3::zeros();
    };
    let dir = match env.frame {
        Frame::Inertial => Vector3::x(),
        Frame::BodyFixed => {
            let (s, c) = (env.spin_rate * t).sin_cos();
            Vector3::new(c, -s, 0.0)
        }
    };
    dir * srp.magnitude()
}

/// Centrifugal and Coriolis terms of a frame spinning at `spin_rate` about +Z.
pub fn rotating_frame_terms(state: &StateVector, spin_rate: f64) -> Result<Vector3<f64>, SimError> {
    state.expect_frame(Frame::BodyFixed)?;
    Ok(rotating_terms(&state.r, &state.v, spin_rate))
}

fn rotating_terms(r: &Vector3<f64>, v: &Vector3<f64>, nu: f64) -> Vector3<f64> {
    Vector3::new(2.0 * nu * v.y + nu * nu * r.x, -2.0 * nu * v.x + nu * nu * r.y, 0.0)
}

/// Full field acceleration in the simulation frame at `r`, time `t`.
pub fn gravity_accel(env: &Environment, r: &Vector3<f64>, t: f64) -> Result<Vector3<f64>, SimError> {
    if let GravityField::PointMass { mu } = env.field {
        return Ok(crate::gravity::point_mass_accel(mu, r)?);
    }
    let to_body = env.to_body(t);
    let g_body = env.field.accel(&(to_body * r))?.accel;
    Ok(to_body.inverse() * g_body)
}

/// Full field minus the central term.
pub fn higher_order_disturbance(env: &Environment, r: &Vector3<f64>, t: f64) -> Result<Vector3<f64>, SimError> {
    if env.field.is_point_mass() {
        return Ok(Vector3::zeros());
    }
    let central = crate::gravity::point_mass_accel(env.mu(), r)?;
    Ok(gravity_accel(env, r, t)? - central)
}

/// `(ṙ, v̇)` of the true dynamics with `u` applied.
pub fn eom_rhs(
    env: &Environment,
    r: &Vector3<f64>,
    v: &Vector3<f64>,
    u: &Vector3<f64>,
    t: f64,
) -> Result<(Vector3<f64>, Vector3<f64>), SimError> {
    let mut a = gravity_accel(env, r, t)? + srp_accel(env, t) + u;
    if env.frame == Frame::BodyFixed {
        a += rotating_terms(r, v, env.spin_rate);
    }
    Ok((*v, a))
}

type Rhs<'a> = dyn Fn(&Vector3<f64>, &Vector3<f64>, f64) -> Result<(Vector3<f64>, Vector3<f64>), SimError> + 'a;

fn rk4(state: &StateVector, dt: f64, f: &Rhs<'_>) -> Result<StateVector, SimError> {
    let (r, v, t) = (state.r, state.v, state.t);
    let (k1r, k1v) = f(&r, &v, t)?;
    let (k2r, k2v) = f(&(r + k1r * (dt / 2.0)), &(v + k1v * (dt / 2.0)), t + dt / 2.0)?;
    let (k3r, k3v) = f(&(r + k2r * (dt / 2.0)), &(v + k2v * (dt / 2.0)), t + dt / 2.0)?;
    let (k4r, k4v) = f(&(r + k3r * dt), &(v + k3v * dt), t + dt)?;
    Ok(StateVector {
        r: r + (k1r + k2r * 2.0 + k3r * 2.0 + k4r) * (dt / 6.0),
        v: v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (dt / 6.0),
        t: t + dt,
        frame: state.frame,
    })
}

/// Classical RK4 step of the truth with `u` held over `dt`.
pub fn integrate_step(
    env: &Environment,
    state: &StateVector,
    u: &Vector3<f64>,
    dt: f64,
) -> Result<StateVector, SimError> {
    state.expect_frame(env.frame)?;
    rk4(state, dt, &|r, v, t| eom_rhs(env, r, v, u, t))
}

/// Onboard navigation propagation: central term plus the commanded control.
/// In a body-fixed simulation the frame's own rotation terms are kinematics,
/// not dynamics, so they are kept.
pub fn onboard_propagate(
    estimate: &StateVector,
    u_cmd: &Vector3<f64>,
    mu: f64,
    spin_rate: f64,
    dt: f64,
) -> Result<StateVector, SimError> {
    let body = estimate.frame == Frame::BodyFixed;
    rk4(estimate, dt, &|r, v, _| {
        let mut a = crate::gravity::point_mass_accel(mu, r)? + u_cmd;
        if body {
            a += rotating_terms(r, v, spin_rate);
        }
        Ok((*v, a))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::{state_from_geometry, OrbitGeometry};
    use approx::assert_relative_eq;

    #[test]
    fn srp_magnitudes() {
        let env = |s_au: f64| Environment {
            srp: Some(SrpConfig::from_au(1.0, 20.0, s_au)),
            ..Environment::point_mass(1.0, Frame::Inertial)
        };
        assert_relative_eq!(srp_accel(&env(1.695), 0.0).norm(), 1.55e-7, max_relative = 5e-3);
        assert_relative_eq!(srp_accel(&env(0.8969), 0.0).norm(), 5.55e-7, max_relative = 5e-3);
        let mut body = env(1.0);
        body.frame = Frame::BodyFixed;
        body.spin_rate = 1e-4;
        assert_relative_eq!(srp_accel(&body, 0.0).normalize(), Vector3::x(), epsilon = 1e-15);
    }

    #[test]
    fn rotating_terms_examples() {
        let nu = 4.0684e-4;
        let st = StateVector::new(Vector3::new(500.0, 0.0, 0.0), Vector3::zeros(), 0.0, Frame::BodyFixed).unwrap();
        let a = rotating_frame_terms(&st, nu).unwrap();
        assert_relative_eq!(a.x, 8.276e-5, max_relative = 1e-3);
        assert_eq!(rotating_frame_terms(&st, 0.0).unwrap(), Vector3::zeros());
        let moving = StateVector::new(Vector3::zeros(), Vector3::new(0.0, 0.1, 0.0), 0.0, Frame::BodyFixed).unwrap();
        assert_eq!(
            rotating_frame_terms(&moving, nu).unwrap(),
            Vector3::new(2.0 * nu * 0.1, 0.0, 0.0)
        );
        let inertial = StateVector {
            frame: Frame::Inertial,
            ..st
        };
        assert!(rotating_frame_terms(&inertial, nu).is_err());
    }

    #[test]
    fn circular_rhs_is_centripetal() {
        let mu = 4.89;
        let env = Environment::point_mass(mu, Frame::Inertial);
        let g = OrbitGeometry::circular(450.0, 0.7, 0.2).unwrap();
        let st = state_from_geometry(&g, 0.4, mu, Frame::Inertial, 0.0).unwrap();
        let (_, a) = eom_rhs(&env, &st.r, &st.v, &Vector3::zeros(), 0.0).unwrap();
        assert!(a.dot(&st.v).abs() < 1e-18);
        assert_relative_eq!(a.norm(), mu / 450.0f64.powi(2), max_relative = 1e-14);
        assert_eq!(higher_order_disturbance(&env, &st.r, 0.0).unwrap(), Vector3::zeros());
    }

    #[test]
    fn rk4_energy_over_one_orbit() {
        let mu = 4.89;
        let env = Environment::point_mass(mu, Frame::Inertial);
        let g = OrbitGeometry::new(450.0, 0.1, 0.7, 0.2, 1.0).unwrap();
        let mut st = state_from_geometry(&g, 0.0, mu, Frame::Inertial, 0.0).unwrap();
        let energy = |s: &StateVector| s.v.norm_squared() / 2.0 - mu / s.r.norm();
        let e0 = energy(&st);
        let period = std::f64::consts::TAU * (450.0f64.powi(3) / mu).sqrt();
        let n = (period / 4.0).ceil() as usize;
        for _ in 0..n {
            st = integrate_step(&env, &st, &Vector3::zeros(), 4.0).unwrap();
        }
        assert!(((energy(&st) - e0) / e0).abs() < 1e-9);
    }
}
