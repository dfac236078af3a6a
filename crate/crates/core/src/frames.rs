//! State vectors, RTN bases, rotating-frame transforms and conversions between
//! Cartesian states and the five geometric orbital elements.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Below this eccentricity the argument of periapsis is undefined and set to 0.
pub const CIRCULAR_TOLERANCE: f64 = 1e-8;
/// Below this `sin i` the node is undefined and Ω is set to 0.
pub const EQUATORIAL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error("position vector has zero length")]
    ZeroRadius,
    #[error("angular momentum is zero (velocity parallel to position)")]
    ZeroAngularMomentum,
    #[error("state has non-finite components")]
    NonFinite,
    #[error("frame mismatch: expected {expected}, found {found}")]
    FrameMismatch { expected: Frame, found: Frame },
    #[error("invalid orbit geometry: {0}")]
    InvalidGeometry(String),
    #[error("true anomaly {alpha} rad lies beyond the hyperbolic asymptote at ±{limit} rad")]
    BeyondAsymptote { alpha: f64, limit: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Frame {
    #[default]
    Inertial,
    BodyFixed,
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Frame::Inertial => f.write_str("inertial"),
            Frame::BodyFixed => f.write_str("body-fixed"),
        }
    }
}

/// Position (m) and velocity (m/s) at time `t` (s) in a tagged frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    pub r: Vector3<f64>,
    pub v: Vector3<f64>,
    pub t: f64,
    pub frame: Frame,
}

impl StateVector {
    pub fn new(r: Vector3<f64>, v: Vector3<f64>, t: f64, frame: Frame) -> Result<Self, FrameError> {
        let s = Self { r, v, t, frame };
        if !s.is_finite() {
            return Err(FrameError::NonFinite);
        }
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.r.iter().chain(self.v.iter()).all(|x| x.is_finite()) && self.t.is_finite()
    }

    /// Position and velocity differences `self - other`; both must share a frame.
    pub fn difference(&self, other: &StateVector) -> Result<(Vector3<f64>, Vector3<f64>), FrameError> {
        self.expect_frame(other.frame)?;
        Ok((self.r - other.r, self.v - other.v))
    }

    pub fn expect_frame(&self, frame: Frame) -> Result<(), FrameError> {
        if self.frame != frame {
            return Err(FrameError::FrameMismatch {
                expected: frame,
                found: self.frame,
            });
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.r.norm()
    }
}

/// Radial / transverse / normal unit vectors built from a state's kinematics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RtnBasis {
    pub r_hat: Vector3<f64>,
    pub theta_hat: Vector3<f64>,
    pub h_hat: Vector3<f64>,
}

impl RtnBasis {
    /// Rows are r̂ᵀ, θ̂ᵀ, ĥᵀ, so `m * a` gives RTN components.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_rows(&[
            self.r_hat.transpose(),
            self.theta_hat.transpose(),
            self.h_hat.transpose(),
        ])
    }

    pub fn to_rtn(&self, a: &Vector3<f64>) -> Vector3<f64> {
        to_rtn(a, self)
    }

    pub fn from_rtn(&self, a_rtn: &Vector3<f64>) -> Vector3<f64> {
        self.r_hat * a_rtn.x + self.theta_hat * a_rtn.y + self.h_hat * a_rtn.z
    }
}

pub fn rtn_basis(state: &StateVector) -> Result<RtnBasis, FrameError> {
    let r = state.r.norm();
    if r == 0.0 {
        return Err(FrameError::ZeroRadius);
    }
    let h = state.r.cross(&state.v);
    let hn = h.norm();
    if hn <= f64::EPSILON * r * state.v.norm() || hn == 0.0 {
        return Err(FrameError::ZeroAngularMomentum);
    }
    let r_hat = state.r / r;
    let h_hat = h / hn;
    let theta_hat = h_hat.cross(&r_hat);
    Ok(RtnBasis {
        r_hat,
        theta_hat,
        h_hat,
    })
}

pub fn to_rtn(a: &Vector3<f64>, basis: &RtnBasis) -> Vector3<f64> {
    Vector3::new(a.dot(&basis.r_hat), a.dot(&basis.theta_hat), a.dot(&basis.h_hat))
}

/// Unit angular-momentum direction of an orbit plane with inclination `i` and node `raan`.
pub fn hd_from_angles(i: f64, raan: f64) -> Vector3<f64> {
    Vector3::new(i.sin() * raan.sin(), -i.sin() * raan.cos(), i.cos())
}

/// Specific angular momentum vector and its magnitude.
pub fn angular_momentum(state: &StateVector) -> (Vector3<f64>, f64) {
    let h = state.r.cross(&state.v);
    let n = h.norm();
    (h, n)
}

/// `sqrt(μ a (1 - e²))`; zero for a parabola.
pub fn h_from_elements(mu: f64, a: f64, e: f64) -> Result<f64, FrameError> {
    if e == 1.0 {
        return Ok(0.0);
    }
    let p = a * (1.0 - e * e);
    if !(p >= 0.0) || !(mu > 0.0) {
        return Err(FrameError::InvalidGeometry(format!(
            "a(1-e²) = {p} must be non-negative (a = {a}, e = {e})"
        )));
    }
    Ok((mu * p).sqrt())
}

/// `(v × h)/μ - r̂`.
pub fn eccentricity_vector(state: &StateVector, mu: f64) -> Result<Vector3<f64>, FrameError> {
    let r = state.r.norm();
    if r == 0.0 {
        return Err(FrameError::ZeroRadius);
    }
    let h = state.r.cross(&state.v);
    Ok(state.v.cross(&h) / mu - state.r / r)
}

/// Unit vector towards periapsis for the given angles (the bracketed factor of
/// the eccentricity vector).
pub fn periapsis_direction(i: f64, raan: f64, argp: f64) -> Vector3<f64> {
    let (si, ci) = i.sin_cos();
    let (so, co) = raan.sin_cos();
    let (sw, cw) = argp.sin_cos();
    Vector3::new(co * cw - so * sw * ci, so * cw + co * sw * ci, sw * si)
}

/// Five geometric elements of a conic: a (m, negative for hyperbolae), e, i, Ω, ω (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitGeometry {
    #[serde(deserialize_with = "crate::units::length")]
    pub a: f64,
    #[serde(deserialize_with = "crate::units::scalar")]
    pub e: f64,
    #[serde(deserialize_with = "crate::units::angle")]
    pub i: f64,
    #[serde(deserialize_with = "crate::units::angle")]
    pub raan: f64,
    #[serde(deserialize_with = "crate::units::angle")]
    pub argp: f64,
}

impl OrbitGeometry {
    /// Validates and wraps the angles to their principal ranges.
    pub fn new(a: f64, e: f64, i: f64, raan: f64, argp: f64) -> Result<Self, FrameError> {
        let g = Self {
            a,
            e,
            i,
            raan: wrap_two_pi(raan),
            argp: wrap_two_pi(argp),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn circular(radius: f64, i: f64, raan: f64) -> Result<Self, FrameError> {
        Self::new(radius, 0.0, i, raan, 0.0)
    }

    /// Hyperbola (or ellipse) specified by periapsis radius instead of a.
    pub fn from_periapsis(rp: f64, e: f64, i: f64, raan: f64, argp: f64) -> Result<Self, FrameError> {
        if (e - 1.0).abs() < 1e-12 {
            return Err(FrameError::InvalidGeometry("parabolic orbits have no finite a".into()));
        }
        Self::new(rp / (1.0 - e), e, i, raan, argp)
    }

    pub fn validate(&self) -> Result<(), FrameError> {
        let bad = |m: String| Err(FrameError::InvalidGeometry(m));
        if ![self.a, self.e, self.i, self.raan, self.argp]
            .iter()
            .all(|x| x.is_finite())
        {
            return bad("non-finite element".into());
        }
        if self.e < 0.0 {
            return bad(format!("eccentricity {} is negative", self.e));
        }
        if (self.e - 1.0).abs() < 1e-12 {
            return bad("parabolic orbits have no finite a".into());
        }
        if self.e < 1.0 && self.a <= 0.0 {
            return bad(format!("bound orbit (e = {}) needs a > 0, got {}", self.e, self.a));
        }
        if self.e > 1.0 && self.a >= 0.0 {
            return bad(format!("hyperbola (e = {}) needs a < 0, got {}", self.e, self.a));
        }
        if !(0.0..=PI).contains(&self.i) {
            return bad(format!("inclination {} outside [0, π]", self.i));
        }
        if !(0.0..TAU).contains(&self.raan) || !(0.0..TAU).contains(&self.argp) {
            return bad("Ω and ω must lie in [0, 2π)".into());
        }
        if self.periapsis() <= 0.0 {
            return bad("periapsis radius must be positive".into());
        }
        Ok(())
    }

    pub fn periapsis(&self) -> f64 {
        self.a * (1.0 - self.e)
    }

    pub fn semi_latus_rectum(&self) -> f64 {
        self.a * (1.0 - self.e * self.e)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.e > 1.0
    }

    /// Radius on the conic at true anomaly `alpha`.
    pub fn radius_at(&self, alpha: f64) -> f64 {
        self.semi_latus_rectum() / (1.0 + self.e * alpha.cos())
    }

    pub fn h_hat(&self) -> Vector3<f64> {
        hd_from_angles(self.i, self.raan)
    }

    pub fn h(&self, mu: f64) -> f64 {
        (mu * self.semi_latus_rectum()).sqrt()
    }

    pub fn e_vector(&self) -> Vector3<f64> {
        periapsis_direction(self.i, self.raan, self.argp) * self.e
    }
}

/// Elements and true anomaly of a Cartesian state.
///
/// Conventions: `e < 1e-8` sets ω = 0 and measures the anomaly from the node;
/// `sin i < 1e-8` sets Ω = 0 and uses +X as the node direction.
pub fn geometry_from_state(state: &StateVector, mu: f64) -> Result<(OrbitGeometry, f64), FrameError> {
    let r = state.r.norm();
    if r == 0.0 {
        return Err(FrameError::ZeroRadius);
    }
    let (h_vec, h) = angular_momentum(state);
    if h == 0.0 {
        return Err(FrameError::ZeroAngularMomentum);
    }
    let h_hat = h_vec / h;
    let e_vec = eccentricity_vector(state, mu)?;
    let e = e_vec.norm();
    let p = h * h / mu;
    let a = p / (1.0 - e * e);
    let i = h_hat.z.clamp(-1.0, 1.0).acos();

    let node = Vector3::new(-h_hat.y, h_hat.x, 0.0);
    let node_norm = node.norm();
    let (raan, node_hat) = if node_norm < EQUATORIAL_TOLERANCE {
        (0.0, Vector3::x())
    } else {
        (wrap_two_pi(node.y.atan2(node.x)), node / node_norm)
    };
    let node_perp = h_hat.cross(&node_hat);
    let in_plane_angle = |w: &Vector3<f64>| wrap_two_pi(w.dot(&node_perp).atan2(w.dot(&node_hat)));

    let (argp, alpha) = if e < CIRCULAR_TOLERANCE {
        (0.0, in_plane_angle(&state.r))
    } else {
        let e_hat = e_vec / e;
        let e_perp = h_hat.cross(&e_hat);
        let alpha = wrap_two_pi(state.r.dot(&e_perp).atan2(state.r.dot(&e_hat)));
        (in_plane_angle(&e_vec), alpha)
    };

    let geometry = OrbitGeometry { a, e, i, raan, argp };
    Ok((geometry, alpha))
}

/// Cartesian state on the conic at true anomaly `alpha`.
pub fn state_from_geometry(
    geometry: &OrbitGeometry,
    alpha: f64,
    mu: f64,
    frame: Frame,
    t: f64,
) -> Result<StateVector, FrameError> {
    geometry.validate()?;
    if geometry.is_hyperbolic() {
        let limit = (-1.0 / geometry.e).acos();
        let wrapped = wrap_pi(alpha);
        if wrapped.abs() >= limit {
            return Err(FrameError::BeyondAsymptote { alpha, limit });
        }
    }
    let p_hat = periapsis_direction(geometry.i, geometry.raan, geometry.argp);
    let h_hat = geometry.h_hat();
    let q_hat = h_hat.cross(&p_hat);
    let p = geometry.semi_latus_rectum();
    let (sa, ca) = alpha.sin_cos();
    let radius = p / (1.0 + geometry.e * ca);
    let r = (p_hat * ca + q_hat * sa) * radius;
    let v = (-p_hat * sa + q_hat * (geometry.e + ca)) * (mu / p).sqrt();
    StateVector::new(r, v, t, frame)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RotationDirection {
    InertialToBody,
    BodyToInertial,
}

/// Transforms a state between the inertial frame and a body frame spinning at
/// `spin_rate` about +Z, coincident at t = 0.
pub fn rotate_frame(
    state: &StateVector,
    spin_rate: f64,
    direction: RotationDirection,
) -> Result<StateVector, FrameError> {
    let omega = Vector3::new(0.0, 0.0, spin_rate);
    match direction {
        RotationDirection::InertialToBody => {
            state.expect_frame(Frame::Inertial)?;
            let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), -spin_rate * state.t);
            let r = rot * state.r;
            let v = rot * (state.v - omega.cross(&state.r));
            Ok(StateVector {
                r,
                v,
                t: state.t,
                frame: Frame::BodyFixed,
            })
        }
        RotationDirection::BodyToInertial => {
            state.expect_frame(Frame::BodyFixed)?;
            let rot = Rotation3::from_axis_angle(&Vector3::z_axis(), spin_rate * state.t);
            let r = rot * state.r;
            let v = rot * (state.v + omega.cross(&state.r));
            Ok(StateVector {
                r,
                v,
                t: state.t,
                frame: Frame::Inertial,
            })
        }
    }
}

/// Converts `state` into `frame` (no-op when it is already there).
pub fn to_frame(state: &StateVector, spin_rate: f64, frame: Frame) -> StateVector {
    match (state.frame, frame) {
        (Frame::Inertial, Frame::BodyFixed) => {
            rotate_frame(state, spin_rate, RotationDirection::InertialToBody).expect("frame checked")
        }
        (Frame::BodyFixed, Frame::Inertial) => {
            rotate_frame(state, spin_rate, RotationDirection::BodyToInertial).expect("frame checked")
        }
        _ => *state,
    }
}

pub fn wrap_two_pi(x: f64) -> f64 {
    let w = x.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Wraps to (-π, π].
pub fn wrap_pi(x: f64) -> f64 {
    let w = wrap_two_pi(x);
    if w > PI {
        w - TAU
    } else {
        w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn st(r: [f64; 3], v: [f64; 3]) -> StateVector {
        StateVector::new(Vector3::from(r), Vector3::from(v), 0.0, Frame::Inertial).unwrap()
    }

    #[test]
    fn rtn_basis_examples() {
        let b = rtn_basis(&st([1.0, 0.0, 0.0], [0.0, 1.0, 0.0])).unwrap();
        assert_eq!(b.r_hat, Vector3::x());
        assert_eq!(b.theta_hat, Vector3::y());
        assert_eq!(b.h_hat, Vector3::z());

        let b = rtn_basis(&st([0.0, 2.0, 0.0], [0.0, 0.0, 3.0])).unwrap();
        assert_relative_eq!(b.h_hat, Vector3::x(), epsilon = 1e-15);
        assert_relative_eq!(b.theta_hat, Vector3::z(), epsilon = 1e-15);

        assert_eq!(
            rtn_basis(&st([1.0, 1.0, 0.0], [2.0, 2.0, 0.0])),
            Err(FrameError::ZeroAngularMomentum)
        );
        assert_eq!(rtn_basis(&st([0.0; 3], [1.0, 0.0, 0.0])), Err(FrameError::ZeroRadius));
    }

    #[test]
    fn to_rtn_examples() {
        let b = rtn_basis(&st([3.0, -1.0, 2.0], [0.3, 0.5, -0.1])).unwrap();
        assert_relative_eq!(b.to_rtn(&b.r_hat), Vector3::x(), epsilon = 1e-15);
        let a = Vector3::new(0.2, -7.0, 1.5);
        assert_relative_eq!(b.from_rtn(&b.to_rtn(&a)), a, epsilon = 1e-14);

        let identity = RtnBasis {
            r_hat: Vector3::x(),
            theta_hat: Vector3::y(),
            h_hat: Vector3::z(),
        };
        assert_eq!(
            to_rtn(&Vector3::new(1.0, 1.0, 1.0), &identity),
            Vector3::new(1.0, 1.0, 1.0)
        );
    }

    #[test]
    fn hd_from_angles_examples() {
        let d = PI / 180.0;
        assert_relative_eq!(hd_from_angles(90.0 * d, 90.0 * d), Vector3::x(), epsilon = 1e-15);
        assert_relative_eq!(hd_from_angles(0.0, 1.234), Vector3::z(), epsilon = 1e-15);
        assert_relative_eq!(
            hd_from_angles(45.0 * d, 45.0 * d),
            Vector3::new(0.5, -0.5, 2f64.sqrt() / 2.0),
            epsilon = 1e-15
        );
    }

    #[test]
    fn h_from_elements_examples() {
        assert_eq!(h_from_elements(1.0, 1.0, 0.0).unwrap(), 1.0);
        assert_eq!(h_from_elements(1.0, 5.0, 1.0).unwrap(), 0.0);
        assert!(h_from_elements(1.0, 1.0, 2.0).is_err());
        assert!(h_from_elements(1.0, -1.0, 2.0).is_ok());
    }

    #[test]
    fn circular_eccentricity_vector_is_zero() {
        let (mu, r) = (4.89, 450.0);
        let s = st([r, 0.0, 0.0], [0.0, (mu / r).sqrt(), 0.0]);
        assert!(eccentricity_vector(&s, mu).unwrap().norm() < 1e-12);
    }

    #[test]
    fn eccentricity_vector_closed_form_round_trip() {
        let d = PI / 180.0;
        let mu = 4.89;
        let g = OrbitGeometry::new(500.0, 0.1, 90.0 * d, 90.0 * d, 90.0 * d).unwrap();
        // closed form: e (cosΩcosω − sinΩ sinω cos i, sinΩ cosω + cosΩ sinω cos i, sinω sin i)
        let (i, o, w) = (90.0 * d, 90.0 * d, 90.0 * d);
        let closed = Vector3::new(
            o.cos() * w.cos() - o.sin() * w.sin() * i.cos(),
            o.sin() * w.cos() + o.cos() * w.sin() * i.cos(),
            w.sin() * i.sin(),
        ) * 0.1;
        for alpha in [0.0, 1.0, 2.5, 4.0] {
            let s = state_from_geometry(&g, alpha, mu, Frame::Inertial, 0.0).unwrap();
            assert_relative_eq!(eccentricity_vector(&s, mu).unwrap(), closed, epsilon = 1e-10);
        }
    }

    #[test]
    fn equatorial_circular_convention() {
        let mu = 2.0;
        let s = st([0.0, 10.0, 0.0], [-(mu / 10.0f64).sqrt(), 0.0, 0.0]);
        let (g, alpha) = geometry_from_state(&s, mu).unwrap();
        assert!(g.e < 1e-12);
        assert_eq!(g.i, 0.0);
        assert_eq!(g.raan, 0.0);
        assert_eq!(g.argp, 0.0);
        assert_relative_eq!(alpha, PI / 2.0, epsilon = 1e-12);
        assert_relative_eq!(g.a, 10.0, epsilon = 1e-10);
    }

    #[test]
    fn hyperbolic_state_has_negative_a() {
        let mu: f64 = 4.89;
        let r = 400.0;
        let v_esc = (2.0 * mu / r).sqrt();
        let s = st([r, 0.0, 0.0], [0.0, 1.2 * v_esc, 0.1 * v_esc]);
        let (g, _) = geometry_from_state(&s, mu).unwrap();
        assert!(g.e > 1.0);
        assert!(g.a < 0.0);
    }

    #[test]
    fn periapsis_and_apoapsis() {
        let mu = 3.0;
        let g = OrbitGeometry::new(475.0, 0.2632, 0.3, 1.0, 2.0).unwrap();
        let s = state_from_geometry(&g, 0.0, mu, Frame::Inertial, 0.0).unwrap();
        assert_relative_eq!(s.r.norm(), 475.0 * (1.0 - 0.2632), max_relative = 1e-14);
        assert_relative_eq!(s.r.normalize(), g.e_vector().normalize(), epsilon = 1e-14);
        let s = state_from_geometry(&g, PI, mu, Frame::Inertial, 0.0).unwrap();
        assert_relative_eq!(s.r.norm(), 475.0 * (1.0 + 0.2632), max_relative = 1e-14);
    }

    #[test]
    fn hyperbola_beyond_asymptote_is_rejected() {
        let g = OrbitGeometry::from_periapsis(400.0, 1.5, 0.7, 0.0, 0.0).unwrap();
        assert_eq!(g.a, -800.0);
        assert!(state_from_geometry(&g, 2.5, 1.0, Frame::Inertial, 0.0).is_err());
        assert!(state_from_geometry(&g, 2.0, 1.0, Frame::Inertial, 0.0).is_ok());
    }

    #[test]
    fn invalid_geometries() {
        assert!(OrbitGeometry::new(-1.0, 0.5, 0.0, 0.0, 0.0).is_err());
        assert!(OrbitGeometry::new(1.0, 1.5, 0.0, 0.0, 0.0).is_err());
        assert!(OrbitGeometry::new(1.0, -0.1, 0.0, 0.0, 0.0).is_err());
        assert!(OrbitGeometry::new(1.0, 0.1, 4.0, 0.0, 0.0).is_err());
        let g = OrbitGeometry::new(1.0, 0.1, 1.0, -0.5, 7.0).unwrap();
        assert!((0.0..TAU).contains(&g.raan) && (0.0..TAU).contains(&g.argp));
    }

    #[test]
    fn rotate_frame_examples() {
        let nu = 4.0684e-4;
        let s = StateVector::new(
            Vector3::new(500.0, 10.0, -3.0),
            Vector3::new(0.01, 0.1, 0.02),
            0.0,
            Frame::Inertial,
        )
        .unwrap();
        let b = rotate_frame(&s, nu, RotationDirection::InertialToBody).unwrap();
        assert_relative_eq!(b.r, s.r, epsilon = 1e-15);

        // inertially fixed point seen from the rotating body
        let fixed = StateVector::new(Vector3::new(300.0, 0.0, 0.0), Vector3::zeros(), 1234.0, Frame::Inertial).unwrap();
        let b = rotate_frame(&fixed, nu, RotationDirection::InertialToBody).unwrap();
        assert_relative_eq!(b.v.norm(), nu * 300.0, max_relative = 1e-14);

        let later = StateVector { t: 5000.0, ..s };
        let back = rotate_frame(
            &rotate_frame(&later, nu, RotationDirection::InertialToBody).unwrap(),
            nu,
            RotationDirection::BodyToInertial,
        )
        .unwrap();
        assert_relative_eq!(back.r, later.r, epsilon = 1e-12);
        assert_relative_eq!(back.v, later.v, epsilon = 1e-12);

        assert!(rotate_frame(&b, nu, RotationDirection::InertialToBody).is_err());
    }

    #[test]
    fn cross_frame_difference_is_rejected() {
        let a = st([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]);
        let b = StateVector {
            frame: Frame::BodyFixed,
            ..a
        };
        assert!(a.difference(&b).is_err());
        assert!(a.difference(&a).is_ok());
        assert!(StateVector::new(Vector3::new(f64::NAN, 0.0, 0.0), Vector3::zeros(), 0.0, Frame::Inertial).is_err());
    }
}
