//! Sliding-mode path-following law and its actuation layer.
//!
//! The surface `s = (ẽ·(λ_R r̂ + θ̂), h − h_d, ĥ_d·(λ_N r̂ + θ̂))` vanishes on
//! every point of the target conic, independently of timing along it.

use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frames::{
    angular_momentum, eccentricity_vector, rtn_basis, state_from_geometry, Frame, FrameError, OrbitGeometry,
    StateVector,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ControlError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(
        "orbit plane is {beta_deg:.2}° from the target plane (needs < 90°); try the intermediate normal {suggested:?}"
    )]
    PlaneGuard { beta_deg: f64, suggested: Vector3<f64> },
    #[error("invalid controller configuration: {0}")]
    InvalidConfig(String),
}

/// Lower switch-off threshold of the hysteresis switch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LowerThreshold {
    Fixed(Vector3<f64>),
    /// A fraction of the boundary layer Φ, re-evaluated every step.
    PhiFraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hysteresis {
    pub upper: Vector3<f64>,
    pub lower: LowerThreshold,
}

impl Hysteresis {
    pub fn lower_for(&self, phi: &Vector3<f64>) -> Vector3<f64> {
        match self.lower {
            LowerThreshold::Fixed(v) => v,
            LowerThreshold::PhiFraction(f) => phi * f,
        }
    }
}

/// Pulse-width pulse-frequency modulator parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PwpfParams {
    pub k_lpf: f64,
    pub omega_c: f64,
    pub delta_on: f64,
    pub delta_off: f64,
    pub u_m: f64,
}

impl Default for PwpfParams {
    fn default() -> Self {
        Self {
            k_lpf: 1.0,
            omega_c: 1.0,
            delta_on: 2.9e-3,
            delta_off: 2.5e-3,
            u_m: 1e-3,
        }
    }
}

/// Which switching function multiplies K.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Switching {
    #[default]
    Saturation,
    /// Pure sign function; kept only to demonstrate chattering.
    #[doc(hidden)]
    Sign,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    pub lambda_r: f64,
    pub lambda_n: f64,
    /// Disturbance bounds (D_R, D_T, D_N), m/s².
    pub disturbance_bound: Vector3<f64>,
    /// Φ = n_Φ · diag(K).
    pub n_phi: f64,
    pub hysteresis: Option<Hysteresis>,
    /// Per-component thrust cap, m/s².
    pub u_max: Option<f64>,
    pub pwpf: Option<PwpfParams>,
    /// Central-body μ used by the controller's model.
    pub mu: f64,
    pub switching: Switching,
}

impl ControllerConfig {
    pub fn new(mu: f64, lambda: f64, disturbance: f64, n_phi: f64) -> Self {
        Self {
            lambda_r: lambda,
            lambda_n: lambda,
            disturbance_bound: Vector3::repeat(disturbance),
            n_phi,
            hysteresis: None,
            u_max: None,
            pwpf: None,
            mu,
            switching: Switching::Saturation,
        }
    }

    pub fn validate(&self) -> Result<(), ControlError> {
        let bad = |m: String| Err(ControlError::InvalidConfig(m));
        if !(self.mu > 0.0) {
            return bad(format!("μ must be positive, got {}", self.mu));
        }
        if !(self.lambda_r > 0.0 && self.lambda_n > 0.0) {
            return bad("λ_R and λ_N must be positive".into());
        }
        if !self.disturbance_bound.iter().all(|d| *d > 0.0) {
            return bad("disturbance bounds must be positive".into());
        }
        if !(self.n_phi > 0.0) {
            return bad(format!("n_Φ must be positive, got {}", self.n_phi));
        }
        if let Some(u) = self.u_max {
            if !(u > 0.0) {
                return bad(format!("thrust cap must be positive, got {u}"));
            }
        }
        if let Some(h) = &self.hysteresis {
            if !h.upper.iter().all(|x| *x > 0.0) {
                return bad("hysteresis upper thresholds must be positive".into());
            }
            match h.lower {
                LowerThreshold::Fixed(lo) => {
                    if lo.iter().zip(h.upper.iter()).any(|(l, u)| *l < 0.0 || l > u) {
                        return bad("hysteresis thresholds need 0 ≤ s⁻ ≤ s⁺".into());
                    }
                }
                LowerThreshold::PhiFraction(f) => {
                    if !(f >= 0.0) {
                        return bad("Φ fraction for s⁻ must be non-negative".into());
                    }
                }
            }
        }
        if let Some(p) = &self.pwpf {
            if !(p.delta_off < p.delta_on) || !(p.delta_off >= 0.0) {
                return bad("PWPF needs 0 ≤ δ_off < δ_on".into());
            }
            if !(p.u_m > 0.0 && p.omega_c > 0.0 && p.k_lpf > 0.0) {
                return bad("PWPF u_m, ω_c and K_LPF must be positive".into());
            }
        }
        Ok(())
    }
}

/// Target conic with its derived vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetOrbit {
    pub geometry: OrbitGeometry,
    pub mu: f64,
    pub h_hat_d: Vector3<f64>,
    pub h_d: f64,
    pub e_d: Vector3<f64>,
}

impl TargetOrbit {
    pub fn new(geometry: OrbitGeometry, mu: f64) -> Result<Self, ControlError> {
        geometry.validate()?;
        if !(mu > 0.0) {
            return Err(ControlError::InvalidConfig(format!("μ must be positive, got {mu}")));
        }
        Ok(Self {
            geometry,
            mu,
            h_hat_d: geometry.h_hat(),
            h_d: geometry.h(mu),
            e_d: geometry.e_vector(),
        })
    }

    /// Same size and shape with a substituted plane normal.
    pub fn with_plane_normal(&self, h_hat_d: Vector3<f64>) -> Self {
        Self { h_hat_d, ..*self }
    }
}

/// Kinematic quantities shared by s, F, G and K.
struct Kinematics {
    r: f64,
    h: f64,
    r_hat: Vector3<f64>,
    theta_hat: Vector3<f64>,
    h_hat: Vector3<f64>,
    v_radial: f64,
    e_vec: Vector3<f64>,
}

fn kinematics(state: &StateVector, mu: f64) -> Result<Kinematics, ControlError> {
    let basis = rtn_basis(state)?;
    let (_, h) = angular_momentum(state);
    Ok(Kinematics {
        r: state.r.norm(),
        h,
        r_hat: basis.r_hat,
        theta_hat: basis.theta_hat,
        h_hat: basis.h_hat,
        v_radial: state.v.dot(&basis.r_hat),
        e_vec: eccentricity_vector(state, mu)?,
    })
}

fn surface(k: &Kinematics, target: &TargetOrbit, lambda_r: f64, lambda_n: f64) -> Vector3<f64> {
    let e_err = k.e_vec - target.e_d;
    Vector3::new(
        e_err.dot(&(k.r_hat * lambda_r + k.theta_hat)),
        k.h - target.h_d,
        target.h_hat_d.dot(&(k.r_hat * lambda_n + k.theta_hat)),
    )
}

pub fn sliding_surface(
    state: &StateVector,
    target: &TargetOrbit,
    lambda_r: f64,
    lambda_n: f64,
) -> Result<Vector3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    Ok(surface(&k, target, lambda_r, lambda_n))
}

fn gains(k: &Kinematics, target: &TargetOrbit, cfg: &ControllerConfig) -> Matrix3<f64> {
    let mu = cfg.mu;
    let d = cfg.disturbance_bound;
    let b = 2.0 * cfg.lambda_r * k.h - k.v_radial * k.r;
    let k11 = k.h / mu * d.x + (b / mu).abs() * d.y + k.r * target.e_d.dot(&k.h_hat).abs() / k.h * d.z;
    let k22 = k.r * d.y;
    let k33 = k.r * target.h_hat_d.dot(&k.h_hat) / k.h * d.z;
    Matrix3::from_diagonal(&Vector3::new(k11, k22, k33))
}

/// Diagonal gain at equality with the robustness bound.
pub fn gain_matrix(
    state: &StateVector,
    target: &TargetOrbit,
    cfg: &ControllerConfig,
) -> Result<Matrix3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    Ok(gains(&k, target, cfg))
}

fn f_parts(k: &Kinematics, target: &TargetOrbit, lambda_r: f64) -> (f64, f64, f64) {
    let b = 2.0 * lambda_r * k.h - k.v_radial * k.r;
    let c = target.e_d.dot(&k.h_hat);
    let d = target.h_hat_d.dot(&k.h_hat);
    (b, c, d)
}

/// Input matrix mapping RTN acceleration to ṡ.
pub fn f_matrix(state: &StateVector, target: &TargetOrbit, lambda_r: f64) -> Result<Matrix3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    let mu = target.mu;
    let (b, c, d) = f_parts(&k, target, lambda_r);
    Ok(Matrix3::new(
        -k.h / mu,
        b / mu,
        -k.r * c / k.h,
        0.0,
        k.r,
        0.0,
        0.0,
        0.0,
        k.r * d / k.h,
    ))
}

fn f_inv(k: &Kinematics, target: &TargetOrbit, lambda_r: f64, mu: f64) -> Matrix3<f64> {
    let (b, c, d) = f_parts(k, target, lambda_r);
    let (r, h) = (k.r, k.h);
    Matrix3::new(
        -mu / h,
        b / (h * r),
        -mu * c / (h * d),
        0.0,
        1.0 / r,
        0.0,
        0.0,
        0.0,
        h / (r * d),
    )
}

/// Closed-form inverse of the upper-triangular F.
pub fn f_inverse(state: &StateVector, target: &TargetOrbit, lambda_r: f64) -> Result<Matrix3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    Ok(f_inv(&k, target, lambda_r, target.mu))
}

fn g_vec(k: &Kinematics, target: &TargetOrbit, lambda_r: f64, lambda_n: f64) -> Vector3<f64> {
    let e_err = k.e_vec - target.e_d;
    Vector3::new(
        e_err.dot(&(k.theta_hat * lambda_r - k.r_hat)) - 1.0,
        0.0,
        target.h_hat_d.dot(&(k.theta_hat * lambda_n - k.r_hat)),
    ) * (k.h / (k.r * k.r))
}

/// Drift term of ṡ under two-body dynamics.
pub fn g_vector(
    state: &StateVector,
    target: &TargetOrbit,
    lambda_r: f64,
    lambda_n: f64,
) -> Result<Vector3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    Ok(g_vec(&k, target, lambda_r, lambda_n))
}

pub fn saturation(x: f64, x_star: f64) -> f64 {
    if x > x_star {
        1.0
    } else if x < -x_star {
        -1.0
    } else {
        x / x_star
    }
}

pub fn saturation_vec(x: &Vector3<f64>, x_star: &Vector3<f64>) -> Vector3<f64> {
    x.zip_map(x_star, saturation)
}

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Unit vector halfway between `from` and `to` on the great circle.
fn halfway(from: &Vector3<f64>, to: &Vector3<f64>) -> Vector3<f64> {
    let mid = from + to;
    if mid.norm() > 1e-12 {
        return mid.normalize();
    }
    // antiparallel: any perpendicular works; move one quarter turn
    let helper = if from.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
    from.cross(&helper).normalize()
}

fn plane_guard(k: &Kinematics, target: &TargetOrbit) -> Result<(), ControlError> {
    let cos_beta = k.h_hat.dot(&target.h_hat_d);
    if cos_beta <= 0.0 {
        return Err(ControlError::PlaneGuard {
            beta_deg: cos_beta.clamp(-1.0, 1.0).acos().to_degrees(),
            suggested: halfway(&k.h_hat, &target.h_hat_d),
        });
    }
    Ok(())
}

/// `u_RTN = −F⁻¹(G + K sat(s; Φ)) − f_RTN` with `Φ = n_Φ diag(K)`.
pub fn control_accel_rtn(
    state: &StateVector,
    target: &TargetOrbit,
    cfg: &ControllerConfig,
    gain: &Matrix3<f64>,
) -> Result<Vector3<f64>, ControlError> {
    let k = kinematics(state, target.mu)?;
    plane_guard(&k, target)?;
    let s = surface(&k, target, cfg.lambda_r, cfg.lambda_n);
    Ok(law(&k, target, cfg, gain, &s))
}

fn law(
    k: &Kinematics,
    target: &TargetOrbit,
    cfg: &ControllerConfig,
    gain: &Matrix3<f64>,
    s: &Vector3<f64>,
) -> Vector3<f64> {
    let phi = gain.diagonal() * cfg.n_phi;
    let switch = match cfg.switching {
        Switching::Saturation => saturation_vec(s, &phi),
        Switching::Sign => s.map(sign),
    };
    let f_rtn = Vector3::new(-cfg.mu / (k.r * k.r), 0.0, 0.0);
    -f_inv(k, target, cfg.lambda_r, cfg.mu) * (g_vec(k, target, cfg.lambda_r, cfg.lambda_n) + gain * switch) - f_rtn
}

/// Everything the loop needs from one controller evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlEvaluation {
    pub s: Vector3<f64>,
    pub gain: Vector3<f64>,
    pub phi: Vector3<f64>,
    pub u_rtn: Vector3<f64>,
    /// Plane normal actually used (differs from the target's when the guard fired).
    pub h_hat_d: Vector3<f64>,
    pub guard_applied: bool,
}

/// Computes s, K and u, replacing ĥ_d by the halfway normal when β ≥ 90°.
pub fn evaluate(
    state: &StateVector,
    target: &TargetOrbit,
    cfg: &ControllerConfig,
) -> Result<ControlEvaluation, ControlError> {
    let k = kinematics(state, target.mu)?;
    let (target, guard_applied) = match plane_guard(&k, target) {
        Ok(()) => (*target, false),
        Err(ControlError::PlaneGuard { suggested, .. }) => (target.with_plane_normal(suggested), true),
        Err(e) => return Err(e),
    };
    let gain = gains(&k, &target, cfg);
    let s = surface(&k, &target, cfg.lambda_r, cfg.lambda_n);
    let u_rtn = law(&k, &target, cfg, &gain, &s);
    Ok(ControlEvaluation {
        s,
        gain: gain.diagonal(),
        phi: gain.diagonal() * cfg.n_phi,
        u_rtn,
        h_hat_d: target.h_hat_d,
        guard_applied,
    })
}

/// Latch of the hysteresis switch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SwitchState {
    pub latch: [bool; 3],
    pub thrusting: bool,
}

impl SwitchState {
    pub fn on() -> Self {
        Self {
            latch: [true; 3],
            thrusting: true,
        }
    }
}

/// Per-component Schmitt logic on |s|; the checks run in the order on, off, hold.
pub fn hysteresis_step(s: &Vector3<f64>, prev: SwitchState, upper: &Vector3<f64>, lower: &Vector3<f64>) -> SwitchState {
    let mut latch = prev.latch;
    for i in 0..3 {
        let x = s[i].abs();
        if x > upper[i] {
            latch[i] = true;
        } else if x < lower[i] {
            latch[i] = false;
        }
    }
    SwitchState {
        latch,
        thrusting: latch.iter().any(|l| *l),
    }
}

pub fn clamp_thrust(u: &Vector3<f64>, u_max: f64) -> Vector3<f64> {
    u.map(|x| x.clamp(-u_max, u_max))
}

/// One modulator channel.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PwpfChannel {
    pub filter: f64,
    /// -1, 0 or +1.
    pub output: i8,
}

/// Three independent modulators, one per RTN axis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PwpfState {
    pub channels: [PwpfChannel; 3],
}

impl PwpfState {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

/// Advances one channel by `dt` with `u_cmd` held; returns the thrust level.
pub fn pwpf_step(u_cmd: f64, channel: PwpfChannel, params: &PwpfParams, dt: f64) -> (f64, PwpfChannel) {
    let feedback = channel.output as f64 * params.u_m;
    let target = params.k_lpf * (u_cmd - feedback);
    let filter = target + (channel.filter - target) * (-params.omega_c * dt).exp();
    let on = params.delta_on * params.u_m;
    let off = params.delta_off * params.u_m;
    let output = match channel.output {
        0 if filter > on => 1,
        0 if filter < -on => -1,
        1 if filter < off => 0,
        -1 if filter > -off => 0,
        o => o,
    };
    (output as f64 * params.u_m, PwpfChannel { filter, output })
}

/// Time for `f`, relaxing towards `target` at rate `omega`, to reach `threshold`.
fn crossing_time(f: f64, target: f64, threshold: f64, omega: f64) -> f64 {
    let ratio = (threshold - target) / (f - target);
    if !ratio.is_finite() || ratio <= 0.0 {
        f64::INFINITY
    } else if ratio >= 1.0 {
        0.0
    } else {
        -ratio.ln() / omega
    }
}

/// Continuous-time modulator over `dt` with `u_cmd` held: switching instants
/// are solved exactly and the mean thrust over the interval is returned.
/// Steady pulse trains are skipped a whole period at a time.
pub fn pwpf_average(u_cmd: f64, mut ch: PwpfChannel, params: &PwpfParams, dt: f64) -> (f64, PwpfChannel) {
    let on = params.delta_on * params.u_m;
    let off = params.delta_off * params.u_m;
    let w = params.omega_c;
    let relax = |f: f64, target: f64, t: f64| target + (f - target) * (-w * t).exp();
    let mut t = 0.0;
    let mut impulse = 0.0;
    while t < dt {
        let remaining = dt - t;
        let level = ch.output as f64 * params.u_m;
        let target = params.k_lpf * (u_cmd - level);
        let (tau, threshold, next) = match ch.output {
            0 if ch.filter > on => (0.0, ch.filter, 1),
            0 if ch.filter < -on => (0.0, ch.filter, -1),
            0 if target > on => (crossing_time(ch.filter, target, on, w), on, 1),
            0 if target < -on => (crossing_time(ch.filter, target, -on, w), -on, -1),
            1 => (crossing_time(ch.filter, target, off, w), off, 0),
            -1 => (crossing_time(ch.filter, target, -off, w), -off, 0),
            _ => (f64::INFINITY, 0.0, 0),
        };
        if tau >= remaining {
            ch.filter = relax(ch.filter, target, remaining);
            impulse += level * remaining;
            break;
        }
        impulse += level * tau;
        t += tau;
        ch.filter = threshold;
        ch.output = next;

        // just switched off at ±δ_off·u_m: if the input will re-fire, the
        // pulse train is periodic from here
        if next == 0 {
            let sign = threshold.signum();
            let t_off = crossing_time(threshold, params.k_lpf * u_cmd, sign * on, w);
            let t_on = crossing_time(sign * on, params.k_lpf * (u_cmd - sign * params.u_m), threshold, w);
            let period = t_off + t_on;
            if period.is_finite() && period > 0.0 {
                let cycles = ((dt - t) / period).floor();
                t += cycles * period;
                impulse += cycles * sign * params.u_m * t_on;
            }
        }
    }
    (impulse / dt, ch)
}

pub fn pwpf_step_vec(u_cmd: &Vector3<f64>, state: &mut PwpfState, params: &PwpfParams, dt: f64) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for i in 0..3 {
        let (thrust, ch) = pwpf_average(u_cmd[i], state.channels[i], params, dt);
        out[i] = thrust;
        state.channels[i] = ch;
    }
    out
}

/// Half-widths of an element box around a target orbit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementBox {
    pub a: f64,
    pub e: f64,
    pub i: f64,
    pub raan: f64,
    pub argp: f64,
}

/// Largest |s_i| over an element box, sampled on a grid of `steps` points per
/// element and `anomalies` points along each orbit. Helps translate element
/// tolerances into hysteresis thresholds.
pub fn surface_envelope(
    target: &TargetOrbit,
    lambda_r: f64,
    lambda_n: f64,
    half_widths: &ElementBox,
    steps: usize,
    anomalies: usize,
) -> Result<Vector3<f64>, ControlError> {
    let steps = steps.max(2);
    let grid = |centre: f64, half: f64| -> Vec<f64> {
        (0..steps)
            .map(|k| centre - half + 2.0 * half * k as f64 / (steps - 1) as f64)
            .collect()
    };
    let g = target.geometry;
    let mut worst = Vector3::zeros();
    for &a in &grid(g.a, half_widths.a) {
        for &e in &grid(g.e, half_widths.e) {
            for &i in &grid(g.i, half_widths.i) {
                for &raan in &grid(g.raan, half_widths.raan) {
                    for &argp in &grid(g.argp, half_widths.argp) {
                        let Ok(geom) =
                            OrbitGeometry::new(a, e.max(0.0), i.clamp(0.0, std::f64::consts::PI), raan, argp)
                        else {
                            continue;
                        };
                        for j in 0..anomalies.max(1) {
                            let alpha = std::f64::consts::TAU * j as f64 / anomalies.max(1) as f64;
                            let Ok(st) = state_from_geometry(&geom, alpha, target.mu, Frame::Inertial, 0.0) else {
                                continue;
                            };
                            let s = sliding_surface(&st, target, lambda_r, lambda_n)?;
                            worst = worst.zip_map(&s, |w: f64, x: f64| w.max(x.abs()));
                        }
                    }
                }
            }
        }
    }
    Ok(worst)
}
