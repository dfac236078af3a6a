//! Navigation and actuation noise. Every source draws from its own ChaCha8
//! stream of the run seed, so switching one source off leaves the others'
//! sequences untouched.

use nalgebra::Vector3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::frames::StateVector;

pub const MEASUREMENT_STREAM: u64 = 1;
pub const THRUSTER_STREAM: u64 = 2;
pub const DISPERSION_STREAM: u64 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    /// 1σ per Cartesian position component, m.
    pub sigma_r: f64,
    /// 1σ per Cartesian velocity component, m/s.
    pub sigma_v: f64,
    /// Fractional 1σ thruster execution error per component.
    pub thruster_sigma: f64,
    pub seed: u64,
    /// Time between navigation fixes; `None` measures every control step.
    pub measurement_period: Option<f64>,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            sigma_r: 0.0,
            sigma_v: 0.0,
            thruster_sigma: 0.0,
            seed: 0,
            measurement_period: None,
        }
    }
}

impl NoiseConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.sigma_r >= 0.0 && self.sigma_v >= 0.0 && self.thruster_sigma >= 0.0) {
            return Err("noise standard deviations must be non-negative".into());
        }
        if let Some(p) = self.measurement_period {
            if !(p > 0.0) {
                return Err(format!("measurement period must be positive, got {p}"));
            }
        }
        Ok(())
    }
}

/// Substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone)]
pub struct NoiseStreams {
    pub measurement: ChaCha8Rng,
    pub thruster: ChaCha8Rng,
}

impl NoiseStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            measurement: stream_rng(seed, MEASUREMENT_STREAM),
            thruster: stream_rng(seed, THRUSTER_STREAM),
        }
    }
}

fn gaussian3(sigma: f64, rng: &mut ChaCha8Rng) -> Vector3<f64> {
    if sigma == 0.0 {
        return Vector3::zeros();
    }
    let n = Normal::new(0.0, sigma).expect("σ validated non-negative");
    Vector3::new(n.sample(rng), n.sample(rng), n.sample(rng))
}

/// Truth plus independent zero-mean Gaussian errors on every component.
pub fn measure(truth: &StateVector, noise: &NoiseConfig, rng: &mut ChaCha8Rng) -> StateVector {
    StateVector {
        r: truth.r + gaussian3(noise.sigma_r, rng),
        v: truth.v + gaussian3(noise.sigma_v, rng),
        ..*truth
    }
}

/// Scales each component of `u_cmd` by `1 + N(0, fraction)`.
pub fn apply_thruster_error(u_cmd: &Vector3<f64>, fraction: f64, rng: &mut ChaCha8Rng) -> Vector3<f64> {
    let scale = gaussian3(fraction, rng);
    u_cmd.component_mul(&(scale.add_scalar(1.0)))
}
