//! Monte Carlo dispersions and one-parameter sweeps.

use std::io::Write;
use std::str::FromStr;

use nalgebra::Vector3;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::{BuiltScenario, MonteCarloSpec, ScenarioError};
use crate::frames::StateVector;
use crate::sim::noise::DISPERSION_STREAM;
use crate::sim::{stream_rng, RunSummary, TelemetryRecord, TerminalEvent};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

fn fan_out<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampleResult {
    pub index: usize,
    pub seed: u64,
    pub total_dv: f64,
    pub terminal: TerminalEvent,
    /// Completed, and the final-hour mean |s| of the truth lies inside s⁺.
    pub success: bool,
    pub s_final_hour: [f64; 3],
    pub position_offset: [f64; 3],
    pub velocity_offset: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub samples: Vec<SampleResult>,
    /// Samples whose run aborted with an error, by index.
    pub errors: Vec<(usize, String)>,
    pub success_rate: f64,
    pub mean_dv: f64,
    /// Sample standard deviation (n − 1) of the ΔV.
    pub std_dv: f64,
    pub three_sigma_dv: f64,
}

/// Mean and sample standard deviation.
pub fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

impl MonteCarloReport {
    pub fn from_samples(samples: Vec<SampleResult>, errors: Vec<(usize, String)>) -> Self {
        let dvs: Vec<f64> = samples.iter().map(|s| s.total_dv).collect();
        let (mean_dv, std_dv) = mean_and_std(&dvs);
        let total = samples.len() + errors.len();
        let ok = samples.iter().filter(|s| s.success).count();
        Self {
            success_rate: if total == 0 { 0.0 } else { ok as f64 / total as f64 },
            mean_dv,
            std_dv,
            three_sigma_dv: 3.0 * std_dv,
            samples,
            errors,
        }
    }
}

/// Nominal state plus dispersions: position along two axes spanning the plane
/// normal to the velocity (the first is the radial direction made orthogonal
/// to v), velocity per Cartesian component.
pub fn disperse(nominal: &StateVector, spec: &MonteCarloSpec, seed: u64) -> (StateVector, Vector3<f64>, Vector3<f64>) {
    let mut rng = stream_rng(seed, DISPERSION_STREAM);
    let mut draw = |sigma: f64| {
        if sigma == 0.0 {
            0.0
        } else {
            Normal::new(0.0, sigma).expect("σ validated").sample(&mut rng)
        }
    };
    let v_hat = nominal.v.normalize();
    let r_hat = nominal.r.normalize();
    let b1 = (r_hat - v_hat * r_hat.dot(&v_hat)).normalize();
    let b2 = v_hat.cross(&b1);
    let dr = b1 * draw(spec.position_sigma) + b2 * draw(spec.position_sigma);
    let dv = Vector3::new(
        draw(spec.velocity_sigma),
        draw(spec.velocity_sigma),
        draw(spec.velocity_sigma),
    );
    let state = StateVector {
        r: nominal.r + dr,
        v: nominal.v + dv,
        ..*nominal
    };
    (state, dr, dv)
}

/// Sample i runs with seed `base_seed + i` for both dispersions and noise.
pub fn run_monte_carlo(built: &BuiltScenario, spec: &MonteCarloSpec) -> Result<MonteCarloReport, ScenarioError> {
    spec.validate()?;
    let mut quiet = built.clone();
    quiet.settings.record_every = None;
    let band = built.switch_band();
    let indices: Vec<usize> = (0..spec.samples).collect();
    let results = fan_out(&indices, |&index| {
        let seed = spec.base_seed.wrapping_add(index as u64);
        let (initial, dr, dv) = disperse(&built.initial, spec, seed);
        quiet
            .run_with(initial, seed)
            .map(|out| {
                let s = out.summary.s_true_mean_final_hour;
                let inside = band.is_none_or(|b| (0..3).all(|k| s[k] <= b[k]));
                SampleResult {
                    index,
                    seed,
                    total_dv: out.summary.total_dv,
                    terminal: out.summary.terminal,
                    success: out.summary.terminal.is_completed() && inside,
                    s_final_hour: s,
                    position_offset: dr.into(),
                    velocity_offset: dv.into(),
                }
            })
            .map_err(|e| (index, e.to_string()))
    });
    let (mut samples, mut errors) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(s) => samples.push(s),
            Err(e) => errors.push(e),
        }
    }
    Ok(MonteCarloReport::from_samples(samples, errors))
}

pub const SAMPLE_COLUMNS: &[&str] = &[
    "index",
    "seed",
    "total_dv",
    "terminal",
    "success",
    "s1_final_hour",
    "s2_final_hour",
    "s3_final_hour",
    "drx",
    "dry",
    "drz",
    "dvx",
    "dvy",
    "dvz",
];

pub fn write_samples_csv<W: Write>(samples: &[SampleResult], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SAMPLE_COLUMNS)?;
    for s in samples {
        let terminal = match s.terminal {
            TerminalEvent::Completed { .. } => "completed",
            TerminalEvent::Impact { .. } => "impact",
            TerminalEvent::Escape { .. } => "escape",
        };
        let mut row = vec![
            s.index.to_string(),
            s.seed.to_string(),
            s.total_dv.to_string(),
            terminal.to_string(),
            s.success.to_string(),
        ];
        row.extend(s.s_final_hour.iter().map(f64::to_string));
        row.extend(s.position_offset.iter().map(f64::to_string));
        row.extend(s.velocity_offset.iter().map(f64::to_string));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Disturbance bound D, applied to all three components.
    Disturbance,
    Lambda,
    NPhi,
    ControlPeriod,
}

impl FromStr for SweepAxis {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "d" | "disturbance" => Ok(SweepAxis::Disturbance),
            "lambda" | "λ" => Ok(SweepAxis::Lambda),
            "n_phi" | "nphi" => Ok(SweepAxis::NPhi),
            "control_period" | "period" | "dt" => Ok(SweepAxis::ControlPeriod),
            _ => Err(ScenarioError::Validation(format!(
                "unknown sweep axis {s:?} (use D, lambda, n_phi or control_period)"
            ))),
        }
    }
}

impl SweepAxis {
    pub fn apply(self, built: &mut BuiltScenario, value: f64) {
        match self {
            SweepAxis::Disturbance => built.controller.disturbance_bound = Vector3::repeat(value),
            SweepAxis::Lambda => {
                built.controller.lambda_r = value;
                built.controller.lambda_n = value;
            }
            SweepAxis::NPhi => built.controller.n_phi = value,
            SweepAxis::ControlPeriod => built.settings.control_period = value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub axis: SweepAxis,
    pub value: f64,
    pub summary: RunSummary,
    /// First time after which |r error| stays below the threshold.
    pub convergence_time: Option<f64>,
    /// RMS radial error over the final day (or the whole run if shorter).
    pub final_day_rms: f64,
    /// (t, r error) series for plotting.
    #[serde(skip)]
    pub r_error: Vec<(f64, f64)>,
}

/// Threshold on |r error| used for convergence times, m.
pub const CONVERGENCE_THRESHOLD: f64 = 1.0;

pub fn convergence_time(records: &[TelemetryRecord], threshold: f64) -> Option<f64> {
    let first = records.first()?;
    match records.iter().rposition(|r| !(r.r_error.abs() < threshold)) {
        None => Some(first.t),
        Some(k) => records.get(k + 1).map(|r| r.t),
    }
}

pub fn trailing_rms(records: &[TelemetryRecord], window: f64) -> f64 {
    let Some(last) = records.last() else {
        return f64::NAN;
    };
    let tail: Vec<f64> = records
        .iter()
        .filter(|r| r.t >= last.t - window && r.r_error.is_finite())
        .map(|r| r.r_error)
        .collect();
    (tail.iter().map(|x| x * x).sum::<f64>() / tail.len().max(1) as f64).sqrt()
}

/// One closed-loop run per value; results come back in `values` order.
pub fn run_sweep(base: &BuiltScenario, axis: SweepAxis, values: &[f64]) -> Result<Vec<SweepPoint>, ScenarioError> {
    let runs = fan_out(values, |&value| {
        let mut built = base.clone();
        axis.apply(&mut built, value);
        built.settings.record_every = Some(1);
        built.run().map(|out| SweepPoint {
            axis,
            value,
            convergence_time: convergence_time(&out.records, CONVERGENCE_THRESHOLD),
            final_day_rms: trailing_rms(&out.records, 86_400.0),
            r_error: out.records.iter().map(|r| (r.t, r.r_error)).collect(),
            summary: out.summary,
        })
    });
    runs.into_iter().map(|r| r.map_err(ScenarioError::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::Frame;

    #[test]
    fn sample_std_uses_n_minus_one() {
        let (m, s) = mean_and_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn dispersion_is_perpendicular_to_velocity() {
        let nominal = StateVector::new(
            Vector3::new(450.0, 0.0, 0.0),
            Vector3::new(0.0, 0.07, 0.07),
            0.0,
            Frame::Inertial,
        )
        .unwrap();
        let spec = MonteCarloSpec {
            samples: 1,
            position_sigma: 35.0,
            velocity_sigma: 0.0,
            base_seed: 0,
        };
        for seed in 0..20 {
            let (s, dr, dv) = disperse(&nominal, &spec, seed);
            assert!(dr.dot(&nominal.v).abs() < 1e-12);
            assert_eq!(dv, Vector3::zeros());
            assert_eq!(s.v, nominal.v);
        }
        let zero = MonteCarloSpec {
            position_sigma: 0.0,
            ..spec
        };
        assert_eq!(disperse(&nominal, &zero, 3).0, nominal);
    }

    #[test]
    fn axis_names_parse() {
        assert_eq!("D".parse::<SweepAxis>().unwrap(), SweepAxis::Disturbance);
        assert_eq!("n-phi".parse::<SweepAxis>().unwrap(), SweepAxis::NPhi);
        assert!("mass".parse::<SweepAxis>().is_err());
    }
}
