//! Browser bindings for three interactive operations: a closed-loop
//! trajectory, a gravity slice through the body, and a one-parameter sweep.
//!
//! The plain Rust functions are what the tests exercise; the `#[wasm_bindgen]`
//! wrappers only move JSON across the boundary.

use orbitkeep::scenario::{resolve_scenario, run_sweep, ScenarioError, SweepAxis, PRESET_NAMES};
use orbitkeep::sim::Surface;
use orbitkeep::Vector3;
use serde::Serialize;
use wasm_bindgen::prelude::*;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub name: String,
    pub total_dv: f64,
    pub terminal: String,
    /// Downsampled samples: t, position, radial error, thrusting.
    pub t: Vec<f64>,
    pub position: Vec<[f64; 3]>,
    pub r_error: Vec<f64>,
    pub thrusting: Vec<bool>,
    /// Circumscribing radius of the body, for scaling the plot.
    pub body_radius: f64,
}

/// Keeps at most `max_points` evenly spaced indices out of `len`, always including the last.
pub fn downsample_indices(len: usize, max_points: usize) -> Vec<usize> {
    if len == 0 || max_points == 0 {
        return Vec::new();
    }
    if len <= max_points {
        return (0..len).collect();
    }
    let stride = len.div_ceil(max_points);
    let mut idx: Vec<usize> = (0..len).step_by(stride).collect();
    if idx.last() != Some(&(len - 1)) {
        idx.push(len - 1);
    }
    idx
}

fn overrides_from_lines(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(String::from)
        .collect()
}

/// Runs a preset (plus `key=value` override lines) and returns a plot-sized trajectory.
pub fn simulate(preset: &str, overrides: &str, max_points: usize) -> Result<Trajectory, ScenarioError> {
    let scenario = resolve_scenario(preset, &overrides_from_lines(overrides))?;
    let built = scenario.build()?;
    let out = built.run()?;
    let keep = downsample_indices(out.records.len(), max_points);
    let pick = |f: &dyn Fn(usize) -> f64| keep.iter().map(|&k| f(k)).collect::<Vec<f64>>();
    let rec = &out.records;
    Ok(Trajectory {
        name: scenario.name.clone(),
        total_dv: out.summary.total_dv,
        terminal: format!("{:?}", out.summary.terminal),
        t: pick(&|k| rec[k].t),
        position: keep.iter().map(|&k| rec[k].r_true.into()).collect(),
        r_error: pick(&|k| rec[k].r_error),
        thrusting: keep.iter().map(|&k| rec[k].thrusting).collect(),
        body_radius: body_radius(&built.env.surface),
    })
}

fn body_radius(surface: &Surface) -> f64 {
    match surface {
        Surface::None => 0.0,
        Surface::Sphere(radius) | Surface::Polyhedron { radius, .. } => *radius,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GravitySlice {
    pub n: usize,
    pub extent: f64,
    /// Row-major n×n grid over the body-frame x–y plane; `None` inside the body.
    /// Value is the relative departure of the field from a point mass.
    pub departure: Vec<Option<f64>>,
}

/// Samples the scenario's gravity field on the z = 0 plane of the body frame.
pub fn gravity_slice(preset: &str, overrides: &str, n: usize, extent: f64) -> Result<GravitySlice, ScenarioError> {
    let scenario = resolve_scenario(preset, &overrides_from_lines(overrides))?;
    let built = scenario.build()?;
    let env = &built.env;
    let mu = env.mu();
    let n = n.clamp(2, 400);
    let mut departure = Vec::with_capacity(n * n);
    for row in 0..n {
        for col in 0..n {
            let x = -extent + 2.0 * extent * col as f64 / (n - 1) as f64;
            let y = extent - 2.0 * extent * row as f64 / (n - 1) as f64;
            let r = Vector3::new(x, y, 0.0);
            if env.surface.contains(&r) || r.norm() == 0.0 {
                departure.push(None);
                continue;
            }
            let a = env.field.accel(&r)?.accel;
            let pm = -r * (mu / r.norm().powi(3));
            departure.push(Some((a - pm).norm() / pm.norm()));
        }
    }
    Ok(GravitySlice { n, extent, departure })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepCurve {
    pub value: f64,
    pub total_dv: f64,
    pub convergence_time: Option<f64>,
    pub t: Vec<f64>,
    pub r_error: Vec<f64>,
}

/// One run per value along `axis`, each downsampled for plotting.
pub fn sweep(
    preset: &str,
    overrides: &str,
    axis: &str,
    values: &[f64],
    max_points: usize,
) -> Result<Vec<SweepCurve>, ScenarioError> {
    let axis: SweepAxis = axis.parse()?;
    let built = resolve_scenario(preset, &overrides_from_lines(overrides))?.build()?;
    let points = run_sweep(&built, axis, values)?;
    Ok(points
        .into_iter()
        .map(|p| {
            let keep = downsample_indices(p.r_error.len(), max_points);
            SweepCurve {
                value: p.value,
                total_dv: p.summary.total_dv,
                convergence_time: p.convergence_time,
                t: keep.iter().map(|&k| p.r_error[k].0).collect(),
                r_error: keep.iter().map(|&k| p.r_error[k].1).collect(),
            }
        })
        .collect())
}

fn to_js<T: Serialize>(result: Result<T, ScenarioError>) -> Result<String, JsError> {
    let value = result.map_err(|e| JsError::new(&e.to_string()))?;
    serde_json::to_string(&value).map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = presetNames)]
pub fn preset_names() -> Vec<String> {
    PRESET_NAMES.iter().map(|s| s.to_string()).collect()
}

#[wasm_bindgen(js_name = simulate)]
pub fn simulate_js(preset: &str, overrides: &str, max_points: usize) -> Result<String, JsError> {
    to_js(simulate(preset, overrides, max_points))
}

#[wasm_bindgen(js_name = gravitySlice)]
pub fn gravity_slice_js(preset: &str, overrides: &str, n: usize, extent: f64) -> Result<String, JsError> {
    to_js(gravity_slice(preset, overrides, n, extent))
}

#[wasm_bindgen(js_name = sweep)]
pub fn sweep_js(
    preset: &str,
    overrides: &str,
    axis: &str,
    values: &[f64],
    max_points: usize,
) -> Result<String, JsError> {
    to_js(sweep(preset, overrides, axis, values, max_points))
}
