//! Per-step telemetry and its CSV layout.

use std::io::Write;

use nalgebra::Vector3;
use serde::Serialize;

/// Column order of [`write_csv`].
pub const CSV_COLUMNS: &[&str] = &[
    "t", "rx", "ry", "rz", "vx", "vy", "vz", "rx_est", "ry_est", "rz_est", "vx_est", "vy_est", "vz_est", "s1", "s2",
    "s3", "switch", "ux_cmd", "uy_cmd", "uz_cmd", "ux_app", "uy_app", "uz_app", "dv_cum", "a_err", "e_err", "i_err",
    "raan_err", "argp_err", "r_err", "stage",
];

/// One control step. Vectors are in the simulation frame; `u_app` is the
/// mean applied acceleration over the step and `dv_cum` includes this step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelemetryRecord {
    pub t: f64,
    pub r_true: Vector3<f64>,
    pub v_true: Vector3<f64>,
    pub r_est: Vector3<f64>,
    pub v_est: Vector3<f64>,
    pub s: Vector3<f64>,
    pub thrusting: bool,
    pub u_cmd: Vector3<f64>,
    pub u_app: Vector3<f64>,
    pub dv_cum: f64,
    /// a (m), e, i, Ω, ω (rad) of the truth minus the target.
    pub element_errors: [f64; 5],
    /// |r| minus the target conic's radius at the same in-plane angle, m.
    pub r_error: f64,
    pub stage: usize,
}

pub fn write_csv<W: Write>(records: &[TelemetryRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    let mut row: Vec<String> = Vec::with_capacity(CSV_COLUMNS.len());
    for rec in records {
        row.clear();
        row.push(rec.t.to_string());
        for v in [&rec.r_true, &rec.v_true, &rec.r_est, &rec.v_est, &rec.s] {
            row.extend(v.iter().map(|x| x.to_string()));
        }
        row.push((rec.thrusting as u8).to_string());
        for v in [&rec.u_cmd, &rec.u_app] {
            row.extend(v.iter().map(|x| x.to_string()));
        }
        row.push(rec.dv_cum.to_string());
        row.extend(rec.element_errors.iter().map(|x| x.to_string()));
        row.push(rec.r_error.to_string());
        row.push(rec.stage.to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
