//! Self-consistency checks of the gravity models on a given shape.

use nalgebra::Vector3;
use serde::Serialize;

use super::{harmonics_from_polyhedron, point_mass_accel, GravityError, GravityField, PolyhedronGravity};
use crate::shape::{mass_properties, PolyhedronShape};
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Worst value of the checked quantity.
    pub worst: f64,
    pub tolerance: f64,
}

/// `n` roughly uniform unit vectors (Fibonacci lattice).
pub fn sphere_directions(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| {
            let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * k as f64;
            Vector3::new(rho * phi.cos(), rho * phi.sin(), z)
        })
        .collect()
}

fn outcome(name: &'static str, worst: f64, tolerance: f64) -> CheckOutcome {
    CheckOutcome {
        name,
        passed: worst <= tolerance,
        worst,
        tolerance,
    }
}

/// Relative error of the central-difference gradient of the potential.
pub fn gradient_error(field: &GravityField, r: &Vector3<f64>, step: f64) -> Result<f64, GravityError> {
    let a = field.accel(r)?.accel;
    let mut fd = Vector3::zeros();
    for k in 0..3 {
        let mut dp = *r;
        let mut dm = *r;
        dp[k] += step;
        dm[k] -= step;
        fd[k] = (field.potential(&dp)? - field.potential(&dm)?) / (2.0 * step);
    }
    Ok((fd - a).norm() / a.norm())
}

/// Laplace property, far-field limit, potential gradients and the degree-5
/// expansion against the polyhedron, for a uniform body of unit density.
pub fn run_checks(shape: &PolyhedronShape) -> Result<Vec<CheckOutcome>, GravityError> {
    let g = 1.0;
    let density = 1.0;
    let props = mass_properties(shape, density).map_err(|e| GravityError::InvalidModel(e.to_string()))?;
    let radius = shape.circumscribing_radius();
    let poly = Arc::new(PolyhedronGravity::new(shape.clone(), density, g)?);
    let mu = poly.mu();
    let dirs = sphere_directions(100);
    let mut out = Vec::new();

    out.push(outcome(
        "euler characteristic = 2",
        (shape.euler_characteristic() - 2).abs() as f64,
        0.0,
    ));

    // Inside: shrink towards the centroid far enough to stay within any star-shaped body.
    let mut inside = 0.0f64;
    let mut outside = 0.0f64;
    for d in &dirs {
        let p_in = props.centroid + d * 1e-3 * radius;
        inside = inside.max((poly.laplacian(&p_in)? + 4.0 * PI).abs());
        let p_out = d * radius * 1.5;
        outside = outside.max(poly.laplacian(&p_out)?.abs());
    }
    out.push(outcome("solid-angle sum is -4π inside", inside, 1e-8));
    out.push(outcome("solid-angle sum is 0 outside", outside, 1e-8));

    // the quadrupole residual of an elongated body decays as (R/r)², so 100 R
    let mut far = 0.0f64;
    for d in &dirs {
        let r = d * 100.0 * radius;
        let a = poly.evaluate(&r)?.accel;
        let pm = point_mass_accel(mu, &r)?;
        far = far.max((a - pm).norm() / pm.norm());
    }
    out.push(outcome("far field within 1e-4 of point mass at 100 radii", far, 1e-4));

    let harmonics = harmonics_from_polyhedron(shape, density, g, 5, radius)?;
    let fields = [
        GravityField::PointMass { mu },
        GravityField::Polyhedron(poly.clone()),
        GravityField::Harmonics(Arc::new(harmonics.clone())),
    ];
    let mut grad = 0.0f64;
    for field in &fields {
        for d in dirs.iter().step_by(10) {
            grad = grad.max(gradient_error(field, &(d * 2.0 * radius), 1e-3 * radius / 300.0)?);
        }
    }
    out.push(outcome("acceleration matches potential gradient", grad, 1e-5));

    let degree0 = harmonics.truncated(0);
    let mut zero = 0.0f64;
    for d in dirs.iter().step_by(10) {
        let r = d * 1.7 * radius;
        let pm = point_mass_accel(mu, &r)?;
        zero = zero.max((degree0.accel(&r)? - pm).norm() / pm.norm());
    }
    out.push(outcome("degree-0 expansion equals point mass", zero, 1e-14));

    let mut trunc = 0.0f64;
    for d in &dirs {
        let r = d * 2.0 * radius;
        let a = poly.evaluate(&r)?.accel;
        trunc = trunc.max((harmonics.accel(&r)? - a).norm() / a.norm());
    }
    out.push(outcome(
        "degree-5 expansion within 1e-2 of polyhedron at 2 radii",
        trunc,
        1e-2,
    ));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shape::synthetic;

    #[test]
    fn builtin_shapes_pass() {
        for name in ["cube", "itokawa", "67p"] {
            let shape = synthetic::builtin(name).unwrap();
            for c in run_checks(&shape).unwrap() {
                assert!(c.passed, "{name}: {c:?}");
            }
        }
    }

    #[test]
    fn directions_are_unit() {
        for d in sphere_directions(37) {
            assert!((d.norm() - 1.0).abs() < 1e-15);
        }
    }
}
