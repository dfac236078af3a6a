//! Constant-density polyhedron field using the edge/face dyad formulation of
//! Werner & Scheeres.

use nalgebra::{Matrix3, Vector3};

use super::GravityError;
use crate::shape::PolyhedronShape;

/// A shape with its precomputed face and edge dyads.
#[derive(Debug, Clone)]
pub struct PolyhedronGravity {
    shape: PolyhedronShape,
    density: f64,
    g_sigma: f64,
    face_dyads: Vec<Matrix3<f64>>,
    edge_dyads: Vec<Matrix3<f64>>,
    edge_lengths: Vec<f64>,
    mass: f64,
}

/// Result of a single polyhedron evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyhedronSample {
    pub accel: Vector3<f64>,
    pub potential: f64,
    /// `-Σ ω_f`: 0 outside the body, -4π inside.
    pub laplacian: f64,
    pub interior: bool,
}

impl PolyhedronGravity {
    pub fn new(shape: PolyhedronShape, density: f64, gravitational_constant: f64) -> Result<Self, GravityError> {
        if !(density > 0.0) || !(gravitational_constant > 0.0) {
            return Err(GravityError::InvalidModel(format!(
                "density ({density}) and G ({gravitational_constant}) must be positive"
            )));
        }
        let verts = shape.vertices();
        let normals: Vec<Vector3<f64>> = (0..shape.faces().len())
            .map(|f| {
                let [a, b, c] = shape.face_vertices(f);
                (b - a).cross(&(c - a)).normalize()
            })
            .collect();
        let face_dyads = normals.iter().map(|n| n * n.transpose()).collect();
        let mut edge_dyads = Vec::with_capacity(shape.edges().len());
        let mut edge_lengths = Vec::with_capacity(shape.edges().len());
        for e in shape.edges() {
            let [a, b] = e.vertices;
            let [fa, fb] = e.faces;
            // face fa traverses a -> b, face fb traverses b -> a
            let d = verts[b] - verts[a];
            let na = normals[fa];
            let nb = normals[fb];
            let ea = d.cross(&na).normalize();
            let eb = (-d).cross(&nb).normalize();
            edge_dyads.push(na * ea.transpose() + nb * eb.transpose());
            edge_lengths.push(d.norm());
        }
        let mass = shape.signed_volume() * density;
        Ok(Self {
            shape,
            density,
            g_sigma: gravitational_constant * density,
            face_dyads,
            edge_dyads,
            edge_lengths,
            mass,
        })
    }

    pub fn shape(&self) -> &PolyhedronShape {
        &self.shape
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mu(&self) -> f64 {
        self.g_sigma * self.shape.signed_volume()
    }

    /// Signed solid-angle sum `-Σ ω_f` at `p`.
    pub fn laplacian(&self, p: &Vector3<f64>) -> Result<f64, GravityError> {
        let rel: Vec<Vector3<f64>> = self.shape.vertices().iter().map(|v| v - p).collect();
        let norms: Vec<f64> = rel.iter().map(|v| v.norm()).collect();
        let mut total = 0.0;
        for (f, face) in self.shape.faces().iter().enumerate() {
            total += face_solid_angle(f, face, &rel, &norms)?;
        }
        Ok(-total)
    }

    pub fn evaluate(&self, p: &Vector3<f64>) -> Result<PolyhedronSample, GravityError> {
        let rel: Vec<Vector3<f64>> = self.shape.vertices().iter().map(|v| v - p).collect();
        let norms: Vec<f64> = rel.iter().map(|v| v.norm()).collect();

        let mut grad = Vector3::zeros();
        let mut pot = 0.0;
        for (k, e) in self.shape.edges().iter().enumerate() {
            let [a, b] = e.vertices;
            let sum = norms[a] + norms[b];
            let len = self.edge_lengths[k];
            let den = sum - len;
            if den <= 1e-14 * sum {
                return Err(GravityError::OnEdge(k));
            }
            let le = ((sum + len) / den).ln();
            let er = self.edge_dyads[k] * rel[a];
            grad -= er * le;
            pot += rel[a].dot(&er) * le;
        }
        let mut omega_sum = 0.0;
        for (f, face) in self.shape.faces().iter().enumerate() {
            let omega = face_solid_angle(f, face, &rel, &norms)?;
            let fr = self.face_dyads[f] * rel[face[0]];
            grad += fr * omega;
            pot -= rel[face[0]].dot(&fr) * omega;
            omega_sum += omega;
        }
        Ok(PolyhedronSample {
            accel: grad * self.g_sigma,
            potential: 0.5 * self.g_sigma * pot,
            laplacian: -omega_sum,
            interior: omega_sum > 2.0 * std::f64::consts::PI,
        })
    }
}

fn face_solid_angle(f: usize, face: &[usize; 3], rel: &[Vector3<f64>], norms: &[f64]) -> Result<f64, GravityError> {
    let (r1, r2, r3) = (rel[face[0]], rel[face[1]], rel[face[2]]);
    let (l1, l2, l3) = (norms[face[0]], norms[face[1]], norms[face[2]]);
    let num = r1.dot(&r2.cross(&r3));
    let den = l1 * l2 * l3 + l1 * r2.dot(&r3) + l2 * r3.dot(&r1) + l3 * r1.dot(&r2);
    if num.abs() <= 1e-15 * l1 * l2 * l3 && den <= 0.0 {
        return Err(GravityError::OnFace(f));
    }
    Ok(2.0 * num.atan2(den))
}

/// Convenience wrapper: acceleration of a uniform polyhedron at `r`.
pub fn polyhedron_accel(
    shape: &PolyhedronShape,
    density: f64,
    gravitational_constant: f64,
    r: &Vector3<f64>,
) -> Result<PolyhedronSample, GravityError> {
    PolyhedronGravity::new(shape.clone(), density, gravitational_constant)?.evaluate(r)
}

/// Signed total solid angle `-Σ ω_f`: 0 outside, -4π inside.
pub fn polyhedron_laplacian(shape: &PolyhedronShape, r: &Vector3<f64>) -> Result<f64, GravityError> {
    let rel: Vec<Vector3<f64>> = shape.vertices().iter().map(|v| v - r).collect();
    let norms: Vec<f64> = rel.iter().map(|v| v.norm()).collect();
    let mut total = 0.0;
    for (f, face) in shape.faces().iter().enumerate() {
        total += face_solid_angle(f, face, &rel, &norms)?;
    }
    Ok(-total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gravity::point_mass_accel;
    use crate::shape::synthetic::{cube, icosphere};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    const G: f64 = crate::GRAVITATIONAL_CONSTANT;

    #[test]
    fn cube_far_field_is_point_mass() {
        let c = cube(2.0);
        let poly = PolyhedronGravity::new(c, 2000.0, G).unwrap();
        let p = Vector3::new(100.0, 37.0, -20.0).normalize() * 100.0 * 3f64.sqrt();
        let got = poly.evaluate(&p).unwrap();
        let want = point_mass_accel(poly.mu(), &p).unwrap();
        assert!(!got.interior);
        assert_relative_eq!(got.accel, want, max_relative = 1e-6);
    }

    #[test]
    fn icosphere_matches_sphere_field() {
        let s = icosphere(3, 10.0);
        let poly = PolyhedronGravity::new(s, 1000.0, G).unwrap();
        for p in [
            Vector3::new(12.0, 0.0, 0.0),
            Vector3::new(-8.0, 9.0, 4.0),
            Vector3::new(0.0, 0.0, 30.0),
        ] {
            let got = poly.evaluate(&p).unwrap().accel;
            let want = point_mass_accel(poly.mu(), &p).unwrap();
            assert!((got - want).norm() / want.norm() < 1e-3, "{p}");
        }
    }

    #[test]
    fn interior_point_flags_and_solid_angle() {
        let c = cube(1.0);
        let poly = PolyhedronGravity::new(c.clone(), 1.0, G).unwrap();
        let s = poly.evaluate(&Vector3::zeros()).unwrap();
        assert!(s.interior);
        assert_relative_eq!(s.laplacian, -4.0 * PI, epsilon = 1e-9);
        assert_relative_eq!(
            polyhedron_laplacian(&c, &Vector3::zeros()).unwrap(),
            -4.0 * PI,
            epsilon = 1e-9
        );
    }

    #[test]
    fn exterior_solid_angle_vanishes() {
        let c = cube(1.0);
        assert!(
            polyhedron_laplacian(&c, &Vector3::new(10.0 * 0.87, 0.0, 0.0))
                .unwrap()
                .abs()
                < 1e-9
        );
        // 1 mm outside the centre of the +x face
        assert!(
            polyhedron_laplacian(&c, &Vector3::new(0.5 + 1e-3, 0.0, 0.0))
                .unwrap()
                .abs()
                < 1e-6
        );
    }

    #[test]
    fn surface_points_are_reported() {
        let c = cube(1.0);
        let poly = PolyhedronGravity::new(c.clone(), 1.0, G).unwrap();
        assert!(matches!(
            poly.evaluate(&Vector3::new(0.5, 0.5, 0.0)),
            Err(GravityError::OnEdge(_))
        ));
        assert!(matches!(
            polyhedron_laplacian(&c, &Vector3::new(0.5, 0.1, 0.2)),
            Err(GravityError::OnFace(_))
        ));
    }
}
