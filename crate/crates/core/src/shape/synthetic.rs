//! Generated test shapes and coarse stand-ins for Itokawa, Bennu and 67P.
//!
//! The stand-ins are star-shaped deformations of an icosphere, built so their
//! overall dimensions match the published bodies. They are not the real
//! shape models; load a PDS/OBJ file for that.

use std::collections::HashMap;

use nalgebra::Vector3;

use super::{normalize_to_body_frame, PolyhedronShape, ShapeError};

/// Names accepted by [`builtin`].
pub const BUILTIN_SHAPES: &[&str] = &["cube", "sphere", "itokawa", "bennu", "67p"];

/// Axis-aligned cube of side `side` centred at the origin.
pub fn cube(side: f64) -> PolyhedronShape {
    box_shape(Vector3::new(side, side, side))
}

/// Axis-aligned box with edge lengths `dims`, centred at the origin.
pub fn box_shape(dims: Vector3<f64>) -> PolyhedronShape {
    let h = dims / 2.0;
    let vertices = (0..8)
        .map(|i| {
            Vector3::new(
                if i & 1 == 0 { -h.x } else { h.x },
                if i & 2 == 0 { -h.y } else { h.y },
                if i & 4 == 0 { -h.z } else { h.z },
            )
        })
        .collect();
    // outward CCW triangles
    let faces = vec![
        [0, 2, 3],
        [0, 3, 1], // -z
        [4, 5, 7],
        [4, 7, 6], // +z
        [0, 1, 5],
        [0, 5, 4], // -y
        [2, 6, 7],
        [2, 7, 3], // +y
        [0, 4, 6],
        [0, 6, 2], // -x
        [1, 3, 7],
        [1, 7, 5], // +x
    ];
    PolyhedronShape::new(vertices, faces).expect("box mesh is valid")
}

/// Unit-direction vertices and faces of a subdivided icosahedron.
fn icosphere_directions(subdivisions: u32) -> (Vec<Vector3<f64>>, Vec<[usize; 3]>) {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vector3<f64>> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .iter()
    .map(|p| Vector3::from(*p).normalize())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut cache: HashMap<(usize, usize), usize> = HashMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vector3<f64>>| {
            let key = (a.min(b), a.max(b));
            *cache.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) / 2.0).normalize());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

/// Icosphere of the given radius; `subdivisions = 3` gives 1280 faces.
pub fn icosphere(subdivisions: u32, radius: f64) -> PolyhedronShape {
    star_shaped(subdivisions, |_| radius)
}

/// Star-shaped body: each icosphere direction `d` is pushed to `radius(d)`.
pub fn star_shaped(subdivisions: u32, radius: impl Fn(&Vector3<f64>) -> f64) -> PolyhedronShape {
    let (dirs, faces) = icosphere_directions(subdivisions);
    let vertices = dirs.iter().map(|d| d * radius(d)).collect();
    PolyhedronShape::new(vertices, faces).expect("star-shaped mesh is valid")
}

fn ellipsoid_radius(d: &Vector3<f64>, axes: Vector3<f64>) -> f64 {
    1.0 / ((d.x / axes.x).powi(2) + (d.y / axes.y).powi(2) + (d.z / axes.z).powi(2)).sqrt()
}

/// Elongated contact binary about 535 x 294 x 209 m with a waist and a smaller head lobe.
pub fn itokawa_like(subdivisions: u32) -> PolyhedronShape {
    let axes = Vector3::new(267.5, 147.0, 104.5);
    star_shaped(subdivisions, |d| {
        let neck = 1.0 - 0.22 * (-((d.x - 0.15) / 0.22).powi(2)).exp();
        let head = 1.0 - 0.12 * d.x.max(0.0);
        ellipsoid_radius(d, axes) * neck * head
    })
}

/// Spinning top 565 x 535 x 508 m: a triaxial ellipsoid with a 10 m equatorial
/// ridge. Uniform density gives J2 ≈ 0.037 at 246 m.
pub fn bennu_like(subdivisions: u32) -> PolyhedronShape {
    let ridge = 10.0;
    let axes = Vector3::new(282.5 - ridge, 267.5 - ridge, 254.0);
    star_shaped(subdivisions, |d| {
        ellipsoid_radius(d, axes) + ridge * (1.0 - d.z * d.z).powi(6)
    })
}

/// Bilobed comet nucleus about 4.1 x 2.6 x 2.1 km.
pub fn comet_67p_like(subdivisions: u32) -> PolyhedronShape {
    let axes = Vector3::new(2050.0, 1300.0, 1050.0);
    star_shaped(subdivisions, |d| {
        let neck = 1.0 - 0.3 * (-((d.x - 0.2) / 0.25).powi(2)).exp();
        let head = 1.0 - 0.2 * d.x.max(0.0);
        ellipsoid_radius(d, axes) * neck * head
    })
}

/// Looks up a generated shape by name, normalised to its body frame.
pub fn builtin(name: &str) -> Result<PolyhedronShape, ShapeError> {
    let raw = match name.to_ascii_lowercase().as_str() {
        "cube" => cube(1.0),
        "sphere" => icosphere(3, 1.0),
        "itokawa" => itokawa_like(3),
        "bennu" => bennu_like(3),
        "67p" => comet_67p_like(3),
        other => {
            return Err(ShapeError::Degenerate(format!(
                "unknown builtin shape {other:?} (known: {})",
                BUILTIN_SHAPES.join(", ")
            )))
        }
    };
    normalize_to_body_frame(&raw, 1.0)
}
