//! Triangulated shape models and their uniform-density mass properties.
//!
//! Shapes are closed, outward-oriented triangle meshes. [`parse_shape`] reads
//! Wavefront OBJ (`v`/`f` lines) or two-block plate tables; the edge table is
//! built and validated at construction. [`normalize_to_body_frame`] moves the
//! mesh so the body frame sits at the centre of mass with principal axes of
//! inertia along x, y, z (ascending moments, so the spin axis is z).

use std::collections::HashMap;
use std::fmt::Write as _;

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use thiserror::Error;

pub mod synthetic;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShapeError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("face {face} is not a triangle ({count} vertices)")]
    NonTriangularFace { face: usize, count: usize },
    #[error("face {face} references vertex {index}, but only {count} vertices exist")]
    IndexOutOfRange { face: usize, index: i64, count: usize },
    #[error("mesh is not watertight: edge ({0}, {1}) is shared by {2} face(s) instead of 2")]
    NotWatertight(usize, usize, usize),
    #[error("inconsistent face orientation along edge ({0}, {1})")]
    InconsistentOrientation(usize, usize),
    #[error("face normals point inward (signed volume {0} < 0)")]
    InwardNormals(f64),
    #[error("degenerate shape: {0}")]
    Degenerate(String),
    #[error("density must be positive, got {0}")]
    InvalidDensity(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeFormat {
    /// Wavefront OBJ, `v x y z` and `f i j k` with 1-based indices.
    Obj,
    /// Plate table: vertex count, vertex rows, facet count, facet rows (1-based).
    Pds,
}

impl ShapeFormat {
    pub fn from_path(path: &std::path::Path) -> Self {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
        {
            Some(ref e) if e == "obj" => ShapeFormat::Obj,
            _ => ShapeFormat::Pds,
        }
    }
}

/// An edge and the two faces sharing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub vertices: [usize; 2],
    pub faces: [usize; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedronShape {
    vertices: Vec<Vector3<f64>>,
    faces: Vec<[usize; 3]>,
    edges: Vec<Edge>,
}

impl PolyhedronShape {
    /// Builds and validates a closed, outward-oriented mesh.
    pub fn new(vertices: Vec<Vector3<f64>>, faces: Vec<[usize; 3]>) -> Result<Self, ShapeError> {
        for (fi, f) in faces.iter().enumerate() {
            for &idx in f {
                if idx >= vertices.len() {
                    return Err(ShapeError::IndexOutOfRange {
                        face: fi,
                        index: idx as i64 + 1,
                        count: vertices.len(),
                    });
                }
            }
            if f[0] == f[1] || f[1] == f[2] || f[0] == f[2] {
                return Err(ShapeError::Degenerate(format!("face {fi} repeats a vertex")));
            }
        }
        if vertices.iter().any(|v| !v.iter().all(|x| x.is_finite())) {
            return Err(ShapeError::Degenerate("non-finite vertex coordinate".into()));
        }
        let edges = build_edges(&faces)?;
        let shape = Self { vertices, faces, edges };
        let vol = shape.signed_volume();
        if vol < 0.0 {
            return Err(ShapeError::InwardNormals(vol));
        }
        Ok(shape)
    }

    pub fn vertices(&self) -> &[Vector3<f64>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn face_vertices(&self, f: usize) -> [Vector3<f64>; 3] {
        let [a, b, c] = self.faces[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// V - E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    /// Volume by summing origin-apex tetrahedra.
    pub fn signed_volume(&self) -> f64 {
        (0..self.faces.len())
            .map(|f| {
                let [a, b, c] = self.face_vertices(f);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum()
    }

    /// Largest vertex distance from the origin.
    pub fn circumscribing_radius(&self) -> f64 {
        self.vertices.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Applies `p -> rotationᵀ (p - origin)` to every vertex.
    pub fn transformed(&self, origin: &Vector3<f64>, rotation: &Matrix3<f64>) -> Self {
        let rt = rotation.transpose();
        Self {
            vertices: self.vertices.iter().map(|p| rt * (p - origin)).collect(),
            faces: self.faces.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| p * factor).collect(),
            faces: self.faces.clone(),
            edges: self.edges.clone(),
        }
    }

    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "v {:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        out
    }
}

fn build_edges(faces: &[[usize; 3]]) -> Result<Vec<Edge>, ShapeError> {
    let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(faces.len() * 3);
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (f[k], f[(k + 1) % 3]);
            if directed.insert((a, b), fi).is_some() {
                return Err(ShapeError::InconsistentOrientation(a.min(b), a.max(b)));
            }
        }
    }
    let mut edges = Vec::with_capacity(directed.len() / 2);
    for (&(a, b), &fa) in &directed {
        match directed.get(&(b, a)) {
            Some(&fb) => {
                if a < b {
                    edges.push(Edge {
                        vertices: [a, b],
                        faces: [fa, fb],
                    });
                }
            }
            None => return Err(ShapeError::NotWatertight(a.min(b), a.max(b), 1)),
        }
    }
    edges.sort_by_key(|e| e.vertices);
    Ok(edges)
}

/// Parses an OBJ or plate-table shape. `scale` converts file units to metres
/// (1000 for km files).
pub fn parse_shape(bytes: &[u8], format: ShapeFormat, scale: f64) -> Result<PolyhedronShape, ShapeError> {
    let text = std::str::from_utf8(bytes).map_err(|e| ShapeError::Parse {
        line: 0,
        message: format!("not UTF-8: {e}"),
    })?;
    let (vertices, faces) = match format {
        ShapeFormat::Obj => parse_obj(text)?,
        ShapeFormat::Pds => parse_plate_table(text)?,
    };
    let vertices = vertices.into_iter().map(|v| v * scale).collect::<Vec<_>>();
    let count = vertices.len();
    let mut tris = Vec::with_capacity(faces.len());
    for (fi, f) in faces.into_iter().enumerate() {
        if f.len() != 3 {
            return Err(ShapeError::NonTriangularFace {
                face: fi,
                count: f.len(),
            });
        }
        let mut tri = [0usize; 3];
        for (k, &idx) in f.iter().enumerate() {
            if idx < 1 || idx as usize > count {
                return Err(ShapeError::IndexOutOfRange {
                    face: fi,
                    index: idx,
                    count,
                });
            }
            tri[k] = idx as usize - 1;
        }
        tris.push(tri);
    }
    PolyhedronShape::new(vertices, tris)
}

fn parse_f64(tok: &str, line: usize) -> Result<f64, ShapeError> {
    tok.parse().map_err(|_| ShapeError::Parse {
        line,
        message: format!("expected a number, found {tok:?}"),
    })
}

fn parse_index(tok: &str, line: usize) -> Result<i64, ShapeError> {
    // OBJ allows "i/t/n"; only the position index matters here.
    let head = tok.split('/').next().unwrap_or(tok);
    head.parse().map_err(|_| ShapeError::Parse {
        line,
        message: format!("expected an integer index, found {tok:?}"),
    })
}

type RawMesh = (Vec<Vector3<f64>>, Vec<Vec<i64>>);

fn parse_obj(text: &str) -> Result<RawMesh, ShapeError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line_no = n + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let xyz: Vec<f64> = toks.map(|t| parse_f64(t, line_no)).collect::<Result<_, _>>()?;
                if xyz.len() < 3 {
                    return Err(ShapeError::Parse {
                        line: line_no,
                        message: "vertex needs three coordinates".into(),
                    });
                }
                vertices.push(Vector3::new(xyz[0], xyz[1], xyz[2]));
            }
            Some("f") => {
                let idx: Vec<i64> = toks.map(|t| parse_index(t, line_no)).collect::<Result<_, _>>()?;
                faces.push(idx);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

fn parse_plate_table(text: &str) -> Result<RawMesh, ShapeError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (_, nv) = header_after(&mut lines, "vertex")?;
    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (n, l) = lines.next().ok_or(ShapeError::Parse {
            line: 0,
            message: "truncated vertex block".into(),
        })?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let coords = match toks.len() {
            3 => &toks[..],
            4 => &toks[1..],
            _ => {
                return Err(ShapeError::Parse {
                    line: n,
                    message: "vertex row needs 3 coordinates (optionally preceded by an index)".into(),
                })
            }
        };
        vertices.push(Vector3::new(
            parse_f64(coords[0], n)?,
            parse_f64(coords[1], n)?,
            parse_f64(coords[2], n)?,
        ));
    }
    let (_, nf) = header_after(&mut lines, "facet")?;
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (n, l) = lines.next().ok_or(ShapeError::Parse {
            line: 0,
            message: "truncated facet block".into(),
        })?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        // plate rows carry a leading plate number when four columns are present
        let idx = if toks.len() == 4 { &toks[1..] } else { &toks[..] };
        faces.push(idx.iter().map(|t| parse_index(t, n)).collect::<Result<Vec<_>, _>>()?);
    }
    Ok((vertices, faces))
}

fn header_after<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    what: &str,
) -> Result<(usize, usize), ShapeError> {
    let (n, l) = lines.next().ok_or(ShapeError::Parse {
        line: 0,
        message: format!("missing {what} count"),
    })?;
    let count = l
        .split_whitespace()
        .next()
        .and_then(|t| t.parse::<usize>().ok())
        .ok_or(ShapeError::Parse {
            line: n,
            message: format!("expected {what} count, found {l:?}"),
        })?;
    Ok((n, count))
}

/// Volume, centroid and central inertia of a uniform-density polyhedron.
#[derive(Debug, Clone, PartialEq)]
pub struct MassProperties {
    /// m³
    pub volume: f64,
    /// kg/m³
    pub density: f64,
    /// kg
    pub mass: f64,
    pub centroid: Vector3<f64>,
    /// Inertia about the centroid, kg·m².
    pub inertia: Matrix3<f64>,
    /// Principal moments in ascending order.
    pub principal_moments: Vector3<f64>,
    /// Columns are the principal axes (x, y, z) expressed in the input frame.
    pub rotation: Matrix3<f64>,
}

pub fn mass_properties(shape: &PolyhedronShape, density: f64) -> Result<MassProperties, ShapeError> {
    if !(density > 0.0) || !density.is_finite() {
        return Err(ShapeError::InvalidDensity(density));
    }
    let mut volume = 0.0;
    let mut first = Vector3::zeros();
    let mut second = Matrix3::zeros();
    for f in 0..shape.faces.len() {
        let [a, b, c] = shape.face_vertices(f);
        let det = a.dot(&b.cross(&c));
        volume += det / 6.0;
        let sum = a + b + c;
        first += sum * (det / 24.0);
        // ∫ x xᵀ over the tetrahedron (0, a, b, c)
        second += (a * a.transpose() + b * b.transpose() + c * c.transpose() + sum * sum.transpose()) * (det / 120.0);
    }
    let scale = shape.circumscribing_radius().max(1e-300);
    if !(volume > 1e-12 * scale.powi(3)) {
        return Err(ShapeError::Degenerate(format!("volume {volume} is not positive")));
    }
    let centroid = first / volume;
    let central = (second - centroid * centroid.transpose() * volume) * density;
    let inertia = Matrix3::identity() * central.trace() - central;
    let (principal_moments, rotation) = principal_axes(&inertia);
    Ok(MassProperties {
        volume,
        density,
        mass: volume * density,
        centroid,
        inertia,
        principal_moments,
        rotation,
    })
}

/// Ascending principal moments and a proper rotation whose columns are the
/// corresponding axes. An already-diagonal tensor yields a pure permutation
/// (identity when already ascending), so normalisation is idempotent.
fn principal_axes(inertia: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>) {
    let scale = inertia.trace().abs().max(f64::MIN_POSITIVE);
    let off = inertia[(0, 1)].abs() + inertia[(0, 2)].abs() + inertia[(1, 2)].abs();
    let (values, vectors) = if off <= 1e-9 * scale {
        (inertia.diagonal(), Matrix3::identity())
    } else {
        let eig = SymmetricEigen::new(*inertia);
        (eig.eigenvalues, eig.eigenvectors)
    };
    // near-equal moments keep their original order so degenerate bodies are not permuted
    let tol = 1e-9 * scale;
    let mut order = [0usize, 1, 2];
    for i in 1..3 {
        let mut j = i;
        while j > 0 && values[order[j - 1]] > values[order[j]] + tol {
            order.swap(j - 1, j);
            j -= 1;
        }
    }
    let moments = Vector3::new(values[order[0]], values[order[1]], values[order[2]]);
    let mut x: Vector3<f64> = vectors.column(order[0]).into();
    let mut y: Vector3<f64> = vectors.column(order[1]).into();
    if x.x < 0.0 {
        x = -x;
    }
    if y.y < 0.0 {
        y = -y;
    }
    let z = x.cross(&y);
    (moments, Matrix3::from_columns(&[x, y, z]))
}

/// Recentres the shape on its centre of mass and aligns it with its principal axes.
pub fn normalize_to_body_frame(shape: &PolyhedronShape, density: f64) -> Result<PolyhedronShape, ShapeError> {
    let props = mass_properties(shape, density)?;
    Ok(shape.transformed(&props.centroid, &props.rotation))
}

#[cfg(test)]
mod tests {
    use super::synthetic::*;
    use super::*;
    use approx::assert_relative_eq;

    const CUBE_OBJ: &str = "\
v -0.5 -0.5 -0.5
v 0.5 -0.5 -0.5
v 0.5 0.5 -0.5
v -0.5 0.5 -0.5
v -0.5 -0.5 0.5
v 0.5 -0.5 0.5
v 0.5 0.5 0.5
v -0.5 0.5 0.5
f 1 4 3
f 1 3 2
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
";

    #[test]
    fn parses_cube_obj() {
        let s = parse_shape(CUBE_OBJ.as_bytes(), ShapeFormat::Obj, 1.0).unwrap();
        assert_eq!(s.vertices().len(), 8);
        assert_eq!(s.faces().len(), 12);
        assert_eq!(s.edges().len(), 18);
        assert_eq!(s.euler_characteristic(), 2);
        for e in s.edges() {
            assert_ne!(e.faces[0], e.faces[1]);
        }
    }

    #[test]
    fn open_cube_is_not_watertight() {
        let open: String = CUBE_OBJ
            .lines()
            .filter(|l| *l != "f 1 4 3")
            .map(|l| format!("{l}\n"))
            .collect();
        let err = parse_shape(open.as_bytes(), ShapeFormat::Obj, 1.0).unwrap_err();
        assert!(matches!(err, ShapeError::NotWatertight(..)), "{err:?}");
    }

    #[test]
    fn distinct_parse_errors() {
        let quad = CUBE_OBJ.replace("f 1 4 3", "f 1 4 3 2");
        assert!(matches!(
            parse_shape(quad.as_bytes(), ShapeFormat::Obj, 1.0),
            Err(ShapeError::NonTriangularFace { face: 0, count: 4 })
        ));
        let oob = CUBE_OBJ.replace("f 1 4 3", "f 1 4 9");
        assert!(matches!(
            parse_shape(oob.as_bytes(), ShapeFormat::Obj, 1.0),
            Err(ShapeError::IndexOutOfRange { index: 9, .. })
        ));
        let flipped = CUBE_OBJ.replace("f 1 4 3", "f 1 3 4");
        assert!(matches!(
            parse_shape(flipped.as_bytes(), ShapeFormat::Obj, 1.0),
            Err(ShapeError::InconsistentOrientation(..))
        ));
        let garbage = CUBE_OBJ.replace("v 0.5 0.5 0.5", "v 0.5 x 0.5");
        assert!(matches!(
            parse_shape(garbage.as_bytes(), ShapeFormat::Obj, 1.0),
            Err(ShapeError::Parse { line: 7, .. })
        ));
    }

    #[test]
    fn inward_mesh_is_rejected() {
        let inverted: String = CUBE_OBJ
            .lines()
            .map(|l| {
                let t: Vec<&str> = l.split_whitespace().collect();
                if t[0] == "f" {
                    format!("f {} {} {}\n", t[1], t[3], t[2])
                } else {
                    format!("{l}\n")
                }
            })
            .collect();
        assert!(matches!(
            parse_shape(inverted.as_bytes(), ShapeFormat::Obj, 1.0),
            Err(ShapeError::InwardNormals(_))
        ));
    }

    #[test]
    fn parses_plate_table_with_unit_scale() {
        let cube = cube(1.0);
        let mut text = format!("{}\n", cube.vertices().len());
        for (i, v) in cube.vertices().iter().enumerate() {
            text += &format!("{} {} {} {}\n", i + 1, v.x / 1000.0, v.y / 1000.0, v.z / 1000.0);
        }
        text += &format!("{}\n", cube.faces().len());
        for (i, f) in cube.faces().iter().enumerate() {
            text += &format!("{} {} {} {}\n", i + 1, f[0] + 1, f[1] + 1, f[2] + 1);
        }
        let s = parse_shape(text.as_bytes(), ShapeFormat::Pds, 1000.0).unwrap();
        assert_eq!(s.edges().len(), 18);
        assert_relative_eq!(s.signed_volume(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn icosphere_edge_count() {
        let s = icosphere(3, 1.0);
        assert_eq!(s.faces().len(), 1280);
        assert_eq!(s.edges().len(), 1920);
        assert_eq!(s.euler_characteristic(), 2);
    }

    #[test]
    fn unit_cube_mass_properties() {
        let p = mass_properties(&cube(1.0), 1.0).unwrap();
        assert_relative_eq!(p.volume, 1.0, max_relative = 1e-14);
        assert!(p.centroid.norm() < 1e-15);
    }

    #[test]
    fn cube_inertia_matches_textbook() {
        let (side, density) = (3.0, 2.5);
        let p = mass_properties(&cube(side), density).unwrap();
        let m = density * side.powi(3);
        let expected = m * side * side / 6.0;
        assert_relative_eq!(
            p.inertia,
            Matrix3::identity() * expected,
            max_relative = 1e-12,
            epsilon = 1e-12
        );
        assert_relative_eq!(p.rotation.determinant(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn translated_cube_keeps_central_inertia() {
        let c = cube(2.0);
        let shift = Vector3::new(1.0, 2.0, 3.0);
        let moved = c.transformed(&-shift, &Matrix3::identity());
        let p0 = mass_properties(&c, 1.0).unwrap();
        let p1 = mass_properties(&moved, 1.0).unwrap();
        assert_relative_eq!(p1.centroid, shift, epsilon = 1e-12);
        assert_relative_eq!(p1.volume, p0.volume, max_relative = 1e-10);
        assert_relative_eq!(p1.inertia, p0.inertia, max_relative = 1e-10, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_density_is_rejected() {
        assert!(mass_properties(&cube(1.0), 0.0).is_err());
    }

    #[test]
    fn normalize_is_identity_on_normalized_cube() {
        let c = cube(1.0);
        let n = normalize_to_body_frame(&c, 1.0).unwrap();
        for (a, b) in c.vertices().iter().zip(n.vertices()) {
            assert_relative_eq!(a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn normalize_recenters_translated_cube() {
        let c = cube(1.0);
        let moved = c.transformed(&Vector3::new(-5.0, 1.0, 2.0), &Matrix3::identity());
        let n = normalize_to_body_frame(&moved, 1.0).unwrap();
        for (a, b) in c.vertices().iter().zip(n.vertices()) {
            assert_relative_eq!(a, b, epsilon = 1e-12);
        }
    }

    fn sorted(vs: &[Vector3<f64>]) -> Vec<[f64; 3]> {
        let round = |x: f64| (x * 1e6).round() / 1e6;
        let mut out: Vec<[f64; 3]> = vs.iter().map(|v| [round(v.x), round(v.y), round(v.z)]).collect();
        out.sort_by(|a, b| a.partial_cmp(b).unwrap());
        out
    }

    #[test]
    fn normalize_realigns_rotated_box() {
        // principal axes of an isotropic cube are undefined; a 3x2x1 box is not
        let b = box_shape(Vector3::new(1.0, 2.0, 3.0));
        let angle = 30f64.to_radians();
        let rot = nalgebra::Rotation3::from_axis_angle(&Vector3::z_axis(), angle);
        let rotated = b.transformed(&Vector3::new(4.0, -1.0, 0.5), rot.matrix());
        let n = normalize_to_body_frame(&rotated, 1.0).unwrap();
        // ascending moments: longest axis (z, 3) -> x, shortest (x, 1) -> z
        let expected: Vec<Vector3<f64>> = b.vertices().iter().map(|v| Vector3::new(v.z, v.y, v.x)).collect();
        let (got, want) = (sorted(n.vertices()), sorted(&expected));
        for (g, w) in got.iter().zip(&want) {
            for k in 0..3 {
                assert!((g[k] - w[k]).abs() < 1e-9, "{g:?} vs {w:?}");
            }
        }
        let p = mass_properties(&n, 1.0).unwrap();
        let off = p.inertia[(0, 1)].abs() + p.inertia[(0, 2)].abs() + p.inertia[(1, 2)].abs();
        assert!(off <= 1e-9 * p.inertia.trace());
        assert!(p.centroid.norm() < 1e-12);
    }

    #[test]
    fn divergence_volume_matches_centroid_tetrahedra() {
        let s = synthetic::builtin("itokawa").unwrap();
        let p = mass_properties(&s, 1.0).unwrap();
        // divergence theorem: V = 1/3 Σ (face centroid · n̂) area
        let div: f64 = (0..s.faces().len())
            .map(|f| {
                let [a, b, c] = s.face_vertices(f);
                let n2 = (b - a).cross(&(c - a));
                (a + b + c).dot(&n2) / 18.0
            })
            .sum();
        let tets: f64 = (0..s.faces().len())
            .map(|f| {
                let [a, b, c] = s.face_vertices(f);
                let (a, b, c) = (a - p.centroid, b - p.centroid, c - p.centroid);
                a.dot(&b.cross(&c)) / 6.0
            })
            .sum();
        assert_relative_eq!(div, tets, max_relative = 1e-12);
    }
}
