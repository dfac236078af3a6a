//! Unnormalized spherical-harmonics field (no Condon-Shortley phase).
//!
//! The potential is summed directly from associated Legendre functions; the
//! acceleration uses Cunningham's V/W recursion, which needs terms up to
//! degree N+1 but never divides by cos φ.

use std::fmt::Write as _;

use nalgebra::Vector3;

use super::GravityError;
use crate::shape::PolyhedronShape;

/// Unnormalized terms overflow the useful f64 range beyond this.
pub const MAX_DEGREE: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicsModel {
    mu: f64,
    reference_radius: f64,
    degree: usize,
    c: Vec<Vec<f64>>,
    s: Vec<Vec<f64>>,
}

fn triangle(degree: usize) -> Vec<Vec<f64>> {
    (0..=degree).map(|n| vec![0.0; n + 1]).collect()
}

impl HarmonicsModel {
    /// `c[n][m]` and `s[n][m]` for `m <= n <= N`; rows may be longer than needed.
    pub fn new(mu: f64, reference_radius: f64, c: Vec<Vec<f64>>, s: Vec<Vec<f64>>) -> Result<Self, GravityError> {
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(GravityError::InvalidModel(format!("μ must be positive, got {mu}")));
        }
        if !(reference_radius > 0.0) || !reference_radius.is_finite() {
            return Err(GravityError::InvalidModel(format!(
                "reference radius must be positive, got {reference_radius}"
            )));
        }
        if c.is_empty() || c.len() != s.len() {
            return Err(GravityError::InvalidModel(
                "C and S must have the same, non-zero number of degrees".into(),
            ));
        }
        let degree = c.len() - 1;
        if degree > MAX_DEGREE {
            return Err(GravityError::DegreeTooHigh {
                requested: degree,
                max: MAX_DEGREE,
            });
        }
        for n in 0..=degree {
            if c[n].len() < n + 1 || s[n].len() < n + 1 {
                return Err(GravityError::InvalidModel(format!("degree {n} row is too short")));
            }
            if c[n].iter().chain(&s[n]).any(|x| !x.is_finite()) {
                return Err(GravityError::InvalidModel(format!(
                    "non-finite coefficient at degree {n}"
                )));
            }
        }
        let mut c: Vec<Vec<f64>> = c.into_iter().enumerate().map(|(n, row)| row[..=n].to_vec()).collect();
        let mut s: Vec<Vec<f64>> = s.into_iter().enumerate().map(|(n, row)| row[..=n].to_vec()).collect();
        for n in 0..=degree {
            s[n][0] = 0.0;
        }
        if c[0][0] == 0.0 {
            c[0][0] = 1.0;
        }
        Ok(Self {
            mu,
            reference_radius,
            degree,
            c,
            s,
        })
    }

    /// Degree-0 model: the central field only.
    pub fn point_mass(mu: f64, reference_radius: f64) -> Result<Self, GravityError> {
        Self::new(mu, reference_radius, vec![vec![1.0]], vec![vec![0.0]])
    }

    /// Parses "n m C S" lines. Lines beginning with `#` are comments;
    /// `normalized` selects fully-normalized input.
    pub fn from_text(mu: f64, reference_radius: f64, text: &str, normalized: bool) -> Result<Self, GravityError> {
        let (c, s) = parse_coefficients(text, normalized)?;
        Self::new(mu, reference_radius, c, s)
    }

    /// Dumps unnormalized coefficients in the same "n m C S" format.
    pub fn to_text(&self) -> String {
        let mut out = format!("# mu {:e}\n# reference_radius {:e}\n", self.mu, self.reference_radius);
        for n in 0..=self.degree {
            for m in 0..=n {
                let _ = writeln!(out, "{n} {m} {:e} {:e}", self.c[n][m], self.s[n][m]);
            }
        }
        out
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn reference_radius(&self) -> f64 {
        self.reference_radius
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn c(&self, n: usize, m: usize) -> f64 {
        self.c[n][m]
    }

    pub fn s(&self, n: usize, m: usize) -> f64 {
        self.s[n][m]
    }

    /// Same model cut to `degree`.
    pub fn truncated(&self, degree: usize) -> Self {
        let d = degree.min(self.degree);
        Self {
            degree: d,
            c: self.c[..=d].to_vec(),
            s: self.s[..=d].to_vec(),
            ..*self
        }
    }

    /// `U = μ/r Σ (r₀/r)ⁿ P_nm(sin φ)(C cos mλ + S sin mλ)`.
    pub fn potential(&self, r: &Vector3<f64>) -> Result<f64, GravityError> {
        let rn = r.norm();
        if rn == 0.0 {
            return Err(GravityError::ZeroRadius);
        }
        let sin_lat = r.z / rn;
        let cos_lat = r.xy().norm() / rn;
        let lon = r.y.atan2(r.x);
        let p = legendre(self.degree, sin_lat, cos_lat);
        let ratio = self.reference_radius / rn;
        let mut total = 0.0;
        let mut scale = 1.0;
        for n in 0..=self.degree {
            let mut row = 0.0;
            for m in 0..=n {
                let (sm, cm) = (m as f64 * lon).sin_cos();
                row += p[n][m] * (self.c[n][m] * cm + self.s[n][m] * sm);
            }
            total += scale * row;
            scale *= ratio;
        }
        Ok(self.mu / rn * total)
    }

    pub fn accel(&self, r: &Vector3<f64>) -> Result<Vector3<f64>, GravityError> {
        let r2 = r.norm_squared();
        if r2 == 0.0 {
            return Err(GravityError::ZeroRadius);
        }
        let n_max = self.degree + 1;
        let r0 = self.reference_radius;
        let (x0, y0, z0) = (r.x * r0 / r2, r.y * r0 / r2, r.z * r0 / r2);
        let rho = r0 * r0 / r2;
        let mut v = triangle(n_max);
        let mut w = triangle(n_max);
        v[0][0] = r0 / r2.sqrt();
        for m in 0..=n_max {
            if m > 0 {
                let k = (2 * m - 1) as f64;
                v[m][m] = k * (x0 * v[m - 1][m - 1] - y0 * w[m - 1][m - 1]);
                w[m][m] = k * (x0 * w[m - 1][m - 1] + y0 * v[m - 1][m - 1]);
            }
            if m < n_max {
                let k = (2 * m + 1) as f64;
                v[m + 1][m] = k * z0 * v[m][m];
                w[m + 1][m] = k * z0 * w[m][m];
            }
            for n in (m + 2)..=n_max {
                let a = (2 * n - 1) as f64 / (n - m) as f64;
                let b = (n + m - 1) as f64 / (n - m) as f64;
                v[n][m] = a * z0 * v[n - 1][m] - b * rho * v[n - 2][m];
                w[n][m] = a * z0 * w[n - 1][m] - b * rho * w[n - 2][m];
            }
        }

        let mut acc = Vector3::zeros();
        for n in 0..=self.degree {
            for m in 0..=n {
                let (c, s) = (self.c[n][m], self.s[n][m]);
                if m == 0 {
                    acc.x -= c * v[n + 1][1];
                    acc.y -= c * w[n + 1][1];
                } else {
                    let f = ((n - m + 2) * (n - m + 1)) as f64;
                    acc.x += 0.5 * (-c * v[n + 1][m + 1] - s * w[n + 1][m + 1])
                        + 0.5 * f * (c * v[n + 1][m - 1] + s * w[n + 1][m - 1]);
                    acc.y += 0.5 * (-c * w[n + 1][m + 1] + s * v[n + 1][m + 1])
                        + 0.5 * f * (-c * w[n + 1][m - 1] + s * v[n + 1][m - 1]);
                }
                acc.z += (n - m + 1) as f64 * (-c * v[n + 1][m] - s * w[n + 1][m]);
            }
        }
        Ok(acc * (self.mu / (r0 * r0)))
    }
}

/// `P_nm(sin φ)` for `m <= n <= degree`, forward column recursion.
fn legendre(degree: usize, sin_lat: f64, cos_lat: f64) -> Vec<Vec<f64>> {
    let mut p = triangle(degree);
    p[0][0] = 1.0;
    for m in 0..=degree {
        if m > 0 {
            p[m][m] = (2 * m - 1) as f64 * cos_lat * p[m - 1][m - 1];
        }
        if m < degree {
            p[m + 1][m] = (2 * m + 1) as f64 * sin_lat * p[m][m];
        }
        for n in (m + 2)..=degree {
            p[n][m] = ((2 * n - 1) as f64 * sin_lat * p[n - 1][m] - (n + m - 1) as f64 * p[n - 2][m]) / (n - m) as f64;
        }
    }
    p
}

fn factorial_ratio(n: usize, m: usize) -> f64 {
    // (n-m)! / (n+m)!
    ((n - m + 1)..=(n + m)).fold(1.0, |acc, k| acc / k as f64)
}

/// Factor converting a fully-normalized coefficient into an unnormalized one.
fn normalization(n: usize, m: usize) -> f64 {
    let delta = if m == 0 { 1.0 } else { 2.0 };
    (delta * (2 * n + 1) as f64 * factorial_ratio(n, m)).sqrt()
}

/// Triangular coefficient table indexed `[n][m]`.
pub type CoefficientTable = Vec<Vec<f64>>;

/// Reads "n m C S" records into triangular C and S tables.
pub fn parse_coefficients(text: &str, normalized: bool) -> Result<(CoefficientTable, CoefficientTable), GravityError> {
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| GravityError::Parse { line: idx + 1, message };
        let tokens: Vec<&str> = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        if tokens.len() != 4 {
            return Err(err(format!("expected 4 fields \"n m C S\", found {}", tokens.len())));
        }
        let n: usize = tokens[0]
            .parse()
            .map_err(|_| err(format!("bad degree {:?}", tokens[0])))?;
        let m: usize = tokens[1]
            .parse()
            .map_err(|_| err(format!("bad order {:?}", tokens[1])))?;
        let c: f64 = tokens[2]
            .parse()
            .map_err(|_| err(format!("bad C value {:?}", tokens[2])))?;
        let s: f64 = tokens[3]
            .parse()
            .map_err(|_| err(format!("bad S value {:?}", tokens[3])))?;
        if m > n {
            return Err(err(format!("order {m} exceeds degree {n}")));
        }
        if n > MAX_DEGREE {
            return Err(GravityError::DegreeTooHigh {
                requested: n,
                max: MAX_DEGREE,
            });
        }
        records.push((n, m, c, s));
    }
    let degree = records.iter().map(|r| r.0).max().unwrap_or(0);
    let mut c = triangle(degree);
    let mut s = triangle(degree);
    c[0][0] = 1.0;
    for (n, m, cv, sv) in records {
        let k = if normalized { normalization(n, m) } else { 1.0 };
        c[n][m] = cv * k;
        s[n][m] = sv * k;
    }
    Ok((c, s))
}

fn gauss_legendre(q: usize) -> Vec<(f64, f64)> {
    // nodes and weights on [0, 1]
    let mut out = Vec::with_capacity(q);
    for i in 0..q {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=q {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pq = if q == 1 { x } else { p1 };
            let pm = if q == 1 { 1.0 } else { p0 };
            dp = q as f64 * (x * pq - pm) / (x * x - 1.0);
            let dx = pq / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push(((1.0 + x) / 2.0, w / 2.0));
    }
    out
}

/// Regular solid harmonics `rⁿ P_nm(sin φ) (cos mλ, sin mλ)` as polynomials in x, y, z.
fn solid_harmonics(p: &Vector3<f64>, degree: usize, re: &mut [Vec<f64>], im: &mut [Vec<f64>]) {
    let r2 = p.norm_squared();
    re[0][0] = 1.0;
    im[0][0] = 0.0;
    for m in 0..=degree {
        if m > 0 {
            let k = (2 * m - 1) as f64;
            re[m][m] = k * (p.x * re[m - 1][m - 1] - p.y * im[m - 1][m - 1]);
            im[m][m] = k * (p.x * im[m - 1][m - 1] + p.y * re[m - 1][m - 1]);
        }
        if m < degree {
            let k = (2 * m + 1) as f64;
            re[m + 1][m] = k * p.z * re[m][m];
            im[m + 1][m] = k * p.z * im[m][m];
        }
        for n in (m + 2)..=degree {
            let a = (2 * n - 1) as f64 / (n - m) as f64;
            let b = (n + m - 1) as f64 / (n - m) as f64;
            re[n][m] = a * p.z * re[n - 1][m] - b * r2 * re[n - 2][m];
            im[n][m] = a * p.z * im[n - 1][m] - b * r2 * im[n - 2][m];
        }
    }
}

/// Exact (to rounding) coefficients of a uniform polyhedron, by integrating
/// the solid harmonics over origin-apex tetrahedra with a collapsed
/// Gauss-Legendre rule. The coefficients depend only on the geometry; `μ` is
/// `G ρ V`.
pub fn harmonics_from_polyhedron(
    shape: &PolyhedronShape,
    density: f64,
    gravitational_constant: f64,
    degree: usize,
    reference_radius: f64,
) -> Result<HarmonicsModel, GravityError> {
    if degree > MAX_DEGREE {
        return Err(GravityError::DegreeTooHigh {
            requested: degree,
            max: MAX_DEGREE,
        });
    }
    if !(density > 0.0) {
        return Err(GravityError::InvalidModel(format!(
            "density must be positive, got {density}"
        )));
    }
    let q = (degree + 4) / 2;
    let rule = gauss_legendre(q);
    // (u1, u2, u3, weight × Jacobian) on the unit simplex
    let mut simplex = Vec::with_capacity(q * q * q);
    for &(xi, wx) in &rule {
        for &(eta, wy) in &rule {
            for &(zeta, wz) in &rule {
                let u1 = xi;
                let u2 = (1.0 - xi) * eta;
                let u3 = (1.0 - xi) * (1.0 - eta) * zeta;
                let jac = (1.0 - xi).powi(2) * (1.0 - eta);
                simplex.push((u1, u2, u3, wx * wy * wz * jac));
            }
        }
    }

    let mut sum_re = triangle(degree);
    let mut sum_im = triangle(degree);
    let mut re = triangle(degree);
    let mut im = triangle(degree);
    let mut volume = 0.0;
    for f in 0..shape.faces().len() {
        let [a, b, c] = shape.face_vertices(f);
        let det = a.dot(&b.cross(&c));
        if det == 0.0 {
            continue;
        }
        volume += det / 6.0;
        for &(u1, u2, u3, w) in &simplex {
            let p = a * u1 + b * u2 + c * u3;
            solid_harmonics(&p, degree, &mut re, &mut im);
            let k = w * det;
            for n in 0..=degree {
                for m in 0..=n {
                    sum_re[n][m] += k * re[n][m];
                    sum_im[n][m] += k * im[n][m];
                }
            }
        }
    }
    if !(volume > 0.0) {
        return Err(GravityError::InvalidModel("shape has non-positive volume".into()));
    }

    let mut c = triangle(degree);
    let mut s = triangle(degree);
    let mut scale = 1.0;
    for n in 0..=degree {
        for m in 0..=n {
            let delta = if m == 0 { 1.0 } else { 2.0 };
            let k = delta * factorial_ratio(n, m) / (volume * scale);
            c[n][m] = k * sum_re[n][m];
            s[n][m] = k * sum_im[n][m];
        }
        scale *= reference_radius;
    }
    debug_assert!((c[0][0] - 1.0).abs() < 1e-9);
    c[0][0] = 1.0;
    HarmonicsModel::new(gravitational_constant * density * volume, reference_radius, c, s)
}
