//! Point clouds sampled from built-in geometries.
//!
//! Distances are evaluated on demand from coordinates and a [`Metric`], so a
//! cloud of 10⁴ points does not hold a dense distance matrix next to the
//! kernel matrix.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use magnitude_core::expr::Rat;
use magnitude_core::geometry::{GeometrySpec, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::OracleError;

/// How distances between points are measured.
#[derive(Debug, Clone, PartialEq)]
pub enum Metric {
    Euclidean,
    /// Great-circle distance on a round sphere (or circle) of this radius
    /// centred at the origin.
    Geodesic { radius: f64 },
    /// An explicit row-major distance matrix.
    Matrix(Vec<f64>),
}

/// A finite metric sample with optional measure and boundary data.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub label: String,
    /// Intrinsic dimension of the sampled space.
    pub n: u32,
    /// Coordinate dimension of `coords` (0 for abstract clouds).
    pub ambient: usize,
    pub coords: Vec<f64>,
    pub metric: Metric,
    len: usize,
    /// Measure carried by each point; sums to the volume of the sampled set.
    pub quad_weights: Option<Vec<f64>>,
    /// Distance from each point to the boundary of a domain.
    pub boundary_distance: Option<Vec<f64>>,
    pub seed: u64,
}

impl PointCloud {
    /// A cloud of points in `ℝ^ambient` with the Euclidean metric.
    pub fn euclidean(label: impl Into<String>, n: u32, ambient: usize, coords: Vec<f64>) -> PointCloud {
        assert!(ambient > 0 && coords.len() % ambient == 0, "coordinate buffer does not match the dimension");
        let len = coords.len() / ambient;
        PointCloud { label: label.into(), n, ambient, coords, metric: Metric::Euclidean, len, quad_weights: None, boundary_distance: None, seed: 0 }
    }

    /// An abstract cloud given by its distance matrix.
    pub fn from_distances(label: impl Into<String>, n: u32, d: Vec<Vec<f64>>) -> Result<PointCloud, OracleError> {
        let m = d.len();
        let mut flat = Vec::with_capacity(m * m);
        for (i, row) in d.iter().enumerate() {
            if row.len() != m {
                return Err(OracleError::NotAMetric(format!("row {i} has {} entries, expected {m}", row.len())));
            }
            flat.extend_from_slice(row);
        }
        for i in 0..m {
            if flat[i * m + i] != 0.0 {
                return Err(OracleError::NotAMetric(format!("d({i},{i}) = {} ≠ 0", flat[i * m + i])));
            }
            for j in 0..i {
                let (a, b) = (flat[i * m + j], flat[j * m + i]);
                if a != b || !(a >= 0.0) || !a.is_finite() {
                    return Err(OracleError::NotAMetric(format!("d({i},{j}) = {a}, d({j},{i}) = {b}")));
                }
            }
        }
        Ok(PointCloud {
            label: label.into(),
            n,
            ambient: 0,
            coords: Vec::new(),
            metric: Metric::Matrix(flat),
            len: m,
            quad_weights: None,
            boundary_distance: None,
            seed: 0,
        })
    }

    /// Two points at distance `d`.
    pub fn two_point(d: f64) -> PointCloud {
        PointCloud::euclidean(format!("two-point({d})"), 0, 1, vec![0.0, d])
    }

    pub fn with_quad_weights(mut self, w: Vec<f64>) -> PointCloud {
        assert_eq!(w.len(), self.len, "one quadrature weight per point");
        self.quad_weights = Some(w);
        self
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.ambient..(i + 1) * self.ambient]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        match &self.metric {
            Metric::Matrix(d) => d[i * self.len + j],
            Metric::Euclidean => euclid(self.point(i), self.point(j)),
            Metric::Geodesic { radius } => {
                // 2r·asin(chord/2r) stays accurate for nearby points, unlike acos.
                let chord = euclid(self.point(i), self.point(j));
                2.0 * radius * (chord / (2.0 * radius)).min(1.0).asin()
            }
        }
    }

    /// The dense distance matrix, row-major.
    pub fn distance_matrix(&self) -> Vec<f64> {
        let m = self.len;
        let mut d = vec![0.0; m * m];
        d.par_chunks_mut(m.max(1)).enumerate().for_each(|(i, row)| {
            for (j, v) in row.iter_mut().enumerate() {
                *v = self.distance(i, j);
            }
        });
        d
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        (0..self.len)
            .into_par_iter()
            .map(|i| (0..i).map(|j| self.distance(i, j)).fold(0.0, f64::max))
            .reduce(|| 0.0, f64::max)
    }

    /// Total measure of the quadrature weights.
    pub fn volume(&self) -> Option<f64> {
        self.quad_weights.as_ref().map(|w| w.iter().sum())
    }

    /// Spot-checks symmetry, the zero diagonal and the triangle inequality
    /// on `triples` random triples.
    pub fn check_metric(&self, triples: usize, seed: u64) -> Result<(), OracleError> {
        let m = self.len;
        if m == 0 {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let scale = self.diameter().max(1.0);
        for _ in 0..triples {
            let (i, j, k) = (rng.gen_range(0..m), rng.gen_range(0..m), rng.gen_range(0..m));
            let (dij, dji) = (self.distance(i, j), self.distance(j, i));
            if (dij - dji).abs() > 1e-12 * scale {
                return Err(OracleError::NotAMetric(format!("d({i},{j}) = {dij} but d({j},{i}) = {dji}")));
            }
            if self.distance(i, i) != 0.0 {
                return Err(OracleError::NotAMetric(format!("d({i},{i}) ≠ 0")));
            }
            let via = self.distance(i, k) + self.distance(k, j);
            if dij > via + 1e-12 * scale {
                return Err(OracleError::NotAMetric(format!("d({i},{j}) = {dij} > d({i},{k}) + d({k},{j}) = {via}")));
            }
        }
        Ok(())
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Geometries the oracle can sample.
#[derive(Debug, Clone, PartialEq)]
pub enum NumericShape {
    Builtin(Shape),
    /// The circle of radius `r` with arc-length distance.
    CircleGeodesic { r: Rat },
    /// The surface `S¹(r) × [0, length] ⊂ ℝ³` with the chordal distance.
    Cylinder { r: Rat, length: Rat },
}

impl NumericShape {
    pub const EXTRA_NAMES: [&'static str; 2] = ["circle-geodesic", "cylinder"];

    /// Parses a shape name with named parameters; unknown parameters are errors.
    pub fn from_name(name: &str, params: &BTreeMap<String, Rat>) -> Result<NumericShape, OracleError> {
        let allow = |keys: &[&str]| -> Result<(), OracleError> {
            match params.keys().find(|k| !keys.contains(&k.as_str())) {
                Some(k) => Err(OracleError::OutOfRange(format!("{name} has no parameter `{k}`"))),
                None => Ok(()),
            }
        };
        let get = |k: &str| params.get(k).cloned().unwrap_or(Rat::ONE);
        let shape = match name {
            "circle-geodesic" => {
                allow(&["r"])?;
                NumericShape::CircleGeodesic { r: get("r") }
            }
            "cylinder" => {
                allow(&["r", "length"])?;
                NumericShape::Cylinder { r: get("r"), length: get("length") }
            }
            _ => {
                return Shape::from_name(name, params)
                    .map(NumericShape::Builtin)
                    .map_err(|e| OracleError::Unsupported(e.to_string()))
            }
        };
        let positive = match &shape {
            NumericShape::CircleGeodesic { r } => r.signum() > 0,
            NumericShape::Cylinder { r, length } => r.signum() > 0 && length.signum() > 0,
            NumericShape::Builtin(_) => true,
        };
        if !positive {
            return Err(OracleError::OutOfRange(format!("{name} parameters must be positive")));
        }
        Ok(shape)
    }

    pub fn label(&self) -> String {
        match self {
            NumericShape::Builtin(s) => s.label(),
            NumericShape::CircleGeodesic { r } => format!("circle-geodesic({r})"),
            NumericShape::Cylinder { r, length } => format!("cylinder({r},{length})"),
        }
    }

    /// Intrinsic dimension.
    pub fn dim(&self) -> u32 {
        match self {
            NumericShape::Builtin(s) => s.dim(),
            NumericShape::CircleGeodesic { .. } => 1,
            NumericShape::Cylinder { .. } => 2,
        }
    }
}

/// Samples a built-in geometry with about `m` points, deterministically in `seed`.
///
/// Grids are used for intervals, squares, balls, shells and cylinders,
/// sunflower spirals with a boundary ring for disks and ellipses, Fibonacci
/// lattices for spheres and equally spaced angles for circles.  The seed
/// rotates or shifts the pattern.  Grid-based samplers in dimension ≥ 2
/// return approximately `m` points.
pub fn sample_shape(shape: &NumericShape, m: usize, seed: u64) -> Result<PointCloud, OracleError> {
    if m < 2 {
        return Err(OracleError::TooFewPoints { needed: 2, got: m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let label = shape.label();
    let mut cloud = match shape {
        NumericShape::Builtin(s) => match s {
            Shape::Interval { length } => interval(length.to_f64(), m),
            Shape::Disk { r } => ellipse(r.to_f64(), r.to_f64(), m, &mut rng),
            Shape::Ellipse { a, b } => ellipse(a.to_f64(), b.to_f64(), m, &mut rng),
            Shape::SquareNumeric { side } => square(side.to_f64(), m),
            Shape::Ball3 { r } => shell(0.0, r.to_f64(), m, &mut rng),
            Shape::Shell3 { r_in, r_out } => shell(r_in.to_f64(), r_out.to_f64(), m, &mut rng),
            Shape::CircleSubmanifold { r } => circle(r.to_f64(), m, &mut rng, Metric::Euclidean),
            Shape::SphereSubmanifold { r } => sphere(r.to_f64(), m, &mut rng, Metric::Euclidean),
            Shape::SphereGeodesic { r } => sphere(r.to_f64(), m, &mut rng, Metric::Geodesic { radius: r.to_f64() }),
        },
        NumericShape::CircleGeodesic { r } => circle(r.to_f64(), m, &mut rng, Metric::Geodesic { radius: r.to_f64() }),
        NumericShape::Cylinder { r, length } => cylinder(r.to_f64(), length.to_f64(), m, &mut rng),
    };
    cloud.label = label;
    cloud.seed = seed;
    Ok(cloud)
}

/// Samples the built-in shape a spec was generated from.
pub fn sample_spec(spec: &GeometrySpec, m: usize, seed: u64) -> Result<PointCloud, OracleError> {
    match &spec.shape {
        Some(s) => sample_shape(&NumericShape::Builtin(s.clone()), m, seed),
        None => Err(OracleError::Unsupported(format!("{} (only built-in shapes carry sampling support)", spec.label))),
    }
}

fn finish(mut c: PointCloud, volume: f64, boundary: Option<Vec<f64>>) -> PointCloud {
    let w = volume / c.len() as f64;
    c.quad_weights = Some(vec![w; c.len()]);
    c.boundary_distance = boundary;
    c
}

/// Grid including both endpoints.
fn interval(l: f64, m: usize) -> PointCloud {
    let xs: Vec<f64> = (0..m).map(|i| l * i as f64 / (m - 1) as f64).collect();
    let bd = xs.iter().map(|x| x.min(l - x)).collect();
    finish(PointCloud::euclidean("", 1, 1, xs), l, Some(bd))
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

/// Sunflower spiral stretched to the ellipse with semi-axes `a`, `b`, plus a
/// ring of points on the boundary at the same spacing.
fn ellipse(a: f64, b: f64, m: usize, rng: &mut ChaCha8Rng) -> PointCloud {
    let phase = rng.gen_range(0.0..2.0 * PI);
    let area = PI * a * b;
    let h = (area / m as f64).sqrt();
    // Ramanujan's perimeter approximation.
    let perimeter = PI * (3.0 * (a + b) - ((3.0 * a + b) * (a + 3.0 * b)).sqrt());
    let ring = ((perimeter / h).round() as usize).clamp(1, m - 1);
    let inner = m - ring;
    let mut coords = Vec::with_capacity(2 * m);
    for i in 0..inner {
        let rho = ((i as f64 + 0.5) / inner as f64).sqrt();
        let t = phase + GOLDEN_ANGLE * i as f64;
        coords.extend_from_slice(&[a * rho * t.cos(), b * rho * t.sin()]);
    }
    for i in 0..ring {
        let t = phase + 2.0 * PI * i as f64 / ring as f64;
        coords.extend_from_slice(&[a * t.cos(), b * t.sin()]);
    }
    let bd = if a == b {
        coords.chunks(2).map(|p| (a - p[0].hypot(p[1])).max(0.0)).collect()
    } else {
        ellipse_boundary_distance(a, b, &coords)
    };
    finish(PointCloud::euclidean("", 2, 2, coords), area, Some(bd))
}

/// Distance to a densely sampled boundary polygon.
fn ellipse_boundary_distance(a: f64, b: f64, coords: &[f64]) -> Vec<f64> {
    const NODES: usize = 4096;
    let boundary: Vec<(f64, f64)> =
        (0..NODES).map(|k| 2.0 * PI * k as f64 / NODES as f64).map(|t| (a * t.cos(), b * t.sin())).collect();
    coords
        .par_chunks(2)
        .map(|p| boundary.iter().map(|(x, y)| (p[0] - x).hypot(p[1] - y)).fold(f64::INFINITY, f64::min))
        .collect()
}

/// Cell centres of a `k × k` grid with `k = round(√m)`.
fn square(side: f64, m: usize) -> PointCloud {
    let k = ((m as f64).sqrt().round() as usize).max(2);
    let h = side / k as f64;
    let mut coords = Vec::with_capacity(2 * k * k);
    let mut bd = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            let (x, y) = ((i as f64 + 0.5) * h, (j as f64 + 0.5) * h);
            coords.extend_from_slice(&[x, y]);
            bd.push(x.min(side - x).min(y).min(side - y));
        }
    }
    finish(PointCloud::euclidean("", 2, 2, coords), side * side, Some(bd))
}

/// A randomly shifted cubic grid restricted to `r_in < |p| < r_out`.
fn shell(r_in: f64, r_out: f64, m: usize, rng: &mut ChaCha8Rng) -> PointCloud {
    let volume = 4.0 / 3.0 * PI * (r_out.powi(3) - r_in.powi(3));
    let h = (volume / m as f64).cbrt();
    let shift: [f64; 3] = [rng.gen_range(0.0..h), rng.gen_range(0.0..h), rng.gen_range(0.0..h)];
    let steps = (2.0 * r_out / h).ceil() as i64 + 1;
    let mut coords = Vec::new();
    let mut bd = Vec::new();
    for i in 0..=steps {
        for j in 0..=steps {
            for k in 0..=steps {
                let p = [i, j, k].map(|t| -r_out + t as f64 * h);
                let p = [p[0] + shift[0], p[1] + shift[1], p[2] + shift[2]];
                let rho = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                if rho < r_out && rho > r_in {
                    coords.extend_from_slice(&p);
                    bd.push(if r_in > 0.0 { (rho - r_in).min(r_out - rho) } else { r_out - rho });
                }
            }
        }
    }
    finish(PointCloud::euclidean("", 3, 3, coords), volume, Some(bd))
}

/// Equally spaced angles with a random phase.
fn circle(r: f64, m: usize, rng: &mut ChaCha8Rng, metric: Metric) -> PointCloud {
    let phase = rng.gen_range(0.0..2.0 * PI);
    let mut coords = Vec::with_capacity(2 * m);
    for i in 0..m {
        let t = phase + 2.0 * PI * i as f64 / m as f64;
        coords.extend_from_slice(&[r * t.cos(), r * t.sin()]);
    }
    let mut c = PointCloud::euclidean("", 1, 2, coords);
    c.metric = metric;
    finish(c, 2.0 * PI * r, None)
}

/// Fibonacci lattice under a random rotation.
fn sphere(r: f64, m: usize, rng: &mut ChaCha8Rng, metric: Metric) -> PointCloud {
    let rot = random_rotation(rng);
    let mut coords = Vec::with_capacity(3 * m);
    for i in 0..m {
        let z = 1.0 - 2.0 * (i as f64 + 0.5) / m as f64;
        let rho = (1.0 - z * z).sqrt();
        let t = GOLDEN_ANGLE * i as f64;
        let p = [rho * t.cos(), rho * t.sin(), z];
        for row in &rot {
            coords.push(r * (row[0] * p[0] + row[1] * p[1] + row[2] * p[2]));
        }
    }
    let mut c = PointCloud::euclidean("", 2, 3, coords);
    c.metric = metric;
    finish(c, 4.0 * PI * r * r, None)
}

/// `n_θ × n_z` grid on the cylinder surface with cells of aspect ratio ≈ 1.
fn cylinder(r: f64, length: f64, m: usize, rng: &mut ChaCha8Rng) -> PointCloud {
    let circumference = 2.0 * PI * r;
    let h = (circumference * length / m as f64).sqrt();
    let (nt, nz) = (((circumference / h).round() as usize).max(3), ((length / h).round() as usize).max(1));
    let phase = rng.gen_range(0.0..2.0 * PI);
    let mut coords = Vec::with_capacity(3 * nt * nz);
    let mut bd = Vec::with_capacity(nt * nz);
    for j in 0..nz {
        let z = (j as f64 + 0.5) * length / nz as f64;
        for i in 0..nt {
            let t = phase + 2.0 * PI * i as f64 / nt as f64;
            coords.extend_from_slice(&[r * t.cos(), r * t.sin(), z]);
            bd.push(z.min(length - z));
        }
    }
    finish(PointCloud::euclidean("", 2, 3, coords), circumference * length, Some(bd))
}

/// Uniform rotation from a uniform unit quaternion.
fn random_rotation(rng: &mut ChaCha8Rng) -> [[f64; 3]; 3] {
    let (u1, u2, u3): (f64, f64, f64) = (rng.gen(), rng.gen(), rng.gen());
    let (a, b) = ((1.0 - u1).sqrt(), u1.sqrt());
    let (w, x, y, z) = (a * (2.0 * PI * u2).sin(), a * (2.0 * PI * u2).cos(), b * (2.0 * PI * u3).sin(), b * (2.0 * PI * u3).cos());
    [
        [1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - z * w), 2.0 * (x * z + y * w)],
        [2.0 * (x * y + z * w), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - x * w)],
        [2.0 * (x * z - y * w), 2.0 * (y * z + x * w), 1.0 - 2.0 * (x * x + y * y)],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn builtin(s: Shape) -> NumericShape {
        NumericShape::Builtin(s)
    }

    #[test]
    fn interval_grid_spacing() {
        let c = sample_shape(&builtin(Shape::Interval { length: Rat::ONE }), 101, 0).unwrap();
        assert_eq!(c.len(), 101);
        assert!((c.distance(3, 10) - 0.07).abs() < 1e-15);
        assert!((c.volume().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geodesic_distance_is_arc_length() {
        let c = sample_shape(&builtin(Shape::SphereGeodesic { r: Rat::ONE }), 50, 3).unwrap();
        let (p, q) = (c.point(4), c.point(17));
        let cos: f64 = p.iter().zip(q).map(|(a, b)| a * b).sum();
        assert!((c.distance(4, 17) - cos.acos()).abs() < 1e-12);
        c.check_metric(200, 1).unwrap();
    }

    #[test]
    fn same_seed_same_cloud() {
        for s in [Shape::Disk { r: Rat::ONE }, Shape::Ball3 { r: Rat::ONE }, Shape::SphereSubmanifold { r: Rat::ONE }] {
            let a = sample_shape(&builtin(s.clone()), 300, 9).unwrap();
            let b = sample_shape(&builtin(s.clone()), 300, 9).unwrap();
            let c = sample_shape(&builtin(s), 300, 10).unwrap();
            assert_eq!(a, b);
            assert_ne!(a.coords, c.coords);
        }
    }

    #[test]
    fn grid_samplers_hit_roughly_m_points() {
        for s in [Shape::Ball3 { r: Rat::ONE }, Shape::Shell3 { r_in: Rat::new(1, 2), r_out: Rat::new(3, 2) }] {
            let c = sample_shape(&builtin(s), 2000, 1).unwrap();
            assert!((1700..2300).contains(&c.len()), "{}", c.len());
        }
        let cyl = NumericShape::Cylinder { r: Rat::ONE, length: Rat::ONE };
        let c = sample_shape(&cyl, 1000, 1).unwrap();
        assert!((900..1100).contains(&c.len()), "{}", c.len());
    }

    #[test]
    fn boundary_distance_of_ellipse_is_bounded_by_semi_axes() {
        let c = sample_shape(&builtin(Shape::Ellipse { a: Rat::int(2), b: Rat::ONE }), 500, 1).unwrap();
        let bd = c.boundary_distance.unwrap();
        assert!(bd.iter().all(|d| *d >= 0.0 && *d <= 1.0 + 1e-9));
    }

    #[test]
    fn explicit_matrices_are_validated() {
        assert!(PointCloud::from_distances("x", 0, vec![vec![0.0, 1.0], vec![2.0, 0.0]]).is_err());
        let c = PointCloud::from_distances("x", 0, vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_eq!(c.distance(0, 1), 1.0);
    }
}
