//! Constructive isometric embeddings of small metric spaces into Euclidean
//! space.
//!
//! Three points always embed in the plane. Three points on a sphere together
//! with its center embed in ℝ³ exactly when their circumradius does not
//! exceed the sphere radius. A general four-point space is tested by
//! trilateration, with an independent Cayley–Menger determinant test kept
//! alongside for cross-checking.

use std::sync::OnceLock;

use nalgebra::Matrix5;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::menger::{cayley_menger, circumradius, ExtendedRadius, TriangleSides, METRIC_TOLERANCE};
use crate::normspace::{check_radius, Point};

/// Relative tolerance on squared heights during trilateration, in units of
/// the squared largest distance.
pub const HEIGHT_TOLERANCE: f64 = 1e-9;

/// Normalized −D below which a base triangle is treated as collinear.
const COLLINEAR_FACE: f64 = 1e-16;

/// Points in ℝᵏ reproducing a set of source distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Embedding {
    pub points: Vec<Point>,
    pub labels: Vec<String>,
}

impl Embedding {
    fn new(points: Vec<Point>, labels: &[&str]) -> Self {
        Self {
            points,
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Euclidean distance between embedded points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        (&self.points[i] - &self.points[j]).euclidean_len()
    }
}

/// Places u at the origin, v on the positive x-axis and w in the upper half
/// plane (y ≥ 0).
pub fn embed_triangle(sides: &TriangleSides) -> Result<Embedding> {
    let TriangleSides { a, b, c } = *sides;
    if a <= 0.0 || b <= 0.0 || c <= 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let x = (a * a + (c - b) * (c + b)) / (2.0 * a);
    // y = 2·area/a = √(−D)/(2a); avoids the cancellation in √(c² − x²).
    let y = (-cayley_menger(sides)).sqrt() / (2.0 * a);
    Ok(Embedding::new(
        vec![
            Point::from([0.0, 0.0]),
            Point::from([a, 0.0]),
            Point::from([x, y]),
        ],
        &["u", "v", "w"],
    ))
}

/// Translates a planar triple so that its circumcenter is the origin.
pub fn center_circumcircle(emb: &Embedding) -> Result<Embedding> {
    if emb.points.len() != 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: emb.points.len(),
        });
    }
    if let Some(p) = emb.points.iter().find(|p| p.dim() != 2) {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.dim(),
        });
    }
    let p0 = &emb.points[0];
    let d1 = &emb.points[1] - p0;
    let d2 = &emb.points[2] - p0;
    let cross = d1[0] * d2[1] - d1[1] * d2[0];
    let l1 = d1.dot(&d1);
    let l2 = d2.dot(&d2);
    if l1 == 0.0 || l2 == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    if cross.abs() <= 1e-14 * (l1 * l2).sqrt() {
        return Err(Error::Collinear);
    }
    // Intersection of the perpendicular bisectors: 2·dᵢ·c = |dᵢ|².
    let cx = (l1 * d2[1] - l2 * d1[1]) / (2.0 * cross);
    let cy = (l2 * d1[0] - l1 * d2[0]) / (2.0 * cross);
    let center = p0 + &Point::from([cx, cy]);
    Ok(Embedding {
        points: emb.points.iter().map(|p| p - &center).collect(),
        labels: emb.labels.clone(),
    })
}

/// Embeds three points on a sphere of radius `r` together with its center
/// into ℝ³: the triple in the z = 0 plane around its circumcenter, the
/// center on the z-axis at height √(r² − ρ²).
pub fn embed_sphere_triple_with_center(sides: &TriangleSides, r: f64) -> Result<Embedding> {
    check_radius(r)?;
    let rho = match circumradius(sides)? {
        ExtendedRadius::Infinite => {
            return Err(Error::NotEmbeddable {
                circumradius: ExtendedRadius::Infinite,
                radius: r,
            })
        }
        ExtendedRadius::Finite(rho) => rho,
    };
    if rho > r * (1.0 + 1e-12) {
        return Err(Error::NotEmbeddable {
            circumradius: ExtendedRadius::Finite(rho),
            radius: r,
        });
    }
    let planar = center_circumcircle(&embed_triangle(sides)?)?;
    let height = ((r - rho) * (r + rho)).max(0.0).sqrt();
    let mut points: Vec<Point> = planar
        .points
        .iter()
        .map(|p| Point::from([p[0], p[1], 0.0]))
        .collect();
    points.push(Point::from([0.0, 0.0, height]));
    Ok(Embedding::new(points, &["u", "v", "w", "x0"]))
}

/// A validated symmetric 4×4 distance matrix of four distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix4([[f64; 4]; 4]);

const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]];

impl DistanceMatrix4 {
    pub fn new(d: [[f64; 4]; 4]) -> Result<Self> {
        let scale = d.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        for i in 0..4 {
            if d[i][i] != 0.0 {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "diagonal entry ({i},{i}) is {}",
                    d[i][i]
                )));
            }
            for j in 0..4 {
                let x = d[i][j];
                if !x.is_finite() || (i != j && x <= 0.0) {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "entry ({i},{j}) = {x} must be positive and finite"
                    )));
                }
                if (x - d[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "not symmetric at ({i},{j})"
                    )));
                }
            }
        }
        for [i, j, k] in FACES {
            TriangleSides::with_tolerance(d[i][j], d[j][k], d[k][i], METRIC_TOLERANCE).map_err(
                |_| {
                    Error::InvalidDistanceMatrix(format!(
                        "triangle inequality fails on ({i},{j},{k})"
                    ))
                },
            )?;
        }
        Ok(Self(d))
    }

    /// Pairwise distances of four points under any metric.
    pub fn from_points(
        points: &[Point; 4],
        dist: impl Fn(&Point, &Point) -> Result<f64>,
    ) -> Result<Self> {
        let mut d = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in i + 1..4 {
                let x = dist(&points[i], &points[j])?;
                d[i][j] = x;
                d[j][i] = x;
            }
        }
        Self::new(d)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[i][j]
    }

    pub fn entries(&self) -> &[[f64; 4]; 4] {
        &self.0
    }

    pub fn scale(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m: f64, x| m.max(*x))
    }

    fn face_sides(&self, [i, j, k]: [usize; 3]) -> TriangleSides {
        TriangleSides {
            a: self.0[i][j],
            b: self.0[j][k],
            c: self.0[k][i],
        }
    }
}

/// Why a four-point space fails to embed in ℝ³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstruction {
    /// Trilaterating `apex` over the `base` triangle requires a squared
    /// height below zero; `squared_height` is in units of the squared
    /// largest distance.
    NegativeSquaredHeight {
        base: [usize; 3],
        apex: usize,
        squared_height: f64,
    },
    /// All faces are collinear but the distances admit no placement on a
    /// line; `residual` is the relative mismatch on the named points.
    InconsistentCollinear { points: Vec<usize>, residual: f64 },
}

impl std::fmt::Display for Obstruction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Obstruction::NegativeSquaredHeight {
                base,
                apex,
                squared_height,
            } => write!(
                f,
                "point {apex} over base {base:?} needs squared height {squared_height:e} < 0"
            ),
            Obstruction::InconsistentCollinear { points, residual } => write!(
                f,
                "collinear points {points:?} cannot be placed on a line (residual {residual:e})"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FourPointVerdict {
    Embeddable { embedding: Embedding },
    NotEmbeddable { obstruction: Obstruction },
}

impl FourPointVerdict {
    pub fn is_embeddable(&self) -> bool {
        matches!(self, FourPointVerdict::Embeddable { .. })
    }
}

/// Decides whether four points embed isometrically in (ℝ³, ‖·‖₂), returning
/// coordinates (in source order, positive height) or an obstruction.
pub fn four_point_embeddable(d: &DistanceMatrix4) -> FourPointVerdict {
    let scale = d.scale();
    let s2 = scale * scale;
    let (base, area) = FACES
        .iter()
        .map(|&f| (f, -cayley_menger(&d.face_sides(f)) / (s2 * s2)))
        .fold(
            ([0, 1, 2], -1.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if area <= COLLINEAR_FACE {
        return embed_on_line(d);
    }

    let apex = (0..4).find(|i| !base.contains(i)).expect("one index left");
    let [i0, i1, i2] = base;
    let tri = embed_triangle(&d.face_sides(base)).expect("sides are positive");
    let a = tri.points[1][0];
    let (px, py) = (tri.points[2][0], tri.points[2][1]);
    let c = d.get(i2, i0);
    let (d0, d1, d2) = (d.get(apex, i0), d.get(apex, i1), d.get(apex, i2));

    let x = (a * a + (d0 - d1) * (d0 + d1)) / (2.0 * a);
    let y = ((d0 - d2) * (d0 + d2) + c * c - 2.0 * px * x) / (2.0 * py);
    let z2 = d0 * d0 - x * x - y * y;
    if z2 < -HEIGHT_TOLERANCE * s2 {
        return FourPointVerdict::NotEmbeddable {
            obstruction: Obstruction::NegativeSquaredHeight {
                base,
                apex,
                squared_height: z2 / s2,
            },
        };
    }
    let z = z2.max(0.0).sqrt();

    let mut points = vec![Point::zeros(3); 4];
    points[i0] = Point::from([0.0, 0.0, 0.0]);
    points[i1] = Point::from([a, 0.0, 0.0]);
    points[i2] = Point::from([px, py, 0.0]);
    points[apex] = Point::from([x, y, z]);
    FourPointVerdict::Embeddable {
        embedding: Embedding::new(points, &["p0", "p1", "p2", "p3"]),
    }
}

/// Every face is collinear: place the farthest pair at 0 and D, the others
/// by their distance to the first, then check the remaining distances.
fn embed_on_line(d: &DistanceMatrix4) -> FourPointVerdict {
    let scale = d.scale();
    let (mut i, mut j) = (0, 1);
    for p in 0..4 {
        for q in p + 1..4 {
            if d.get(p, q) > d.get(i, j) {
                (i, j) = (p, q);
            }
        }
    }
    let span = d.get(i, j);
    let mut t = [0.0; 4];
    t[j] = span;
    let rest: Vec<usize> = (0..4).filter(|&k| k != i && k != j).collect();
    for &k in &rest {
        t[k] = d.get(i, k);
        let residual = (d.get(j, k) - (span - t[k])).abs() / scale;
        if residual > HEIGHT_TOLERANCE {
            return FourPointVerdict::NotEmbeddable {
                obstruction: Obstruction::InconsistentCollinear {
                    points: vec![i, j, k],
                    residual,
                },
            };
        }
    }
    let (k, l) = (rest[0], rest[1]);
    let residual = (d.get(k, l) - (t[k] - t[l]).abs()).abs() / scale;
    if residual > HEIGHT_TOLERANCE {
        return FourPointVerdict::NotEmbeddable {
            obstruction: Obstruction::InconsistentCollinear {
                points: vec![i, k, l],
                residual,
            },
        };
    }
    FourPointVerdict::Embeddable {
        embedding: Embedding::new(
            t.iter().map(|&x| Point::from([x, 0.0, 0.0])).collect(),
            &["p0", "p1", "p2", "p3"],
        ),
    }
}

/// The bordered Cayley–Menger determinant of four points, computed on
/// distances divided by the largest one (so the value is scale-free).
pub fn cayley_menger_det4(d: &DistanceMatrix4) -> f64 {
    let s = d.scale();
    let m = Matrix5::from_fn(|i, j| match (i, j) {
        (0, 0) => 0.0,
        (0, _) | (_, 0) => 1.0,
        (i, j) => {
            let x = d.get(i - 1, j - 1) / s;
            x * x
        }
    });
    m.determinant()
}

/// Sign that makes [`cayley_menger_det4`] nonnegative on genuinely
/// Euclidean data, learned from `samples` random point sets in ℝ³.
pub fn calibrate_cm_sign(samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pos, mut neg) = (0usize, 0usize);
    while pos + neg < samples {
        let pts: [Point; 4] = std::array::from_fn(|_| {
            Point::from([
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ])
        });
        let Ok(d) = DistanceMatrix4::from_points(&pts, |a, b| Ok((a - b).euclidean_len())) else {
            continue;
        };
        let det = cayley_menger_det4(&d);
        if det.abs() < 1e-9 {
            continue;
        }
        if det > 0.0 {
            pos += 1;
        } else {
            neg += 1;
        }
    }
    assert!(
        pos == 0 || neg == 0,
        "Cayley-Menger sign is not consistent on Euclidean data ({pos} positive, {neg} negative)"
    );
    if pos > 0 {
        1.0
    } else {
        -1.0
    }
}

/// The calibrated sign, computed once per process from 100 Euclidean samples.
pub fn cm_sign() -> f64 {
    static SIGN: OnceLock<f64> = OnceLock::new();
    *SIGN.get_or_init(|| calibrate_cm_sign(100, 0x5eed))
}

/// Outcome of the determinant-based four-point test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CayleyMengerTest {
    /// Signed, normalized determinant. When some face is non-degenerate it
    /// is divided by 32·A², A the largest normalized face area, which makes
    /// it comparable to a squared height.
    pub value: f64,
    pub embeddable: bool,
}

/// Embeddability from the sign of the four-point Cayley–Menger determinant,
/// accepting values down to `-band`.
pub fn cayley_menger_test(d: &DistanceMatrix4, band: f64) -> CayleyMengerTest {
    let det = cm_sign() * cayley_menger_det4(d);
    let s = d.scale();
    let s4 = s.powi(4);
    let max_face = FACES
        .iter()
        .map(|&f| -cayley_menger(&d.face_sides(f)) / s4)
        .fold(0.0, f64::max);
    // −D = 16·A²
    let value = if max_face > COLLINEAR_FACE {
        det / (2.0 * max_face)
    } else {
        det
    };
    CayleyMengerTest {
        value,
        embeddable: value >= -band,
    }
}

/// Intersection of the Euclidean sphere ∂B_r(x0) with the line a + ℝ·v.
/// Returns zero, one (tangent) or two points, ordered along v.
pub fn sphere_line_intersect(x0: &Point, r: f64, a: &Point, v: &Point) -> Result<Vec<Point>> {
    check_radius(r)?;
    for p in [a, v] {
        if p.dim() != x0.dim() {
            return Err(Error::DimensionMismatch {
                expected: x0.dim(),
                found: p.dim(),
            });
        }
    }
    let len = v.euclidean_len();
    if len == 0.0 {
        return Err(Error::ZeroDirection);
    }
    let v = v.scaled(1.0 / len);
    let offset = a - x0;
    // t² + 2βt + γ = 0
    let beta = offset.dot(&v);
    let gamma = (offset.euclidean_len() - r) * (offset.euclidean_len() + r);
    let disc = beta * beta - gamma;
    let at = |t: f64| a + &v.scaled(t);
    if disc.abs() <= 1e-12 * r * r {
        return Ok(vec![at(-beta)]);
    }
    if disc < 0.0 {
        return Ok(Vec::new());
    }
    let root = disc.sqrt();
    let q = -(beta + beta.signum() * root);
    let (t1, t2) = if beta == 0.0 {
        (-root, root)
    } else {
        let (x, y) = (q, gamma / q);
        if x < y {
            (x, y)
        } else {
            (y, x)
        }
    };
    Ok(vec![at(t1), at(t2)])
}
