//! Metric circumradius and the three-point Cayley–Menger determinant.
//!
//! Everything here works from the three pairwise distances alone, so it
//! applies to any metric space. The sides are sorted before evaluation and
//! −D is formed as a product of four non-negative factors arranged so that
//! no factor suffers catastrophic cancellation, which keeps needle-shaped
//! triples accurate.

use std::cmp::Ordering;
use std::fmt;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::normspace::{NormSpec, Point};

/// Relative slack allowed on the triangle inequality, as a fraction of the
/// perimeter.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Default relative collinearity cutoff; see [`CircumradiusOptions`].
pub const DEGENERACY_THRESHOLD: f64 = 1e-14;

/// A nonnegative radius or the distinguished value `Infinite`.
///
/// Ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtendedRadius {
    Finite(f64),
    Infinite,
}

impl ExtendedRadius {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedRadius::Infinite)
    }

    pub fn finite(&self) -> Option<f64> {
        match *self {
            ExtendedRadius::Finite(r) => Some(r),
            ExtendedRadius::Infinite => None,
        }
    }

    /// The value as an `f64`, with `Infinite` mapped to `f64::INFINITY`.
    pub fn to_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    pub fn from_f64(r: f64) -> Self {
        if r.is_infinite() {
            ExtendedRadius::Infinite
        } else {
            ExtendedRadius::Finite(r)
        }
    }

    /// 1/r^p, with 1/∞ = 0.
    pub fn inverse_power(&self, p: f64) -> f64 {
        match *self {
            ExtendedRadius::Finite(r) => r.powf(-p),
            ExtendedRadius::Infinite => 0.0,
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other.partial_cmp(&self) == Some(Ordering::Greater) {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if other.partial_cmp(&self) == Some(Ordering::Less) {
            other
        } else {
            self
        }
    }

    pub fn scale(self, c: f64) -> Self {
        match self {
            ExtendedRadius::Finite(r) => ExtendedRadius::Finite(c * r),
            ExtendedRadius::Infinite => ExtendedRadius::Infinite,
        }
    }
}

impl fmt::Display for ExtendedRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRadius::Finite(r) => write!(f, "{r}"),
            ExtendedRadius::Infinite => write!(f, "inf"),
        }
    }
}

// Finite values serialize as JSON numbers, `Infinite` as the string "inf".
impl Serialize for ExtendedRadius {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtendedRadius::Finite(r) => s.serialize_f64(*r),
            ExtendedRadius::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedRadius {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct RadiusVisitor;

        impl Visitor<'_> for RadiusVisitor {
            type Value = ExtendedRadius;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or the string \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                if v.is_finite() && v >= 0.0 {
                    Ok(ExtendedRadius::Finite(v))
                } else {
                    Err(E::custom(format!("invalid radius {v}")))
                }
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(ExtendedRadius::Finite(v as f64))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                self.visit_f64(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                if v == "inf" {
                    Ok(ExtendedRadius::Infinite)
                } else {
                    Err(E::custom(format!("invalid radius string {v:?}")))
                }
            }
        }

        d.deserialize_any(RadiusVisitor)
    }
}

/// Tunable tolerances for circumradius evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircumradiusOptions {
    /// A triple is reported `Infinite` when √(−D) ≤ degeneracy·abc/max(a,b,c),
    /// i.e. when the radius would exceed max(a,b,c)/degeneracy.
    pub degeneracy: f64,
    /// Allowed violation of the triangle inequality, relative to the perimeter.
    pub metric_tolerance: f64,
}

impl Default for CircumradiusOptions {
    fn default() -> Self {
        Self {
            degeneracy: DEGENERACY_THRESHOLD,
            metric_tolerance: METRIC_TOLERANCE,
        }
    }
}

/// The three pairwise distances a = d(u,v), b = d(v,w), c = d(w,u).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleSides {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl TriangleSides {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        Self::with_tolerance(a, b, c, METRIC_TOLERANCE)
    }

    pub fn with_tolerance(a: f64, b: f64, c: f64, tolerance: f64) -> Result<Self> {
        let valid = [a, b, c].iter().all(|s| s.is_finite() && *s >= 0.0);
        let slack = tolerance * (a + b + c);
        if !valid || a > b + c + slack || b > a + c + slack || c > a + b + slack {
            return Err(Error::InvalidMetric { a, b, c });
        }
        Ok(Self { a, b, c })
    }

    /// Sides of the triple (u, v, w) under `spec`.
    pub fn from_points(spec: &NormSpec, u: &Point, v: &Point, w: &Point) -> Result<Self> {
        Self::new(spec.dist(u, v)?, spec.dist(v, w)?, spec.dist(w, u)?)
    }

    /// Sides in descending order.
    pub fn sorted(&self) -> [f64; 3] {
        let mut s = [self.a, self.b, self.c];
        s.sort_by(|x, y| y.total_cmp(x));
        s
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            a: c * self.a,
            b: c * self.b,
            c: c * self.c,
        }
    }

    pub fn perimeter(&self) -> f64 {
        self.a + self.b + self.c
    }
}

/// −D = (a+b+c)(a+b−c)(a−b+c)(−a+b+c) for sorted sides a ≥ b ≥ c, arranged
/// as (a+(b+c))·(c−(a−b))·(c+(a−b))·(a+(b−c)). Factors that round below
/// zero inside the metric tolerance are clamped to zero.
fn neg_cayley_menger(sides: &TriangleSides) -> f64 {
    let [a, b, c] = sides.sorted();
    let f1 = a + (b + c);
    let f2 = (c - (a - b)).max(0.0);
    let f3 = c + (a - b);
    let f4 = a + (b - c);
    f1 * f2 * f3 * f4
}

/// The Cayley–Menger determinant D(u,v,w); nonpositive for metric triples
/// and zero exactly for collinear ones.
pub fn cayley_menger(sides: &TriangleSides) -> f64 {
    -neg_cayley_menger(sides)
}

pub fn circumradius(sides: &TriangleSides) -> Result<ExtendedRadius> {
    circumradius_with(sides, &CircumradiusOptions::default())
}

/// abc/√(−D), or `Infinite` for (numerically) collinear triples.
pub fn circumradius_with(
    sides: &TriangleSides,
    opts: &CircumradiusOptions,
) -> Result<ExtendedRadius> {
    let [a, b, c] = sides.sorted();
    if c <= 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let root = neg_cayley_menger(sides).sqrt();
    // abc/a = bc, so the cutoff reads √(−D) ≤ τ·b·c.
    if root == 0.0 || root <= opts.degeneracy * b * c {
        return Ok(ExtendedRadius::Infinite);
    }
    let r = a * (b / root) * c;
    // The circumradius is never below half the longest side; this only
    // absorbs rounding in the last place.
    Ok(ExtendedRadius::Finite(r.max(0.5 * a)))
}

/// r(u, v, w) for three points of a normed space.
pub fn circumradius_points(
    spec: &NormSpec,
    u: &Point,
    v: &Point,
    w: &Point,
) -> Result<ExtendedRadius> {
    circumradius(&TriangleSides::from_points(spec, u, v, w)?)
}
