//! Finite-dimensional normed spaces on ℝⁿ.
//!
//! A [`NormSpec`] is an immutable, validated description of a norm. All
//! derived data (Cholesky factor, polytope facets) is computed once at
//! construction so that [`NormSpec::norm`] stays cheap in the classifier's
//! inner loop.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point (or vector) in ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `i`-th standard basis vector of ℝ^dim.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[i] = 1.0;
        Self(c)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0.0)
    }

    /// Standard Euclidean inner product.
    pub fn dot(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Standard Euclidean length, computed with scaling to avoid overflow.
    pub fn euclidean_len(&self) -> f64 {
        scaled_pnorm(self.0.iter().copied(), 2.0)
    }

    pub fn scaled(&self, c: f64) -> Point {
        Point(self.0.iter().map(|x| c * x).collect())
    }

    fn zip_with(&self, other: &Point, f: impl Fn(f64, f64) -> f64) -> Point {
        debug_assert_eq!(self.dim(), other.dim());
        Point(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }
}

impl From<Vec<f64>> for Point {
    fn from(v: Vec<f64>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[f64; N]> for Point {
    fn from(v: [f64; N]) -> Self {
        Self(v.to_vec())
    }
}

impl Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Add for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &Point {
    type Output = Point;
    fn mul(self, c: f64) -> Point {
        self.scaled(c)
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point(self.0.iter().map(|x| -x).collect())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

/// Exponent of an ℓp-type norm. `Infinite` is a distinguished value, never
/// approximated by a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidExponent(p));
        }
        if p.is_infinite() {
            return Ok(Exponent::Infinite);
        }
        Ok(Exponent::Finite(p))
    }

    pub fn is_two(&self) -> bool {
        matches!(self, Exponent::Finite(p) if *p == 2.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

/// The kind-specific data of a norm.
#[derive(Debug, Clone, PartialEq)]
pub enum NormKind {
    /// ‖x‖_p.
    PNorm(Exponent),
    /// ‖diag(w)·x‖_p with strictly positive weights.
    WeightedPNorm { p: Exponent, weights: Vec<f64> },
    /// √(xᵀQx) for symmetric positive-definite Q, evaluated as ‖Lᵀx‖₂ with
    /// Q = LLᵀ.
    Quadratic {
        matrix: Vec<Vec<f64>>,
        cholesky: Vec<Vec<f64>>,
    },
    /// Minkowski functional of a centrally symmetric polytope, evaluated as
    /// max |a·x| over the facet normals a (facets are {a·x = 1}).
    Polyhedral {
        vertices: Vec<Point>,
        facets: Vec<Point>,
    },
}

/// A validated norm on ℝ^dim.
#[derive(Debug, Clone, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
    dim: usize,
}

impl NormSpec {
    pub fn pnorm(dim: usize, p: Exponent) -> Result<Self> {
        check_dim(dim)?;
        if let Exponent::Finite(v) = p {
            Exponent::finite(v)?;
        }
        Ok(Self {
            kind: NormKind::PNorm(p),
            dim,
        })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::pnorm(dim.max(1), Exponent::Finite(2.0)).expect("p = 2 is valid")
    }

    pub fn linf(dim: usize) -> Self {
        Self::pnorm(dim.max(1), Exponent::Infinite).expect("p = inf is valid")
    }

    pub fn weighted_pnorm(p: Exponent, weights: Vec<f64>) -> Result<Self> {
        check_dim(weights.len())?;
        if let Exponent::Finite(v) = p {
            Exponent::finite(v)?;
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidNorm(format!(
                "weights must be positive and finite, got {w}"
            )));
        }
        Ok(Self {
            dim: weights.len(),
            kind: NormKind::WeightedPNorm { p, weights },
        })
    }

    pub fn quadratic(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let n = matrix.len();
        check_dim(n)?;
        if let Some(row) = matrix.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: row.len(),
            });
        }
        let scale = matrix.iter().flatten().fold(0.0_f64, |m, x| m.max(x.abs()));
        if !matrix.iter().flatten().all(|x| x.is_finite()) || scale == 0.0 {
            return Err(Error::NotPositiveDefinite);
        }
        for i in 0..n {
            for j in 0..i {
                if (matrix[i][j] - matrix[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::NotPositiveDefinite);
                }
            }
        }
        let q = DMatrix::from_fn(n, n, |i, j| 0.5 * (matrix[i][j] + matrix[j][i]));
        let chol = q.cholesky().ok_or(Error::NotPositiveDefinite)?;
        let l = chol.l();
        let cholesky = (0..n)
            .map(|i| (0..n).map(|j| l[(i, j)]).collect())
            .collect();
        Ok(Self {
            dim: n,
            kind: NormKind::Quadratic { matrix, cholesky },
        })
    }

    /// Polyhedral norm whose closed unit ball is the convex hull of
    /// `vertices`. The vertex set must be centrally symmetric and span ℝⁿ.
    pub fn polyhedral(vertices: Vec<Point>) -> Result<Self> {
        let first = vertices.first().ok_or(Error::DegeneratePolytope)?;
        let n = first.dim();
        check_dim(n)?;
        if let Some(v) = vertices.iter().find(|v| v.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: v.dim(),
            });
        }
        if !vertices
            .iter()
            .all(|v| v.coords().iter().all(|x| x.is_finite()))
        {
            return Err(Error::InvalidNorm("non-finite vertex coordinate".into()));
        }
        let scale = vertices
            .iter()
            .map(|v| v.euclidean_len())
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return Err(Error::DegeneratePolytope);
        }
        for (index, v) in vertices.iter().enumerate() {
            let neg = -v;
            let mirrored = vertices
                .iter()
                .any(|w| (w - &neg).euclidean_len() <= 1e-9 * scale);
            if !mirrored {
                return Err(Error::AsymmetricPolytope { index });
            }
        }
        let facets = enumerate_facets(&vertices, n, scale)?;
        Ok(Self {
            dim: n,
            kind: NormKind::Polyhedral { vertices, facets },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &NormKind {
        &self.kind
    }

    /// True when the norm is induced by an inner product by construction.
    pub fn is_quadratic_kind(&self) -> bool {
        match &self.kind {
            NormKind::Quadratic { .. } => true,
            NormKind::PNorm(p) => p.is_two(),
            NormKind::WeightedPNorm { p, .. } => p.is_two(),
            NormKind::Polyhedral { .. } => false,
        }
    }

    fn check(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// ‖x‖.
    pub fn norm(&self, x: &Point) -> Result<f64> {
        self.check(x)?;
        Ok(self.norm_unchecked(x.coords()))
    }

    pub(crate) fn norm_unchecked(&self, x: &[f64]) -> f64 {
        match &self.kind {
            NormKind::PNorm(p) => pnorm(x.iter().copied(), *p),
            NormKind::WeightedPNorm { p, weights } => {
                pnorm(x.iter().zip(weights).map(|(x, w)| x * w), *p)
            }
            NormKind::Quadratic { cholesky, .. } => {
                let n = x.len();
                // (Lᵀx)_j = Σ_{i ≥ j} L_ij x_i
                let y = (0..n).map(|j| (j..n).map(|i| cholesky[i][j] * x[i]).sum::<f64>());
                scaled_pnorm(y, 2.0)
            }
            NormKind::Polyhedral { facets, .. } => facets
                .iter()
                .map(|a| {
                    a.coords()
                        .iter()
                        .zip(x)
                        .map(|(a, x)| a * x)
                        .sum::<f64>()
                        .abs()
                })
                .fold(0.0, f64::max),
        }
    }

    /// d(x, y) = ‖x − y‖.
    pub fn dist(&self, x: &Point, y: &Point) -> Result<f64> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.dist_unchecked(x.coords(), y.coords()))
    }

    pub(crate) fn dist_unchecked(&self, x: &[f64], y: &[f64]) -> f64 {
        // Small fixed buffer avoids an allocation per distance in hot loops.
        if x.len() <= 8 {
            let mut buf = [0.0; 8];
            for (i, (a, b)) in x.iter().zip(y).enumerate() {
                buf[i] = a - b;
            }
            self.norm_unchecked(&buf[..x.len()])
        } else {
            let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
            self.norm_unchecked(&d)
        }
    }

    /// The point x0 + r·direction/‖direction‖ on ∂B_r(x0).
    pub fn sphere_point(&self, x0: &Point, r: f64, direction: &Point) -> Result<Point> {
        self.check(x0)?;
        self.check(direction)?;
        check_radius(r)?;
        let len = self.norm_unchecked(direction.coords());
        if len == 0.0 {
            return Err(Error::ZeroDirection);
        }
        let step = direction.scaled(r / len);
        Ok(x0 + &step)
    }
}

/// Reflection of `v` through the center `x0`: 2·x0 − v.
pub fn antipode(x0: &Point, v: &Point) -> Result<Point> {
    if x0.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: x0.dim(),
            found: v.dim(),
        });
    }
    Ok(Point::new(
        x0.coords()
            .iter()
            .zip(v.coords())
            .map(|(c, v)| 2.0 * c - v)
            .collect(),
    ))
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidNorm("dimension must be at least 1".into()));
    }
    Ok(())
}

fn pnorm(x: impl Iterator<Item = f64> + Clone, p: Exponent) -> f64 {
    match p {
        Exponent::Infinite => x.fold(0.0, |m, v| m.max(v.abs())),
        Exponent::Finite(1.0) => x.map(f64::abs).sum(),
        Exponent::Finite(p) => scaled_pnorm(x, p),
    }
}

/// m·(Σ (|xᵢ|/m)^p)^(1/p) with m = max |xᵢ|.
fn scaled_pnorm(x: impl Iterator<Item = f64> + Clone, p: f64) -> f64 {
    let m = x.clone().fold(0.0_f64, |m, v| m.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    let s: f64 = if p == 2.0 {
        x.map(|v| {
            let t = v / m;
            t * t
        })
        .sum()
    } else {
        x.map(|v| (v.abs() / m).powf(p)).sum()
    };
    if p == 2.0 {
        m * s.sqrt()
    } else {
        m * s.powf(1.0 / p)
    }
}

/// Facet normals of conv(vertices), each normalized so the facet is
/// {x : a·x = 1}. Brute force over n-subsets of vertices; fine for the
/// small polytopes this is meant for.
fn enumerate_facets(vertices: &[Point], n: usize, scale: f64) -> Result<Vec<Point>> {
    const MAX_SUBSETS: u128 = 5_000_000;
    let m = vertices.len();
    if m < n + 1 {
        return Err(Error::DegeneratePolytope);
    }
    let subsets = binomial(m as u128, n as u128);
    if subsets > MAX_SUBSETS {
        return Err(Error::InvalidNorm(format!(
            "polytope too large for facet enumeration ({m} vertices in dimension {n})"
        )));
    }

    let mut facets: Vec<Point> = Vec::new();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let rows = DMatrix::from_fn(n, n, |i, j| vertices[idx[i]][j] / scale);
        if let Some(a) = rows.lu().solve(&DVector::from_element(n, 1.0)) {
            let a: Vec<f64> = a.iter().map(|x| x / scale).collect();
            let a = Point::new(a);
            let supporting = a.coords().iter().all(|x| x.is_finite())
                && vertices.iter().all(|v| a.dot(v) <= 1.0 + 1e-9);
            if supporting {
                let alen = a.euclidean_len();
                let dup = facets
                    .iter()
                    .any(|f| (f - &a).euclidean_len() <= 1e-9 * alen);
                if !dup {
                    facets.push(a);
                }
            }
        }
        if !next_combination(&mut idx, m) {
            break;
        }
    }
    // A centrally symmetric full-dimensional polytope has at least 2n facets.
    if facets.len() < 2 * n {
        return Err(Error::DegeneratePolytope);
    }
    Ok(facets)
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

fn next_combination(idx: &mut [usize], m: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < m - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
