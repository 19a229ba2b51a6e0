//! Discrete thickness and integral Menger curvature of weighted point clouds.
//!
//! The continuous energies integrate over X³ against a measure; here the
//! measure is a finite sum of per-point weights (counting measure, or
//! polygonal arclength from [`sample_curve`]).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::menger::{circumradius, ExtendedRadius, TriangleSides};
use crate::normspace::{NormSpec, Point};

/// Where the pairwise distances of a cloud come from.
#[derive(Debug, Clone, PartialEq)]
pub enum CloudMetric {
    Norm { spec: NormSpec, points: Vec<Point> },
    Distances(Vec<Vec<f64>>),
}

/// A finite metric space with positive point weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedPointCloud {
    metric: CloudMetric,
    weights: Vec<f64>,
    // Row-major n×n distance table, filled at construction.
    table: Vec<f64>,
}

impl WeightedPointCloud {
    pub fn with_norm(spec: NormSpec, points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.dim() != spec.dim()) {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                found: p.dim(),
            });
        }
        let n = points.len();
        let mut table = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let d = spec.dist_unchecked(points[i].coords(), points[j].coords());
                table[i * n + j] = d;
                table[j * n + i] = d;
            }
        }
        Self::build(CloudMetric::Norm { spec, points }, weights, table)
    }

    /// Unit weights.
    pub fn counting(spec: NormSpec, points: Vec<Point>) -> Result<Self> {
        let n = points.len();
        Self::with_norm(spec, points, vec![1.0; n])
    }

    pub fn with_distances(matrix: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        let n = matrix.len();
        let mut table = vec![0.0; n * n];
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDistanceMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 || (i == j && d != 0.0) || d != matrix[j][i] {
                    return Err(Error::InvalidDistanceMatrix(format!(
                        "entry ({i},{j}) = {d} is not a symmetric nonnegative distance"
                    )));
                }
                table[i * n + j] = d;
            }
        }
        Self::build(CloudMetric::Distances(matrix), weights, table)
    }

    fn build(metric: CloudMetric, weights: Vec<f64>, table: Vec<f64>) -> Result<Self> {
        let n = weights.len();
        if table.len() != n * n {
            return Err(Error::InvalidWeights(format!(
                "{n} weights for {} points",
                (table.len() as f64).sqrt() as usize
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidWeights(format!("weight {w} is not positive")));
        }
        let diameter = table.iter().fold(0.0_f64, |m, &d| m.max(d));
        for i in 0..n {
            for j in i + 1..n {
                if table[i * n + j] <= 1e-12 * diameter {
                    return Err(Error::CoincidentPoints);
                }
            }
        }
        Ok(Self {
            metric,
            weights,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn metric(&self) -> &CloudMetric {
        &self.metric
    }

    pub fn points(&self) -> Option<&[Point]> {
        match &self.metric {
            CloudMetric::Norm { points, .. } => Some(points),
            CloudMetric::Distances(_) => None,
        }
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.table[i * self.len() + j]
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    fn triple_radius(&self, i: usize, j: usize, k: usize) -> Result<ExtendedRadius> {
        let s = TriangleSides::new(
            self.distance(i, j),
            self.distance(j, k),
            self.distance(k, i),
        )?;
        circumradius(&s)
    }
}

/// Δ = min r(u,v,w) over distinct triples. Fewer than three points, or a
/// cloud whose triples are all collinear, give `Infinite`.
pub fn thickness(cloud: &WeightedPointCloud) -> Result<ExtendedRadius> {
    let n = cloud.len();
    let per_row: Vec<Result<ExtendedRadius>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut best = ExtendedRadius::Infinite;
            for j in i + 1..n {
                for k in j + 1..n {
                    best = best.min(cloud.triple_radius(i, j, k)?);
                }
            }
            Ok(best)
        })
        .collect();
    per_row
        .into_iter()
        .try_fold(ExtendedRadius::Infinite, |acc, r| Ok(acc.min(r?)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyOptions {
    /// Clouds up to this size are summed exactly; larger ones are sampled.
    pub exact_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        Self {
            exact_limit: 1024,
            samples: 1_000_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyEstimate {
    pub value: f64,
    /// Standard error of a Monte Carlo estimate; `None` for exact sums.
    pub std_error: Option<f64>,
    pub triples: u64,
}

/// Σ wᵢwⱼwₖ / r(pᵢ,pⱼ,pₖ)^p over ordered triples of distinct indices.
pub fn menger_energy(cloud: &WeightedPointCloud, p: f64) -> Result<f64> {
    Ok(menger_energy_with(cloud, p, &EnergyOptions::default())?.value)
}

pub fn menger_energy_with(
    cloud: &WeightedPointCloud,
    p: f64,
    opts: &EnergyOptions,
) -> Result<EnergyEstimate> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidEnergyExponent(p));
    }
    let n = cloud.len();
    if n < 3 {
        return Ok(EnergyEstimate {
            value: 0.0,
            std_error: None,
            triples: 0,
        });
    }
    if n > opts.exact_limit {
        return menger_monte_carlo(cloud, p, opts);
    }
    let w = cloud.weights();
    let rows: Vec<Result<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = Neumaier::default();
            for j in i + 1..n {
                for k in j + 1..n {
                    let inv = cloud.triple_radius(i, j, k)?.inverse_power(p);
                    acc.add(w[i] * w[j] * w[k] * inv);
                }
            }
            Ok(acc.total())
        })
        .collect();
    let mut total = Neumaier::default();
    for r in rows {
        total.add(r?);
    }
    let n = n as u64;
    Ok(EnergyEstimate {
        // 3! orderings of every unordered triple
        value: 6.0 * total.total(),
        std_error: None,
        triples: n * (n - 1) * (n - 2),
    })
}

fn menger_monte_carlo(
    cloud: &WeightedPointCloud,
    p: f64,
    opts: &EnergyOptions,
) -> Result<EnergyEstimate> {
    let n = cloud.len();
    let w = cloud.weights();
    let m = opts.samples.max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut mean, mut m2) = (0.0, 0.0);
    for t in 0..m {
        let i = rng.random_range(0..n);
        let j = loop {
            let j = rng.random_range(0..n);
            if j != i {
                break j;
            }
        };
        let k = loop {
            let k = rng.random_range(0..n);
            if k != i && k != j {
                break k;
            }
        };
        let f = w[i] * w[j] * w[k] * cloud.triple_radius(i, j, k)?.inverse_power(p);
        // Welford
        let delta = f - mean;
        mean += delta / (t + 1) as f64;
        m2 += delta * (f - mean);
    }
    let count = (n as f64) * (n as f64 - 1.0) * (n as f64 - 2.0);
    let var = m2 / (m - 1) as f64;
    Ok(EnergyEstimate {
        value: count * mean,
        std_error: Some(count * (var / m as f64).sqrt()),
        triples: m as u64,
    })
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// Parameter range [0, 1) wraps around; samples at i/n.
    Closed,
    /// Parameter range [0, 1]; samples at i/(n−1).
    Open,
}

/// Samples `curve` at `n` uniform parameter values. Each point's weight is
/// half the length of each adjacent polygon segment, measured in `spec`, so
/// the weights sum to the polygon length.
pub fn sample_curve(
    spec: &NormSpec,
    curve: impl Fn(f64) -> Point,
    n: usize,
    closure: Closure,
) -> Result<WeightedPointCloud> {
    if n < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: n,
        });
    }
    let denom = match closure {
        Closure::Closed => n,
        Closure::Open => n - 1,
    } as f64;
    let points: Vec<Point> = (0..n).map(|i| curve(i as f64 / denom)).collect();
    let segments = match closure {
        Closure::Closed => n,
        Closure::Open => n - 1,
    };
    let mut lengths = Vec::with_capacity(segments);
    for s in 0..segments {
        let l = spec.dist(&points[s], &points[(s + 1) % n])?;
        if l == 0.0 {
            return Err(Error::CoincidentPoints);
        }
        lengths.push(l);
    }
    let weights = (0..n)
        .map(|i| {
            let before = match (closure, i) {
                (Closure::Open, 0) => 0.0,
                _ => lengths[(i + segments - 1) % segments],
            };
            let after = if i < segments { lengths[i] } else { 0.0 };
            0.5 * (before + after)
        })
        .collect();
    WeightedPointCloud::with_norm(spec.clone(), points, weights)
}

/// Parses a whitespace-separated point table: one point per line, its
/// coordinates optionally followed by a weight; `#` starts a comment.
///
/// With `dim` given, a line of dim + 1 numbers carries a weight. Without it,
/// the first data line fixes the dimension and no weights are read.
pub fn parse_cloud(text: &str, dim: Option<usize>) -> Result<(Vec<Point>, Vec<f64>)> {
    let mut dim = dim;
    let mut points = Vec::new();
    let mut weights = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let values = body
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line,
                        message: format!("invalid number {tok:?}"),
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        let d = *dim.get_or_insert(values.len());
        let weight = if values.len() == d {
            1.0
        } else if values.len() == d + 1 {
            values[d]
        } else {
            return Err(Error::Parse {
                line,
                message: format!(
                    "expected {d} coordinates (+ optional weight), found {} values",
                    values.len()
                ),
            });
        };
        if weight <= 0.0 {
            return Err(Error::Parse {
                line,
                message: format!("weight {weight} must be positive"),
            });
        }
        points.push(Point::new(values[..d].to_vec()));
        weights.push(weight);
    }
    Ok((points, weights))
}
