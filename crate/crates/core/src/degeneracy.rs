//! Sphere degeneracy and the inner-product-space classifier.
//!
//! In a normed space of dimension ≥ 2 the supremum S of the circumradius
//! over triples on a sphere ∂B_r(x0) equals r exactly when the norm comes
//! from an inner product, and exceeds r otherwise. A non-inner-product norm
//! always has a witness of the antipodal form (u, v, 2x0 − v), so the search
//! only walks two sphere directions inside 2-D sections of the space.
//!
//! Everything is evaluated on offsets from the center so that results do not
//! depend on where the sphere sits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::menger::{circumradius, circumradius_points, ExtendedRadius, TriangleSides};
use crate::normspace::{check_radius, NormSpec, Point};
use crate::optimize::nelder_mead;

/// Triples with a side shorter than this fraction of r are not probed.
const COINCIDENCE_GUARD: f64 = 1e-6;

/// Search effort for the sphere and defect searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Grid cells per angle axis.
    pub grid: usize,
    /// Local refinements started from the best grid cells of each section.
    pub refine_starts: usize,
    /// 2-D sections searched when dim ≥ 3 (the first is always span(e₁, e₂)).
    pub sections: usize,
    /// Nelder–Mead iteration cap per start.
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            grid: 64,
            refine_starts: 8,
            sections: 16,
            max_iterations: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifyOptions {
    pub budget: SearchBudget,
    /// Relative margin on S − r.
    pub margin: f64,
    /// |defect| threshold in units of r².
    pub defect_threshold: f64,
    /// Grids coarser than this never yield an INNER_PRODUCT verdict.
    pub min_conclusive_grid: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        Self {
            budget: SearchBudget::default(),
            margin: 1e-6,
            defect_threshold: 1e-9,
            min_conclusive_grid: 8,
        }
    }
}

/// A pair violating the parallelogram law. `u` and `v` are offsets from
/// `center`, i.e. points of ∂B_r(0).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectRecord {
    pub center: Point,
    pub u: Point,
    pub v: Point,
    /// ‖u+v‖² + ‖u−v‖² − 2‖u‖² − 2‖v‖².
    pub defect: f64,
}

impl DefectRecord {
    /// The antipodal sphere triple (x0+u, x0+v, x0−v).
    pub fn triple(&self) -> [Point; 3] {
        [
            &self.center + &self.u,
            &self.center + &self.v,
            &self.center - &self.v,
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub points: [Point; 3],
    pub circumradius: ExtendedRadius,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    InnerProduct,
    NotInnerProduct,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::InnerProduct => "INNER_PRODUCT",
            Verdict::NotInnerProduct => "NOT_INNER_PRODUCT",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SearchDiagnostics {
    pub sections: usize,
    pub grid_evaluations: usize,
    pub starts: usize,
    pub iterations: usize,
    /// Best objective value reached by each refinement start, in order.
    pub best_per_start: Vec<ExtendedRadius>,
    /// The search stopped at a degenerate (collinear) triple.
    pub short_circuited: bool,
}

/// Result of [`s_of_sphere`]: a certified lower bound on S(∂B_r(x0)).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSearch {
    pub estimate: ExtendedRadius,
    pub witness: Witness,
    pub diagnostics: SearchDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectSearch {
    pub best: DefectRecord,
    pub diagnostics: SearchDiagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub verdict: Verdict,
    pub s_estimate: ExtendedRadius,
    pub r: f64,
    pub x0: Point,
    /// Present for NOT_INNER_PRODUCT verdicts.
    pub witness: Option<Witness>,
    /// S exceeded r·(1 + margin).
    pub sphere_degenerate: bool,
    /// Largest |parallelogram defect| found, in absolute units.
    pub max_defect: f64,
    /// Present when the defect exceeded the threshold.
    pub defect_pair: Option<DefectRecord>,
    pub sphere_search: SearchDiagnostics,
    pub defect_search: SearchDiagnostics,
}

/// ‖u+v‖² + ‖u−v‖² − 2‖u‖² − 2‖v‖²; zero for all pairs exactly in inner
/// product spaces.
pub fn parallelogram_defect(spec: &NormSpec, u: &Point, v: &Point) -> Result<f64> {
    let nu = spec.norm(u)?;
    let nv = spec.norm(v)?;
    let sum = spec.norm(&(u + v))?;
    let diff = spec.norm(&(u - v))?;
    Ok(sum * sum + diff * diff - 2.0 * nu * nu - 2.0 * nv * nv)
}

/// Exact S(M) = max r(u,v,w) over all triples of a finite set.
pub fn s_of_finite_set(spec: &NormSpec, points: &[Point]) -> Result<ExtendedRadius> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: points.len(),
        });
    }
    let mut best = ExtendedRadius::Finite(0.0);
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            for k in j + 1..points.len() {
                let r = circumradius_points(spec, &points[i], &points[j], &points[k])?;
                if r.is_infinite() {
                    return Ok(r);
                }
                best = best.max(r);
            }
        }
    }
    Ok(best)
}

/// A 2-D section through the sphere center, spanned by Euclidean-orthonormal
/// directions.
#[derive(Debug, Clone)]
struct Section {
    e1: Vec<f64>,
    e2: Vec<f64>,
}

/// span(e₁, e₂), followed in dim ≥ 3 by random sections drawn in order from
/// the seeded generator (so a larger budget extends the list).
fn sections(dim: usize, budget: &SearchBudget) -> Vec<Section> {
    let first = Section {
        e1: Point::unit(dim, 0).into_coords(),
        e2: Point::unit(dim, 1).into_coords(),
    };
    let mut out = vec![first];
    if dim < 3 {
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    while out.len() < budget.sections.max(1) {
        let mut gauss =
            || -> Vec<f64> { (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect() };
        let a = Point::new(gauss());
        let b = Point::new(gauss());
        let la = a.euclidean_len();
        if la < 1e-8 {
            continue;
        }
        let a = a.scaled(1.0 / la);
        let b = &b - &a.scaled(a.dot(&b));
        let lb = b.euclidean_len();
        if lb < 1e-8 {
            continue;
        }
        out.push(Section {
            e1: a.into_coords(),
            e2: b.scaled(1.0 / lb).into_coords(),
        });
    }
    out
}

/// Evaluates sphere quantities at section angles.
struct Probe<'a> {
    spec: &'a NormSpec,
    r: f64,
    section: &'a Section,
}

impl Probe<'_> {
    /// r·d/‖d‖ for d = cos θ·e₁ + sin θ·e₂.
    fn offset(&self, theta: f64) -> Vec<f64> {
        let (s, c) = theta.sin_cos();
        let d: Vec<f64> = self
            .section
            .e1
            .iter()
            .zip(&self.section.e2)
            .map(|(a, b)| c * a + s * b)
            .collect();
        let scale = self.r / self.spec.norm_unchecked(&d);
        d.into_iter().map(|x| x * scale).collect()
    }

    /// Circumradius of (u, v, −v); `None` when two of the points (nearly)
    /// coincide.
    fn antipodal(&self, tu: f64, tv: f64) -> Option<ExtendedRadius> {
        let u = self.offset(tu);
        let v = self.offset(tv);
        let w: Vec<f64> = v.iter().map(|x| -x).collect();
        let a = self.spec.dist_unchecked(&u, &v);
        let b = self.spec.dist_unchecked(&v, &w);
        let c = self.spec.dist_unchecked(&w, &u);
        if a.min(b).min(c) < COINCIDENCE_GUARD * self.r {
            return None;
        }
        circumradius(&TriangleSides::new(a, b, c).ok()?).ok()
    }

    fn defect(&self, tu: f64, tv: f64) -> f64 {
        let u = self.offset(tu);
        let v = self.offset(tv);
        let sum: Vec<f64> = u.iter().zip(&v).map(|(a, b)| a + b).collect();
        let n = |x: &[f64]| self.spec.norm_unchecked(x);
        let (nu, nv) = (n(&u), n(&v));
        let (ns, nd) = (n(&sum), self.spec.dist_unchecked(&u, &v));
        ns * ns + nd * nd - 2.0 * nu * nu - 2.0 * nv * nv
    }
}

struct SectionResult {
    best: f64,
    angles: (f64, f64),
    grid_evaluations: usize,
    iterations: usize,
    best_per_start: Vec<f64>,
}

/// Grid over θu ∈ [0, 2π) × θv ∈ [0, π) and Nelder–Mead refinement from the
/// best cells. The objective is maximized; +∞ ends the search at once and
/// −∞ marks a point that must not be probed.
fn search_section(objective: impl Fn(f64, f64) -> f64, budget: &SearchBudget) -> SectionResult {
    use std::f64::consts::PI;
    let g = budget.grid.max(1);
    let (hu, hv) = (2.0 * PI / g as f64, PI / g as f64);
    let mut cells = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            let angles = (hu * i as f64, hv * j as f64);
            let f = objective(angles.0, angles.1);
            if f == f64::INFINITY {
                return SectionResult {
                    best: f,
                    angles,
                    grid_evaluations: cells.len() + 1,
                    iterations: 0,
                    best_per_start: Vec::new(),
                };
            }
            cells.push((f, angles));
        }
    }
    let grid_evaluations = cells.len();
    // Stable sort keeps grid order among ties.
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let (mut best, mut angles) = cells[0];
    let mut iterations = 0;
    let mut best_per_start = Vec::new();
    for &(_, start) in cells
        .iter()
        .filter(|c| c.0 > f64::NEG_INFINITY)
        .take(budget.refine_starts)
    {
        let res = nelder_mead(
            |x: &[f64; 2]| -objective(x[0], x[1]),
            [start.0, start.1],
            [0.5 * hu, 0.5 * hv],
            budget.max_iterations,
        );
        iterations += res.iterations;
        let f = -res.value;
        best_per_start.push(f);
        if f > best {
            best = f;
            angles = (res.point[0], res.point[1]);
        }
        if f == f64::INFINITY {
            break;
        }
    }
    SectionResult {
        best,
        angles,
        grid_evaluations,
        iterations,
        best_per_start,
    }
}

fn merge_diagnostics(results: &[SectionResult]) -> SearchDiagnostics {
    let mut d = SearchDiagnostics {
        sections: results.len(),
        ..Default::default()
    };
    for r in results {
        d.grid_evaluations += r.grid_evaluations;
        d.iterations += r.iterations;
        d.starts += r.best_per_start.len();
        d.best_per_start.extend(
            r.best_per_start
                .iter()
                .map(|&f| ExtendedRadius::from_f64(f.max(0.0))),
        );
    }
    d.short_circuited = results.iter().any(|r| r.best == f64::INFINITY);
    d
}

/// Index of the first maximal entry (the pure max-reduction used to merge
/// parallel section results deterministically).
fn argmax(results: &[SectionResult]) -> usize {
    let mut k = 0;
    for (i, r) in results.iter().enumerate() {
        if r.best > results[k].best {
            k = i;
        }
    }
    k
}

fn check_search_args(spec: &NormSpec, x0: &Point, r: f64) -> Result<()> {
    if spec.dim() < 2 {
        return Err(Error::UnsupportedDimension(spec.dim()));
    }
    if x0.dim() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            found: x0.dim(),
        });
    }
    check_radius(r)
}

fn check_budget(budget: &SearchBudget) -> Result<()> {
    if budget.grid < 2 {
        return Err(Error::InvalidBudget(format!(
            "grid must be at least 2, got {}",
            budget.grid
        )));
    }
    Ok(())
}

/// Lower bound on S(∂B_r(x0)) from antipodal triples, with the triple that
/// attains it. Returns `Infinite` as soon as a probed triple is collinear.
pub fn s_of_sphere(
    spec: &NormSpec,
    x0: &Point,
    r: f64,
    budget: &SearchBudget,
) -> Result<SphereSearch> {
    check_search_args(spec, x0, r)?;
    check_budget(budget)?;
    let secs = sections(spec.dim(), budget);
    let results: Vec<SectionResult> = secs
        .par_iter()
        .map(|section| {
            let probe = Probe { spec, r, section };
            search_section(
                |tu, tv| match probe.antipodal(tu, tv) {
                    None => f64::NEG_INFINITY,
                    Some(rad) => rad.to_f64(),
                },
                budget,
            )
        })
        .collect();
    let diagnostics = merge_diagnostics(&results);
    // Sections are independent; the first degenerate one wins.
    let k = results
        .iter()
        .position(|r| r.best == f64::INFINITY)
        .unwrap_or_else(|| argmax(&results));
    let probe = Probe {
        spec,
        r,
        section: &secs[k],
    };
    let (tu, tv) = results[k].angles;
    let u = Point::new(probe.offset(tu));
    let v = Point::new(probe.offset(tv));
    let points = [x0 + &u, x0 + &v, x0 - &v];
    let estimate = probe.antipodal(tu, tv).ok_or(Error::CoincidentPoints)?;
    Ok(SphereSearch {
        estimate,
        witness: Witness {
            points,
            circumradius: estimate,
        },
        diagnostics,
    })
}

/// Pair on ∂B_r(0) with the largest |parallelogram defect|, without any
/// threshold applied.
pub fn defect_search(
    spec: &NormSpec,
    x0: &Point,
    r: f64,
    budget: &SearchBudget,
) -> Result<DefectSearch> {
    check_search_args(spec, x0, r)?;
    check_budget(budget)?;
    let secs = sections(spec.dim(), budget);
    let results: Vec<SectionResult> = secs
        .par_iter()
        .map(|section| {
            let probe = Probe { spec, r, section };
            search_section(|tu, tv| probe.defect(tu, tv).abs(), budget)
        })
        .collect();
    let mut diagnostics = merge_diagnostics(&results);
    diagnostics.short_circuited = false;
    let k = argmax(&results);
    let probe = Probe {
        spec,
        r,
        section: &secs[k],
    };
    let (tu, tv) = results[k].angles;
    Ok(DefectSearch {
        best: DefectRecord {
            center: x0.clone(),
            u: Point::new(probe.offset(tu)),
            v: Point::new(probe.offset(tv)),
            defect: probe.defect(tu, tv),
        },
        diagnostics,
    })
}

/// Searches ∂B_r(x0) for a pair violating the parallelogram law; returns it
/// when |defect| > 1e-9·r².
pub fn find_defect_pair(
    spec: &NormSpec,
    x0: &Point,
    r: f64,
    budget: &SearchBudget,
) -> Result<Option<DefectRecord>> {
    let found = defect_search(spec, x0, r, budget)?;
    Ok((found.best.defect.abs() > 1e-9 * r * r).then_some(found.best))
}

/// Decides whether `spec` is induced by an inner product by bounding
/// S(∂B_r(x0)) from below and looking for parallelogram-law violations.
///
/// NOT_INNER_PRODUCT is certified by the stored witness. INNER_PRODUCT means
/// neither search found evidence within the budget.
pub fn classify(
    spec: &NormSpec,
    x0: &Point,
    r: f64,
    options: &ClassifyOptions,
) -> Result<ClassificationReport> {
    let sphere = s_of_sphere(spec, x0, r, &options.budget)?;
    let defects = defect_search(spec, x0, r, &options.budget)?;
    let max_defect = defects.best.defect.abs();
    let defect_found = max_defect > options.defect_threshold * r * r;

    // The defect pair's antipodal triple is a probed sphere triple too.
    let mut best = sphere.witness.clone();
    if let Some(rad) = defect_triple_radius(spec, &defects.best, r) {
        if rad > best.circumradius {
            best = Witness {
                points: defects.best.triple(),
                circumradius: rad,
            };
        }
    }
    let s_estimate = best.circumradius;
    let sphere_degenerate = s_estimate > ExtendedRadius::Finite(r * (1.0 + options.margin));

    let verdict = if sphere_degenerate || defect_found {
        Verdict::NotInnerProduct
    } else if options.budget.grid >= options.min_conclusive_grid
        && s_estimate >= ExtendedRadius::Finite(r * (1.0 - options.margin))
    {
        Verdict::InnerProduct
    } else {
        Verdict::Inconclusive
    };

    Ok(ClassificationReport {
        verdict,
        s_estimate,
        r,
        x0: x0.clone(),
        witness: (verdict == Verdict::NotInnerProduct).then_some(best),
        sphere_degenerate,
        max_defect,
        defect_pair: defect_found.then_some(defects.best),
        sphere_search: sphere.diagnostics,
        defect_search: defects.diagnostics,
    })
}

/// r(u, v, −v) for a defect pair, subject to the same coincidence guard as
/// the sphere search.
fn defect_triple_radius(spec: &NormSpec, d: &DefectRecord, r: f64) -> Option<ExtendedRadius> {
    let w = -&d.v;
    let a = spec.dist(&d.u, &d.v).ok()?;
    let b = spec.dist(&d.v, &w).ok()?;
    let c = spec.dist(&w, &d.u).ok()?;
    if a.min(b).min(c) < COINCIDENCE_GUARD * r {
        return None;
    }
    circumradius(&TriangleSides::new(a, b, c).ok()?).ok()
}

/// Circumradius of (u, v, −v) over the grid of the first section, for
/// external plotting. `None` marks skipped (near-coincident) cells.
pub fn circumradius_landscape(
    spec: &NormSpec,
    r: f64,
    grid: usize,
) -> Result<Vec<(f64, f64, Option<ExtendedRadius>)>> {
    use std::f64::consts::PI;
    check_search_args(spec, &Point::zeros(spec.dim()), r)?;
    let section = sections(spec.dim(), &SearchBudget::default()).swap_remove(0);
    let probe = Probe {
        spec,
        r,
        section: &section,
    };
    let g = grid.max(1);
    let mut out = Vec::with_capacity(g * g);
    for i in 0..g {
        for j in 0..g {
            let (tu, tv) = (2.0 * PI * i as f64 / g as f64, PI * j as f64 / g as f64);
            out.push((tu, tv, probe.antipodal(tu, tv)));
        }
    }
    Ok(out)
}

/// Three points on the ℓ∞ unit sphere of ℝ² with circumradius exactly `d`.
///
/// Small targets use the equilateral family (−1, 1−s), (−1+s, 1), (−1, 1)
/// with s = d√3; targets ≥ 2/√3 use the isosceles family (−1, 1−s),
/// (1, 1−s), (0, 1) with s²/(2√(s²−1)) = d; `Infinite` gives the collinear
/// triple (0, 1), (1, 0), (−1, 0).
pub fn achieve_circumradius_linf(d: ExtendedRadius) -> Result<[Point; 3]> {
    let d = match d {
        ExtendedRadius::Infinite => {
            return Ok([
                Point::from([0.0, 1.0]),
                Point::from([1.0, 0.0]),
                Point::from([-1.0, 0.0]),
            ])
        }
        ExtendedRadius::Finite(d) if d.is_finite() && d > 0.0 => d,
        ExtendedRadius::Finite(d) => return Err(Error::InvalidTarget(d)),
    };
    let threshold = 2.0 / 3f64.sqrt();
    if d < threshold {
        let s = d * 3f64.sqrt();
        return Ok([
            Point::from([-1.0, 1.0 - s]),
            Point::from([-1.0 + s, 1.0]),
            Point::from([-1.0, 1.0]),
        ]);
    }
    // s² = q solves q² − 4d²q + 4d² = 0. The larger root lies in (1, 4]
    // only at d = 2/√3; otherwise take the smaller one, written stably.
    let root = ((d - 1.0) * (d + 1.0)).sqrt();
    let large = 2.0 * d * (d + root);
    let q = if large <= 4.0 * (1.0 + 1e-12) {
        large.min(4.0)
    } else {
        2.0 * d / (d + root)
    };
    let s = q.sqrt();
    Ok([
        Point::from([-1.0, 1.0 - s]),
        Point::from([1.0, 1.0 - s]),
        Point::from([0.0, 1.0]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normspace::Exponent;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn defect_examples() {
        let e1 = Point::from([1.0, 0.0]);
        let e2 = Point::from([0.0, 1.0]);
        assert!(
            parallelogram_defect(&NormSpec::euclidean(2), &e1, &e2)
                .unwrap()
                .abs()
                < 1e-14
        );
        assert_eq!(
            parallelogram_defect(&NormSpec::linf(2), &e2, &e1).unwrap(),
            -2.0
        );
        let l1 = NormSpec::pnorm(2, Exponent::Finite(1.0)).unwrap();
        assert_eq!(parallelogram_defect(&l1, &e1, &e2).unwrap(), 4.0);
    }

    #[test]
    fn finite_set_examples() {
        let e = NormSpec::euclidean(2);
        let tri = [
            Point::from([0.0, 0.0]),
            Point::from([1.0, 0.0]),
            Point::from([0.5, 3f64.sqrt() / 2.0]),
        ];
        let s = s_of_finite_set(&e, &tri).unwrap().to_f64();
        assert!(rel(s, 1.0 / 3f64.sqrt()) < 1e-14);

        let square = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]].map(Point::from);
        let s = s_of_finite_set(&e, &square).unwrap().to_f64();
        assert!(rel(s, 2f64.sqrt() / 2.0) < 1e-14);

        let mut with_line = square.to_vec();
        with_line.push(Point::from([2.0, 0.0]));
        assert!(s_of_finite_set(&e, &with_line).unwrap().is_infinite());

        assert!(matches!(
            s_of_finite_set(&e, &square[..2]),
            Err(Error::TooFewPoints { .. })
        ));
        let dup = [square[0].clone(), square[0].clone(), square[1].clone()];
        assert_eq!(s_of_finite_set(&e, &dup), Err(Error::CoincidentPoints));
    }

    #[test]
    fn euclidean_sphere_attains_radius() {
        let e = NormSpec::euclidean(2);
        for (x0, r) in [(Point::zeros(2), 1.0), (Point::from([3.0, -2.0]), 0.25)] {
            let s = s_of_sphere(&e, &x0, r, &SearchBudget::default()).unwrap();
            assert!(rel(s.estimate.to_f64(), r) < 1e-9, "{:?}", s.estimate);
        }
    }

    #[test]
    fn linf_sphere_is_degenerate() {
        let s = s_of_sphere(
            &NormSpec::linf(2),
            &Point::zeros(2),
            1.0,
            &SearchBudget::default(),
        )
        .unwrap();
        assert!(s.estimate.is_infinite());
        assert!(s.diagnostics.short_circuited);
        let [u, v, w] = &s.witness.points;
        let again = circumradius_points(&NormSpec::linf(2), u, v, w).unwrap();
        assert!(again.is_infinite());
    }

    #[test]
    fn l1_sphere_exceeds_radius() {
        let l1 = NormSpec::pnorm(2, Exponent::Finite(1.0)).unwrap();
        let s = s_of_sphere(&l1, &Point::zeros(2), 1.0, &SearchBudget::default()).unwrap();
        assert!(s.estimate > ExtendedRadius::Finite(1.0));
    }

    #[test]
    fn dim_one_is_unsupported() {
        let e = NormSpec::euclidean(1);
        assert_eq!(
            s_of_sphere(&e, &Point::zeros(1), 1.0, &SearchBudget::default()).unwrap_err(),
            Error::UnsupportedDimension(1)
        );
        assert!(classify(&e, &Point::zeros(1), 1.0, &ClassifyOptions::default()).is_err());
    }

    #[test]
    fn no_defect_in_quadratic_space() {
        let q = NormSpec::quadratic(vec![vec![2.0, 0.3], vec![0.3, 0.5]]).unwrap();
        assert!(
            find_defect_pair(&q, &Point::zeros(2), 1.0, &SearchBudget::default())
                .unwrap()
                .is_none()
        );
    }

    #[test]
    fn linf_defect_pair() {
        let d = find_defect_pair(
            &NormSpec::linf(2),
            &Point::zeros(2),
            1.0,
            &SearchBudget::default(),
        )
        .unwrap()
        .unwrap();
        // Corner pairs such as (1, 1), (1, −1) reach the maximum 4.
        assert!(d.defect.abs() >= 2.0);
        assert!(rel(d.defect.abs(), 4.0) < 1e-9);
    }

    #[test]
    fn l1_defect_pair_in_3d() {
        let l1 = NormSpec::pnorm(3, Exponent::Finite(1.0)).unwrap();
        let d = find_defect_pair(&l1, &Point::zeros(3), 2.0, &SearchBudget::default())
            .unwrap()
            .unwrap();
        assert!(rel(d.defect.abs(), 16.0) < 1e-9, "{}", d.defect);
    }

    #[test]
    fn classify_examples() {
        let opts = ClassifyOptions::default();
        let e = classify(
            &NormSpec::euclidean(2),
            &Point::from([1.0, 2.0]),
            3.0,
            &opts,
        )
        .unwrap();
        assert_eq!(e.verdict, Verdict::InnerProduct);
        assert!(e.witness.is_none());

        let linf = classify(&NormSpec::linf(2), &Point::zeros(2), 1.0, &opts).unwrap();
        assert_eq!(linf.verdict, Verdict::NotInnerProduct);
        assert!(linf.witness.unwrap().circumradius.is_infinite());
    }

    #[test]
    fn tiny_grid_is_inconclusive_for_near_euclidean() {
        let opts = ClassifyOptions {
            budget: SearchBudget {
                grid: 4,
                ..Default::default()
            },
            ..Default::default()
        };
        let e = classify(&NormSpec::euclidean(2), &Point::zeros(2), 1.0, &opts).unwrap();
        assert_eq!(e.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn achieve_examples() {
        let linf = NormSpec::linf(2);
        let eq = achieve_circumradius_linf(ExtendedRadius::Finite(1.0 / 3f64.sqrt())).unwrap();
        assert!((eq[0][1] - 0.0).abs() < 1e-15, "s = 1 puts u at (-1, 0)");
        let iso = achieve_circumradius_linf(ExtendedRadius::Finite(2.0 / 3f64.sqrt())).unwrap();
        assert_eq!(iso[0], Point::from([-1.0, -1.0]), "s = 2");
        let r = circumradius_points(&linf, &iso[0], &iso[1], &iso[2]).unwrap();
        assert!(rel(r.to_f64(), 2.0 / 3f64.sqrt()) < 1e-12);
        let inf = achieve_circumradius_linf(ExtendedRadius::Infinite).unwrap();
        assert_eq!(inf[0], Point::from([0.0, 1.0]));
        assert!(circumradius_points(&linf, &inf[0], &inf[1], &inf[2])
            .unwrap()
            .is_infinite());
        assert!(achieve_circumradius_linf(ExtendedRadius::Finite(0.0)).is_err());
        assert!(achieve_circumradius_linf(ExtendedRadius::Finite(-1.0)).is_err());
    }

    #[test]
    fn landscape_has_grid_shape() {
        let l = circumradius_landscape(&NormSpec::euclidean(2), 1.0, 8).unwrap();
        assert_eq!(l.len(), 64);
        assert!(l.iter().any(|c| c.2.is_none()));
    }
}
