//! Real points of presentations: membership tests, grid search with
//! Gauss–Newton refinement, and sampled checks built on top of them.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{same_ring, Ring, RingElement, RingMorphism, ACCEPT_TOL, CLUSTER_RADIUS, NEWTON_TOL};
use crate::expr::{CompiledExpr, SmoothExpr};
use crate::linalg::lstsq;
use crate::{DomainError, Error, Result};

/// An ℝ-point of a presentation: a common zero of its relations.
#[derive(Clone, Debug)]
pub struct RPoint {
    owner: Ring,
    coords: Vec<f64>,
    residual: f64,
}

impl RPoint {
    pub fn owner(&self) -> &Ring {
        &self.owner
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// Re-admit the point on another presentation of the same arity.
    pub fn reinterpret(&self, owner: &Ring, tol: f64) -> Result<PointTest> {
        is_r_point(owner, &self.coords, tol)
    }
}

/// Outcome of [`is_r_point`].
#[derive(Clone, Debug)]
pub enum PointTest {
    Accepted(RPoint),
    Rejected {
        residual: f64,
    },
    /// Some relation is undefined at the point.
    OutsideDomain {
        relation: usize,
        error: DomainError,
    },
}

impl PointTest {
    pub fn point(self) -> Option<RPoint> {
        match self {
            PointTest::Accepted(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_accepted(&self) -> bool {
        matches!(self, PointTest::Accepted(_))
    }
}

pub fn is_r_point(ring: &Ring, p: &[f64], tol: f64) -> Result<PointTest> {
    if p.len() != ring.arity() {
        return Err(Error::ArityMismatch {
            expected: ring.arity(),
            found: p.len(),
        });
    }
    let residual = match ring.residuals(p) {
        Ok(r) => r.iter().fold(0.0f64, |m, v| m.max(v.abs())),
        Err((relation, error)) => return Ok(PointTest::OutsideDomain { relation, error }),
    };
    if residual <= tol {
        Ok(PointTest::Accepted(RPoint {
            owner: ring.clone(),
            coords: p.to_vec(),
            residual,
        }))
    } else {
        Ok(PointTest::Rejected { residual })
    }
}

/// Parameters of the grid search in [`find_r_points`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchParams {
    /// One closed interval per generator.
    pub bounds: Vec<(f64, f64)>,
    pub grid_step: f64,
    pub newton_iters: usize,
    /// Residual a refined point must reach to be admitted.
    pub newton_tol: f64,
    pub cluster_radius: f64,
    /// Seeds the subsampling in [`sample_points`]; the grid scan itself is
    /// deterministic without it.
    pub seed: u64,
}

impl SearchParams {
    pub fn new(bounds: Vec<(f64, f64)>, grid_step: f64) -> Self {
        SearchParams {
            bounds,
            grid_step,
            newton_iters: 20,
            newton_tol: NEWTON_TOL,
            cluster_radius: CLUSTER_RADIUS,
            seed: 0,
        }
    }

    /// The cube `[lo, hi]ⁿ`.
    pub fn cube(n: usize, lo: f64, hi: f64, grid_step: f64) -> Self {
        Self::new(vec![(lo, hi); n], grid_step)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

fn grid_axis(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    if hi < lo {
        return Vec::new();
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

struct Refiner {
    relations: Vec<CompiledExpr>,
    jacobian: Vec<Vec<CompiledExpr>>,
}

impl Refiner {
    fn new(relations: &[SmoothExpr], n: usize) -> Self {
        Refiner {
            relations: relations.iter().map(CompiledExpr::new).collect(),
            jacobian: relations
                .iter()
                .map(|r| r.gradient(n).iter().map(CompiledExpr::new).collect())
                .collect(),
        }
    }

    fn residuals(&self, p: &[f64]) -> Option<Vec<f64>> {
        self.relations.iter().map(|r| r.evaluate(p).ok()).collect()
    }

    fn jacobian_at(&self, p: &[f64]) -> Option<DMatrix<f64>> {
        let n = p.len();
        let mut j = DMatrix::zeros(self.relations.len(), n);
        for (i, row) in self.jacobian.iter().enumerate() {
            for (k, d) in row.iter().enumerate() {
                j[(i, k)] = d.evaluate(p).ok()?;
            }
        }
        Some(j)
    }

    /// Gauss–Newton iterations on the relation vector. Returns the refined
    /// point and its residual, or `None` if the iteration left the domain.
    fn refine(&self, start: Vec<f64>, iters: usize, tol: f64) -> Option<(Vec<f64>, f64)> {
        let mut p = start;
        let mut r = self.residuals(&p)?;
        for _ in 0..iters {
            let res = max_abs(&r);
            if res == 0.0 {
                break;
            }
            let j = self.jacobian_at(&p)?;
            let neg: Vec<f64> = r.iter().map(|v| -v).collect();
            let step = lstsq(&j, &neg)?;
            let next: Vec<f64> = p.iter().zip(&step).map(|(a, b)| a + b).collect();
            if next.iter().any(|v| !v.is_finite()) {
                return None;
            }
            let Some(next_r) = self.residuals(&next) else {
                break;
            };
            let step_size = max_abs(&step);
            p = next;
            r = next_r;
            if step_size <= 1e-15 * (1.0 + max_abs(&p)) || max_abs(&r) <= 1e-4 * tol {
                break;
            }
        }
        let res = max_abs(&r);
        Some((p, res))
    }
}

/// Keep the lexicographically smallest point of every cluster. Input must
/// be sorted lexicographically.
fn cluster(sorted: Vec<(Vec<f64>, f64)>, radius: f64) -> Vec<(Vec<f64>, f64)> {
    let mut kept: Vec<(Vec<f64>, f64)> = Vec::new();
    for (p, res) in sorted {
        let near = kept
            .iter()
            .rev()
            .take_while(|(q, _)| q.first().is_none_or(|q0| p[0] - q0 <= radius))
            .any(|(q, _)| {
                let d2: f64 = p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                d2.sqrt() <= radius
            });
        if !near {
            kept.push((p, res));
        }
    }
    kept
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

/// Grid scan plus Gauss–Newton refinement, admitting points with residual
/// `≤ newton_tol`, merged within `cluster_radius` and sorted
/// lexicographically. Refined points must stay in the box (up to the
/// cluster radius).
pub fn find_r_points(ring: &Ring, params: &SearchParams) -> Result<Vec<RPoint>> {
    let n = ring.arity();
    if params.bounds.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: params.bounds.len(),
        });
    }
    if !(params.grid_step > 0.0) {
        return Err(Error::Mismatch("grid step must be positive".into()));
    }
    if ring.is_zero_ring() {
        return Ok(Vec::new());
    }
    let refiner = Refiner::new(ring.relations(), n);
    let axes: Vec<Vec<f64>> = params
        .bounds
        .iter()
        .map(|&(lo, hi)| grid_axis(lo, hi, params.grid_step))
        .collect();
    let total: usize = axes.iter().map(Vec::len).product();
    let slack = params.cluster_radius;
    let in_box = |p: &[f64]| {
        p.iter()
            .zip(&params.bounds)
            .all(|(v, &(lo, hi))| *v >= lo - slack && *v <= hi + slack)
    };

    let mut found: Vec<(Vec<f64>, f64)> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut start = vec![0.0; n];
            for k in (0..n).rev() {
                let len = axes[k].len();
                start[k] = axes[k][idx % len];
                idx /= len;
            }
            let (p, res) = refiner.refine(start, params.newton_iters, params.newton_tol)?;
            (res <= params.newton_tol && in_box(&p)).then_some((p, res))
        })
        .collect();
    found.sort_by(|a, b| lex(&a.0, &b.0));
    let merged = cluster(found, params.cluster_radius);
    Ok(merged
        .into_iter()
        .map(|(coords, residual)| RPoint {
            owner: ring.clone(),
            coords,
            residual,
        })
        .collect())
}

/// Up to `count` points from [`find_r_points`], chosen by a seeded
/// generator and returned in lexicographic order.
pub fn sample_points(ring: &Ring, params: &SearchParams, count: usize) -> Result<Vec<RPoint>> {
    let all = find_r_points(ring, params)?;
    if all.len() <= count {
        return Ok(all);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut picked = rand::seq::index::sample(&mut rng, all.len(), count).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| all[i].clone()).collect())
}

/// `c_*(p)`: the value of an element at an ℝ-point.
pub fn eval_element(c: &RingElement, p: &RPoint) -> Result<f64> {
    if !same_ring(c.owner(), &p.owner) {
        return Err(Error::OwnerMismatch);
    }
    Ok(c.ambient().evaluate(&p.coords)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MorphismReport {
    pub checked_points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
}

/// Necessary condition for well-definedness: every source relation must
/// vanish at the image of each sampled ℝ-point of the target.
pub fn morphism_check(
    phi: &RingMorphism,
    n_points: usize,
    params: &SearchParams,
    tol: f64,
) -> Result<MorphismReport> {
    let points = sample_points(phi.target(), params, n_points)?;
    let mut worst = 0.0f64;
    for p in &points {
        let res = phi
            .pull_point(p.coords())
            .ok()
            .and_then(|q| phi.source().residuals(&q).ok())
            .map_or(f64::INFINITY, |r| max_abs(&r));
        worst = worst.max(res);
    }
    let verdict = if points.is_empty() {
        Verdict::Inconclusive
    } else if worst <= tol {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(MorphismReport {
        checked_points: points.len(),
        max_residual: worst,
        tolerance: tol,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum EqualityVerdict {
    Indistinguishable { checked_points: usize },
    Distinct { witness: Vec<f64>, difference: f64 },
    Inconclusive,
}

/// Compare two elements at the ℝ-points found with `params`.
pub fn element_equal(
    a: &RingElement,
    b: &RingElement,
    params: &SearchParams,
    tol: f64,
) -> Result<EqualityVerdict> {
    if !same_ring(a.owner(), b.owner()) {
        return Err(Error::OwnerMismatch);
    }
    let points = find_r_points(a.owner(), params)?;
    let mut checked = 0;
    for p in &points {
        let (Ok(x), Ok(y)) = (
            a.ambient().evaluate(p.coords()),
            b.ambient().evaluate(p.coords()),
        ) else {
            continue;
        };
        checked += 1;
        let difference = (x - y).abs();
        if difference > tol {
            return Ok(EqualityVerdict::Distinct {
                witness: p.coords.clone(),
                difference,
            });
        }
    }
    if checked == 0 {
        return Ok(EqualityVerdict::Inconclusive);
    }
    Ok(EqualityVerdict::Indistinguishable {
        checked_points: checked,
    })
}

/// Default acceptance check used by other modules.
pub fn admit(ring: &Ring, p: &[f64]) -> Result<Option<RPoint>> {
    Ok(is_r_point(ring, p, ACCEPT_TOL)?.point())
}
