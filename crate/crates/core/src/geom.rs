//! Embedded manifolds as presentations, smooth maps between them,
//! transversality and fibre products.

use std::fmt;

use nalgebra::DMatrix;

use crate::cmodule::{pushout_cotangent_sequence, ModuleMorphism};
use crate::cring::{pushout, same_ring, RPoint, Ring, RingMorphism, RingPresentation};
use crate::expr::SmoothExpr;
use crate::linalg::{kernel_basis, numeric_rank, RANK_REL_TOL};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct ManifoldPresentation {
    pub name: String,
    pub ring: Ring,
    /// Expected dimension; metadata checked by [`regular_value_check`].
    pub dim: usize,
}

impl ManifoldPresentation {
    pub fn new(name: impl Into<String>, ring: Ring, dim: usize) -> Self {
        ManifoldPresentation {
            name: name.into(),
            ring,
            dim,
        }
    }

    pub fn arity(&self) -> usize {
        self.ring.arity()
    }

    pub fn euclidean(n: usize) -> Self {
        Self::new(format!("euclidean({n})"), RingPresentation::free(n), n)
    }

    /// The unit sphere `Sⁿ ⊂ ℝⁿ⁺¹`.
    pub fn sphere(n: usize) -> Self {
        let sum = (0..=n).fold(SmoothExpr::zero(), |acc, i| {
            acc + SmoothExpr::Var(i).powi(2)
        });
        let ring = RingPresentation::new(n + 1, vec![sum - SmoothExpr::one()]).expect("in range");
        Self::new(format!("sphere({n})"), ring, n)
    }

    pub fn circle() -> Self {
        ManifoldPresentation {
            name: "circle".into(),
            ..Self::sphere(1)
        }
    }

    /// `S¹ × S¹ ⊂ ℝ⁴`.
    pub fn torus2() -> Self {
        let c = |a: usize, b: usize| {
            SmoothExpr::Var(a).powi(2) + SmoothExpr::Var(b).powi(2) - SmoothExpr::one()
        };
        let ring = RingPresentation::new(4, vec![c(0, 1), c(2, 3)]).expect("in range");
        Self::new("torus2", ring, 2)
    }

    /// `{f ≠ 0} ⊂ ℝⁿ` as `C∞(ℝⁿ⁺¹)/(x_n·f − 1)`.
    pub fn open_subset(n: usize, f: &SmoothExpr) -> Result<Self> {
        f.check_arity(n)?;
        let free = RingPresentation::free(n);
        let (ring, _) =
            crate::cring::localize(&free, &crate::cring::RingElement::new(&free, f.clone())?)?;
        Ok(Self::new(format!("open_subset({n}, {f})"), ring, n))
    }

    /// Look up a catalogue entry by name.
    pub fn stdlib(name: &str, params: &[usize], expr: Option<&SmoothExpr>) -> Result<Self> {
        match (name, params, expr) {
            ("euclidean", [n], None) => Ok(Self::euclidean(*n)),
            ("sphere", [n], None) => Ok(Self::sphere(*n)),
            ("circle", [], None) => Ok(Self::circle()),
            ("torus2", [], None) => Ok(Self::torus2()),
            ("open_subset", [n], Some(f)) => Self::open_subset(*n, f),
            _ => Err(Error::Mismatch(format!(
                "unknown manifold `{name}` with {} parameters",
                params.len()
            ))),
        }
    }

    /// Jacobian of the relation vector at `coords`.
    pub fn jacobian(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        jacobian(self.ring.relations(), self.arity(), coords)
    }

    /// Orthonormal basis (columns) of the tangent space at a point.
    pub fn tangent_basis(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.arity();
        let j = self.jacobian(coords)?;
        if j.nrows() == 0 {
            return Ok(DMatrix::identity(n, n));
        }
        Ok(kernel_basis(&j, RANK_REL_TOL))
    }
}

impl fmt::Display for ManifoldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {}) = {}", self.name, self.dim, self.ring)
    }
}

fn jacobian(exprs: &[SmoothExpr], n: usize, coords: &[f64]) -> Result<DMatrix<f64>> {
    let mut j = DMatrix::zeros(exprs.len(), n);
    for (i, e) in exprs.iter().enumerate() {
        for k in 0..n {
            j[(i, k)] = e.differentiate(k).evaluate(coords)?;
        }
    }
    Ok(j)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegularValueReport {
    pub checked_points: usize,
    /// Points where the Jacobian rank differs from `arity − dim`.
    pub failures: Vec<Vec<f64>>,
}

impl RegularValueReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// At each point the relation Jacobian must have rank `arity − dim`.
pub fn regular_value_check(
    m: &ManifoldPresentation,
    points: &[RPoint],
) -> Result<RegularValueReport> {
    let expected = m
        .arity()
        .checked_sub(m.dim)
        .ok_or_else(|| Error::Dimension("dim exceeds arity".into()))?;
    let mut failures = Vec::new();
    for p in points {
        if !same_ring(p.owner(), &m.ring) {
            return Err(Error::OwnerMismatch);
        }
        if numeric_rank(&m.jacobian(p.coords())?, RANK_REL_TOL) != expected {
            failures.push(p.coords().to_vec());
        }
    }
    Ok(RegularValueReport {
        checked_points: points.len(),
        failures,
    })
}

#[derive(Clone, Debug)]
pub struct SmoothMap {
    pub source: ManifoldPresentation,
    pub target: ManifoldPresentation,
    /// One component per target coordinate, over the source coordinates.
    pub components: Vec<SmoothExpr>,
}

impl SmoothMap {
    pub fn new(
        source: &ManifoldPresentation,
        target: &ManifoldPresentation,
        components: Vec<SmoothExpr>,
    ) -> Result<Self> {
        if components.len() != target.arity() {
            return Err(Error::ArityMismatch {
                expected: target.arity(),
                found: components.len(),
            });
        }
        for c in &components {
            c.check_arity(source.arity())?;
        }
        Ok(SmoothMap {
            source: source.clone(),
            target: target.clone(),
            components: components.iter().map(crate::expr::simplify).collect(),
        })
    }

    pub fn identity(m: &ManifoldPresentation) -> Self {
        SmoothMap {
            source: m.clone(),
            target: m.clone(),
            components: (0..m.arity()).map(SmoothExpr::Var).collect(),
        }
    }

    pub fn apply(&self, coords: &[f64]) -> Result<Vec<f64>> {
        Ok(self
            .components
            .iter()
            .map(|c| c.evaluate(coords))
            .collect::<std::result::Result<_, _>>()?)
    }

    pub fn jacobian(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        jacobian(&self.components, self.source.arity(), coords)
    }

    /// Largest target-relation residual at the images of `points`.
    pub fn image_residual(&self, points: &[RPoint]) -> Result<f64> {
        let mut worst = 0.0f64;
        for p in points {
            let q = self.apply(p.coords())?;
            for r in self.target.ring.relations() {
                worst = worst.max(r.evaluate(&q)?.abs());
            }
        }
        Ok(worst)
    }
}

/// `h*: C∞(target) → C∞(source)`, `c ↦ c∘h`.
pub fn ring_morphism_of_map(h: &SmoothMap) -> Result<RingMorphism> {
    RingMorphism::new(&h.target.ring, &h.source.ring, h.components.clone())
}

#[derive(Clone, Debug, PartialEq)]
pub struct TransverseReport {
    pub is_common: bool,
    pub spans: bool,
    pub image_gap: f64,
    pub target_tangent_dim: usize,
    pub span_rank: usize,
}

/// Do `dg(T_xX)` and `dh(T_yY)` span `T_zZ`, with `z = g(x) = h(y)`?
pub fn transverse_check(
    g: &SmoothMap,
    h: &SmoothMap,
    x: &RPoint,
    y: &RPoint,
    tol: f64,
) -> Result<TransverseReport> {
    if !same_ring(&g.target.ring, &h.target.ring) {
        return Err(Error::Mismatch("maps have different targets".into()));
    }
    let gz = g.apply(x.coords())?;
    let hz = h.apply(y.coords())?;
    let image_gap = gz
        .iter()
        .zip(&hz)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let tz = g.target.tangent_basis(&gz)?.ncols();
    let a = g.jacobian(x.coords())? * g.source.tangent_basis(x.coords())?;
    let b = h.jacobian(y.coords())? * h.source.tangent_basis(y.coords())?;
    let mut joined = DMatrix::zeros(a.nrows(), a.ncols() + b.ncols());
    joined
        .view_mut((0, 0), (a.nrows(), a.ncols()))
        .copy_from(&a);
    joined
        .view_mut((0, a.ncols()), (b.nrows(), b.ncols()))
        .copy_from(&b);
    let span_rank = numeric_rank(&joined, RANK_REL_TOL);
    Ok(TransverseReport {
        is_common: image_gap <= tol,
        spans: span_rank == tz,
        image_gap,
        target_tangent_dim: tz,
        span_rank,
    })
}

/// `W = X ×_Z Y` with its projections and the pushout data behind it.
#[derive(Clone, Debug)]
pub struct FibreProduct {
    pub manifold: ManifoldPresentation,
    pub proj_x: SmoothMap,
    pub proj_y: SmoothMap,
    /// `g*: C∞(Z) → C∞(X)` and `h*: C∞(Z) → C∞(Y)`.
    pub g_star: RingMorphism,
    pub h_star: RingMorphism,
    /// Coprojections `C∞(X) → C∞(W)` and `C∞(Y) → C∞(W)`.
    pub left: RingMorphism,
    pub right: RingMorphism,
}

impl FibreProduct {
    /// The cotangent sequence `0 → Ω_Z → Ω_X ⊕ Ω_Y → Ω_W → 0` over `C∞(W)`.
    pub fn cotangent_sequence(&self) -> Result<Vec<ModuleMorphism>> {
        pushout_cotangent_sequence(&self.g_star, &self.h_star, &self.left, &self.right)
    }
}

/// Fibre product realized as the pushout of `g*` and `h*`. Transversality
/// is not checked here.
pub fn fibre_product(g: &SmoothMap, h: &SmoothMap) -> Result<FibreProduct> {
    let g_star = ring_morphism_of_map(g)?;
    let h_star = ring_morphism_of_map(h)?;
    let po = pushout(&g_star, &h_star)?;
    let dim = (g.source.dim + h.source.dim).saturating_sub(g.target.dim);
    let name = format!("{} x_{} {}", g.source.name, g.target.name, h.source.name);
    let manifold = ManifoldPresentation::new(name, po.ring.clone(), dim);
    let m = g.source.arity();
    let n = h.source.arity();
    let proj_x = SmoothMap::new(&manifold, &g.source, (0..m).map(SmoothExpr::Var).collect())?;
    let proj_y = SmoothMap::new(
        &manifold,
        &h.source,
        (m..m + n).map(SmoothExpr::Var).collect(),
    )?;
    Ok(FibreProduct {
        manifold,
        proj_x,
        proj_y,
        g_star,
        h_star,
        left: po.left,
        right: po.right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{admit, find_r_points, morphism_check, SearchParams, Verdict};
    use crate::parse;

    fn line_x1_zero() -> ManifoldPresentation {
        let ring = RingPresentation::new(2, vec![parse("x1").unwrap()]).unwrap();
        ManifoldPresentation::new("axis", ring, 1)
    }

    fn inclusion(m: &ManifoldPresentation) -> SmoothMap {
        SmoothMap::new(
            m,
            &ManifoldPresentation::euclidean(2),
            vec![SmoothExpr::Var(0), SmoothExpr::Var(1)],
        )
        .unwrap()
    }

    #[test]
    fn catalogue() {
        let c = ManifoldPresentation::circle();
        let pts = find_r_points(&c.ring, &SearchParams::cube(2, -2.0, 2.0, 0.25)).unwrap();
        assert!(!pts.is_empty());
        for p in &pts {
            let r = p.coords()[0].hypot(p.coords()[1]);
            assert!((r - 1.0).abs() <= 1e-9);
        }
        let u = ManifoldPresentation::open_subset(1, &parse("x0").unwrap()).unwrap();
        assert_eq!(u.ring.to_string(), "Cinf(R^2)/<(-1 + (x0*x1))>");
        assert_eq!(ManifoldPresentation::euclidean(0).arity(), 0);
        assert!(ManifoldPresentation::stdlib("klein", &[], None).is_err());
        for m in [
            ManifoldPresentation::sphere(2),
            ManifoldPresentation::torus2(),
            u,
        ] {
            let pts = crate::cring::sample_points(
                &m.ring,
                &SearchParams::cube(m.arity(), -1.5, 1.5, 0.5),
                20,
            )
            .unwrap();
            assert!(!pts.is_empty());
            assert!(
                regular_value_check(&m, &pts).unwrap().passed(),
                "{}",
                m.name
            );
        }
    }

    #[test]
    fn contravariant_morphisms() {
        let c = ManifoldPresentation::circle();
        assert_eq!(
            ring_morphism_of_map(&SmoothMap::identity(&c)).unwrap(),
            RingMorphism::identity(&c.ring)
        );
        let incl = ring_morphism_of_map(&inclusion(&c)).unwrap();
        assert!(same_ring(incl.source(), &RingPresentation::free(2)));
        assert!(same_ring(incl.target(), &c.ring));
        let antipode =
            SmoothMap::new(&c, &c, vec![parse("-x0").unwrap(), parse("-x1").unwrap()]).unwrap();
        let report = morphism_check(
            &ring_morphism_of_map(&antipode).unwrap(),
            20,
            &SearchParams::cube(2, -2.0, 2.0, 0.2),
            1e-9,
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
    }

    #[test]
    fn transversality_examples() {
        let axis0 = ManifoldPresentation::new(
            "a0",
            RingPresentation::new(2, vec![parse("x1").unwrap()]).unwrap(),
            1,
        );
        let axis1 = ManifoldPresentation::new(
            "a1",
            RingPresentation::new(2, vec![parse("x0").unwrap()]).unwrap(),
            1,
        );
        let o0 = admit(&axis0.ring, &[0.0, 0.0]).unwrap().unwrap();
        let o1 = admit(&axis1.ring, &[0.0, 0.0]).unwrap().unwrap();
        let r = transverse_check(&inclusion(&axis0), &inclusion(&axis1), &o0, &o1, 1e-9).unwrap();
        assert!(r.is_common && r.spans);

        let c = ManifoldPresentation::circle();
        let line = line_x1_zero();
        let p = admit(&c.ring, &[1.0, 0.0]).unwrap().unwrap();
        let q = admit(&line.ring, &[1.0, 0.0]).unwrap().unwrap();
        assert!(
            transverse_check(&inclusion(&c), &inclusion(&line), &p, &q, 1e-9)
                .unwrap()
                .spans
        );

        let shifted = ManifoldPresentation::new(
            "c2",
            RingPresentation::new(2, vec![parse("(x0 - 2)^2 + x1^2 - 1").unwrap()]).unwrap(),
            1,
        );
        let q = admit(&shifted.ring, &[1.0, 0.0]).unwrap().unwrap();
        let r = transverse_check(&inclusion(&c), &inclusion(&shifted), &p, &q, 1e-9).unwrap();
        assert!(r.is_common && !r.spans);
    }

    #[test]
    fn fibre_product_examples() {
        let c = ManifoldPresentation::circle();
        let fp = fibre_product(&inclusion(&c), &inclusion(&line_x1_zero())).unwrap();
        assert_eq!(fp.manifold.dim, 0);
        let pts = find_r_points(&fp.manifold.ring, &SearchParams::cube(4, -2.0, 2.0, 0.5)).unwrap();
        let coords: Vec<Vec<f64>> = pts
            .iter()
            .map(|p| p.coords().iter().map(|v| v.round()).collect())
            .collect();
        assert_eq!(
            coords,
            vec![vec![-1.0, 0.0, -1.0, 0.0], vec![1.0, 0.0, 1.0, 0.0]]
        );

        let e = ManifoldPresentation::euclidean(2);
        let id = SmoothMap::identity(&e);
        let diag = fibre_product(&id, &id).unwrap();
        let pts =
            find_r_points(&diag.manifold.ring, &SearchParams::cube(4, -1.0, 1.0, 0.5)).unwrap();
        assert!(pts.len() >= 25);
        assert!(pts
            .iter()
            .all(|p| (p.coords()[0] - p.coords()[2]).abs() <= 1e-9
                && (p.coords()[1] - p.coords()[3]).abs() <= 1e-9));

        let pt = ManifoldPresentation::euclidean(0);
        let r1 = ManifoldPresentation::euclidean(1);
        let zero = SmoothMap::new(&pt, &r1, vec![SmoothExpr::zero()]).unwrap();
        let single = fibre_product(&zero, &zero).unwrap();
        assert_eq!(
            find_r_points(&single.manifold.ring, &SearchParams::cube(0, 0.0, 0.0, 1.0))
                .unwrap()
                .len(),
            1
        );
    }
}
