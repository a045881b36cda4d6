//! Finitely presented modules `coker(A: Cʳ → Cᵍ)` over presented rings,
//! cotangent modules and their morphisms, and fibrewise exactness checks.

use std::fmt;

use nalgebra::DMatrix;

use crate::cring::{compose, same_ring, RPoint, Ring, RingElement, RingMorphism};
use crate::expr::{simplify, SmoothExpr};
use crate::linalg::{cokernel_basis, max_abs, numeric_rank, RANK_REL_TOL};
use crate::{Error, Result};

/// `coker(A)` with `A` a `g × r` matrix; column `j` is relation `j`.
#[derive(Clone, Debug)]
pub struct ModulePresentation {
    ring: Ring,
    gens: usize,
    matrix: Vec<Vec<SmoothExpr>>,
    rels: usize,
    labels: Vec<String>,
}

impl PartialEq for ModulePresentation {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring)
            && self.gens == other.gens
            && self.rels == other.rels
            && self.matrix == other.matrix
    }
}

impl ModulePresentation {
    /// `rows` is `g` rows of `r` entries each.
    pub fn new(
        ring: &Ring,
        rows: Vec<Vec<SmoothExpr>>,
        rels: usize,
        labels: Vec<String>,
    ) -> Result<Self> {
        if labels.len() != rows.len() {
            return Err(Error::Dimension(format!(
                "{} labels for {} generators",
                labels.len(),
                rows.len()
            )));
        }
        if let Some(row) = rows.iter().find(|r| r.len() != rels) {
            return Err(Error::Dimension(format!(
                "row of length {} in a module with {rels} relations",
                row.len()
            )));
        }
        for e in rows.iter().flatten() {
            e.check_arity(ring.arity())?;
        }
        let matrix = rows
            .iter()
            .map(|r| r.iter().map(simplify).collect())
            .collect();
        Ok(ModulePresentation {
            ring: ring.clone(),
            gens: labels.len(),
            matrix,
            rels,
            labels,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> usize {
        self.rels
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElement {
        RingElement::new(&self.ring, self.matrix[i][j].clone()).expect("entries are arity-checked")
    }

    pub fn rows(&self) -> &[Vec<SmoothExpr>] {
        &self.matrix
    }

    /// Relation columns as a `g × r` real matrix at `coords`.
    pub fn evaluate(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        eval_matrix(&self.matrix, self.gens, self.rels, coords)
    }

    pub fn direct_sum(&self, other: &ModulePresentation) -> Result<ModulePresentation> {
        if !same_ring(&self.ring, &other.ring) {
            return Err(Error::Mismatch("direct sum over different rings".into()));
        }
        let rels = self.rels + other.rels;
        let mut rows = Vec::with_capacity(self.gens + other.gens);
        for r in &self.matrix {
            let mut row = r.clone();
            row.extend(std::iter::repeat_n(SmoothExpr::zero(), other.rels));
            rows.push(row);
        }
        for r in &other.matrix {
            let mut row = vec![SmoothExpr::zero(); self.rels];
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        Ok(ModulePresentation {
            ring: self.ring.clone(),
            gens: self.gens + other.gens,
            matrix: rows,
            rels,
            labels,
        })
    }
}

impl fmt::Display for ModulePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coker over {} gens [{}]",
            self.ring,
            self.labels.join(", ")
        )?;
        for row in &self.matrix {
            f.write_str("\n  [")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("]")?;
        }
        Ok(())
    }
}

fn eval_matrix(
    m: &[Vec<SmoothExpr>],
    rows: usize,
    cols: usize,
    coords: &[f64],
) -> Result<DMatrix<f64>> {
    let mut out = DMatrix::zeros(rows, cols);
    for (i, row) in m.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            out[(i, j)] = e.evaluate(coords)?;
        }
    }
    Ok(out)
}

pub fn free_module(ring: &Ring, rank: usize) -> ModulePresentation {
    ModulePresentation {
        ring: ring.clone(),
        gens: rank,
        matrix: vec![Vec::new(); rank],
        rels: 0,
        labels: (0..rank).map(|i| format!("e{i}")).collect(),
    }
}

pub fn zero_module(ring: &Ring) -> ModulePresentation {
    free_module(ring, 0)
}

/// `Ω_C`: generators `dx_i`, one column `(∂f/∂x_j)_j` per relation `f`.
pub fn cotangent(ring: &Ring) -> ModulePresentation {
    let n = ring.arity();
    let rels = ring.relations().len();
    let grads: Vec<Vec<SmoothExpr>> = ring.relations().iter().map(|f| f.gradient(n)).collect();
    let matrix = (0..n)
        .map(|j| grads.iter().map(|g| g[j].clone()).collect())
        .collect();
    ModulePresentation {
        ring: ring.clone(),
        gens: n,
        matrix,
        rels,
        labels: (0..n).map(|i| format!("dx{i}")).collect(),
    }
}

/// `M ⊗_C D` along `φ: C → D`.
pub fn pushforward(m: &ModulePresentation, phi: &RingMorphism) -> Result<ModulePresentation> {
    if !same_ring(&m.ring, phi.source()) {
        return Err(Error::Mismatch(
            "pushforward needs M.ring = φ.source".into(),
        ));
    }
    let matrix = m
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.substitute(phi.images()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ModulePresentation {
        ring: phi.target().clone(),
        gens: m.gens,
        matrix,
        rels: m.rels,
        labels: m.labels.clone(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismStatus {
    Unverified,
    /// Largest `|Q_tᵀ·B·A_s|` seen at the checked points.
    NumericallyChecked {
        points: usize,
        max_residual: f64,
    },
}

/// A module map given by a `target.g × source.g` matrix.
#[derive(Clone, Debug)]
pub struct ModuleMorphism {
    source: ModulePresentation,
    target: ModulePresentation,
    matrix: Vec<Vec<SmoothExpr>>,
    status: MorphismStatus,
}

impl ModuleMorphism {
    pub fn new(
        source: &ModulePresentation,
        target: &ModulePresentation,
        rows: Vec<Vec<SmoothExpr>>,
    ) -> Result<Self> {
        if !same_ring(&source.ring, &target.ring) {
            return Err(Error::Mismatch(
                "module morphism between modules over different rings".into(),
            ));
        }
        if rows.len() != target.gens || rows.iter().any(|r| r.len() != source.gens) {
            return Err(Error::Dimension(format!(
                "morphism matrix must be {} x {}",
                target.gens, source.gens
            )));
        }
        for e in rows.iter().flatten() {
            e.check_arity(source.ring.arity())?;
        }
        Ok(ModuleMorphism {
            source: source.clone(),
            target: target.clone(),
            matrix: rows
                .iter()
                .map(|r| r.iter().map(simplify).collect())
                .collect(),
            status: MorphismStatus::Unverified,
        })
    }

    pub fn identity(m: &ModulePresentation) -> Self {
        let rows = (0..m.gens)
            .map(|i| {
                (0..m.gens)
                    .map(|j| {
                        if i == j {
                            SmoothExpr::one()
                        } else {
                            SmoothExpr::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ModuleMorphism {
            source: m.clone(),
            target: m.clone(),
            matrix: rows,
            status: MorphismStatus::Unverified,
        }
    }

    pub fn zero(source: &ModulePresentation, target: &ModulePresentation) -> Result<Self> {
        Self::new(
            source,
            target,
            vec![vec![SmoothExpr::zero(); source.gens]; target.gens],
        )
    }

    pub fn source(&self) -> &ModulePresentation {
        &self.source
    }

    pub fn target(&self) -> &ModulePresentation {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<SmoothExpr>] {
        &self.matrix
    }

    pub fn status(&self) -> &MorphismStatus {
        &self.status
    }

    pub fn evaluate(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        eval_matrix(&self.matrix, self.target.gens, self.source.gens, coords)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ModuleMorphism) -> Result<ModuleMorphism> {
        if first.target != self.source {
            return Err(Error::Mismatch(
                "module morphisms are not composable".into(),
            ));
        }
        let rows = (0..self.target.gens)
            .map(|i| {
                (0..first.source.gens)
                    .map(|j| {
                        (0..self.source.gens).fold(SmoothExpr::zero(), |acc, k| {
                            acc + self.matrix[i][k].clone() * first.matrix[k][j].clone()
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(&first.source, &self.target, rows)
    }

    /// `self ⊗_C D` along `φ`.
    pub fn pushforward(&self, phi: &RingMorphism) -> Result<ModuleMorphism> {
        let source = pushforward(&self.source, phi)?;
        let target = pushforward(&self.target, phi)?;
        let rows = self
            .matrix
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.substitute(phi.images()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(&source, &target, rows)
    }

    pub fn negate(&self) -> ModuleMorphism {
        let rows = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|e| -e.clone()).collect())
            .collect();
        ModuleMorphism {
            matrix: rows,
            status: MorphismStatus::Unverified,
            ..self.clone()
        }
    }

    /// `(self, other): M → N ⊕ N′` for maps with a common source.
    pub fn stack(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.source != other.source {
            return Err(Error::Mismatch(
                "stacked morphisms need a common source".into(),
            ));
        }
        let target = self.target.direct_sum(&other.target)?;
        let rows = self.matrix.iter().chain(&other.matrix).cloned().collect();
        Self::new(&self.source, &target, rows)
    }

    /// `self ⊕ other: M ⊕ M′ → N` for maps with a common target.
    pub fn juxtapose(&self, other: &ModuleMorphism) -> Result<ModuleMorphism> {
        if self.target != other.target {
            return Err(Error::Mismatch(
                "juxtaposed morphisms need a common target".into(),
            ));
        }
        let source = self.source.direct_sum(&other.source)?;
        let rows = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Self::new(&source, &self.target, rows)
    }

    /// Induced linear map between fibres at `p`, in orthonormal bases of
    /// the two cokernels.
    pub fn fiber_map(&self, p: &RPoint) -> Result<FiberMap> {
        if !same_ring(p.owner(), &self.source.ring) {
            return Err(Error::OwnerMismatch);
        }
        let coords = p.coords();
        let a_s = self.source.evaluate(coords)?;
        let a_t = self.target.evaluate(coords)?;
        let b = self.evaluate(coords)?;
        let q_s = cokernel_basis(&a_s, RANK_REL_TOL);
        let q_t = cokernel_basis(&a_t, RANK_REL_TOL);
        let qt_b = q_t.transpose() * &b;
        let residual = if a_s.ncols() == 0 {
            0.0
        } else {
            max_abs(&(&qt_b * &a_s))
        };
        Ok(FiberMap {
            matrix: qt_b * q_s,
            well_defined_residual: residual,
        })
    }

    /// Necessary condition for well-definedness: relation columns of the
    /// source land in the relation span of the target at each point.
    pub fn well_defined_check(mut self, points: &[RPoint]) -> Result<ModuleMorphism> {
        let mut worst = 0.0f64;
        for p in points {
            worst = worst.max(self.fiber_map(p)?.well_defined_residual);
        }
        self.status = MorphismStatus::NumericallyChecked {
            points: points.len(),
            max_residual: worst,
        };
        Ok(self)
    }
}

impl fmt::Display for ModuleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.matrix.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        write!(f, "]")
    }
}

#[derive(Clone, Debug)]
pub struct FiberMap {
    pub matrix: DMatrix<f64>,
    pub well_defined_residual: f64,
}

/// `M ⊗_C ℝ` at an ℝ-point.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub matrix: DMatrix<f64>,
    pub rank: usize,
}

pub fn fiber_at_point(m: &ModulePresentation, p: &RPoint) -> Result<Fiber> {
    if !same_ring(p.owner(), &m.ring) {
        return Err(Error::OwnerMismatch);
    }
    let matrix = m.evaluate(p.coords())?;
    let rank = m.gens - numeric_rank(&matrix, RANK_REL_TOL);
    Ok(Fiber { matrix, rank })
}

/// `(Ω_φ)_*: Ω_C ⊗_C D → Ω_D`, the Jacobian of the generator images.
pub fn cotangent_morphism(phi: &RingMorphism) -> Result<ModuleMorphism> {
    let source = pushforward(&cotangent(phi.source()), phi)?;
    let target = cotangent(phi.target());
    let m = phi.target().arity();
    let rows = (0..m)
        .map(|j| phi.images().iter().map(|im| im.differentiate(j)).collect())
        .collect();
    ModuleMorphism::new(&source, &target, rows)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointSequenceReport {
    pub coords: Vec<f64>,
    /// Fibre dimension of every module in the chain.
    pub dims: Vec<usize>,
    /// Rank of every fibre map.
    pub ranks: Vec<usize>,
    pub complex_residual: f64,
    pub is_complex: bool,
    /// Exact at every interior module of the chain.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SequenceReport {
    pub tolerance: f64,
    pub points: Vec<PointSequenceReport>,
}

impl SequenceReport {
    pub fn exact_count(&self) -> usize {
        self.points
            .iter()
            .filter(|p| p.is_complex && p.exact)
            .count()
    }

    pub fn all_exact(&self) -> bool {
        self.exact_count() == self.points.len()
    }

    pub fn all_complex(&self) -> bool {
        self.points.iter().all(|p| p.is_complex)
    }
}

/// Check a chain `M_0 → M_1 → … → M_k` fibrewise at each point: the
/// composite of consecutive fibre maps must vanish up to `tol`, and at each
/// interior module the kernel of the outgoing map must have the dimension
/// of the image of the incoming one.
pub fn sequence_check(
    chain: &[ModuleMorphism],
    points: &[RPoint],
    tol: f64,
) -> Result<SequenceReport> {
    let Some(first) = chain.first() else {
        return Err(Error::Dimension("empty chain".into()));
    };
    for w in chain.windows(2) {
        if w[0].target != w[1].source {
            return Err(Error::Dimension("chain is not composable".into()));
        }
    }
    if chain
        .iter()
        .any(|m| !same_ring(&m.source.ring, &first.source.ring))
    {
        return Err(Error::Mismatch("chain over different rings".into()));
    }
    let mut reports = Vec::with_capacity(points.len());
    for p in points {
        let maps = chain
            .iter()
            .map(|m| m.fiber_map(p))
            .collect::<Result<Vec<_>>>()?;
        let mut dims: Vec<usize> = maps.iter().map(|f| f.matrix.ncols()).collect();
        dims.push(maps.last().map_or(0, |f| f.matrix.nrows()));
        let ranks: Vec<usize> = maps
            .iter()
            .map(|f| numeric_rank(&f.matrix, RANK_REL_TOL))
            .collect();
        let mut complex_residual = 0.0f64;
        let mut exact = true;
        for i in 0..maps.len().saturating_sub(1) {
            let prod = &maps[i + 1].matrix * &maps[i].matrix;
            complex_residual = complex_residual.max(max_abs(&prod));
            if dims[i + 1] - ranks[i + 1] != ranks[i] {
                exact = false;
            }
        }
        reports.push(PointSequenceReport {
            coords: p.coords().to_vec(),
            dims,
            ranks,
            complex_residual,
            is_complex: complex_residual <= tol,
            exact,
        });
    }
    Ok(SequenceReport {
        tolerance: tol,
        points: reports,
    })
}

/// The cotangent sequence of a pushout `F = D ⊗∞_C E` with coprojections
/// `γ: D → F`, `δ: E → F`:
///
/// `0 → Ω_C⊗F → (Ω_D⊗F) ⊕ (Ω_E⊗F) → Ω_F → 0`
///
/// with first map `((Ω_φ)_*, −(Ω_ψ)_*)` and second `(Ω_γ)_* ⊕ (Ω_δ)_*`.
/// The outer zero maps are included so that [`sequence_check`] also tests
/// injectivity on the left and surjectivity on the right.
pub fn pushout_cotangent_sequence(
    phi: &RingMorphism,
    psi: &RingMorphism,
    gamma: &RingMorphism,
    delta: &RingMorphism,
) -> Result<Vec<ModuleMorphism>> {
    let f = gamma.target();
    if !same_ring(delta.target(), f)
        || !same_ring(phi.target(), gamma.source())
        || !same_ring(psi.target(), delta.source())
        || !same_ring(phi.source(), psi.source())
    {
        return Err(Error::Mismatch("inconsistent pushout data".into()));
    }
    let omega_phi = cotangent_morphism(phi)?.pushforward(gamma)?;
    let omega_psi = cotangent_morphism(psi)?.pushforward(delta)?;
    // Both now start at Ω_C ⊗ F, reached through D or through E. The two
    // presentations agree only modulo the mixed relations, so align the
    // second onto the first's source.
    let via_d = compose(gamma, phi)?;
    let omega_c_f = pushforward(&cotangent(phi.source()), &via_d)?;
    let omega_psi = ModuleMorphism::new(&omega_c_f, omega_psi.target(), omega_psi.matrix.clone())?;
    let omega_phi = ModuleMorphism::new(&omega_c_f, omega_phi.target(), omega_phi.matrix.clone())?;
    let alpha = omega_phi.stack(&omega_psi.negate())?;
    let beta = cotangent_morphism(gamma)?.juxtapose(&cotangent_morphism(delta)?)?;
    let zero = zero_module(f);
    let into = ModuleMorphism::zero(&zero, alpha.source())?;
    let out = ModuleMorphism::zero(beta.target(), &zero)?;
    Ok(vec![into, alpha, beta, out])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cring::{admit, pushout, RingPresentation};
    use crate::parse;

    fn circle() -> Ring {
        RingPresentation::new(2, vec![parse("x0^2 + x1^2 - 1").unwrap()]).unwrap()
    }

    #[test]
    fn free_modules() {
        let plane = RingPresentation::free(3);
        let p = admit(&plane, &[0.1, 0.2, 0.3]).unwrap().unwrap();
        assert_eq!(fiber_at_point(&free_module(&plane, 3), &p).unwrap().rank, 3);
        assert_eq!(fiber_at_point(&free_module(&plane, 0), &p).unwrap().rank, 0);
        let c = circle();
        let q = admit(&c, &[1.0, 0.0]).unwrap().unwrap();
        assert_eq!(fiber_at_point(&free_module(&c, 2), &q).unwrap().rank, 2);
    }

    #[test]
    fn cotangent_examples() {
        let r2 = RingPresentation::free(2);
        let om = cotangent(&r2);
        assert_eq!((om.generators(), om.relations()), (2, 0));
        let c = circle();
        let om = cotangent(&c);
        assert_eq!(
            om.rows(),
            &[vec![parse("2*x0").unwrap()], vec![parse("2*x1").unwrap()]]
        );
        let p = admit(&c, &[1.0, 0.0]).unwrap().unwrap();
        let fiber = fiber_at_point(&om, &p).unwrap();
        assert_eq!(fiber.rank, 1);
        assert_eq!(fiber.matrix, DMatrix::from_row_slice(2, 1, &[2.0, 0.0]));
        let point = cotangent(&RingPresentation::reals());
        assert_eq!(point.generators(), 0);
        let fat = RingPresentation::new(1, vec![parse("x0^2").unwrap()]).unwrap();
        let z = admit(&fat, &[0.0]).unwrap().unwrap();
        assert_eq!(fiber_at_point(&cotangent(&fat), &z).unwrap().rank, 1);
    }

    #[test]
    fn pushforward_examples() {
        let c = circle();
        let om = cotangent(&c);
        assert_eq!(pushforward(&om, &RingMorphism::identity(&c)).unwrap(), om);
        let r2 = RingPresentation::free(2);
        let incl =
            RingMorphism::new(&r2, &c, vec![SmoothExpr::Var(0), SmoothExpr::Var(1)]).unwrap();
        let pushed = pushforward(&cotangent(&r2), &incl).unwrap();
        assert_eq!((pushed.generators(), pushed.relations()), (2, 0));
        assert!(same_ring(pushed.ring(), &c));
    }

    #[test]
    fn cotangent_morphism_examples() {
        let r2 = RingPresentation::free(2);
        let id = cotangent_morphism(&RingMorphism::identity(&r2)).unwrap();
        assert_eq!(id.rows(), ModuleMorphism::identity(&cotangent(&r2)).rows());
        let line = RingPresentation::free(1);
        let sq = RingMorphism::new(&line, &line, vec![parse("x0^2").unwrap()]).unwrap();
        assert_eq!(
            cotangent_morphism(&sq).unwrap().rows(),
            &[vec![parse("2*x0").unwrap()]]
        );
        let c = circle();
        let incl =
            RingMorphism::new(&r2, &c, vec![SmoothExpr::Var(0), SmoothExpr::Var(1)]).unwrap();
        let m = cotangent_morphism(&incl).unwrap();
        assert_eq!(m.rows(), id.rows());
        let col = ModuleMorphism::new(
            &free_module(&c, 1),
            &free_module(&c, 2),
            cotangent(&c).rows().to_vec(),
        )
        .unwrap();
        let composed =
            ModuleMorphism::new(&free_module(&c, 2), &free_module(&c, 2), m.rows().to_vec())
                .unwrap()
                .after(&col)
                .unwrap();
        assert_eq!(composed.rows(), cotangent(&c).rows());
    }

    #[test]
    fn identity_sequence_is_exact() {
        let r = RingPresentation::free(1);
        let p = admit(&r, &[0.3]).unwrap().unwrap();
        let m = free_module(&r, 3);
        let z = zero_module(&r);
        let chain = vec![
            ModuleMorphism::zero(&z, &m).unwrap(),
            ModuleMorphism::identity(&m),
            ModuleMorphism::zero(&m, &z).unwrap(),
        ];
        let report = sequence_check(&chain, &[p], 1e-8).unwrap();
        assert!(report.all_exact());
        assert_eq!(report.points[0].dims, vec![0, 3, 3, 0]);
    }

    #[test]
    fn coproduct_sequence_is_exact() {
        let c = circle();
        let reals = RingPresentation::reals();
        let po = pushout(&RingMorphism::from_reals(&c), &RingMorphism::from_reals(&c)).unwrap();
        let chain = pushout_cotangent_sequence(
            &RingMorphism::from_reals(&c),
            &RingMorphism::from_reals(&c),
            &po.left,
            &po.right,
        )
        .unwrap();
        assert!(same_ring(chain[1].source().ring(), &po.ring));
        assert_eq!(chain[1].source().generators(), reals.arity());
        let p = admit(&po.ring, &[0.6, 0.8, 0.0, -1.0]).unwrap().unwrap();
        let report = sequence_check(&chain, &[p], 1e-8).unwrap();
        assert!(report.all_exact(), "{report:?}");
        assert_eq!(report.points[0].dims, vec![0, 0, 2, 2, 0]);
    }

    #[test]
    fn planar_circles() {
        let plane = RingPresentation::free(2);
        let a = circle();
        let b = RingPresentation::new(2, vec![parse("(x0 - 1)^2 + x1^2 - 1").unwrap()]).unwrap();
        let t = RingPresentation::new(2, vec![parse("(x0 - 2)^2 + x1^2 - 1").unwrap()]).unwrap();
        let inc = |r: &Ring| {
            RingMorphism::new(&plane, r, vec![SmoothExpr::Var(0), SmoothExpr::Var(1)]).unwrap()
        };

        let po = pushout(&inc(&a), &inc(&b)).unwrap();
        let chain = pushout_cotangent_sequence(&inc(&a), &inc(&b), &po.left, &po.right).unwrap();
        let h = 3f64.sqrt() / 2.0;
        let pts: Vec<RPoint> = [[0.5, h, 0.5, h], [0.5, -h, 0.5, -h]]
            .iter()
            .map(|p| admit(&po.ring, p).unwrap().unwrap())
            .collect();
        assert!(sequence_check(&chain, &pts, 1e-8).unwrap().all_exact());

        let po = pushout(&inc(&a), &inc(&t)).unwrap();
        let chain = pushout_cotangent_sequence(&inc(&a), &inc(&t), &po.left, &po.right).unwrap();
        let p = admit(&po.ring, &[1.0, 0.0, 1.0, 0.0]).unwrap().unwrap();
        let report = sequence_check(&chain, &[p], 1e-8).unwrap();
        assert!(report.all_complex());
        assert!(!report.all_exact());
    }
}
