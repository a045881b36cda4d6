//! Finitely presented C∞-rings `C∞(ℝⁿ)/(f_1, …, f_k)`.
//!
//! A [`RingPresentation`] stores its relations as canonical expressions.
//! Elements are represented by ambient expressions (a representative of a
//! coset) and morphisms by the images of the generators. Ideal membership is
//! not decidable for these rings, so anything that depends on it is checked
//! numerically at real points, see [`points`].

pub mod points;

use std::fmt;
use std::sync::Arc;

use crate::expr::{simplify, SmoothExpr};
use crate::{Error, Result};

pub use points::{
    admit, element_equal, eval_element, find_r_points, is_r_point, morphism_check, sample_points,
    EqualityVerdict, MorphismReport, PointTest, RPoint, SearchParams, Verdict,
};

/// Default absolute tolerance on relation residuals when admitting points.
pub const ACCEPT_TOL: f64 = 1e-9;
pub const NEWTON_TOL: f64 = 1e-12;
pub const CLUSTER_RADIUS: f64 = 1e-6;

/// How a presentation was produced. Diagnostic only; not part of equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    FreeEuclidean,
    Quotient,
    Pushout,
    Localization,
    CharacteristicFunction,
    Invariants,
}

#[derive(Clone, Debug)]
pub struct RingPresentation {
    arity: usize,
    names: Vec<String>,
    relations: Vec<SmoothExpr>,
    provenance: Provenance,
    /// Finitely generated ideals are fair; set by constructors, never verified.
    fair: bool,
}

pub type Ring = Arc<RingPresentation>;

impl PartialEq for RingPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.relations == other.relations
    }
}

impl RingPresentation {
    /// `C∞(ℝⁿ)/(relations)`, with relations stored in canonical form.
    pub fn new(arity: usize, relations: Vec<SmoothExpr>) -> Result<Ring> {
        let provenance = if relations.is_empty() {
            Provenance::FreeEuclidean
        } else {
            Provenance::Quotient
        };
        Self::build(arity, relations, provenance)
    }

    pub(crate) fn build(
        arity: usize,
        relations: Vec<SmoothExpr>,
        provenance: Provenance,
    ) -> Result<Ring> {
        for r in &relations {
            r.check_arity(arity)?;
        }
        Ok(Arc::new(RingPresentation {
            arity,
            names: (0..arity).map(|i| format!("x{i}")).collect(),
            relations: relations.iter().map(simplify).collect(),
            provenance,
            fair: true,
        }))
    }

    /// The free C∞-ring `C∞(ℝⁿ)`.
    pub fn free(arity: usize) -> Ring {
        Self::build(arity, Vec::new(), Provenance::FreeEuclidean).expect("no relations")
    }

    /// `ℝ = C∞(ℝ⁰)`, the initial C∞-ring.
    pub fn reals() -> Ring {
        Self::free(0)
    }

    pub fn with_names(&self, names: Vec<String>) -> Result<Ring> {
        if names.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: names.len(),
            });
        }
        Ok(Arc::new(RingPresentation {
            names,
            ..self.clone()
        }))
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn relations(&self) -> &[SmoothExpr] {
        &self.relations
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn is_fair(&self) -> bool {
        self.fair
    }

    /// A relation is a non-zero constant, so every element is zero.
    pub fn is_zero_ring(&self) -> bool {
        self.relations
            .iter()
            .any(|r| matches!(r.as_const(), Some(c) if !num_traits::Zero::is_zero(c)))
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> Result<RingElement> {
        RingElement::new(self, SmoothExpr::Var(i))
    }

    /// Relation residual vector at a point.
    pub fn residuals(
        &self,
        p: &[f64],
    ) -> std::result::Result<Vec<f64>, (usize, crate::DomainError)> {
        self.relations
            .iter()
            .enumerate()
            .map(|(i, r)| r.evaluate(p).map_err(|e| (i, e)))
            .collect()
    }
}

impl fmt::Display for RingPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cinf(R^{})", self.arity)?;
        if !self.relations.is_empty() {
            f.write_str("/<")?;
            for (i, r) in self.relations.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{r}")?;
            }
            f.write_str(">")?;
        }
        Ok(())
    }
}

pub fn same_ring(a: &Ring, b: &Ring) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A coset `f + I` represented by the ambient expression `f`.
#[derive(Clone, Debug)]
pub struct RingElement {
    owner: Ring,
    ambient: SmoothExpr,
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.owner, &other.owner) && self.ambient == other.ambient
    }
}

impl RingElement {
    pub fn new(owner: &Ring, ambient: SmoothExpr) -> Result<Self> {
        ambient.check_arity(owner.arity)?;
        Ok(RingElement {
            owner: owner.clone(),
            ambient: simplify(&ambient),
        })
    }

    pub fn owner(&self) -> &Ring {
        &self.owner
    }

    pub fn ambient(&self) -> &SmoothExpr {
        &self.ambient
    }

    pub fn add(&self, other: &RingElement) -> Result<RingElement> {
        phi_apply(&crate::parse("x0 + x1")?, &[self.clone(), other.clone()])
    }

    pub fn mul(&self, other: &RingElement) -> Result<RingElement> {
        phi_apply(&crate::parse("x0 * x1")?, &[self.clone(), other.clone()])
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ambient)
    }
}

/// The C∞-operation `Φ_f(c_1, …, c_k)` on elements of one ring.
pub fn phi_apply(f: &SmoothExpr, elems: &[RingElement]) -> Result<RingElement> {
    let Some(first) = elems.first() else {
        // Φ_f with k = 0 is the constant f, which lives in every ring; with
        // no element to name the owner there is nothing to return it in.
        return Err(Error::ArityMismatch {
            expected: f.min_arity(),
            found: 0,
        });
    };
    if elems.iter().any(|e| !same_ring(&e.owner, &first.owner)) {
        return Err(Error::OwnerMismatch);
    }
    let args: Vec<SmoothExpr> = elems.iter().map(|e| e.ambient.clone()).collect();
    let ambient = f.substitute(&args)?;
    Ok(RingElement {
        owner: first.owner.clone(),
        ambient,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum MorphismStatus {
    Unverified,
    NumericallyChecked(MorphismReport),
}

/// A C∞-ring morphism, given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct RingMorphism {
    source: Ring,
    target: Ring,
    images: Vec<SmoothExpr>,
    status: MorphismStatus,
}

impl RingMorphism {
    pub fn new(source: &Ring, target: &Ring, images: Vec<SmoothExpr>) -> Result<Self> {
        if images.len() != source.arity {
            return Err(Error::ArityMismatch {
                expected: source.arity,
                found: images.len(),
            });
        }
        for im in &images {
            im.check_arity(target.arity)?;
        }
        Ok(RingMorphism {
            source: source.clone(),
            target: target.clone(),
            images: images.iter().map(simplify).collect(),
            status: MorphismStatus::Unverified,
        })
    }

    pub fn identity(ring: &Ring) -> Self {
        let images = (0..ring.arity).map(SmoothExpr::Var).collect();
        RingMorphism {
            source: ring.clone(),
            target: ring.clone(),
            images,
            status: MorphismStatus::Unverified,
        }
    }

    /// The unique morphism `ℝ → C`.
    pub fn from_reals(target: &Ring) -> Self {
        RingMorphism {
            source: RingPresentation::reals(),
            target: target.clone(),
            images: Vec::new(),
            status: MorphismStatus::Unverified,
        }
    }

    pub fn source(&self) -> &Ring {
        &self.source
    }

    pub fn target(&self) -> &Ring {
        &self.target
    }

    pub fn images(&self) -> &[SmoothExpr] {
        &self.images
    }

    pub fn image(&self, i: usize) -> RingElement {
        RingElement {
            owner: self.target.clone(),
            ambient: self.images[i].clone(),
        }
    }

    pub fn status(&self) -> &MorphismStatus {
        &self.status
    }

    pub fn with_report(mut self, report: MorphismReport) -> Self {
        self.status = MorphismStatus::NumericallyChecked(report);
        self
    }

    /// Apply to an element of the source.
    pub fn apply(&self, c: &RingElement) -> Result<RingElement> {
        if !same_ring(&c.owner, &self.source) {
            return Err(Error::OwnerMismatch);
        }
        Ok(RingElement {
            owner: self.target.clone(),
            ambient: c.ambient.substitute(&self.images)?,
        })
    }

    /// The real point of the source induced by a real point of the target.
    pub fn pull_point(&self, p: &[f64]) -> std::result::Result<Vec<f64>, crate::DomainError> {
        self.images.iter().map(|im| im.evaluate(p)).collect()
    }

    /// `self ∘ first`: first `first`, then `self`.
    pub fn after(&self, first: &RingMorphism) -> Result<RingMorphism> {
        compose(self, first)
    }
}

impl PartialEq for RingMorphism {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.source, &other.source)
            && same_ring(&self.target, &other.target)
            && self.images == other.images
    }
}

impl fmt::Display for RingMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, im) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{i} -> {im}")?;
        }
        write!(f, "]")
    }
}

/// `ψ ∘ φ`, requiring `φ.target = ψ.source`.
pub fn compose(psi: &RingMorphism, phi: &RingMorphism) -> Result<RingMorphism> {
    if !same_ring(&phi.target, &psi.source) {
        return Err(Error::Mismatch(
            "composition needs φ.target = ψ.source".into(),
        ));
    }
    let images = phi
        .images
        .iter()
        .map(|im| im.substitute(&psi.images))
        .collect::<Result<Vec<_>>>()?;
    Ok(RingMorphism {
        source: phi.source.clone(),
        target: psi.target.clone(),
        images,
        status: MorphismStatus::Unverified,
    })
}

/// Result of a pushout `D ⊗∞_C E` with its two coprojections.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub ring: Ring,
    pub left: RingMorphism,
    pub right: RingMorphism,
}

/// Pushout of `φ: C → D` and `ψ: C → E`.
///
/// The result is `C∞(ℝ^{m+n})/(J(y), K(z), f_i(y) − g_i(z))` with D's
/// generators first, where `f_i`, `g_i` are the images of the generators of
/// C under φ and ψ.
pub fn pushout(phi: &RingMorphism, psi: &RingMorphism) -> Result<Pushout> {
    if !same_ring(&phi.source, &psi.source) {
        return Err(Error::Mismatch("pushout needs a common source".into()));
    }
    let d = &phi.target;
    let e = &psi.target;
    let m = d.arity;
    let n = e.arity;
    let mut relations: Vec<SmoothExpr> = d.relations.clone();
    relations.extend(e.relations.iter().map(|r| r.shift_vars(m)));
    for (f, g) in phi.images.iter().zip(&psi.images) {
        relations.push(f.clone() - g.shift_vars(m));
    }
    let ring = RingPresentation::build(m + n, relations, Provenance::Pushout)?;
    let left = RingMorphism::new(d, &ring, (0..m).map(SmoothExpr::Var).collect())?;
    let right = RingMorphism::new(e, &ring, (m..m + n).map(SmoothExpr::Var).collect())?;
    Ok(Pushout { ring, left, right })
}

/// Coproduct `D ⊗∞ E`, the pushout over `ℝ`.
pub fn coproduct(d: &Ring, e: &Ring) -> Result<Pushout> {
    pushout(&RingMorphism::from_reals(d), &RingMorphism::from_reals(e))
}

/// Localization `C[c⁻¹]`: one extra generator `x_n` and relation `x_n·c − 1`.
pub fn localize(ring: &Ring, c: &RingElement) -> Result<(Ring, RingMorphism)> {
    if !same_ring(&c.owner, ring) {
        return Err(Error::OwnerMismatch);
    }
    let n = ring.arity;
    let mut relations = ring.relations.clone();
    relations.push(SmoothExpr::Var(n) * c.ambient.clone() - SmoothExpr::one());
    let provenance = if ring.relations.is_empty() {
        Provenance::CharacteristicFunction
    } else {
        Provenance::Localization
    };
    let local = RingPresentation::build(n + 1, relations, provenance)?;
    let inclusion = RingMorphism::new(ring, &local, (0..n).map(SmoothExpr::Var).collect())?;
    Ok((local, inclusion))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    fn circle() -> Ring {
        RingPresentation::new(2, vec![parse("x0^2 + x1^2 - 1").unwrap()]).unwrap()
    }

    #[test]
    fn make_ring_examples() {
        let c = circle();
        assert_eq!(c.to_string(), "Cinf(R^2)/<(-1 + x0^2 + x1^2)>");
        let r = RingPresentation::new(0, vec![]).unwrap();
        assert_eq!(r.arity(), 0);
        assert_eq!(r.to_string(), "Cinf(R^0)");
        let zero = RingPresentation::new(1, vec![SmoothExpr::one()]).unwrap();
        assert!(zero.is_zero_ring());
        assert!(!c.is_zero_ring());
        assert_eq!(
            RingPresentation::new(1, vec![parse("x1").unwrap()]),
            Err(Error::VariableOutOfRange { index: 1, arity: 1 })
        );
    }

    #[test]
    fn phi_apply_examples() {
        let c = circle();
        let a = c.generator(0).unwrap();
        let b = c.generator(1).unwrap();
        assert_eq!(
            phi_apply(&parse("x0 + x1").unwrap(), &[a.clone(), b.clone()])
                .unwrap()
                .ambient(),
            &parse("x0 + x1").unwrap()
        );
        assert_eq!(
            phi_apply(&SmoothExpr::Var(0), &[b.clone(), a.clone()]).unwrap(),
            b
        );
        let line = RingPresentation::free(1);
        let x = line.generator(0).unwrap();
        assert_eq!(
            phi_apply(&parse("exp(x0)").unwrap(), std::slice::from_ref(&x))
                .unwrap()
                .ambient(),
            &parse("exp(x0)").unwrap()
        );
        assert_eq!(
            phi_apply(&parse("x0 + x1").unwrap(), &[a.clone(), x]),
            Err(Error::OwnerMismatch)
        );
        assert!(matches!(
            phi_apply(&parse("x0 + x1").unwrap(), &[a]),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn composition_and_identity() {
        let c = circle();
        let free1 = RingPresentation::free(1);
        let phi = RingMorphism::new(&free1, &c, vec![parse("x0^2 + x1").unwrap()]).unwrap();
        assert_eq!(compose(&RingMorphism::identity(&c), &phi).unwrap(), phi);
        assert_eq!(compose(&phi, &RingMorphism::identity(&free1)).unwrap(), phi);
        let from_r = RingMorphism::from_reals(&free1);
        let composed = compose(&phi, &from_r).unwrap();
        assert_eq!(composed, RingMorphism::from_reals(&c));
        assert!(compose(&phi, &phi).is_err());
        // pointwise agreement
        let sq = RingMorphism::new(&free1, &free1, vec![parse("sin(x0)").unwrap()]).unwrap();
        let both = compose(&phi, &sq).unwrap();
        let p = [0.6, 0.8];
        let direct = sq.pull_point(&phi.pull_point(&p).unwrap()).unwrap();
        assert_eq!(both.pull_point(&p).unwrap(), direct);
    }

    #[test]
    fn coproduct_of_lines_is_plane() {
        let l = RingPresentation::free(1);
        let po = coproduct(&l, &l).unwrap();
        assert_eq!(*po.ring, *RingPresentation::free(2));
        assert_eq!(po.right.images(), &[SmoothExpr::Var(1)]);
    }

    #[test]
    fn coproduct_concatenates_relations() {
        let c = circle();
        let k = RingPresentation::new(1, vec![parse("x0^3 - x0").unwrap()]).unwrap();
        let po = coproduct(&c, &k).unwrap();
        let direct = RingPresentation::new(
            3,
            vec![
                parse("x0^2 + x1^2 - 1").unwrap(),
                parse("x2^3 - x2").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(po.ring.to_string(), direct.to_string());
        assert_eq!(po.ring.provenance(), Provenance::Pushout);
    }

    #[test]
    fn pushout_adds_mixed_relations() {
        let plane = RingPresentation::free(2);
        let c = circle();
        let incl =
            RingMorphism::new(&plane, &c, vec![SmoothExpr::Var(0), SmoothExpr::Var(1)]).unwrap();
        let po = pushout(&incl, &incl).unwrap();
        assert_eq!(po.ring.arity(), 4);
        assert_eq!(po.ring.relations().len(), 4);
        assert_eq!(po.ring.relations()[2], parse("x0 - x2").unwrap());
        assert!(pushout(&incl, &RingMorphism::identity(&c)).is_err());
    }

    #[test]
    fn localization_examples() {
        let line = RingPresentation::free(1);
        let (local, incl) = localize(&line, &line.generator(0).unwrap()).unwrap();
        assert_eq!(local.to_string(), "Cinf(R^2)/<(-1 + (x0*x1))>");
        assert_eq!(local.provenance(), Provenance::CharacteristicFunction);
        assert_eq!(incl.images(), &[SmoothExpr::Var(0)]);
        let (unit, _) =
            localize(&line, &RingElement::new(&line, SmoothExpr::one()).unwrap()).unwrap();
        assert_eq!(unit.relations(), &[parse("x1 - 1").unwrap()]);
    }
}
