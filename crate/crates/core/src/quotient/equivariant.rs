//! Equivariant modules on `[U/G]`: a module `E` over `U` with lifts of the
//! action satisfying the cocycle condition.

use nalgebra::DMatrix;

use super::QuotientStackDesc;
use crate::cmodule::{
    cotangent, cotangent_morphism, pushforward, ModuleMorphism, ModulePresentation,
};
use crate::cring::{same_ring, RPoint};
use crate::expr::SmoothExpr;
use crate::linalg::{cokernel_basis, max_abs, RANK_REL_TOL};
use crate::{Error, Result};

/// `Φ_γ` runs from the pushforward of `E` along `x ↦ M_γ⁻¹·x` to `E`; at
/// a point `q` it sends the fibre over `q` to the fibre over `γq`, and its
/// matrix is evaluated at `γq`.
#[derive(Clone, Debug)]
pub struct EquivariantModule {
    desc: QuotientStackDesc,
    base: ModulePresentation,
    lifts: Vec<ModuleMorphism>,
}

impl EquivariantModule {
    /// One lift matrix (`g × g`) per group element.
    pub fn new(
        desc: &QuotientStackDesc,
        base: &ModulePresentation,
        lifts: Vec<Vec<Vec<SmoothExpr>>>,
    ) -> Result<Self> {
        if !same_ring(base.ring(), desc.ring()) {
            return Err(Error::Mismatch(
                "module is not over the presentation of the stack".into(),
            ));
        }
        let order = desc.group().order();
        if lifts.len() != order {
            return Err(Error::Dimension(format!(
                "{} lifts for a group of order {order}",
                lifts.len()
            )));
        }
        let lifts = lifts
            .into_iter()
            .enumerate()
            .map(|(g, rows)| {
                let twisted = pushforward(base, &desc.action_morphism(desc.group().inv(g)))?;
                ModuleMorphism::new(&twisted, base, rows)
            })
            .collect::<Result<_>>()?;
        Ok(EquivariantModule {
            desc: desc.clone(),
            base: base.clone(),
            lifts,
        })
    }

    pub fn desc(&self) -> &QuotientStackDesc {
        &self.desc
    }

    pub fn base(&self) -> &ModulePresentation {
        &self.base
    }

    pub fn lift(&self, g: usize) -> &ModuleMorphism {
        &self.lifts[g]
    }

    fn projector(&self, coords: &[f64]) -> Result<DMatrix<f64>> {
        let q = cokernel_basis(&self.base.evaluate(coords)?, RANK_REL_TOL);
        Ok(&q * q.transpose())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CocycleReport {
    pub checked_points: usize,
    /// `(γ, δ)` pairs checked per point.
    pub pairs: usize,
    pub max_residual: f64,
    /// `(γ, δ, point)` with the largest residual.
    pub worst: Option<(usize, usize, Vec<f64>)>,
    pub tolerance: f64,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.max_residual <= self.tolerance
    }
}

/// Checks `Φ_{γδ} = Φ_γ·Φ_δ` on fibres at every point and pair. The
/// residual compares the maps through the projectors onto the fibres,
/// so it does not depend on a choice of fibre bases.
pub fn equivariant_module_check(
    e: &EquivariantModule,
    points: &[RPoint],
    tol: f64,
) -> Result<CocycleReport> {
    let group = e.desc.group();
    let action = e.desc.action();
    let mut worst = None;
    let mut max_residual = 0.0f64;
    for p in points {
        if !same_ring(p.owner(), e.desc.ring()) {
            return Err(Error::OwnerMismatch);
        }
        let q = p.coords();
        let pi_q = e.projector(q)?;
        for gamma in 0..group.order() {
            for delta in 0..group.order() {
                let dq = action.apply_point(delta, q);
                let gdq = action.apply_point(gamma, &dq);
                let whole = e.lifts[group.mul(gamma, delta)].evaluate(&gdq)?;
                let parts = e.lifts[gamma].evaluate(&gdq)? * e.lifts[delta].evaluate(&dq)?;
                let residual = max_abs(&(e.projector(&gdq)? * (whole - parts) * &pi_q));
                if worst.is_none() || residual > max_residual {
                    max_residual = residual;
                    worst = Some((gamma, delta, q.to_vec()));
                }
            }
        }
    }
    Ok(CocycleReport {
        checked_points: points.len(),
        pairs: group.order() * group.order(),
        max_residual,
        worst,
        tolerance: tol,
    })
}

/// The cotangent module with lifts `Ω` of the action maps.
pub fn equivariant_cotangent(desc: &QuotientStackDesc) -> Result<EquivariantModule> {
    desc.require_stable()?;
    let base = cotangent(desc.ring());
    let lifts = (0..desc.group().order())
        .map(|g| cotangent_morphism(&desc.action_morphism(desc.group().inv(g))))
        .collect::<Result<_>>()?;
    Ok(EquivariantModule {
        desc: desc.clone(),
        base,
        lifts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmodule::free_module;
    use crate::cring::{sample_points, RingPresentation, SearchParams};
    use crate::geom::ManifoldPresentation;
    use crate::parse;
    use crate::quotient::{FiniteGroup, LinearAction};

    fn point_mod_2() -> QuotientStackDesc {
        QuotientStackDesc::new(
            &RingPresentation::reals(),
            LinearAction::trivial(FiniteGroup::cyclic(2), 0),
            &SearchParams::cube(0, 0.0, 0.0, 1.0),
            1e-9,
        )
        .unwrap()
    }

    fn origin(d: &QuotientStackDesc) -> Vec<RPoint> {
        crate::cring::find_r_points(d.ring(), &SearchParams::cube(0, 0.0, 0.0, 1.0)).unwrap()
    }

    #[test]
    fn representations_of_z2() {
        let d = point_mod_2();
        let line = free_module(d.ring(), 1);
        let c = |s: &str| vec![vec![parse(s).unwrap()]];
        let sign = EquivariantModule::new(&d, &line, vec![c("1"), c("-1")]).unwrap();
        assert!(equivariant_module_check(&sign, &origin(&d), 1e-12)
            .unwrap()
            .passed());
        let bad = EquivariantModule::new(&d, &line, vec![c("1"), c("2")]).unwrap();
        let report = equivariant_module_check(&bad, &origin(&d), 1e-12).unwrap();
        assert!(!report.passed());
        assert_eq!(report.max_residual, 3.0);
    }

    #[test]
    fn cotangent_lifts() {
        let d = QuotientStackDesc::new(
            &RingPresentation::free(1),
            LinearAction::negation(1),
            &SearchParams::cube(1, -1.0, 1.0, 0.5),
            1e-9,
        )
        .unwrap();
        let e = equivariant_cotangent(&d).unwrap();
        assert_eq!(e.lift(1).rows(), &[vec![parse("-1").unwrap()]]);
        assert_eq!(e.lift(0).rows(), &[vec![parse("1").unwrap()]]);

        let circle = ManifoldPresentation::circle().ring;
        let params = SearchParams::cube(2, -2.0, 2.0, 0.25);
        let d = QuotientStackDesc::new(&circle, LinearAction::rotation(4).unwrap(), &params, 1e-9)
            .unwrap();
        let e = equivariant_cotangent(&d).unwrap();
        let pts = sample_points(&circle, &params, 10).unwrap();
        assert!(equivariant_module_check(&e, &pts, 1e-10).unwrap().passed());
        assert_eq!(
            e.lift(1).rows(),
            &[
                vec![parse("0").unwrap(), parse("-1").unwrap()],
                vec![parse("1").unwrap(), parse("0").unwrap()]
            ]
        );
    }
}
