//! Stabilizers, orbits, the action groupoid and stack fibre products.

use super::{FiniteGroup, QuotientStackDesc};
use crate::cring::{find_r_points, same_ring, RPoint, SearchParams, CLUSTER_RADIUS};
use crate::expr::SmoothExpr;
use crate::geom::{fibre_product, FibreProduct, SmoothMap};
use crate::{Error, Result};

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn check_owner(desc: &QuotientStackDesc, p: &RPoint) -> Result<()> {
    if same_ring(p.owner(), desc.ring()) {
        Ok(())
    } else {
        Err(Error::OwnerMismatch)
    }
}

/// `H_u = {γ : γu = u}` up to the cluster radius.
pub fn stabilizer(desc: &QuotientStackDesc, p: &RPoint) -> Result<Vec<usize>> {
    check_owner(desc, p)?;
    let action = desc.action();
    let elems: Vec<usize> = (0..desc.group().order())
        .filter(|&g| distance(&action.apply_point(g, p.coords()), p.coords()) <= CLUSTER_RADIUS)
        .collect();
    if !desc.group().is_subgroup(&elems) {
        return Err(Error::CheckFailed(format!(
            "stabilizer {elems:?} is not a subgroup"
        )));
    }
    Ok(elems)
}

#[derive(Clone, Debug)]
pub struct Orbit {
    /// Lexicographically smallest member.
    pub representative: Vec<f64>,
    /// Members in lexicographic order.
    pub members: Vec<RPoint>,
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(a.len().cmp(&b.len()))
}

fn find(parent: &mut [usize], i: usize) -> usize {
    let mut r = i;
    while parent[r] != r {
        r = parent[r];
    }
    let mut i = i;
    while parent[i] != r {
        let next = parent[i];
        parent[i] = r;
        i = next;
    }
    r
}

/// Partition `points` into G-orbits, sorted by representative.
pub fn orbit_space(desc: &QuotientStackDesc, points: &[RPoint]) -> Result<Vec<Orbit>> {
    for p in points {
        check_owner(desc, p)?;
    }
    let action = desc.action();
    let mut parent: Vec<usize> = (0..points.len()).collect();
    for (i, p) in points.iter().enumerate() {
        for g in 0..desc.group().order() {
            let moved = action.apply_point(g, p.coords());
            for (j, q) in points.iter().enumerate() {
                if distance(&moved, q.coords()) <= CLUSTER_RADIUS {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut classes: Vec<(usize, Vec<RPoint>)> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let root = find(&mut parent, i);
        match classes.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(p.clone()),
            None => classes.push((root, vec![p.clone()])),
        }
    }
    let mut orbits: Vec<Orbit> = classes
        .into_iter()
        .map(|(_, mut members)| {
            members.sort_by(|a, b| lex(a.coords(), b.coords()));
            Orbit {
                representative: members[0].coords().to_vec(),
                members,
            }
        })
        .collect();
    orbits.sort_by(|a, b| lex(&a.representative, &b.representative));
    Ok(orbits)
}

/// The action groupoid `V = G × U ⇉ U`. A point of `V` is a tag (group
/// element) together with a point of `U`.
#[derive(Clone, Debug)]
pub struct GroupoidDesc {
    desc: QuotientStackDesc,
}

pub fn groupoid_from_action(desc: &QuotientStackDesc) -> Result<GroupoidDesc> {
    desc.require_stable()?;
    Ok(GroupoidDesc { desc: desc.clone() })
}

type Arrow = (usize, Vec<f64>);

impl GroupoidDesc {
    pub fn desc(&self) -> &QuotientStackDesc {
        &self.desc
    }

    pub fn group(&self) -> &FiniteGroup {
        self.desc.group()
    }

    /// The target map on the copy tagged `g`, as expressions.
    pub fn target_map(&self, g: usize) -> Vec<SmoothExpr> {
        self.desc.action().images(g)
    }

    pub fn source(&self, a: &Arrow) -> Vec<f64> {
        a.1.clone()
    }

    pub fn target(&self, a: &Arrow) -> Vec<f64> {
        self.desc.action().apply_point(a.0, &a.1)
    }

    pub fn unit(&self, u: &[f64]) -> Arrow {
        (self.group().identity(), u.to_vec())
    }

    pub fn inverse(&self, a: &Arrow) -> Arrow {
        (self.group().inv(a.0), self.target(a))
    }

    /// `m(b, a)`: first `a`, then `b`. Also returns the composability gap
    /// `|s(b) − t(a)|`.
    pub fn compose(&self, b: &Arrow, a: &Arrow) -> (Arrow, f64) {
        let gap = distance(&self.source(b), &self.target(a));
        ((self.group().mul(b.0, a.0), a.1.clone()), gap)
    }
}

fn arrow_gap(a: &Arrow, b: &Arrow) -> f64 {
    if a.0 == b.0 {
        distance(&a.1, &b.1)
    } else {
        f64::INFINITY
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupoidReport {
    pub checked_points: usize,
    pub tolerance: f64,
    /// Largest residual of each identity.
    pub identities: Vec<(&'static str, f64)>,
    /// Largest `|s(b) − t(a)|` over the composed pairs.
    pub composability: f64,
}

impl GroupoidReport {
    pub fn max_residual(&self) -> f64 {
        self.identities.iter().fold(0.0f64, |m, (_, r)| m.max(*r))
    }

    pub fn passed(&self) -> bool {
        self.composability <= self.tolerance && self.max_residual() <= self.tolerance
    }
}

/// Evaluate the groupoid identities at every arrow `(γ, u)` with `u` in
/// `points`, composing with arrows out of `γu`.
pub fn groupoid_check(gd: &GroupoidDesc, points: &[RPoint], tol: f64) -> Result<GroupoidReport> {
    for p in points {
        check_owner(&gd.desc, p)?;
    }
    let order = gd.group().order();
    let names = [
        "s o u = id",
        "t o u = id",
        "s o i = t",
        "t o i = s",
        "s o m = s o pr2",
        "t o m = t o pr1",
        "m o (i, id) = u o s",
        "m o (id, i) = u o t",
        "m o (m x id) = m o (id x m)",
        "m o (u o t, id) = id",
        "m o (id, u o s) = id",
    ];
    let mut worst = [0.0f64; 11];
    let mut composability = 0.0f64;
    let mut bump = |k: usize, r: f64| worst[k] = worst[k].max(r);
    for p in points {
        let u = p.coords();
        bump(0, distance(&gd.source(&gd.unit(u)), u));
        bump(1, distance(&gd.target(&gd.unit(u)), u));
        for g in 0..order {
            let a: Arrow = (g, u.to_vec());
            let ia = gd.inverse(&a);
            bump(2, distance(&gd.source(&ia), &gd.target(&a)));
            bump(3, distance(&gd.target(&ia), &gd.source(&a)));
            let (left, gap1) = gd.compose(&ia, &a);
            let (right, gap2) = gd.compose(&a, &ia);
            composability = composability.max(gap1).max(gap2);
            bump(6, arrow_gap(&left, &gd.unit(&gd.source(&a))));
            bump(7, arrow_gap(&right, &gd.unit(&gd.target(&a))));
            let (l, gap3) = gd.compose(&gd.unit(&gd.target(&a)), &a);
            let (r, gap4) = gd.compose(&a, &gd.unit(&gd.source(&a)));
            composability = composability.max(gap3).max(gap4);
            bump(9, arrow_gap(&l, &a));
            bump(10, arrow_gap(&r, &a));
            for h in 0..order {
                let b: Arrow = (h, gd.target(&a));
                let (ba, gap) = gd.compose(&b, &a);
                composability = composability.max(gap);
                bump(4, distance(&gd.source(&ba), &gd.source(&a)));
                bump(5, distance(&gd.target(&ba), &gd.target(&b)));
                for k in 0..order {
                    let c: Arrow = (k, gd.target(&b));
                    let (cb, g1) = gd.compose(&c, &b);
                    let (c_ba, g2) = gd.compose(&c, &ba);
                    let (cb_a, g3) = gd.compose(&cb, &a);
                    composability = composability.max(g1).max(g2).max(g3);
                    bump(8, arrow_gap(&c_ba, &cb_a));
                }
            }
        }
    }
    Ok(GroupoidReport {
        checked_points: points.len(),
        tolerance: tol,
        identities: names.iter().copied().zip(worst).collect(),
        composability,
    })
}

/// An equivariant map `[X/F] → [Z/H]`: a smooth map `X → Z` with a
/// homomorphism `ρ: F → H` such that `g(f·x) = ρ(f)·g(x)`.
#[derive(Clone, Debug)]
pub struct StackMap {
    source: QuotientStackDesc,
    target: QuotientStackDesc,
    map: SmoothMap,
    hom: Vec<usize>,
}

impl StackMap {
    /// Checks the homomorphism exactly and equivariance at points of `X`
    /// found with `params`, or structurally when both sides agree.
    pub fn new(
        source: &QuotientStackDesc,
        target: &QuotientStackDesc,
        map: SmoothMap,
        hom: Vec<usize>,
        params: &SearchParams,
        tol: f64,
    ) -> Result<Self> {
        if !same_ring(&map.source.ring, source.ring())
            || !same_ring(&map.target.ring, target.ring())
        {
            return Err(Error::Mismatch(
                "map does not run between the given presentations".into(),
            ));
        }
        if !source.group().is_homomorphism(&hom, target.group()) {
            return Err(Error::Mismatch(format!(
                "{hom:?} is not a group homomorphism"
            )));
        }
        let points = find_r_points(source.ring(), params)?;
        for f in 0..source.group().order() {
            let lhs: Vec<SmoothExpr> = map
                .components
                .iter()
                .map(|c| source.action().act(f, c))
                .collect::<Result<_>>()?;
            let rhs: Vec<SmoothExpr> = target
                .action()
                .images(hom[f])
                .iter()
                .map(|e| Ok(crate::expr::expand(&e.substitute(&map.components)?)))
                .collect::<Result<_>>()?;
            let lhs: Vec<SmoothExpr> = lhs.iter().map(crate::expr::expand).collect();
            if lhs == rhs {
                continue;
            }
            for p in &points {
                let moved = source.action().apply_point(f, p.coords());
                let a = map.apply(&moved)?;
                let b = target.action().apply_point(hom[f], &map.apply(p.coords())?);
                let gap = a
                    .iter()
                    .zip(&b)
                    .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
                if gap > tol {
                    return Err(Error::CheckFailed(format!(
                        "map is not equivariant for element {f} at {:?} (gap {gap:e})",
                        p.coords()
                    )));
                }
            }
        }
        Ok(StackMap {
            source: source.clone(),
            target: target.clone(),
            map,
            hom,
        })
    }

    pub fn source(&self) -> &QuotientStackDesc {
        &self.source
    }

    pub fn target(&self) -> &QuotientStackDesc {
        &self.target
    }

    pub fn map(&self) -> &SmoothMap {
        &self.map
    }

    pub fn hom(&self) -> &[usize] {
        &self.hom
    }
}

/// The component `X ×_{g, Z, η·h} Y` of `W`.
#[derive(Clone, Debug)]
pub struct TaggedComponent {
    pub tag: usize,
    pub fibre: FibreProduct,
}

/// `[W/(F×G)]` with `W = ⨆_{η ∈ H} X ×_{g, Z, η·h} Y`.
#[derive(Clone, Debug)]
pub struct StackFibreProduct {
    pub components: Vec<TaggedComponent>,
    /// `F × G`, with `(f, g')` at index `f·|G| + g'`.
    pub group: FiniteGroup,
    left: StackMap,
    right: StackMap,
}

impl StackFibreProduct {
    /// Tag reached from `η` under `(f, g')`: `ρ(f)·η·σ(g')⁻¹`.
    pub fn tag_action(&self, element: usize, tag: usize) -> usize {
        let ng = self.right.source.group().order();
        let (f, g) = (element / ng, element % ng);
        let h = self.left.target.group();
        h.mul(h.mul(self.left.hom[f], tag), h.inv(self.right.hom[g]))
    }

    /// Coordinates `(x, y)` moved by `(f, g')`.
    pub fn act_point(&self, element: usize, coords: &[f64]) -> Vec<f64> {
        let ng = self.right.source.group().order();
        let m = self.left.source.ring().arity();
        let mut out = self
            .left
            .source
            .action()
            .apply_point(element / ng, &coords[..m]);
        out.extend(
            self.right
                .source
                .action()
                .apply_point(element % ng, &coords[m..]),
        );
        out
    }

    /// ℝ-points of every component, tagged.
    pub fn points(&self, params: &SearchParams) -> Result<Vec<(usize, RPoint)>> {
        let mut out = Vec::new();
        for c in &self.components {
            out.extend(
                find_r_points(&c.fibre.manifold.ring, params)?
                    .into_iter()
                    .map(|p| (c.tag, p)),
            );
        }
        Ok(out)
    }
}

pub fn stack_fibre_product(g: &StackMap, h: &StackMap) -> Result<StackFibreProduct> {
    let (zg, zh) = (&g.target, &h.target);
    if !same_ring(zg.ring(), zh.ring()) || zg.action() != zh.action() {
        return Err(Error::Mismatch("maps have different target stacks".into()));
    }
    let mut components = Vec::new();
    for eta in 0..zg.group().order() {
        let twisted: Vec<SmoothExpr> = zg
            .action()
            .images(eta)
            .iter()
            .map(|e| e.substitute(&h.map.components))
            .collect::<Result<_>>()?;
        let twisted = SmoothMap::new(&h.map.source, &h.map.target, twisted)?;
        components.push(TaggedComponent {
            tag: eta,
            fibre: fibre_product(&g.map, &twisted)?,
        });
    }
    Ok(StackFibreProduct {
        components,
        group: FiniteGroup::product(g.source.group(), h.source.group()),
        left: g.clone(),
        right: h.clone(),
    })
}
