use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use super::{CheckCtx, Factor, MapError, VarietySpec, Verdict};
use crate::field::QuadExt;
use crate::group::{ActionTable, GroupError, GroupSpec};
use crate::poly::{Chart, Limits, PolyError, RatFunc};

/// A rational map `source ⇢ target` together with the group actions it is
/// meant to intertwine.
#[derive(Clone, Debug)]
pub struct EquivMap {
    pub name: String,
    pub source: VarietySpec,
    pub target: VarietySpec,
    components: Vec<RatFunc>,
    pub group: GroupSpec,
    pub source_action: ActionTable,
    pub target_action: ActionTable,
}

fn vars(n: usize) -> Vec<RatFunc> {
    (0..n).map(|i| RatFunc::var(n, i)).collect()
}

fn max_size(fs: &[RatFunc]) -> usize {
    fs.iter().map(RatFunc::size).max().unwrap_or(0)
}

/// Exact equality of two component tuples as maps into `target`, modulo the
/// relations of `chart`: componentwise on affine and torus blocks, by
/// vanishing 2×2 minors on projective blocks, and up to a diagonal
/// translation on quotient blocks.
pub fn tuple_equal(target: &VarietySpec, f: &[RatFunc], g: &[RatFunc], chart: &Chart, limits: &Limits) -> Result<bool, PolyError> {
    if f.len() != target.nvars() || g.len() != target.nvars() {
        return Ok(false);
    }
    for (r, factor) in target.blocks() {
        let (a, b) = (&f[r.clone()], &g[r]);
        match factor {
            Factor::Projective(_) => {
                for side in [a, b] {
                    let mut all_zero = true;
                    for c in side {
                        if !chart.is_zero(c, limits)? {
                            all_zero = false;
                            break;
                        }
                    }
                    if all_zero {
                        return Ok(false);
                    }
                }
                for i in 0..a.len() {
                    for j in i + 1..a.len() {
                        let minor = a[i].mul_bounded(&b[j], limits)?.add_bounded(&-&a[j].mul_bounded(&b[i], limits)?, limits)?;
                        if !chart.is_zero(&minor, limits)? {
                            return Ok(false);
                        }
                    }
                }
            }
            Factor::DiagonalQuotient(_) => {
                let d0 = a[0].add_bounded(&-&b[0], limits)?;
                for i in 1..a.len() {
                    let di = a[i].add_bounded(&-&b[i], limits)?;
                    if !chart.is_zero(&di.add_bounded(&-&d0, limits)?, limits)? {
                        return Ok(false);
                    }
                }
            }
            _ => {
                for (x, y) in a.iter().zip(b) {
                    if !chart.equal(x, y, limits)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

fn compose_all(outer: &[RatFunc], inner: &[RatFunc], limits: &Limits) -> Result<Vec<RatFunc>, PolyError> {
    outer.iter().map(|c| c.compose(inner, limits)).collect()
}

fn restrict_all(chart: &Chart, fs: &[RatFunc], limits: &Limits) -> Result<Vec<RatFunc>, PolyError> {
    fs.iter().map(|f| chart.restrict(f, limits)).collect()
}

fn structural(s: impl Into<String>) -> MapError {
    MapError::Structural(s.into())
}

impl EquivMap {
    pub fn new(
        name: &str,
        source: VarietySpec,
        target: VarietySpec,
        components: Vec<RatFunc>,
        group: GroupSpec,
        source_action: ActionTable,
        target_action: ActionTable,
    ) -> Result<Self, MapError> {
        if components.len() != target.nvars() {
            return Err(structural(format!(
                "{name}: {} components for target {} of dimension {}",
                components.len(),
                target,
                target.nvars()
            )));
        }
        if let Some(c) = components.iter().find(|c| c.nvars() != source.nvars()) {
            return Err(structural(format!("{name}: component {c} is not a function on {source}")));
        }
        source_action.validate(&group, &source)?;
        target_action.validate(&group, &target)?;
        Ok(EquivMap { name: name.to_string(), source, target, components, group, source_action, target_action })
    }

    /// The identity of `v` with the given action on both sides.
    pub fn identity(v: VarietySpec, group: GroupSpec, action: ActionTable) -> Result<Self, MapError> {
        let comps = vars(v.nvars());
        Self::new(&format!("id[{v}]"), v.clone(), v, comps, group, action.clone(), action)
    }

    pub fn components(&self) -> &[RatFunc] {
        &self.components
    }

    /// Same map with new components (for deliberately broken fixtures and
    /// rescaling tests); actions are kept.
    pub fn with_components(&self, name: &str, components: Vec<RatFunc>) -> Result<Self, MapError> {
        Self::new(
            name,
            self.source.clone(),
            self.target.clone(),
            components,
            self.group.clone(),
            self.source_action.clone(),
            self.target_action.clone(),
        )
    }

    pub fn with_actions(&self, name: &str, source_action: ActionTable, target_action: ActionTable) -> Result<Self, MapError> {
        Self::new(name, self.source.clone(), self.target.clone(), self.components.clone(), self.group.clone(), source_action, target_action)
    }

    /// Evaluates at a point; `Ok(None)` on the exceptional locus (a pole, or a
    /// projective block of the image that vanishes).
    pub fn eval(&self, p: &[QuadExt]) -> Result<Option<Vec<QuadExt>>, MapError> {
        let mut out = Vec::with_capacity(self.components.len());
        for c in &self.components {
            match c.eval(p) {
                Ok(v) => out.push(v),
                Err(PolyError::Pole) => return Ok(None),
                Err(e) => return Err(e.into()),
            }
        }
        let degenerate = self.target.blocks().into_iter().any(|(r, f)| f.is_projective() && out[r].iter().all(QuadExt::is_zero));
        Ok((!degenerate).then_some(out))
    }

    /// Target relations hold identically, projective sources give
    /// scalar-invariant values, and both action tables satisfy the group
    /// relations and preserve their varieties.
    pub fn check_well_formed(&self, ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
        let mut out = Vec::new();
        let chart = self.source.chart()?;
        let mut bad = Vec::new();
        for (rel, e) in self.target.relations()? {
            let p = RatFunc::from_poly(rel.polynomial(self.target.nvars()));
            let pulled = p.compose(&self.components, &ctx.limits)?;
            if !chart.is_zero(&pulled, &ctx.limits)? {
                bad.push(format!("relation solved for {}", self.target.coords()[e]));
            }
        }
        out.push(Verdict::from_bool(
            "target relations",
            bad.is_empty(),
            if bad.is_empty() { "components satisfy every target relation".to_string() } else { bad.join(", ") },
        ));

        // classes: projective blocks up to a scalar, quotient blocks up to a
        // diagonal translation; one fresh variable per such block
        let classes: Vec<_> = self
            .source
            .blocks()
            .into_iter()
            .filter(|(_, f)| f.is_projective() || matches!(f, Factor::DiagonalQuotient(_)))
            .map(|(r, f)| (r, f.is_projective()))
            .collect();
        if !classes.is_empty() {
            let n = self.source.nvars();
            let m = n + classes.len();
            let chart = self.source.chart_with_extra(classes.len())?;
            let map: Vec<usize> = (0..n).collect();
            let lifted: Vec<RatFunc> = self.components.iter().map(|c| c.remap_vars(m, &map)).collect();
            let mut moved = vars(m);
            for (b, (r, projective)) in classes.iter().enumerate() {
                let t = RatFunc::var(m, n + b);
                for i in r.clone() {
                    moved[i] = if *projective { &moved[i] * &t } else { &moved[i] + &t };
                }
            }
            let rescaled = compose_all(&lifted, &moved, &ctx.limits)?;
            let ok = tuple_equal(&self.target, &rescaled, &lifted, &chart, &ctx.limits)?;
            out.push(
                Verdict::from_bool("class invariance", ok, "value independent of the representative of each class")
                    .with_terms(max_size(&rescaled)),
            );
        }

        for (side, v, table) in [("source", &self.source, &self.source_action), ("target", &self.target, &self.target_action)] {
            let mut rng = ctx.rng(&format!("{}:{side}-actions", self.name));
            let res = table
                .check_semilinear(&self.group)
                .and_then(|_| table.check_relations(&self.group, v, ctx.field, &mut rng, ctx.relation_trials))
                .and_then(|_| {
                    for _ in 0..ctx.relation_trials {
                        let p = v.sample_point(&mut rng, ctx.field, false)?;
                        for label in self.group.all_labels() {
                            if !v.contains(&table.get(label)?.apply(&p)?)? {
                                return Err(GroupError::RelationFailed(format!("{label} leaves {v}")));
                            }
                        }
                    }
                    Ok(())
                });
            out.push(match res {
                Ok(()) => Verdict::pass(format!("{side} action"), format!("relations of {} hold on {v}", self.group.name)),
                Err(e) => Verdict::fail(format!("{side} action"), e.to_string()),
            });
        }
        Ok(out)
    }

    /// For every generator `g`: `m ∘ ρ_src(g) = ρ_tgt(g) ∘ m` exactly. For a
    /// semilinear `g = γ ∘ L` this is `mᵞ ∘ L_src = L_tgt ∘ m`, where `mᵞ` has
    /// conjugated coefficients.
    pub fn check_equivariance(&self, ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
        let chart = self.source.chart()?;
        let x = vars(self.source.nvars());
        let mut out = Vec::new();
        for label in self.group.all_labels() {
            let check = format!("equivariance[{label}]");
            let (gs, gt) = (self.source_action.get(label)?, self.target_action.get(label)?);
            if gs.conjugate != gt.conjugate {
                out.push(Verdict::fail(check, "semilinearity mismatch between source and target actions"));
                continue;
            }
            let m: Vec<RatFunc> =
                if gs.conjugate { self.components.iter().map(RatFunc::conjugate_coeffs).collect() } else { self.components.clone() };
            let lhs = match gs.apply_linear(&x) {
                Ok(xs) => compose_all(&m, &xs, &ctx.limits),
                Err(_) => Err(PolyError::DegenerateComposition),
            };
            let rhs = gt.apply_linear(&self.components);
            let verdict = match (lhs, rhs) {
                (Err(PolyError::DegenerateComposition), _) | (_, Err(_)) => Verdict::fail(&check, "degenerate composition"),
                (Err(e), _) => return Err(e.into()),
                (Ok(lhs), Ok(rhs)) => {
                    let terms = max_size(&lhs).max(max_size(&rhs));
                    if tuple_equal(&self.target, &lhs, &rhs, &chart, &ctx.limits)? {
                        Verdict::pass(&check, format!("{} commutes with {gs} / {gt}", self.name))
                    } else {
                        Verdict::fail(&check, format!("{} does not commute with {label}", self.name))
                            .with_witness(self.equivariance_witness(label, ctx)?)
                    }
                    .with_terms(terms)
                }
            };
            out.push(verdict);
        }
        Ok(out)
    }

    fn equivariance_witness(&self, label: &str, ctx: &CheckCtx) -> Result<Option<Vec<QuadExt>>, MapError> {
        let (gs, gt) = (self.source_action.get(label)?, self.target_action.get(label)?);
        let mut rng = ctx.rng(&format!("{}:witness:{label}", self.name));
        for _ in 0..ctx.trials.max(20) {
            let p = self.source.sample_point(&mut rng, ctx.field, false)?;
            let (Ok(gp), Some(mp)) = (gs.apply(&p), self.eval(&p)?) else { continue };
            let (Some(mgp), Ok(gmp)) = (self.eval(&gp)?, gt.apply(&mp)) else { continue };
            if !self.target.points_equal(&mgp, &gmp) {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// `other ∘ self`. Requires `self.target` and `other.source` to agree in
    /// shape, group and action.
    pub fn then(&self, other: &EquivMap, limits: &Limits) -> Result<EquivMap, MapError> {
        if !self.target.same_shape(&other.source) {
            return Err(structural(format!(
                "cannot compose: {} lands in {} but {} starts on {}",
                self.name, self.target, other.name, other.source
            )));
        }
        if self.group != other.group {
            return Err(structural(format!("cannot compose: groups {} and {} differ", self.group.name, other.group.name)));
        }
        for label in self.group.all_labels() {
            if !self.target_action.get(label)?.same_action(other.source_action.get(label)?, &self.target) {
                return Err(structural(format!("cannot compose: actions of {label} on {} differ", self.target)));
            }
        }
        let inner = restrict_all(&self.source.chart()?, &self.components, limits)?;
        let mut comps = Vec::with_capacity(other.components.len());
        for (i, c) in other.components.iter().enumerate() {
            match c.compose(&inner, limits) {
                Ok(f) => comps.push(f),
                Err(PolyError::DegenerateComposition) => {
                    return Err(MapError::Degenerate(format!(
                        "component {} of {} has a denominator vanishing on the image of {}",
                        other.target.coords()[i],
                        other.name,
                        self.name
                    )))
                }
                Err(e) => return Err(e.into()),
            }
        }
        let comps = clear_projective_denominators(&other.target, comps, limits)?;
        EquivMap::new(
            &format!("{} . {}", other.name, self.name),
            self.source.clone(),
            other.target.clone(),
            comps,
            self.group.clone(),
            self.source_action.clone(),
            other.target_action.clone(),
        )
    }

    /// Checks `g ∘ f = id` and `f ∘ g = id` exactly, then spot-checks both
    /// round trips at `ctx.trials` random points.
    pub fn check_inverse_pair(&self, g: &EquivMap, ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
        if !self.target.same_shape(&g.source) || !g.target.same_shape(&self.source) {
            return Err(structural(format!("{} and {} are not candidate inverses", self.name, g.name)));
        }
        let mut out = Vec::new();
        for (f, h) in [(self, g), (g, self)] {
            let check = format!("{} . {} = id", h.name, f.name);
            let chart = f.source.chart()?;
            // restricting the inner map first keeps the composite small
            let inner = restrict_all(&chart, &f.components, &ctx.limits)?;
            let verdict = match compose_all(&h.components, &inner, &ctx.limits) {
                Err(PolyError::DegenerateComposition) => Verdict::fail(&check, "degenerate composition"),
                Err(e) => return Err(e.into()),
                Ok(round) => {
                    let ok = tuple_equal(&f.source, &round, &vars(f.source.nvars()), &chart, &ctx.limits)?;
                    let v = Verdict::from_bool(
                        &check,
                        ok,
                        if ok { "exact identity modulo source relations" } else { "round trip is not the identity" },
                    )
                    .with_terms(max_size(&round));
                    if ok {
                        v
                    } else {
                        v.with_witness(round_trip_spot(f, h, ctx, 20)?.2)
                    }
                }
            };
            out.push(verdict);
        }
        for (f, h) in [(self, g), (g, self)] {
            let (agree, exceptional, witness) = round_trip_spot(f, h, ctx, ctx.trials)?;
            let ok = witness.is_none() && agree == ctx.trials;
            out.push(
                Verdict::from_bool(
                    format!("spot {} . {}", h.name, f.name),
                    ok,
                    format!("{agree} random points agree, {exceptional} resampled on the exceptional locus"),
                )
                .with_witness(witness),
            );
        }
        Ok(out)
    }
}

/// Evaluates `h(f(p))` at random points until `trials` generic points were
/// seen; returns (agreements, exceptional samples, first disagreement).
fn round_trip_spot(f: &EquivMap, h: &EquivMap, ctx: &CheckCtx, trials: usize) -> Result<(usize, usize, Option<Vec<QuadExt>>), MapError> {
    let mut rng = ctx.rng(&format!("spot:{}:{}", f.name, h.name));
    let (mut agree, mut exceptional) = (0, 0);
    while agree < trials && exceptional < 4 * trials + 16 {
        let rational_only = rng.gen_bool(0.25);
        let p = f.source.sample_point(&mut rng, ctx.field, rational_only)?;
        let Some(y) = f.eval(&p)? else {
            exceptional += 1;
            continue;
        };
        if !f.target.contains(&y)? {
            // A zero torus coordinate or a zero projective block means `p`
            // lies on the exceptional locus; a violated relation does not.
            if !f.target.satisfies_relations(&y)? {
                return Ok((agree, exceptional, Some(p)));
            }
            exceptional += 1;
            continue;
        }
        let Some(back) = h.eval(&y)? else {
            exceptional += 1;
            continue;
        };
        if !f.source.points_equal(&back, &p) {
            return Ok((agree, exceptional, Some(p)));
        }
        agree += 1;
    }
    Ok((agree, exceptional, None))
}

/// On each projective block, multiplies through by the distinct
/// denominators so the block becomes a polynomial tuple.
fn clear_projective_denominators(target: &VarietySpec, mut comps: Vec<RatFunc>, limits: &Limits) -> Result<Vec<RatFunc>, PolyError> {
    for (r, f) in target.blocks() {
        if !f.is_projective() {
            continue;
        }
        let mut dens: Vec<&crate::poly::SparsePoly> = Vec::new();
        for c in &comps[r.clone()] {
            if !c.is_zero() && !dens.contains(&c.den()) {
                dens.push(c.den());
            }
        }
        let dens: Vec<_> = dens.into_iter().cloned().collect();
        let mut cleared = Vec::with_capacity(r.len());
        for c in &comps[r.clone()] {
            let mut num = c.num().clone();
            for d in dens.iter().filter(|d| *d != c.den()) {
                num = num.mul_bounded(d, limits)?;
            }
            cleared.push(RatFunc::from_poly(num));
        }
        for (slot, v) in comps[r].iter_mut().zip(cleared) {
            *slot = v;
        }
    }
    Ok(comps)
}

impl fmt::Display for EquivMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.name, self.source, self.target)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{ActionGen, CoordTwist, Perm};
    use crate::poly::SparsePoly;

    fn s3_torus_table(proj: bool) -> ActionTable {
        let mk = |g: ActionGen| if proj { g.on_classes() } else { g };
        ActionTable::new(alloc::vec![
            ("s12", mk(ActionGen::permutation(Perm::transposition(3, 0, 1)))),
            ("c123", mk(ActionGen::permutation(Perm::cycle(3, &[0, 1, 2])))),
            ("gamma", mk(ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating())),
        ])
    }

    fn torus() -> VarietySpec {
        VarietySpec::simple("T", Factor::Torus { n: 3, product_one: true }, "t").unwrap()
    }

    #[test]
    fn identity_passes() {
        let ctx = CheckCtx::new(1);
        let id = EquivMap::identity(torus(), GroupSpec::s3_gamma(), s3_torus_table(false)).unwrap();
        assert!(id.check_equivariance(&ctx).unwrap().iter().all(|v| v.pass));
        assert!(id.check_inverse_pair(&id, &ctx).unwrap().iter().all(|v| v.pass));
        assert!(id.check_well_formed(&ctx).unwrap().iter().all(|v| v.pass));
    }

    #[test]
    fn inversion_on_torus_is_equivariant_and_involutive() {
        let ctx = CheckCtx::new(2);
        let x = vars(3);
        let inv: Vec<RatFunc> = x.iter().map(|c| c.inv().unwrap()).collect();
        let id = EquivMap::identity(torus(), GroupSpec::s3_gamma(), s3_torus_table(false)).unwrap();
        let m = id.with_components("inv", inv).unwrap();
        assert!(m.check_equivariance(&ctx).unwrap().iter().all(|v| v.pass));
        assert!(m.check_inverse_pair(&m, &ctx).unwrap().iter().all(|v| v.pass));
        let mm = m.then(&m, &ctx.limits).unwrap();
        assert!(tuple_equal(&torus(), mm.components(), &x, &torus().chart().unwrap(), &ctx.limits).unwrap());
    }

    #[test]
    fn non_equivariant_map_fails_with_witness() {
        let ctx = CheckCtx::new(3);
        let x = vars(3);
        // (t2, t1, t3) commutes with s12 but not with the 3-cycle
        let id = EquivMap::identity(torus(), GroupSpec::s3_gamma(), s3_torus_table(false)).unwrap();
        let m = id.with_components("swap", alloc::vec![x[1].clone(), x[0].clone(), x[2].clone()]).unwrap();
        let vs = m.check_equivariance(&ctx).unwrap();
        assert!(vs[0].pass);
        assert!(!vs[1].pass);
        assert!(vs[1].witness.is_some());
    }

    #[test]
    fn projective_rescaling_is_invisible() {
        let ctx = CheckCtx::new(4);
        let p2 = VarietySpec::simple("P2", Factor::projective(Factor::Torus { n: 3, product_one: false }), "x").unwrap();
        let id = EquivMap::identity(p2.clone(), GroupSpec::s3_gamma(), s3_torus_table(true)).unwrap();
        let k = RatFunc::from_poly(&SparsePoly::var(3, 0) + &SparsePoly::var(3, 1).scale(&QuadExt::from_i64(2)));
        let scaled: Vec<RatFunc> = vars(3).iter().map(|c| c * &k).collect();
        // (x1 + 2x2) is not symmetric, but the class is unchanged
        let m = id.with_components("scaled", scaled).unwrap();
        assert!(m.check_well_formed(&ctx).unwrap().iter().all(|v| v.pass));
        assert!(m.check_equivariance(&ctx).unwrap().iter().all(|v| v.pass));
    }

    #[test]
    fn incompatible_compose_is_structural() {
        let ctx = CheckCtx::new(5);
        let id = EquivMap::identity(torus(), GroupSpec::s3_gamma(), s3_torus_table(false)).unwrap();
        let p2 = VarietySpec::simple("P2", Factor::projective(Factor::Torus { n: 3, product_one: false }), "x").unwrap();
        let other = EquivMap::identity(p2, GroupSpec::s3_gamma(), s3_torus_table(true)).unwrap();
        assert!(matches!(id.then(&other, &ctx.limits), Err(MapError::Structural(_))));
    }
}
