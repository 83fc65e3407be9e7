//! Twisted rank-2 tori: the S₃×S₂ action on `T` and `t`, the cocycle twist
//! `c(γ) = ε`, the St/Tw restrictions to S₃, and the PGU₃ quotient-torus map
//! with its differential.

use alloc::format;
use alloc::vec::Vec;

use super::su3::{gm3_mod_gm, pair_verdicts, quotient_map_components, t_prime};
use crate::field::QuadExt;
use crate::group::{pullback, twist_action, ActionGen, ActionTable, Cocycle, CoordTwist, Embedding, GroupError, GroupSpec, Perm};
use crate::poly::RatFunc;
use crate::ratmap::{CheckCtx, EquivMap, Factor, MapError, VarietySpec, Verdict};

fn s12() -> Perm {
    Perm::transposition(3, 0, 1)
}

fn c123() -> Perm {
    Perm::cycle(3, &[0, 1, 2])
}

pub fn torus() -> VarietySpec {
    VarietySpec::simple("T", Factor::Torus { n: 3, product_one: true }, "x").expect("valid variety")
}

pub fn lie_torus() -> VarietySpec {
    VarietySpec::simple("t", Factor::LinearSlice(3), "x").expect("valid variety")
}

/// Lie algebra of `Gm³/Gm`: `𝔸³` modulo the diagonal.
pub fn lie_quotient() -> VarietySpec {
    VarietySpec::simple("Lie(Gm^3/Gm)", Factor::DiagonalQuotient(3), "x").expect("valid variety")
}

/// S₃ permutes, `ε` inverts (on `T`) or negates (on `t`), `γ` conjugates.
pub fn base_table(multiplicative: bool) -> ActionTable {
    let eps = if multiplicative { CoordTwist::Invert } else { CoordTwist::Negate };
    ActionTable::new(alloc::vec![
        ("s12", ActionGen::permutation(s12())),
        ("c123", ActionGen::permutation(c123())),
        ("eps", ActionGen::identity(3).with_twist(eps)),
        ("gamma", ActionGen::identity(3).conjugating()),
    ])
}

/// The twisted Galois action written out directly: `γ(x) = (γx₁⁻¹, γx₂⁻¹, γx₃⁻¹)`
/// on `T` and `(−γx₁, −γx₂, −γx₃)` on `t`.
pub fn expected_twisted_table(multiplicative: bool) -> ActionTable {
    let eps = if multiplicative { CoordTwist::Invert } else { CoordTwist::Negate };
    let mut t = base_table(multiplicative);
    t.set("gamma", ActionGen::identity(3).with_twist(eps).conjugating());
    t
}

pub fn eps_cocycle() -> Cocycle {
    Cocycle::new(&[("gamma", &["eps"])])
}

/// Twists `base` by `c` and compares with the expected table label by
/// label; also re-checks the group relations for the twisted action.
pub fn twist_verdicts(v: &VarietySpec, base: &ActionTable, expected: &ActionTable, c: &Cocycle, ctx: &CheckCtx) -> Vec<Verdict> {
    let group = GroupSpec::s3xs2_gamma();
    let mut out = Vec::new();
    let mut rng = ctx.rng(&format!("twist:{v}"));
    out.push(match base.check_relations(&group, v, ctx.field, &mut rng, ctx.relation_trials) {
        Ok(()) => Verdict::pass(format!("{v}: base relations"), format!("relations of {} hold", group.name)),
        Err(e) => Verdict::fail(format!("{v}: base relations"), e.to_string_lossy()),
    });
    let twisted = match twist_action(&group, base, v, c) {
        Ok(t) => t,
        Err(e) => {
            out.push(Verdict::fail(format!("{v}: twist"), e.to_string_lossy()));
            return out;
        }
    };
    for label in group.all_labels() {
        let (Ok(got), Ok(want)) = (twisted.get(label), expected.get(label)) else {
            out.push(Verdict::fail(format!("{v}: twisted {label}"), "missing generator"));
            continue;
        };
        out.push(Verdict::from_bool(
            format!("{v}: twisted {label}"),
            got.same_action(want, v),
            format!("twisted: {got}; expected: {want}"),
        ));
    }
    out.push(match twisted.check_relations(&group, v, ctx.field, &mut rng, ctx.relation_trials) {
        Ok(()) => Verdict::pass(format!("{v}: twisted relations"), "the twisted action satisfies the same relations"),
        Err(e) => Verdict::fail(format!("{v}: twisted relations"), e.to_string_lossy()),
    });
    out
}

trait Lossy {
    fn to_string_lossy(&self) -> alloc::string::String;
}

impl Lossy for GroupError {
    fn to_string_lossy(&self) -> alloc::string::String {
        use alloc::string::ToString;
        self.to_string()
    }
}

/// The twisted S₃×S₂×Γ table restricted to S₃×Γ along `mode`.
pub fn restricted_table(multiplicative: bool, mode: Embedding) -> Result<ActionTable, GroupError> {
    let group = GroupSpec::s3xs2_gamma();
    let v = if multiplicative { torus() } else { lie_torus() };
    let twisted = twist_action(&group, &base_table(multiplicative), &v, &eps_cocycle())?;
    pullback(&group, &twisted, mode)
}

/// (a)–(c): base actions, the twist and the St/Tw restrictions.
pub fn twist_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
    let mut out = twist_verdicts(&torus(), &base_table(true), &expected_twisted_table(true), &eps_cocycle(), ctx);
    out.extend(twist_verdicts(&lie_torus(), &base_table(false), &expected_twisted_table(false), &eps_cocycle(), ctx));
    let s3 = GroupSpec::s3_gamma();
    let inv_conj = ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating();
    for (mode, s12_expected) in
        [(Embedding::St, ActionGen::permutation(s12())), (Embedding::Tw, ActionGen::permutation(s12()).with_twist(CoordTwist::Invert))]
    {
        let table = restricted_table(true, mode)?;
        let ok = table.get("s12")?.same_action(&s12_expected, &torus())
            && table.get("c123")?.same_action(&ActionGen::permutation(c123()), &torus())
            && table.get("gamma")?.same_action(&inv_conj, &torus());
        out.push(Verdict::from_bool(format!("{mode:?} T'"), ok, format!("s12 acts as {}", table.get("s12")?)));
        let mut rng = ctx.rng(&format!("restricted:{mode:?}"));
        out.push(match table.check_relations(&s3, &torus(), ctx.field, &mut rng, ctx.relation_trials) {
            Ok(()) => Verdict::pass(format!("{mode:?} T' relations"), "S3 x Gamma relations hold"),
            Err(e) => Verdict::fail(format!("{mode:?} T' relations"), e.to_string_lossy()),
        });
    }
    Ok(out)
}

/// `Gm³/Gm` with the plain permutation action and `γ([x]) = [γ(x)⁻¹]`.
pub fn pgu3_source_table() -> ActionTable {
    ActionTable::new(alloc::vec![
        ("s12", ActionGen::permutation(s12()).on_classes()),
        ("c123", ActionGen::permutation(c123()).on_classes()),
        ("gamma", ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating().on_classes()),
    ])
}

/// `[x] ↦ (x₂/x₃, x₃/x₁, x₁/x₂)` onto `_Tw T'`, with inverse `t ↦ [1 : t₁t₂ : t₂]`.
pub fn pgu3_maps() -> Result<(EquivMap, EquivMap), MapError> {
    let g = GroupSpec::s3_gamma();
    let tw = restricted_table(true, Embedding::Tw)?;
    let f = EquivMap::new("pgu3", gm3_mod_gm(), t_prime(), quotient_map_components(), g.clone(), pgu3_source_table(), tw.clone())?;
    let n = 3;
    let x = |i| RatFunc::var(n, i);
    let section = alloc::vec![RatFunc::one(n), &x(0) * &x(1), x(1)];
    let h = EquivMap::new("pgu3^-1", t_prime(), gm3_mod_gm(), section, g, tw, pgu3_source_table())?;
    Ok((f, h))
}

pub fn differential_source_table() -> ActionTable {
    ActionTable::new(alloc::vec![
        ("s12", ActionGen::permutation(s12())),
        ("c123", ActionGen::permutation(c123())),
        ("gamma", ActionGen::identity(3).with_twist(CoordTwist::Negate).conjugating()),
    ])
}

/// `(x₁, x₂, x₃) ↦ (x₂−x₃, x₃−x₁, x₁−x₂)` onto `_Tw t`, inverse `u ↦ [0, u₁+u₂, u₂]`.
pub fn differential_maps() -> Result<(EquivMap, EquivMap), MapError> {
    let g = GroupSpec::s3_gamma();
    let tw = restricted_table(false, Embedding::Tw)?;
    let n = 3;
    let x = |i| RatFunc::var(n, i);
    let d = alloc::vec![&x(1) - &x(2), &x(2) - &x(0), &x(0) - &x(1)];
    let f = EquivMap::new("dpgu3", lie_quotient(), lie_torus(), d, g.clone(), differential_source_table(), tw.clone())?;
    let back = alloc::vec![RatFunc::zero(n), &x(0) + &x(1), x(1)];
    let h = EquivMap::new("dpgu3^-1", lie_torus(), lie_quotient(), back, g, tw, differential_source_table())?;
    Ok((f, h))
}

/// (d): the PGU₃ map.
pub fn pgu3_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
    let (f, h) = pgu3_maps()?;
    let mut out = pair_verdicts(&f, &h, ctx)?;
    let ones = alloc::vec![QuadExt::one(); 3];
    out.push(Verdict::from_bool("pgu3 at [1:1:1]", f.eval(&ones)?.as_deref() == Some(&ones[..]), "[1:1:1] maps to (1,1,1)"));
    Ok(out)
}

/// (e): its differential.
pub fn differential_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
    let (f, h) = differential_maps()?;
    let mut out = pair_verdicts(&f, &h, ctx)?;
    let p = [QuadExt::from_i64(1), QuadExt::zero(), QuadExt::from_i64(-1)];
    let want = [QuadExt::from_i64(1), QuadExt::from_i64(-2), QuadExt::from_i64(1)];
    out.push(Verdict::from_bool("dpgu3 at (1, 0, -1)", f.eval(&p)?.as_deref() == Some(&want[..]), "(1, 0, -1) maps to (1, -2, 1)"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> CheckCtx {
        let mut c = CheckCtx::new(11);
        c.trials = 10;
        c.relation_trials = 10;
        c
    }

    #[test]
    fn suites_pass() {
        for v in twist_suite(&ctx()).unwrap().into_iter().chain(pgu3_suite(&ctx()).unwrap()).chain(differential_suite(&ctx()).unwrap()) {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn wrong_cocycle_is_caught() {
        let c = Cocycle::new(&[("gamma", &["s12"])]);
        let vs = twist_verdicts(&torus(), &base_table(true), &expected_twisted_table(true), &c, &ctx());
        let failed: Vec<_> = vs.iter().filter(|v| !v.pass).map(|v| v.check.as_str()).collect();
        assert!(failed.contains(&"T: twisted gamma"), "{failed:?}");
        assert!(failed.contains(&"T: twisted relations"), "{failed:?}");
    }
}
