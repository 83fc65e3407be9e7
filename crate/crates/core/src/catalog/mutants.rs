//! Deliberately broken variants of verified constructions. Each must be
//! rejected, and the failing check it is expected to trip is recorded.

use alloc::vec::Vec;

use super::rank2::{base_table, differential_maps, expected_twisted_table, torus, twist_verdicts};
use super::su3::{gm3_mod_gm, gm3_mod_gm_action, linear_link, t_prime, t_prime_action};
use super::CatalogError;
use crate::group::{ActionGen, ActionTable, Cocycle, GroupSpec, Perm};
use crate::picard::{galois_map, lattice_map_verdicts, standard_actions};
use crate::poly::RatFunc;
use crate::ratmap::{CheckCtx, EquivMap, Verdict};

pub struct Mutant {
    pub id: &'static str,
    pub description: &'static str,
    /// Name of a check that must fail.
    pub expected_failure: &'static str,
    pub run: fn(&CheckCtx) -> Result<Vec<Verdict>, CatalogError>,
}

fn map_checks(f: &EquivMap, ctx: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let mut out = f.check_well_formed(ctx)?;
    out.extend(f.check_equivariance(ctx)?);
    Ok(out)
}

/// The quotient map with its first and third components exchanged:
/// `(x₁/x₂, x₃/x₁, x₂/x₃)`.
fn swapped_components(ctx: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let n = 3;
    let x = |i| RatFunc::var(n, i);
    let r = |a: usize, b: usize| x(a).checked_div(&x(b)).expect("nonzero");
    let comps = alloc::vec![r(0, 1), r(2, 0), r(1, 2)];
    let f =
        EquivMap::new("quotient (1<->3)", gm3_mod_gm(), t_prime(), comps, GroupSpec::s3_gamma(), gm3_mod_gm_action(), t_prime_action())?;
    map_checks(&f, ctx)
}

/// The differential onto `_Tw t` with the sign of the twisted `s12` lost.
fn twist_sign(ctx: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let (f, _) = differential_maps()?;
    let mut target = f.target_action.clone();
    target.set("s12", ActionGen::permutation(Perm::transposition(3, 0, 1)));
    let f = f.with_actions("dpgu3 (untwisted s12)", f.source_action.clone(), target)?;
    map_checks(&f, ctx)
}

/// Scaling by `√−3` with the Galois action stripped of its conjugation on
/// both sides.
fn dropped_conjugation(ctx: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let link = linear_link()?;
    let (scale, _) = &link.parts[1];
    let strip = |t: &ActionTable| {
        let mut t = t.clone();
        let g = t.get("gamma").expect("gamma").clone();
        t.set("gamma", ActionGen { conjugate: false, ..g });
        t
    };
    let f = scale.with_actions("sqrt-3 (no conjugation)", strip(&scale.source_action), strip(&scale.target_action))?;
    map_checks(&f, ctx)
}

/// Twisting `T` by `c(γ) = (1 2)` instead of `ε`.
fn wrong_cocycle(ctx: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let c = Cocycle::new(&[("gamma", &["s12"])]);
    Ok(twist_verdicts(&torus(), &base_table(true), &expected_twisted_table(true), &c, ctx))
}

/// The Galois matrix on the Picard lattice with one entry off by one.
fn lattice_off_by_one(_: &CheckCtx) -> Result<Vec<Verdict>, CatalogError> {
    let mut g = galois_map();
    g.m[0][1] += 1;
    let mut gens = standard_actions();
    gens[2] = g;
    Ok(lattice_map_verdicts(&gens))
}

pub fn mutants() -> Vec<Mutant> {
    alloc::vec![
        Mutant {
            id: "mutant.dropped-conjugation",
            description: "Galois generator acts linearly instead of semilinearly",
            expected_failure: "equivariance[gamma]",
            run: dropped_conjugation,
        },
        Mutant {
            id: "mutant.lattice-off-by-one",
            description: "Galois lattice matrix with entry (0, 1) off by one",
            expected_failure: "form preserved[gamma]",
            run: lattice_off_by_one,
        },
        Mutant {
            id: "mutant.swapped-components",
            description: "quotient map with components 1 and 3 exchanged",
            expected_failure: "equivariance[s12]",
            run: swapped_components,
        },
        Mutant {
            id: "mutant.twist-sign",
            description: "twisted action on the Lie algebra without the sign on s12",
            expected_failure: "equivariance[s12]",
            run: twist_sign,
        },
        Mutant {
            id: "mutant.wrong-cocycle",
            description: "Galois action twisted by (1 2) instead of eps",
            expected_failure: "T: twisted gamma",
            run: wrong_cocycle,
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_mutant_fails_its_named_check() {
        let mut ctx = CheckCtx::new(42);
        ctx.trials = 10;
        ctx.relation_trials = 10;
        for m in mutants() {
            let vs = (m.run)(&ctx).unwrap();
            let failed: Vec<&str> = vs.iter().filter(|v| !v.pass).map(|v| v.check.as_str()).collect();
            assert!(failed.contains(&m.expected_failure), "{}: {failed:?}", m.id);
        }
    }
}
