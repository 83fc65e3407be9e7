//! The chain of equivariant birational maps from the maximal torus `T'` of
//! SU₃ to its Lie algebra `Lt'`:
//!
//! ```text
//! T' -> Gm^3/Gm -phi-> P(Lt) x P(Lt) -Segre-> Q -stereo-> A^2 -linear-> Lt'
//! ```
//!
//! Every map is equivariant for S₃ × Γ, where Γ = Gal(ℚ(√−3)/ℚ).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{eisenstein_zeta, sqrt_minus_3};
use crate::field::QuadExt;
use crate::group::{ActionGen, ActionTable, CoordTwist, GroupSpec, Perm};
use crate::poly::{Limits, RatFunc};
use crate::ratmap::{CheckCtx, EquivMap, Factor, MapError, VarietySpec, Verdict};

fn s12() -> Perm {
    Perm::transposition(3, 0, 1)
}

fn c123() -> Perm {
    Perm::cycle(3, &[0, 1, 2])
}

fn q(n: i64) -> QuadExt {
    QuadExt::from_i64(n)
}

fn table(s: ActionGen, c: ActionGen, g: ActionGen) -> ActionTable {
    ActionTable::new(alloc::vec![("s12", s), ("c123", c), ("gamma", g)])
}

pub fn t_prime() -> VarietySpec {
    VarietySpec::simple("T'", Factor::Torus { n: 3, product_one: true }, "t").expect("valid variety")
}

/// `T'`: permutations, and `γ` acting by `t ↦ γ(t)⁻¹`.
pub fn t_prime_action() -> ActionTable {
    table(
        ActionGen::permutation(s12()),
        ActionGen::permutation(c123()),
        ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating(),
    )
}

pub fn gm3_mod_gm() -> VarietySpec {
    VarietySpec::simple("Gm^3/Gm", Factor::projective(Factor::Torus { n: 3, product_one: false }), "x").expect("valid variety")
}

/// `σ([x]) = [σ(x)^{sign σ}]`, `γ([x]) = [γ(x)⁻¹]`.
pub fn gm3_mod_gm_action() -> ActionTable {
    table(
        ActionGen::permutation(s12()).with_twist(CoordTwist::SignPower).on_classes(),
        ActionGen::permutation(c123()).with_twist(CoordTwist::SignPower).on_classes(),
        ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating().on_classes(),
    )
}

pub fn p_lt_squared() -> VarietySpec {
    VarietySpec::new(
        "P(Lt) x P(Lt)",
        alloc::vec![Factor::projective(Factor::LinearSlice(3)), Factor::projective(Factor::LinearSlice(3))],
        &["y1", "y2", "y3", "z1", "z2", "z3"],
    )
    .expect("valid variety")
}

/// Even permutations act on both factors; odd ones and `γ` also swap them.
pub fn p_lt_squared_action() -> ActionTable {
    let swap = Perm::transposition(2, 0, 1);
    table(
        ActionGen::permutation(s12().blockwise(&swap)).on_classes(),
        ActionGen::permutation(c123().blockwise(&Perm::identity(2))).on_classes(),
        ActionGen::permutation(Perm::identity(3).blockwise(&swap)).conjugating().on_classes(),
    )
}

/// The quadric `α₁₁α₂₂ = α₁₂α₂₁` in ℙ³, charted by solving for `α₂₁`.
pub fn quadric() -> VarietySpec {
    let a = |i| crate::poly::SparsePoly::var(4, i);
    let rel = &(&a(0) * &a(3)) - &(&a(1) * &a(2));
    VarietySpec::new("Q", alloc::vec![Factor::projective(Factor::Affine(4))], &["a11", "a12", "a21", "a22"])
        .and_then(|v| v.with_hypersurface(rel, 2))
        .expect("valid variety")
}

fn zeta_scale(n: usize) -> Vec<QuadExt> {
    let z = eisenstein_zeta();
    let mut s = alloc::vec![q(1); n];
    s[0] = z.clone();
    s[n - 1] = &z * &z;
    s
}

/// In the basis `D_ij`: the 3-cycle scales by `(ζ, 1, 1, ζ²)`, the
/// transposition also swaps `α₁₁ ↔ α₂₂`, and `γ` swaps them semilinearly.
pub fn quadric_action() -> ActionTable {
    let swap = Perm::transposition(4, 0, 3);
    table(
        ActionGen::permutation(swap.clone()).with_scale(zeta_scale(4)).on_classes(),
        ActionGen::identity(4).with_scale(zeta_scale(4)).on_classes(),
        ActionGen::permutation(swap).conjugating().on_classes(),
    )
}

pub fn plane() -> VarietySpec {
    VarietySpec::new("P2", alloc::vec![Factor::projective(Factor::Affine(3))], &["b11", "b12", "b22"]).expect("valid variety")
}

pub fn plane_action() -> ActionTable {
    let swap = Perm::transposition(3, 0, 2);
    table(
        ActionGen::permutation(swap.clone()).with_scale(zeta_scale(3)).on_classes(),
        ActionGen::identity(3).with_scale(zeta_scale(3)).on_classes(),
        ActionGen::permutation(swap).conjugating().on_classes(),
    )
}

/// The affine chart `V₁₁,₂₂ = 𝔸²` with coordinates `(u, w)`.
pub fn v1122() -> VarietySpec {
    VarietySpec::new("V11,22", alloc::vec![Factor::Affine(2)], &["u", "w"]).expect("valid variety")
}

/// `c: (ζu, ζ²w)`, `s: (ζw, ζ²u)`, `γ: (γw, γu)`.
pub fn v1122_action() -> ActionTable {
    let swap = Perm::transposition(2, 0, 1);
    table(
        ActionGen::permutation(swap.clone()).with_scale(zeta_scale(2)),
        ActionGen::identity(2).with_scale(zeta_scale(2)),
        ActionGen::permutation(swap).conjugating(),
    )
}

pub fn lt() -> VarietySpec {
    VarietySpec::simple("Lt", Factor::LinearSlice(3), "x").expect("valid variety")
}

pub fn lt_action() -> ActionTable {
    table(ActionGen::permutation(s12()), ActionGen::permutation(c123()), ActionGen::identity(3).conjugating())
}

pub fn lt_prime() -> VarietySpec {
    VarietySpec::simple("Lt'", Factor::LinearSlice(3), "x").expect("valid variety")
}

/// The Lie algebra of `T'`: permutations, and `γ` acting by `x ↦ −γ(x)`.
pub fn lt_prime_action() -> ActionTable {
    table(
        ActionGen::permutation(s12()),
        ActionGen::permutation(c123()),
        ActionGen::identity(3).with_twist(CoordTwist::Negate).conjugating(),
    )
}

fn x(n: usize, i: usize) -> RatFunc {
    RatFunc::var(n, i)
}

fn ratio(a: &RatFunc, b: &RatFunc) -> RatFunc {
    a.checked_div(b).expect("nonzero denominator")
}

fn map(
    name: &str,
    source: (VarietySpec, ActionTable),
    target: (VarietySpec, ActionTable),
    comps: Vec<RatFunc>,
) -> Result<EquivMap, MapError> {
    EquivMap::new(name, source.0, target.0, comps, GroupSpec::s3_gamma(), source.1, target.1)
}

/// `A₁(y) = y₁ + ζ²y₂ + ζy₃` and `A₂(y) = y₁ + ζy₂ + ζ²y₃` (three times the
/// coordinates of `y` in the basis `D₁ = (1, ζ, ζ²)`, `D₂ = (1, ζ², ζ)`).
fn a1a2(n: usize, y: [usize; 3]) -> (RatFunc, RatFunc) {
    let z = eisenstein_zeta();
    let z2 = &z * &z;
    let lin = |c1: &QuadExt, c2: &QuadExt| &(&x(n, y[0]) + &x(n, y[1]).scale(c1)) + &x(n, y[2]).scale(c2);
    (lin(&z2, &z), lin(&z, &z2))
}

fn d1() -> [QuadExt; 3] {
    let z = eisenstein_zeta();
    [q(1), z.clone(), &z * &z]
}

fn d2() -> [QuadExt; 3] {
    let z = eisenstein_zeta();
    [q(1), &z * &z, z]
}

/// `a·D + b·E` for coordinate vectors `D`, `E`.
fn combine(a: &RatFunc, d: &[QuadExt; 3], b: &RatFunc, e: &[QuadExt; 3]) -> Vec<RatFunc> {
    (0..3).map(|i| &a.scale(&d[i]) + &b.scale(&e[i])).collect()
}

/// A link of the chain with its inverse and any sub-maps it factors into.
pub struct Link {
    pub id: &'static str,
    pub forward: EquivMap,
    pub inverse: EquivMap,
    pub parts: Vec<(EquivMap, EquivMap)>,
}

/// Link 1: the section `t ↦ [1 : t₁t₂ : t₂]` of the quotient map
/// `[x] ↦ (x₂/x₃, x₃/x₁, x₁/x₂)`.
pub fn quotient_link() -> Result<Link, MapError> {
    let n = 3;
    let section = alloc::vec![RatFunc::one(n), &x(n, 0) * &x(n, 1), x(n, 1)];
    let quotient = quotient_map_components();
    Ok(Link {
        id: "su3.quotient",
        forward: map("section", (t_prime(), t_prime_action()), (gm3_mod_gm(), gm3_mod_gm_action()), section)?,
        inverse: map("quotient", (gm3_mod_gm(), gm3_mod_gm_action()), (t_prime(), t_prime_action()), quotient)?,
        parts: Vec::new(),
    })
}

/// `(x₂/x₃, x₃/x₁, x₁/x₂)`.
pub fn quotient_map_components() -> Vec<RatFunc> {
    let n = 3;
    alloc::vec![ratio(&x(n, 1), &x(n, 2)), ratio(&x(n, 2), &x(n, 0)), ratio(&x(n, 0), &x(n, 1))]
}

/// `φ([x]) = ([x − τ(x)𝟙], [x⁻¹ − τ(x⁻¹)𝟙])` with `τ` the mean, cleared of
/// denominators.
pub fn phi() -> Result<EquivMap, MapError> {
    let n = 3;
    let s = &(&x(n, 0) + &x(n, 1)) + &x(n, 2);
    let e2 = &(&(&x(n, 1) * &x(n, 2)) + &(&x(n, 0) * &x(n, 2))) + &(&x(n, 0) * &x(n, 1));
    let mut comps: Vec<RatFunc> = (0..3).map(|i| &x(n, i).scale(&q(3)) - &s).collect();
    comps.extend((0..3).map(|i| &(&x(n, (i + 1) % 3) * &x(n, (i + 2) % 3)).scale(&q(3)) - &e2));
    map("phi", (gm3_mod_gm(), gm3_mod_gm_action()), (p_lt_squared(), p_lt_squared_action()), comps)
}

/// The inverse of φ: `x = y + t𝟙`, where `(t, s)` solves
/// `(y_i z_i − y_j z_j) + t(z_i − z_j) + s(y_i − y_j) = 0` for the index
/// pairs (1,2), (1,3). By Cramer's rule, `x ∝ det·y + t_num·𝟙`.
pub fn phi_inverse() -> Result<EquivMap, MapError> {
    let n = 6;
    let y = |i: usize| x(n, i);
    let z = |i: usize| x(n, 3 + i);
    let det = &(&(&z(0) - &z(1)) * &(&y(0) - &y(2))) - &(&(&y(0) - &y(1)) * &(&z(0) - &z(2)));
    let r1 = -&(&(&y(0) * &z(0)) - &(&y(1) * &z(1)));
    let r2 = -&(&(&y(0) * &z(0)) - &(&y(2) * &z(2)));
    let t_num = &(&r1 * &(&y(0) - &y(2))) - &(&(&y(0) - &y(1)) * &r2);
    let comps = (0..3).map(|i| &(&det * &y(i)) + &t_num).collect();
    map("psi", (p_lt_squared(), p_lt_squared_action()), (gm3_mod_gm(), gm3_mod_gm_action()), comps)
}

pub fn phi_link() -> Result<Link, MapError> {
    Ok(Link { id: "su3.phi", forward: phi()?, inverse: phi_inverse()?, parts: Vec::new() })
}

/// Link 3: `([y], [z]) ↦ [y ⊗ z]` in the coordinates `α_ij = A_i(y)A_j(z)`.
pub fn segre_link() -> Result<Link, MapError> {
    let n = 6;
    let (ay1, ay2) = a1a2(n, [0, 1, 2]);
    let (az1, az2) = a1a2(n, [3, 4, 5]);
    let segre = alloc::vec![&ay1 * &az1, &ay1 * &az2, &ay2 * &az1, &ay2 * &az2];
    // rows and columns of the rank-one matrix: y ∝ α₁₁D₁ + α₂₁D₂, z ∝ α₁₁D₁ + α₁₂D₂
    let m = 4;
    let mut inv = combine(&x(m, 0), &d1(), &x(m, 2), &d2());
    inv.extend(combine(&x(m, 0), &d1(), &x(m, 1), &d2()));
    Ok(Link {
        id: "su3.segre",
        forward: map("segre", (p_lt_squared(), p_lt_squared_action()), (quadric(), quadric_action()), segre)?,
        inverse: map("segre^-1", (quadric(), quadric_action()), (p_lt_squared(), p_lt_squared_action()), inv)?,
        parts: Vec::new(),
    })
}

/// Link 4: stereographic projection of `Q` from `(0:0:1:0)` followed by
/// dehomogenization at `β₁₂ = 1`, i.e. `(u, w) = (α₁₁/α₁₂, α₂₂/α₁₂)`.
pub fn stereo_link() -> Result<Link, MapError> {
    let m = 4;
    let fwd = alloc::vec![ratio(&x(m, 0), &x(m, 1)), ratio(&x(m, 3), &x(m, 1))];
    let n = 2;
    let back = alloc::vec![x(n, 0), RatFunc::one(n), &x(n, 0) * &x(n, 1), x(n, 1)];

    let p = 3;
    let stereo = alloc::vec![x(m, 0), x(m, 1), x(m, 3)];
    let section = alloc::vec![&x(p, 0) * &x(p, 1), &x(p, 1) * &x(p, 1), &x(p, 0) * &x(p, 2), &x(p, 2) * &x(p, 1)];
    let embed = alloc::vec![x(n, 0), RatFunc::one(n), x(n, 1)];
    let dehom = alloc::vec![ratio(&x(p, 0), &x(p, 1)), ratio(&x(p, 2), &x(p, 1))];
    Ok(Link {
        id: "su3.stereo",
        forward: map("stereo", (quadric(), quadric_action()), (v1122(), v1122_action()), fwd)?,
        inverse: map("stereo^-1", (v1122(), v1122_action()), (quadric(), quadric_action()), back)?,
        parts: alloc::vec![
            (
                map("projection", (quadric(), quadric_action()), (plane(), plane_action()), stereo)?,
                map("projection^-1", (plane(), plane_action()), (quadric(), quadric_action()), section)?,
            ),
            (
                map("embedding", (v1122(), v1122_action()), (plane(), plane_action()), embed)?,
                map("dehomogenization", (plane(), plane_action()), (v1122(), v1122_action()), dehom)?,
            ),
        ],
    })
}

/// Link 5: `(u, w) ↦ uD₂ + wD₁ ∈ Lt`, then `x ↦ √−3·x` onto `Lt'`.
pub fn linear_link() -> Result<Link, MapError> {
    let r = sqrt_minus_3();
    let r_inv = r.inv().expect("nonzero");
    let n = 2;
    let to_lt = combine(&x(n, 0), &d2(), &x(n, 1), &d1());
    let (a1, a2) = a1a2(3, [0, 1, 2]);
    let third = QuadExt::frac(1, 3);
    let from_lt = alloc::vec![a2.scale(&third), a1.scale(&third)];
    let scale = (0..3).map(|i| x(3, i).scale(&r)).collect::<Vec<_>>();
    let unscale = (0..3).map(|i| x(3, i).scale(&r_inv)).collect::<Vec<_>>();
    let fwd: Vec<RatFunc> = to_lt.iter().map(|c| c.scale(&r)).collect();
    let back = alloc::vec![a2.scale(&(&third * &r_inv)), a1.scale(&(&third * &r_inv))];
    Ok(Link {
        id: "su3.linear",
        forward: map("linear", (v1122(), v1122_action()), (lt_prime(), lt_prime_action()), fwd)?,
        inverse: map("linear^-1", (lt_prime(), lt_prime_action()), (v1122(), v1122_action()), back)?,
        parts: alloc::vec![
            (
                map("basis", (v1122(), v1122_action()), (lt(), lt_action()), to_lt)?,
                map("basis^-1", (lt(), lt_action()), (v1122(), v1122_action()), from_lt)?,
            ),
            (
                map("sqrt-3", (lt(), lt_action()), (lt_prime(), lt_prime_action()), scale)?,
                map("sqrt-3^-1", (lt_prime(), lt_prime_action()), (lt(), lt_action()), unscale)?,
            ),
        ],
    })
}

pub fn chain_links() -> Result<Vec<Link>, MapError> {
    Ok(alloc::vec![quotient_link()?, phi_link()?, segre_link()?, stereo_link()?, linear_link()?])
}

fn prefixed(prefix: &str, vs: Vec<Verdict>) -> impl Iterator<Item = Verdict> + '_ {
    vs.into_iter().map(move |mut v| {
        v.check = format!("{prefix}: {}", v.check);
        v
    })
}

/// Well-formedness, equivariance of both directions and the inverse pair.
pub fn pair_verdicts(f: &EquivMap, g: &EquivMap, ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
    let mut out = Vec::new();
    out.extend(prefixed(&f.name, f.check_well_formed(ctx)?));
    out.extend(prefixed(&g.name, g.check_well_formed(ctx)?));
    out.extend(prefixed(&f.name, f.check_equivariance(ctx)?));
    out.extend(prefixed(&g.name, g.check_equivariance(ctx)?));
    out.extend(f.check_inverse_pair(g, ctx)?);
    Ok(out)
}

pub fn link_verdicts(link: &Link, ctx: &CheckCtx) -> Result<Vec<Verdict>, MapError> {
    let mut out = pair_verdicts(&link.forward, &link.inverse, ctx)?;
    for (f, g) in &link.parts {
        out.extend(pair_verdicts(f, g, ctx)?);
    }
    Ok(out)
}

/// Composes the forward maps and, in reverse order, the inverses.
pub fn compose_chain(links: &[Link], limits: &Limits) -> Result<(EquivMap, EquivMap), MapError> {
    let mut fwd = links[0].forward.clone();
    let mut back = links[0].inverse.clone();
    for l in &links[1..] {
        fwd = fwd.then(&l.forward, limits)?;
        back = l.inverse.then(&back, limits)?;
    }
    fwd.name = String::from("chain");
    back.name = String::from("chain^-1");
    Ok((fwd, back))
}

/// Fixed values quoted for the individual links.
pub fn link_examples() -> Result<Vec<Verdict>, MapError> {
    let mut out = Vec::new();
    let ones = alloc::vec![q(1); 3];
    let quotient = map("quotient", (gm3_mod_gm(), gm3_mod_gm_action()), (t_prime(), t_prime_action()), quotient_map_components())?;
    out.push(Verdict::from_bool("quotient at [1:1:1]", quotient.eval(&ones)?.as_deref() == Some(&ones[..]), "[1:1:1] maps to (1,1,1)"));

    let p = [q(2), q(3), QuadExt::frac(1, 6)];
    let image = phi()?.eval(&p)?.unwrap_or_default();
    let y: Vec<QuadExt> = [5, 23, -28].iter().map(|&k| QuadExt::frac(k, 18)).collect();
    let z: Vec<QuadExt> = [-32, -35, 67].iter().map(|&k| QuadExt::frac(k, 18)).collect();
    let expected: Vec<QuadExt> = y.iter().chain(&z).cloned().collect();
    let sums_zero =
        image.len() == 6 && image[..3].iter().fold(q(0), |a, b| &a + b).is_zero() && image[3..].iter().fold(q(0), |a, b| &a + b).is_zero();
    out.push(Verdict::from_bool(
        "phi at (2, 3, 1/6)",
        p_lt_squared().points_equal(&image, &expected) && sums_zero,
        "classes of (5, 23, -28)/18 and (-32, -35, 67)/18, both summing to zero",
    ));
    let back = phi_inverse()?.eval(&image)?.unwrap_or_default();
    out.push(Verdict::from_bool("psi recovers [2 : 3 : 1/6]", gm3_mod_gm().points_equal(&back, &p), "psi(phi(x)) = x at the sample point"));

    let section = &stereo_link()?.parts[0].1;
    let got = section.eval(&[q(1), q(2), q(6)])?.unwrap_or_default();
    let want = [q(1), q(2), q(3), q(6)];
    out.push(Verdict::from_bool(
        "stereographic section at (1 : 2 : 6)",
        quadric().points_equal(&got, &want) && quadric().contains(&got)?,
        "(1 : 2 : 3 : 6), on Q since 1·6 = 2·3",
    ));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> CheckCtx {
        let mut c = CheckCtx::new(42);
        c.trials = 10;
        c.relation_trials = 10;
        c
    }

    #[test]
    fn examples_hold() {
        for v in link_examples().unwrap() {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn chain_certifies_end_to_end() {
        let c = ctx();
        let (f, g) = compose_chain(&chain_links().unwrap(), &c.limits).unwrap();
        for v in pair_verdicts(&f, &g, &c).unwrap() {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn each_link_certifies() {
        for link in chain_links().unwrap() {
            for v in link_verdicts(&link, &ctx()).unwrap() {
                assert!(v.pass, "{}: {v:?}", link.id);
            }
        }
    }
}
