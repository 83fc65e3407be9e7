//! The conic `C`, its group law and parameterization, and the surfaces
//! `X ⊂ (ℙ¹)³`, `Y ⊂ ℙ³` and the quadric `Q ⊂ ℙ³`.
//!
//! Conic points are stored as `(t₀, t₁, t₂)`; the parameterization
//! `[u, v] ↦ [u²−v², 2uv, u²+v²]` therefore lists `(t₁, t₂, t₀)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::field::{random_rational, QuadExt};
use crate::poly::{Limits, PolyError, SparsePoly};
use crate::ratmap::{CheckCtx, Factor, VarietyError, VarietySpec, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("defining polynomial of {0} is not homogeneous in each projective factor")]
    NotHomogeneous(String),
    #[error("candidate {index} is not a point of {surface}")]
    NotOnSurface { surface: String, index: usize },
}

/// A hypersurface in a product of projective spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    pub name: String,
    pub ambient: VarietySpec,
    pub poly: SparsePoly,
}

impl SurfaceSpec {
    pub fn new(name: &str, ambient: VarietySpec, poly: SparsePoly) -> Result<Self, SurfaceError> {
        if poly.nvars() != ambient.nvars() {
            return Err(VarietyError::Arity { expected: ambient.nvars(), got: poly.nvars() }.into());
        }
        for (r, f) in ambient.blocks() {
            if f.is_projective() && !poly.is_homogeneous_in(&r.collect::<Vec<_>>()) {
                return Err(SurfaceError::NotHomogeneous(name.to_string()));
            }
        }
        Ok(SurfaceSpec { name: name.to_string(), ambient, poly })
    }

    pub fn nvars(&self) -> usize {
        self.ambient.nvars()
    }

    pub fn gradient(&self) -> Vec<SparsePoly> {
        (0..self.nvars()).map(|i| self.poly.derivative(i)).collect()
    }
}

fn pn(n: usize) -> Factor {
    Factor::projective(Factor::Affine(n + 1))
}

fn var(n: usize, i: usize) -> SparsePoly {
    SparsePoly::var(n, i)
}

fn mul(ps: &[&SparsePoly]) -> SparsePoly {
    let n = ps[0].nvars();
    ps.iter().fold(SparsePoly::one(n), |acc, p| &acc * *p)
}

/// `X = {x·y·z = 1} ⊂ (ℙ¹)³`: `uu′v″ − vv′v″ + uv′u″ + u′vu″ = 0`.
pub fn surface_x() -> SurfaceSpec {
    let n = 6;
    let amb = VarietySpec::new("(P1)^3", alloc::vec![pn(1), pn(1), pn(1)], &["u", "v", "u'", "v'", "u''", "v''"]).expect("valid");
    let [u, v, u1, v1, u2, v2] = core::array::from_fn(|i| var(n, i));
    let p = &(&(&mul(&[&u, &u1, &v2]) - &mul(&[&v, &v1, &v2])) + &mul(&[&u, &v1, &u2])) + &mul(&[&u1, &v, &u2]);
    SurfaceSpec::new("X", amb, p).expect("X is trihomogeneous")
}

/// `Y: t₁t₂t₃ − t₀³ = 0` in `ℙ³`.
pub fn surface_y() -> SurfaceSpec {
    let n = 4;
    let amb = VarietySpec::new("P3", alloc::vec![pn(3)], &["t0", "t1", "t2", "t3"]).expect("valid");
    let [t0, t1, t2, t3] = core::array::from_fn(|i| var(n, i));
    let p = &mul(&[&t1, &t2, &t3]) - &mul(&[&t0, &t0, &t0]);
    SurfaceSpec::new("Y", amb, p).expect("Y is homogeneous")
}

/// `Q: α₁₁α₂₂ − α₁₂α₂₁ = 0` in `ℙ³`.
pub fn surface_q() -> SurfaceSpec {
    let n = 4;
    let amb = VarietySpec::new("P3", alloc::vec![pn(3)], &["a11", "a12", "a21", "a22"]).expect("valid");
    let [a11, a12, a21, a22] = core::array::from_fn(|i| var(n, i));
    SurfaceSpec::new("Q", amb, &(&a11 * &a22) - &(&a12 * &a21)).expect("Q is homogeneous")
}

/// `C: t₁² + t₂² − t₀² = 0` in `ℙ²`.
pub fn conic() -> SurfaceSpec {
    let n = 3;
    let amb = VarietySpec::new("P2", alloc::vec![pn(2)], &["t0", "t1", "t2"]).expect("valid");
    let [t0, t1, t2] = core::array::from_fn(|i| var(n, i));
    SurfaceSpec::new("C", amb, &(&(&t1 * &t1) + &(&t2 * &t2)) - &(&t0 * &t0)).expect("C is homogeneous")
}

pub fn surface_membership(s: &SurfaceSpec, p: &[QuadExt]) -> Result<bool, SurfaceError> {
    if !s.ambient.contains(p)? {
        return Ok(false);
    }
    Ok(s.poly.eval(p)?.is_zero())
}

/// For each candidate, whether every partial derivative vanishes there.
pub fn singular_points(s: &SurfaceSpec, candidates: &[Vec<QuadExt>]) -> Result<Vec<bool>, SurfaceError> {
    let grad = s.gradient();
    candidates
        .iter()
        .enumerate()
        .map(|(index, p)| {
            if !surface_membership(s, p)? {
                return Err(SurfaceError::NotOnSurface { surface: s.name.clone(), index });
            }
            grad.iter().try_fold(true, |acc, g| Ok(acc && g.eval(p)?.is_zero()))
        })
        .collect()
}

/// Substitutes `subst[i]` for variable `i`.
pub fn substitute(p: &SparsePoly, subst: &[SparsePoly], limits: &Limits) -> Result<SparsePoly, PolyError> {
    if subst.len() != p.nvars() {
        return Err(PolyError::Arity { expected: p.nvars(), got: subst.len() });
    }
    let m = subst.first().map_or(0, SparsePoly::nvars);
    let mut out = SparsePoly::zero(m);
    for (e, c) in p.terms() {
        let mut t = SparsePoly::constant(m, c.clone());
        for (s, &k) in subst.iter().zip(e.iter()) {
            if k > 0 {
                t = t.mul_bounded(&s.pow_bounded(u32::from(k), limits)?, limits)?;
            }
        }
        out = &out + &t;
    }
    Ok(out)
}

/// `[u, v]·[u′, v′] = [uu′ − vv′, uv′ + u′v]`.
pub fn law(x: &[SparsePoly; 2], y: &[SparsePoly; 2]) -> [SparsePoly; 2] {
    let [u, v] = x;
    let [u1, v1] = y;
    [&(u * u1) - &(v * v1), &(u * v1) + &(u1 * v)]
}

/// `[u, v] ↦ (t₀, t₁, t₂) = (u² + v², u² − v², 2uv)`.
pub fn parameterize(x: &[SparsePoly; 2]) -> [SparsePoly; 3] {
    let [u, v] = x;
    let two = QuadExt::from_i64(2);
    [&(u * u) + &(v * v), &(u * u) - &(v * v), (u * v).scale(&two)]
}

/// Product on `C` written as points `a + bi ↦ [a, b, 1]`: in `(t₀, t₁, t₂)`,
/// `(c, a, b)·(c′, a′, b′) = (cc′, aa′ − bb′, ab′ + a′b)`.
pub fn conic_mul(p: &[SparsePoly; 3], q: &[SparsePoly; 3]) -> [SparsePoly; 3] {
    [&p[0] * &q[0], &(&p[1] * &q[1]) - &(&p[2] * &q[2]), &(&p[1] * &q[2]) + &(&q[1] * &p[2])]
}

fn pair(n: usize, i: usize) -> [SparsePoly; 2] {
    [var(n, i), var(n, i + 1)]
}

fn projectively_equal(a: &[SparsePoly], b: &[SparsePoly]) -> bool {
    a.iter().any(|x| !x.is_zero())
        && b.iter().any(|x| !x.is_zero())
        && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| &a[i] * &b[j] == &a[j] * &b[i]))
}

/// Identities of the conic group law, all as exact polynomial identities.
pub fn conic_suite(limits: &Limits) -> Result<Vec<Verdict>, SurfaceError> {
    let mut out = Vec::new();
    let c = conic();

    // The parameterization lands on C.
    let x2 = pair(2, 0);
    let on_c = substitute(&c.poly, &parameterize(&x2), limits)?;
    out.push(Verdict::from_bool("f lands on C", on_c.is_zero(), "(u²−v²)² + (2uv)² − (u²+v²)² = 0"));

    // The displayed expansion, transcribed term by term in u, v, u′, v′.
    let n = 4;
    let (x, y) = (pair(n, 0), pair(n, 2));
    let [u, v] = &x;
    let [u1, v1] = &y;
    let two = QuadExt::from_i64(2);
    let four = QuadExt::from_i64(4);
    let a = &(u * u1) - &(v * v1);
    let b = &(u * v1) + &(u1 * v);
    let displayed_left = [&(&a * &a) + &(&b * &b), &(&a * &a) - &(&b * &b), (&a * &b).scale(&two)];
    let (uu, vv, uu1, vv1) = (u * u, v * v, u1 * u1, v1 * v1);
    let displayed_right = [
        &(&uu + &vv) * &(&uu1 + &vv1),
        &(&(&uu - &vv) * &(&uu1 - &vv1)) - &mul(&[u, v, u1, v1]).scale(&four),
        &(&(&uu - &vv) * &(u1 * v1).scale(&two)) + &(&(&uu1 - &vv1) * &(u * v).scale(&two)),
    ];
    let f_of_product = parameterize(&law(&x, &y));
    out.push(Verdict::from_bool(
        "f(x·y) equals the displayed expansion",
        f_of_product == displayed_left && displayed_left == displayed_right,
        "both displayed lines agree with f([uu′−vv′, uv′+u′v]) coefficient by coefficient",
    ));
    out.push(Verdict::from_bool(
        "f is a homomorphism",
        conic_mul(&parameterize(&x), &parameterize(&y)) == displayed_right,
        "f(x)·f(y) expands to the displayed right-hand side",
    ));
    let on_c_product = substitute(&c.poly, &f_of_product, limits)?;
    out.push(Verdict::from_bool("f(x·y) lies on C", on_c_product.is_zero(), "exact in u, v, u′, v′"));

    // Identity and inverse.
    let e = [SparsePoly::one(n), SparsePoly::zero(n)];
    out.push(Verdict::from_bool("identity law", law(&e, &x) == x && law(&x, &e) == x, "[1,0]·[u,v] = [u,v]·[1,0] = [u,v]"));
    let f_e = parameterize(&[SparsePoly::one(1), SparsePoly::zero(1)]);
    out.push(Verdict::from_bool(
        "f([1,0]) = [1,0,1]",
        f_e == [SparsePoly::one(1), SparsePoly::one(1), SparsePoly::zero(1)],
        "(t₀, t₁, t₂) = (1, 1, 0), i.e. [1, 0, 1] in the displayed order",
    ));
    let x_inv = [u.clone(), -v];
    let prod = law(&x, &x_inv);
    out.push(Verdict::from_bool(
        "inverse law",
        prod[0] == &uu + &vv && prod[1].is_zero() && projectively_equal(&prod, &e),
        format!(
            "[u,v]·[u,−v] = [{}, {}] ~ [1, 0]",
            prod[0].display_with(&["u", "v", "u′", "v′"]),
            prod[1].display_with(&["u", "v", "u′", "v′"])
        ),
    ));

    // Associativity and commutativity.
    let n = 6;
    let (x, y, z) = (pair(n, 0), pair(n, 2), pair(n, 4));
    out.push(Verdict::from_bool("associativity", law(&law(&x, &y), &z) == law(&x, &law(&y, &z)), "exact in six variables"));
    let (x, y) = (pair(4, 0), pair(4, 2));
    out.push(Verdict::from_bool("commutativity", law(&x, &y) == law(&y, &x), "exact in four variables"));

    // C is smooth at [1, 1, 0].
    let p = [QuadExt::one(), QuadExt::one(), QuadExt::zero()];
    let sing = singular_points(&c, &[p.to_vec()])?;
    out.push(Verdict::from_bool("C nonsingular at [1,1,0]", sing == [false], "gradient (−2t₀, 2t₁, 2t₂) = (−2, 2, 0)"));
    Ok(out)
}

fn q(n: i64) -> QuadExt {
    QuadExt::from_i64(n)
}

fn random_nonzero<R: Rng + ?Sized>(rng: &mut R) -> QuadExt {
    loop {
        let r = random_rational(rng, 24);
        if !r.is_zero() {
            return QuadExt::rational(r);
        }
    }
}

/// A random `[u, v]` with `u² + v² ≠ 0`; over ℚ that is any nonzero pair.
fn random_circle_point<R: Rng + ?Sized>(rng: &mut R) -> [QuadExt; 2] {
    [random_nonzero(rng), QuadExt::rational(random_rational(rng, 24))]
}

fn law_at(x: &[QuadExt; 2], y: &[QuadExt; 2]) -> [QuadExt; 2] {
    [&(&x[0] * &y[0]) - &(&x[1] * &y[1]), &(&x[0] * &y[1]) + &(&y[0] * &x[1])]
}

/// Membership of `X` at the base point and at `(x, y, (x·y)⁻¹)` for random
/// `x, y`.
pub fn x_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, SurfaceError> {
    let x = surface_x();
    let mut out = Vec::new();
    let e = [q(1), q(0), q(1), q(0), q(1), q(0)];
    out.push(Verdict::from_bool("X contains ((1,0),(1,0),(1,0))", surface_membership(&x, &e)?, "all v-coordinates vanish"));
    let mut rng = ctx.rng("appendix.X");
    let mut failures = 0;
    let mut witness = None;
    for _ in 0..ctx.trials {
        let (a, b) = (random_circle_point(&mut rng), random_circle_point(&mut rng));
        let ab = law_at(&a, &b);
        let z = [ab[0].clone(), -&ab[1]];
        let p: Vec<QuadExt> = a.iter().chain(&b).chain(&z).cloned().collect();
        if !surface_membership(&x, &p)? {
            failures += 1;
            witness.get_or_insert(p);
        }
    }
    out.push(
        Verdict::from_bool("X contains (x, y, (x·y)^-1)", failures == 0, format!("{failures} failures in {} random triples", ctx.trials))
            .with_witness(witness),
    );
    Ok(out)
}

pub fn y_singular_candidates() -> Vec<Vec<QuadExt>> {
    (1..4).map(|i| (0..4).map(|j| q(i64::from(i == j))).collect()).collect()
}

/// Membership and smoothness of `Y` at 20 random points `[1, a, b, c]`,
/// `abc = 1`.
pub fn y_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, SurfaceError> {
    let y = surface_y();
    let mut rng = ctx.rng("appendix.Y");
    let pts: Vec<Vec<QuadExt>> = (0..20)
        .map(|_| {
            let (a, b) = (random_nonzero(&mut rng), random_nonzero(&mut rng));
            let c = (&a * &b).inv().expect("nonzero");
            alloc::vec![q(1), a, b, c]
        })
        .collect();
    let members = pts.iter().map(|p| surface_membership(&y, p)).collect::<Result<Vec<_>, _>>()?;
    let sing = singular_points(&y, &pts)?;
    Ok(alloc::vec![
        Verdict::from_bool("Y contains [1, a, b, 1/(ab)]", members.iter().all(|&m| m), format!("{} random points", pts.len())),
        Verdict::from_bool(
            "Y nonsingular at random points",
            sing.iter().all(|&s| !s),
            format!("{} of {} flagged singular", sing.iter().filter(|&&s| s).count(), pts.len()),
        ),
    ])
}

/// The three coordinate points of `Y`, the off-surface precondition, and
/// the gradient of the quadric.
pub fn y_singular_suite(ctx: &CheckCtx) -> Result<Vec<Verdict>, SurfaceError> {
    let y = surface_y();
    let cands = y_singular_candidates();
    let sing = singular_points(&y, &cands)?;
    let mut out = alloc::vec![Verdict::from_bool(
        "Y singular at the three coordinate points",
        sing == [true, true, true],
        "gradient (−3t₀², t₂t₃, t₁t₃, t₁t₂) vanishes at [0,1,0,0], [0,0,1,0], [0,0,0,1]",
    )];
    let off = alloc::vec![q(1), q(0), q(0), q(0)];
    out.push(Verdict::from_bool(
        "off-surface candidate rejected",
        matches!(singular_points(&y, &[off]), Err(SurfaceError::NotOnSurface { index: 0, .. })),
        "[1,0,0,0] is not on Y",
    ));
    let qs = surface_q();
    let mut rng = ctx.rng("appendix.Q");
    let pts: Vec<Vec<QuadExt>> = (0..20)
        .map(|_| {
            let (a, b) = (random_circle_point(&mut rng), random_circle_point(&mut rng));
            alloc::vec![&a[0] * &b[0], &a[0] * &b[1], &a[1] * &b[0], &a[1] * &b[1]]
        })
        .collect();
    let sing = singular_points(&qs, &pts)?;
    out.push(Verdict::from_bool("Q nonsingular at Segre points", sing.iter().all(|&s| !s), "gradient (α₂₂, −α₂₁, −α₁₂, α₁₁) is nonzero"));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_identities() {
        for v in conic_suite(&Limits::default()).unwrap() {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn surfaces() {
        let ctx = CheckCtx::new(42);
        for v in x_suite(&ctx).unwrap().into_iter().chain(y_suite(&ctx).unwrap()).chain(y_singular_suite(&ctx).unwrap()) {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn x_rejects_non_identity_product() {
        // (x, x, x) with x = [1, 1]: x³ = [−2, 2] is not the identity.
        let p = [q(1), q(1), q(1), q(1), q(1), q(1)];
        assert!(!surface_membership(&surface_x(), &p).unwrap());
    }

    #[test]
    fn inhomogeneous_surface_rejected() {
        let amb = VarietySpec::new("P1", alloc::vec![pn(1)], &["u", "v"]).unwrap();
        let p = &var(2, 0) + &SparsePoly::one(2);
        assert!(matches!(SurfaceSpec::new("bad", amb, p), Err(SurfaceError::NotHomogeneous(_))));
    }

    #[test]
    fn arity_mismatch_is_an_error() {
        assert!(surface_membership(&surface_y(), &[q(1)]).is_err());
    }
}
