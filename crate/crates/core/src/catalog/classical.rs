//! Cayley transforms of classical groups `G = {a : aᶥa = 1}` and the
//! PGLₙ map.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use super::matrix::Matrix;
use crate::field::{QuadExt, QuadField};
use crate::group::{ActionGen, ActionTable, GroupSpec, Perm};
use crate::poly::{RatFunc, SparsePoly};
use crate::ratmap::{Certificate, CheckCtx, EquivMap, Factor, MapError, VarietySpec, Verdict};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CayleyError {
    #[error("1 + a is singular: the point lies on the exceptional locus")]
    Exceptional,
    #[error("input is not in the group; residual aᶥa - 1 = {0}")]
    NotInGroup(Matrix),
    #[error("input is not in the Lie algebra; residual xᶥ + x = {0}")]
    NotInLie(Matrix),
    #[error("bad form: {0}")]
    BadForm(String),
}

/// The involution `ι` of the matrix algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Involution {
    /// `aᶥ = H⁻¹aᵀH`, `H` symmetric.
    Transpose(Matrix),
    /// `aᶥ = H⁻¹γ(a)ᵀH`, `H = γ(H)ᵀ`.
    Hermitian(Matrix),
    /// `aᶥ = J⁻¹aᵀJ`, `J` antisymmetric.
    Symplectic(Matrix),
}

#[derive(Clone, Debug)]
pub struct MatrixAlg {
    pub field: QuadField,
    pub involution: Involution,
    form_inv: Matrix,
}

impl MatrixAlg {
    pub fn new(involution: Involution, field: QuadField) -> Result<Self, CayleyError> {
        let form = match &involution {
            Involution::Transpose(h) => {
                if h.transpose() != *h {
                    return Err(CayleyError::BadForm(format!("{h} is not symmetric")));
                }
                h
            }
            Involution::Hermitian(h) => {
                if h.conjugate().transpose() != *h {
                    return Err(CayleyError::BadForm(format!("{h} is not Hermitian")));
                }
                h
            }
            Involution::Symplectic(j) => {
                if j.transpose() != -j {
                    return Err(CayleyError::BadForm(format!("{j} is not antisymmetric")));
                }
                j
            }
        };
        let form_inv = form.inverse().ok_or_else(|| CayleyError::BadForm(format!("{form} is singular")))?;
        Ok(MatrixAlg { field, involution, form_inv })
    }

    pub fn n(&self) -> usize {
        self.form().n()
    }

    pub fn form(&self) -> &Matrix {
        match &self.involution {
            Involution::Transpose(h) | Involution::Hermitian(h) | Involution::Symplectic(h) => h,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.involution {
            Involution::Transpose(_) => "orthogonal",
            Involution::Hermitian(_) => "unitary",
            Involution::Symplectic(_) => "symplectic",
        }
    }

    /// Whether matrices live over ℚ (the γ-twisted unitary case needs ℚ(√d)).
    fn rational_only(&self) -> bool {
        !matches!(self.involution, Involution::Hermitian(_))
    }

    pub fn iota(&self, a: &Matrix) -> Matrix {
        let t = match self.involution {
            Involution::Hermitian(_) => a.conjugate().transpose(),
            _ => a.transpose(),
        };
        &(&self.form_inv * &t) * self.form()
    }

    /// `(m - mᶥ)/2`, a random element of the Lie algebra.
    pub fn random_skew<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        let m = Matrix::random_integral(rng, self.n(), self.field, self.rational_only(), SPAN);
        (&m - &self.iota(&m)).scale(&QuadExt::frac(1, 2))
    }

    /// A random group element, the transform of a random skew element.
    pub fn random_group_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Matrix {
        loop {
            if let Ok(a) = cayley_inverse(self, &self.random_skew(rng)) {
                return a;
            }
        }
    }
}

fn transform(a: &Matrix) -> Result<Matrix, CayleyError> {
    let one = Matrix::identity(a.n());
    let inv = (&one + a).inverse().ok_or(CayleyError::Exceptional)?;
    Ok(&(&one - a) * &inv)
}

/// `x = (1 - a)(1 + a)⁻¹` for `a` in the group; lands in the Lie algebra.
pub fn cayley_transform(alg: &MatrixAlg, a: &Matrix) -> Result<Matrix, CayleyError> {
    let residual = &(&alg.iota(a) * a) - &Matrix::identity(a.n());
    if !residual.is_zero() {
        return Err(CayleyError::NotInGroup(residual));
    }
    transform(a)
}

/// The same formula on the Lie algebra side, returning a group element.
pub fn cayley_inverse(alg: &MatrixAlg, x: &Matrix) -> Result<Matrix, CayleyError> {
    let residual = &alg.iota(x) + x;
    if !residual.is_zero() {
        return Err(CayleyError::NotInLie(residual));
    }
    transform(x)
}

/// `C(g a g⁻¹) = g C(a) g⁻¹`. Both `a` and `g` must lie in the group; then
/// `g⁻¹ = gᶥ` and `g a g⁻¹` lies in the group as well.
pub fn cayley_conjugation_equivariance(alg: &MatrixAlg, a: &Matrix, g: &Matrix) -> Result<bool, CayleyError> {
    conjugation_equivariance_at(alg, a, &cayley_transform(alg, a)?, g)
}

/// As above with `x = C(a)` already computed.
fn conjugation_equivariance_at(alg: &MatrixAlg, a: &Matrix, x: &Matrix, g: &Matrix) -> Result<bool, CayleyError> {
    let ginv = alg.iota(g);
    let residual = &(&ginv * g) - &Matrix::identity(g.n());
    if !residual.is_zero() {
        return Err(CayleyError::NotInGroup(residual));
    }
    let rhs = &(g * x) * &ginv;
    let lhs = transform(&(&(g * a) * &ginv))?;
    Ok(lhs == rhs)
}

/// Standard symplectic form `[[0, I], [-I, 0]]` on `n = 2m` coordinates.
pub fn standard_symplectic(n: usize) -> Matrix {
    assert!(n.is_multiple_of(2), "symplectic forms need even size");
    let m = n / 2;
    let mut j = Matrix::zero(n);
    for i in 0..m {
        j[(i, m + i)] = QuadExt::one();
        j[(m + i, i)] = QuadExt::from_i64(-1);
    }
    j
}

/// Coefficient range for random forms and Lie algebra elements.
const SPAN: i64 = 3;

/// A random invertible symmetric (or Hermitian) form `P*·D·P`, with `P`
/// unipotent upper triangular and `D` diagonal with small nonzero integer
/// entries; `det H = det D` keeps inverses small.
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, n: usize, field: QuadField, hermitian: bool) -> Matrix {
    let mut p = Matrix::random_integral(rng, n, field, !hermitian, SPAN);
    for i in 0..n {
        for j in 0..=i {
            p[(i, j)] = if i == j { QuadExt::one() } else { QuadExt::zero() };
        }
    }
    let d: Vec<QuadExt> = (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=2);
            QuadExt::from_i64(if rng.gen_bool(0.5) { k } else { -k })
        })
        .collect();
    let pstar = if hermitian { p.conjugate().transpose() } else { p.transpose() };
    &(&pstar * &Matrix::diag(&d)) * &p
}

/// Round trips, skewness and conjugation equivariance for one algebra.
pub fn classical_verdicts(alg: &MatrixAlg, label: &str, ctx: &CheckCtx) -> Vec<Verdict> {
    let mut rng = ctx.rng(label);
    let mut out = Vec::new();

    let mut anti = true;
    for _ in 0..10 {
        let a = Matrix::random(&mut rng, alg.n(), alg.field, alg.rational_only());
        let b = Matrix::random(&mut rng, alg.n(), alg.field, alg.rational_only());
        anti &= alg.iota(&(&a * &b)) == &alg.iota(&b) * &alg.iota(&a) && alg.iota(&alg.iota(&a)) == a;
    }
    out.push(Verdict::from_bool(format!("{label}: involution"), anti, "ι(ab) = ι(b)ι(a) and ι² = id on random pairs"));

    let (mut round, mut skew, mut equiv) = (None, None, None);
    // Each trial conjugates by the previous trial's independent sample.
    let mut g = alg.random_group_point(&mut rng);
    for _ in 0..ctx.trials {
        let a = alg.random_group_point(&mut rng);
        let x = match cayley_transform(alg, &a) {
            Ok(x) => x,
            Err(e) => {
                round.get_or_insert(format!("transform failed at {a}: {e}"));
                continue;
            }
        };
        if !(&alg.iota(&x) + &x).is_zero() {
            skew.get_or_insert(format!("xᶥ + x ≠ 0 for x = {x}"));
        }
        match cayley_inverse(alg, &x) {
            Ok(back) if back == a => {}
            _ => {
                round.get_or_insert(format!("round trip differs at a = {a}"));
            }
        }
        match conjugation_equivariance_at(alg, &a, &x, &g) {
            Ok(true) | Err(CayleyError::Exceptional) => {}
            Ok(false) => {
                equiv.get_or_insert(format!("C(gag⁻¹) ≠ gC(a)g⁻¹ at a = {a}, g = {g}"));
            }
            Err(e) => {
                equiv.get_or_insert(e.to_string());
            }
        }
        g = a;
    }
    let n = ctx.trials;
    for (name, fail, ok) in [
        ("round trips", round, format!("{n} exact round trips a -> x -> a")),
        ("skewness", skew, format!("xᶥ = -x for {n} transforms")),
        ("conjugation equivariance", equiv, format!("C(gag⁻¹) = gC(a)g⁻¹ for {n} random pairs")),
    ] {
        out.push(match fail {
            None => Verdict::pass(format!("{label}: {name}"), ok),
            Some(why) => Verdict::fail(format!("{label}: {name}"), why),
        });
    }
    out
}

/// Spot values: the identity maps to 0, and the fixed examples.
pub fn classical_examples() -> Vec<Verdict> {
    let mut out = Vec::new();
    let sp = MatrixAlg::new(Involution::Symplectic(standard_symplectic(2)), QuadField::EISENSTEIN).expect("standard form");
    let a = Matrix::from_i64(&[&[0, 1], &[-1, 0]]);
    let x = cayley_transform(&sp, &a);
    let expected = Matrix::from_i64(&[&[0, -1], &[1, 0]]);
    out.push(Verdict::from_bool(
        "sp2 example",
        x.as_ref() == Ok(&expected) && expected.trace().is_zero(),
        format!("C([[0,1],[-1,0]]) = {}", x.map(|m| m.to_string()).unwrap_or_else(|e| e.to_string())),
    ));
    out.push(Verdict::from_bool("identity", cayley_transform(&sp, &Matrix::identity(2)).map(|m| m.is_zero()).unwrap_or(false), "C(1) = 0"));
    let field = QuadField::EISENSTEIN;
    let z = field.zeta().expect("cube root of unity");
    let u = MatrixAlg::new(Involution::Hermitian(Matrix::identity(3)), field).expect("identity form");
    let a = Matrix::diag(&[z.clone(), &z * &z, QuadExt::one()]);
    let ok = match cayley_transform(&u, &a) {
        Ok(x) => {
            let diagonal = (0..3).all(|i| (0..3).all(|j| i == j || x[(i, j)].is_zero()));
            diagonal && (&u.iota(&x) + &x).is_zero() && cayley_inverse(&u, &x).as_ref() == Ok(&a)
        }
        Err(_) => false,
    };
    out.push(Verdict::from_bool("unitary diag(ζ, ζ², 1)", ok, "skew-Hermitian diagonal image, exact round trip"));
    out
}

fn pgl_coords(n: usize) -> Vec<String> {
    (0..n).flat_map(|i| (0..n).map(move |j| format!("a{}{}", i + 1, j + 1))).collect()
}

fn pgl_table(n: usize, projective: bool) -> ActionTable {
    let entries: Vec<(String, ActionGen)> = (1..n)
        .map(|i| {
            let sigma = Perm::transposition(n, i - 1, i);
            // conjugation by a permutation matrix moves entry (i, j) to (σi, σj)
            let images = (0..n * n).map(|k| sigma.image(k / n) * n + sigma.image(k % n)).collect();
            let g = ActionGen::permutation(Perm::from_images(images).expect("bijection"));
            (format!("s{i}"), if projective { g.on_classes() } else { g })
        })
        .collect();
    let refs = entries.iter().map(|(l, g)| (l.as_str(), g.clone())).collect();
    ActionTable::new(refs)
}

/// The PGLₙ Cayley map `[a] ↦ (n / tr a)·a − 1` into traceless matrices and
/// its inverse `x ↦ [x + 1]`, equivariant for Sₙ acting by conjugation with
/// permutation matrices.
pub fn pgl_cayley(n: usize) -> Result<(EquivMap, EquivMap), MapError> {
    let m = n * n;
    let names = pgl_coords(n);
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let source = VarietySpec::new(&format!("P(M{n})"), alloc::vec![Factor::projective(Factor::Affine(m))], &refs)?;
    let trace = (0..n).fold(SparsePoly::zero(m), |acc, i| &acc + &SparsePoly::var(m, i * n + i));
    let target = VarietySpec::new(&format!("sl{n}"), alloc::vec![Factor::Affine(m)], &refs)?.with_hypersurface(trace.clone(), m - 1)?;
    let group = GroupSpec::symmetric(n);
    let nn = QuadExt::from_i64(n as i64);
    let tr = RatFunc::from_poly(trace);
    let forward: Vec<RatFunc> = (0..m)
        .map(|k| {
            let scaled = RatFunc::var(m, k).scale(&nn).checked_div(&tr).expect("nonzero trace");
            if k % (n + 1) == 0 {
                &scaled - &RatFunc::one(m)
            } else {
                scaled
            }
        })
        .collect();
    let backward: Vec<RatFunc> =
        (0..m).map(|k| if k % (n + 1) == 0 { &RatFunc::var(m, k) + &RatFunc::one(m) } else { RatFunc::var(m, k) }).collect();
    let f =
        EquivMap::new(&format!("pgl{n}"), source.clone(), target.clone(), forward, group.clone(), pgl_table(n, true), pgl_table(n, false))?;
    let g = EquivMap::new(&format!("pgl{n}^-1"), target, source, backward, group, pgl_table(n, false), pgl_table(n, true))?;
    Ok((f, g))
}

pub fn pgl_certificate(n: usize, id: &str, anchors: &[&str], ctx: &CheckCtx) -> Result<Certificate, MapError> {
    let mut cert = Certificate::new(id, anchors);
    let (f, g) = pgl_cayley(n)?;
    cert.extend(f.check_well_formed(ctx)?);
    cert.extend(f.check_equivariance(ctx)?);
    cert.extend(g.check_equivariance(ctx)?);
    cert.extend(f.check_inverse_pair(&g, ctx)?);
    if n == 3 {
        let a: Vec<QuadExt> = [2, 0, 0, 0, 1, 0, 0, 0, 1].iter().map(|&k| QuadExt::from_i64(k)).collect();
        let expected: Vec<QuadExt> =
            [(1, 2), (0, 1), (0, 1), (0, 1), (-1, 4), (0, 1), (0, 1), (0, 1), (-1, 4)].iter().map(|&(p, q)| QuadExt::frac(p, q)).collect();
        let got = f.eval(&a)?;
        cert.push(Verdict::from_bool("example diag(2,1,1)", got.as_deref() == Some(&expected[..]), "maps to diag(1/2, -1/4, -1/4)"));
    }
    let one: Vec<QuadExt> = (0..n * n).map(|k| if k % (n + 1) == 0 { QuadExt::one() } else { QuadExt::zero() }).collect();
    let at_one = f.eval(&one)?;
    cert.push(Verdict::from_bool("base point", at_one.is_some_and(|v| v.iter().all(QuadExt::is_zero)), "[1] maps to 0"));
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples_pass() {
        for v in classical_examples() {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn not_in_group_reports_residual() {
        let alg = MatrixAlg::new(Involution::Transpose(Matrix::identity(2)), QuadField::GAUSSIAN).unwrap();
        let err = cayley_transform(&alg, &Matrix::from_i64(&[&[2, 0], &[0, 1]])).unwrap_err();
        assert_eq!(err, CayleyError::NotInGroup(Matrix::from_i64(&[&[3, 0], &[0, 0]])));
        // -1 is orthogonal but 1 + (-1) is singular
        let minus = Matrix::identity(2).scale(&QuadExt::from_i64(-1));
        assert_eq!(cayley_transform(&alg, &minus), Err(CayleyError::Exceptional));
    }

    #[test]
    fn bad_forms_rejected() {
        let f = QuadField::EISENSTEIN;
        assert!(MatrixAlg::new(Involution::Transpose(Matrix::from_i64(&[&[1, 2], &[3, 4]])), f).is_err());
        assert!(MatrixAlg::new(Involution::Symplectic(Matrix::identity(2)), f).is_err());
        assert!(MatrixAlg::new(Involution::Transpose(Matrix::from_i64(&[&[1, 1], &[1, 1]])), f).is_err());
    }

    #[test]
    fn small_suite_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut ctx = CheckCtx::new(3);
        ctx.trials = 10;
        let h = random_form(&mut rng, 3, QuadField::GAUSSIAN, true);
        let alg = MatrixAlg::new(Involution::Hermitian(h), QuadField::GAUSSIAN).unwrap();
        for v in classical_verdicts(&alg, "u3", &ctx) {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn pgl2_certifies() {
        let mut ctx = CheckCtx::new(5);
        ctx.trials = 20;
        let cert = pgl_certificate(2, "pgl2", &[], &ctx).unwrap();
        for v in &cert.verdicts {
            assert!(v.pass, "{v:?}");
        }
    }
}
