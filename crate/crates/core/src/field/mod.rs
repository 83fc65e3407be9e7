//! Exact arithmetic over ℚ and quadratic extensions ℚ(√d).

mod quad;
mod rational;

pub use quad::{ArithOp, QuadExt, QuadField};
pub use rational::Rational;

use alloc::string::String;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("discriminant mismatch: sqrt({0}) vs sqrt({1})")]
    DiscriminantMismatch(i64, i64),
    #[error("{0} is not a square-free discriminant other than 0 and 1")]
    BadDiscriminant(i64),
    #[error("Q(sqrt({0})) has no primitive cube root of unity")]
    NoCubeRoot(i64),
    #[error("cannot parse scalar {0:?}")]
    Parse(String),
}

/// Random rational `p/q` with `|p| <= span`, `1 <= q <= span`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, span: i64) -> Rational {
    let p = rng.gen_range(-span..=span);
    let q = rng.gen_range(1..=span);
    Rational::frac(p, q)
}

/// Random nonzero element of `field`; the irrational part is zero about
/// half of the time unless `rational_only` is set.
pub fn random_scalar<R: Rng + ?Sized>(rng: &mut R, field: QuadField, rational_only: bool) -> QuadExt {
    loop {
        let a = random_rational(rng, 24);
        let b = if rational_only || rng.gen_bool(0.5) { Rational::zero() } else { random_rational(rng, 24) };
        let x = field.element(a, b);
        if !x.is_zero() {
            return x;
        }
    }
}
