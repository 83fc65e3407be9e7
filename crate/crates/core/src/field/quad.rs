use alloc::string::{String, ToString};
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use super::{FieldError, Rational};

/// A quadratic field ℚ(√d), identified by its square-free parameter `d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadField {
    d: i64,
}

impl QuadField {
    /// ℚ(√−3) = ℚ(ζ) with ζ a primitive cube root of unity.
    pub const EISENSTEIN: QuadField = QuadField { d: -3 };
    /// ℚ(√−1).
    pub const GAUSSIAN: QuadField = QuadField { d: -1 };

    pub fn new(d: i64) -> Result<Self, FieldError> {
        if d == 0 || d == 1 || !is_square_free(d) {
            return Err(FieldError::BadDiscriminant(d));
        }
        Ok(QuadField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `a + b√d`.
    pub fn element(&self, a: Rational, b: Rational) -> QuadExt {
        QuadExt::from_parts(a, b, self.d)
    }

    pub fn sqrt_d(&self) -> QuadExt {
        self.element(Rational::zero(), Rational::one())
    }

    /// ζ = (−1 + √−3)/2; only available in ℚ(√−3).
    pub fn zeta(&self) -> Result<QuadExt, FieldError> {
        if self.d != -3 {
            return Err(FieldError::NoCubeRoot(self.d));
        }
        Ok(self.element(Rational::frac(-1, 2), Rational::frac(1, 2)))
    }
}

fn is_square_free(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p: u64 = 2;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Element `a + b√d` of a quadratic extension of ℚ.
///
/// An element with `b = 0` is a plain rational and carries `d = 0`, so it
/// combines with elements of every ℚ(√d). Two elements with nonzero
/// irrational parts must share `d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct QuadExt {
    a: Rational,
    b: Rational,
    d: i64,
}

impl QuadExt {
    fn from_parts(a: Rational, b: Rational, d: i64) -> Self {
        let d = if b.is_zero() { 0 } else { d };
        QuadExt { a, b, d }
    }

    pub fn rational(a: Rational) -> Self {
        QuadExt { a, b: Rational::zero(), d: 0 }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rational::from(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::rational(Rational::frac(n, d))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// The discriminant of the irrational part, or `None` for rationals.
    pub fn d(&self) -> Option<i64> {
        (self.d != 0).then_some(self.d)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_d(&self, other: &Self) -> Result<i64, FieldError> {
        match (self.d, other.d) {
            (0, e) | (e, 0) => Ok(e),
            (e, f) if e == f => Ok(e),
            (e, f) => Err(FieldError::DiscriminantMismatch(e, f)),
        }
    }

    /// Checked field arithmetic.
    pub fn arith(op: ArithOp, x: &Self, y: &Self) -> Result<Self, FieldError> {
        let d = x.common_d(y)?;
        Ok(match op {
            ArithOp::Add => Self::from_parts(&x.a + &y.a, &x.b + &y.b, d),
            ArithOp::Sub => Self::from_parts(&x.a - &y.a, &x.b - &y.b, d),
            ArithOp::Mul if x.b.is_zero() && y.b.is_zero() => Self::rational(&x.a * &y.a),
            ArithOp::Mul if x.b.is_zero() => Self::from_parts(&x.a * &y.a, &x.a * &y.b, d),
            ArithOp::Mul if y.b.is_zero() => Self::from_parts(&x.a * &y.a, &x.b * &y.a, d),
            ArithOp::Mul => {
                let dd = Rational::from(d);
                let a = &x.a * &y.a + &(&(&x.b * &y.b) * &dd);
                let b = &x.a * &y.b + &(&x.b * &y.a);
                Self::from_parts(a, b, d)
            }
        })
    }

    pub fn try_add(&self, y: &Self) -> Result<Self, FieldError> {
        Self::arith(ArithOp::Add, self, y)
    }

    pub fn try_sub(&self, y: &Self) -> Result<Self, FieldError> {
        Self::arith(ArithOp::Sub, self, y)
    }

    pub fn try_mul(&self, y: &Self) -> Result<Self, FieldError> {
        Self::arith(ArithOp::Mul, self, y)
    }

    /// Galois conjugation `a + b√d ↦ a − b√d`.
    pub fn conjugate(&self) -> Self {
        QuadExt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    /// `x · γ(x) = a² − d·b²`.
    pub fn norm(&self) -> Rational {
        let d = Rational::from(self.d);
        &self.a * &self.a - &(&(&self.b * &self.b) * &d)
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let ni = n.inv()?;
        Ok(Self::from_parts(&self.a * &ni, -(&self.b * &ni), self.d))
    }

    pub fn try_div(&self, y: &Self) -> Result<Self, FieldError> {
        self.try_mul(&y.inv()?)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i32) -> Result<Self, FieldError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = QuadExt::one();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &sq;
            }
            k >>= 1;
            if k > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::rational(r)
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_i64(n)
    }
}

// The operator impls panic on a discriminant mismatch, which only arises
// from mixing elements of two different fields in one computation.
macro_rules! quad_binop {
    ($tr:ident, $method:ident, $op:expr) => {
        impl $tr<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                match QuadExt::arith($op, self, rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $tr<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
    };
}

quad_binop!(Add, add, ArithOp::Add);
quad_binop!(Sub, sub, ArithOp::Sub);
quad_binop!(Mul, mul, ArithOp::Mul);

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -&self.a, b: -&self.b, d: self.d }
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -&self
    }
}

impl fmt::Display for QuadExt {
    /// `a/b`, `c/e*sqrt(d)` or `a/b+c/e*sqrt(d)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() { String::new() } else { self.b.abs().to_string() + "*" };
        let b = if (-&self.b).is_one() { String::new() } else { b };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{}{}sqrt({})", sign, b, self.d)
        } else {
            let sign = if self.b.is_negative() { "-" } else { "+" };
            write!(f, "{}{}{}sqrt({})", self.a, sign, b, self.d)
        }
    }
}

impl fmt::Debug for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadExt {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || FieldError::Parse(s.to_string());
        let Some(idx) = s.find("sqrt(") else {
            return Ok(QuadExt::rational(s.parse()?));
        };
        let d: i64 = s[idx + 5..].strip_suffix(')').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let field = QuadField::new(d)?;
        let head = &s[..idx];
        let head = head.strip_suffix('*').unwrap_or(head);
        // split "a+b" / "a-b" at the last sign that is not leading
        let split = head.char_indices().filter(|&(i, c)| i > 0 && (c == '+' || c == '-')).map(|(i, _)| i).next_back();
        let (a, b) = match split {
            Some(i) => (head[..i].parse()?, parse_coeff(&head[i..])?),
            None => (Rational::zero(), parse_coeff(head)?),
        };
        Ok(field.element(a, b))
    }
}

fn parse_coeff(s: &str) -> Result<Rational, FieldError> {
    match s {
        "" | "+" => Ok(Rational::one()),
        "-" => Ok(-Rational::one()),
        _ => s.strip_prefix('+').unwrap_or(s).parse(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eis(a: (i64, i64), b: (i64, i64)) -> QuadExt {
        QuadField::EISENSTEIN.element(Rational::frac(a.0, a.1), Rational::frac(b.0, b.1))
    }

    #[test]
    fn conjugate_sum_and_product() {
        let x = eis((1, 1), (1, 1));
        let y = eis((1, 1), (-1, 1));
        assert_eq!(&x + &y, QuadExt::from_i64(2));
        assert_eq!(&x * &y, QuadExt::from_i64(4));
    }

    #[test]
    fn zeta_cubed_is_one() {
        let z = QuadField::EISENSTEIN.zeta().unwrap();
        assert!(!z.is_one());
        assert_eq!(&(&z * &z) * &z, QuadExt::one());
        assert_eq!(z.inv().unwrap(), &z * &z);
        assert_eq!(z.inv().unwrap(), eis((-1, 2), (-1, 2)));
        assert_eq!(z.conjugate(), &z * &z);
    }

    #[test]
    fn inverse_by_conjugate_over_norm() {
        assert_eq!(QuadExt::one().inv().unwrap(), QuadExt::one());
        let x = eis((1, 1), (1, 1));
        assert_eq!(x.inv().unwrap(), eis((1, 4), (-1, 4)));
        assert_eq!(&x * &x.inv().unwrap(), QuadExt::one());
        assert_eq!(QuadExt::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn mismatched_discriminants_are_rejected() {
        let x = QuadField::EISENSTEIN.sqrt_d();
        let y = QuadField::new(2).unwrap().sqrt_d();
        assert_eq!(x.try_add(&y), Err(FieldError::DiscriminantMismatch(-3, 2)));
        assert_eq!(x.try_mul(&y), Err(FieldError::DiscriminantMismatch(-3, 2)));
        // rationals embed in every field
        assert!(x.try_add(&QuadExt::from_i64(3)).is_ok());
    }

    #[test]
    fn conjugation_of_sqrt() {
        let s = QuadField::EISENSTEIN.sqrt_d();
        assert_eq!(s.conjugate(), -&s);
        assert_eq!(s.conjugate().to_string(), "-sqrt(-3)");
    }

    #[test]
    fn bad_discriminants() {
        for d in [0, 1, 4, -4, 12, 18] {
            assert_eq!(QuadField::new(d), Err(FieldError::BadDiscriminant(d)));
        }
        for d in [-1, -3, 2, 5, -7, 6] {
            assert!(QuadField::new(d).is_ok());
        }
        assert!(QuadField::GAUSSIAN.zeta().is_err());
    }

    #[test]
    fn render_and_parse() {
        let cases = [
            (eis((1, 2), (3, 4)), "1/2+3/4*sqrt(-3)"),
            (eis((1, 2), (-3, 4)), "1/2-3/4*sqrt(-3)"),
            (eis((-1, 2), (1, 2)), "-1/2+1/2*sqrt(-3)"),
            (eis((0, 1), (-1, 1)), "-sqrt(-3)"),
            (eis((2, 1), (1, 1)), "2+sqrt(-3)"),
            (eis((5, 3), (0, 1)), "5/3"),
        ];
        for (x, s) in cases {
            assert_eq!(x.to_string(), s);
            assert_eq!(s.parse::<QuadExt>().unwrap(), x);
        }
    }
}
