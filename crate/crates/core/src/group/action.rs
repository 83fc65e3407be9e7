use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use super::{GroupError, Perm};
use crate::field::QuadExt;
use crate::poly::RatFunc;
use crate::ratmap::{Factor, VarietySpec};

/// Coordinate twist applied after permuting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoordTwist {
    None,
    /// `x ↦ x⁻¹`, multiplicative coordinates only.
    Invert,
    /// `x ↦ −x`, additive coordinates only.
    Negate,
    /// Raise to the power `sign(perm)`.
    SignPower,
}

/// Something an action can be applied to: a scalar or a rational function.
pub trait Coord: Clone {
    fn try_inv(&self) -> Result<Self, GroupError>;
    fn times(&self, c: &QuadExt) -> Self;
    fn conj(&self) -> Self;
}

impl Coord for QuadExt {
    fn try_inv(&self) -> Result<Self, GroupError> {
        self.inv().map_err(|_| GroupError::DegeneratePoint)
    }
    fn times(&self, c: &QuadExt) -> Self {
        self * c
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
}

impl Coord for RatFunc {
    fn try_inv(&self) -> Result<Self, GroupError> {
        self.inv().map_err(|_| GroupError::DegeneratePoint)
    }
    fn times(&self, c: &QuadExt) -> Self {
        self.scale(c)
    }
    fn conj(&self) -> Self {
        self.conjugate_coeffs()
    }
}

/// One generator's action on coordinate tuples:
/// `x ↦ γᶜ(s · twist(perm(x)))`, where `perm(x)_i = x_{π⁻¹(i)}`, `s` is an
/// optional per-coordinate multiplier and `γ` conjugates entrywise.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActionGen {
    pub perm: Perm,
    pub twist: CoordTwist,
    pub scale: Option<Vec<QuadExt>>,
    pub conjugate: bool,
    pub projective: bool,
}

/// Canonical form `x_k ↦ γᶜ(s_k · x_{π⁻¹(k)}^e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub perm: Perm,
    pub exponent: i32,
    pub mult: Vec<QuadExt>,
    pub conjugate: bool,
}

impl ActionGen {
    pub fn identity(n: usize) -> Self {
        Self::permutation(Perm::identity(n))
    }

    pub fn permutation(perm: Perm) -> Self {
        ActionGen { perm, twist: CoordTwist::None, scale: None, conjugate: false, projective: false }
    }

    pub fn with_twist(mut self, twist: CoordTwist) -> Self {
        self.twist = twist;
        self
    }

    pub fn with_scale(mut self, scale: Vec<QuadExt>) -> Self {
        assert_eq!(scale.len(), self.perm.len());
        self.scale = Some(scale);
        self
    }

    pub fn conjugating(mut self) -> Self {
        self.conjugate = true;
        self
    }

    pub fn on_classes(mut self) -> Self {
        self.projective = true;
        self
    }

    pub fn arity(&self) -> usize {
        self.perm.len()
    }

    fn exponent(&self) -> i32 {
        match self.twist {
            CoordTwist::Invert => -1,
            CoordTwist::SignPower => self.perm.sign(),
            CoordTwist::None | CoordTwist::Negate => 1,
        }
    }

    /// The action without its conjugation.
    pub fn apply_linear<T: Coord>(&self, x: &[T]) -> Result<Vec<T>, GroupError> {
        if x.len() != self.arity() {
            return Err(GroupError::Arity { expected: self.arity(), got: x.len() });
        }
        let mut y = self.perm.permute(x);
        if self.exponent() == -1 {
            for v in &mut y {
                *v = v.try_inv()?;
            }
        }
        if self.twist == CoordTwist::Negate {
            let m = QuadExt::from_i64(-1);
            y = y.iter().map(|v| v.times(&m)).collect();
        }
        if let Some(s) = &self.scale {
            y = y.iter().zip(s).map(|(v, c)| v.times(c)).collect();
        }
        Ok(y)
    }

    /// Permute, twist, scale, then conjugate if semilinear.
    pub fn apply<T: Coord>(&self, x: &[T]) -> Result<Vec<T>, GroupError> {
        let y = self.apply_linear(x)?;
        Ok(if self.conjugate { y.iter().map(Coord::conj).collect() } else { y })
    }

    pub fn normal_form(&self) -> NormalForm {
        let n = self.arity();
        let sign = if self.twist == CoordTwist::Negate { QuadExt::from_i64(-1) } else { QuadExt::one() };
        let mult = match &self.scale {
            Some(s) => s.iter().map(|c| c * &sign).collect(),
            None => alloc::vec![sign; n],
        };
        NormalForm { perm: self.perm.clone(), exponent: self.exponent(), mult, conjugate: self.conjugate }
    }

    fn from_normal_form(nf: NormalForm, projective: bool) -> Self {
        let scale = (!nf.mult.iter().all(QuadExt::is_one)).then_some(nf.mult);
        ActionGen {
            perm: nf.perm,
            twist: if nf.exponent == -1 { CoordTwist::Invert } else { CoordTwist::None },
            scale,
            conjugate: nf.conjugate,
            projective,
        }
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &ActionGen) -> Result<ActionGen, GroupError> {
        if self.arity() != other.arity() {
            return Err(GroupError::Arity { expected: self.arity(), got: other.arity() });
        }
        let (a, b) = (self.normal_form(), other.normal_form());
        let binv = b.perm.inverse();
        let mut mult = Vec::with_capacity(a.mult.len());
        for k in 0..a.mult.len() {
            let s2 = if a.conjugate { b.mult[k].conjugate() } else { b.mult[k].clone() };
            let s1 = a.mult[binv.image(k)].pow(b.exponent).map_err(|_| GroupError::DegeneratePoint)?;
            mult.push(&s2 * &s1);
        }
        let nf =
            NormalForm { perm: b.perm.compose(&a.perm), exponent: a.exponent * b.exponent, mult, conjugate: a.conjugate ^ b.conjugate };
        Ok(Self::from_normal_form(nf, self.projective || other.projective))
    }

    /// Whether the twist is compatible with the coordinate kinds of `v`.
    pub fn validate_on(&self, v: &VarietySpec) -> Result<(), GroupError> {
        if self.arity() != v.nvars() {
            return Err(GroupError::Arity { expected: v.nvars(), got: self.arity() });
        }
        let bad = |why: &str| Err(GroupError::IncompatibleTwist(alloc::format!("{} on {v}: {why}", self.describe())));
        match self.twist {
            CoordTwist::Invert | CoordTwist::SignPower if !v.is_multiplicative() => {
                return bad("inversion needs multiplicative coordinates")
            }
            CoordTwist::Negate if !v.is_additive() => return bad("negation needs additive coordinates"),
            _ => {}
        }
        if self.projective != v.factors().iter().any(Factor::is_projective) {
            return bad("projective flag does not match the variety");
        }
        Ok(())
    }

    /// Exact equality of actions on `v`; multipliers on projective blocks
    /// are compared up to a common scalar per block.
    pub fn same_action(&self, other: &ActionGen, v: &VarietySpec) -> bool {
        let (a, b) = (self.normal_form(), other.normal_form());
        if a.perm != b.perm || a.conjugate != b.conjugate || a.mult.len() != v.nvars() {
            return false;
        }
        if v.is_multiplicative() && a.exponent != b.exponent {
            return false;
        }
        v.blocks().into_iter().all(|(r, f)| {
            let (s, t) = (&a.mult[r.clone()], &b.mult[r]);
            if f.is_projective() {
                (1..s.len()).all(|i| (&s[i] * &t[0]) == (&s[0] * &t[i]))
            } else {
                s == t
            }
        })
    }

    /// Human-readable form, e.g. `perm (1 2 3); invert; conj`.
    pub fn describe(&self) -> String {
        let mut out = alloc::format!("perm {}", self.perm);
        match self.twist {
            CoordTwist::None => {}
            CoordTwist::Invert => out.push_str("; invert"),
            CoordTwist::Negate => out.push_str("; negate"),
            CoordTwist::SignPower => out.push_str("; sign-power"),
        }
        if let Some(s) = &self.scale {
            out.push_str("; scale (");
            for (i, c) in s.iter().enumerate() {
                let _ = write!(out, "{}{c}", if i > 0 { ", " } else { "" });
            }
            out.push(')');
        }
        if self.conjugate {
            out.push_str("; conj");
        }
        if self.projective {
            out.push_str("; on classes");
        }
        out
    }
}

impl fmt::Display for ActionGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadField;

    fn q(n: i64) -> QuadExt {
        QuadExt::from_i64(n)
    }

    #[test]
    fn invert_twist() {
        let e = ActionGen::identity(3).with_twist(CoordTwist::Invert);
        let y = e.apply(&[q(2), q(3), QuadExt::frac(1, 6)]).unwrap();
        assert_eq!(y, [QuadExt::frac(1, 2), QuadExt::frac(1, 3), q(6)]);
        assert_eq!(e.apply(&[q(0), q(1), q(1)]), Err(GroupError::DegeneratePoint));
    }

    #[test]
    fn gamma_twisted_fixes_zeta_diagonal() {
        let z = QuadField::EISENSTEIN.zeta().unwrap();
        let g = ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating();
        let p = [z.clone(), z.clone(), z.clone()];
        assert_eq!(g.apply(&p).unwrap(), p);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let z = QuadField::EISENSTEIN.zeta().unwrap();
        let a = ActionGen::permutation(Perm::cycle(3, &[0, 1, 2]))
            .with_twist(CoordTwist::SignPower)
            .with_scale(alloc::vec![z.clone(), q(2), q(1)])
            .conjugating();
        let b = ActionGen::permutation(Perm::transposition(3, 0, 2)).with_twist(CoordTwist::Invert).with_scale(alloc::vec![
            q(1),
            z.clone(),
            q(-1)
        ]);
        let x = [QuadField::EISENSTEIN.element(1.into(), 2.into()), q(5), QuadExt::frac(-1, 3)];
        for (f, g) in [(&a, &b), (&b, &a), (&a, &a)] {
            let seq = g.apply(&f.apply(&x).unwrap()).unwrap();
            assert_eq!(f.then(g).unwrap().apply(&x).unwrap(), seq);
        }
    }

    #[test]
    fn describe_is_readable() {
        let g = ActionGen::permutation(Perm::transposition(3, 0, 1)).with_twist(CoordTwist::Negate).conjugating();
        assert_eq!(g.describe(), "perm (1 2); negate; conj");
    }
}
