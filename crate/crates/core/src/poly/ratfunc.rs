use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::{Limits, PolyError, SparsePoly};
use crate::field::QuadExt;

/// Quotient of two sparse polynomials.
///
/// Never reduced by a gcd: `x/x` and `1` are different representations of
/// the same function, and [`ratfunc_equal`] decides equality by
/// cross-multiplication. The only normalization is that a constant
/// denominator is folded into the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: SparsePoly,
    den: SparsePoly,
}

impl RatFunc {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self, PolyError> {
        assert_eq!(num.nvars(), den.nvars(), "numerator and denominator arity");
        if den.is_zero() {
            return Err(PolyError::ZeroDenominator);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: SparsePoly, den: SparsePoly) -> Self {
        let n = num.nvars();
        if num.is_zero() {
            return RatFunc { num, den: SparsePoly::one(n) };
        }
        if num == den {
            return RatFunc::one(n);
        }
        match den.as_constant() {
            Some(c) if !c.is_one() => {
                let ci = c.inv().expect("nonzero constant denominator");
                RatFunc { num: num.scale(&ci), den: SparsePoly::one(n) }
            }
            _ => RatFunc { num, den },
        }
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let n = p.nvars();
        RatFunc { num: p, den: SparsePoly::one(n) }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::zero(nvars))
    }

    pub fn one(nvars: usize) -> Self {
        Self::from_poly(SparsePoly::one(nvars))
    }

    pub fn constant(nvars: usize, c: QuadExt) -> Self {
        Self::from_poly(SparsePoly::constant(nvars, c))
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        Self::from_poly(SparsePoly::var(nvars, i))
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Number of stored terms in numerator plus denominator.
    pub fn size(&self) -> usize {
        self.num.num_terms() + self.den.num_terms()
    }

    pub fn add_bounded(&self, other: &Self, limits: &Limits) -> Result<Self, PolyError> {
        if self.den == other.den {
            return Ok(Self::normalized(&self.num + &other.num, self.den.clone()));
        }
        let n = &self.num.mul_bounded(&other.den, limits)? + &other.num.mul_bounded(&self.den, limits)?;
        let d = self.den.mul_bounded(&other.den, limits)?;
        Ok(Self::normalized(n, d))
    }

    pub fn mul_bounded(&self, other: &Self, limits: &Limits) -> Result<Self, PolyError> {
        let n = self.num.mul_bounded(&other.num, limits)?;
        let d = self.den.mul_bounded(&other.den, limits)?;
        Ok(Self::normalized(n, d))
    }

    pub fn inv(&self) -> Result<Self, PolyError> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, PolyError> {
        self.mul_bounded(&other.inv()?, &Limits::unbounded())
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        Self::normalized(self.num.scale(c), self.den.clone())
    }

    /// Integer power; negative powers invert.
    pub fn pow(&self, k: i32) -> Result<Self, PolyError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let lim = Limits::unbounded();
        let e = k.unsigned_abs();
        Ok(Self::normalized(base.num.pow_bounded(e, &lim)?, base.den.pow_bounded(e, &lim)?))
    }

    pub fn conjugate_coeffs(&self) -> Self {
        RatFunc { num: self.num.conjugate_coeffs(), den: self.den.conjugate_coeffs() }
    }

    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        RatFunc { num: self.num.remap_vars(nvars, map), den: self.den.remap_vars(nvars, map) }
    }

    /// Exact evaluation; a vanishing denominator is reported as a pole.
    pub fn eval(&self, point: &[QuadExt]) -> Result<QuadExt, PolyError> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(PolyError::Pole);
        }
        let n = self.num.eval(point)?;
        Ok(n.try_div(&d)?)
    }

    /// Substitutes `subst[i]` for variable `i` and clears denominators.
    ///
    /// Substitutions sharing a denominator `q` are grouped, so a monomial of
    /// total degree `k` in that group costs one factor `q^(E-k)` rather than
    /// one per variable.
    pub fn compose(&self, subst: &[RatFunc], limits: &Limits) -> Result<RatFunc, PolyError> {
        if subst.len() != self.nvars() {
            return Err(PolyError::Arity { expected: self.nvars(), got: subst.len() });
        }
        let out_vars = subst.first().map_or(0, RatFunc::nvars);
        if subst.iter().any(|s| s.nvars() != out_vars) {
            return Err(PolyError::Arity { expected: out_vars, got: subst.iter().map(RatFunc::nvars).max().unwrap_or(0) });
        }
        if out_vars == 0 && self.nvars() == 0 {
            return Ok(self.clone());
        }

        // group variables by (structurally) shared denominator
        let mut groups: Vec<(&SparsePoly, Vec<usize>)> = Vec::new();
        let mut group_of: Vec<Option<usize>> = alloc::vec![None; subst.len()];
        for (i, s) in subst.iter().enumerate() {
            if s.den.is_one() {
                continue;
            }
            match groups.iter().position(|(q, _)| *q == &s.den) {
                Some(g) => {
                    groups[g].1.push(i);
                    group_of[i] = Some(g);
                }
                None => {
                    group_of[i] = Some(groups.len());
                    groups.push((&s.den, alloc::vec![i]));
                }
            }
        }
        let group_sums = |e: &[u16]| -> Vec<u32> {
            let mut sums = alloc::vec![0u32; groups.len()];
            for (i, &k) in e.iter().enumerate() {
                if let Some(g) = group_of[i] {
                    sums[g] += u32::from(k);
                }
            }
            sums
        };
        let mut top = alloc::vec![0u32; groups.len()];
        for (e, _) in self.num.terms().chain(self.den.terms()) {
            for (t, s) in top.iter_mut().zip(group_sums(e)) {
                *t = (*t).max(s);
            }
        }

        let mut ctx = ComposeCtx {
            subst,
            groups: groups.iter().map(|(q, _)| *q).collect(),
            top,
            num_pows: alloc::vec![Vec::new(); subst.len()],
            den_pows: alloc::vec![Vec::new(); groups.len()],
            den_factor: BTreeMap::new(),
            limits,
            out_vars,
        };
        let num = ctx.expand(&self.num, &group_sums)?;
        let den = ctx.expand(&self.den, &group_sums)?;
        if den.is_zero() {
            return Err(PolyError::DegenerateComposition);
        }
        Ok(RatFunc::normalized(num, den))
    }
}

struct ComposeCtx<'a> {
    subst: &'a [RatFunc],
    groups: Vec<&'a SparsePoly>,
    top: Vec<u32>,
    num_pows: Vec<Vec<Rc<SparsePoly>>>,
    den_pows: Vec<Vec<Rc<SparsePoly>>>,
    den_factor: BTreeMap<Vec<u32>, Rc<SparsePoly>>,
    limits: &'a Limits,
    out_vars: usize,
}

impl ComposeCtx<'_> {
    fn power(cache: &mut Vec<Rc<SparsePoly>>, base: &SparsePoly, k: usize, limits: &Limits) -> Result<Rc<SparsePoly>, PolyError> {
        if cache.is_empty() {
            cache.push(Rc::new(SparsePoly::one(base.nvars())));
        }
        while cache.len() <= k {
            let next = cache.last().unwrap().mul_bounded(base, limits)?;
            cache.push(Rc::new(next));
        }
        Ok(cache[k].clone())
    }

    fn expand(&mut self, p: &SparsePoly, group_sums: &dyn Fn(&[u16]) -> Vec<u32>) -> Result<SparsePoly, PolyError> {
        let n = p.nvars();
        let mut acc = SparsePoly::zero(self.out_vars);
        // prefix[k] = prod_{i<k} num_i^{e_i}; reused while consecutive
        // exponent vectors (lex order) share a prefix
        let mut prefix: Vec<Rc<SparsePoly>> = alloc::vec![Rc::new(SparsePoly::one(self.out_vars))];
        let mut prev: Option<&[u16]> = None;
        for (e, c) in p.terms() {
            let common = match prev {
                Some(pe) => pe.iter().zip(e.iter()).take_while(|(a, b)| a == b).count(),
                None => 0,
            };
            prefix.truncate(common + 1);
            for i in common..n {
                let k = usize::from(e[i]);
                let next = if k == 0 {
                    prefix[i].clone()
                } else {
                    let pw = Self::power(&mut self.num_pows[i], &self.subst[i].num, k, self.limits)?;
                    Rc::new(prefix[i].mul_bounded(&pw, self.limits)?)
                };
                prefix.push(next);
            }
            prev = Some(e.as_slice());

            let sums = group_sums(e);
            let deficit: Vec<u32> = self.top.iter().zip(&sums).map(|(t, s)| t - s).collect();
            let factor = match self.den_factor.get(&deficit) {
                Some(f) => f.clone(),
                None => {
                    let mut f = SparsePoly::one(self.out_vars);
                    for (g, &k) in deficit.iter().enumerate() {
                        if k > 0 {
                            let pw = Self::power(&mut self.den_pows[g], self.groups[g], k as usize, self.limits)?;
                            f = f.mul_bounded(&pw, self.limits)?;
                        }
                    }
                    let f = Rc::new(f);
                    self.den_factor.insert(deficit, f.clone());
                    f
                }
            };
            let term = prefix[n].mul_bounded(&factor, self.limits)?;
            acc.add_scaled_in_place(&term, c);
            if acc.num_terms() > self.limits.term_budget {
                return Err(PolyError::Budget { terms: acc.num_terms(), budget: self.limits.term_budget });
            }
        }
        Ok(acc)
    }
}

/// Exact identity test: `f.num·g.den − g.num·f.den` expands to zero.
pub fn ratfunc_equal(f: &RatFunc, g: &RatFunc, limits: &Limits) -> Result<bool, PolyError> {
    assert_eq!(f.nvars(), g.nvars(), "rational functions over different variable sets");
    if f.den == g.den {
        return Ok(f.num == g.num);
    }
    let lhs = f.num.mul_bounded(&g.den, limits)?;
    let rhs = g.num.mul_bounded(&f.den, limits)?;
    Ok(lhs == rhs)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_bounded(rhs, &Limits::unbounded()).expect("unbounded")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_bounded(rhs, &Limits::unbounded()).expect("unbounded")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> Limits {
        Limits::default()
    }

    fn var(n: usize, i: usize) -> RatFunc {
        RatFunc::var(n, i)
    }

    fn c(n: usize, k: i64) -> RatFunc {
        RatFunc::constant(n, QuadExt::from_i64(k))
    }

    #[test]
    fn x_over_x_equals_one() {
        let x = var(1, 0);
        let f = x.checked_div(&x).unwrap();
        assert!(ratfunc_equal(&f, &RatFunc::one(1), &lim()).unwrap());
    }

    #[test]
    fn difference_of_squares_over_factor() {
        let x = var(1, 0);
        let f = RatFunc::new((&(&x * &x) - &c(1, 1)).num().clone(), (&x - &c(1, 1)).num().clone()).unwrap();
        let g = &x + &c(1, 1);
        assert!(ratfunc_equal(&f, &g, &lim()).unwrap());
    }

    #[test]
    fn distinct_functions_are_unequal() {
        let (x, y) = (var(2, 0), var(2, 1));
        let f = (&x + &y).checked_div(&y).unwrap();
        assert!(!ratfunc_equal(&f, &x, &lim()).unwrap());
    }

    #[test]
    fn compose_with_identity() {
        let (x, y) = (var(2, 0), var(2, 1));
        let f = (&(&x * &x) + &y).checked_div(&(&x - &y)).unwrap();
        let g = f.compose(&[x, y], &lim()).unwrap();
        assert_eq!(g, f);
    }

    #[test]
    fn x_plus_inverse_is_inversion_symmetric() {
        let x = var(1, 0);
        let f = &x + &x.inv().unwrap();
        let g = f.compose(&[x.inv().unwrap()], &lim()).unwrap();
        let expected = RatFunc::new((&(&x * &x) + &c(1, 1)).num().clone(), x.num().clone()).unwrap();
        assert!(ratfunc_equal(&g, &expected, &lim()).unwrap());
        assert!(ratfunc_equal(&g, &f, &lim()).unwrap());
    }

    #[test]
    fn degenerate_composition_is_reported() {
        let x = var(1, 0);
        let f = x.inv().unwrap();
        assert_eq!(f.compose(&[RatFunc::zero(1)], &lim()), Err(PolyError::DegenerateComposition));
    }

    #[test]
    fn pole_on_evaluation() {
        let x = var(1, 0);
        assert_eq!(x.inv().unwrap().eval(&[QuadExt::zero()]), Err(PolyError::Pole));
    }

    #[test]
    fn shared_denominators_are_grouped() {
        // (u/w, v/w) substituted into x*y + x: common denominator w^2
        let (u, v, w) = (var(3, 0), var(3, 1), var(3, 2));
        let (x, y) = (var(2, 0), var(2, 1));
        let f = &(&x * &y) + &x;
        let g = f.compose(&[u.checked_div(&w).unwrap(), v.checked_div(&w).unwrap()], &lim()).unwrap();
        assert_eq!(g.den(), &(&w * &w).num().clone());
        let expected = &(&u * &v).checked_div(&(&w * &w)).unwrap() + &u.checked_div(&w).unwrap();
        assert!(ratfunc_equal(&g, &expected, &lim()).unwrap());
    }
}
