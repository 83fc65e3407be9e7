use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::{self, Write};
use core::ops::{Add, Mul, Neg, Sub};

use smallvec::SmallVec;

use super::{Limits, PolyError};
use crate::field::QuadExt;

/// Exponent vector of a monomial.
pub type Exponents = SmallVec<[u16; 8]>;

/// Sparse multivariate polynomial with exact coefficients.
///
/// Terms live in a `BTreeMap` keyed by exponent vector, and zero
/// coefficients are never stored, so structural equality is mathematical
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Exponents, QuadExt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, QuadExt::one())
    }

    pub fn constant(nvars: usize, c: QuadExt) -> Self {
        Self::monomial(nvars, &[], c)
    }

    /// The coordinate function `x_i` (0-based).
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} variables");
        let mut e: Exponents = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(e, QuadExt::one());
        SparsePoly { nvars, terms }
    }

    /// `c · x^e`; missing trailing exponents are zero.
    pub fn monomial(nvars: usize, exps: &[u16], c: QuadExt) -> Self {
        assert!(exps.len() <= nvars);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            let mut e: Exponents = SmallVec::from_elem(0, nvars);
            e[..exps.len()].copy_from_slice(exps);
            terms.insert(e, c);
        }
        SparsePoly { nvars, terms }
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, QuadExt)>) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector arity");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &QuadExt)> {
        self.terms.iter()
    }

    /// The constant value, if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<QuadExt> {
        match self.terms.len() {
            0 => Some(QuadExt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| u32::from(e[var])).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().map(|&k| u32::from(k)).sum()).max().unwrap_or(0)
    }

    /// True iff every term has the same total degree in the variables of
    /// `vars`.
    pub fn is_homogeneous_in(&self, vars: &[usize]) -> bool {
        let mut degs = self.terms.keys().map(|e| vars.iter().map(|&v| u32::from(e[v])).sum::<u32>());
        match degs.next() {
            None => true,
            Some(first) => degs.all(|d| d == first),
        }
    }

    fn add_term(&mut self, e: Exponents, c: QuadExt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// `self += c · other`.
    pub(crate) fn add_scaled_in_place(&mut self, other: &Self, c: &QuadExt) {
        self.check_arity(other);
        for (e, a) in &other.terms {
            self.add_term(e.clone(), a * c);
        }
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials over different variable sets");
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    /// Product, aborting once the partial result exceeds the term budget.
    pub fn mul_bounded(&self, other: &Self, limits: &Limits) -> Result<Self, PolyError> {
        self.check_arity(other);
        if let Some(c) = self.as_constant() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.as_constant() {
            return Ok(self.scale(&c));
        }
        let mut out = SparsePoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2.iter()).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
            if out.terms.len() > limits.term_budget {
                return Err(PolyError::Budget { terms: out.terms.len(), budget: limits.term_budget });
            }
        }
        Ok(out)
    }

    pub fn pow_bounded(&self, k: u32, limits: &Limits) -> Result<Self, PolyError> {
        let mut acc = SparsePoly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul_bounded(self, limits)?;
        }
        Ok(acc)
    }

    /// Exact evaluation at `point`.
    pub fn eval(&self, point: &[QuadExt]) -> Result<QuadExt, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::Arity { expected: self.nvars, got: point.len() });
        }
        let mut powers: Vec<Vec<QuadExt>> = point.iter().map(|x| alloc::vec![QuadExt::one(), x.clone()]).collect();
        let mut acc = QuadExt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let k = usize::from(k);
                while powers[i].len() <= k {
                    let next = powers[i].last().unwrap() * &point[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][k];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Applies Galois conjugation to every coefficient.
    pub fn conjugate_coeffs(&self) -> Self {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), c.conjugate())).collect() }
    }

    /// Re-embeds into `nvars` variables, sending variable `i` to `map[i]`.
    pub fn remap_vars(&self, nvars: usize, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.nvars);
        let mut out = SparsePoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne: Exponents = SmallVec::from_elem(0, nvars);
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn derivative(&self, var: usize) -> Self {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.add_term(ne, c * &QuadExt::from_i64(i64::from(k)));
        }
        out
    }

    /// Canonical text form with the given variable names, highest monomial
    /// first.
    pub fn display_with(&self, names: &[&str]) -> String {
        assert_eq!(names.len(), self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].to_string() } else { alloc::format!("{}^{}", names[i], k) })
                .collect();
            let (neg, mag) = if c.is_rational() && c.a().is_negative() { (true, -c) } else { (false, c.clone()) };
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if mag.is_rational() { mag.to_string() } else { alloc::format!("({mag})") };
            if mono.is_empty() {
                s.push_str(&coeff);
            } else {
                if !mag.is_one() {
                    let _ = write!(s, "{coeff}*");
                }
                s.push_str(&mono.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| alloc::format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        f.write_str(&self.display_with(&refs))
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_arity(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    /// Unbounded product; see [`SparsePoly::mul_bounded`].
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.mul_bounded(rhs, &Limits::unbounded()).expect("unbounded multiplication")
    }
}

macro_rules! owned_poly_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for SparsePoly {
            type Output = SparsePoly;
            fn $m(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
owned_poly_ops!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::QuadField;

    fn x(i: usize) -> SparsePoly {
        SparsePoly::var(3, i)
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = &(&x(0) + &x(1)) - &x(1);
        assert_eq!(p, x(0));
        assert_eq!(p.num_terms(), 1);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn sum_of_cube_roots_vanishes() {
        let z = QuadField::EISENSTEIN.zeta().unwrap();
        let p = &(&x(0) + &x(1)) + &x(2);
        let v = p.eval(&[QuadExt::one(), z.clone(), &z * &z]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn constant_eval_and_arity() {
        let c = SparsePoly::constant(2, QuadExt::from_i64(7));
        assert_eq!(c.eval(&[QuadExt::frac(3, 5), QuadExt::from_i64(-2)]).unwrap(), QuadExt::from_i64(7));
        assert_eq!(c.eval(&[QuadExt::one()]), Err(PolyError::Arity { expected: 2, got: 1 }));
    }

    #[test]
    fn rank_one_outer_product_on_quadric() {
        // a11*a22 - a12*a21 at (y1 z1, y1 z2, y2 z1, y2 z2)
        let a = |i| SparsePoly::var(4, i);
        let q = &(&a(0) * &a(3)) - &(&a(1) * &a(2));
        let (y1, y2, z1, z2) = (QuadExt::frac(3, 7), QuadExt::from_i64(-5), QuadExt::frac(2, 9), QuadExt::from_i64(11));
        let pt = [&y1 * &z1, &y1 * &z2, &y2 * &z1, &y2 * &z2];
        assert!(q.eval(&pt).unwrap().is_zero());
    }

    #[test]
    fn budget_is_enforced() {
        let p = &(&x(0) + &x(1)) + &x(2);
        let tight = Limits { term_budget: 5 };
        assert!(matches!(p.pow_bounded(4, &tight), Err(PolyError::Budget { .. })));
        assert_eq!(p.pow_bounded(2, &Limits::default()).unwrap().num_terms(), 6);
    }

    #[test]
    fn canonical_rendering() {
        let p = &(&(&x(0) * &x(0)) - &x(1).scale(&QuadExt::frac(1, 2))) + &SparsePoly::constant(3, QuadExt::from_i64(-3));
        assert_eq!(p.to_string(), "x1^2 - 1/2*x2 - 3");
        let s = QuadField::EISENSTEIN.sqrt_d();
        assert_eq!(x(2).scale(&s).to_string(), "(sqrt(-3))*x3");
        assert_eq!(SparsePoly::zero(1).to_string(), "0");
    }

    #[test]
    fn derivative_and_homogeneity() {
        let p = &(&x(0) * &x(1)) * &x(2);
        assert_eq!(p.derivative(2), &x(0) * &x(1));
        assert!(p.is_homogeneous_in(&[0, 1, 2]));
        assert!(!(&p + &x(0)).is_homogeneous_in(&[0, 1, 2]));
    }
}
