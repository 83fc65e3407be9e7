use alloc::format;
use alloc::vec::Vec;

use super::{ratfunc_equal, Limits, PolyError, RatFunc, SparsePoly};
use crate::field::QuadExt;

/// A relation that lets one coordinate be solved for rationally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChartRelation {
    /// `∏_{i ∈ vars} x_i = 1` (a torus).
    TorusProduct { vars: Vec<usize> },
    /// `∑_{i ∈ vars} x_i = 0` (its Lie algebra).
    LinearSum { vars: Vec<usize> },
    /// `A·x_e + B = 0` with `A`, `B` free of the eliminated variable `x_e`;
    /// used for hypersurfaces such as the quadric `α₁₁α₂₂ = α₁₂α₂₁`.
    LinearIn { poly: SparsePoly },
}

impl ChartRelation {
    /// Classifies `p = 0` as one of the supported relation forms with
    /// respect to the variable `eliminated`.
    pub fn recognize(p: &SparsePoly, eliminated: usize) -> Result<Self, PolyError> {
        let unsupported = || PolyError::UnsupportedRelation(format!("{p} = 0 solved for x{}", eliminated + 1));
        if eliminated >= p.nvars() || p.degree_in(eliminated) == 0 {
            return Err(unsupported());
        }
        if let Some(vars) = torus_vars(p) {
            if vars.contains(&eliminated) {
                return Ok(ChartRelation::TorusProduct { vars });
            }
        }
        if let Some(vars) = sum_vars(p) {
            return Ok(ChartRelation::LinearSum { vars });
        }
        if p.degree_in(eliminated) == 1 {
            return Ok(ChartRelation::LinearIn { poly: p.clone() });
        }
        Err(unsupported())
    }

    /// Defining polynomial of the relation in `nvars` variables.
    pub fn polynomial(&self, nvars: usize) -> SparsePoly {
        match self {
            ChartRelation::TorusProduct { vars } => {
                let mut e = alloc::vec![0u16; nvars];
                for &v in vars {
                    e[v] = 1;
                }
                &SparsePoly::monomial(nvars, &e, QuadExt::one()) - &SparsePoly::one(nvars)
            }
            ChartRelation::LinearSum { vars } => vars.iter().fold(SparsePoly::zero(nvars), |acc, &v| &acc + &SparsePoly::var(nvars, v)),
            ChartRelation::LinearIn { poly } => poly.clone(),
        }
    }

    /// The rational function that `x_eliminated` equals on the chart.
    pub fn solve_for(&self, nvars: usize, eliminated: usize) -> Result<RatFunc, PolyError> {
        match self {
            ChartRelation::TorusProduct { vars } => {
                if !vars.contains(&eliminated) {
                    return Err(PolyError::UnsupportedRelation(format!("x{} not in torus relation", eliminated + 1)));
                }
                let mut e = alloc::vec![0u16; nvars];
                for &v in vars.iter().filter(|&&v| v != eliminated) {
                    e[v] = 1;
                }
                RatFunc::new(SparsePoly::one(nvars), SparsePoly::monomial(nvars, &e, QuadExt::one()))
            }
            ChartRelation::LinearSum { vars } => {
                if !vars.contains(&eliminated) {
                    return Err(PolyError::UnsupportedRelation(format!("x{} not in sum relation", eliminated + 1)));
                }
                let s =
                    vars.iter().filter(|&&v| v != eliminated).fold(SparsePoly::zero(nvars), |acc, &v| &acc - &SparsePoly::var(nvars, v));
                Ok(RatFunc::from_poly(s))
            }
            ChartRelation::LinearIn { poly } => {
                if poly.degree_in(eliminated) != 1 {
                    return Err(PolyError::UnsupportedRelation(format!("{poly} = 0 is not linear in x{}", eliminated + 1)));
                }
                let (mut a, mut b) = (SparsePoly::zero(nvars), SparsePoly::zero(nvars));
                for (e, c) in poly.terms() {
                    let mut e2 = e.clone();
                    if e[eliminated] == 1 {
                        e2[eliminated] = 0;
                        a = &a + &SparsePoly::from_terms(nvars, [(e2, c.clone())]);
                    } else {
                        b = &b + &SparsePoly::from_terms(nvars, [(e2, c.clone())]);
                    }
                }
                RatFunc::new(-&b, a)
            }
        }
    }
}

fn torus_vars(p: &SparsePoly) -> Option<Vec<usize>> {
    if p.num_terms() != 2 {
        return None;
    }
    let mut mono = None;
    let mut constant = None;
    for (e, c) in p.terms() {
        if e.iter().all(|&k| k == 0) {
            constant = Some(c.clone());
        } else if e.iter().all(|&k| k <= 1) {
            mono = Some((e.clone(), c.clone()));
        }
    }
    let (e, c) = mono?;
    let k = constant?;
    (k == -&c).then(|| e.iter().enumerate().filter(|(_, &x)| x == 1).map(|(i, _)| i).collect())
}

fn sum_vars(p: &SparsePoly) -> Option<Vec<usize>> {
    let mut coeff = None;
    let mut vars = Vec::new();
    for (e, c) in p.terms() {
        if e.iter().map(|&k| u32::from(k)).sum::<u32>() != 1 {
            return None;
        }
        match &coeff {
            None => coeff = Some(c.clone()),
            Some(c0) if c0 == c => {}
            Some(_) => return None,
        }
        vars.push(e.iter().position(|&k| k == 1)?);
    }
    vars.sort_unstable();
    (vars.len() >= 2).then_some(vars)
}

/// Restricts `f` to the chart where `relation` is solved for `eliminated`.
pub fn chart_restrict(f: &RatFunc, relation: &ChartRelation, eliminated: usize, limits: &Limits) -> Result<RatFunc, PolyError> {
    Chart::new(f.nvars(), &[(relation.clone(), eliminated)])?.restrict(f, limits)
}

/// Simultaneous elimination of several coordinates, one per relation.
#[derive(Clone, Debug)]
pub struct Chart {
    nvars: usize,
    eliminated: Vec<usize>,
    subst: Vec<RatFunc>,
}

impl Chart {
    pub fn identity(nvars: usize) -> Self {
        Chart { nvars, eliminated: Vec::new(), subst: (0..nvars).map(|i| RatFunc::var(nvars, i)).collect() }
    }

    pub fn new(nvars: usize, relations: &[(ChartRelation, usize)]) -> Result<Self, PolyError> {
        let mut chart = Chart::identity(nvars);
        for (rel, e) in relations {
            if *e >= nvars || chart.eliminated.contains(e) {
                return Err(PolyError::UnsupportedRelation(format!("x{} eliminated twice", e + 1)));
            }
            chart.eliminated.push(*e);
            chart.subst[*e] = rel.solve_for(nvars, *e)?;
        }
        // a solved value may not mention another eliminated coordinate
        for &e in &chart.eliminated {
            let s = &chart.subst[e];
            for &other in &chart.eliminated {
                if s.num().degree_in(other) > 0 || s.den().degree_in(other) > 0 {
                    return Err(PolyError::UnsupportedRelation(format!("x{} is solved in terms of eliminated x{}", e + 1, other + 1)));
                }
            }
        }
        Ok(chart)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn eliminated(&self) -> &[usize] {
        &self.eliminated
    }

    /// The substitution tuple: identity on free coordinates, solved values
    /// on eliminated ones.
    pub fn substitution(&self) -> &[RatFunc] {
        &self.subst
    }

    pub fn restrict(&self, f: &RatFunc, limits: &Limits) -> Result<RatFunc, PolyError> {
        if self.eliminated.is_empty() {
            return Ok(f.clone());
        }
        if self.eliminated.iter().all(|&e| f.num().degree_in(e) == 0 && f.den().degree_in(e) == 0) {
            return Ok(f.clone());
        }
        f.compose(&self.subst, limits)
    }

    /// Equality of `f` and `g` as functions on the variety cut out by the
    /// chart's relations.
    pub fn equal(&self, f: &RatFunc, g: &RatFunc, limits: &Limits) -> Result<bool, PolyError> {
        ratfunc_equal(&self.restrict(f, limits)?, &self.restrict(g, limits)?, limits)
    }

    pub fn is_zero(&self, f: &RatFunc, limits: &Limits) -> Result<bool, PolyError> {
        if f.is_zero() {
            return Ok(true);
        }
        Ok(self.restrict(f, limits)?.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize) -> RatFunc {
        RatFunc::var(3, i)
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn torus_relation_restricts_to_one() {
        let rel = ChartRelation::TorusProduct { vars: alloc::vec![0, 1, 2] };
        let f = &(&x(0) * &x(1)) * &x(2);
        let r = chart_restrict(&f, &rel, 2, &lim()).unwrap();
        assert!(ratfunc_equal(&r, &RatFunc::one(3), &lim()).unwrap());
    }

    #[test]
    fn sum_relation_restricts_to_zero() {
        let rel = ChartRelation::LinearSum { vars: alloc::vec![0, 1, 2] };
        let f = &(&x(0) + &x(1)) + &x(2);
        assert!(chart_restrict(&f, &rel, 2, &lim()).unwrap().is_zero());
    }

    #[test]
    fn ratio_on_torus_chart() {
        let rel = ChartRelation::TorusProduct { vars: alloc::vec![0, 1, 2] };
        let f = x(1).checked_div(&x(2)).unwrap();
        let r = chart_restrict(&f, &rel, 2, &lim()).unwrap();
        let expected = &(&x(0) * &x(1)) * &x(1);
        assert!(ratfunc_equal(&r, &expected, &lim()).unwrap());
    }

    #[test]
    fn recognizes_supported_forms() {
        let p = |f: RatFunc| f.num().clone();
        let torus = &p(&(&x(0) * &x(1)) * &x(2)) - &SparsePoly::one(3);
        assert_eq!(ChartRelation::recognize(&torus, 2).unwrap(), ChartRelation::TorusProduct { vars: alloc::vec![0, 1, 2] });
        let sum = p(&(&x(0) + &x(1)) + &x(2));
        assert_eq!(ChartRelation::recognize(&sum, 0).unwrap(), ChartRelation::LinearSum { vars: alloc::vec![0, 1, 2] });
        let quadric = &p(&x(0) * &x(1)) - &p(x(2));
        assert!(matches!(ChartRelation::recognize(&quadric, 2).unwrap(), ChartRelation::LinearIn { .. }));
    }

    #[test]
    fn rejects_unsupported_forms() {
        let conic = &(&x(0) * &x(0)) - &x(1);
        let err = ChartRelation::recognize(conic.num(), 0).unwrap_err();
        assert!(matches!(err, PolyError::UnsupportedRelation(_)));
        let rel = ChartRelation::LinearSum { vars: alloc::vec![0, 1] };
        assert!(matches!(rel.solve_for(3, 2), Err(PolyError::UnsupportedRelation(_))));
    }

    #[test]
    fn quadric_chart() {
        // a0*a3 - a1*a2 = 0 solved for a2 = a0*a3/a1
        let a = |i| RatFunc::var(4, i);
        let q = &(&a(0) * &a(3)) - &(&a(1) * &a(2));
        let rel = ChartRelation::recognize(q.num(), 2).unwrap();
        let chart = Chart::new(4, &[(rel, 2)]).unwrap();
        assert!(chart.is_zero(&q, &lim()).unwrap());
        assert!(!chart.is_zero(&a(2), &lim()).unwrap());
    }
}
