use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use rand::Rng;

use crate::field::{random_scalar, QuadExt, QuadField};
use crate::poly::{Chart, ChartRelation, PolyError, SparsePoly};

/// One factor of a product variety.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factor {
    /// Affine space 𝔸ⁿ.
    Affine(usize),
    /// 𝔾ₘⁿ, optionally cut down by `x₁⋯xₙ = 1`.
    Torus { n: usize, product_one: bool },
    /// The hyperplane `x₁ + ⋯ + xₙ = 0`.
    LinearSlice(usize),
    /// 𝔸ⁿ modulo translation by the diagonal `(1, …, 1)`, the Lie algebra of
    /// 𝔾ₘⁿ/𝔾ₘ.
    DiagonalQuotient(usize),
    /// Projectivization of a cone: classes of nonzero points up to scalar.
    Projective(Box<Factor>),
}

impl Factor {
    pub fn projective(inner: Factor) -> Factor {
        Factor::Projective(Box::new(inner))
    }

    pub fn arity(&self) -> usize {
        match self {
            Factor::Affine(n) | Factor::LinearSlice(n) | Factor::DiagonalQuotient(n) => *n,
            Factor::Torus { n, .. } => *n,
            Factor::Projective(inner) => inner.arity(),
        }
    }

    pub fn is_projective(&self) -> bool {
        matches!(self, Factor::Projective(_))
    }

    /// Coordinates are units (inversion is a valid twist).
    pub fn is_multiplicative(&self) -> bool {
        match self {
            Factor::Torus { .. } => true,
            Factor::Projective(inner) => inner.is_multiplicative(),
            _ => false,
        }
    }

    pub fn is_additive(&self) -> bool {
        !self.is_multiplicative()
    }

    fn validate(&self) -> Result<(), VarietyError> {
        match self {
            Factor::Projective(inner) => match inner.as_ref() {
                Factor::Affine(_) | Factor::LinearSlice(_) | Factor::Torus { product_one: false, .. } => Ok(()),
                other => Err(VarietyError::Malformed(format!("cannot projectivize {other}"))),
            },
            Factor::Torus { n: 0, .. } | Factor::Affine(0) => Err(VarietyError::Malformed("empty factor".into())),
            Factor::LinearSlice(n) | Factor::DiagonalQuotient(n) if *n < 2 => {
                Err(VarietyError::Malformed(format!("{self} needs at least two coordinates")))
            }
            _ => Ok(()),
        }
    }

    fn inner_relation(&self) -> Option<fn(Vec<usize>) -> ChartRelation> {
        match self {
            Factor::Torus { product_one: true, .. } => Some(|vars| ChartRelation::TorusProduct { vars }),
            Factor::LinearSlice(_) => Some(|vars| ChartRelation::LinearSum { vars }),
            Factor::Projective(inner) => inner.inner_relation(),
            _ => None,
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Factor::Affine(n) => write!(f, "A^{n}"),
            Factor::Torus { n, product_one: true } => write!(f, "T{n}"),
            Factor::Torus { n, product_one: false } => write!(f, "Gm^{n}"),
            Factor::LinearSlice(n) => write!(f, "t{n}"),
            Factor::DiagonalQuotient(n) => write!(f, "A^{n}/A^1"),
            Factor::Projective(inner) => write!(f, "P({inner})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VarietyError {
    #[error("malformed variety: {0}")]
    Malformed(String),
    #[error("point has {got} coordinates, variety has {expected}")]
    Arity { expected: usize, got: usize },
    #[error("sampling retry budget exhausted after {0} attempts")]
    SamplingExhausted(usize),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// A product of factors, optionally cut by extra hypersurface relations,
/// with named coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietySpec {
    name: String,
    factors: Vec<Factor>,
    coords: Vec<String>,
    hypersurfaces: Vec<(SparsePoly, usize)>,
}

impl VarietySpec {
    pub fn new(name: &str, factors: Vec<Factor>, coords: &[&str]) -> Result<Self, VarietyError> {
        for f in &factors {
            f.validate()?;
        }
        let n: usize = factors.iter().map(Factor::arity).sum();
        if coords.len() != n {
            return Err(VarietyError::Malformed(format!("{} coordinate names for {n} coordinates", coords.len())));
        }
        Ok(VarietySpec {
            name: name.to_string(),
            factors,
            coords: coords.iter().map(|s| s.to_string()).collect(),
            hypersurfaces: Vec::new(),
        })
    }

    /// Single-factor variety with coordinates `prefix1, prefix2, …`.
    pub fn simple(name: &str, factor: Factor, prefix: &str) -> Result<Self, VarietyError> {
        let names: Vec<String> = (1..=factor.arity()).map(|i| format!("{prefix}{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::new(name, alloc::vec![factor], &refs)
    }

    /// Cuts by `p = 0`, solved for coordinate `eliminated` on charts.
    pub fn with_hypersurface(mut self, p: SparsePoly, eliminated: usize) -> Result<Self, VarietyError> {
        if p.nvars() != self.nvars() {
            return Err(VarietyError::Arity { expected: self.nvars(), got: p.nvars() });
        }
        if self.blocks().iter().any(|(r, f)| f.is_projective() && r.contains(&eliminated)) {
            let (r, _) = self.blocks().into_iter().find(|(r, _)| r.contains(&eliminated)).unwrap();
            let vars: Vec<usize> = r.collect();
            if !p.is_homogeneous_in(&vars) {
                return Err(VarietyError::Malformed("hypersurface in a projective factor must be homogeneous".into()));
            }
        }
        ChartRelation::recognize(&p, eliminated)?;
        self.hypersurfaces.push((p, eliminated));
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nvars(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> Vec<&str> {
        self.coords.iter().map(String::as_str).collect()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn hypersurfaces(&self) -> &[(SparsePoly, usize)] {
        &self.hypersurfaces
    }

    /// Coordinate ranges of the factors, in order.
    pub fn blocks(&self) -> Vec<(Range<usize>, &Factor)> {
        let mut start = 0;
        self.factors
            .iter()
            .map(|f| {
                let r = start..start + f.arity();
                start = r.end;
                (r, f)
            })
            .collect()
    }

    /// Same factors and relations, ignoring names.
    pub fn same_shape(&self, other: &VarietySpec) -> bool {
        self.factors == other.factors && self.hypersurfaces == other.hypersurfaces
    }

    pub fn is_multiplicative(&self) -> bool {
        self.factors.iter().all(Factor::is_multiplicative)
    }

    pub fn is_additive(&self) -> bool {
        self.factors.iter().all(Factor::is_additive)
    }

    /// Every relation with the coordinate it eliminates: the last coordinate
    /// of each torus or slice factor, then the hypersurfaces.
    pub fn relations(&self) -> Result<Vec<(ChartRelation, usize)>, VarietyError> {
        let mut out = Vec::new();
        for (r, f) in self.blocks() {
            if let Some(make) = f.inner_relation() {
                let last = r.end - 1;
                out.push((make(r.collect()), last));
            }
        }
        for (p, e) in &self.hypersurfaces {
            out.push((ChartRelation::recognize(p, *e)?, *e));
        }
        Ok(out)
    }

    /// Chart on `nvars() + extra` variables (the extra ones are free).
    pub fn chart_with_extra(&self, extra: usize) -> Result<Chart, VarietyError> {
        let n = self.nvars() + extra;
        let rels: Vec<(ChartRelation, usize)> = self
            .relations()?
            .into_iter()
            .map(|(rel, e)| {
                let rel = match rel {
                    ChartRelation::LinearIn { poly } => {
                        let map: Vec<usize> = (0..poly.nvars()).collect();
                        ChartRelation::LinearIn { poly: poly.remap_vars(n, &map) }
                    }
                    other => other,
                };
                (rel, e)
            })
            .collect();
        Ok(Chart::new(n, &rels)?)
    }

    pub fn chart(&self) -> Result<Chart, VarietyError> {
        self.chart_with_extra(0)
    }

    /// Whether `p` lies on the variety (relations hold, torus coordinates
    /// are units, projective blocks are nonzero).
    pub fn contains(&self, p: &[QuadExt]) -> Result<bool, VarietyError> {
        if p.len() != self.nvars() {
            return Err(VarietyError::Arity { expected: self.nvars(), got: p.len() });
        }
        for (r, f) in self.blocks() {
            let block = &p[r];
            if f.is_multiplicative() && block.iter().any(QuadExt::is_zero) {
                return Ok(false);
            }
            if f.is_projective() && block.iter().all(QuadExt::is_zero) {
                return Ok(false);
            }
        }
        for (rel, _) in self.relations()? {
            if !rel.polynomial(self.nvars()).eval(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether every relation vanishes at `p`, ignoring the open conditions.
    pub fn satisfies_relations(&self, p: &[QuadExt]) -> Result<bool, VarietyError> {
        if p.len() != self.nvars() {
            return Err(VarietyError::Arity { expected: self.nvars(), got: p.len() });
        }
        for (rel, _) in self.relations()? {
            if !rel.polynomial(self.nvars()).eval(p)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of two points of the variety: up to a scalar on projective
    /// blocks, up to a diagonal translation on quotient blocks.
    pub fn points_equal(&self, p: &[QuadExt], q: &[QuadExt]) -> bool {
        if p.len() != q.len() {
            return false;
        }
        self.blocks().into_iter().all(|(r, f)| {
            let (a, b) = (&p[r.clone()], &q[r]);
            match f {
                Factor::Projective(_) => {
                    let nonzero = |v: &[QuadExt]| v.iter().any(|x| !x.is_zero());
                    nonzero(a) && nonzero(b) && (0..a.len()).all(|i| (i + 1..a.len()).all(|j| (&a[i] * &b[j]) == (&a[j] * &b[i])))
                }
                Factor::DiagonalQuotient(_) => {
                    let d0 = &a[0] - &b[0];
                    a.iter().zip(b).all(|(x, y)| (x - y) == d0)
                }
                _ => a == b,
            }
        })
    }

    /// A random point exactly on the variety. Free coordinates are random
    /// nonzero field elements; each relation's eliminated coordinate is
    /// solved from the others.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R, field: QuadField, rational_only: bool) -> Result<Vec<QuadExt>, VarietyError> {
        self.sample_point_where(rng, field, rational_only, 64, |_| true)
    }

    /// Like [`sample_point`](Self::sample_point), resampling until `accept`
    /// holds, at most `retries` times.
    pub fn sample_point_where<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        field: QuadField,
        rational_only: bool,
        retries: usize,
        mut accept: impl FnMut(&[QuadExt]) -> bool,
    ) -> Result<Vec<QuadExt>, VarietyError> {
        let rels = self.relations()?;
        let chart = self.chart()?;
        for _ in 0..retries.max(1) {
            let mut p: Vec<QuadExt> = (0..self.nvars()).map(|_| random_scalar(rng, field, rational_only)).collect();
            let mut ok = true;
            for (_, e) in &rels {
                match chart.substitution()[*e].eval(&p) {
                    Ok(v) => p[*e] = v,
                    Err(_) => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.contains(&p)? && accept(&p) {
                return Ok(p);
            }
        }
        Err(VarietyError::SamplingExhausted(retries.max(1)))
    }
}

impl fmt::Display for VarietySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torus_sample_has_product_one() {
        let t = VarietySpec::simple("T", Factor::Torus { n: 3, product_one: true }, "t").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let p = t.sample_point(&mut rng, QuadField::EISENSTEIN, false).unwrap();
            assert_eq!(&(&p[0] * &p[1]) * &p[2], QuadExt::one());
        }
        let q = [QuadExt::from_i64(2), QuadExt::from_i64(3), QuadExt::frac(1, 6)];
        assert!(t.contains(&q).unwrap());
    }

    #[test]
    fn slice_sample_sums_to_zero() {
        let s = VarietySpec::simple("t", Factor::LinearSlice(3), "x").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = s.sample_point(&mut rng, QuadField::EISENSTEIN, false).unwrap();
        assert!((&(&p[0] + &p[1]) + &p[2]).is_zero());
        let q = [QuadExt::from_i64(5), QuadExt::from_i64(-2), QuadExt::from_i64(-3)];
        assert!(s.contains(&q).unwrap());
    }

    #[test]
    fn projective_points_compare_up_to_scalar() {
        let p3 = VarietySpec::simple("P3", Factor::projective(Factor::Affine(4)), "a").unwrap();
        let p: Vec<QuadExt> = [1, 2, 3, 6].iter().map(|&k| QuadExt::from_i64(k)).collect();
        let q: Vec<QuadExt> = p.iter().map(|x| x * &QuadExt::frac(-5, 7)).collect();
        assert!(p3.points_equal(&p, &q));
        let zero = alloc::vec![QuadExt::zero(); 4];
        assert!(!p3.points_equal(&p, &zero));
        assert!(!p3.contains(&zero).unwrap());
    }

    #[test]
    fn quadric_sampling_lands_on_quadric() {
        let a = |i| SparsePoly::var(4, i);
        let q = &(&a(0) * &a(3)) - &(&a(1) * &a(2));
        let v = VarietySpec::simple("Q", Factor::projective(Factor::Affine(4)), "a").unwrap().with_hypersurface(q.clone(), 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = v.sample_point(&mut rng, QuadField::EISENSTEIN, false).unwrap();
        assert!(q.eval(&p).unwrap().is_zero());
    }

    #[test]
    fn malformed_varieties() {
        assert!(VarietySpec::simple("bad", Factor::projective(Factor::Torus { n: 3, product_one: true }), "x").is_err());
        assert!(VarietySpec::new("bad", alloc::vec![Factor::Affine(2)], &["x"]).is_err());
    }
}
