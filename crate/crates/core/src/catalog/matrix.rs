use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use rand::Rng;

use crate::field::{random_scalar, QuadExt, QuadField, Rational};

/// Dense square matrix over ℚ(√d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<QuadExt>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, data: alloc::vec![QuadExt::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&alloc::vec![QuadExt::one(); n])
    }

    pub fn diag(d: &[QuadExt]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    pub fn from_rows(rows: &[&[QuadExt]]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.iter().flat_map(|r| r.iter().cloned()).collect() }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<Vec<QuadExt>> = rows.iter().map(|r| r.iter().map(|&x| QuadExt::from_i64(x)).collect()).collect();
        let refs: Vec<&[QuadExt]> = rows.iter().map(Vec::as_slice).collect();
        Self::from_rows(&refs)
    }

    /// Entries drawn by [`random_scalar`], zeros allowed with probability ~1/4.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, field: QuadField, rational_only: bool) -> Self {
        let data =
            (0..n * n).map(|_| if rng.gen_ratio(1, 4) { QuadExt::zero() } else { random_scalar(rng, field, rational_only) }).collect();
        Matrix { n, data }
    }

    /// Entries `a + b√d` with integers `|a|, |b| <= span`; keeps products
    /// and inverses of larger matrices small.
    pub fn random_integral<R: Rng + ?Sized>(rng: &mut R, n: usize, field: QuadField, rational_only: bool, span: i64) -> Self {
        let data = (0..n * n)
            .map(|_| {
                let a = Rational::from_integer(rng.gen_range(-span..=span));
                let b = if rational_only { Rational::zero() } else { Rational::from_integer(rng.gen_range(-span..=span)) };
                field.element(a, b)
            })
            .collect();
        Matrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[QuadExt] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Entrywise Galois conjugation.
    pub fn conjugate(&self) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(QuadExt::conjugate).collect() }
    }

    pub fn scale(&self, c: &QuadExt) -> Self {
        Matrix { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    pub fn trace(&self) -> QuadExt {
        (0..self.n).fold(QuadExt::zero(), |acc, i| &acc + &self[(i, i)])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(QuadExt::is_zero)
    }

    /// Gauss–Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[(r, col)].is_zero())?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[(col, col)].inv().ok()?;
            for j in 0..n {
                a[(col, j)] = &a[(col, j)] * &p;
                inv[(col, j)] = &inv[(col, j)] * &p;
            }
            for r in 0..n {
                if r == col || a[(r, col)].is_zero() {
                    continue;
                }
                let f = a[(r, col)].clone();
                for j in 0..n {
                    a[(r, j)] = &a[(r, j)] - &(&f * &a[(col, j)]);
                    inv[(r, j)] = &inv[(r, j)] - &(&f * &inv[(col, j)]);
                }
            }
        }
        Some(inv)
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = QuadExt;
    fn index(&self, (i, j): (usize, usize)) -> &QuadExt {
        &self.data[i * self.n + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut QuadExt {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        Matrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|a| -a).collect() }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !rhs[(k, j)].is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * &rhs[(k, j)]);
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.n {
            f.write_str(if i == 0 { "[" } else { ", [" })?;
            for j in 0..self.n {
                write!(f, "{}{}", if j == 0 { "" } else { ", " }, self[(i, j)])?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inverse_roundtrip() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut checked = 0;
        while checked < 10 {
            let m = Matrix::random(&mut rng, 3, QuadField::EISENSTEIN, false);
            if let Some(inv) = m.inverse() {
                assert_eq!(&m * &inv, Matrix::identity(3));
                checked += 1;
            }
        }
        assert!(Matrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn trace_and_transpose() {
        let m = Matrix::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(m.trace(), QuadExt::from_i64(5));
        assert_eq!(m.transpose(), Matrix::from_i64(&[&[1, 3], &[2, 4]]));
    }
}
