use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

/// Permutation of `{0, …, n-1}`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// `images[i]` is the image of `i`; `None` unless a bijection.
    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let n = images.len();
        let mut seen = alloc::vec![false; n];
        for &i in &images {
            if i >= n || core::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Perm(images))
    }

    /// The cycle `c[0] → c[1] → … → c[0]` (0-based).
    pub fn cycle(n: usize, c: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for (k, &i) in c.iter().enumerate() {
            p.0[i] = c[(k + 1) % c.len()];
        }
        debug_assert!(Self::from_images(p.0.clone()).is_some());
        p
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        Self::cycle(n, &[i, j])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        let mut inv = alloc::vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Self {
        assert_eq!(self.len(), other.len());
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn sign(&self) -> i32 {
        let mut seen = alloc::vec![false; self.len()];
        let mut sign = 1;
        for start in 0..self.len() {
            let mut len = 0;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.0[i];
                len += 1;
            }
            if len > 0 && len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }

    /// `new_i = x_{π⁻¹(i)}`.
    pub fn permute<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let inv = self.inverse();
        inv.0.iter().map(|&j| x[j].clone()).collect()
    }

    /// Permutation of a block sum: `self` on each of `blocks` consecutive
    /// blocks, followed by `outer` permuting the blocks themselves.
    pub fn blockwise(&self, outer: &Perm) -> Self {
        let n = self.len();
        let mut images = alloc::vec![0; n * outer.len()];
        for b in 0..outer.len() {
            for i in 0..n {
                images[b * n + i] = outer.image(b) * n + self.image(i);
            }
        }
        Perm(images)
    }

    /// Cycle notation with 1-based points, e.g. `(1 2 3)`; `()` for the identity.
    pub fn cycle_string(&self) -> String {
        let mut out = String::new();
        let mut seen = alloc::vec![false; self.len()];
        for start in 0..self.len() {
            if seen[start] || self.0[start] == start {
                continue;
            }
            out.push('(');
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    out.push(' ');
                }
                let _ = write!(out, "{}", i + 1);
                first = false;
                i = self.0[i];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_cycle_moves_last_to_front() {
        let s = Perm::cycle(3, &[0, 1, 2]);
        assert_eq!(s.permute(&['a', 'b', 'c']), ['c', 'a', 'b']);
        assert_eq!(s.sign(), 1);
        assert_eq!(s.cycle_string(), "(1 2 3)");
    }

    #[test]
    fn compose_and_inverse() {
        let s = Perm::cycle(3, &[0, 1, 2]);
        let t = Perm::transposition(3, 0, 1);
        assert_eq!(t.sign(), -1);
        assert!(s.compose(&s.inverse()).is_identity());
        // permuting by t∘s is permuting by s then by t
        let x = [1, 2, 3];
        assert_eq!(t.compose(&s).permute(&x), t.permute(&s.permute(&x)));
        assert_eq!(Perm::identity(2).cycle_string(), "()");
        assert!(Perm::from_images(alloc::vec![0, 0]).is_none());
    }

    #[test]
    fn blockwise_swap() {
        let p = Perm::identity(2).blockwise(&Perm::transposition(2, 0, 1));
        assert_eq!(p.permute(&[1, 2, 3, 4]), [3, 4, 1, 2]);
    }
}
