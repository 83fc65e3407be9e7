//! The Picard lattice of a degree-6 del Pezzo surface: basis `e₀, e₁, e₂, e₃`
//! with `e₀² = 1`, `eᵢ² = −1`, the S₃ and Galois actions, invariant
//! sublattices, the hexagon of lines, and `K²` bookkeeping along links.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::ratmap::Verdict;

/// Coefficients in the basis `e₀, e₁, e₂, e₃`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PicClass(pub [i64; 4]);

impl PicClass {
    pub const ZERO: PicClass = PicClass([0; 4]);

    pub fn e(i: usize) -> Self {
        let mut a = [0; 4];
        a[i] = 1;
        PicClass(a)
    }

    /// The canonical class `K = −3e₀ + e₁ + e₂ + e₃`.
    pub fn canonical() -> Self {
        PicClass([-3, 1, 1, 1])
    }

    /// `fᵢ = e₀ − eⱼ − eₖ` for `{i, j, k} = {1, 2, 3}`.
    pub fn f(i: usize) -> Self {
        assert!((1..=3).contains(&i));
        let mut a = [1, -1, -1, -1];
        a[i] = 0;
        PicClass(a)
    }

    pub fn content(self) -> i64 {
        self.0.iter().fold(0, |g, x| g.gcd(x))
    }
}

impl core::ops::Neg for PicClass {
    type Output = Self;
    fn neg(self) -> Self {
        PicClass(self.0.map(|x| -x))
    }
}

impl core::ops::Add for PicClass {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        PicClass(core::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl core::ops::Sub for PicClass {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + -o
    }
}

impl fmt::Display for PicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// `a₀b₀ − a₁b₁ − a₂b₂ − a₃b₃`.
pub fn inter(u: PicClass, v: PicClass) -> i64 {
    u.0[0] * v.0[0] - u.0[1] * v.0[1] - u.0[2] * v.0[2] - u.0[3] * v.0[3]
}

/// An integer 4×4 matrix acting on column vectors: column `j` is the
/// image of `eⱼ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticeMap {
    pub name: String,
    pub m: [[i64; 4]; 4],
}

impl LatticeMap {
    pub fn identity() -> Self {
        LatticeMap { name: "id".into(), m: core::array::from_fn(|i| core::array::from_fn(|j| i64::from(i == j))) }
    }

    /// The map with `eⱼ ↦ images[j]`.
    pub fn from_images(name: &str, images: [PicClass; 4]) -> Self {
        LatticeMap { name: name.to_string(), m: core::array::from_fn(|i| core::array::from_fn(|j| images[j].0[i])) }
    }

    /// Permutes `e₁, e₂, e₃` by `perm` (0-based images of indices 1..=3).
    pub fn permutation(name: &str, perm: [usize; 3]) -> Self {
        let mut images = [PicClass::e(0); 4];
        for (i, &p) in perm.iter().enumerate() {
            images[i + 1] = PicClass::e(p + 1);
        }
        Self::from_images(name, images)
    }

    pub fn apply(&self, c: PicClass) -> PicClass {
        PicClass(core::array::from_fn(|i| (0..4).map(|j| self.m[i][j] * c.0[j]).sum()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LatticeMap) -> LatticeMap {
        LatticeMap {
            name: format!("{}.{}", self.name, other.name),
            m: core::array::from_fn(|i| core::array::from_fn(|j| (0..4).map(|k| self.m[i][k] * other.m[k][j]).sum())),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.m == Self::identity().m
    }

    pub fn preserves_form(&self) -> bool {
        (0..4)
            .all(|i| (0..4).all(|j| inter(self.apply(PicClass::e(i)), self.apply(PicClass::e(j))) == inter(PicClass::e(i), PicClass::e(j))))
    }

    pub fn fixes(&self, c: PicClass) -> bool {
        self.apply(c) == c
    }
}

/// The Galois involution: `e₀ ↦ 2e₀ − e₁ − e₂ − e₃`, `eᵢ ↦ fᵢ`.
pub fn galois_map() -> LatticeMap {
    LatticeMap::from_images("gamma", [PicClass([2, -1, -1, -1]), PicClass::f(1), PicClass::f(2), PicClass::f(3)])
}

/// Generators `s12`, `c123` of S₃ and the Galois involution `gamma`.
pub fn standard_actions() -> Vec<LatticeMap> {
    alloc::vec![LatticeMap::permutation("s12", [1, 0, 2]), LatticeMap::permutation("c123", [1, 2, 0]), galois_map()]
}

/// Hermite normal form of the row lattice, zero rows dropped; leading
/// entries are positive.
pub fn hermite_rows(mut rows: Vec<[i64; 4]>) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for col in 0..4 {
        loop {
            let nz: Vec<usize> = (0..rows.len()).filter(|&r| rows[r][col] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&r| rows[r][col].abs()).unwrap();
            let pivot = rows[p];
            for &r in &nz {
                if r != p {
                    let q = Integer::div_floor(&rows[r][col], &pivot[col]);
                    for k in 0..4 {
                        rows[r][k] -= q * pivot[k];
                    }
                }
            }
        }
        if let Some(r) = (0..rows.len()).find(|&r| rows[r][col] != 0) {
            let mut row = rows.swap_remove(r);
            if row[col] < 0 {
                row = row.map(|x| -x);
            }
            out.push(row);
        }
    }
    for i in 0..out.len() {
        let col = (0..4).find(|&c| out[i][c] != 0).unwrap();
        for j in 0..i {
            let q = Integer::div_floor(&out[j][col], &out[i][col]);
            let pivot_row = out[i];
            for (x, y) in out[j].iter_mut().zip(pivot_row) {
                *x -= q * y;
            }
        }
    }
    out
}

/// Basis of `{v ∈ ℤ⁴ : g(v) = v for all g}`, in Hermite normal form.
///
/// Works row by row on a unimodular basis of the current kernel: each row
/// of the stacked `M_g − I` is cleared by gcd steps among the basis
/// vectors, and the one vector left with a nonzero value is dropped.
pub fn invariant_sublattice(gens: &[LatticeMap]) -> Vec<PicClass> {
    let mut basis: Vec<[i64; 4]> = (0..4).map(|i| PicClass::e(i).0).collect();
    for g in gens {
        for i in 0..4 {
            let row: [i64; 4] = core::array::from_fn(|j| g.m[i][j] - i64::from(i == j));
            let val = |b: &[i64; 4]| (0..4).map(|j| row[j] * b[j]).sum::<i64>();
            loop {
                let nz: Vec<usize> = (0..basis.len()).filter(|&k| val(&basis[k]) != 0).collect();
                if nz.len() <= 1 {
                    if let Some(&k) = nz.first() {
                        basis.remove(k);
                    }
                    break;
                }
                let p = *nz.iter().min_by_key(|&&k| val(&basis[k]).abs()).unwrap();
                let (pb, pv) = (basis[p], val(&basis[p]));
                for &k in &nz {
                    if k != p {
                        let q = Integer::div_floor(&val(&basis[k]), &pv);
                        for j in 0..4 {
                            basis[k][j] -= q * pb[j];
                        }
                    }
                }
            }
        }
    }
    hermite_rows(basis).into_iter().map(PicClass).collect()
}

/// The six lines `e₁, e₂, e₃, f₁, f₂, f₃`, labelled.
pub fn line_classes() -> Vec<(String, PicClass)> {
    let mut out: Vec<(String, PicClass)> = (1..=3).map(|i| (format!("e{i}"), PicClass::e(i))).collect();
    out.extend((1..=3).map(|i| (format!("f{i}"), PicClass::f(i))));
    out
}

/// Walks the adjacency graph (intersection 1) from the first line; returns
/// the cycle if every line meets exactly two others and the walk closes
/// after visiting all six.
pub fn hexagon(lines: &[(String, PicClass)]) -> Option<Vec<usize>> {
    let n = lines.len();
    let adj: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && inter(lines[i].1, lines[j].1) == 1).collect()).collect();
    if adj.iter().any(|a| a.len() != 2) {
        return None;
    }
    let mut cycle = alloc::vec![0, adj[0][0]];
    while cycle.len() < n {
        let (prev, cur) = (cycle[cycle.len() - 2], cycle[cycle.len() - 1]);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        if cycle.contains(&next) {
            return None;
        }
        cycle.push(next);
    }
    adj[cycle[n - 1]].contains(&0).then_some(cycle)
}

/// Orbits of the lines under the group generated by `gens`, as sorted
/// index lists.
pub fn line_orbits(lines: &[(String, PicClass)], gens: &[LatticeMap]) -> Vec<Vec<usize>> {
    let idx = |c: PicClass| lines.iter().position(|(_, l)| *l == c);
    let mut seen = alloc::vec![false; lines.len()];
    let mut orbits = Vec::new();
    for start in 0..lines.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = alloc::vec![start];
        seen[start] = true;
        let mut i = 0;
        while i < orbit.len() {
            for g in gens {
                if let Some(j) = idx(g.apply(lines[orbit[i]].1)) {
                    if !seen[j] {
                        seen[j] = true;
                        orbit.push(j);
                    }
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LedgerKind {
    Blowup,
    Blowdown,
}

/// One blow-up or blow-down of an invariant 0-dimensional subscheme.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LedgerStep {
    pub kind: LedgerKind,
    pub degree: u32,
}

impl LedgerStep {
    pub fn blowup(degree: u32) -> Self {
        LedgerStep { kind: LedgerKind::Blowup, degree }
    }

    pub fn blowdown(degree: u32) -> Self {
        LedgerStep { kind: LedgerKind::Blowdown, degree }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerRun {
    pub values: Vec<i64>,
    pub warnings: Vec<String>,
}

/// `K²` along the steps: a blow-up of degree `d` subtracts `d`, a
/// blow-down adds `d`. Values outside `[1, 9]` produce warnings.
pub fn ledger_run(start_k2: i64, steps: &[LedgerStep]) -> LedgerRun {
    let mut values = alloc::vec![start_k2];
    let mut warnings = Vec::new();
    let mut cur = start_k2;
    for (i, s) in steps.iter().enumerate() {
        if s.degree == 0 {
            warnings.push(format!("step {}: degree 0 ignored", i + 1));
            continue;
        }
        let d = i64::from(s.degree);
        cur = match s.kind {
            LedgerKind::Blowup => cur - d,
            LedgerKind::Blowdown => cur + d,
        };
        values.push(cur);
    }
    for (i, v) in values.iter().enumerate() {
        if !(1..=9).contains(v) {
            warnings.push(format!("value {i}: K^2 = {v} is outside the del Pezzo range [1, 9]"));
        }
    }
    LedgerRun { values, warnings }
}

fn render(cs: &[PicClass]) -> String {
    let parts: Vec<String> = cs.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(", "))
}

/// Form preservation and `K`-invariance of each generator.
pub fn lattice_map_verdicts(gens: &[LatticeMap]) -> Vec<Verdict> {
    let k = PicClass::canonical();
    let mut out = Vec::new();
    for g in gens {
        out.push(Verdict::from_bool(format!("form preserved[{}]", g.name), g.preserves_form(), format!("{:?}", g.m)));
        out.push(Verdict::from_bool(format!("fixes K[{}]", g.name), g.fixes(k), format!("image of K: {}", g.apply(k))));
    }
    out
}

/// The intersection form and the generators.
pub fn form_verdicts() -> Vec<Verdict> {
    let k = PicClass::canonical();
    let mut out = alloc::vec![
        Verdict::from_bool("K^2 = 6", inter(k, k) == 6, format!("K = {k}, K^2 = {}", inter(k, k))),
        Verdict::from_bool("e1^2 = -1", inter(PicClass::e(1), PicClass::e(1)) == -1, "form definition"),
        Verdict::from_bool("e1.f2 = 1", inter(PicClass::e(1), PicClass::f(2)) == 1, format!("f2 = {}", PicClass::f(2))),
    ];
    let gens = standard_actions();
    out.extend(lattice_map_verdicts(&gens));
    let g = galois_map();
    out.push(Verdict::from_bool("gamma^2 = id", g.compose(&g).is_identity(), "integer matrix product"));
    let fixed = (1..=3).all(|i| g.fixes(PicClass::e(0) - PicClass::e(i)));
    out.push(Verdict::from_bool("gamma fixes e0 - ei", fixed, "each pencil of conics is defined over the base"));
    out.push(Verdict::from_bool(
        "gamma(e0) = -K - e0",
        g.apply(PicClass::e(0)) == -k - PicClass::e(0),
        format!("gamma(e0) = {}", g.apply(PicClass::e(0))),
    ));
    let s = &gens[0];
    out.push(Verdict::from_bool(
        "s12 swaps f1 and f2",
        s.apply(PicClass::f(1)) == PicClass::f(2) && s.apply(PicClass::f(2)) == PicClass::f(1) && s.fixes(PicClass::f(3)),
        "transposition of e1, e2",
    ));
    out
}

pub fn invariant_verdicts() -> Vec<Verdict> {
    let gens = standard_actions();
    let k = PicClass::canonical();
    let full = invariant_sublattice(&gens);
    let s3 = invariant_sublattice(&gens[..2]);
    let none = invariant_sublattice(&[]);
    let all_fixed = |b: &[PicClass], gs: &[LatticeMap]| b.iter().all(|c| gs.iter().all(|g| g.fixes(*c)));
    alloc::vec![
        Verdict::from_bool("S3 x Gamma invariants = ZK", full == [k] || full == [-k], format!("basis {}", render(&full))),
        Verdict::from_bool("S3 invariants", s3 == [PicClass([1, 0, 0, 0]), PicClass([0, 1, 1, 1])], format!("basis {}", render(&s3)),),
        Verdict::from_bool("no generators: rank 4", none.len() == 4, format!("basis {}", render(&none))),
        Verdict::from_bool(
            "basis vectors are fixed and primitive",
            all_fixed(&full, &gens) && all_fixed(&s3, &gens[..2]) && full.iter().chain(&s3).all(|c| c.content() == 1),
            "direct re-check",
        ),
    ]
}

pub fn line_verdicts() -> Vec<Verdict> {
    let lines = line_classes();
    let k = PicClass::canonical();
    let mut out = alloc::vec![
        Verdict::from_bool("six lines", lines.len() == 6, "e1, e2, e3, f1, f2, f3"),
        Verdict::from_bool("self-intersection -1", lines.iter().all(|(_, l)| inter(*l, *l) == -1), "each line"),
        Verdict::from_bool("K.l = -1", lines.iter().all(|(_, l)| inter(k, *l) == -1), "each line"),
    ];
    let cycle = hexagon(&lines);
    let names: Vec<&str> = cycle.iter().flatten().map(|&i| lines[i].0.as_str()).collect();
    out.push(Verdict::from_bool("hexagon", cycle.is_some(), format!("cycle {}", names.join(" - "))));
    let opposite = cycle.as_ref().is_some_and(|c| {
        (1..=3).all(|i| {
            let a = c.iter().position(|&x| x == i - 1).unwrap();
            let b = c.iter().position(|&x| x == i + 2).unwrap();
            a.abs_diff(b) == 3 && inter(PicClass::e(i), PicClass::f(i)) == 0
        })
    });
    out.push(Verdict::from_bool("opposite sides {ei, fi}", opposite, "disjoint and three steps apart"));
    let gens = standard_actions();
    let orbits_full = line_orbits(&lines, &gens);
    let orbits_s3 = line_orbits(&lines, &gens[..2]);
    let gamma = &gens[2];
    out.push(Verdict::from_bool(
        "gamma pairs ei with fi",
        (1..=3).all(|i| gamma.apply(PicClass::e(i)) == PicClass::f(i) && gamma.apply(PicClass::f(i)) == PicClass::e(i)),
        "conjugate lines are opposite",
    ));
    out.push(Verdict::from_bool(
        "line orbits",
        orbits_full.len() == 1 && orbits_s3 == [alloc::vec![0, 1, 2], alloc::vec![3, 4, 5]],
        format!("S3 x Gamma: {} orbit(s); S3: {:?}", orbits_full.len(), orbits_s3),
    ));
    out
}

pub fn ledger_verdicts() -> Vec<Verdict> {
    let main = ledger_run(6, &[LedgerStep::blowup(1), LedgerStep::blowdown(3)]);
    let d5 = ledger_run(8, &[LedgerStep::blowup(5), LedgerStep::blowdown(2)]);
    let empty = ledger_run(6, &[]);
    let low = ledger_run(2, &[LedgerStep::blowup(3)]);
    alloc::vec![
        Verdict::from_bool("X <- X' -> Q", main.values == [6, 5, 8] && main.warnings.is_empty(), format!("{:?}", main.values)),
        Verdict::from_bool(
            "Q <- Z -> D5",
            d5.values == [8, 3, 5] && d5.warnings.is_empty(),
            format!("{:?} (blow-down degree inferred)", d5.values)
        ),
        Verdict::from_bool("empty run", empty.values == [6], format!("{:?}", empty.values)),
        Verdict::from_bool("out-of-range warning", low.warnings.len() == 1, format!("{:?}", low.warnings)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_verdicts_pass() {
        for v in form_verdicts().into_iter().chain(invariant_verdicts()).chain(line_verdicts()).chain(ledger_verdicts()) {
            assert!(v.pass, "{v:?}");
        }
    }

    #[test]
    fn e1_f1_disjoint() {
        assert_eq!(inter(PicClass::e(1), PicClass::f(1)), 0);
        assert_eq!(inter(PicClass::canonical(), PicClass::e(1)), -1);
    }

    #[test]
    fn off_by_one_matrix_is_caught() {
        let mut g = galois_map();
        g.m[0][1] += 1;
        let failed: Vec<String> = lattice_map_verdicts(&[g]).into_iter().filter(|v| !v.pass).map(|v| v.check).collect();
        assert!(failed.contains(&"form preserved[gamma]".to_string()));
    }

    #[test]
    fn hermite_is_canonical() {
        let a = hermite_rows(alloc::vec![[2, 4, 0, 0], [3, 6, 1, 0]]);
        let b = hermite_rows(alloc::vec![[3, 6, 1, 0], [5, 10, 1, 0]]);
        assert_eq!(a, b);
    }

    #[test]
    fn single_transposition_invariants() {
        let b = invariant_sublattice(&[LatticeMap::permutation("s12", [1, 0, 2])]);
        assert_eq!(b, [PicClass([1, 0, 0, 0]), PicClass([0, 1, 1, 0]), PicClass([0, 0, 0, 1])]);
    }
}
