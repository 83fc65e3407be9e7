//! Finite groups given by generator actions on coordinate tuples, with
//! semilinear Galois generators, cocycle twists and the St/Tw embeddings of
//! S₃ into S₃×S₂.

mod action;
mod perm;

pub use action::{ActionGen, Coord, CoordTwist, NormalForm};
pub use perm::Perm;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::Rng;

use crate::field::QuadField;
use crate::ratmap::{VarietyError, VarietySpec};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("action arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("degenerate point: inverting a zero coordinate")]
    DegeneratePoint,
    #[error("incompatible twist: {0}")]
    IncompatibleTwist(String),
    #[error("unknown generator {0:?}")]
    UnknownLabel(String),
    #[error("relation {0} does not act as the identity")]
    RelationFailed(String),
    #[error("cocycle value c({0}) does not square to the identity")]
    CocycleNotInvolution(String),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// A word in generator labels, applied rightmost first.
pub type Word = Vec<String>;

fn word(labels: &[&str]) -> Word {
    labels.iter().map(|s| s.to_string()).collect()
}

pub fn render_word(w: &[String]) -> String {
    if w.is_empty() {
        "1".into()
    } else {
        w.join("·")
    }
}

/// An abstract finite group with its Galois generators; relations are
/// words that must act as the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    pub name: String,
    pub order: usize,
    pub generators: Vec<String>,
    pub galois: Vec<String>,
    pub relations: Vec<Word>,
}

impl GroupSpec {
    /// S₃ × Γ with generators `s12 = (1 2)`, `c123 = (1 2 3)`, `gamma`.
    pub fn s3_gamma() -> Self {
        GroupSpec {
            name: "S3 x Gamma".into(),
            order: 12,
            generators: word(&["s12", "c123"]),
            galois: word(&["gamma"]),
            relations: alloc::vec![
                word(&["s12", "s12"]),
                word(&["c123", "c123", "c123"]),
                word(&["s12", "c123", "s12", "c123"]),
                word(&["gamma", "gamma"]),
                word(&["s12", "gamma", "s12", "gamma"]),
                word(&["c123", "gamma", "c123", "c123", "gamma"]),
            ],
        }
    }

    /// (S₃ × S₂) × Γ; `eps` generates S₂.
    pub fn s3xs2_gamma() -> Self {
        let mut g = Self::s3_gamma();
        g.name = "S3 x S2 x Gamma".into();
        g.order = 24;
        g.generators.push("eps".into());
        g.relations.extend([
            word(&["eps", "eps"]),
            word(&["eps", "s12", "eps", "s12"]),
            word(&["eps", "c123", "eps", "c123", "c123"]),
            word(&["eps", "gamma", "eps", "gamma"]),
        ]);
        g
    }

    /// Sₙ by adjacent transpositions `s1, …, s(n-1)` (Coxeter presentation),
    /// with trivial Galois part.
    pub fn symmetric(n: usize) -> Self {
        let label = |i: usize| format!("s{i}");
        let mut relations = Vec::new();
        for i in 1..n {
            relations.push(alloc::vec![label(i), label(i)]);
            for j in i + 1..n {
                let k = if j == i + 1 { 3 } else { 2 };
                relations.push((0..k).flat_map(|_| [label(i), label(j)]).collect());
            }
        }
        GroupSpec {
            name: format!("S{n}"),
            order: (1..=n).product(),
            generators: (1..n).map(label).collect(),
            galois: Vec::new(),
            relations,
        }
    }

    /// Group generators followed by Galois generators.
    pub fn all_labels(&self) -> impl Iterator<Item = &String> {
        self.generators.iter().chain(&self.galois)
    }

    pub fn is_galois(&self, label: &str) -> bool {
        self.galois.iter().any(|g| g == label)
    }
}

/// Generator label → action on one variety.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ActionTable {
    entries: Vec<(String, ActionGen)>,
}

impl ActionTable {
    pub fn new(entries: Vec<(&str, ActionGen)>) -> Self {
        ActionTable { entries: entries.into_iter().map(|(l, g)| (l.to_string(), g)).collect() }
    }

    pub fn get(&self, label: &str) -> Result<&ActionGen, GroupError> {
        self.entries.iter().find(|(l, _)| l == label).map(|(_, g)| g).ok_or_else(|| GroupError::UnknownLabel(label.to_string()))
    }

    pub fn set(&mut self, label: &str, g: ActionGen) {
        match self.entries.iter_mut().find(|(l, _)| l == label) {
            Some(slot) => slot.1 = g,
            None => self.entries.push((label.to_string(), g)),
        }
    }

    pub fn entries(&self) -> &[(String, ActionGen)] {
        &self.entries
    }

    /// The action of a word (rightmost letter first); the empty word is the
    /// identity on `arity` coordinates.
    pub fn act_word(&self, w: &[String], arity: usize) -> Result<ActionGen, GroupError> {
        let mut acc = ActionGen::identity(arity);
        for label in w.iter().rev() {
            acc = acc.then(self.get(label)?)?;
        }
        Ok(acc)
    }

    /// Checks every label's twist against `v`.
    pub fn validate(&self, group: &GroupSpec, v: &VarietySpec) -> Result<(), GroupError> {
        for label in group.all_labels() {
            let g = self.get(label)?;
            g.validate_on(v)?;
        }
        Ok(())
    }

    /// Galois generators, and only they, act semilinearly.
    pub fn check_semilinear(&self, group: &GroupSpec) -> Result<(), GroupError> {
        for label in group.all_labels() {
            if self.get(label)?.conjugate != group.is_galois(label) {
                return Err(GroupError::IncompatibleTwist(format!("{label}: semilinearity must match the Galois generators")));
            }
        }
        Ok(())
    }

    /// Evaluates every defining relation at `trials` random points of `v`
    /// and requires the identity each time.
    pub fn check_relations<R: Rng + ?Sized>(
        &self,
        group: &GroupSpec,
        v: &VarietySpec,
        field: QuadField,
        rng: &mut R,
        trials: usize,
    ) -> Result<(), GroupError> {
        let words: Vec<(Word, ActionGen)> =
            group.relations.iter().map(|w| Ok((w.clone(), self.act_word(w, v.nvars())?))).collect::<Result<_, GroupError>>()?;
        for _ in 0..trials {
            let p = v.sample_point(rng, field, false)?;
            for (w, g) in &words {
                let image = g.apply(&p)?;
                if !v.points_equal(&image, &p) {
                    return Err(GroupError::RelationFailed(render_word(w)));
                }
            }
        }
        Ok(())
    }
}

/// Assignment of a word in the acting group to each Galois generator.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cocycle {
    values: BTreeMap<String, Word>,
}

impl Cocycle {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(values: &[(&str, &[&str])]) -> Self {
        Cocycle { values: values.iter().map(|(g, w)| (g.to_string(), word(w))).collect() }
    }

    pub fn value(&self, galois_label: &str) -> Word {
        self.values.get(galois_label).cloned().unwrap_or_default()
    }

    pub fn values(&self) -> impl Iterator<Item = (&String, &Word)> {
        self.values.iter()
    }
}

/// The twisted action: each Galois generator `γ` acts as `c(γ) ∘ γ`; other
/// generators are unchanged.
pub fn twist_action(group: &GroupSpec, base: &ActionTable, v: &VarietySpec, c: &Cocycle) -> Result<ActionTable, GroupError> {
    let n = v.nvars();
    let mut out = base.clone();
    for (g, w) in c.values() {
        if !group.is_galois(g) {
            return Err(GroupError::UnknownLabel(format!("{g} is not a Galois generator of {}", group.name)));
        }
        if let Some(bad) = w.iter().find(|l| !group.generators.contains(l)) {
            return Err(GroupError::UnknownLabel(format!("cocycle value {bad} is outside {}", group.name)));
        }
        let cg = base.act_word(w, n)?;
        if !cg.then(&cg)?.same_action(&ActionGen::identity(n).with_projective(base.get(g)?.projective), v) {
            return Err(GroupError::CocycleNotInvolution(g.clone()));
        }
        out.set(g, base.get(g)?.then(&cg)?);
    }
    Ok(out)
}

impl ActionGen {
    fn with_projective(mut self, projective: bool) -> Self {
        self.projective = projective;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Embedding {
    St,
    Tw,
}

/// `St(σ) = (σ, 1)`; `Tw(σ) = (σ, ε^{[sign σ = −1]})`. Returns the S₃ part
/// and whether the S₂ part is `ε`.
pub fn st_tw_embed(sigma: &Perm, mode: Embedding) -> (Perm, bool) {
    (sigma.clone(), mode == Embedding::Tw && sigma.sign() == -1)
}

/// Restricts an S₃×S₂ action table to S₃ along St or Tw. The generators of
/// S₃ are `s12` (odd) and `c123` (even); Galois generators carry over.
pub fn pullback(group: &GroupSpec, table: &ActionTable, mode: Embedding) -> Result<ActionTable, GroupError> {
    let mut out = ActionTable::default();
    for (label, sigma) in [("s12", Perm::transposition(3, 0, 1)), ("c123", Perm::cycle(3, &[0, 1, 2]))] {
        let g = table.get(label)?;
        let (_, eps) = st_tw_embed(&sigma, mode);
        out.set(label, if eps { g.then(table.get("eps")?)? } else { g.clone() });
    }
    for label in &group.galois {
        out.set(label, table.get(label)?.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmap::Factor;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn torus() -> VarietySpec {
        VarietySpec::simple("T", Factor::Torus { n: 3, product_one: true }, "x").unwrap()
    }

    fn t_table() -> ActionTable {
        ActionTable::new(alloc::vec![
            ("s12", ActionGen::permutation(Perm::transposition(3, 0, 1))),
            ("c123", ActionGen::permutation(Perm::cycle(3, &[0, 1, 2]))),
            ("eps", ActionGen::identity(3).with_twist(CoordTwist::Invert)),
            ("gamma", ActionGen::identity(3).conjugating()),
        ])
    }

    #[test]
    fn relations_hold_on_torus() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = GroupSpec::s3xs2_gamma();
        t_table().check_relations(&g, &torus(), QuadField::EISENSTEIN, &mut rng, 50).unwrap();
    }

    #[test]
    fn broken_relation_detected() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut t = t_table();
        t.set("c123", ActionGen::permutation(Perm::transposition(3, 0, 2)));
        let err = t.check_relations(&GroupSpec::s3_gamma(), &torus(), QuadField::EISENSTEIN, &mut rng, 10).unwrap_err();
        assert!(matches!(err, GroupError::RelationFailed(_)));
    }

    #[test]
    fn twisting_by_eps_inverts_gamma() {
        let g = GroupSpec::s3xs2_gamma();
        let c = Cocycle::new(&[("gamma", &["eps"])]);
        let tw = twist_action(&g, &t_table(), &torus(), &c).unwrap();
        let expected = ActionGen::identity(3).with_twist(CoordTwist::Invert).conjugating();
        assert!(tw.get("gamma").unwrap().same_action(&expected, &torus()));
        assert_eq!(tw.get("s12").unwrap(), t_table().get("s12").unwrap());
        // twisting back recovers the base action
        let back = twist_action(&g, &tw, &torus(), &c).unwrap();
        assert!(back.get("gamma").unwrap().same_action(t_table().get("gamma").unwrap(), &torus()));
        let trivial = twist_action(&g, &t_table(), &torus(), &Cocycle::trivial()).unwrap();
        assert_eq!(trivial, t_table());
    }

    #[test]
    fn cocycle_must_be_an_involution() {
        let c = Cocycle::new(&[("gamma", &["c123"])]);
        let err = twist_action(&GroupSpec::s3xs2_gamma(), &t_table(), &torus(), &c).unwrap_err();
        assert_eq!(err, GroupError::CocycleNotInvolution("gamma".into()));
        let c = Cocycle::new(&[("gamma", &["nope"])]);
        assert!(matches!(twist_action(&GroupSpec::s3xs2_gamma(), &t_table(), &torus(), &c), Err(GroupError::UnknownLabel(_))));
    }

    #[test]
    fn embeddings() {
        let t = Perm::transposition(3, 0, 1);
        let c = Perm::cycle(3, &[0, 1, 2]);
        assert_eq!(st_tw_embed(&t, Embedding::St), (t.clone(), false));
        assert_eq!(st_tw_embed(&t, Embedding::Tw), (t.clone(), true));
        assert_eq!(st_tw_embed(&c, Embedding::Tw), (c, false));
        let tw = pullback(&GroupSpec::s3xs2_gamma(), &t_table(), Embedding::Tw).unwrap();
        let s = tw.get("s12").unwrap();
        assert_eq!(s.twist, CoordTwist::Invert);
        assert_eq!(s.perm, t);
    }

    #[test]
    fn coxeter_presentation() {
        let g = GroupSpec::symmetric(3);
        assert_eq!(g.order, 6);
        assert_eq!(g.relations.len(), 3);
        let v = VarietySpec::simple("A3", Factor::Affine(3), "x").unwrap();
        let t = ActionTable::new(alloc::vec![
            ("s1", ActionGen::permutation(Perm::transposition(3, 0, 1))),
            ("s2", ActionGen::permutation(Perm::transposition(3, 1, 2))),
        ]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        t.check_relations(&g, &v, QuadField::GAUSSIAN, &mut rng, 20).unwrap();
    }
}
