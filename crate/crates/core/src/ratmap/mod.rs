//! Equivariant rational maps between varieties, with exact certificates for
//! equivariance, composition and two-sided inverses.

mod cert;
mod map;
mod variety;

pub use cert::{Certificate, Status, Verdict};
pub use map::{tuple_equal, EquivMap};
pub use variety::{Factor, VarietyError, VarietySpec};

use alloc::string::String;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::field::{QuadExt, QuadField};
use crate::group::GroupError;
use crate::poly::{Limits, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("degenerate composition: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

impl MapError {
    /// Whether the error is a term-budget overrun (reported separately from
    /// mathematical failures).
    pub fn is_budget(&self) -> bool {
        matches!(self, MapError::Poly(PolyError::Budget { .. }) | MapError::Variety(VarietyError::Poly(PolyError::Budget { .. })))
    }
}

/// Settings shared by every check of a run.
#[derive(Clone, Debug)]
pub struct CheckCtx {
    pub limits: Limits,
    pub seed: u64,
    /// Random points for spot checks.
    pub trials: usize,
    /// Random points for group-relation sanity checks.
    pub relation_trials: usize,
    pub field: QuadField,
}

impl CheckCtx {
    pub fn new(seed: u64) -> Self {
        CheckCtx { limits: Limits::default(), seed, trials: 100, relation_trials: 50, field: QuadField::EISENSTEIN }
    }

    /// Deterministic generator for the task named `label`, independent of
    /// scheduling order.
    pub fn rng(&self, label: &str) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ fnv1a(label.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// A random point of `v`, reproducible from `seed`.
pub fn random_point(v: &VarietySpec, field: QuadField, seed: u64) -> Result<Vec<QuadExt>, VarietyError> {
    v.sample_point(&mut ChaCha8Rng::seed_from_u64(seed), field, false)
}
