//! Indexed families: uniformly decidable membership `decide(i, x)`.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::lang::Language;

pub const DEFAULT_UNIVERSE_BOUND: u32 = 64;

type LangFn = Arc<dyn Fn(u32) -> Language + Send + Sync>;

/// An indexed family of languages, given by a total map from index to
/// language. `decide(i, x)` is derived from it and is pure by construction.
#[derive(Clone)]
pub struct FamilySpec {
    pub name: String,
    lang: LangFn,
    /// Desk-scale representative indices.
    pub index_hints: Vec<u32>,
    pub universe_bound: u32,
    pub description: String,
}

impl FamilySpec {
    pub fn new(
        name: &str,
        description: &str,
        index_hints: Vec<u32>,
        lang: impl Fn(u32) -> Language + Send + Sync + 'static,
    ) -> Self {
        FamilySpec {
            name: name.to_string(),
            lang: Arc::new(lang),
            index_hints,
            universe_bound: DEFAULT_UNIVERSE_BOUND,
            description: description.to_string(),
        }
    }

    pub fn language(&self, i: u32) -> Language {
        (self.lang)(i)
    }

    pub fn decide(&self, i: u32, x: u32) -> bool {
        self.language(i).contains(x)
    }
}

impl std::fmt::Debug for FamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FamilySpec")
            .field("name", &self.name)
            .field("index_hints", &self.index_hints)
            .finish()
    }
}

/// Standard binary-expansion coding of finite sets: `i = Σ 2^d` for `d ∈ D`.
pub fn encode_finite_set(set: &BTreeSet<u32>) -> u32 {
    set.iter().fold(0u32, |acc, &d| acc | (1 << d))
}

pub fn decode_finite_set(i: u32) -> BTreeSet<u32> {
    (0..32).filter(|d| i & (1 << d) != 0).collect()
}
