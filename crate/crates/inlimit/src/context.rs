//! Shared evaluation context: family and learner registries plus search caps.
//!
//! The context is built mutably during setup, then frozen (shared immutably)
//! before any run. All registered values are pure, so the memo table only
//! caches, never changes, results.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::learner::Learner;

/// Explicit caps for every combinatorial search. Exceeding one is a loud
/// `CapExceeded`, never a silent truncation.
#[derive(Clone, Debug)]
pub struct Caps {
    /// Semantic checks are restricted to `[0, universe_bound]`.
    pub universe_bound: u32,
    /// Default text horizon.
    pub horizon: usize,
    /// Max size of a subset-enumeration base (2^n candidate sets).
    pub subset_scan: usize,
    /// Max length of extension sequences in locking-candidate searches.
    pub ext_len: usize,
    /// Partially set-driven simulation: max counter value.
    pub psd_t_max: usize,
    /// Partially set-driven simulation: max input-set size.
    pub psd_set_max: usize,
    /// Max number of candidates examined in an ordered min-search.
    pub candidate_scan: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            universe_bound: 64,
            horizon: 100,
            subset_scan: 12,
            ext_len: 3,
            psd_t_max: 5,
            psd_set_max: 4,
            candidate_scan: 1 << 12,
        }
    }
}

#[derive(Default)]
pub struct Context {
    families: BTreeMap<String, FamilySpec>,
    learners: BTreeMap<String, Arc<Learner>>,
    pub caps: Caps,
    eval_memo: Mutex<HashMap<(String, u32), bool>>,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn with_caps(caps: Caps) -> Self {
        Context {
            caps,
            ..Context::default()
        }
    }

    pub fn add_family(&mut self, f: FamilySpec) {
        self.families.entry(f.name.clone()).or_insert(f);
    }

    pub fn family(&self, name: &str) -> Result<&FamilySpec> {
        self.families
            .get(name)
            .ok_or_else(|| Error::UnresolvedFamily(name.to_string()))
    }

    pub fn families(&self) -> impl Iterator<Item = &FamilySpec> {
        self.families.values()
    }

    /// Registers a learner under its own name. The registry is append-only:
    /// a name already present keeps its first registration.
    pub fn add_learner(&mut self, l: Arc<Learner>) -> Arc<Learner> {
        self.learners
            .entry(l.name.clone())
            .or_insert(l)
            .clone()
    }

    pub fn learner(&self, name: &str) -> Result<&Arc<Learner>> {
        self.learners
            .get(name)
            .ok_or_else(|| Error::UnresolvedLearner(name.to_string()))
    }

    pub fn learners(&self) -> impl Iterator<Item = &Arc<Learner>> {
        self.learners.values()
    }

    /// A context holding the same registries with a fresh memo table; new
    /// registrations in the child never leak back.
    pub fn child(&self) -> Context {
        Context {
            families: self.families.clone(),
            learners: self.learners.clone(),
            caps: self.caps.clone(),
            eval_memo: Mutex::new(HashMap::new()),
        }
    }

    pub(crate) fn memo_get(&self, key: &str, x: u32) -> Option<bool> {
        self.eval_memo
            .lock()
            .unwrap()
            .get(&(key.to_string(), x))
            .copied()
    }

    pub(crate) fn memo_put(&self, key: String, x: u32, v: bool) {
        self.eval_memo.lock().unwrap().insert((key, x), v);
    }
}
