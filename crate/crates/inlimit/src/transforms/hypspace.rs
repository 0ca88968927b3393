//! Canonical-representative indexing: trading arbitrary hypotheses for a
//! hypothesis space built "on the run", and back.
//!
//! `to_hypothesis_space` maps a learner to an index learner over the space
//! `(C_{h*(σ)})_σ`: the emitted index encodes the ≤-minimal sequence whose
//! hypothesis equals the current one, so mind changes coincide with the base
//! learner's and semantics are preserved pointwise. `to_cind` turns an index
//! learner back into a term learner over the registered space family.

use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::family::FamilySpec;
use crate::lang::Language;
use crate::learner::{Kind, Learner};
use crate::seq::{Datum, Seq};
use crate::term::HypTerm;

/// Sequences are numbered by bijective base-(B+2) numeration of their item
/// codes, which is order-isomorphic to the length-lexicographic order:
/// `ε ↦ 0`, and longer or lexicographically larger sequences get larger
/// numbers.
pub fn seq_rank(s: &Seq, universe_bound: u32) -> Option<u32> {
    let base = u64::from(universe_bound) + 2;
    let mut acc: u64 = 0;
    for d in s.items() {
        let digit = d.code() + 1; // 1..=base
        if digit > base {
            return None;
        }
        acc = acc.checked_mul(base)?.checked_add(digit)?;
        if acc > u64::from(u32::MAX) {
            return None;
        }
    }
    Some(acc as u32)
}

pub fn seq_unrank(i: u32, universe_bound: u32) -> Seq {
    let base = u64::from(universe_bound) + 2;
    let mut digits = Vec::new();
    let mut n = u64::from(i);
    while n > 0 {
        let d = (n - 1) % base; // item code 0..base-1
        digits.push(if d == 0 {
            Datum::Pause
        } else {
            Datum::Num((d - 1) as u32)
        });
        n = (n - 1) / base;
    }
    digits.reverse();
    Seq::new(digits)
}

/// How many candidate sequences a minimal-representative search may visit.
pub const MIN_REP_SCAN: usize = 1 << 15;

/// A learner emitting plain indices into its own hypothesis space.
pub struct IndexLearner {
    pub name: String,
    pub kind: Kind,
    pub space: String,
    base: Arc<Learner>,
    universe_bound: u32,
}

impl IndexLearner {
    /// The index after seeing `σ`: the rank of the ≤-minimal sequence whose
    /// base hypothesis equals `h*(σ)`. Enumerates candidates in ≤ order over
    /// the full alphabet `{#} ∪ [0, B]`, so the first hit is the minimum.
    pub fn index_at(&self, ctx: &Context, sigma: &Seq) -> Result<u32> {
        let target = self.base.on_seq_star(ctx, sigma)?;
        let rep = min_representative(ctx, &self.base, &target, self.universe_bound)?;
        seq_rank(&rep, self.universe_bound).ok_or_else(|| {
            Error::CapExceeded("representative sequence rank exceeds the index range".into())
        })
    }
}

fn min_representative(
    ctx: &Context,
    base: &Arc<Learner>,
    target: &HypTerm,
    universe_bound: u32,
) -> Result<Seq> {
    let mut visited = 0usize;
    let mut frontier: Vec<Seq> = vec![Seq::empty()];
    loop {
        for cand in &frontier {
            visited += 1;
            if visited > MIN_REP_SCAN {
                return Err(Error::CapExceeded(
                    "minimal-representative search".into(),
                ));
            }
            if base.on_seq_star(ctx, cand)? == *target {
                return Ok(cand.clone());
            }
        }
        let mut next = Vec::with_capacity(frontier.len() * (universe_bound as usize + 2));
        for s in &frontier {
            next.push(s.snoc(Datum::Pause));
            for x in 0..=universe_bound {
                next.push(s.snoc(Datum::Num(x)));
            }
        }
        frontier = next;
    }
}

/// Builds the index learner and its hypothesis-space family. The family's
/// decision procedure evaluates the base learner inside the given frozen
/// context snapshot, so the returned family may be registered into a *fresh*
/// context without cycles.
pub fn to_hypothesis_space(
    snapshot: Arc<Context>,
    base: Arc<Learner>,
    universe_bound: u32,
) -> (IndexLearner, FamilySpec) {
    let space = format!("hypspace_{}", base.name);
    let fam_base = base.clone();
    let fam = FamilySpec::new(
        &space,
        "hypothesis space built on the run: language j is the base hypothesis at the sequence numbered j",
        vec![0],
        move |i| {
            let sigma = seq_unrank(i, universe_bound);
            match fam_base
                .on_seq_star(&snapshot, &sigma)
                .and_then(|t| crate::term::members_upto(&snapshot, &t, universe_bound))
            {
                Ok(m) => Language::Finite(m),
                Err(_) => Language::finite([]),
            }
        },
    );
    let learner = IndexLearner {
        name: format!("hypspace_learner_{}", base.name),
        kind: base.kind,
        space,
        base,
        universe_bound,
    };
    (learner, fam)
}

/// Wraps an index learner back into a term learner emitting `famidx` terms
/// over its space. Mind changes and (bounded) semantics coincide with the
/// base learner's.
pub fn to_cind(idx: Arc<IndexLearner>, name: &str) -> Learner {
    Learner::new(name, Kind::G, move |ctx, input| {
        let sigma = match input {
            crate::learner::Input::Sequence(s) => s,
            _ => return Err(Error::Contract("index learner takes sequences".into())),
        };
        let j = idx.index_at(ctx, sigma)?;
        Ok(HypTerm::FamIdx(idx.space.clone(), j))
    })
    .with_props(["total", "cind"])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_round_trip_small() {
        for i in 0..2000u32 {
            let s = seq_unrank(i, 6);
            assert_eq!(seq_rank(&s, 6), Some(i));
        }
        assert_eq!(seq_rank(&Seq::empty(), 64), Some(0));
    }

    #[test]
    fn rank_is_order_isomorphic() {
        let mut prev = seq_unrank(0, 4);
        for i in 1..500u32 {
            let s = seq_unrank(i, 4);
            assert!(crate::seq::seq_order(&prev, &s) == std::cmp::Ordering::Less);
            prev = s;
        }
    }
}
