//! Text generators: bounded, deterministic presentations of a language.
//!
//! A text is conceptually a total function ℕ → ℕ ∪ {#}; at desk scale every
//! generator is materialized up to a horizon before use. The seeded generator
//! uses an explicitly documented linear-congruential generator so reports are
//! reproducible across implementations:
//!
//! ```text
//! state' = state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! draw   = (state' >> 33) / 2^31        (a unit-interval rational)
//! ```
//!
//! Every third position of a seeded text presents the next not-yet-shown
//! element (in ascending order), which guarantees that all of `L ∩ [0, B]`
//! appears within `3·|L ∩ [0, B]|` positions.

use crate::error::{Error, Result};
use crate::lang::Language;
use crate::seq::{Datum, Seq};

/// Positions per fresh element guaranteed by the seeded generator.
pub const COVERAGE_STRIDE: usize = 3;

#[derive(Clone, Debug)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.state = self
            .state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (self.state >> 33) as u32
    }

    /// A draw in `[0, 1)` with 31 bits of precision.
    pub fn next_unit(&mut self) -> f64 {
        f64::from(self.next_u32() >> 1) / f64::from(1u32 << 31)
    }

    pub fn pick(&mut self, n: usize) -> usize {
        (self.next_u32() as usize) % n.max(1)
    }
}

/// A materialized text: items for positions `0..len`, plus an identifier
/// that names the generator and its parameters in reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    pub id: String,
    items: Vec<Datum>,
}

impl Text {
    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn at(&self, i: usize) -> Datum {
        self.items[i]
    }

    pub fn prefix(&self, n: usize) -> Seq {
        Seq::new(self.items[..n.min(self.items.len())].to_vec())
    }

    pub fn items(&self) -> &[Datum] {
        &self.items
    }

    /// Canonical text: all members in strictly ascending order, `#` forever
    /// once a finite language is exhausted.
    pub fn canonical(lang: &Language, len: usize) -> Text {
        Text {
            id: format!("canonical:{lang}"),
            items: (0..len).map(|i| lang.canonical_at(i)).collect(),
        }
    }

    /// The given finite sequence followed by pauses.
    pub fn finite_then_pauses(sigma: &Seq, len: usize) -> Text {
        let mut items = sigma.items().to_vec();
        items.truncate(len);
        items.resize(len, Datum::Pause);
        Text {
            id: format!("finite-then-pauses:{sigma}"),
            items,
        }
    }

    /// Seeded presentation of `lang ∩ [0, bound]` with pause and duplicate
    /// noise. Deterministic in `(seed, pause_rate, dup_rate, bound, len)`.
    pub fn seeded(
        lang: &Language,
        bound: u32,
        seed: u64,
        pause_rate: f64,
        dup_rate: f64,
        len: usize,
    ) -> Text {
        let members: Vec<u32> = lang.members_upto(bound).into_iter().collect();
        let mut rng = Lcg::new(seed);
        let mut fresh = 0usize; // next unseen member index
        let mut items = Vec::with_capacity(len);
        for i in 0..len {
            let forced = i % COVERAGE_STRIDE == COVERAGE_STRIDE - 1;
            let d = if forced && fresh < members.len() {
                fresh += 1;
                Datum::Num(members[fresh - 1])
            } else if rng.next_unit() < pause_rate || members.is_empty() {
                Datum::Pause
            } else if rng.next_unit() < dup_rate && fresh > 0 {
                Datum::Num(members[rng.pick(fresh)])
            } else if fresh < members.len() {
                fresh += 1;
                Datum::Num(members[fresh - 1])
            } else if fresh > 0 {
                Datum::Num(members[rng.pick(fresh)])
            } else {
                Datum::Pause
            };
            items.push(d);
        }
        Text {
            id: format!("seeded:{seed}:{lang}"),
            items,
        }
    }

    /// Postponed presentation: position `i` shows `inner(r[i+1] - 1)` when
    /// the table advances at `i` and a pause otherwise; beyond the table the
    /// inner text continues unpostponed. `r` must be non-decreasing with
    /// steps of at most one.
    pub fn delayed(inner: &Text, r: &[usize]) -> Result<Text> {
        if r.windows(2).any(|w| w[1] < w[0] || w[1] > w[0] + 1) {
            return Err(Error::Contract(
                "delay table must be non-decreasing with unit steps".into(),
            ));
        }
        let mut items = Vec::with_capacity(inner.len());
        for i in 0..r.len().saturating_sub(1) {
            if r[i + 1] > r[i] {
                items.push(inner.at(r[i + 1] - 1));
            } else {
                items.push(Datum::Pause);
            }
        }
        let consumed = r.last().copied().unwrap_or(0);
        for i in consumed..inner.len() {
            items.push(inner.at(i));
        }
        Ok(Text {
            id: format!("delayed:{}", inner.id),
            items,
        })
    }

    /// Number of positions within which full coverage of `lang ∩ [0, bound]`
    /// is guaranteed for this module's generators.
    pub fn guaranteed_coverage(lang: &Language, bound: u32) -> usize {
        COVERAGE_STRIDE * lang.members_upto(bound).len()
    }
}
