//! Desk-scale languages: finite sets and cofinite sets of naturals.
//!
//! Infinite languages are always cofinite here, so membership stays decidable
//! and canonical texts are computable at any position.

use std::collections::BTreeSet;
use std::fmt;

use crate::seq::Datum;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Language {
    Finite(BTreeSet<u32>),
    /// All naturals except the listed ones.
    CoFinite(BTreeSet<u32>),
}

impl Language {
    pub fn finite<const N: usize>(xs: [u32; N]) -> Self {
        Language::Finite(xs.into_iter().collect())
    }

    pub fn cofinite<const N: usize>(xs: [u32; N]) -> Self {
        Language::CoFinite(xs.into_iter().collect())
    }

    pub fn contains(&self, x: u32) -> bool {
        match self {
            Language::Finite(s) => s.contains(&x),
            Language::CoFinite(excl) => !excl.contains(&x),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Language::Finite(_))
    }

    /// Members up to and including `bound`, ascending.
    pub fn members_upto(&self, bound: u32) -> BTreeSet<u32> {
        (0..=bound).filter(|&x| self.contains(x)).collect()
    }

    /// The n-th item of the canonical text: all members in strictly ascending
    /// order, then `#` forever once a finite language is exhausted.
    pub fn canonical_at(&self, n: usize) -> Datum {
        match self {
            Language::Finite(s) => s
                .iter()
                .nth(n)
                .map(|&x| Datum::Num(x))
                .unwrap_or(Datum::Pause),
            Language::CoFinite(excl) => {
                // The n-th natural not excluded. Exclusions are finite, so
                // walk them in order.
                let mut x: u64 = 0;
                let mut remaining = n as u64;
                loop {
                    if !excl.contains(&(x as u32)) {
                        if remaining == 0 {
                            return Datum::Num(x as u32);
                        }
                        remaining -= 1;
                    }
                    x += 1;
                }
            }
        }
    }
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Language::Finite(s) => write!(f, "finite:{}", crate::seq::render_set(s)),
            Language::CoFinite(s) => write!(f, "cofinite:{}", crate::seq::render_set(s)),
        }
    }
}
