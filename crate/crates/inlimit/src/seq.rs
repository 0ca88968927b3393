//! Finite sequences over the naturals plus the pause symbol `#`.
//!
//! The total order on sequences is length-first, then lexicographic by item
//! code with `#` coded below every number. Prefixes therefore always compare
//! below their extensions.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

/// A single item of a text or sequence: either a natural number or the pause
/// symbol `#`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Datum {
    Pause,
    Num(u32),
}

impl Datum {
    /// Item code used by the total order: `#` is 0, a number `n` is `n + 1`.
    pub fn code(self) -> u64 {
        match self {
            Datum::Pause => 0,
            Datum::Num(n) => n as u64 + 1,
        }
    }
}

impl fmt::Display for Datum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Datum::Pause => write!(f, "#"),
            Datum::Num(n) => write!(f, "{n}"),
        }
    }
}

/// A finite sequence of data.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Seq(Vec<Datum>);

impl Seq {
    pub fn empty() -> Self {
        Seq(Vec::new())
    }

    pub fn new(items: Vec<Datum>) -> Self {
        Seq(items)
    }

    /// Convenience constructor from plain numbers.
    pub fn of_nums(nums: &[u32]) -> Self {
        Seq(nums.iter().map(|&n| Datum::Num(n)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn items(&self) -> &[Datum] {
        &self.0
    }

    pub fn push(&mut self, d: Datum) {
        self.0.push(d);
    }

    pub fn snoc(&self, d: Datum) -> Seq {
        let mut items = self.0.clone();
        items.push(d);
        Seq(items)
    }

    pub fn concat(&self, other: &Seq) -> Seq {
        let mut items = self.0.clone();
        items.extend_from_slice(&other.0);
        Seq(items)
    }

    /// The sequence with the last element removed.
    pub fn minus_last(&self) -> Seq {
        let mut items = self.0.clone();
        items.pop();
        Seq(items)
    }

    pub fn prefix(&self, n: usize) -> Seq {
        Seq(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn is_prefix_of(&self, other: &Seq) -> bool {
        other.0.len() >= self.0.len() && other.0[..self.0.len()] == self.0[..]
    }

    /// `content(σ)`: the set of non-pause items.
    pub fn content(&self) -> BTreeSet<u32> {
        self.0
            .iter()
            .filter_map(|d| match d {
                Datum::Num(n) => Some(*n),
                Datum::Pause => None,
            })
            .collect()
    }

    /// Removes pauses and keeps only the first occurrence of each number.
    pub fn dedup(&self) -> Seq {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for d in &self.0 {
            if let Datum::Num(n) = d {
                if seen.insert(*n) {
                    out.push(*d);
                }
            }
        }
        Seq(out)
    }
}

impl PartialOrd for Seq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Seq {
    fn cmp(&self, other: &Self) -> Ordering {
        seq_order(self, other)
    }
}

/// Length-first, then lexicographic by item code. Total, and prefix-monotone:
/// `σ ⊆ τ` implies `σ ≤ τ`.
pub fn seq_order(a: &Seq, b: &Seq) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            for (x, y) in a.items().iter().zip(b.items()) {
                match x.code().cmp(&y.code()) {
                    Ordering::Equal => continue,
                    ord => return ord,
                }
            }
            Ordering::Equal
        })
}

/// The elements of `D` in ascending order with a `#` between each two.
pub fn sort_pause(set: &BTreeSet<u32>) -> Seq {
    let mut items = Vec::new();
    for (k, &n) in set.iter().enumerate() {
        if k > 0 {
            items.push(Datum::Pause);
        }
        items.push(Datum::Num(n));
    }
    Seq(items)
}

/// The elements of `D` in ascending order, no separators (the canonical
/// sequence of a finite set).
pub fn canonical_seq(set: &BTreeSet<u32>) -> Seq {
    Seq(set.iter().map(|&n| Datum::Num(n)).collect())
}

/// First `k` elements of `D` in ascending order, as a set.
pub fn ascending_prefix_set(set: &BTreeSet<u32>, k: usize) -> BTreeSet<u32> {
    set.iter().take(k).copied().collect()
}

/// Enumerates all sequences over `alphabet ∪ {#}` of length at most `max_len`,
/// in the `≤` order. `alphabet` must be sorted ascending.
pub fn enumerate_sequences(alphabet: &[u32], max_len: usize) -> Vec<Seq> {
    let mut symbols = vec![Datum::Pause];
    symbols.extend(alphabet.iter().map(|&n| Datum::Num(n)));
    let mut out = vec![Seq::empty()];
    let mut current: Vec<Seq> = vec![Seq::empty()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(current.len() * symbols.len());
        for s in &current {
            for &d in &symbols {
                next.push(s.snoc(d));
            }
        }
        out.extend(next.iter().cloned());
        current = next;
    }
    out
}

impl fmt::Display for Seq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, "]")
    }
}

/// Renders a finite set as `{a,b,c}` in ascending order.
pub fn render_set(set: &BTreeSet<u32>) -> String {
    let mut s = String::from("{");
    for (i, n) in set.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&n.to_string());
    }
    s.push('}');
    s
}
