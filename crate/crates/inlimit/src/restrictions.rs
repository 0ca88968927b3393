//! Bounded verifiers for the learning restrictions and convergence criteria.
//!
//! Every semantic predicate is evaluated on `[0, B]`. Hypotheses equal to `?`
//! are skipped by the quantifiers: a tuple referencing a `?` position is
//! vacuously satisfied. Clauses over the full text content (Mon, CautTar,
//! Ex, Bc) use the declared target language rather than the finite prefix.

use std::collections::BTreeSet;
use std::fmt;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::learner::HypSequence;
use crate::term::{members_upto, HypTerm};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tag {
    Cons,
    Conv,
    SemConv,
    Caut,
    CautTar,
    Mon,
    SMon,
    WMon,
    Wb,
    Dec,
    SDec,
    NU,
    SNU,
    T,
}

pub const ALL_TAGS: [Tag; 14] = [
    Tag::Cons,
    Tag::Conv,
    Tag::SemConv,
    Tag::Caut,
    Tag::CautTar,
    Tag::Mon,
    Tag::SMon,
    Tag::WMon,
    Tag::Wb,
    Tag::Dec,
    Tag::SDec,
    Tag::NU,
    Tag::SNU,
    Tag::T,
];

impl Tag {
    pub fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "Cons" => Tag::Cons,
            "Conv" => Tag::Conv,
            "SemConv" => Tag::SemConv,
            "Caut" => Tag::Caut,
            "CautTar" => Tag::CautTar,
            "Mon" => Tag::Mon,
            "SMon" => Tag::SMon,
            "WMon" => Tag::WMon,
            "Wb" => Tag::Wb,
            "Dec" => Tag::Dec,
            "SDec" => Tag::SDec,
            "NU" => Tag::NU,
            "SNU" => Tag::SNU,
            "T" => Tag::T,
            _ => return None,
        })
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Ex,
    Bc,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Result of one bounded check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Outcome {
    Clean,
    Violation {
        /// The minimal violating tuple; unused index slots are `None`.
        indices: (usize, Option<usize>, Option<usize>),
        witness: Option<u32>,
    },
    Converged {
        n0: usize,
        term: HypTerm,
    },
    NotConverged,
    Diverged {
        step: usize,
    },
    CapExceeded(String),
}

impl Outcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, Outcome::Clean | Outcome::Converged { .. })
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict {
    /// Restriction tag or convergence-mode label.
    pub label: String,
    pub text_id: String,
    pub outcome: Outcome,
    pub bound: u32,
    pub horizon: usize,
}

impl Verdict {
    pub fn render(&self) -> String {
        let body = match &self.outcome {
            Outcome::Clean => "CLEAN".to_string(),
            Outcome::Violation { indices, witness } => {
                let (i, j, k) = indices;
                let idx = match (j, k) {
                    (None, None) => format!("({i})"),
                    (Some(j), None) => format!("({i},{j})"),
                    (Some(j), Some(k)) => format!("({i},{j},{k})"),
                    (None, Some(k)) => format!("({i},-,{k})"),
                };
                match witness {
                    Some(x) => format!("VIOLATION@{idx} witness={x}"),
                    None => format!("VIOLATION@{idx}"),
                }
            }
            Outcome::Converged { n0, term } => format!("CONVERGED@{n0} term={term}"),
            Outcome::NotConverged => "NOTCONVERGED".to_string(),
            Outcome::Diverged { step } => format!("DIVERGED@{step}"),
            Outcome::CapExceeded(what) => format!("CAPEXCEEDED({what})"),
        };
        format!(
            "{} {} {} B={} H={}",
            self.label, self.text_id, body, self.bound, self.horizon
        )
    }
}

/// Per-position data shared by the verifiers: hypothesis member sets on
/// `[0, B]` (`None` at `?` positions) and prefix contents.
struct Checked {
    sets: Vec<Option<BTreeSet<u32>>>,
    terms: Vec<HypTerm>,
    prefix_content: Vec<BTreeSet<u32>>,
    target: BTreeSet<u32>,
}

impl Checked {
    fn build(ctx: &Context, p: &HypSequence, target: &Language, bound: u32) -> Result<Checked> {
        if p.terms.len() != p.prefix.len() + 1 {
            return Err(Error::Contract(
                "hypothesis sequence must have one term per prefix position plus one".into(),
            ));
        }
        let sets = p
            .terms
            .iter()
            .map(|t| {
                if t.is_quest() {
                    Ok(None)
                } else {
                    members_upto(ctx, t, bound).map(Some)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let prefix_content = (0..p.terms.len())
            .map(|i| p.prefix.prefix(i).content())
            .collect();
        Ok(Checked {
            sets,
            terms: p.terms.clone(),
            prefix_content,
            target: target.members_upto(bound),
        })
    }

    fn len(&self) -> usize {
        self.terms.len()
    }

    fn set(&self, i: usize) -> Option<&BTreeSet<u32>> {
        self.sets[i].as_ref()
    }
}

fn subset(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> bool {
    a.is_subset(b)
}

fn first_diff(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Option<u32> {
    a.symmetric_difference(b).next().copied()
}

fn first_missing(a: &BTreeSet<u32>, b: &BTreeSet<u32>) -> Option<u32> {
    a.difference(b).next().copied()
}

fn violation1(i: usize, witness: Option<u32>) -> Outcome {
    Outcome::Violation {
        indices: (i, None, None),
        witness,
    }
}

fn violation2(i: usize, j: usize, witness: Option<u32>) -> Outcome {
    Outcome::Violation {
        indices: (i, Some(j), None),
        witness,
    }
}

fn violation3(i: usize, j: usize, k: usize, witness: Option<u32>) -> Outcome {
    Outcome::Violation {
        indices: (i, Some(j), Some(k)),
        witness,
    }
}

/// Checks one restriction on a bounded hypothesis sequence. Returns the
/// minimal violating tuple, ordered by the last quantified index first.
pub fn check_restriction(
    ctx: &Context,
    tag: Tag,
    p: &HypSequence,
    target: &Language,
    bound: u32,
) -> Result<Outcome> {
    let c = Checked::build(ctx, p, target, bound)?;
    let n = c.len();
    match tag {
        Tag::T => Ok(Outcome::Clean),
        Tag::Cons => {
            for i in 0..n {
                let Some(hi) = c.set(i) else { continue };
                if let Some(x) = first_missing(&c.prefix_content[i], hi) {
                    return Ok(violation1(i, Some(x)));
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::Conv => {
            for i in 0..n.saturating_sub(1) {
                let Some(hi) = c.set(i) else { continue };
                if c.terms[i + 1].is_quest() {
                    continue;
                }
                if subset(&c.prefix_content[i + 1], hi) && c.terms[i] != c.terms[i + 1] {
                    return Ok(violation1(i, None));
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::SemConv => {
            for i in 0..n.saturating_sub(1) {
                let (Some(hi), Some(hj)) = (c.set(i), c.sets[i + 1].as_ref()) else {
                    continue;
                };
                if subset(&c.prefix_content[i + 1], hi) {
                    if let Some(x) = first_diff(hi, hj) {
                        return Ok(violation1(i, Some(x)));
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::Caut => {
            // Violation: H_{p(i)} ⊊ H_{p(j)} with i > j; scan j-major so the
            // earlier index of the offending pair is minimized first.
            for j in 0..n {
                for i in j + 1..n {
                    let (Some(hi), Some(hj)) = (c.set(i), c.set(j)) else {
                        continue;
                    };
                    if subset(hi, hj) && hi != hj {
                        return Ok(violation2(i, j, first_missing(hj, hi)));
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::CautTar => {
            for i in 0..n {
                let Some(hi) = c.set(i) else { continue };
                if subset(&c.target, hi) && *hi != c.target {
                    return Ok(violation1(i, first_missing(hi, &c.target)));
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::Mon => {
            for j in 0..n {
                for i in 0..j {
                    let (Some(hi), Some(hj)) = (c.set(i), c.set(j)) else {
                        continue;
                    };
                    let lost = hi
                        .intersection(&c.target)
                        .find(|x| !hj.contains(x))
                        .copied();
                    if let Some(x) = lost {
                        return Ok(violation2(i, j, Some(x)));
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::SMon => {
            for j in 0..n {
                for i in 0..j {
                    let (Some(hi), Some(hj)) = (c.set(i), c.set(j)) else {
                        continue;
                    };
                    if let Some(x) = first_missing(hi, hj) {
                        return Ok(violation2(i, j, Some(x)));
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::WMon => {
            for j in 0..n {
                for i in 0..j {
                    let (Some(hi), Some(hj)) = (c.set(i), c.set(j)) else {
                        continue;
                    };
                    if subset(&c.prefix_content[j], hi) {
                        if let Some(x) = first_missing(hi, hj) {
                            return Ok(violation2(i, j, Some(x)));
                        }
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::Wb => {
            for j in 0..n {
                for i in 0..=j {
                    let (Some(hi), Some(hj)) = (c.set(i), c.set(j)) else {
                        continue;
                    };
                    let mind_change = (i + 1..=j).any(|k| {
                        !c.terms[k].is_quest() && c.terms[i] != c.terms[k]
                    });
                    if !mind_change {
                        continue;
                    }
                    let justified = c.prefix_content[j]
                        .iter()
                        .any(|x| hj.contains(x) && !hi.contains(x));
                    if !justified {
                        return Ok(violation2(i, j, None));
                    }
                }
            }
            Ok(Outcome::Clean)
        }
        Tag::Dec | Tag::SDec | Tag::NU | Tag::SNU => {
            let target_only = matches!(tag, Tag::NU | Tag::SNU);
            let syntactic = matches!(tag, Tag::SDec | Tag::SNU);
            for k in 0..n {
                for j in 0..=k {
                    for i in 0..=j {
                        let (Some(hi), Some(hj), Some(hk)) = (c.set(i), c.set(j), c.set(k))
                        else {
                            continue;
                        };
                        if hi != hk {
                            continue;
                        }
                        if target_only && *hi != c.target {
                            continue;
                        }
                        if syntactic {
                            if c.terms[i] != c.terms[j] {
                                return Ok(violation3(i, j, k, None));
                            }
                        } else if let Some(x) = first_diff(hi, hj) {
                            return Ok(violation3(i, j, k, Some(x)));
                        }
                    }
                }
            }
            Ok(Outcome::Clean)
        }
    }
}

/// Bounded convergence check: finds the minimal `n0` such that the mode's
/// condition holds from `n0` to the end of the recorded sequence.
pub fn check_convergence(
    ctx: &Context,
    mode: Mode,
    p: &HypSequence,
    target: &Language,
    bound: u32,
) -> Result<Outcome> {
    let target_set = target.members_upto(bound);
    let sets = p
        .terms
        .iter()
        .map(|t| {
            if t.is_quest() {
                Ok(None)
            } else {
                members_upto(ctx, t, bound).map(Some)
            }
        })
        .collect::<Result<Vec<Option<BTreeSet<u32>>>>>()?;
    let n = p.terms.len();
    // A suffix consisting of the last position alone is no evidence of
    // convergence (an alternating sequence would always "converge" there),
    // so the stable suffix must span at least two positions whenever the
    // sequence is long enough to have them.
    let last_admissible = if n == 1 { 0 } else { n.saturating_sub(2) };
    'outer: for n0 in 0..=last_admissible {
        for i in n0..n {
            let Some(hi) = sets[i].as_ref() else {
                continue 'outer;
            };
            if *hi != target_set {
                continue 'outer;
            }
            if mode == Mode::Ex && p.terms[i] != p.terms[n0] {
                continue 'outer;
            }
        }
        return Ok(Outcome::Converged {
            n0,
            term: p.terms[n0].clone(),
        });
    }
    Ok(Outcome::NotConverged)
}

/// Composes a hypothesis sequence with a non-decreasing reindexing `r` over a
/// replacement prefix; used to property-test delayability.
pub fn delay(p: &HypSequence, r: &[usize], prefix: &crate::seq::Seq) -> Result<HypSequence> {
    if r.len() != prefix.len() + 1 {
        return Err(Error::Contract(
            "reindexing must cover every step of the new prefix".into(),
        ));
    }
    if r.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Contract("reindexing must be non-decreasing".into()));
    }
    let terms = r
        .iter()
        .map(|&i| {
            p.terms
                .get(i)
                .cloned()
                .ok_or_else(|| Error::Contract(format!("reindexing out of range at {i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HypSequence {
        terms,
        prefix: prefix.clone(),
    })
}
