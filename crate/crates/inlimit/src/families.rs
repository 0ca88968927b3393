//! Concrete indexed families and base learners exercising every transform's
//! precondition, including the separation family distinguishing set-driven
//! from iterative learners.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::Error;
use crate::family::{decode_finite_set, encode_finite_set, FamilySpec};
use crate::lang::Language;
use crate::learner::{Input, Kind, Learner};
use crate::restrictions::Tag;
use crate::term::HypTerm;

/// The separation family: the cofinite language ℕ∖{0} together with every
/// finite set containing 0. Index 0 is the cofinite member; index `i+1` is
/// `D_i ∪ {0}` under the binary-expansion coding.
pub fn finz() -> FamilySpec {
    FamilySpec::new(
        "finz",
        "the cofinite language without 0, plus all finite sets containing 0",
        std::iter::once(0).chain(1..=19).collect(),
        |i| {
            if i == 0 {
                Language::cofinite([0])
            } else {
                let mut d = decode_finite_set(i - 1);
                d.insert(0);
                Language::Finite(d)
            }
        },
    )
}

/// The separation learner: guess the cofinite member while 0 is absent, and
/// exactly the data once 0 appears.
pub fn sep_learner() -> Learner {
    Learner::new("sep_learner", Kind::Sd, |_, input| match input {
        Input::Set(d) => {
            if d.contains(&0) {
                Ok(HypTerm::FinSet(d.clone()))
            } else {
                Ok(HypTerm::FamIdx("finz".into(), 0))
            }
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "cons", "cauttar"])
}

/// All finite sets, indexed by binary expansion.
pub fn fin_family() -> FamilySpec {
    FamilySpec::new(
        "fin",
        "all finite sets of naturals",
        vec![
            0,
            encode_finite_set(&[2].into()),
            encode_finite_set(&[0, 3].into()),
            encode_finite_set(&[1, 4].into()),
            encode_finite_set(&[0, 1, 2].into()),
        ],
        |i| Language::Finite(decode_finite_set(i)),
    )
}

/// Enumeration learner for finite sets: exactly the data seen.
pub fn fin_learner() -> Learner {
    Learner::new("fin_learner", Kind::Sd, |_, input| match input {
        Input::Set(d) => Ok(HypTerm::FinSet(d.clone())),
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props([
        "total", "cind", "cons", "cauttar", "caut", "smon", "mon", "wmon", "conv", "semconv",
        "dec", "sdec", "nu", "snu", "wb",
    ])
}

/// Full-information sibling of `fin_learner`, available where a transform
/// needs the full history.
pub fn fin_g_learner() -> Learner {
    Learner::new("fin_g", Kind::G, |_, input| match input {
        Input::Sequence(s) => Ok(HypTerm::FinSet(s.content())),
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props([
        "total", "cind", "cons", "cauttar", "caut", "smon", "mon", "wmon", "conv", "semconv",
        "dec", "sdec", "nu", "snu", "wb",
    ])
    .with_snu_family("fin")
}

/// Deliberately inconsistent: always one datum behind. Clean for all seven
/// non-consistency restrictions of the consistency theorem, so it isolates
/// exactly what each repair must preserve.
pub fn lazy_learner() -> Learner {
    Learner::new("lazy_g", Kind::G, |_, input| match input {
        Input::Sequence(s) => Ok(HypTerm::FinSet(s.minus_last().content())),
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "smon", "mon", "wmon", "cauttar", "conv", "semconv"])
}

/// The chain family: initial segments `[0, i]`.
pub fn chain_family() -> FamilySpec {
    FamilySpec::new(
        "chain",
        "the chain of initial segments [0,i]",
        vec![0, 2, 5],
        |i| Language::Finite((0..=i).collect()),
    )
}

/// Strongly monotone learner for the chain: claim the full segment up to the
/// largest datum seen.
pub fn chain_learner() -> Learner {
    Learner::new("chain_learner", Kind::Sd, |_, input| match input {
        Input::Set(d) => {
            let max = d.iter().next_back().copied().unwrap_or(0);
            Ok(HypTerm::FinSet((0..=max).collect()))
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "cons", "cauttar", "smon", "mon", "wmon"])
}

/// The two-language conflict family `{0} ⊂ {0,1}`, totalized above index 1.
pub fn conflict_family() -> FamilySpec {
    FamilySpec::new(
        "conflict",
        "the conflicting pair {0} and {0,1}",
        vec![0, 1],
        |i| {
            if i == 0 {
                Language::finite([0])
            } else {
                Language::finite([0, 1])
            }
        },
    )
}

/// U-shaped base learner on the conflict family: overgeneralizes to `{0,1}`
/// on the very first datum and falls back once more data disambiguate —
/// a decisiveness violation on the canonical text of `{0}`.
pub fn conflict_learner() -> Learner {
    Learner::new("conflict_learner", Kind::G, |_, input| match input {
        Input::Sequence(s) => {
            if s.content().contains(&1) || s.len() == 1 {
                Ok(HypTerm::FamIdx("conflict".into(), 1))
            } else {
                Ok(HypTerm::FamIdx("conflict".into(), 0))
            }
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "cons"])
    .with_snu_family("conflict")
}

/// Cofinite languages, excluded sets coded by binary expansion.
pub fn cofin_family() -> FamilySpec {
    FamilySpec::new(
        "cofin",
        "cofinite languages, excluded sets coded by binary expansion",
        vec![
            encode_finite_set(&[0].into()),
            encode_finite_set(&[0, 2].into()),
        ],
        |i| Language::CoFinite(decode_finite_set(i)),
    )
}

/// Gap learner for cofinite languages: exclude exactly the gaps below the
/// largest datum seen.
pub fn cofin_learner() -> Learner {
    Learner::new("cofin_learner", Kind::Sd, |_, input| match input {
        Input::Set(d) => {
            let max = d.iter().next_back().copied().unwrap_or(0);
            let gaps: BTreeSet<u32> = (0..max).filter(|x| !d.contains(x)).collect();
            Ok(HypTerm::CoFinite(gaps))
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "cons"])
}

/// Semantically stable but syntactically oscillating learner on `ℕ∖{0}`:
/// flips between two equal terms with the parity of the set size.
pub fn osc_learner() -> Learner {
    Learner::new("osc_learner", Kind::Sd, |_, input| match input {
        Input::Set(d) => {
            if d.len() % 2 == 0 {
                Ok(HypTerm::cofinite([0]))
            } else {
                Ok(HypTerm::PatchUnion(
                    Box::new(HypTerm::cofinite([0])),
                    BTreeSet::new(),
                ))
            }
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total", "cind", "cons", "cauttar"])
}

/// Transductive learner on the chain family: each datum alone determines the
/// guess `[0, y]`; pauses answer `?`.
pub fn chain_td_learner() -> Learner {
    Learner::new("chain_td", Kind::Td, |_, input| match input {
        Input::Single(crate::seq::Datum::Num(y)) => Ok(HypTerm::FinSet((0..=y).collect())),
        Input::Single(crate::seq::Datum::Pause) => Ok(HypTerm::Quest),
        _ => Err(Error::Contract("kind mismatch".into())),
    })
    .with_props(["total"])
}

/// Iterative fixture learners that all converge on the canonical text of
/// `ℕ∖{0}` by reaching an absorbing state — the falsifier's prey.
pub fn it_fixtures() -> Vec<Arc<Learner>> {
    let absorbed = || HypTerm::cofinite([0]);
    let is_absorbed = |q: &HypTerm| *q == HypTerm::cofinite([0]);
    let mk = |name: &str,
              step: Box<
        dyn Fn(&HypTerm, crate::seq::Datum) -> HypTerm + Send + Sync,
    >| {
        Arc::new(Learner::new(name, Kind::It, move |_, input| match input {
            Input::InitIt => Ok(HypTerm::finset([])),
            Input::StateStep(q, x) => Ok(step(q, x)),
            _ => Err(Error::Contract("kind mismatch".into())),
        }))
    };
    vec![
        // Constant from the start.
        Arc::new(Learner::new("it_const", Kind::It, move |_, input| {
            match input {
                Input::InitIt | Input::StateStep(..) => Ok(HypTerm::cofinite([0])),
                _ => Err(Error::Contract("kind mismatch".into())),
            }
        })),
        // Absorbs on the first number.
        mk(
            "it_first",
            Box::new(move |q, x| {
                if is_absorbed(q) || matches!(x, crate::seq::Datum::Num(_)) {
                    absorbed()
                } else {
                    q.clone()
                }
            }),
        ),
        // Collects up to three distinct elements, then absorbs.
        mk(
            "it_collect3",
            Box::new(move |q, x| {
                if is_absorbed(q) {
                    return absorbed();
                }
                let mut d = match q {
                    HypTerm::FinSet(d) => d.clone(),
                    _ => Default::default(),
                };
                if let crate::seq::Datum::Num(n) = x {
                    d.insert(n);
                }
                if d.len() >= 3 {
                    absorbed()
                } else {
                    HypTerm::FinSet(d)
                }
            }),
        ),
        // Absorbs on the first datum of size at least five.
        mk(
            "it_threshold5",
            Box::new(move |q, x| {
                if is_absorbed(q) {
                    return absorbed();
                }
                match x {
                    crate::seq::Datum::Num(n) if n >= 5 => absorbed(),
                    crate::seq::Datum::Num(n) => {
                        let mut d = match q {
                            HypTerm::FinSet(d) => d.clone(),
                            _ => Default::default(),
                        };
                        d.insert(n);
                        HypTerm::FinSet(d)
                    }
                    crate::seq::Datum::Pause => q.clone(),
                }
            }),
        ),
        // Ticks a bounded counter, then absorbs.
        mk(
            "it_count4",
            Box::new(move |q, _| {
                if is_absorbed(q) {
                    return absorbed();
                }
                let n = match q {
                    HypTerm::FinSet(d) => d.iter().next_back().map_or(40, |&m| m + 1),
                    _ => 40,
                };
                if n >= 44 {
                    absorbed()
                } else {
                    HypTerm::finset([n])
                }
            }),
        ),
    ]
}

/// A suite entry: a family, a base learner satisfying the listed tags on
/// every member and text of the standard ensemble.
pub struct SuiteEntry {
    pub family: FamilySpec,
    pub learner: Arc<Learner>,
    pub tags: Vec<Tag>,
}

/// The standard suite pairing each family with its base learners and the
/// restriction tags those learners are expected to keep clean.
pub fn standard_suite() -> Vec<SuiteEntry> {
    vec![
        SuiteEntry {
            family: finz(),
            learner: Arc::new(sep_learner()),
            tags: vec![Tag::Cons, Tag::CautTar],
        },
        SuiteEntry {
            family: fin_family(),
            learner: Arc::new(fin_learner()),
            tags: vec![
                Tag::Cons,
                Tag::CautTar,
                Tag::SMon,
                Tag::Mon,
                Tag::WMon,
                Tag::Conv,
                Tag::SemConv,
                Tag::Dec,
                Tag::SDec,
                Tag::Wb,
            ],
        },
        SuiteEntry {
            family: fin_family(),
            learner: Arc::new(fin_g_learner()),
            tags: vec![Tag::Cons, Tag::CautTar, Tag::SMon, Tag::Conv],
        },
        SuiteEntry {
            family: fin_family(),
            learner: Arc::new(lazy_learner()),
            tags: vec![
                Tag::SMon,
                Tag::Mon,
                Tag::WMon,
                Tag::CautTar,
                Tag::Conv,
                Tag::SemConv,
            ],
        },
        SuiteEntry {
            family: chain_family(),
            learner: Arc::new(chain_learner()),
            tags: vec![Tag::Cons, Tag::CautTar, Tag::SMon, Tag::Mon, Tag::WMon],
        },
        SuiteEntry {
            family: conflict_family(),
            learner: Arc::new(conflict_learner()),
            tags: vec![Tag::Cons],
        },
        SuiteEntry {
            family: cofin_family(),
            learner: Arc::new(cofin_learner()),
            tags: vec![Tag::Cons],
        },
        SuiteEntry {
            family: cofin_family(),
            learner: Arc::new(osc_learner()),
            // Target-cautious only on the member it is built for (ℕ∖{0});
            // on other cofinite members its fixed claim overshoots.
            tags: vec![Tag::Cons],
        },
    ]
}

/// Registers every standard family and learner into a context.
pub fn register_standard(ctx: &mut crate::context::Context) {
    for entry in standard_suite() {
        ctx.add_family(entry.family);
        ctx.add_learner(entry.learner);
    }
    ctx.add_learner(Arc::new(chain_td_learner()));
    for l in it_fixtures() {
        ctx.add_learner(l);
    }
}
