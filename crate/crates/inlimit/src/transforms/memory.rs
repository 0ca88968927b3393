//! Memory collapses: simulating full-information learners with less memory
//! (set-driven, iterative, transductive) and recovering syntactic
//! convergence from semantic convergence.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::learner::{Input, Kind, Learner};
use crate::seq::{enumerate_sequences, sort_pause, Datum, Seq};
use crate::term::{eval_term, HypTerm};

/// Partially set-driven simulation: mimic the base on the ≤-minimal potential
/// locking sequence over the seen data within the counter budget, defaulting
/// to `h(ε)`. The double enumeration is exponential, so both the counter and
/// the set size are capped.
pub fn g_to_psd(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("partially set-driven simulation takes a full-information learner".into()));
    }
    let props = base.props.clone();
    let b = base.clone();
    let mut out = Learner::new(name, Kind::Psd, move |ctx, input| {
        let (d, t) = match input {
            Input::SetCount(d, t) => (d, t),
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        if t > ctx.caps.psd_t_max {
            return Err(Error::CapExceeded(format!(
                "partially set-driven counter {t}"
            )));
        }
        if d.len() > ctx.caps.psd_set_max {
            return Err(Error::CapExceeded(format!(
                "partially set-driven set of {} elements",
                d.len()
            )));
        }
        let alphabet: Vec<u32> = d.iter().copied().collect();
        let pool = enumerate_sequences(&alphabet, t);
        'candidates: for sigma in &pool {
            let h_s = b.step(ctx, Input::Sequence(sigma))?;
            for tau in &pool {
                if b.step(ctx, Input::Sequence(&sigma.concat(tau)))? != h_s {
                    continue 'candidates;
                }
            }
            return Ok(h_s);
        }
        b.step(ctx, Input::Sequence(&Seq::empty()))
    });
    out.props = props;
    Ok(out)
}

/// An independent exhaustive search for the ≤-minimal locking sequence over
/// `d` within length `t`, for cross-checking the simulation above.
pub fn min_locking_sequence(
    ctx: &Context,
    h: &Learner,
    d: &BTreeSet<u32>,
    t: usize,
) -> Result<Option<Seq>> {
    let alphabet: Vec<u32> = d.iter().copied().collect();
    let pool = enumerate_sequences(&alphabet, t);
    'candidates: for sigma in &pool {
        let h_s = h.step(ctx, Input::Sequence(sigma))?;
        for tau in &pool {
            if h.step(ctx, Input::Sequence(&sigma.concat(tau)))? != h_s {
                continue 'candidates;
            }
        }
        return Ok(Some(sigma.clone()));
    }
    Ok(None)
}

/// Iterative simulation by padding: the state is the base hypothesis padded
/// with the sequence that produced it. Semantically transparent at every
/// step; syntactically a mind change on every datum.
pub fn bc_to_it_pad(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("padding simulation takes a full-information learner".into()));
    }
    let b = base.clone();
    let out = Learner::new(name, Kind::It, move |ctx, input| match input {
        Input::InitIt => Ok(HypTerm::Pad(
            Box::new(b.step(ctx, Input::Sequence(&Seq::empty()))?),
            Seq::empty(),
        )),
        Input::StateStep(state, x) => {
            let sigma = match state {
                HypTerm::Pad(_, s) => s.snoc(x),
                _ => {
                    return Err(Error::Contract(
                        "padded iterative learner got a foreign state".into(),
                    ))
                }
            };
            Ok(HypTerm::Pad(
                Box::new(b.step(ctx, Input::Sequence(&sigma))?),
                sigma,
            ))
        }
        _ => Err(Error::Contract("kind mismatch".into())),
    });
    Ok(out.with_props(["total", "cind"]))
}

/// Set-driven simulation of an iterative learner: feed the set sorted with
/// pauses between elements, remove any padding layer (the inverse of the
/// padding simulation), and accept the result only if one more pause leaves
/// it unchanged; otherwise answer with the set itself.
pub fn it_to_sd(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::It {
        return Err(Error::Contract("set-driven simulation takes an iterative learner".into()));
    }
    let unpad = |t: HypTerm| match t {
        HypTerm::Pad(inner, _) => *inner,
        t => t,
    };
    let b = base.clone();
    let out = Learner::new(name, Kind::Sd, move |ctx, input| {
        let d = match input {
            Input::Set(d) => d,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        let sorted = sort_pause(d);
        let a = unpad(b.on_seq_star(ctx, &sorted)?);
        let a_pause = unpad(b.on_seq_star(ctx, &sorted.snoc(Datum::Pause))?);
        if a == a_pause {
            Ok(a)
        } else {
            Ok(HypTerm::FinSet(d.clone()))
        }
    });
    Ok(out.with_props(["total"]))
}

/// Target-cautious closure of a consistent set-driven learner: every output
/// is the cautious-closure term over the base, which never claims a point the
/// base could later drop.
pub fn sd_bc_to_cauttar_bc(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::Sd {
        return Err(Error::Contract("cautious closure takes a set-driven learner".into()));
    }
    let base_name = base.name.clone();
    let out = Learner::new(name, Kind::Sd, move |_, input| {
        let d = match input {
            Input::Set(d) => d,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        Ok(HypTerm::CautBc(base_name.clone(), d.clone()))
    });
    Ok(out.with_props(["cauttar", "total", "cind"]))
}

/// Syntactic convergence from semantic convergence: mimic the base on the
/// first subset (in the fixed set order: size, then ascending elements) on
/// which it is consistent with all the data.
pub fn sd_cauttar_bc_to_ex(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::Sd {
        return Err(Error::Contract("subset search takes a set-driven learner".into()));
    }
    let b = base.clone();
    let out = Learner::new(name, Kind::Sd, move |ctx, input| {
        let d = match input {
            Input::Set(d) => d,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        if d.len() > ctx.caps.subset_scan {
            return Err(Error::CapExceeded(format!(
                "consistency subset search over a set of {} elements",
                d.len()
            )));
        }
        let elems: Vec<u32> = d.iter().copied().collect();
        let mut subsets: Vec<BTreeSet<u32>> = (0u64..(1u64 << elems.len()))
            .map(|mask| {
                elems
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &el)| el)
                    .collect()
            })
            .collect();
        subsets.sort_by_key(|s| (s.len(), s.iter().copied().collect::<Vec<_>>()));
        for d2 in &subsets {
            let t = b.step(ctx, Input::Set(d2))?;
            if super::consistency::covers(ctx, &t, d)? {
                return Ok(t);
            }
        }
        // Consistency of the base puts D itself in the search space.
        b.step(ctx, Input::Set(d))
    });
    Ok(out.with_props(["total", "cind"]))
}

/// Transductive convergence repair: answer for the smallest element the
/// current hypothesis claims among those the base answers on. When that set
/// is empty (a base defect the construction assumes away), fall back to the
/// base answer.
pub fn td_bc_to_ex(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::Td {
        return Err(Error::Contract("transductive repair takes a transductive learner".into()));
    }
    let props = base.props.clone();
    let b = base.clone();
    let mut out = Learner::new(name, Kind::Td, move |ctx, input| {
        let x = match input {
            Input::Single(x) => x,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        let y = match x {
            Datum::Pause => return b.step(ctx, Input::Single(Datum::Pause)),
            Datum::Num(y) => y,
        };
        let t = b.step(ctx, Input::Single(Datum::Num(y)))?;
        if t.is_quest() {
            return Ok(HypTerm::Quest);
        }
        for x2 in 0..=y {
            if eval_term(ctx, &t, x2)? {
                let t2 = b.step(ctx, Input::Single(Datum::Num(x2)))?;
                if !t2.is_quest() {
                    return Ok(t2);
                }
            }
        }
        Ok(t)
    });
    out.props = props;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact() -> Arc<Learner> {
        Arc::new(Learner::new("exact_g", Kind::G, |_, input| match input {
            Input::Sequence(s) => Ok(HypTerm::FinSet(s.content())),
            _ => Err(Error::Contract("kind mismatch".into())),
        }))
    }

    #[test]
    fn psd_constant_base_answers_from_the_empty_sequence() {
        let ctx = Context::new();
        let constant = Arc::new(Learner::new("g_const", Kind::G, |_, input| match input {
            Input::Sequence(_) => Ok(HypTerm::finset([9])),
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = g_to_psd("psd_const", constant).unwrap();
        let d: BTreeSet<u32> = [0].into();
        assert_eq!(
            h.step(&ctx, Input::SetCount(&d, 2)).unwrap(),
            HypTerm::finset([9])
        );
    }

    #[test]
    fn psd_matches_the_independent_locking_search() {
        let ctx = Context::new();
        let base = exact();
        let h = g_to_psd("psd_exact", base.clone()).unwrap();
        let d: BTreeSet<u32> = [0, 3].into();
        let got = h.step(&ctx, Input::SetCount(&d, 3)).unwrap();
        let oracle = min_locking_sequence(&ctx, &base, &d, 3).unwrap().unwrap();
        assert_eq!(got, base.step(&ctx, Input::Sequence(&oracle)).unwrap());
    }

    #[test]
    fn psd_caps_are_loud() {
        let ctx = Context::new();
        let h = g_to_psd("psd_cap", exact()).unwrap();
        let d: BTreeSet<u32> = [0].into();
        assert!(matches!(
            h.step(&ctx, Input::SetCount(&d, 99)),
            Err(Error::CapExceeded(_))
        ));
        let big: BTreeSet<u32> = (0..20).collect();
        assert!(matches!(
            h.step(&ctx, Input::SetCount(&big, 1)),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn padding_is_transparent_but_syntactically_restless() {
        let ctx = Context::new();
        let constant = Arc::new(Learner::new("g_const2", Kind::G, |_, input| match input {
            Input::Sequence(_) => Ok(HypTerm::finset([1])),
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = bc_to_it_pad("it_pad", constant).unwrap();
        let sigma = Seq::of_nums(&[1, 1]);
        let t1 = h.on_seq_star(&ctx, &sigma.prefix(1)).unwrap();
        let t2 = h.on_seq_star(&ctx, &sigma).unwrap();
        assert_ne!(t1, t2);
        for x in 0..=8 {
            assert_eq!(eval_term(&ctx, &t1, x).unwrap(), x == 1);
            assert_eq!(eval_term(&ctx, &t2, x).unwrap(), x == 1);
        }
    }

    #[test]
    fn pause_sensitive_iterative_base_degrades_to_the_set() {
        let ctx = Context::new();
        // Counts every item, including pauses, into a fresh term.
        let ticker = Arc::new(Learner::new("ticker", Kind::It, |_, input| match input {
            Input::InitIt => Ok(HypTerm::finset([])),
            Input::StateStep(q, _) => {
                let n = match q {
                    HypTerm::FinSet(d) => d.iter().next_back().map_or(0, |&m| m + 1),
                    _ => 0,
                };
                Ok(HypTerm::finset([n]))
            }
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = it_to_sd("sd_of_ticker", ticker).unwrap();
        let d: BTreeSet<u32> = [4, 7].into();
        assert_eq!(h.step(&ctx, Input::Set(&d)).unwrap(), HypTerm::finset([4, 7]));
    }

    #[test]
    fn pause_insensitive_iterative_base_passes_through() {
        let ctx = Context::new();
        let collect = Arc::new(Learner::new("collect", Kind::It, |_, input| match input {
            Input::InitIt => Ok(HypTerm::finset([])),
            Input::StateStep(q, x) => {
                let mut d = match q {
                    HypTerm::FinSet(d) => d.clone(),
                    _ => Default::default(),
                };
                if let Datum::Num(n) = x {
                    d.insert(n);
                }
                Ok(HypTerm::FinSet(d))
            }
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = it_to_sd("sd_of_collect", collect).unwrap();
        let d: BTreeSet<u32> = [4, 7].into();
        assert_eq!(h.step(&ctx, Input::Set(&d)).unwrap(), HypTerm::finset([4, 7]));
    }

    #[test]
    fn subset_search_stabilizes_an_oscillating_base() {
        let ctx = Context::new();
        // Alternates two semantically equal claims with the parity of |D|.
        let osc = Arc::new(Learner::new("osc", Kind::Sd, |_, input| match input {
            Input::Set(d) => {
                if d.len() % 2 == 0 {
                    Ok(HypTerm::cofinite([0]))
                } else {
                    Ok(HypTerm::PatchUnion(Box::new(HypTerm::cofinite([0])), BTreeSet::new()))
                }
            }
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = sd_cauttar_bc_to_ex("ex_of_osc", osc).unwrap();
        let a: BTreeSet<u32> = [1, 2].into();
        let b: BTreeSet<u32> = [1, 2, 3].into();
        // Both answer from the empty subset: syntactically stable.
        assert_eq!(h.step(&ctx, Input::Set(&a)).unwrap(), HypTerm::cofinite([0]));
        assert_eq!(h.step(&ctx, Input::Set(&b)).unwrap(), HypTerm::cofinite([0]));
    }

    #[test]
    fn transductive_repair_answers_for_the_smallest_claimed_element() {
        let ctx = Context::new();
        // h(x) claims [0, x]; answers on every number.
        let upto = Arc::new(Learner::new("upto", Kind::Td, |_, input| match input {
            Input::Single(Datum::Num(y)) => Ok(HypTerm::FinSet((0..=y).collect())),
            Input::Single(Datum::Pause) => Ok(HypTerm::Quest),
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        let h = td_bc_to_ex("td_ex", upto).unwrap();
        assert_eq!(
            h.step(&ctx, Input::Single(Datum::Num(5))).unwrap(),
            HypTerm::finset([0])
        );
        assert_eq!(
            h.step(&ctx, Input::Single(Datum::Num(2))).unwrap(),
            HypTerm::finset([0])
        );
        assert_eq!(h.step(&ctx, Input::Single(Datum::Pause)).unwrap(), HypTerm::Quest);
    }
}
