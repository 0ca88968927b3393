//! Collapse constructions: turning consistent or cautious learners into
//! witness-based, strongly non-U-shaped and strongly decisive ones.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::learner::{Input, Kind, Learner};
use crate::seq::{ascending_prefix_set, canonical_seq, enumerate_sequences, Datum, Seq};
use crate::term::{eval_term, HypTerm};

use super::consistency::covers;

/// Witness-based repair of a consistent, target-cautious learner: keep the
/// current hypothesis as long as each new datum is already claimed (the
/// latest datum is the witness of every mind change). Pauses never change
/// the mind.
pub fn cauttar_to_wb(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("witness-based repair takes a full-information learner".into()));
    }
    let b = base.clone();
    let out = Learner::new(name, Kind::G, move |ctx, input| {
        let sigma = match input {
            Input::Sequence(s) => s,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        let mut current = b.step(ctx, Input::Sequence(&Seq::empty()))?;
        for n in 0..sigma.len() {
            let keep = match sigma.items()[n] {
                Datum::Pause => true,
                Datum::Num(x) => eval_term(ctx, &current, x)?,
            };
            if !keep {
                current = b.step(ctx, Input::Sequence(&sigma.prefix(n + 1)))?;
            }
        }
        Ok(current)
    });
    Ok(out.with_props(["wb", "total", "cind"]))
}

/// Set-driven target-cautious learner from a consistent full-information one:
/// mimic the base on the shortest cut of the canonical sequence whose
/// hypothesis already covers the whole set.
pub fn g_to_sd_cauttar(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("set-driven repair takes a full-information learner".into()));
    }
    let b = base.clone();
    let out = Learner::new(name, Kind::Sd, move |ctx, input| {
        let d = match input {
            Input::Set(d) => d,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        let sigma = canonical_seq(d);
        for k in 0..=sigma.len() {
            let t = b.step(ctx, Input::Sequence(&sigma.prefix(k)))?;
            if covers(ctx, &t, d)? {
                return Ok(t);
            }
        }
        // Consistency of the base makes the full cut qualify; reaching here
        // means the precondition was violated, so answer for the full set.
        b.step(ctx, Input::Sequence(&sigma))
    });
    Ok(out.with_props(["cauttar", "total", "cind"]))
}

/// Witness-based repair of a set-driven target-cautious learner. `k_D` is the
/// least cut of `D` below which no mind change is witnessed on any set
/// between the cut and `D`; the output then either forward-enumerates from
/// that cut or resets to it when the cut's hypothesis claims a skipped
/// element below its maximum.
pub fn sd_cauttar_to_wb(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::Sd {
        return Err(Error::Contract("witness-based repair takes a set-driven learner".into()));
    }
    let b = base.clone();
    let base_name = base.name.clone();
    let out = Learner::new(name, Kind::Sd, move |ctx, input| {
        let d = match input {
            Input::Set(d) => d,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        if d.len() > ctx.caps.subset_scan {
            return Err(Error::CapExceeded(format!(
                "witness-cut subset scan over a set of {} elements",
                d.len()
            )));
        }
        let h_d = b.step(ctx, Input::Set(d))?;
        let mut cut = d.clone();
        for k in 0..=d.len() {
            let dk = ascending_prefix_set(d, k);
            if no_mind_change_between(ctx, &b, &dk, d, &h_d)? {
                cut = dk;
                break;
            }
        }
        let h_cut = b.step(ctx, Input::Set(&cut))?;
        let gate = match cut.iter().next_back() {
            None => false,
            Some(&max) => {
                let mut fired = false;
                for x in 0..max {
                    if !cut.contains(&x) && eval_term(ctx, &h_cut, x)? {
                        fired = true;
                        break;
                    }
                }
                fired
            }
        };
        if gate {
            Ok(HypTerm::ResetSet(cut))
        } else {
            Ok(HypTerm::WbForward(base_name.clone(), cut))
        }
    });
    Ok(out.with_props(["wb", "total", "cind"]))
}

/// `∀D', low ⊆ D' ⊆ high: h(D') = h(high)`.
fn no_mind_change_between(
    ctx: &Context,
    h: &Learner,
    low: &BTreeSet<u32>,
    high: &BTreeSet<u32>,
    h_high: &HypTerm,
) -> Result<bool> {
    let extras: Vec<u32> = high.difference(low).copied().collect();
    for mask in 0u64..(1u64 << extras.len()) {
        let mut d2 = low.clone();
        for (bit, &el) in extras.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                d2.insert(el);
            }
        }
        if h.step(ctx, Input::Set(&d2))? != *h_high {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Strongly non-U-shaped repair by poisoning: the output hypothesis at `σ` is
/// the poisoned term of the shortest locking candidate among the prefixes of
/// `σ`. The base learner must carry a declared family for the poison term to
/// contradict.
pub fn g_to_snu(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("poisoning takes a full-information learner".into()));
    }
    if base.snu_family.is_none() {
        return Err(Error::Contract(format!(
            "poisoning learner `{}` needs a declared family",
            base.name
        )));
    }
    let b = base.clone();
    let base_name = base.name.clone();
    let fam = base.snu_family.clone();
    let mut out = Learner::new(name, Kind::G, move |ctx, input| {
        let sigma = match input {
            Input::Sequence(s) => s,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        let candidate = min_locking_candidate(ctx, &b, sigma)?;
        Ok(HypTerm::Poison(base_name.clone(), candidate))
    });
    out.snu_family = fam;
    Ok(out.with_props(["snu", "total", "cind"]))
}

/// The shortest prefix `σ'` of `σ` such that every short extension of `σ'`
/// over `content(σ) ∪ {#}` leaves the hypothesis at `σ` unchanged on points
/// up to `|σ|`; falls back to `σ` itself when no prefix qualifies within the
/// extension cap.
fn min_locking_candidate(ctx: &Context, h: &Learner, sigma: &Seq) -> Result<Seq> {
    let h_s = h.step(ctx, Input::Sequence(sigma))?;
    let alphabet: Vec<u32> = sigma.content().into_iter().collect();
    let max_len = sigma.len().min(ctx.caps.ext_len);
    let count_bound = (alphabet.len() + 1).pow(max_len as u32 + 1);
    if count_bound > ctx.caps.candidate_scan {
        return Err(Error::CapExceeded(format!(
            "locking-candidate extension search over alphabet of {} elements",
            alphabet.len()
        )));
    }
    let extensions = enumerate_sequences(&alphabet, max_len);
    let bound = sigma.len() as u32;
    'prefixes: for k in 0..sigma.len() {
        let p = sigma.prefix(k);
        for tau in &extensions {
            let h_e = h.step(ctx, Input::Sequence(&p.concat(tau)))?;
            for x in 0..=bound {
                if eval_term(ctx, &h_e, x)? != eval_term(ctx, &h_s, x)? {
                    continue 'prefixes;
                }
            }
        }
        return Ok(p);
    }
    Ok(sigma.clone())
}

/// Strongly decisive repair: wait with any mind change until every earlier
/// hypothesis is witnessed semantically distinct from the new one, and return
/// to the previous output otherwise.
pub fn snu_to_sdec(name: &str, base: Arc<Learner>) -> Result<Learner> {
    if base.kind != Kind::G {
        return Err(Error::Contract("decisive repair takes a full-information learner".into()));
    }
    let b = base.clone();
    let out = Learner::new(name, Kind::G, move |ctx, input| {
        let sigma = match input {
            Input::Sequence(s) => s,
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        Ok(sdec_outputs(ctx, &b, sigma)?.pop().unwrap())
    });
    Ok(out.with_props(["sdec", "total", "cind"]))
}

/// The repaired outputs on all prefixes of `σ`, index `k` for the length-`k`
/// prefix.
fn sdec_outputs(ctx: &Context, h: &Learner, sigma: &Seq) -> Result<Vec<HypTerm>> {
    let bound = sigma.len() as u32;
    let mut out = vec![h.step(ctx, Input::Sequence(&Seq::empty()))?];
    for m in 1..=sigma.len() {
        let cur = sigma.prefix(m);
        let prev = out[m - 1].clone();
        // Shortest prefix on which the previous output first appeared.
        let anchor = (0..m).find(|&k| out[k] == prev).unwrap();
        let h_anchor = h.step(ctx, Input::Sequence(&sigma.prefix(anchor)))?;
        let h_cur = h.step(ctx, Input::Sequence(&cur))?;
        let unchanged_since_anchor = (anchor..=m)
            .map(|k| h.step(ctx, Input::Sequence(&sigma.prefix(k))))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|t| t == h_anchor);
        let next = if unchanged_since_anchor {
            h_anchor
        } else {
            let mut all_earlier_distinct = true;
            'earlier: for k in 0..=anchor {
                for x in 0..=bound {
                    if eval_term(ctx, &out[k], x)? != eval_term(ctx, &h_cur, x)? {
                        continue 'earlier;
                    }
                }
                all_earlier_distinct = false;
                break;
            }
            if all_earlier_distinct {
                h_cur
            } else {
                h_anchor
            }
        };
        out.push(next);
    }
    Ok(out)
}
