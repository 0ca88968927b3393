//! Consistency repairs: three ways of making a learner's hypothesis cover
//! the data it has seen, trading away different properties.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::learner::{Input, Kind, Learner};
use crate::term::{eval_term, HypTerm};

/// `D ⊆ C_t`, pointwise.
pub fn covers(ctx: &Context, t: &HypTerm, d: &BTreeSet<u32>) -> Result<bool> {
    for &x in d {
        if !eval_term(ctx, t, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn data_kinds_only(kind: Kind) -> Result<()> {
    match kind {
        Kind::G | Kind::Psd | Kind::Sd => Ok(()),
        _ => Err(Error::Contract(
            "consistency repairs take full-information, partially set-driven or set-driven learners".into(),
        )),
    }
}

/// Patch repair: `h'(σ) = h(σ)` when the content is already covered, and
/// otherwise unions the content in, so `C_{h'(σ)} = C_{h(σ)} ∪ content(σ)`.
pub fn make_consistent_patch(name: &str, base: Arc<Learner>) -> Result<Learner> {
    data_kinds_only(base.kind)?;
    let kind = base.kind;
    let b = base.clone();
    let mut out = Learner::new(name, kind, move |ctx, input| {
        let (t, d) = step_with_content(ctx, &b, input)?;
        if covers(ctx, &t, &d)? {
            Ok(t)
        } else {
            Ok(HypTerm::PatchUnion(Box::new(t), d))
        }
    });
    out.props = base
        .props
        .intersection(&preserved(&["smon", "mon", "total", "cind"]))
        .cloned()
        .collect();
    out.props.insert("cons".into());
    Ok(out)
}

/// Reset repair: on inconsistency, output exactly the content seen.
pub fn make_consistent_reset(name: &str, base: Arc<Learner>) -> Result<Learner> {
    data_kinds_only(base.kind)?;
    let kind = base.kind;
    let b = base.clone();
    let mut out = Learner::new(name, kind, move |ctx, input| {
        let (t, d) = step_with_content(ctx, &b, input)?;
        if covers(ctx, &t, &d)? {
            Ok(t)
        } else {
            Ok(HypTerm::ResetSet(d))
        }
    });
    out.props = base
        .props
        .intersection(&preserved(&["wmon", "cauttar", "total", "cind"]))
        .cloned()
        .collect();
    out.props.insert("cons".into());
    Ok(out)
}

/// Dedup repair: mimic the base on the repetition- and pause-free form of the
/// input, resetting when even that is inconsistent.
pub fn make_consistent_dedup(name: &str, base: Arc<Learner>) -> Result<Learner> {
    data_kinds_only(base.kind)?;
    let kind = base.kind;
    let b = base.clone();
    let mut out = Learner::new(name, kind, move |ctx, input| {
        let (t, d) = match input {
            Input::Sequence(s) => {
                let dd = s.dedup();
                (b.step(ctx, Input::Sequence(&dd))?, s.content())
            }
            // Without repetition the counter equals the set size.
            Input::SetCount(d, _) => (b.step(ctx, Input::SetCount(d, d.len()))?, d.clone()),
            Input::Set(d) => (b.step(ctx, Input::Set(d))?, d.clone()),
            _ => return Err(Error::Contract("kind mismatch".into())),
        };
        if covers(ctx, &t, &d)? {
            Ok(t)
        } else {
            Ok(HypTerm::ResetSet(d))
        }
    });
    out.props = base
        .props
        .intersection(&preserved(&["conv", "semconv", "total", "cind"]))
        .cloned()
        .collect();
    out.props.insert("cons".into());
    Ok(out)
}

fn preserved(names: &[&str]) -> BTreeSet<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn step_with_content<'a>(
    ctx: &Context,
    base: &Learner,
    input: Input<'a>,
) -> Result<(HypTerm, BTreeSet<u32>)> {
    match input {
        Input::Sequence(s) => Ok((base.step(ctx, Input::Sequence(s))?, s.content())),
        Input::SetCount(d, n) => Ok((base.step(ctx, Input::SetCount(d, n))?, d.clone())),
        Input::Set(d) => Ok((base.step(ctx, Input::Set(d))?, d.clone())),
        _ => Err(Error::Contract("kind mismatch".into())),
    }
}
