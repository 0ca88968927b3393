//! Learners and interaction operators.
//!
//! A learner is a pure step function from kind-specific input to a term.
//! Partiality is modeled through an optional cost table: a step on `σ` is
//! treated as undefined until the available budget reaches `cost(σ)`, so the
//! harness never hangs — it reports divergence instead.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

use crate::context::Context;
use crate::error::{Error, Result};
use crate::seq::{Datum, Seq};
use crate::term::HypTerm;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    G,
    Psd,
    Sd,
    It,
    Td,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Kind::G => "G",
            Kind::Psd => "Psd",
            Kind::Sd => "Sd",
            Kind::It => "It",
            Kind::Td => "Td",
        };
        write!(f, "{s}")
    }
}

/// Kind-specific step input. `InitIt` is the initial call of an iterative
/// learner (on the empty sequence); `StateStep` carries its previous term.
pub enum Input<'a> {
    Sequence(&'a Seq),
    SetCount(&'a BTreeSet<u32>, usize),
    Set(&'a BTreeSet<u32>),
    InitIt,
    StateStep(&'a HypTerm, Datum),
    Single(Datum),
}

impl Input<'_> {
    fn memo_key(&self) -> String {
        match self {
            Input::Sequence(s) => format!("q:{s}"),
            Input::SetCount(d, n) => format!("p:{}:{n}", crate::seq::render_set(d)),
            Input::Set(d) => format!("s:{}", crate::seq::render_set(d)),
            Input::InitIt => "i:".to_string(),
            Input::StateStep(t, x) => format!("i:{t}:{x}"),
            Input::Single(x) => format!("t:{x}"),
        }
    }
}

type StepFn = Arc<dyn for<'a> Fn(&Context, Input<'a>) -> Result<HypTerm> + Send + Sync>;
/// Cost of a step on a sequence; `None` means never affordable.
pub type CostFn = Arc<dyn Fn(&Seq) -> Option<u64> + Send + Sync>;

pub struct Learner {
    pub name: String,
    pub kind: Kind,
    step: StepFn,
    pub cost: Option<CostFn>,
    /// Family consulted by poisoned hypotheses this learner emits.
    pub snu_family: Option<String>,
    /// Declared properties for chain type-checking (e.g. "total", "cons").
    pub props: BTreeSet<String>,
    memo: Mutex<HashMap<String, HypTerm>>,
}

impl Learner {
    pub fn new(
        name: &str,
        kind: Kind,
        step: impl for<'a> Fn(&Context, Input<'a>) -> Result<HypTerm> + Send + Sync + 'static,
    ) -> Self {
        Learner {
            name: name.to_string(),
            kind,
            step: Arc::new(step),
            cost: None,
            snu_family: None,
            props: BTreeSet::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_props<const N: usize>(mut self, props: [&str; N]) -> Self {
        self.props.extend(props.iter().map(|p| p.to_string()));
        self
    }

    pub fn with_cost(mut self, cost: impl Fn(&Seq) -> Option<u64> + Send + Sync + 'static) -> Self {
        self.cost = Some(Arc::new(cost));
        self
    }

    pub fn with_snu_family(mut self, family: &str) -> Self {
        self.snu_family = Some(family.to_string());
        self
    }

    pub fn has_prop(&self, p: &str) -> bool {
        self.props.contains(p)
    }

    /// Raw step, memoized. The cost model is not consulted here; budgeted
    /// evaluation lives in `run`.
    pub fn step(&self, ctx: &Context, input: Input<'_>) -> Result<HypTerm> {
        let key = input.memo_key();
        if let Some(t) = self.memo.lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let t = (self.step)(ctx, input)?;
        self.memo.lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    /// The starred form `h*(σ)`: this learner's hypothesis after seeing `σ`,
    /// whatever its kind. For transductive learners the empty sequence maps
    /// to `?` and `?` outputs carry the previous hypothesis forward.
    pub fn on_seq_star(&self, ctx: &Context, sigma: &Seq) -> Result<HypTerm> {
        match self.kind {
            Kind::G => self.step(ctx, Input::Sequence(sigma)),
            Kind::Psd => self.step(ctx, Input::SetCount(&sigma.content(), sigma.len())),
            Kind::Sd => self.step(ctx, Input::Set(&sigma.content())),
            Kind::It => {
                let mut state = self.step(ctx, Input::InitIt)?;
                for &d in sigma.items() {
                    state = self.step(ctx, Input::StateStep(&state, d))?;
                }
                Ok(state)
            }
            Kind::Td => {
                let mut current = HypTerm::Quest;
                for &d in sigma.items() {
                    let out = self.step(ctx, Input::Single(d))?;
                    if !out.is_quest() {
                        current = out;
                    }
                }
                Ok(current)
            }
        }
    }

    /// Direct set application; the natural call for set-driven learners and
    /// the starred equivalent (canonical order) for every other kind.
    pub fn on_set(&self, ctx: &Context, d: &BTreeSet<u32>) -> Result<HypTerm> {
        match self.kind {
            Kind::Sd => self.step(ctx, Input::Set(d)),
            _ => self.on_seq_star(ctx, &crate::seq::canonical_seq(d)),
        }
    }
}

impl std::fmt::Debug for Learner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Learner")
            .field("name", &self.name)
            .field("kind", &self.kind)
            .field("props", &self.props)
            .finish()
    }
}

/// A bounded learning sequence: hypotheses at steps `0..=n` on a text prefix
/// of length `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypSequence {
    pub terms: Vec<HypTerm>,
    pub prefix: Seq,
}

impl HypSequence {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Runs `h` on the first `n` items of `text`, producing hypotheses at steps
/// `0..=n` per the interaction-operator equations. A cost model makes the
/// step at `i` undefined while `cost(T[i]) > i`; that surfaces as `Diverged`.
pub fn run(
    ctx: &Context,
    h: &Learner,
    text: impl Fn(usize) -> Datum,
    n: usize,
) -> Result<HypSequence> {
    let mut prefix = Seq::empty();
    let mut terms = Vec::with_capacity(n + 1);
    let mut it_state: Option<HypTerm> = None;
    for i in 0..=n {
        if let Some(cost) = &h.cost {
            match cost(&prefix) {
                Some(c) if c <= i as u64 => {}
                _ => return Err(Error::Diverged { step: i }),
            }
        }
        let term = match h.kind {
            Kind::G => h.step(ctx, Input::Sequence(&prefix))?,
            Kind::Psd => h.step(ctx, Input::SetCount(&prefix.content(), i))?,
            Kind::Sd => h.step(ctx, Input::Set(&prefix.content()))?,
            Kind::It => {
                let state = match &it_state {
                    None => h.step(ctx, Input::InitIt)?,
                    Some(prev) => {
                        let last = *prefix.items().last().unwrap();
                        h.step(ctx, Input::StateStep(prev, last))?
                    }
                };
                it_state = Some(state.clone());
                state
            }
            Kind::Td => {
                if i == 0 {
                    HypTerm::Quest
                } else {
                    let last = *prefix.items().last().unwrap();
                    let out = h.step(ctx, Input::Single(last))?;
                    if out.is_quest() {
                        terms.last().cloned().unwrap()
                    } else {
                        out
                    }
                }
            }
        };
        terms.push(term);
        if i < n {
            prefix.push(text(i));
        }
    }
    Ok(HypSequence { terms, prefix })
}

/// The Gold-style learner simulating `h`: `star(h)(σ) = h*(σ)`.
pub fn star(ctx_name: &str, h: Arc<Learner>) -> Learner {
    let mut out = Learner::new(ctx_name, Kind::G, move |ctx, input| match input {
        Input::Sequence(s) => h.on_seq_star(ctx, s),
        _ => Err(Error::Contract("starred learner takes sequences".into())),
    });
    out.props.insert("total".to_string());
    out
}

/// Budgeted totalization: `h'(σ) = h(σ')` where `σ'` is the longest prefix of
/// `σ` affordable within budget `|σ|` (the empty sequence is always
/// affordable by precondition). Returns the total learner; `delay_schedule`
/// exposes the reindexing `r` used on a concrete text.
pub fn totalize(name: &str, h: Arc<Learner>) -> Result<Learner> {
    if h.kind != Kind::G {
        return Err(Error::Contract("totalization takes a full-information learner".into()));
    }
    let cost = h
        .cost
        .clone()
        .ok_or_else(|| Error::Contract("totalization needs a cost model".into()))?;
    if cost(&Seq::empty()) != Some(0) {
        return Err(Error::Contract("base learner must be defined on the empty sequence at cost 0".into()));
    }
    let hh = h.clone();
    let mut out = Learner::new(name, Kind::G, move |ctx, input| {
        let sigma = match input {
            Input::Sequence(s) => s,
            _ => return Err(Error::Contract("totalized learner takes sequences".into())),
        };
        let cut = affordable_cut(&cost, sigma);
        hh.step(ctx, Input::Sequence(&sigma.prefix(cut)))
    });
    out.props = h.props.clone();
    out.props.insert("total".to_string());
    Ok(out)
}

fn affordable_cut(cost: &CostFn, sigma: &Seq) -> usize {
    let budget = sigma.len() as u64;
    let mut best = 0;
    for k in 0..=sigma.len() {
        if cost(&sigma.prefix(k)).is_some_and(|c| c <= budget) {
            best = k;
        }
    }
    best
}

/// The delaying function `r` of the totalization on a concrete text:
/// `r(n) = |longest prefix of T[n] affordable within budget n|`, so that the
/// totalized learner satisfies `h'(T[n]) = h(T[r(n)])`.
pub fn delay_schedule(
    h: &Learner,
    text: impl Fn(usize) -> Datum,
    n: usize,
) -> Result<Vec<usize>> {
    let cost = h
        .cost
        .clone()
        .ok_or_else(|| Error::Contract("delay schedule needs a cost model".into()))?;
    let mut prefix = Seq::empty();
    let mut out = Vec::with_capacity(n + 1);
    for i in 0..=n {
        out.push(affordable_cut(&cost, &prefix));
        if i < n {
            prefix.push(text(i));
        }
    }
    Ok(out)
}
