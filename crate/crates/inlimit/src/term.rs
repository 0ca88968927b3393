//! The hypothesis-term algebra: closed terms denoting total 0/1 functions.
//!
//! Syntactic identity is byte equality of the canonical serialization; two
//! equal constructor trees always serialize identically. Interpretation is
//! total on every point as long as referenced learners resolve and the term
//! is not `Quest`.

use std::collections::BTreeSet;
use std::fmt;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::seq::{canonical_seq, enumerate_sequences, render_set, Datum, Seq};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum HypTerm {
    /// The `?` output of transductive learners. Not evaluable.
    Quest,
    /// Index `i` into a registered family: membership is `decide(i, x)`.
    FamIdx(String, u32),
    FinSet(BTreeSet<u32>),
    /// All naturals except the listed ones.
    CoFinite(BTreeSet<u32>),
    /// Union of an inner hypothesis with a finite patch set.
    PatchUnion(Box<HypTerm>, BTreeSet<u32>),
    /// A hypothesis holding exactly the given data, kept distinct from
    /// `FinSet` so resets are syntactically recognizable.
    ResetSet(BTreeSet<u32>),
    /// Forward enumeration from `D` under the named set-driven learner:
    /// a point beyond `D` is in as long as no mind change is witnessed on
    /// the way up to it.
    WbForward(String, BTreeSet<u32>),
    /// Cautious closure of the named set-driven learner's hypothesis at `D`:
    /// a point is kept only if every future set up to the enumerated segment
    /// still claims the whole segment.
    CautBc(String, BTreeSet<u32>),
    /// The named full-information learner's hypothesis at `σ`, contradicting
    /// every family language once `σ` is witnessed not to be locking.
    Poison(String, Seq),
    /// Semantically transparent marker carrying the sequence that produced
    /// the inner hypothesis.
    Pad(Box<HypTerm>, Seq),
}

impl HypTerm {
    pub fn finset<I: IntoIterator<Item = u32>>(xs: I) -> Self {
        HypTerm::FinSet(xs.into_iter().collect())
    }

    pub fn cofinite<I: IntoIterator<Item = u32>>(xs: I) -> Self {
        HypTerm::CoFinite(xs.into_iter().collect())
    }

    pub fn is_quest(&self) -> bool {
        matches!(self, HypTerm::Quest)
    }

    /// Canonical serialization; equal trees produce equal bytes.
    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for HypTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypTerm::Quest => write!(f, "quest"),
            HypTerm::FamIdx(fam, i) => write!(f, "famidx({fam},{i})"),
            HypTerm::FinSet(d) => write!(f, "finset({})", render_set(d)),
            HypTerm::CoFinite(d) => write!(f, "cofinite({})", render_set(d)),
            HypTerm::PatchUnion(t, d) => write!(f, "patch({t},{})", render_set(d)),
            HypTerm::ResetSet(d) => write!(f, "reset({})", render_set(d)),
            HypTerm::WbForward(h, d) => write!(f, "wbfwd({h},{})", render_set(d)),
            HypTerm::CautBc(h, d) => write!(f, "cautbc({h},{})", render_set(d)),
            HypTerm::Poison(h, s) => write!(f, "poison({h},{s})"),
            HypTerm::Pad(t, s) => write!(f, "pad({t},{s})"),
        }
    }
}

/// Membership test `x ∈ C_t`. Total for every constructor except `Quest`.
pub fn eval_term(ctx: &Context, t: &HypTerm, x: u32) -> Result<bool> {
    match t {
        HypTerm::Quest => Err(Error::QuestEval),
        HypTerm::FamIdx(fam, i) => Ok(ctx.family(fam)?.decide(*i, x)),
        HypTerm::FinSet(d) | HypTerm::ResetSet(d) => Ok(d.contains(&x)),
        HypTerm::CoFinite(d) => Ok(!d.contains(&x)),
        HypTerm::PatchUnion(inner, d) => Ok(d.contains(&x) || eval_term(ctx, inner, x)?),
        HypTerm::Pad(inner, _) => eval_term(ctx, inner, x),
        HypTerm::WbForward(h, d) => eval_wb_forward(ctx, h, d, x),
        HypTerm::CautBc(h, d) => eval_caut_bc(ctx, t, h, d, x),
        HypTerm::Poison(h, s) => eval_poison(ctx, h, s, x),
    }
}

/// Bounded semantic equality: pointwise agreement on `[0, bound]`.
pub fn semantic_eq(ctx: &Context, a: &HypTerm, b: &HypTerm, bound: u32) -> Result<bool> {
    for x in 0..=bound {
        if eval_term(ctx, a, x)? != eval_term(ctx, b, x)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `C_t ∩ [0, bound]`.
pub fn members_upto(ctx: &Context, t: &HypTerm, bound: u32) -> Result<BTreeSet<u32>> {
    (0..=bound)
        .filter_map(|x| match eval_term(ctx, t, x) {
            Ok(true) => Some(Ok(x)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect()
}

/// Forward enumeration `s(D)`: membership of `x` holds when `x ∈ D`, or the
/// base hypothesis claims `x` and no mind change of the base learner is
/// witnessed on any set between `D` and `D` extended by the claimed elements
/// up to `x`. The extension sets are taken along the ascending chain of those
/// elements, so the scan is linear in `x`.
fn eval_wb_forward(ctx: &Context, learner: &str, d: &BTreeSet<u32>, x: u32) -> Result<bool> {
    if d.contains(&x) {
        return Ok(true);
    }
    let h = ctx.learner(learner)?.clone();
    let h_d = h.on_set(ctx, d)?;
    if !eval_term(ctx, &h_d, x)? {
        return Ok(false);
    }
    let claimed: Vec<u32> = (0..=x)
        .filter(|x2| !d.contains(x2))
        .map(|x2| eval_term(ctx, &h_d, x2).map(|b| (x2, b)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(x2, b)| b.then_some(x2))
        .collect();
    let mut d2 = d.clone();
    for e in claimed {
        d2.insert(e);
        if h.on_set(ctx, &d2)? != h_d {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Cautious closure: points already in `D` or denied by the base hypothesis
/// are settled immediately; otherwise the enumerated segment `E(x, D)` must
/// be claimed by the base learner on every set between `D` and `E(x, D)`.
/// `E(x, D)` references this very predicate at points strictly below `x`, so
/// evaluation recurses on smaller points through the context memo.
fn eval_caut_bc(
    ctx: &Context,
    term: &HypTerm,
    learner: &str,
    d: &BTreeSet<u32>,
    x: u32,
) -> Result<bool> {
    let key = term.render();
    if let Some(v) = ctx.memo_get(&key, x) {
        return Ok(v);
    }
    let v = eval_caut_bc_raw(ctx, &key, learner, d, x)?;
    ctx.memo_put(key, x, v);
    Ok(v)
}

fn eval_caut_bc_raw(
    ctx: &Context,
    key: &str,
    learner: &str,
    d: &BTreeSet<u32>,
    x: u32,
) -> Result<bool> {
    if d.contains(&x) {
        return Ok(true);
    }
    let h = ctx.learner(learner)?.clone();
    let h_d = h.on_set(ctx, d)?;
    if !eval_term(ctx, &h_d, x)? {
        return Ok(false);
    }
    // E(x,D) = D ∪ {x} ∪ {x' < x | this predicate holds at x'}.
    let mut e = d.clone();
    e.insert(x);
    for x2 in 0..x {
        let below = match ctx.memo_get(key, x2) {
            Some(v) => v,
            None => {
                let v = eval_caut_bc_raw(ctx, key, learner, d, x2)?;
                ctx.memo_put(key.to_string(), x2, v);
                v
            }
        };
        if below {
            e.insert(x2);
        }
    }
    let extras: Vec<u32> = e.difference(d).copied().collect();
    if extras.len() > ctx.caps.subset_scan {
        return Err(Error::CapExceeded(format!(
            "cautious closure subset scan over {} extra elements",
            extras.len()
        )));
    }
    for mask in 0u64..(1u64 << extras.len()) {
        let mut d2 = d.clone();
        for (bit, &el) in extras.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                d2.insert(el);
            }
        }
        let h_d2 = h.on_set(ctx, &d2)?;
        for &el in &e {
            if !eval_term(ctx, &h_d2, el)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Locking-candidate predicate for poisoning: `Q(σ, y) = 1` when some
/// extension of `σ` over the claimed elements up to `y` (length-capped by
/// the context) changes the base hypothesis on a point `≤ y`.
fn poison_q(ctx: &Context, learner: &str, sigma: &Seq, y: u32) -> Result<bool> {
    let key = format!("Q:{learner}:{sigma}");
    if let Some(v) = ctx.memo_get(&key, y) {
        return Ok(v);
    }
    let h = ctx.learner(learner)?.clone();
    let h_s = h.on_seq_star(ctx, sigma)?;
    let claimed: Vec<u32> = (0..=y)
        .map(|x2| eval_term(ctx, &h_s, x2).map(|b| (x2, b)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter_map(|(x2, b)| b.then_some(x2))
        .collect();
    let max_len = (y as usize).min(ctx.caps.ext_len);
    let count_bound = (claimed.len() + 1).pow(max_len as u32 + 1);
    if count_bound > ctx.caps.candidate_scan {
        return Err(Error::CapExceeded(format!(
            "poison extension search over alphabet of {} elements",
            claimed.len()
        )));
    }
    let mut flips = false;
    'outer: for tau in enumerate_sequences(&claimed, max_len) {
        let ext = sigma.concat(&tau);
        let h_e = h.on_seq_star(ctx, &ext)?;
        for y2 in 0..=y {
            if eval_term(ctx, &h_e, y2)? != eval_term(ctx, &h_s, y2)? {
                flips = true;
                break 'outer;
            }
        }
    }
    ctx.memo_put(key, y, flips);
    Ok(flips)
}

/// Poisoned hypothesis `s(σ)`: mirrors the base hypothesis while `σ` still
/// looks locking, and contradicts the language `L_{x - y0}` of the learner's
/// declared family afterwards, where `y0` is the first point witnessing a
/// mind change.
fn eval_poison(ctx: &Context, learner: &str, sigma: &Seq, x: u32) -> Result<bool> {
    if !poison_q(ctx, learner, sigma, x)? {
        let h = ctx.learner(learner)?.clone();
        let h_s = h.on_seq_star(ctx, sigma)?;
        return eval_term(ctx, &h_s, x);
    }
    let mut y0 = 0;
    for y in 0..=x {
        if poison_q(ctx, learner, sigma, y)? {
            y0 = y;
            break;
        }
    }
    let h = ctx.learner(learner)?;
    let fam_name = h.snu_family.as_ref().ok_or_else(|| {
        Error::Contract(format!("poison term for learner `{learner}` without a declared family"))
    })?;
    let fam = ctx.family(fam_name)?;
    Ok(!fam.decide(x - y0, x))
}

/// Parses the canonical serialization back into a term.
pub fn parse_term(input: &str) -> Result<HypTerm> {
    let mut p = TermParser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let t = p.term()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

struct TermParser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> TermParser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'-')
        {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn number(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("number out of range"))
    }

    fn set(&mut self) -> Result<BTreeSet<u32>> {
        self.expect(b'{')?;
        let mut out = BTreeSet::new();
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b'}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.insert(self.number()?);
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b'}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected `,` or `}`")),
            }
        }
    }

    fn seq(&mut self) -> Result<Seq> {
        self.expect(b'[')?;
        let mut out = Seq::empty();
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            self.skip_ws();
            if self.bytes.get(self.pos) == Some(&b'#') {
                self.pos += 1;
                out.push(Datum::Pause);
            } else {
                out.push(Datum::Num(self.number()?));
            }
            self.skip_ws();
            match self.bytes.get(self.pos) {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected `,` or `]`")),
            }
        }
    }

    fn term(&mut self) -> Result<HypTerm> {
        let head = self.ident()?;
        match head.as_str() {
            "quest" => Ok(HypTerm::Quest),
            "famidx" => {
                self.expect(b'(')?;
                let fam = self.ident()?;
                self.expect(b',')?;
                let i = self.number()?;
                self.expect(b')')?;
                Ok(HypTerm::FamIdx(fam, i))
            }
            "finset" => {
                self.expect(b'(')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::FinSet(d))
            }
            "cofinite" => {
                self.expect(b'(')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::CoFinite(d))
            }
            "reset" => {
                self.expect(b'(')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::ResetSet(d))
            }
            "patch" => {
                self.expect(b'(')?;
                let inner = self.term()?;
                self.expect(b',')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::PatchUnion(Box::new(inner), d))
            }
            "wbfwd" => {
                self.expect(b'(')?;
                let h = self.ident()?;
                self.expect(b',')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::WbForward(h, d))
            }
            "cautbc" => {
                self.expect(b'(')?;
                let h = self.ident()?;
                self.expect(b',')?;
                let d = self.set()?;
                self.expect(b')')?;
                Ok(HypTerm::CautBc(h, d))
            }
            "poison" => {
                self.expect(b'(')?;
                let h = self.ident()?;
                self.expect(b',')?;
                let s = self.seq()?;
                self.expect(b')')?;
                Ok(HypTerm::Poison(h, s))
            }
            "pad" => {
                self.expect(b'(')?;
                let inner = self.term()?;
                self.expect(b',')?;
                let s = self.seq()?;
                self.expect(b')')?;
                Ok(HypTerm::Pad(Box::new(inner), s))
            }
            _ => Err(self.err(&format!("unknown term constructor `{head}`"))),
        }
    }
}

/// The canonical sequence of `D` as a term-producing helper for resets.
pub fn ind(d: &BTreeSet<u32>) -> HypTerm {
    HypTerm::FinSet(d.clone())
}

/// Convenience: the canonical sequence of a finite set, used by several
/// transforms that replay set input as ordered data.
pub fn set_as_seq(d: &BTreeSet<u32>) -> Seq {
    canonical_seq(d)
}
