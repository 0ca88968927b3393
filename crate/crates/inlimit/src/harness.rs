//! Suite execution: locking-sequence detection, Cartesian job running with
//! per-tag verdicts, and the falsifier showing an iterative learner cannot
//! separate two finite extensions of a shared prefix.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::lang::Language;
use crate::learner::{run, HypSequence, Learner};
use crate::restrictions::{check_convergence, check_restriction, Mode, Outcome, Tag, Verdict};
use crate::seq::{enumerate_sequences, Datum, Seq};
use crate::term::members_upto;
use crate::text::Text;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// FNV-1a 64-bit digest of the canonical rendering of a hypothesis sequence.
pub fn digest(p: &HypSequence) -> String {
    let mut h: u64 = 0xcbf29ce484222325;
    for t in &p.terms {
        for b in t.render().bytes().chain([b'\n']) {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    format!("{h:016x}")
}

/// One suite job: a learner on one language member under one text, with the
/// restriction tags and convergence modes to verify.
#[derive(Clone, Debug)]
pub struct Job {
    pub learner: String,
    pub family: String,
    pub index: u32,
    pub text: Text,
    pub tags: Vec<Tag>,
    pub modes: Vec<Mode>,
    pub horizon: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictDump {
    pub label: String,
    pub line: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub learner: String,
    pub family: String,
    pub index: u32,
    pub text_id: String,
    pub digest: String,
    pub terms: Vec<String>,
    pub verdicts: Vec<VerdictDump>,
    pub bound: u32,
    pub horizon: usize,
}

impl RunReport {
    pub fn all_ok(&self) -> bool {
        self.verdicts.iter().all(|v| v.ok)
    }
}

/// Runs every job; search blowups and divergence become verdicts, never
/// panics. Job order is preserved in the output.
pub fn run_suite(ctx: &Context, jobs: &[Job]) -> Result<Vec<RunReport>> {
    #[cfg(feature = "parallel")]
    {
        jobs.par_iter().map(|j| run_job(ctx, j)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        jobs.iter().map(|j| run_job(ctx, j)).collect()
    }
}

/// Maps search blowups and divergence into report outcomes; configuration
/// errors (unresolved names, contract breaches) stay hard errors.
fn soften(r: Result<Outcome>) -> Result<Outcome> {
    match r {
        Err(Error::CapExceeded(what)) => Ok(Outcome::CapExceeded(what)),
        Err(Error::Diverged { step }) => Ok(Outcome::Diverged { step }),
        other => other,
    }
}

pub fn run_job(ctx: &Context, job: &Job) -> Result<RunReport> {
    let learner = ctx.learner(&job.learner)?.clone();
    let family = ctx.family(&job.family)?;
    let target = family.language(job.index);
    let bound = ctx.caps.universe_bound;
    let n = job.horizon.min(job.text.len());
    let mut verdicts = Vec::new();
    let mk = |label: String, outcome: Outcome| {
        let v = Verdict {
            label,
            text_id: job.text.id.clone(),
            outcome,
            bound,
            horizon: n,
        };
        VerdictDump {
            label: v.label.clone(),
            ok: v.outcome.is_ok(),
            line: v.render(),
        }
    };
    let (digest_s, terms) = match run(ctx, &learner, |i| job.text.at(i), n) {
        Ok(p) => {
            for &tag in &job.tags {
                let out = soften(check_restriction(ctx, tag, &p, &target, bound))?;
                verdicts.push(mk(tag.to_string(), out));
            }
            for &mode in &job.modes {
                let out = soften(check_convergence(ctx, mode, &p, &target, bound))?;
                verdicts.push(mk(mode.to_string(), out));
            }
            (digest(&p), p.terms.iter().map(|t| t.render()).collect())
        }
        Err(Error::Diverged { step }) => {
            for &tag in &job.tags {
                verdicts.push(mk(tag.to_string(), Outcome::Diverged { step }));
            }
            for &mode in &job.modes {
                verdicts.push(mk(mode.to_string(), Outcome::Diverged { step }));
            }
            (String::from("-"), Vec::new())
        }
        Err(e) => return Err(e),
    };
    Ok(RunReport {
        learner: job.learner.clone(),
        family: job.family.clone(),
        index: job.index,
        text_id: job.text.id.clone(),
        digest: digest_s,
        terms,
        verdicts,
        bound,
        horizon: n,
    })
}

/// The standard text ensemble for one language: the canonical text plus one
/// seeded text per given seed, all long enough to guarantee coverage.
pub fn standard_texts(lang: &Language, bound: u32, horizon: usize, seeds: &[u64]) -> Vec<Text> {
    let mut out = vec![Text::canonical(lang, horizon)];
    for &seed in seeds {
        out.push(Text::seeded(lang, bound, seed, 0.2, 0.25, horizon));
    }
    out
}

/// Searches for the ≤-minimal locking sequence of `h` on `lang`: a sequence
/// over the language's members (up to `bound`) of length at most
/// `pool_bound` such that no extension of length at most `ext_len` changes
/// the hypothesis, which moreover equals the language on `[0, bound]`.
/// `Mode::Bc` drops the no-mind-change clause. `None` means the bounded pool
/// is exhausted — explicitly an approximation.
pub fn find_locking(
    ctx: &Context,
    h: &Learner,
    lang: &Language,
    pool_bound: usize,
    ext_len: usize,
    mode: Mode,
) -> Result<Option<Seq>> {
    let bound = ctx.caps.universe_bound;
    let alphabet: Vec<u32> = lang.members_upto(bound).into_iter().collect();
    let count = (alphabet.len() + 1)
        .checked_pow(pool_bound.max(ext_len) as u32 + 1)
        .unwrap_or(usize::MAX);
    if count > ctx.caps.candidate_scan * ctx.caps.candidate_scan {
        return Err(Error::CapExceeded(format!(
            "locking search over alphabet of {} elements",
            alphabet.len()
        )));
    }
    let target_set = lang.members_upto(bound);
    let pool = enumerate_sequences(&alphabet, pool_bound);
    let exts = enumerate_sequences(&alphabet, ext_len);
    'candidates: for sigma in &pool {
        let h_s = h.on_seq_star(ctx, sigma)?;
        if h_s.is_quest() || members_upto(ctx, &h_s, bound)? != target_set {
            continue;
        }
        for tau in &exts {
            let h_e = h.on_seq_star(ctx, &sigma.concat(tau))?;
            if mode == Mode::Ex && h_e != h_s {
                continue 'candidates;
            }
            if h_e.is_quest() || members_upto(ctx, &h_e, bound)? != target_set {
                continue 'candidates;
            }
        }
        return Ok(Some(sigma.clone()));
    }
    Ok(None)
}

/// Evidence that an iterative learner cannot distinguish two languages: a
/// point where its state absorbs both `x+1` and `x+2` into the same term, and
/// the two resulting texts with their step-by-step identical hypothesis
/// sequences.
#[derive(Clone, Debug, Serialize)]
pub struct FalsificationCertificate {
    pub learner: String,
    pub n0: usize,
    pub x: u32,
    pub digest1: String,
    pub digest2: String,
    pub text1_id: String,
    pub text2_id: String,
    pub target1: String,
    pub target2: String,
    #[serde(skip)]
    pub text1: Text,
    #[serde(skip)]
    pub text2: Text,
}

/// Runs `h` on the canonical text of `ℕ∖{0}` and searches for a step whose
/// state maps the next two unseen elements to the same term; the certificate
/// then replays both diverging texts and records their digests.
pub fn falsify_it(
    ctx: &Context,
    h: &Learner,
    horizon: usize,
) -> Result<Option<FalsificationCertificate>> {
    if h.kind != crate::learner::Kind::It {
        return Err(Error::Contract("falsification targets iterative learners".into()));
    }
    let lang = Language::cofinite([0]);
    let text = Text::canonical(&lang, horizon);
    let p = run(ctx, h, |i| text.at(i), horizon)?;
    for n0 in 0..=horizon {
        let prefix = text.prefix(n0);
        let content = prefix.content();
        let x = content.iter().next_back().copied().unwrap_or(0);
        let q = &p.terms[n0];
        let s1 = h.step(ctx, crate::learner::Input::StateStep(q, Datum::Num(x + 1)))?;
        let s2 = h.step(ctx, crate::learner::Input::StateStep(q, Datum::Num(x + 2)))?;
        if s1 != s2 {
            continue;
        }
        let mk_text = |extra: u32| {
            let mut items = prefix.items().to_vec();
            items.push(Datum::Num(extra));
            while items.len() < horizon + 1 {
                items.push(Datum::Num(0));
            }
            Text::finite_then_pauses(&Seq::new(items.clone()), items.len())
        };
        let t1 = mk_text(x + 1);
        let t2 = mk_text(x + 2);
        let p1 = run(ctx, h, |i| t1.at(i), horizon)?;
        let p2 = run(ctx, h, |i| t2.at(i), horizon)?;
        let d1 = digest(&p1);
        let d2 = digest(&p2);
        if d1 != d2 {
            // The state stopped absorbing later on; keep searching.
            continue;
        }
        let target = |extra: u32| {
            let mut s: BTreeSet<u32> = content.clone();
            s.insert(extra);
            s.insert(0);
            Language::Finite(s)
        };
        return Ok(Some(FalsificationCertificate {
            learner: h.name.clone(),
            n0,
            x,
            digest1: d1,
            digest2: d2,
            text1_id: t1.id.clone(),
            text2_id: t2.id.clone(),
            target1: target(x + 1).to_string(),
            target2: target(x + 2).to_string(),
            text1: t1,
            text2: t2,
        }));
    }
    Ok(None)
}

impl FalsificationCertificate {
    /// Replays both texts and re-checks the certificate's claims: identical
    /// digests, distinct targets.
    pub fn self_verify(&self, ctx: &Context) -> Result<bool> {
        let h = ctx.learner(&self.learner)?.clone();
        let n = self.text1.len().min(self.text2.len()).saturating_sub(1);
        let p1 = run(ctx, &h, |i| self.text1.at(i), n)?;
        let p2 = run(ctx, &h, |i| self.text2.at(i), n)?;
        Ok(digest(&p1) == digest(&p2)
            && digest(&p1) == self.digest1
            && self.target1 != self.target2)
    }
}
