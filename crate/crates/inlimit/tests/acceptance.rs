//! End-to-end acceptance checks, one test per criterion. Each prints a
//! single pass line; a failure panics with the offending detail.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use inlimit::cli;
use inlimit::context::{Caps, Context};
use inlimit::error::Error;
use inlimit::families::{self, standard_suite};
use inlimit::harness::{falsify_it, run_suite, Job};
use inlimit::learner::{delay_schedule, run, star, totalize, Input, Kind, Learner};
use inlimit::restrictions::{
    check_convergence, check_restriction, Mode, Outcome, Tag, ALL_TAGS,
};
use inlimit::seq::{Datum, Seq};
use inlimit::term::{eval_term, members_upto, semantic_eq, HypTerm};
use inlimit::text::Text;
use inlimit::transforms::{self, min_locking_sequence};
use inlimit::{HypSequence, Language};

const BOUND: u32 = 64;

fn ctx_with_standard() -> Context {
    let mut ctx = Context::new();
    families::register_standard(&mut ctx);
    ctx
}

fn texts(lang: &Language, horizon: usize, seeds: std::ops::Range<u64>) -> Vec<Text> {
    let mut out = vec![Text::canonical(lang, horizon)];
    for seed in seeds {
        out.push(Text::seeded(lang, BOUND, seed, 0.2, 0.25, horizon));
    }
    out
}

fn run_on(ctx: &Context, h: &Learner, text: &Text, n: usize) -> HypSequence {
    run(ctx, h, |i| text.at(i), n.min(text.len())).unwrap()
}

fn assert_clean(ctx: &Context, tag: Tag, p: &HypSequence, lang: &Language, what: &str) {
    let o = check_restriction(ctx, tag, p, lang, BOUND).unwrap();
    assert_eq!(o, Outcome::Clean, "{what}: {tag} gave {o:?}");
}

fn assert_converged(ctx: &Context, mode: Mode, p: &HypSequence, lang: &Language, what: &str) -> usize {
    match check_convergence(ctx, mode, p, lang, BOUND).unwrap() {
        Outcome::Converged { n0, .. } => n0,
        o => panic!("{what}: {mode} gave {o:?}"),
    }
}

// --- criterion 1: the verifiers against naive transliterations ---------------

mod naive {
    use super::*;

    fn set_of(ctx: &Context, t: &HypTerm) -> Option<BTreeSet<u32>> {
        if t.is_quest() {
            None
        } else {
            Some(members_upto(ctx, t, BOUND).unwrap())
        }
    }

    /// Direct quantifier-by-quantifier reading of each restriction formula,
    /// recomputing member sets at every use and reporting the first violating
    /// tuple in the documented order (last quantified index major).
    pub fn check(
        ctx: &Context,
        tag: Tag,
        p: &HypSequence,
        target: &Language,
    ) -> Outcome {
        let n = p.terms.len();
        let set = |i: usize| set_of(ctx, &p.terms[i]);
        let content = |i: usize| p.prefix.prefix(i).content();
        let target_set = target.members_upto(BOUND);
        let min_missing =
            |a: &BTreeSet<u32>, b: &BTreeSet<u32>| a.difference(b).next().copied();
        let min_diff =
            |a: &BTreeSet<u32>, b: &BTreeSet<u32>| a.symmetric_difference(b).next().copied();
        let v1 = |i, w| Outcome::Violation { indices: (i, None, None), witness: w };
        let v2 = |i, j, w| Outcome::Violation { indices: (i, Some(j), None), witness: w };
        let v3 = |i, j, k, w| Outcome::Violation { indices: (i, Some(j), Some(k)), witness: w };
        match tag {
            Tag::T => Outcome::Clean,
            Tag::Cons => {
                for i in 0..n {
                    if let Some(hi) = set(i) {
                        if let Some(x) = min_missing(&content(i), &hi) {
                            return v1(i, Some(x));
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::Conv => {
                for i in 0..n.saturating_sub(1) {
                    let Some(hi) = set(i) else { continue };
                    if p.terms[i + 1].is_quest() {
                        continue;
                    }
                    if content(i + 1).is_subset(&hi) && p.terms[i] != p.terms[i + 1] {
                        return v1(i, None);
                    }
                }
                Outcome::Clean
            }
            Tag::SemConv => {
                for i in 0..n.saturating_sub(1) {
                    let (Some(hi), Some(hj)) = (set(i), set(i + 1)) else { continue };
                    if content(i + 1).is_subset(&hi) {
                        if let Some(x) = min_diff(&hi, &hj) {
                            return v1(i, Some(x));
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::Caut => {
                for j in 0..n {
                    for i in j + 1..n {
                        let (Some(hi), Some(hj)) = (set(i), set(j)) else { continue };
                        if hi.is_subset(&hj) && hi != hj {
                            return v2(i, j, min_missing(&hj, &hi));
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::CautTar => {
                for i in 0..n {
                    let Some(hi) = set(i) else { continue };
                    if target_set.is_subset(&hi) && hi != target_set {
                        return v1(i, min_missing(&hi, &target_set));
                    }
                }
                Outcome::Clean
            }
            Tag::Mon => {
                for j in 0..n {
                    for i in 0..j {
                        let (Some(hi), Some(hj)) = (set(i), set(j)) else { continue };
                        let lost = hi
                            .intersection(&target_set)
                            .find(|x| !hj.contains(x))
                            .copied();
                        if let Some(x) = lost {
                            return v2(i, j, Some(x));
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::SMon => {
                for j in 0..n {
                    for i in 0..j {
                        let (Some(hi), Some(hj)) = (set(i), set(j)) else { continue };
                        if let Some(x) = min_missing(&hi, &hj) {
                            return v2(i, j, Some(x));
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::WMon => {
                for j in 0..n {
                    for i in 0..j {
                        let (Some(hi), Some(hj)) = (set(i), set(j)) else { continue };
                        if content(j).is_subset(&hi) {
                            if let Some(x) = min_missing(&hi, &hj) {
                                return v2(i, j, Some(x));
                            }
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::Wb => {
                for j in 0..n {
                    for i in 0..=j {
                        let (Some(hi), Some(hj)) = (set(i), set(j)) else { continue };
                        let mind_change = (i + 1..=j)
                            .any(|k| !p.terms[k].is_quest() && p.terms[i] != p.terms[k]);
                        if !mind_change {
                            continue;
                        }
                        let justified =
                            content(j).iter().any(|x| hj.contains(x) && !hi.contains(x));
                        if !justified {
                            return v2(i, j, None);
                        }
                    }
                }
                Outcome::Clean
            }
            Tag::Dec | Tag::SDec | Tag::NU | Tag::SNU => {
                let target_only = matches!(tag, Tag::NU | Tag::SNU);
                let syntactic = matches!(tag, Tag::SDec | Tag::SNU);
                for k in 0..n {
                    for j in 0..=k {
                        for i in 0..=j {
                            let (Some(hi), Some(hj), Some(hk)) = (set(i), set(j), set(k))
                            else {
                                continue;
                            };
                            if hi != hk || (target_only && hi != target_set) {
                                continue;
                            }
                            if syntactic {
                                if p.terms[i] != p.terms[j] {
                                    return v3(i, j, k, None);
                                }
                            } else if let Some(x) = min_diff(&hi, &hj) {
                                return v3(i, j, k, Some(x));
                            }
                        }
                    }
                }
                Outcome::Clean
            }
        }
    }
}

#[test]
fn criterion_01_verifiers_match_naive_transliterations() {
    let ctx = ctx_with_standard();
    let pool = [
        HypTerm::Quest,
        HypTerm::finset([0, 1]),
        HypTerm::cofinite([1]),
    ];
    let target = Language::finite([0, 1]);
    let items = [Datum::Num(0), Datum::Num(1), Datum::Pause];
    let mut prefixes: Vec<Seq> = vec![Seq::empty()];
    let mut frontier = vec![Seq::empty()];
    for _ in 0..3 {
        let mut next = Vec::new();
        for s in &frontier {
            for &d in &items {
                next.push(s.snoc(d));
            }
        }
        prefixes.extend(next.iter().cloned());
        frontier = next;
    }
    let mut checked = 0usize;
    for prefix in &prefixes {
        let n = prefix.len() + 1;
        // All term assignments: n digits base 3.
        for code in 0..3usize.pow(n as u32) {
            let mut c = code;
            let terms: Vec<HypTerm> = (0..n)
                .map(|_| {
                    let t = pool[c % 3].clone();
                    c /= 3;
                    t
                })
                .collect();
            let p = HypSequence {
                terms,
                prefix: prefix.clone(),
            };
            for tag in ALL_TAGS {
                let fast = check_restriction(&ctx, tag, &p, &target, BOUND).unwrap();
                let slow = naive::check(&ctx, tag, &p, &target);
                assert_eq!(fast, slow, "{tag} on {p:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 30_000, "exhaustive space unexpectedly small: {checked}");
    println!("criterion 01 (verifier oracle equivalence, {checked} checks): PASS");
}

// --- criterion 2: consistency repairs preserve the named restrictions --------

#[test]
fn criterion_02_consistency_preserves_each_restriction() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("lazy_g").unwrap().clone();
    let patched = transforms::apply(&mut ctx, "make_consistent_patch", base.clone(), "lazy_patch").unwrap();
    let reset = transforms::apply(&mut ctx, "make_consistent_reset", base.clone(), "lazy_reset").unwrap();
    let dedup = transforms::apply(&mut ctx, "make_consistent_dedup", base.clone(), "lazy_dedup").unwrap();
    let cases: [(Option<Tag>, &Arc<Learner>); 7] = [
        (None, &patched),
        (Some(Tag::Mon), &patched),
        (Some(Tag::SMon), &patched),
        (Some(Tag::WMon), &reset),
        (Some(Tag::CautTar), &reset),
        (Some(Tag::SemConv), &dedup),
        (Some(Tag::Conv), &dedup),
    ];
    let fam = ctx.family("fin").unwrap().clone();
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 60, 0..10) {
            let p_base = run_on(&ctx, &base, &text, 60);
            for (delta, repaired) in &cases {
                let p = run_on(&ctx, repaired, &text, 60);
                let what = format!("{} i={index} {}", repaired.name, text.id);
                assert_clean(&ctx, Tag::Cons, &p, &lang, &what);
                if let Some(d) = delta {
                    assert_clean(&ctx, *d, &p_base, &lang, &format!("base {what}"));
                    assert_clean(&ctx, *d, &p, &lang, &what);
                }
                assert_converged(&ctx, Mode::Ex, &p, &lang, &what);
                assert_converged(&ctx, Mode::Bc, &p, &lang, &what);
            }
        }
    }
    println!("criterion 02 (consistency repairs preserve T/Mon/SMon/WMon/CautTar/SemConv/Conv): PASS");
}

// --- criterion 3: the patch identity, pointwise ------------------------------

#[test]
fn criterion_03_patch_identity_on_sampled_sequences() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("lazy_g").unwrap().clone();
    let patched = transforms::apply(&mut ctx, "make_consistent_patch", base.clone(), "lazy_patch3").unwrap();
    let mut state: u64 = 0x9e3779b97f4a7c15;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state >> 33
    };
    for case in 0..1000 {
        let len = (next() % 9) as usize;
        let sigma = Seq::new(
            (0..len)
                .map(|_| match next() % 10 {
                    0 => Datum::Pause,
                    d => Datum::Num((d - 1) as u32),
                })
                .collect(),
        );
        let lhs = members_upto(
            &ctx,
            &patched.step(&ctx, Input::Sequence(&sigma)).unwrap(),
            BOUND,
        )
        .unwrap();
        let mut rhs = members_upto(
            &ctx,
            &base.step(&ctx, Input::Sequence(&sigma)).unwrap(),
            BOUND,
        )
        .unwrap();
        rhs.extend(sigma.content());
        assert_eq!(lhs, rhs, "case {case}: σ = {sigma}");
    }
    println!("criterion 03 (patched hypothesis = base ∪ content, 1000 samples): PASS");
}

// --- criterion 4: the lower collapse chain -----------------------------------

#[test]
fn criterion_04_lower_collapse_chain() {
    let mut ctx = ctx_with_standard();
    let fin_g = ctx.learner("fin_g").unwrap().clone();
    let wb_g = transforms::apply(&mut ctx, "cauttar_to_wb", fin_g.clone(), "wb_of_fin_g").unwrap();
    let sd_ct = transforms::apply(&mut ctx, "g_to_sd_cauttar", fin_g.clone(), "sd_ct_of_fin_g").unwrap();
    let wb_sd = transforms::apply(&mut ctx, "sd_cauttar_to_wb", sd_ct.clone(), "wb_of_sd_ct").unwrap();
    let cases = [(&wb_g, Tag::Wb), (&sd_ct, Tag::CautTar), (&wb_sd, Tag::Wb)];
    let fam = ctx.family("fin").unwrap().clone();
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 40, 0..3) {
            for (h, tag) in &cases {
                let p = run_on(&ctx, h, &text, 40);
                let what = format!("{} i={index} {}", h.name, text.id);
                assert_clean(&ctx, *tag, &p, &lang, &what);
                assert_converged(&ctx, Mode::Ex, &p, &lang, &what);
            }
        }
    }
    println!("criterion 04 (witness-based / target-cautious collapse chain): PASS");
}

// --- criterion 5: poisoning and decisive repair on the conflict family -------

#[test]
fn criterion_05_snu_sdec_collapse_on_conflict() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("conflict_learner").unwrap().clone();
    let small = Language::finite([0]);
    // The base is U-shaped on the canonical text of {0}.
    let crafted = Text::canonical(&small, 6);
    let p = run_on(&ctx, &base, &crafted, 6);
    let dec = check_restriction(&ctx, Tag::Dec, &p, &small, BOUND).unwrap();
    let nu = check_restriction(&ctx, Tag::NU, &p, &small, BOUND).unwrap();
    assert!(
        matches!(dec, Outcome::Violation { .. }) || matches!(nu, Outcome::Violation { .. }),
        "base shows neither a decisiveness nor a U-shape violation: {dec:?} / {nu:?}"
    );
    let snu = transforms::apply(&mut ctx, "g_to_snu", base.clone(), "snu_conflict").unwrap();
    let sdec = transforms::apply(&mut ctx, "snu_to_sdec", snu.clone(), "sdec_conflict").unwrap();
    let fam = ctx.family("conflict").unwrap().clone();
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 12, 0..3) {
            let p_snu = run_on(&ctx, &snu, &text, 12);
            let p_sdec = run_on(&ctx, &sdec, &text, 12);
            let what = format!("i={index} {}", text.id);
            assert_clean(&ctx, Tag::SNU, &p_snu, &lang, &format!("snu {what}"));
            assert_clean(&ctx, Tag::SDec, &p_sdec, &lang, &format!("sdec {what}"));
            let n0 = assert_converged(&ctx, Mode::Ex, &p_snu, &lang, &format!("snu {what}"));
            assert_converged(&ctx, Mode::Ex, &p_sdec, &lang, &format!("sdec {what}"));
            // Before convergence the poisoned hypotheses avoid the target.
            let target = HypTerm::FinSet(lang.members_upto(BOUND));
            for (i, t) in p_snu.terms.iter().enumerate().take(n0) {
                if t.is_quest() {
                    continue;
                }
                assert!(
                    !semantic_eq(&ctx, t, &target, BOUND).unwrap(),
                    "snu {what}: hypothesis {i} already equals the target"
                );
            }
        }
    }
    println!("criterion 05 (poisoned non-U-shaped and decisive repairs on the conflict pair): PASS");
}

// --- criterion 6: the memory equalities --------------------------------------

#[test]
fn criterion_06a_psd_matches_locking_search() {
    let mut ctx = ctx_with_standard();
    for name in ["fin_g", "lazy_g", "conflict_learner"] {
        let base = ctx.learner(name).unwrap().clone();
        let psd = transforms::apply(&mut ctx, "g_to_psd", base.clone(), &format!("psd_{name}"))
            .unwrap();
        let sets: [BTreeSet<u32>; 4] = [
            BTreeSet::new(),
            [0].into(),
            [0, 2].into(),
            [0, 1, 3].into(),
        ];
        for d in &sets {
            let t_max = if d.len() >= 3 { 4 } else { 5 };
            for t in 0..=t_max {
                let got = psd.step(&ctx, Input::SetCount(d, t)).unwrap();
                let expect = match min_locking_sequence(&ctx, &base, d, t).unwrap() {
                    Some(sigma) => base.step(&ctx, Input::Sequence(&sigma)).unwrap(),
                    None => base.step(&ctx, Input::Sequence(&Seq::empty())).unwrap(),
                };
                assert_eq!(got, expect, "{name} D={d:?} t={t}");
            }
        }
    }
    println!("criterion 06a (partially set-driven simulation = minimal locking search): PASS");
}

#[test]
fn criterion_06b_padding_is_pointwise_transparent() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("fin_g").unwrap().clone();
    let padded = transforms::apply(&mut ctx, "bc_to_it_pad", base.clone(), "it_pad_fin").unwrap();
    let fam = ctx.family("fin").unwrap().clone();
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 20, 0..2) {
            let pb = run_on(&ctx, &base, &text, 20);
            let pp = run_on(&ctx, &padded, &text, 20);
            for (k, (tb, tp)) in pb.terms.iter().zip(&pp.terms).enumerate() {
                assert!(
                    semantic_eq(&ctx, tb, tp, BOUND).unwrap(),
                    "i={index} {} step {k}",
                    text.id
                );
            }
        }
    }
    println!("criterion 06b (padded iterative simulation is semantically transparent): PASS");
}

#[test]
fn criterion_06c_unpadding_recovers_ex_convergence() {
    let mut ctx = ctx_with_standard();
    let cofin_g = Arc::new(
        Learner::new("cofin_g", Kind::G, |_, input| match input {
            Input::Sequence(s) => {
                let d = s.content();
                let max = d.iter().next_back().copied().unwrap_or(0);
                Ok(HypTerm::CoFinite((0..max).filter(|x| !d.contains(x)).collect()))
            }
            _ => Err(Error::Contract("kind mismatch".into())),
        })
        .with_props(["total", "cind"]),
    );
    let cofin_g = ctx.add_learner(cofin_g);
    let fin_g = ctx.learner("fin_g").unwrap().clone();
    let mut cases = Vec::new();
    for (base, fam_name) in [(fin_g, "fin"), (cofin_g, "cofin")] {
        let padded = transforms::apply(&mut ctx, "bc_to_it_pad", base.clone(), &format!("pad6c_{fam_name}")).unwrap();
        let sd = transforms::apply(&mut ctx, "it_to_sd", padded, &format!("sd6c_{fam_name}")).unwrap();
        cases.push((sd, fam_name));
    }
    let mut cofinite_members = 0;
    for (sd, fam_name) in &cases {
        let fam = ctx.family(fam_name).unwrap().clone();
        for &index in &fam.index_hints {
            let lang = fam.language(index);
            if matches!(lang, Language::CoFinite(_)) {
                cofinite_members += 1;
            }
            for text in texts(&lang, 30, 0..2) {
                let p = run_on(&ctx, sd, &text, 30);
                assert_converged(&ctx, Mode::Ex, &p, &lang, &format!("{} i={index} {}", sd.name, text.id));
            }
        }
    }
    assert_eq!(cofinite_members, 2);
    println!("criterion 06c (set-driven unpadding keeps exact convergence, incl. two cofinite members): PASS");
}

#[test]
fn criterion_06d_cautious_closure_is_contained_and_cauttar() {
    let mut ctx = ctx_with_standard();
    for (name, fam_name, horizon) in [("fin_learner", "fin", 12), ("cofin_learner", "cofin", 8)] {
        let base = ctx.learner(name).unwrap().clone();
        let caut = transforms::apply(&mut ctx, "sd_bc_to_cauttar_bc", base.clone(), &format!("caut_{name}")).unwrap();
        let fam = ctx.family(fam_name).unwrap().clone();
        for &index in &fam.index_hints {
            let lang = fam.language(index);
            for text in texts(&lang, horizon, 0..2) {
                let p = run_on(&ctx, &caut, &text, horizon);
                assert_clean(&ctx, Tag::CautTar, &p, &lang, &format!("{name} i={index} {}", text.id));
                for k in 0..=horizon.min(text.len()) {
                    let d = text.prefix(k).content();
                    let closed = members_upto(&ctx, &caut.step(&ctx, Input::Set(&d)).unwrap(), BOUND).unwrap();
                    let open = members_upto(&ctx, &base.step(&ctx, Input::Set(&d)).unwrap(), BOUND).unwrap();
                    assert!(
                        closed.is_subset(&open),
                        "{name} D={d:?}: closure adds points"
                    );
                }
            }
        }
    }
    println!("criterion 06d (cautious closure is target-cautious and contained in the base): PASS");
}

#[test]
fn criterion_06e_subset_search_gives_ex_from_oscillating_bc() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("osc_learner").unwrap().clone();
    let fixed = transforms::apply(&mut ctx, "sd_cauttar_bc_to_ex", base.clone(), "ex_of_osc").unwrap();
    let lang = Language::cofinite([0]);
    for (t_idx, text) in texts(&lang, 10, 0..2).into_iter().enumerate() {
        let pb = run_on(&ctx, &base, &text, 10);
        let pf = run_on(&ctx, &fixed, &text, 10);
        let what = format!("osc {}", text.id);
        // The canonical text grows the content at every step, so the base
        // provably oscillates there; seeded texts may stall by chance.
        if t_idx == 0 {
            assert_eq!(
                check_convergence(&ctx, Mode::Ex, &pb, &lang, BOUND).unwrap(),
                Outcome::NotConverged,
                "base should oscillate syntactically on {what}"
            );
        }
        assert_converged(&ctx, Mode::Bc, &pb, &lang, &what);
        assert_converged(&ctx, Mode::Ex, &pf, &lang, &what);
    }
    println!("criterion 06e (subset search turns semantic into exact convergence): PASS");
}

#[test]
fn criterion_06f_transductive_repair_settles_syntactically() {
    let mut ctx = ctx_with_standard();
    let base = ctx.learner("chain_td").unwrap().clone();
    let fixed = transforms::apply(&mut ctx, "td_bc_to_ex", base, "td_ex_chain").unwrap();
    let fam = ctx.family("chain").unwrap().clone();
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 30, 0..3) {
            let p = run_on(&ctx, &fixed, &text, 30);
            let first = p.terms.iter().position(|t| !t.is_quest());
            if let Some(first) = first {
                let distinct: BTreeSet<String> = p.terms[first..]
                    .iter()
                    .filter(|t| !t.is_quest())
                    .map(|t| t.render())
                    .collect();
                assert!(
                    distinct.len() <= 1,
                    "i={index} {}: {distinct:?}",
                    text.id
                );
            }
        }
    }
    println!("criterion 06f (repaired transductive learner emits one answer): PASS");
}

// --- criterion 7: the separation ---------------------------------------------

#[test]
fn criterion_07_separation_sd_vs_it() {
    let ctx = ctx_with_standard();
    let sep = ctx.learner("sep_learner").unwrap().clone();
    let fam = ctx.family("finz").unwrap().clone();
    assert_eq!(fam.index_hints.len(), 20);
    for &index in &fam.index_hints {
        let lang = fam.language(index);
        for text in texts(&lang, 100, 0..3) {
            let p = run_on(&ctx, &sep, &text, 100);
            assert_converged(&ctx, Mode::Ex, &p, &lang, &format!("sep i={index} {}", text.id));
        }
    }
    let mut certified = 0;
    for h in families::it_fixtures() {
        let cert = falsify_it(&ctx, &h, 100)
            .unwrap()
            .unwrap_or_else(|| panic!("no certificate for {}", h.name));
        assert!(cert.self_verify(&ctx).unwrap(), "{} certificate fails", h.name);
        assert_eq!(cert.digest1, cert.digest2);
        assert_ne!(cert.target1, cert.target2);
        certified += 1;
    }
    assert_eq!(certified, 5);
    println!("criterion 07 (separation: set-driven succeeds, 5 iterative learners falsified): PASS");
}

// --- criterion 8: hypothesis-space round trip --------------------------------

#[test]
fn criterion_08_hypothesis_space_round_trip() {
    // A small universe keeps every minimal representative within the scan cap.
    let caps = Caps {
        universe_bound: 8,
        ..Caps::default()
    };
    let mut ctx = Context::with_caps(caps);
    families::register_standard(&mut ctx);
    let bound = ctx.caps.universe_bound;
    for entry in standard_suite() {
        let base = if entry.learner.kind == Kind::G {
            ctx.learner(&entry.learner.name).unwrap().clone()
        } else {
            let starred = Arc::new(star(&format!("{}_star", entry.learner.name), entry.learner.clone()));
            ctx.add_learner(starred)
        };
        let rt_name = format!("rt_{}", base.name);
        let rt = transforms::apply(&mut ctx, "to_cind_of_hypspace", base.clone(), &rt_name).unwrap();
        let fam = ctx.family(&entry.family.name).unwrap().clone();
        for &index in &fam.index_hints {
            let lang = fam.language(index);
            for text in texts(&lang, 12, 0..1) {
                let pb = run_on(&ctx, &base, &text, 12);
                let pr = run_on(&ctx, &rt, &text, 12);
                for k in 0..pb.terms.len() {
                    for x in 0..=bound {
                        assert_eq!(
                            eval_term(&ctx, &pb.terms[k], x).unwrap(),
                            eval_term(&ctx, &pr.terms[k], x).unwrap(),
                            "{} i={index} {} step {k} x={x}",
                            base.name,
                            text.id
                        );
                    }
                    if k > 0 {
                        assert_eq!(
                            pb.terms[k - 1] == pb.terms[k],
                            pr.terms[k - 1] == pr.terms[k],
                            "{} i={index} {} mind change at {k}",
                            base.name,
                            text.id
                        );
                    }
                }
            }
        }
    }
    println!("criterion 08 (run-built hypothesis space preserves semantics and mind changes): PASS");
}

// --- criterion 9: totalization -----------------------------------------------

#[test]
fn criterion_09_totalization_under_adversarial_costs() {
    let mk_base = |name: &str, cost: fn(&Seq) -> Option<u64>| {
        Arc::new(
            Learner::new(name, Kind::G, |_, input| match input {
                Input::Sequence(s) => Ok(HypTerm::FinSet(s.content())),
                _ => Err(Error::Contract("kind mismatch".into())),
            })
            .with_props(["total", "cind"])
            .with_cost(cost),
        )
    };
    let models: [(&str, fn(&Seq) -> Option<u64>); 3] = [
        ("linear_lag", |s| Some(2 * s.len() as u64)),
        ("bursty", |s| {
            if s.len() < 3 {
                Some(0)
            } else {
                Some((s.len() as u64).pow(2))
            }
        }),
        ("exponential", |s| Some((1u64 << s.len().min(62)) - 1)),
    ];
    let ctx = ctx_with_standard();
    let reference = ctx.learner("fin_g").unwrap().clone();
    let fam = ctx.family("fin").unwrap().clone();
    for (name, cost) in models {
        let base = mk_base(name, cost);
        let total = totalize(&format!("{name}_total"), base.clone()).unwrap();
        for &index in &fam.index_hints {
            let lang = fam.language(index);
            let text = Text::canonical(&lang, 100);
            // Totality: the budgeted run never diverges.
            let p = run_on(&ctx, &total, &text, 100);
            let r = delay_schedule(&base, |i| text.at(i), 100).unwrap();
            assert!(r.windows(2).all(|w| w[0] <= w[1]), "{name}: r decreases");
            let distinct: BTreeSet<usize> = r.iter().copied().collect();
            assert!(distinct.len() >= 5, "{name}: r looks bounded: {distinct:?}");
            assert_eq!(r.last(), r.iter().max(), "{name}");
            // Convergence matches the unbudgeted learner.
            let p_ref = run_on(&ctx, &reference, &text, 100);
            let v_total = check_convergence(&ctx, Mode::Ex, &p, &lang, BOUND).unwrap();
            let v_ref = check_convergence(&ctx, Mode::Ex, &p_ref, &lang, BOUND).unwrap();
            assert_eq!(
                matches!(v_total, Outcome::Converged { .. }),
                matches!(v_ref, Outcome::Converged { .. }),
                "{name} i={index}"
            );
        }
    }
    println!("criterion 09 (totalization is total, delays grow unboundedly, convergence kept): PASS");
}

// --- criterion 10: the CLI contract ------------------------------------------

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn criterion_10_cli_exit_codes_and_parser_fuzz() {
    let opts = cli::RunOpts::default();
    assert_eq!(cli::cmd_run(&fixture("collapse.spec"), &opts), 0);
    assert_eq!(cli::cmd_run(&fixture("failing.spec"), &opts), 1);
    assert_eq!(cli::cmd_run(&fixture("malformed.spec"), &opts), 2);
    assert_eq!(cli::cmd_run(&fixture("does_not_exist.spec"), &opts), 2);
    let mut state: u64 = 0xfeedface;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        state >> 33
    };
    let alphabet: Vec<char> =
        "abcdefghijklmnopqrstuvwxyz0123456789_=(){}[],# \n\tfamilylearnerrun\"\\!@%".chars().collect();
    for _ in 0..1000 {
        let len = (next() % 4096) as usize;
        let input: String = (0..len)
            .map(|_| alphabet[(next() as usize) % alphabet.len()])
            .collect();
        // Totality: any outcome but a panic, and rejections carry a position.
        match inlimit::dsl::parse_spec(&input) {
            Ok(spec) => {
                let _ = inlimit::dsl::resolve(&spec, Caps::default());
            }
            Err(Error::Parse { pos, .. }) => assert!(pos <= input.len()),
            Err(_) => {}
        }
    }
    println!("criterion 10 (exit codes 0/1/2 and 1000-input parser fuzz): PASS");
}

// --- suite verdict lines on the standard suite, exercised end to end ---------

#[test]
fn standard_suite_is_clean_under_its_declared_tags() {
    let ctx = ctx_with_standard();
    let mut jobs = Vec::new();
    for entry in standard_suite() {
        for &index in &entry.family.index_hints {
            let lang = entry.family.language(index);
            for text in texts(&lang, 40, 0..2) {
                jobs.push(Job {
                    learner: entry.learner.name.clone(),
                    family: entry.family.name.clone(),
                    index,
                    text,
                    tags: entry.tags.clone(),
                    modes: vec![],
                    horizon: 40,
                });
            }
        }
    }
    let reports = run_suite(&ctx, &jobs).unwrap();
    for r in &reports {
        for v in &r.verdicts {
            assert!(v.ok, "{} {}[{}] {}: {}", r.learner, r.family, r.index, r.text_id, v.line);
        }
    }
}
