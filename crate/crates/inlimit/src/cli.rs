//! Command implementations behind the binary: run an experiment spec,
//! re-check a dumped trace, list the catalog, and search for iterative-memory
//! falsification certificates.
//!
//! Exit codes: 0 = all checks passed, 1 = a check failed (violation,
//! non-convergence, or no certificate found), 2 = bad input or configuration.

use std::collections::BTreeSet;
use std::path::Path;

use crate::context::{Caps, Context};
use crate::dsl;
use crate::error::{Error, Result};
use crate::families;
use crate::harness::{self, RunReport};
use crate::lang::Language;
use crate::learner::HypSequence;
use crate::restrictions::{check_convergence, check_restriction, Mode, Tag, Verdict};
use crate::seq::{Datum, Seq};
use crate::term::{parse_term, HypTerm};
use crate::transforms;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Tags decidable from the hypothesis sequence and text alone.
pub const TARGET_FREE_TAGS: &[Tag] = &[
    Tag::Cons,
    Tag::Conv,
    Tag::SemConv,
    Tag::Caut,
    Tag::SMon,
    Tag::WMon,
    Tag::Wb,
    Tag::Dec,
    Tag::SDec,
];

/// Tags whose formulas mention the target language.
pub const TARGETED_TAGS: &[Tag] = &[Tag::CautTar, Tag::Mon, Tag::NU, Tag::SNU];

#[derive(Clone, Debug, Default)]
pub struct RunOpts {
    pub bound: Option<u32>,
    pub horizon: Option<usize>,
    pub seed: Option<u64>,
    pub json: Option<String>,
}

fn caps_for(opts: &RunOpts) -> Caps {
    let mut caps = Caps::default();
    if let Some(b) = opts.bound {
        caps.universe_bound = b;
    }
    if let Some(h) = opts.horizon {
        caps.horizon = h;
    }
    caps
}

/// Parses and resolves a spec source, runs every job, and returns the
/// reports plus any chain warnings.
pub fn run_source(src: &str, opts: &RunOpts) -> Result<(Vec<RunReport>, Vec<String>)> {
    let spec = dsl::parse_spec(src)?;
    let seeds: Vec<u64> = match opts.seed {
        Some(s) => vec![s],
        None => vec![1, 2, 3],
    };
    let resolved = dsl::resolve_with(&spec, caps_for(opts), &seeds)?;
    let reports = harness::run_suite(&resolved.ctx, &resolved.jobs)?;
    Ok((reports, resolved.warnings))
}

fn render_report_lines(reports: &[RunReport], out: &mut String) {
    for r in reports {
        for v in &r.verdicts {
            out.push_str(&format!(
                "{} {}[{}] {} :: {}\n",
                r.learner, r.family, r.index, r.text_id, v.line
            ));
        }
    }
    let jobs = reports.len();
    let failed = reports.iter().filter(|r| !r.all_ok()).count();
    out.push_str(&format!("{} jobs, {} with failures\n", jobs, failed));
}

pub fn cmd_run(path: &Path, opts: &RunOpts) -> i32 {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match run_source(&src, opts) {
        Ok((reports, warnings)) => {
            let mut out = String::new();
            for w in &warnings {
                out.push_str(&format!("note: {w}\n"));
            }
            render_report_lines(&reports, &mut out);
            print!("{out}");
            if let Some(json_path) = &opts.json {
                match serde_json::to_string_pretty(&reports) {
                    Ok(body) => {
                        if let Err(e) = std::fs::write(json_path, body) {
                            eprintln!("error: cannot write {json_path}: {e}");
                            return EXIT_USAGE;
                        }
                    }
                    Err(e) => {
                        eprintln!("error: serialization failed: {e}");
                        return EXIT_USAGE;
                    }
                }
            }
            if reports.iter().all(|r| r.all_ok()) {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            report_error(&src, &e);
            EXIT_USAGE
        }
    }
}

fn report_error(src: &str, e: &Error) {
    if let Error::Parse { pos, msg } = e {
        let (line, col) = dsl::line_col(src, *pos);
        eprintln!("error at {line}:{col}: {msg}");
    } else {
        eprintln!("error: {e}");
    }
}

/// Renders a trace: a header with the universe bound and horizon, the
/// initial hypothesis, then one `T:`/`p:` pair per consumed datum.
pub fn render_trace(bound: u32, horizon: usize, p: &HypSequence) -> String {
    let mut out = format!("B={bound} H={horizon}\n");
    out.push_str(&format!("p: {}\n", p.terms[0].render()));
    for (i, d) in p.prefix.items().iter().enumerate() {
        out.push_str(&format!("T: {d}\n"));
        out.push_str(&format!("p: {}\n", p.terms[i + 1].render()));
    }
    out
}

pub fn parse_trace(input: &str) -> Result<(u32, usize, HypSequence)> {
    let mut lines = input.lines().enumerate();
    let perr = |line: usize, msg: &str| Error::Parse {
        pos: line,
        msg: format!("trace line {}: {msg}", line + 1),
    };
    let (lno, header) = lines
        .next()
        .ok_or_else(|| perr(0, "empty trace"))?;
    let mut bound = None;
    let mut horizon = None;
    for field in header.split_whitespace() {
        if let Some(v) = field.strip_prefix("B=") {
            bound = v.parse::<u32>().ok();
        } else if let Some(v) = field.strip_prefix("H=") {
            horizon = v.parse::<usize>().ok();
        } else {
            return Err(perr(lno, "header fields are `B=<bound> H=<horizon>`"));
        }
    }
    let bound = bound.ok_or_else(|| perr(lno, "missing `B=`"))?;
    let horizon = horizon.ok_or_else(|| perr(lno, "missing `H=`"))?;
    let mut terms: Vec<HypTerm> = Vec::new();
    let mut data: Vec<Datum> = Vec::new();
    let mut expect_term = true;
    for (lno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if expect_term {
            let body = line
                .strip_prefix("p:")
                .ok_or_else(|| perr(lno, "expected `p: <term>`"))?;
            terms.push(
                parse_term(body.trim()).map_err(|e| perr(lno, &e.to_string()))?,
            );
            expect_term = false;
        } else {
            let body = line
                .strip_prefix("T:")
                .ok_or_else(|| perr(lno, "expected `T: <datum>`"))?;
            let body = body.trim();
            let d = if body == "#" {
                Datum::Pause
            } else {
                Datum::Num(
                    body.parse::<u32>()
                        .map_err(|_| perr(lno, "datum is `#` or a number"))?,
                )
            };
            data.push(d);
            expect_term = true;
        }
    }
    if terms.is_empty() {
        return Err(perr(0, "trace holds no hypotheses"));
    }
    if terms.len() != data.len() + 1 {
        return Err(perr(
            0,
            "trace must end on a hypothesis: one `p:` per `T:` plus the initial one",
        ));
    }
    Ok((
        bound,
        horizon,
        HypSequence {
            terms,
            prefix: Seq::new(data),
        },
    ))
}

pub fn parse_language(s: &str) -> Result<Language> {
    let parse_set = |body: &str| -> Result<BTreeSet<u32>> {
        let body = body
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: "language sets are `{a,b,...}`".into(),
            })?;
        if body.trim().is_empty() {
            return Ok(BTreeSet::new());
        }
        body.split(',')
            .map(|p| {
                p.trim().parse::<u32>().map_err(|_| Error::Parse {
                    pos: 0,
                    msg: format!("bad set element `{p}`"),
                })
            })
            .collect()
    };
    if let Some(body) = s.strip_prefix("finite:") {
        Ok(Language::Finite(parse_set(body)?))
    } else if let Some(body) = s.strip_prefix("cofinite:") {
        Ok(Language::CoFinite(parse_set(body)?))
    } else {
        Err(Error::Parse {
            pos: 0,
            msg: "languages are `finite:{..}` or `cofinite:{..}`".into(),
        })
    }
}

/// Re-checks a dumped trace. Without a target only the target-free
/// restrictions apply; a target enables the targeted ones plus Ex/Bc
/// convergence. An explicit check list overrides both defaults.
pub fn verify_trace(
    input: &str,
    checks: Option<&[String]>,
    target: Option<&str>,
) -> Result<(Vec<Verdict>, bool)> {
    let (bound, horizon, p) = parse_trace(input)?;
    let mut ctx = Context::new();
    ctx.caps.universe_bound = bound;
    ctx.caps.horizon = horizon;
    families::register_standard(&mut ctx);
    let target_lang = target.map(parse_language).transpose()?;
    let mut tags: Vec<Tag> = Vec::new();
    let mut modes: Vec<Mode> = Vec::new();
    match checks {
        Some(names) => {
            for name in names {
                if let Some(t) = Tag::parse(name) {
                    if TARGETED_TAGS.contains(&t) && target_lang.is_none() {
                        return Err(Error::Contract(format!(
                            "checking {t} needs `--target`"
                        )));
                    }
                    tags.push(t);
                } else if name == "Ex" || name == "Bc" {
                    if target_lang.is_none() {
                        return Err(Error::Contract(format!(
                            "checking {name} needs `--target`"
                        )));
                    }
                    modes.push(if name == "Ex" { Mode::Ex } else { Mode::Bc });
                } else {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: format!("unknown restriction tag `{name}`"),
                    });
                }
            }
        }
        None => {
            tags.extend_from_slice(TARGET_FREE_TAGS);
            if target_lang.is_some() {
                tags.extend_from_slice(TARGETED_TAGS);
                modes.extend_from_slice(&[Mode::Ex, Mode::Bc]);
            }
        }
    }
    // Target-free formulas never read the target set; the placeholder is
    // inert.
    let placeholder = Language::finite([]);
    let mut verdicts = Vec::new();
    let mut all_ok = true;
    for tag in tags {
        let lang = match target_lang.as_ref() {
            Some(l) if TARGETED_TAGS.contains(&tag) => l,
            Some(l) => l,
            None => &placeholder,
        };
        let outcome = check_restriction(&ctx, tag, &p, lang, bound)?;
        all_ok &= outcome.is_ok();
        verdicts.push(Verdict {
            label: tag.to_string(),
            text_id: "trace".into(),
            outcome,
            bound,
            horizon,
        });
    }
    for mode in modes {
        let lang = target_lang.as_ref().unwrap();
        let outcome = check_convergence(&ctx, mode, &p, lang, bound)?;
        all_ok &= outcome.is_ok();
        verdicts.push(Verdict {
            label: format!("{mode:?}"),
            text_id: "trace".into(),
            outcome,
            bound,
            horizon,
        });
    }
    Ok((verdicts, all_ok))
}

pub fn cmd_verify(path: &Path, checks: Option<&[String]>, target: Option<&str>) -> i32 {
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    match verify_trace(&src, checks, target) {
        Ok((verdicts, all_ok)) => {
            for v in &verdicts {
                println!("{}", v.render());
            }
            if all_ok {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

/// Stable, sorted listing of everything addressable from a spec.
pub fn catalog_text() -> String {
    let mut ctx = Context::new();
    families::register_standard(&mut ctx);
    let mut out = String::from("families:\n");
    for f in ctx.families() {
        out.push_str(&format!(
            "  {} indices={:?} — {}\n",
            f.name, f.index_hints, f.description
        ));
    }
    out.push_str("learners:\n");
    for l in ctx.learners() {
        let mut props: Vec<&str> = l.props.iter().map(String::as_str).collect();
        props.sort_unstable();
        out.push_str(&format!("  {} kind={} props={:?}\n", l.name, l.kind, props));
    }
    out.push_str("transforms:\n");
    let mut specs: Vec<_> = transforms::CATALOG.iter().collect();
    specs.sort_by_key(|s| s.name);
    for s in specs {
        let kind = |k: Option<crate::learner::Kind>| {
            k.map(|k| k.to_string()).unwrap_or_else(|| "*".into())
        };
        out.push_str(&format!(
            "  {} : {} -> {} requires={:?} claims={:?}\n",
            s.name,
            kind(s.input_kind),
            kind(s.output_kind),
            s.required_props,
            s.claimed
        ));
    }
    out
}

pub fn cmd_catalog() -> i32 {
    print!("{}", catalog_text());
    EXIT_OK
}

pub fn cmd_falsify_it(learner: &str, horizon: usize) -> i32 {
    let mut ctx = Context::new();
    families::register_standard(&mut ctx);
    let h = match ctx.learner(learner) {
        Ok(h) => h.clone(),
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match harness::falsify_it(&ctx, &h, horizon) {
        Ok(Some(cert)) => {
            let verified = cert.self_verify(&ctx).unwrap_or(false);
            println!(
                "{}",
                serde_json::to_string_pretty(&cert).unwrap_or_default()
            );
            println!("verified: {verified}");
            if verified {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }
        Ok(None) => {
            println!("no certificate within horizon {horizon}");
            EXIT_FAILED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
