//! The experiment-specification language: family and learner bindings plus
//! run blocks, parsed by recursive descent with positioned diagnostics.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::families;
use crate::harness::Job;
use crate::learner::Learner;
use crate::restrictions::{Mode, Tag};
use crate::text::Text;
use crate::transforms;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Name(String),
    Int(u64),
    List(Vec<Value>),
}

impl Value {
    fn render(&self) -> String {
        match self {
            Value::Name(n) => n.clone(),
            Value::Int(i) => i.to_string(),
            Value::List(vs) => {
                let inner: Vec<String> = vs.iter().map(Value::render).collect();
                format!("[{}]", inner.join(","))
            }
        }
    }
}

/// A key-value pair with the byte position of its key, for diagnostics.
#[derive(Clone, Debug)]
pub struct Kv {
    pub key: String,
    pub value: Value,
    pub pos: usize,
}

#[derive(Clone, Debug)]
pub enum Chain {
    Ref(String),
    Apply(String, Box<Chain>),
}

impl Chain {
    fn render(&self) -> String {
        match self {
            Chain::Ref(n) => n.clone(),
            Chain::Apply(f, inner) => format!("{f}({})", inner.render()),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Stmt {
    Family { binding: String, ctor: String },
    Learner { binding: String, chain: Chain },
    Run { kvs: Vec<Kv> },
}

#[derive(Clone, Debug, Default)]
pub struct ExperimentSpec {
    pub stmts: Vec<Stmt>,
}

impl ExperimentSpec {
    /// Canonical rendering; reparsing it yields a spec rendering identically.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.stmts {
            match s {
                Stmt::Family { binding, ctor } => {
                    out.push_str(&format!("family {binding} = {ctor}\n"));
                }
                Stmt::Learner { binding, chain } => {
                    out.push_str(&format!("learner {binding} = {}\n", chain.render()));
                }
                Stmt::Run { kvs } => {
                    out.push_str("run {\n");
                    for kv in kvs {
                        out.push_str(&format!("  {} = {}\n", kv.key, kv.value.render()));
                    }
                    out.push_str("}\n");
                }
            }
        }
        out
    }
}

/// Converts a byte offset into a 1-based line/column pair.
pub fn line_col(input: &str, pos: usize) -> (usize, usize) {
    let upto = &input.as_bytes()[..pos.min(input.len())];
    let line = upto.iter().filter(|&&b| b == b'\n').count() + 1;
    let col = upto.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
    (line, col)
}

pub fn parse_spec(input: &str) -> Result<ExperimentSpec> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let mut stmts = Vec::new();
    loop {
        p.skip_trivia();
        if p.at_end() {
            break;
        }
        let keyword_pos = p.pos;
        let kw = p.ident()?;
        match kw.as_str() {
            "family" => {
                let binding = p.ident()?;
                p.expect(b'=')?;
                let ctor = p.ident()?;
                p.skip_inline();
                if p.peek() == Some(b'(') {
                    return Err(p.err("family constructors take no arguments"));
                }
                stmts.push(Stmt::Family { binding, ctor });
            }
            "learner" => {
                let binding = p.ident()?;
                p.expect(b'=')?;
                let chain = p.chain()?;
                stmts.push(Stmt::Learner { binding, chain });
            }
            "run" => {
                p.expect(b'{')?;
                let mut kvs = Vec::new();
                loop {
                    p.skip_trivia();
                    if p.peek() == Some(b'}') {
                        p.pos += 1;
                        break;
                    }
                    if p.at_end() {
                        return Err(p.err("expected `}` or `key = value`"));
                    }
                    let pos = p.pos;
                    let key = p.ident()?;
                    p.expect(b'=')?;
                    let value = p.value()?;
                    kvs.push(Kv { key, value, pos });
                }
                stmts.push(Stmt::Run { kvs });
            }
            _ => {
                p.pos = keyword_pos;
                return Err(p.err("expected `family`, `learner` or `run`"));
            }
        }
    }
    Ok(ExperimentSpec { stmts })
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    /// Skips whitespace and `#` comments.
    fn skip_trivia(&mut self) {
        loop {
            while self.peek().is_some_and(|b| b.is_ascii_whitespace()) {
                self.pos += 1;
            }
            if self.peek() == Some(b'#') {
                while self.peek().is_some_and(|b| b != b'\n') {
                    self.pos += 1;
                }
            } else {
                return;
            }
        }
    }

    /// Skips spaces within a line only.
    fn skip_inline(&mut self) {
        while self.peek().is_some_and(|b| b == b' ' || b == b'\t') {
            self.pos += 1;
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        self.skip_trivia();
        if self.peek() == Some(b) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", b as char)))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_trivia();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|b| b.is_ascii_alphanumeric() || b == b'_' || b == b'-')
        {
            self.pos += 1;
        }
        if self.pos == start || self.bytes[start].is_ascii_digit() {
            self.pos = start;
            return Err(self.err("expected identifier"));
        }
        Ok(String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned())
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_trivia();
        let start = self.pos;
        while self.peek().is_some_and(|b| b.is_ascii_digit()) {
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

    fn chain(&mut self) -> Result<Chain> {
        let name = self.ident()?;
        self.skip_trivia();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let inner = self.chain()?;
            self.expect(b')')?;
            Ok(Chain::Apply(name, Box::new(inner)))
        } else {
            Ok(Chain::Ref(name))
        }
    }

    fn value(&mut self) -> Result<Value> {
        self.skip_trivia();
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let mut out = Vec::new();
                self.skip_trivia();
                if self.peek() == Some(b']') {
                    self.pos += 1;
                    return Ok(Value::List(out));
                }
                loop {
                    out.push(self.value()?);
                    self.skip_trivia();
                    match self.peek() {
                        Some(b',') => self.pos += 1,
                        Some(b']') => {
                            self.pos += 1;
                            return Ok(Value::List(out));
                        }
                        _ => return Err(self.err("expected `,` or `]`")),
                    }
                }
            }
            Some(b) if b.is_ascii_digit() => Ok(Value::Int(self.int()?)),
            _ => Ok(Value::Name(self.ident()?)),
        }
    }
}

/// Everything a resolved spec yields: a populated context and the jobs to
/// run, in declaration order.
pub struct Resolved {
    pub ctx: Context,
    pub jobs: Vec<Job>,
    /// Undeclared-property notes from chain checking; informational.
    pub warnings: Vec<String>,
}

fn config_err(msg: String) -> Error {
    Error::Contract(msg)
}

/// Resolves a parsed spec against the standard catalog: binds families,
/// builds transform chains with kind checking, and expands run blocks into
/// jobs.
pub fn resolve(spec: &ExperimentSpec, caps: crate::context::Caps) -> Result<Resolved> {
    resolve_with(spec, caps, &[1, 2, 3])
}

/// Like [`resolve`], with a caller-chosen default seed list for run blocks
/// that do not set `seeds` themselves.
pub fn resolve_with(
    spec: &ExperimentSpec,
    caps: crate::context::Caps,
    default_seeds: &[u64],
) -> Result<Resolved> {
    let mut ctx = Context::with_caps(caps);
    families::register_standard(&mut ctx);
    let mut fam_bindings: BTreeMap<String, String> = BTreeMap::new();
    let mut learner_bindings: BTreeMap<String, String> = BTreeMap::new();
    let mut warnings = Vec::new();
    let mut jobs = Vec::new();
    for stmt in &spec.stmts {
        match stmt {
            Stmt::Family { binding, ctor } => {
                if fam_bindings.contains_key(binding) {
                    return Err(config_err(format!("duplicate family binding `{binding}`")));
                }
                let canonical = ctx
                    .families()
                    .find(|f| f.name == *ctor)
                    .map(|f| f.name.clone())
                    .ok_or_else(|| config_err(format!("unknown family `{ctor}`")))?;
                fam_bindings.insert(binding.clone(), canonical);
            }
            Stmt::Learner { binding, chain } => {
                if learner_bindings.contains_key(binding) {
                    return Err(config_err(format!("duplicate learner binding `{binding}`")));
                }
                let built =
                    build_chain(&mut ctx, &learner_bindings, chain, binding, &mut warnings)?;
                learner_bindings.insert(binding.clone(), built.name.clone());
            }
            Stmt::Run { kvs } => {
                jobs.extend(expand_run(
                    &ctx,
                    &fam_bindings,
                    &learner_bindings,
                    kvs,
                    default_seeds,
                )?);
            }
        }
    }
    Ok(Resolved { ctx, jobs, warnings })
}

fn build_chain(
    ctx: &mut Context,
    bindings: &BTreeMap<String, String>,
    chain: &Chain,
    out_name: &str,
    warnings: &mut Vec<String>,
) -> Result<Arc<Learner>> {
    match chain {
        Chain::Ref(name) => {
            let resolved = bindings.get(name).cloned().unwrap_or_else(|| name.clone());
            ctx.learner(&resolved)
                .map(Arc::clone)
                .map_err(|_| config_err(format!("unknown learner `{name}`")))
        }
        Chain::Apply(op, inner) => {
            let inner_name = format!("{out_name}__arg");
            let base = build_chain(ctx, bindings, inner, &inner_name, warnings)?;
            match op.as_str() {
                "star" => {
                    let l = crate::learner::star(out_name, base);
                    Ok(ctx.add_learner(Arc::new(l)))
                }
                "totalize" => {
                    let l = crate::learner::totalize(out_name, base)?;
                    Ok(ctx.add_learner(Arc::new(l)))
                }
                _ => {
                    let spec = transforms::spec(op)
                        .ok_or_else(|| config_err(format!("unknown transform `{op}`")))?;
                    warnings.extend(transforms::check_chain(spec, &base)?);
                    transforms::apply(ctx, op, base, out_name)
                }
            }
        }
    }
}

fn expand_run(
    ctx: &Context,
    fams: &BTreeMap<String, String>,
    learners: &BTreeMap<String, String>,
    kvs: &[Kv],
    default_seeds: &[u64],
) -> Result<Vec<Job>> {
    let mut family = None;
    let mut learner = None;
    let mut texts = vec!["canonical".to_string()];
    let mut tags: Vec<Tag> = Vec::new();
    let mut modes: Vec<Mode> = Vec::new();
    let mut indices: Option<Vec<u32>> = None;
    let mut seeds: Vec<u64> = default_seeds.to_vec();
    let mut horizon = ctx.caps.horizon;
    let name_of = |v: &Value, what: &str| match v {
        Value::Name(n) => Ok(n.clone()),
        _ => Err(config_err(format!("`{what}` expects a name"))),
    };
    for kv in kvs {
        match kv.key.as_str() {
            "family" => family = Some(name_of(&kv.value, "family")?),
            "learner" => learner = Some(name_of(&kv.value, "learner")?),
            "texts" => {
                texts = list_of(&kv.value, |v| name_of(v, "texts"))?;
            }
            "check" => {
                tags.clear();
                modes.clear();
                for name in list_of(&kv.value, |v| name_of(v, "check"))? {
                    if let Some(t) = Tag::parse(&name) {
                        tags.push(t);
                    } else if name == "Ex" {
                        modes.push(Mode::Ex);
                    } else if name == "Bc" {
                        modes.push(Mode::Bc);
                    } else {
                        return Err(Error::Parse {
                            pos: kv.pos,
                            msg: format!("unknown restriction tag `{name}`"),
                        });
                    }
                }
            }
            "indices" => {
                indices = Some(list_of(&kv.value, |v| match v {
                    Value::Int(i) => Ok(*i as u32),
                    _ => Err(config_err("`indices` expects numbers".into())),
                })?);
            }
            "seeds" => {
                seeds = list_of(&kv.value, |v| match v {
                    Value::Int(i) => Ok(*i),
                    _ => Err(config_err("`seeds` expects numbers".into())),
                })?;
            }
            "horizon" => {
                horizon = match kv.value {
                    Value::Int(i) => i as usize,
                    _ => return Err(config_err("`horizon` expects a number".into())),
                };
            }
            other => {
                return Err(Error::Parse {
                    pos: kv.pos,
                    msg: format!("unknown run key `{other}`"),
                })
            }
        }
    }
    let family = family.ok_or_else(|| config_err("run block misses `family`".into()))?;
    let learner = learner.ok_or_else(|| config_err("run block misses `learner`".into()))?;
    let fam_name = fams.get(&family).cloned().unwrap_or(family);
    let fam = ctx
        .family(&fam_name)
        .map_err(|_| config_err(format!("unknown family `{fam_name}`")))?
        .clone();
    let learner_name = learners.get(&learner).cloned().unwrap_or(learner);
    ctx.learner(&learner_name)
        .map_err(|_| config_err(format!("unknown learner `{learner_name}`")))?;
    let indices = indices.unwrap_or_else(|| fam.index_hints.clone());
    let bound = ctx.caps.universe_bound;
    let mut jobs = Vec::new();
    for &i in &indices {
        let lang = fam.language(i);
        for tname in &texts {
            let mut batch = match tname.as_str() {
                "canonical" => vec![Text::canonical(&lang, horizon)],
                "seeded" => seeds
                    .iter()
                    .map(|&s| Text::seeded(&lang, bound, s, 0.2, 0.25, horizon))
                    .collect(),
                "empty" => vec![Text::finite_then_pauses(&crate::seq::Seq::empty(), horizon)],
                other => return Err(config_err(format!("unknown text generator `{other}`"))),
            };
            for text in batch.drain(..) {
                jobs.push(Job {
                    learner: learner_name.clone(),
                    family: fam_name.clone(),
                    index: i,
                    text,
                    tags: tags.clone(),
                    modes: modes.clone(),
                    horizon,
                });
            }
        }
    }
    Ok(jobs)
}

fn list_of<T>(v: &Value, f: impl Fn(&Value) -> Result<T>) -> Result<Vec<T>> {
    match v {
        Value::List(vs) => vs.iter().map(f).collect(),
        single => Ok(vec![f(single)?]),
    }
}
