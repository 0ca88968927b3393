//! Learner transformations as combinators, plus a declarative catalog used
//! for chain type-checking and reporting.

pub mod collapse;
pub mod consistency;
pub mod hypspace;
pub mod memory;

use std::sync::Arc;

use crate::context::Context;
use crate::error::{Error, Result};
use crate::learner::{Kind, Learner};

pub use collapse::{cauttar_to_wb, g_to_sd_cauttar, g_to_snu, sd_cauttar_to_wb, snu_to_sdec};
pub use consistency::{make_consistent_dedup, make_consistent_patch, make_consistent_reset};
pub use hypspace::{seq_rank, seq_unrank, to_cind, to_hypothesis_space, IndexLearner};
pub use memory::{
    bc_to_it_pad, g_to_psd, it_to_sd, min_locking_sequence, sd_bc_to_cauttar_bc,
    sd_cauttar_bc_to_ex, td_bc_to_ex,
};

/// A transform's declared interface: what it takes, what it yields, and the
/// restriction tags its output is claimed to satisfy. The harness tests the
/// claims; they are never assumed.
#[derive(Clone, Copy, Debug)]
pub struct TransformSpec {
    pub name: &'static str,
    /// `None`: any data-driven kind (the output keeps the input kind).
    pub input_kind: Option<Kind>,
    pub required_props: &'static [&'static str],
    /// `None`: same as the input kind.
    pub output_kind: Option<Kind>,
    pub claimed: &'static [&'static str],
}

pub const CATALOG: &[TransformSpec] = &[
    TransformSpec {
        name: "make_consistent_patch",
        input_kind: None,
        required_props: &["total", "cind"],
        output_kind: None,
        claimed: &["cons"],
    },
    TransformSpec {
        name: "make_consistent_reset",
        input_kind: None,
        required_props: &["total", "cind"],
        output_kind: None,
        claimed: &["cons"],
    },
    TransformSpec {
        name: "make_consistent_dedup",
        input_kind: None,
        required_props: &["total", "cind"],
        output_kind: None,
        claimed: &["cons"],
    },
    TransformSpec {
        name: "cauttar_to_wb",
        input_kind: Some(Kind::G),
        required_props: &["cons", "cauttar"],
        output_kind: Some(Kind::G),
        claimed: &["wb"],
    },
    TransformSpec {
        name: "g_to_sd_cauttar",
        input_kind: Some(Kind::G),
        required_props: &["cons"],
        output_kind: Some(Kind::Sd),
        claimed: &["cauttar"],
    },
    TransformSpec {
        name: "sd_cauttar_to_wb",
        input_kind: Some(Kind::Sd),
        required_props: &["total", "cind", "cauttar"],
        output_kind: Some(Kind::Sd),
        claimed: &["wb"],
    },
    TransformSpec {
        name: "g_to_snu",
        input_kind: Some(Kind::G),
        required_props: &["total", "cind"],
        output_kind: Some(Kind::G),
        claimed: &["snu"],
    },
    TransformSpec {
        name: "snu_to_sdec",
        input_kind: Some(Kind::G),
        required_props: &["total", "cind", "snu"],
        output_kind: Some(Kind::G),
        claimed: &["sdec"],
    },
    TransformSpec {
        name: "g_to_psd",
        input_kind: Some(Kind::G),
        required_props: &["total"],
        output_kind: Some(Kind::Psd),
        claimed: &[],
    },
    TransformSpec {
        name: "bc_to_it_pad",
        input_kind: Some(Kind::G),
        required_props: &["total", "cind"],
        output_kind: Some(Kind::It),
        claimed: &[],
    },
    TransformSpec {
        name: "it_to_sd",
        input_kind: Some(Kind::It),
        required_props: &["total"],
        output_kind: Some(Kind::Sd),
        claimed: &[],
    },
    TransformSpec {
        name: "sd_bc_to_cauttar_bc",
        input_kind: Some(Kind::Sd),
        required_props: &["total", "cind", "cons"],
        output_kind: Some(Kind::Sd),
        claimed: &["cauttar"],
    },
    TransformSpec {
        name: "sd_cauttar_bc_to_ex",
        input_kind: Some(Kind::Sd),
        required_props: &["cons", "cauttar"],
        output_kind: Some(Kind::Sd),
        claimed: &[],
    },
    TransformSpec {
        name: "td_bc_to_ex",
        input_kind: Some(Kind::Td),
        required_props: &["total"],
        output_kind: Some(Kind::Td),
        claimed: &[],
    },
    TransformSpec {
        name: "to_cind_of_hypspace",
        input_kind: Some(Kind::G),
        required_props: &["cind"],
        output_kind: Some(Kind::G),
        claimed: &[],
    },
];

pub fn spec(name: &str) -> Option<&'static TransformSpec> {
    CATALOG.iter().find(|s| s.name == name)
}

/// Checks a base learner against a transform's declared interface. Property
/// mismatches are reported, kind mismatches are errors; missing properties do
/// not abort application — the harness exists to test unfounded claims too.
pub fn check_chain(spec: &TransformSpec, base: &Learner) -> Result<Vec<String>> {
    if let Some(k) = spec.input_kind {
        if base.kind != k {
            return Err(Error::Contract(format!(
                "{} takes a {k} learner, `{}` is {}",
                spec.name, base.name, base.kind
            )));
        }
    }
    Ok(spec
        .required_props
        .iter()
        .filter(|p| !base.has_prop(p))
        .map(|p| format!("{} expects `{p}` of `{}` (undeclared)", spec.name, base.name))
        .collect())
}

/// Applies a transform by catalog name. The base learner is registered so
/// that hypothesis terms referencing it by name resolve; the output learner
/// is registered under `out_name` and returned.
pub fn apply(
    ctx: &mut Context,
    transform: &str,
    base: Arc<Learner>,
    out_name: &str,
) -> Result<Arc<Learner>> {
    let base = ctx.add_learner(base);
    let out = match transform {
        "make_consistent_patch" => make_consistent_patch(out_name, base)?,
        "make_consistent_reset" => make_consistent_reset(out_name, base)?,
        "make_consistent_dedup" => make_consistent_dedup(out_name, base)?,
        "cauttar_to_wb" => cauttar_to_wb(out_name, base)?,
        "g_to_sd_cauttar" => g_to_sd_cauttar(out_name, base)?,
        "sd_cauttar_to_wb" => sd_cauttar_to_wb(out_name, base)?,
        "g_to_snu" => g_to_snu(out_name, base)?,
        "snu_to_sdec" => snu_to_sdec(out_name, base)?,
        "g_to_psd" => g_to_psd(out_name, base)?,
        "bc_to_it_pad" => bc_to_it_pad(out_name, base)?,
        "it_to_sd" => it_to_sd(out_name, base)?,
        "sd_bc_to_cauttar_bc" => sd_bc_to_cauttar_bc(out_name, base)?,
        "sd_cauttar_bc_to_ex" => sd_cauttar_bc_to_ex(out_name, base)?,
        "td_bc_to_ex" => td_bc_to_ex(out_name, base)?,
        "to_cind_of_hypspace" => {
            // The hypothesis-space family decides membership by evaluating
            // the base inside a frozen snapshot of the current context.
            let bound = ctx.caps.universe_bound;
            let snapshot = Arc::new(ctx.child());
            let (idx, fam) = to_hypothesis_space(snapshot, base, bound);
            ctx.add_family(fam);
            to_cind(Arc::new(idx), out_name)
        }
        other => {
            return Err(Error::Contract(format!("unknown transform `{other}`")))
        }
    };
    Ok(ctx.add_learner(Arc::new(out)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learner::Input;
    use crate::seq::Seq;
    use crate::term::HypTerm;

    #[test]
    fn catalog_names_dispatch() {
        let mut ctx = Context::new();
        let base = Arc::new(Learner::new("b", Kind::G, |_, input| match input {
            Input::Sequence(s) => Ok(HypTerm::FinSet(s.content())),
            _ => Err(Error::Contract("kind mismatch".into())),
        }));
        for spec in CATALOG {
            if spec.input_kind == Some(Kind::G) || spec.input_kind.is_none() {
                let name = format!("out_{}", spec.name);
                let applied = apply(&mut ctx, spec.name, base.clone(), &name);
                // Poisoning wants a declared family; everything else applies.
                if spec.name == "g_to_snu" {
                    assert!(applied.is_err());
                } else {
                    let got = applied.unwrap();
                    assert_eq!(got.name, name);
                    if let Some(k) = spec.output_kind {
                        assert_eq!(got.kind, k);
                    }
                }
            }
        }
        assert!(apply(&mut ctx, "nope", base, "x").is_err());
    }

    #[test]
    fn chain_check_flags_kind_and_props() {
        let sd = Learner::new("sd", Kind::Sd, |_, _| Ok(HypTerm::finset([])));
        let s = spec("cauttar_to_wb").unwrap();
        assert!(check_chain(s, &sd).is_err());
        let g = Learner::new("g", Kind::G, |_, _| Ok(HypTerm::finset([])));
        let warnings = check_chain(s, &g).unwrap();
        assert_eq!(warnings.len(), 2);
    }

    #[test]
    fn hypspace_round_trip_preserves_semantics_and_mind_changes() {
        let mut ctx = Context::new();
        let base = Arc::new(
            Learner::new("rt_base", Kind::G, |_, input| match input {
                Input::Sequence(s) => Ok(HypTerm::FinSet(s.content())),
                _ => Err(Error::Contract("kind mismatch".into())),
            })
            .with_props(["total", "cind"]),
        );
        let rt = apply(&mut ctx, "to_cind_of_hypspace", base.clone(), "rt").unwrap();
        let sigma = Seq::of_nums(&[3, 0, 3]);
        let mut prev_base: Option<HypTerm> = None;
        let mut prev_rt: Option<HypTerm> = None;
        for k in 0..=sigma.len() {
            let p = sigma.prefix(k);
            let tb = base.step(&ctx, Input::Sequence(&p)).unwrap();
            let tr = rt.step(&ctx, Input::Sequence(&p)).unwrap();
            for x in 0..=8 {
                assert_eq!(
                    crate::term::eval_term(&ctx, &tb, x).unwrap(),
                    crate::term::eval_term(&ctx, &tr, x).unwrap(),
                    "x={x} k={k}"
                );
            }
            // Mind changes coincide.
            if let (Some(pb), Some(pr)) = (&prev_base, &prev_rt) {
                assert_eq!(*pb == tb, *pr == tr, "k={k}");
            }
            prev_base = Some(tb);
            prev_rt = Some(tr);
        }
    }
}
