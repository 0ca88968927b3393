//! Bounded simulation and verification of language learning in the limit
//! over indexed families: interaction operators, learning restrictions,
//! learner transformations, and a reproducible suite harness.

pub mod cli;
pub mod context;
pub mod dsl;
pub mod error;
pub mod families;
pub mod family;
pub mod harness;
pub mod lang;
pub mod learner;
pub mod restrictions;
pub mod seq;
pub mod term;
pub mod text;
pub mod transforms;

pub use context::{Caps, Context};
pub use error::{Error, Result};
pub use family::FamilySpec;
pub use lang::Language;
pub use learner::{run, star, totalize, HypSequence, Input, Kind, Learner};
pub use seq::{Datum, Seq};
pub use term::{eval_term, parse_term, semantic_eq, HypTerm};
pub use text::Text;
