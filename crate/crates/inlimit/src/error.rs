use thiserror::Error;

/// Errors surfaced by term evaluation, learner steps, and runs.
///
/// `CapExceeded` and `Diverged` are expected outcomes at desk scale and are
/// turned into report verdicts by the harness rather than aborting a suite.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unresolved learner reference `{0}`")]
    UnresolvedLearner(String),
    #[error("unresolved family reference `{0}`")]
    UnresolvedFamily(String),
    #[error("attempted to evaluate the `?` hypothesis")]
    QuestEval,
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("cap exceeded in {0}")]
    CapExceeded(String),
    #[error("partial learner diverged at step {step}")]
    Diverged { step: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
