//! Command-line front end: argument parsing, input loading, report assembly and the bundled
//! regression corpus.

pub mod args;
pub mod commands;
pub mod corpus;
pub mod input;
pub mod report;

use std::path::{Path, PathBuf};

use qmalg_core::Error as CoreError;
use thiserror::Error;

pub use args::Cli;
pub use report::Outcome;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{path}: {source}")]
    Input { path: PathBuf, source: CoreError },
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("usage: {0}")]
    Usage(String),
}

impl CliError {
    fn core(&self) -> Option<&CoreError> {
        match self {
            CliError::Core(e) | CliError::Input { source: e, .. } => Some(e),
            _ => None,
        }
    }

    /// 2 for unreadable or malformed input, 3 for resource caps, 1 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Usage(_) => 2,
            _ => match self.core() {
                Some(CoreError::Parse { .. }) => 2,
                Some(CoreError::Resource(_)) => 3,
                _ => 1,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            _ => match self.core() {
                Some(CoreError::Parse { .. }) => "parse",
                Some(CoreError::Resource(_)) => "resource",
                Some(CoreError::NotEven { .. }) => "not-even",
                Some(CoreError::Incompatible(_)) => "incompatible",
                Some(CoreError::NotSkewInvertible(_)) => "not-skew-invertible",
                Some(CoreError::NonGeneric(_)) => "non-generic",
                Some(CoreError::Unsupported(_)) => "unsupported",
                _ => "invalid",
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Run one parsed invocation. Relative input paths are resolved against `base`.
pub fn run(cli: &Cli, base: &Path) -> Outcome {
    commands::dispatch(cli, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error() {
        let parse = CliError::Core(CoreError::Parse { input: "x".into(), pos: 0, msg: "bad".into() });
        assert_eq!((parse.exit_code(), parse.kind()), (2, "parse"));
        let cap = CliError::Core(CoreError::Resource("slice".into()));
        assert_eq!((cap.exit_code(), cap.kind()), (3, "resource"));
        let odd = CliError::Input { path: "m.json".into(), source: CoreError::NotEven { profile: vec![2, 1] } };
        assert_eq!((odd.exit_code(), odd.kind()), (1, "not-even"));
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
    }
}
