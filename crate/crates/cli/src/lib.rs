//! Scenario runner, example reproduction and falsification front end for
//! `oneport-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod output;
pub mod reproduce;
pub mod scenario;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("simulation failed: {0}")]
    Simulation(String),
    #[error("{0} case(s) did not reproduce")]
    Mismatch(usize),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn simulation(e: impl std::fmt::Display) -> Self {
        CliError::Simulation(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Simulation(_) | CliError::Io(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}
