//! File formats, reports and the command line for `npsp-core`.

pub mod cli;
pub mod commands;
pub mod error;
pub mod formats;

pub use error::{Error, Result};
