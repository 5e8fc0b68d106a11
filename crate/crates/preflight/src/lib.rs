//! File formats, reports and the command-line front end around
//! `cubesat-preflight-core`.
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod io;
pub mod report;
pub mod runs;

pub use config::{load_model, model_from_str, model_to_string, ConfigError};
