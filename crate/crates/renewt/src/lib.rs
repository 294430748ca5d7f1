//! Command-line front end, JSON reports and image output for `renewt-core`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod output;
pub mod parse;
pub mod report;
