//! Files, command line and HTTP review service around `fieldnorm_core`.

pub mod cli;
pub mod config;
pub mod output;
pub mod review;
pub mod service;
