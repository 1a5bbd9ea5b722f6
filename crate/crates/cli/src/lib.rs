//! Config parsing, report formatting and figure data behind the `hardy`
//! binary.

pub mod commands;
pub mod config;
pub mod figures;
pub mod format;
