//! File formats, thread-pool verifiers and the `qsw` command line on top of
//! `qsw-core`.

pub mod cli;
pub mod io;
pub mod manifest;
pub mod parallel;
