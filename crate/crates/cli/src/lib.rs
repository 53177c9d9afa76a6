//! Library side of the `rootclust` binary: instance files, reports and the
//! `cluster`, `analyze` and `bench` commands.

pub mod bench;
pub mod commands;
pub mod instance;
pub mod report;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const RUN: i32 = 2;
    pub const SUITE_FAILED: i32 = 3;
}
