//! Library side of the `sqg` command-line tool: argument surface, output
//! formats, the consolidated report builder, the prescribed experiment
//! grids, and the naive oracles the report checks itself against.
//!
//! The binary in `main.rs` is a thin wrapper over [`run::execute`]; the
//! integration and acceptance tests drive these modules directly.

pub mod grids;
pub mod oracles;
pub mod output;
pub mod report;
pub mod run;
