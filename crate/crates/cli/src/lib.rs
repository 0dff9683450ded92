//! Command implementations behind the `fairgame` binary: solving single
//! games, certifying witnesses, seeded mutation, benchmark sweeps and
//! scatter-plot reports.

pub mod algo;
pub mod bench;
pub mod commands;
pub mod report;

pub use algo::Algo;
pub use commands::CliError;
