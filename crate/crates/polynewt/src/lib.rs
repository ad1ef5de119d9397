//! File formats, a thread-pool executor and the command-line harness for
//! `polynewt-core`.

pub mod cli;
pub mod formats;
pub mod parallel;
pub mod timing;

pub use cli::run_cli;
pub use parallel::Rayon;
