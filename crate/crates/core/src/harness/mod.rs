//! Fixtures, configuration, reports, caching and verification suites shared
//! by the command line, the tests and the foreign interface.

pub mod bruteforce;
pub mod cache;
pub mod cli;
pub mod config;
pub mod fixtures;
pub mod report;
pub mod verify;
