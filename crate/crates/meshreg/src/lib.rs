//! File formats, reports and the command-line front end for `meshreg-core`.

pub mod cli;
pub mod eval;
pub mod io;
pub mod report;
