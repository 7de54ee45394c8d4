//! File formats and the command line for `formtop-core`.

pub mod certificate_file;
pub mod cli;
pub mod derivation_file;
pub mod error;
pub mod specs;
pub mod topology_file;
