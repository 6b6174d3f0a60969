//! Exact enumeration, generating functions, recurrences and bijections for
//! statistics on increasing and flattened permutations.

pub mod bijections;
pub mod cli;
pub mod models;
pub mod oracle;
pub mod perm;
pub mod recurrences;
pub mod series;
pub mod sources;
pub mod table;
pub mod verify;
