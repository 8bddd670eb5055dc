//! Conjugacy classes of maximal unipotent subgroups `U(q)` of split Chevalley
//! groups of rank at most 4, in good and bad characteristic.

pub mod analyzer;
pub mod bruteforce;
pub mod classifier;
pub mod engine;
pub mod report;
pub mod error;
pub mod rings;
pub mod root_system;
pub mod snf;

pub use error::{Error, Result};
