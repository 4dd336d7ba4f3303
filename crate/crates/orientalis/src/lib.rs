//! File formats, parallel enumeration and the command-line driver for
//! [`orientalis_core`].

pub mod cli;
pub mod format;
pub mod parallel;

pub use orientalis_core as core;
