//! File formats, run manifests and the command-line front end for
//! [`blocktrack_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod io;
pub mod manifest;

pub use error::{Error, Result};
