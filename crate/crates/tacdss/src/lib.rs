//! File formats, command-line driver and HTTP service for the tactical
//! decision fuzzy system. The math lives in [`tacdss_core`].

pub mod cli;
pub mod error;
pub mod explain;
pub mod model_io;
pub mod repro;
pub mod service;

pub use error::Error;
