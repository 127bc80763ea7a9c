//! File formats, configuration, sweep runner and reports around
//! [`pumpwear_core`].

pub mod config;
pub mod error;
pub mod generate;
pub mod pipeline;
pub mod report;
pub mod sweep;
pub mod trace;

pub use error::{Error, Result, Stage};
pub use pumpwear_core as core;
