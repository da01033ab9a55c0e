//! Configuration, orchestration and persistence: the user-facing surface.

pub mod bundle;
pub mod cli;
pub mod config;
pub mod plot;
pub mod workflow;

pub use bundle::ResultBundle;
pub use config::{Resolved, ScenarioConfig};
pub use workflow::System;
