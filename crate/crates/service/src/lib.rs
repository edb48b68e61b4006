//! HTTP API and command-line harness over the drafting engine.

pub mod api;
pub mod cli;
pub mod error;
pub mod session;

pub use api::{router, AppState, Envelope, LoadedModels, ServiceConfig};
pub use error::{ApiError, ErrorBody};
