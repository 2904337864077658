//! IO companion to `gymv-core`: PNG encoding, the catalog manifest,
//! episode files, reports, the HTTP service and its client, and a remote
//! chat-completions agent.

pub mod catalog;
pub mod client;
pub mod episodes;
pub mod golden;
pub mod png;
pub mod remote;
pub mod reports;
pub mod scorers;
pub mod service;
pub mod wire;

pub use gymv_core as core;
