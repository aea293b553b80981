//! Instance documents and the `pbdonate` command line on top of
//! `pbdonate-core`.

pub mod cli;
pub mod document;

pub use document::{load_instance, parse_instance, serialize_instance, DocumentError, InstanceDocument};
