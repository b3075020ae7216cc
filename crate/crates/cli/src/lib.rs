//! Library side of the `quadalg` command-line tool.

pub mod app;
pub mod verify;
