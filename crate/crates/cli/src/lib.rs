//! File formats, run manifests and orchestration for the circfactor CLI.
//! The algorithms live in `circfactor-core`; this crate owns everything
//! that touches bytes on disk.

pub mod format;
pub mod manifest;
pub mod runner;

pub use format::{parse_circuit, parse_root_file, serialize_circuit, AnyCircuit, FormatError};
pub use manifest::{render_manifest, render_verify_report};
pub use runner::{run_candidates, RunOptions};
