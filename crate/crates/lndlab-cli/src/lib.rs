//! Batch front end for the derivation analysis pipeline: spec-file parsing,
//! stage orchestration and deterministic reports.

pub mod pipeline;
pub mod report;
pub mod specfile;
