//! Driver library: dataset construction from Eisenstein products, file
//! ingestion, run manifests and report formatting for the `mfgal` binary.

pub mod ingest;
pub mod manifest;
pub mod spaces;
