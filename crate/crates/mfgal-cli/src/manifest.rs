//! Run manifests (fleshed out with the CLI).
