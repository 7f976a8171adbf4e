//! File ingestion (fleshed out with the CLI).
