//! Toolkit for Transparent Relations Ontology (TRO) knowledge graphs.
//!
//! The pipeline is: [`ingest`] flat tender and evidence records into a
//! [`rdf::Graph`] using deterministic IRIs from [`mint`], check it against
//! the [`vocab`] with [`validate`], then look for candidate conflicts of
//! interest with [`coi`].

pub mod cli;
pub mod coi;
pub mod date;
pub mod ingest;
pub mod mint;
pub mod ns;
pub mod rdf;
pub mod validate;
pub mod vocab;
