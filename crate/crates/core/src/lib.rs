//! Transformation of CARARE monument records into Europeana Data Model
//! RDF/XML bundles.
//!
//! The stages are independent modules:
//!
//! - [`parser`] reads CARARE XML into the [`carare`] model,
//! - [`mapping`] turns a record into [`edm`] bundles, minting identifiers with [`mint`],
//! - [`dedup`] merges objects shared between records,
//! - [`validate`] checks bundles before export,
//! - [`rdf`] serializes them,
//! - [`pipeline`] runs all of the above over a batch and produces a [`report`].

pub mod carare;
pub mod config;
pub mod dedup;
pub mod edm;
pub mod mapping;
pub mod mint;
pub mod parser;
pub mod pipeline;
pub mod rdf;
pub mod report;
pub mod synth;
pub mod validate;

pub use carare::{CarareRecord, DigitalResource, HeritageAsset, LangText};
pub use config::{ConfigError, RunConfig};
pub use dedup::{DedupDecision, DedupKey, DedupRegistry};
pub use edm::{bundle_check, BundleOrigin, EdmBundle, EdmType};
pub use mapping::{map_record, DatasetProfile, ScenarioPolicy};
pub use mint::{ChoUriPolicy, MintConfig};
pub use parser::{parse_batch, parse_record, ParseError, ParseErrorKind, ParserConfig};
pub use pipeline::{DirSources, Pipeline, PipelineError, RunOptions, SourceSet};
pub use rdf::{write_batch, write_bundle, DirSink, Layout, MemorySink, OutputSink};
pub use report::BatchReport;
pub use validate::{validate_batch, validate_bundle, Violation, ViolationCode};
