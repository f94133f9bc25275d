//! Batch orchestration: parse, map, deduplicate, validate and write.
//!
//! Inputs are processed in fixed-size chunks of documents, fanned out over a
//! rayon pool. Only the dedup registry and the identifier tables outlive a chunk,
//! so memory tracks the number of promoted resources rather than corpus size.
//!
//! The batch is read twice. The first pass fills the registry and collects every
//! heritage asset's identifiers (needed for cross-record relations and for the
//! batch-wide uniqueness check). The second pass maps heritage assets again with
//! relations resolved and writes them in input order; promoted resources follow,
//! sorted by origin. Output is therefore the same for any worker count.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;
use walkdir::WalkDir;

use crate::carare::CarareRecord;
use crate::dedup::{DedupKey, DedupRegistry, Finalized};
use crate::edm::{BundleOrigin, EdmBundle};
use crate::mapping::{map_record_with, DatasetProfile, MappedRecord, MappingError, NoResolver};
use crate::parser::{parse_document, ParseError, ParseErrorKind, ParserConfig};
use crate::rdf::{
    bundle_file_name, document_header, write_bundle, write_bundle_resources, Layout, OutputSink, WriteError,
    DOCUMENT_FOOTER, SINGLE_DOCUMENT_NAME,
};
use crate::report::{BatchReport, RecordWarning};
use crate::validate::{has_errors, validate_bundle, UriCensus, Violation};

/// An ordered, random-access set of input documents.
pub trait SourceSet: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Reference (for reports) and raw bytes of document `index`.
    fn load(&self, index: usize) -> io::Result<(String, Vec<u8>)>;
}

impl SourceSet for [(String, String)] {
    fn len(&self) -> usize {
        <[_]>::len(self)
    }

    fn load(&self, index: usize) -> io::Result<(String, Vec<u8>)> {
        let (name, text) = &self[index];
        Ok((name.clone(), text.clone().into_bytes()))
    }
}

impl SourceSet for Vec<(String, String)> {
    fn len(&self) -> usize {
        self.as_slice().len()
    }

    fn load(&self, index: usize) -> io::Result<(String, Vec<u8>)> {
        self.as_slice().load(index)
    }
}

/// All `*.xml` files below a directory, in path order.
#[derive(Debug, Clone)]
pub struct DirSources {
    root: PathBuf,
    files: Vec<PathBuf>,
}

impl DirSources {
    pub fn scan(root: &Path) -> io::Result<Self> {
        let mut files = Vec::new();
        for entry in WalkDir::new(root).sort_by_file_name() {
            let entry = entry.map_err(io::Error::from)?;
            let is_xml = entry.path().extension().is_some_and(|e| e.eq_ignore_ascii_case("xml"));
            if entry.file_type().is_file() && is_xml {
                files.push(entry.into_path());
            }
        }
        Ok(DirSources { root: root.to_path_buf(), files })
    }
}

impl SourceSet for DirSources {
    fn len(&self) -> usize {
        self.files.len()
    }

    fn load(&self, index: usize) -> io::Result<(String, Vec<u8>)> {
        let path = &self.files[index];
        let name = path.strip_prefix(&self.root).unwrap_or(path).to_string_lossy().replace('\\', "/");
        let bytes = std::fs::read(path).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?;
        Ok((name, bytes))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; 1 runs everything on a single thread.
    pub workers: usize,
    /// Documents per processing chunk.
    pub chunk_size: usize,
    pub layout: Layout,
    /// When false nothing is written; the report is still complete.
    pub write_output: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            workers: std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
            chunk_size: 256,
            layout: Layout::OneFilePerBundle,
            write_output: true,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("i/o failure: {0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Write(#[from] WriteError),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

impl From<PipelineError> for io::Error {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Io(e) => e,
            other => io::Error::other(other.to_string()),
        }
    }
}

/// Parses one loaded document; invalid UTF-8 counts as malformed XML.
fn parse_loaded(doc_ref: &str, bytes: Vec<u8>, parser: &ParserConfig) -> Vec<Result<CarareRecord, ParseError>> {
    match String::from_utf8(bytes) {
        Ok(text) => parse_document(&text, doc_ref, parser),
        Err(e) => vec![Err(ParseError {
            document_ref: doc_ref.to_string(),
            kind: ParseErrorKind::MalformedXml,
            detail: format!("not UTF-8: {e}"),
        })],
    }
}

#[derive(Default)]
struct FirstPassDoc {
    parse_errors: Vec<ParseError>,
    record_warnings: Vec<RecordWarning>,
    mapped: Vec<MappedSummary>,
}

struct MappedSummary {
    record_id: String,
    ha_local_id: String,
    ha_cho_uri: String,
    ha_aggregation_uri: String,
    bundles: usize,
    warnings: Vec<crate::mapping::MappingWarning>,
}

struct Rendered {
    name: String,
    body: String,
    web_resources: usize,
    places: usize,
}

struct Checked {
    violations: Vec<Violation>,
    rendered: Option<Rendered>,
}

pub struct Pipeline<'a> {
    pub profile: &'a DatasetProfile,
    pub parser: &'a ParserConfig,
    pub options: RunOptions,
}

impl<'a> Pipeline<'a> {
    pub fn new(profile: &'a DatasetProfile, parser: &'a ParserConfig, options: RunOptions) -> Self {
        Pipeline { profile, parser, options }
    }

    pub fn run(&self, sources: &dyn SourceSet, sink: &mut dyn OutputSink) -> Result<BatchReport, PipelineError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.options.workers.max(1)).build()?;
        pool.install(|| self.run_in_pool(sources, sink))
    }

    fn chunks(&self, sources: &dyn SourceSet) -> impl Iterator<Item = std::ops::Range<usize>> {
        let n = sources.len();
        let size = self.options.chunk_size.max(1);
        (0..n).step_by(size).map(move |start| start..(start + size).min(n))
    }

    fn run_in_pool(&self, sources: &dyn SourceSet, sink: &mut dyn OutputSink) -> Result<BatchReport, PipelineError> {
        let started = Instant::now();
        let mut report = BatchReport::default();
        let registry = DedupRegistry::new(self.profile.dedup_enabled);
        let mut census = UriCensus::default();
        // heritage local id -> (record id, CHO uri); the smallest record id wins
        let mut heritage: BTreeMap<String, (String, String)> = BTreeMap::new();

        for range in self.chunks(sources) {
            let docs: Vec<FirstPassDoc> = range
                .into_par_iter()
                .map(|i| self.first_pass_doc(sources, i, &registry))
                .collect::<Result<_, PipelineError>>()?;
            for doc in docs {
                report.parse_errors += doc.parse_errors.len();
                report.parse_failures.extend(doc.parse_errors);
                report.record_warnings.extend(doc.record_warnings);
                for m in doc.mapped {
                    report.records_read += 1;
                    report.bundles_pre_dedup += m.bundles;
                    census.add_uris(&m.ha_cho_uri, &m.ha_aggregation_uri);
                    match heritage.get(&m.ha_local_id) {
                        Some((rid, _)) if *rid <= m.record_id => {}
                        _ => {
                            heritage.insert(m.ha_local_id, (m.record_id, m.ha_cho_uri));
                        }
                    }
                    report.mapping_warnings.extend(m.warnings);
                }
            }
        }
        report.missing_links = report
            .mapping_warnings
            .iter()
            .filter(|w| matches!(w, crate::mapping::MappingWarning::MissingLink { .. }))
            .count();

        let Finalized { bundles: promoted, merges, conflicts } = registry.finalize();
        for b in &promoted {
            census.add(b);
        }
        report.duplicates_merged = merges.len();
        report.merge_log = merges;
        report.dedup_conflicts = conflicts;
        let resolver: BTreeMap<String, String> = heritage.into_iter().map(|(k, (_, uri))| (k, uri)).collect();

        let single = self.options.layout == Layout::SingleDocument;
        let write = self.options.write_output;
        if write && single {
            sink.append(SINGLE_DOCUMENT_NAME, document_header().as_bytes())?;
        }

        for range in self.chunks(sources) {
            let checked: Vec<Vec<Checked>> = range
                .into_par_iter()
                .map(|i| self.second_pass_doc(sources, i, &resolver, &census))
                .collect::<Result<_, PipelineError>>()?;
            for c in checked.into_iter().flatten() {
                self.emit(c, &mut report, sink)?;
            }
        }
        let checked: Vec<Checked> = promoted
            .par_iter()
            .map(|b| self.check_and_render(b, &census))
            .collect::<Result<_, PipelineError>>()?;
        for c in checked {
            self.emit(c, &mut report, sink)?;
        }

        if write && single {
            sink.append(SINGLE_DOCUMENT_NAME, DOCUMENT_FOOTER.as_bytes())?;
            report.files_written = 1;
        }
        if write {
            sink.finish()?;
        }
        report.violations.sort();
        report.elapsed_ms = started.elapsed().as_millis() as u64;
        Ok(report)
    }

    fn map(&self, record: &CarareRecord, resolver: &dyn crate::mapping::HeritageResolver) -> Result<MappedRecord, PipelineError> {
        Ok(map_record_with(record, self.profile, resolver)?)
    }

    fn first_pass_doc(&self, sources: &dyn SourceSet, index: usize, registry: &DedupRegistry) -> Result<FirstPassDoc, PipelineError> {
        let (doc_ref, bytes) = sources.load(index)?;
        let mut out = FirstPassDoc::default();
        for parsed in parse_loaded(&doc_ref, bytes, self.parser) {
            let record = match parsed {
                Ok(r) => r,
                Err(e) => {
                    out.parse_errors.push(e);
                    continue;
                }
            };
            out.record_warnings.extend(
                record.warnings.iter().map(|w| RecordWarning { record_id: record.record_id.clone(), message: w.clone() }),
            );
            let mapped = self.map(&record, &NoResolver)?;
            let bundles = mapped.bundles.len();
            let mut iter = mapped.bundles.into_iter();
            let ha = iter.next().expect("heritage bundle");
            for b in iter {
                registry.observe(DedupKey::for_bundle(&b), b);
            }
            out.mapped.push(MappedSummary {
                record_id: record.record_id,
                ha_local_id: ha.origin_local_id,
                ha_cho_uri: ha.provided_cho.uri,
                ha_aggregation_uri: ha.aggregation.uri,
                bundles,
                warnings: mapped.warnings,
            });
        }
        Ok(out)
    }

    fn second_pass_doc(
        &self,
        sources: &dyn SourceSet,
        index: usize,
        resolver: &BTreeMap<String, String>,
        census: &UriCensus,
    ) -> Result<Vec<Checked>, PipelineError> {
        let (doc_ref, bytes) = sources.load(index)?;
        let mut out = Vec::new();
        for record in parse_loaded(&doc_ref, bytes, self.parser).into_iter().flatten() {
            let mapped = self.map(&record, resolver)?;
            let ha = &mapped.bundles[0];
            debug_assert_eq!(ha.origin, BundleOrigin::FromHeritageAsset);
            out.push(self.check_and_render(ha, census)?);
        }
        Ok(out)
    }

    fn check_and_render(&self, bundle: &EdmBundle, census: &UriCensus) -> Result<Checked, PipelineError> {
        let mut violations = validate_bundle(bundle);
        violations.extend(census.collision(bundle));
        if has_errors(&violations) {
            return Ok(Checked { violations, rendered: None });
        }
        let body = if !self.options.write_output {
            String::new()
        } else if self.options.layout == Layout::SingleDocument {
            let mut s = String::new();
            write_bundle_resources(bundle, &mut s)?;
            s
        } else {
            write_bundle(bundle)?
        };
        Ok(Checked {
            violations,
            rendered: Some(Rendered {
                name: bundle_file_name(&bundle.aggregation.uri),
                body,
                web_resources: bundle.web_resources.len(),
                places: bundle.places.len(),
            }),
        })
    }

    fn emit(&self, checked: Checked, report: &mut BatchReport, sink: &mut dyn OutputSink) -> Result<(), PipelineError> {
        report.violations.extend(checked.violations);
        let Some(r) = checked.rendered else {
            report.bundles_blocked += 1;
            return Ok(());
        };
        report.bundles_exported += 1;
        report.web_resource_count += r.web_resources;
        report.place_count += r.places;
        if self.options.write_output {
            match self.options.layout {
                Layout::SingleDocument => sink.append(SINGLE_DOCUMENT_NAME, r.body.as_bytes())?,
                Layout::OneFilePerBundle => {
                    sink.put(&r.name, r.body.as_bytes())?;
                    report.files_written += 1;
                }
            }
        }
        Ok(())
    }
}
