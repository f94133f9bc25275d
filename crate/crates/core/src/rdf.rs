//! Canonical RDF/XML output.
//!
//! Each bundle is written as `edm:ProvidedCHO`, `ore:Aggregation`, the web
//! resources and the places, in that order. Output uses LF line endings, two
//! spaces of indentation per level and UTF-8, and never depends on hash order,
//! so identical bundles always give identical bytes.
//!
//! Property order inside each resource:
//!
//! | resource | properties |
//! |---|---|
//! | `edm:ProvidedCHO` | `dc:title`, `dc:description`, `dc:creator`, `dc:subject`, `dc:relation`, `dcterms:isPartOf`, `dcterms:hasPart`, `dcterms:spatial`, `edm:isRepresentationOf`, `edm:type` |
//! | `ore:Aggregation` | `edm:aggregatedCHO`, `edm:dataProvider`, `edm:provider`, `edm:isShownBy`, `edm:isShownAt`, `edm:object`, `edm:rights` |
//! | `edm:WebResource` | `dc:rights` |
//! | `edm:Place` | `wgs84_pos:lat`, `wgs84_pos:long`, `skos:prefLabel`, `skos:note` |

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use quick_xml::escape::{escape, partial_escape};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::carare::LangText;
use crate::edm::{bundle_check, EdmBundle, InvariantViolation, PropertyValue};

/// Prefixes and namespace URIs used in every document.
pub const NAMESPACES: [(&str, &str); 7] = [
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("dc", "http://purl.org/dc/elements/1.1/"),
    ("dcterms", "http://purl.org/dc/terms/"),
    ("edm", "http://www.europeana.eu/schemas/edm/"),
    ("ore", "http://www.openarchives.org/ore/terms/"),
    ("skos", "http://www.w3.org/2004/02/skos/core#"),
    ("wgs84_pos", "http://www.w3.org/2003/01/geo/wgs84_pos#"),
];

/// Name of the document written for [`Layout::SingleDocument`].
pub const SINGLE_DOCUMENT_NAME: &str = "edm.rdf";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Layout {
    #[default]
    OneFilePerBundle,
    SingleDocument,
}

#[derive(Debug, Error)]
pub enum WriteError {
    #[error("bundle {uri} is inconsistent: {}", .violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidBundle { uri: String, violations: Vec<InvariantViolation> },
    #[error("i/o failure: {0}")]
    IoFailure(#[from] io::Error),
}

pub fn document_header() -> String {
    let mut out = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<rdf:RDF");
    for (prefix, uri) in NAMESPACES {
        out.push_str(&format!("\n    xmlns:{prefix}=\"{uri}\""));
    }
    out.push_str(">\n");
    out
}

pub const DOCUMENT_FOOTER: &str = "</rdf:RDF>\n";

/// Writes one bundle as a complete RDF/XML document.
pub fn write_bundle(bundle: &EdmBundle) -> Result<String, WriteError> {
    let mut out = document_header();
    write_bundle_resources(bundle, &mut out)?;
    out.push_str(DOCUMENT_FOOTER);
    Ok(out)
}

/// Appends the bundle's resource elements (without the `rdf:RDF` wrapper).
pub fn write_bundle_resources(bundle: &EdmBundle, out: &mut String) -> Result<(), WriteError> {
    let violations = bundle_check(bundle);
    if !violations.is_empty() {
        return Err(WriteError::InvalidBundle { uri: bundle.aggregation.uri.clone(), violations });
    }
    let mut w = ResourceWriter { out };

    let cho = &bundle.provided_cho;
    w.open("edm:ProvidedCHO", &cho.uri);
    w.texts("dc:title", &cho.titles);
    w.texts("dc:description", &cho.descriptions);
    w.literals("dc:creator", &cho.creators);
    w.literals("dc:subject", &cho.subjects);
    w.values("dc:relation", &cho.relations);
    w.values("dcterms:isPartOf", &cho.is_part_of);
    w.values("dcterms:hasPart", &cho.has_part);
    w.resources("dcterms:spatial", &cho.spatial_refs);
    w.resources("edm:isRepresentationOf", &cho.is_representation_of);
    w.literal("edm:type", cho.edm_type.as_str(), None);
    w.close("edm:ProvidedCHO");

    let agg = &bundle.aggregation;
    w.open("ore:Aggregation", &agg.uri);
    w.resource("edm:aggregatedCHO", &agg.aggregated_cho);
    w.literal("edm:dataProvider", &agg.data_provider, None);
    w.literal("edm:provider", &agg.provider, None);
    w.resources("edm:isShownBy", &agg.is_shown_by);
    w.resources("edm:isShownAt", &agg.is_shown_at);
    w.resources("edm:object", &agg.object_preview);
    w.resource("edm:rights", &agg.rights);
    w.close("ore:Aggregation");

    for wr in &bundle.web_resources {
        if wr.rights_literals.is_empty() {
            w.empty("edm:WebResource", &wr.uri);
            continue;
        }
        w.open("edm:WebResource", &wr.uri);
        w.literals("dc:rights", &wr.rights_literals);
        w.close("edm:WebResource");
    }

    for place in &bundle.places {
        if place.coordinates.is_none() && place.pref_labels.is_empty() && place.notes.is_empty() {
            w.empty("edm:Place", &place.uri);
            continue;
        }
        w.open("edm:Place", &place.uri);
        if let Some(c) = &place.coordinates {
            w.literal("wgs84_pos:lat", c.lat.as_str(), None);
            w.literal("wgs84_pos:long", c.long.as_str(), None);
        }
        w.texts("skos:prefLabel", &place.pref_labels);
        w.literals("skos:note", &place.notes);
        w.close("edm:Place");
    }
    Ok(())
}

/// All bundles in one `rdf:RDF` document, in the given order.
pub fn write_document(bundles: &[EdmBundle]) -> Result<String, WriteError> {
    let mut out = document_header();
    for b in bundles {
        write_bundle_resources(b, &mut out)?;
    }
    out.push_str(DOCUMENT_FOOTER);
    Ok(out)
}

/// File name for a bundle: hex SHA-256 of its aggregation URI.
pub fn bundle_file_name(aggregation_uri: &str) -> String {
    format!("{}.rdf", hex::encode(Sha256::digest(aggregation_uri.as_bytes())))
}

struct ResourceWriter<'a> {
    out: &'a mut String,
}

impl ResourceWriter<'_> {
    fn open(&mut self, element: &str, about: &str) {
        self.out.push_str(&format!("  <{element} rdf:about=\"{}\">\n", escape(about)));
    }

    fn empty(&mut self, element: &str, about: &str) {
        self.out.push_str(&format!("  <{element} rdf:about=\"{}\"/>\n", escape(about)));
    }

    fn close(&mut self, element: &str) {
        self.out.push_str(&format!("  </{element}>\n"));
    }

    fn literal(&mut self, property: &str, text: &str, lang: Option<&str>) {
        match lang {
            Some(lang) => self.out.push_str(&format!(
                "    <{property} xml:lang=\"{}\">{}</{property}>\n",
                escape(lang),
                partial_escape(text)
            )),
            None => self.out.push_str(&format!("    <{property}>{}</{property}>\n", partial_escape(text))),
        }
    }

    fn literals(&mut self, property: &str, values: &[String]) {
        for v in values {
            self.literal(property, v, None);
        }
    }

    fn texts(&mut self, property: &str, values: &[LangText]) {
        for v in values {
            self.literal(property, &v.text, v.lang.as_deref());
        }
    }

    fn resource(&mut self, property: &str, uri: &str) {
        self.out.push_str(&format!("    <{property} rdf:resource=\"{}\"/>\n", escape(uri)));
    }

    fn resources<'u>(&mut self, property: &str, uris: impl IntoIterator<Item = &'u String>) {
        for uri in uris {
            self.resource(property, uri);
        }
    }

    fn values(&mut self, property: &str, values: &[PropertyValue]) {
        for v in values {
            match v {
                PropertyValue::Resource(uri) => self.resource(property, uri),
                PropertyValue::Literal(text) => self.literal(property, text, None),
            }
        }
    }
}

/// Destination for serialized output.
pub trait OutputSink: Send {
    /// Creates or replaces `name` with `bytes`.
    fn put(&mut self, name: &str, bytes: &[u8]) -> io::Result<()>;
    /// Appends to `name`, creating it on first use.
    fn append(&mut self, name: &str, bytes: &[u8]) -> io::Result<()>;
    fn finish(&mut self) -> io::Result<()>;
}

/// Writes files into a directory, created on demand.
pub struct DirSink {
    root: PathBuf,
    open: Option<(String, BufWriter<fs::File>)>,
}

impl DirSink {
    pub fn new(root: impl Into<PathBuf>) -> io::Result<Self> {
        let root = root.into();
        fs::create_dir_all(&root)?;
        Ok(DirSink { root, open: None })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }
}

impl OutputSink for DirSink {
    fn put(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        fs::write(self.root.join(name), bytes)
    }

    fn append(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        if self.open.as_ref().map(|(n, _)| n.as_str()) != Some(name) {
            self.finish()?;
            let file = fs::File::create(self.root.join(name))?;
            self.open = Some((name.to_string(), BufWriter::new(file)));
        }
        self.open.as_mut().expect("just opened").1.write_all(bytes)
    }

    fn finish(&mut self) -> io::Result<()> {
        if let Some((_, mut w)) = self.open.take() {
            w.flush()?;
        }
        Ok(())
    }
}

/// Keeps output in memory, keyed by file name.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct MemorySink {
    pub files: BTreeMap<String, Vec<u8>>,
}

impl OutputSink for MemorySink {
    fn put(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        self.files.insert(name.to_string(), bytes.to_vec());
        Ok(())
    }

    fn append(&mut self, name: &str, bytes: &[u8]) -> io::Result<()> {
        self.files.entry(name.to_string()).or_default().extend_from_slice(bytes);
        Ok(())
    }

    fn finish(&mut self) -> io::Result<()> {
        Ok(())
    }
}

/// Writes bundles with the chosen layout; returns the names written.
pub fn write_batch(bundles: &[EdmBundle], layout: Layout, sink: &mut dyn OutputSink) -> Result<Vec<String>, WriteError> {
    let names = match layout {
        Layout::OneFilePerBundle => {
            let mut names = Vec::with_capacity(bundles.len());
            for b in bundles {
                let name = bundle_file_name(&b.aggregation.uri);
                sink.put(&name, write_bundle(b)?.as_bytes())?;
                names.push(name);
            }
            names
        }
        Layout::SingleDocument => {
            sink.put(SINGLE_DOCUMENT_NAME, write_document(bundles)?.as_bytes())?;
            vec![SINGLE_DOCUMENT_NAME.to_string()]
        }
    };
    sink.finish()?;
    Ok(names)
}
