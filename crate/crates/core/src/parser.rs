//! Lenient parser for CARARE XML documents.
//!
//! A document is either a single `carare` element or a `carareWrap` holding any
//! number of them. The reader streams events and materialises one small element
//! tree per `carare` element, so memory stays proportional to the largest record
//! rather than the whole document.
//!
//! Elements are matched by local name. When a CARARE namespace is configured, an
//! element counts as CARARE if it is bound to that namespace or to no namespace
//! at all; elements from any other namespace are skipped with a warning.

use quick_xml::events::{BytesStart, Event};
use quick_xml::name::ResolveResult;
use quick_xml::NsReader;
use rayon::prelude::*;
use thiserror::Error;

use crate::carare::{
    is_absolute_url, record_entity_index, ActivityInfo, CarareRecord, CollectionInfo,
    Coordinates, DecimalDegrees, DigitalResource, HeritageAsset, IndexError, LangText,
    RelationKind, RelationLink, RightsInfo, SpatialInfo,
};

/// Namespace of CARARE 1.x documents.
pub const CARARE_NAMESPACE: &str = "http://www.carare.eu/carareSchema";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParserConfig {
    /// `None` matches local names in any namespace.
    pub namespace: Option<String>,
}

impl Default for ParserConfig {
    fn default() -> Self {
        ParserConfig { namespace: Some(CARARE_NAMESPACE.to_string()) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorKind {
    MalformedXml,
    MissingHeritageAsset,
    MissingRecordId,
    DuplicateLocalId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize)]
#[error("{document_ref}: {kind:?}: {detail}")]
pub struct ParseError {
    pub document_ref: String,
    pub kind: ParseErrorKind,
    pub detail: String,
}

impl ParseError {
    fn new(document_ref: &str, kind: ParseErrorKind, detail: impl Into<String>) -> Self {
        ParseError { document_ref: document_ref.to_string(), kind, detail: detail.into() }
    }
}

/// Parses a document that holds exactly one record.
pub fn parse_record(document: &str, document_ref: &str) -> Result<CarareRecord, ParseError> {
    parse_record_with(document, document_ref, &ParserConfig::default())
}

pub fn parse_record_with(
    document: &str,
    document_ref: &str,
    config: &ParserConfig,
) -> Result<CarareRecord, ParseError> {
    let mut results = parse_document(document, document_ref, config);
    match results.len() {
        1 => results.pop().unwrap(),
        0 => Err(ParseError::new(
            document_ref,
            ParseErrorKind::MissingHeritageAsset,
            "document contains no carare record",
        )),
        n => {
            // An error after earlier records wins over the count mismatch.
            if let Some(err) = results.into_iter().find_map(Result::err) {
                return Err(err);
            }
            Err(ParseError::new(
                document_ref,
                ParseErrorKind::MalformedXml,
                format!("expected one carare record, found {n}"),
            ))
        }
    }
}

/// Parses every record of every source. Output order follows input order
/// regardless of how many threads rayon uses.
pub fn parse_batch<S, T>(sources: &[(S, T)], config: &ParserConfig) -> (Vec<CarareRecord>, Vec<ParseError>)
where
    S: AsRef<str> + Sync,
    T: AsRef<str> + Sync,
{
    let per_doc: Vec<_> = sources
        .par_iter()
        .map(|(doc_ref, text)| parse_document(text.as_ref(), doc_ref.as_ref(), config))
        .collect();
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for result in per_doc.into_iter().flatten() {
        match result {
            Ok(r) => records.push(r),
            Err(e) => errors.push(e),
        }
    }
    (records, errors)
}

/// Parses all records of one document, in document order. A well-formedness
/// failure ends the list with a single error; records completed before it are kept.
pub fn parse_document(
    document: &str,
    document_ref: &str,
    config: &ParserConfig,
) -> Vec<Result<CarareRecord, ParseError>> {
    let mut out = Vec::new();
    if let Err(detail) = stream_records(document, config, |node, wrapped, ordinal| {
        let record_ref = if wrapped { format!("{document_ref}#{ordinal}") } else { document_ref.to_string() };
        out.push(build_record(&node, &record_ref));
    }) {
        out.push(Err(ParseError::new(document_ref, ParseErrorKind::MalformedXml, detail)));
    }
    out
}

#[derive(Debug, Default)]
struct Node {
    name: String,
    in_carare_ns: bool,
    attrs: Vec<(String, String)>,
    text: String,
    children: Vec<Node>,
}

impl Node {
    fn attr(&self, local: &str) -> Option<&str> {
        self.attrs.iter().find(|(k, _)| k == local).map(|(_, v)| v.as_str())
    }

    fn value(&self) -> Option<String> {
        let t = self.text.trim();
        (!t.is_empty()).then(|| t.to_string())
    }

    fn lang_text(&self) -> Option<LangText> {
        self.value().map(|text| LangText { text, lang: self.attr("lang").map(str::to_string) })
    }
}

const RECORD: &str = "carare";
const WRAP: &str = "carareWrap";

/// Drives the XML reader, handing each completed `carare` subtree to `emit`.
fn stream_records(
    document: &str,
    config: &ParserConfig,
    mut emit: impl FnMut(Node, bool, usize),
) -> Result<(), String> {
    let mut reader = NsReader::from_str(document);
    reader.config_mut().check_end_names = true;

    // Open elements outside any record: (local name, is carare ns).
    let mut outer: Vec<(String, bool)> = Vec::new();
    // Open elements inside the current record, innermost last.
    let mut stack: Vec<Node> = Vec::new();
    let mut seen_root = false;
    let mut ordinal = 0usize;

    loop {
        let event = reader.read_event().map_err(|e| format!("{e} at byte {}", reader.error_position()))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let empty = matches!(event, Event::Empty(_));
                let node = open_node(&reader, e, config)?;
                if outer.is_empty() && stack.is_empty() {
                    if seen_root {
                        return Err("multiple root elements".into());
                    }
                    seen_root = true;
                }
                let starts_record = stack.is_empty() && node.in_carare_ns && node.name == RECORD;
                if !stack.is_empty() || starts_record {
                    stack.push(node);
                    if empty {
                        close_node(&mut stack, &outer, &mut ordinal, &mut emit);
                    }
                } else if !empty {
                    outer.push((node.name, node.in_carare_ns));
                }
            }
            Event::End(_) => {
                if stack.is_empty() {
                    outer.pop();
                } else {
                    close_node(&mut stack, &outer, &mut ordinal, &mut emit);
                }
            }
            Event::Text(t) => {
                let text = t.unescape().map_err(|e| e.to_string())?;
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(&text);
                } else if outer.is_empty() && !text.trim().is_empty() {
                    return Err("text outside the root element".into());
                }
            }
            Event::CData(c) => {
                let raw = c.into_inner();
                let text = std::str::from_utf8(&raw).map_err(|e| e.to_string())?;
                if let Some(top) = stack.last_mut() {
                    top.text.push_str(text);
                }
            }
            Event::Eof => break,
            _ => {}
        }
    }
    if !outer.is_empty() || !stack.is_empty() {
        return Err("unexpected end of document".into());
    }
    if !seen_root {
        return Err("document has no root element".into());
    }
    Ok(())
}

fn open_node(reader: &NsReader<&[u8]>, e: &BytesStart<'_>, config: &ParserConfig) -> Result<Node, String> {
    let (ns, local) = reader.resolve_element(e.name());
    let name = std::str::from_utf8(local.as_ref()).map_err(|e| e.to_string())?.to_string();
    let in_carare_ns = match (&config.namespace, ns) {
        (None, _) => true,
        (Some(_), ResolveResult::Unbound) => true,
        (Some(want), ResolveResult::Bound(got)) => got.as_ref() == want.as_bytes(),
        (Some(_), ResolveResult::Unknown(prefix)) => {
            return Err(format!("undeclared namespace prefix {:?}", String::from_utf8_lossy(&prefix)));
        }
    };
    let mut attrs = Vec::new();
    for attr in e.attributes() {
        let attr = attr.map_err(|e| e.to_string())?;
        let key = std::str::from_utf8(attr.key.local_name().as_ref()).map_err(|e| e.to_string())?.to_string();
        if attr.key.as_ref().starts_with(b"xmlns") {
            continue;
        }
        let value = attr.decode_and_unescape_value(reader.decoder()).map_err(|e| e.to_string())?;
        attrs.push((key, value.into_owned()));
    }
    Ok(Node { name, in_carare_ns, attrs, text: String::new(), children: Vec::new() })
}

fn close_node(stack: &mut Vec<Node>, outer: &[(String, bool)], ordinal: &mut usize, emit: &mut impl FnMut(Node, bool, usize)) {
    let node = stack.pop().expect("close without open");
    match stack.last_mut() {
        Some(parent) => parent.children.push(node),
        None => {
            *ordinal += 1;
            let wrapped = outer.iter().any(|(name, ns)| *ns && name == WRAP);
            emit(node, wrapped, *ordinal);
        }
    }
}

/// Collects warnings while walking one record tree.
struct Walk {
    warnings: Vec<String>,
}

impl Walk {
    fn unrecognized(&mut self, path: &str, node: &Node) {
        if node.in_carare_ns {
            self.warnings.push(format!("unrecognized element {path}/{}", node.name));
        } else {
            self.warnings.push(format!("element {path}/{} is outside the CARARE namespace", node.name));
        }
    }

    fn empty(&mut self, path: &str, node: &Node) {
        self.warnings.push(format!("empty element {path}/{}", node.name));
    }

    /// Carare-namespace children only; foreign ones are reported and skipped.
    fn children<'n>(&mut self, path: &str, node: &'n Node) -> Vec<&'n Node> {
        let mut out = Vec::new();
        for child in &node.children {
            if child.in_carare_ns {
                out.push(child);
            } else {
                self.unrecognized(path, child);
            }
        }
        out
    }

    fn push_text(&mut self, path: &str, node: &Node, into: &mut Vec<LangText>) {
        match node.lang_text() {
            Some(t) => into.push(t),
            None => self.empty(path, node),
        }
    }

    fn push_string(&mut self, path: &str, node: &Node, into: &mut Vec<String>) {
        match node.value() {
            Some(t) => into.push(t),
            None => self.empty(path, node),
        }
    }

    fn set_once(&mut self, path: &str, node: &Node, slot: &mut Option<String>) {
        match (node.value(), slot.is_some()) {
            (None, _) => self.empty(path, node),
            (Some(_), true) => self.warnings.push(format!("repeated element {path}/{} ignored", node.name)),
            (Some(v), false) => *slot = Some(v),
        }
    }

    fn record_information(&mut self, path: &str, node: &Node, id: &mut Option<String>, source: Option<&mut Option<String>>) {
        let path = format!("{path}/{}", node.name);
        let mut source = source;
        for child in self.children(&path, node) {
            match (child.name.as_str(), source.as_deref_mut()) {
                ("id", _) => self.set_once(&path, child, id),
                ("source", Some(slot)) => self.set_once(&path, child, slot),
                _ => self.unrecognized(&path, child),
            }
        }
    }

    fn appellation(&mut self, path: &str, node: &Node, titles: &mut Vec<LangText>) {
        let path = format!("{path}/{}", node.name);
        for child in self.children(&path, node) {
            match child.name.as_str() {
                "name" => self.push_text(&path, child, titles),
                _ => self.unrecognized(&path, child),
            }
        }
    }

    fn rights(&mut self, path: &str, node: &Node, rights: &mut RightsInfo) {
        let path = format!("{path}/{}", node.name);
        for child in self.children(&path, node) {
            match child.name.as_str() {
                "statement" => self.set_once(&path, child, &mut rights.statement),
                "holder" => self.set_once(&path, child, &mut rights.holder),
                "date" => self.set_once(&path, child, &mut rights.date),
                _ => self.unrecognized(&path, child),
            }
        }
    }

    fn spatial(&mut self, path: &str, node: &Node, ordinal: usize) -> SpatialInfo {
        let path = format!("{path}/{}", node.name);
        let place_local_id = node
            .attr("id")
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .unwrap_or_else(|| format!("SP.{ordinal}"));
        let mut lat = None;
        let mut long = None;
        let mut labels = Vec::new();
        let mut address_note = None;
        for child in self.children(&path, node) {
            match child.name.as_str() {
                "geometry" => {
                    let gpath = format!("{path}/geometry");
                    for g in self.children(&gpath, child) {
                        match g.name.as_str() {
                            "lat" => self.set_once(&gpath, g, &mut lat),
                            "long" => self.set_once(&gpath, g, &mut long),
                            _ => self.unrecognized(&gpath, g),
                        }
                    }
                }
                "locationSet" => {
                    let lpath = format!("{path}/locationSet");
                    for l in self.children(&lpath, child) {
                        match l.name.as_str() {
                            "namedLocation" => self.push_text(&lpath, l, &mut labels),
                            "address" => self.set_once(&lpath, l, &mut address_note),
                            _ => self.unrecognized(&lpath, l),
                        }
                    }
                }
                _ => self.unrecognized(&path, child),
            }
        }
        let coordinates = match (lat, long) {
            (None, None) => None,
            (Some(lat), Some(long)) => match (DecimalDegrees::parse(&lat), DecimalDegrees::parse(&long)) {
                (Some(lat), Some(long)) => Some(Coordinates { lat, long }),
                _ => {
                    self.warnings.push(format!("non-numeric coordinates in {path} ({place_local_id}) dropped"));
                    None
                }
            },
            _ => {
                self.warnings.push(format!("incomplete coordinates in {path} ({place_local_id}) dropped"));
                None
            }
        };
        SpatialInfo { place_local_id, coordinates, labels, address_note }
    }

    fn relations(&mut self, path: &str, node: &Node, out: &mut Vec<RelationLink>) {
        let path = format!("{path}/{}", node.name);
        for child in self.children(&path, node) {
            let kind = match child.name.as_str() {
                "isPartOf" => RelationKind::PartOf,
                "hasPart" => RelationKind::HasPart,
                "hasRepresentation" => RelationKind::RepresentedBy,
                "relation" => RelationKind::Other(child.attr("type").unwrap_or("related").trim().to_string()),
                _ => {
                    self.unrecognized(&path, child);
                    continue;
                }
            };
            match child.value() {
                Some(target_local_id) => out.push(RelationLink { kind, target_local_id, external: true }),
                None => self.empty(&path, child),
            }
        }
    }

    fn heritage_asset(&mut self, node: &Node) -> Option<HeritageAsset> {
        let path = "heritageAsset";
        let mut id = None;
        let mut ha = HeritageAsset::new("");
        for child in self.children(path, node) {
            match child.name.as_str() {
                "recordInformation" => {
                    self.record_information(path, child, &mut id, Some(&mut ha.source_attribution))
                }
                "appellation" => self.appellation(path, child, &mut ha.titles),
                "description" => self.push_text(path, child, &mut ha.descriptions),
                "generalType" => self.push_string(path, child, &mut ha.asset_types),
                "rights" => self.rights(path, child, &mut ha.rights),
                "spatial" => {
                    let sp = self.spatial(path, child, ha.spatial.len() + 1);
                    ha.spatial.push(sp);
                }
                "temporal" => {
                    let tpath = format!("{path}/temporal");
                    for t in self.children(&tpath, child) {
                        match t.name.as_str() {
                            "displayDate" | "periodName" => self.push_string(&tpath, t, &mut ha.temporal_notes),
                            _ => self.unrecognized(&tpath, t),
                        }
                    }
                }
                "relations" => self.relations(path, child, &mut ha.relations),
                _ => self.unrecognized(path, child),
            }
        }
        ha.local_id = id?;
        Some(ha)
    }

    fn digital_resource(&mut self, node: &Node) -> Option<DigitalResource> {
        let path = "digitalResource";
        let mut id = None;
        let mut dr = DigitalResource::new("");
        for child in self.children(path, node) {
            match child.name.as_str() {
                "recordInformation" => self.record_information(path, child, &mut id, None),
                "appellation" => self.appellation(path, child, &mut dr.titles),
                "description" => self.push_text(path, child, &mut dr.descriptions),
                "creator" => self.push_string(path, child, &mut dr.creators),
                "link" => self.set_once(path, child, &mut dr.link),
                "format" => self.set_once(path, child, &mut dr.format),
                "type" => self.set_once(path, child, &mut dr.resource_type),
                "rights" => self.rights(path, child, &mut dr.rights),
                "isRepresentationOf" => self.push_string(path, child, &mut dr.represents),
                _ => self.unrecognized(path, child),
            }
        }
        let Some(id) = id else {
            self.warnings.push("digitalResource without recordInformation/id dropped".into());
            return None;
        };
        if let Some(link) = dr.link.take() {
            if is_absolute_url(&link) {
                dr.link = Some(link);
            } else {
                self.warnings.push(format!("digitalResource {id}: link {link:?} is not an absolute URL, dropped"));
            }
        }
        dr.local_id = id;
        Some(dr)
    }

    /// Shared shape of collectionInformation and activity.
    fn described(&mut self, node: &Node) -> Option<(String, Option<String>, Option<String>)> {
        let path = node.name.clone();
        let mut id = None;
        let mut title = None;
        let mut description = None;
        for child in self.children(&path, node) {
            match child.name.as_str() {
                "recordInformation" => self.record_information(&path, child, &mut id, None),
                "id" => self.set_once(&path, child, &mut id),
                "title" => self.set_once(&path, child, &mut title),
                "description" => self.set_once(&path, child, &mut description),
                _ => self.unrecognized(&path, child),
            }
        }
        match id {
            Some(id) => Some((id, title, description)),
            None => {
                self.warnings.push(format!("{path} without identifier dropped"));
                None
            }
        }
    }
}

fn build_record(node: &Node, record_ref: &str) -> Result<CarareRecord, ParseError> {
    let mut walk = Walk { warnings: Vec::new() };
    let mut record_id = node.attr("id").map(str::trim).filter(|s| !s.is_empty()).map(str::to_string);
    let mut assets = Vec::new();
    let mut resources = Vec::new();
    let mut collection = None;
    let mut activities = Vec::new();

    for child in walk.children(RECORD, node) {
        match child.name.as_str() {
            "heritageAsset" => assets.push(child),
            "digitalResource" => {
                if let Some(dr) = walk.digital_resource(child) {
                    resources.push(dr);
                }
            }
            "collectionInformation" => {
                if let Some((local_id, title, description)) = walk.described(child) {
                    if collection.is_some() {
                        walk.warnings.push("repeated collectionInformation ignored".into());
                    } else {
                        collection = Some(CollectionInfo { local_id, title, description });
                    }
                }
            }
            "activity" => {
                if let Some((local_id, title, description)) = walk.described(child) {
                    activities.push(ActivityInfo { local_id, title, description });
                }
            }
            "recordId" if record_id.is_none() => record_id = child.value(),
            _ => walk.unrecognized(RECORD, child),
        }
    }

    let record_id = record_id.ok_or_else(|| {
        ParseError::new(record_ref, ParseErrorKind::MissingRecordId, "carare element has no id attribute")
    })?;
    let [asset] = assets.as_slice() else {
        return Err(ParseError::new(
            record_ref,
            ParseErrorKind::MissingHeritageAsset,
            format!("record {record_id} has {} heritageAsset elements, expected exactly one", assets.len()),
        ));
    };
    let heritage_asset = walk.heritage_asset(asset).ok_or_else(|| {
        ParseError::new(
            record_ref,
            ParseErrorKind::MissingHeritageAsset,
            format!("record {record_id}: heritageAsset has no recordInformation/id"),
        )
    })?;

    let mut record = CarareRecord {
        record_id,
        heritage_asset,
        digital_resources: resources,
        collection,
        activities,
        warnings: walk.warnings,
    };
    if let Err(IndexError::DuplicateLocalId(id)) = record_entity_index(&record) {
        return Err(ParseError::new(
            record_ref,
            ParseErrorKind::DuplicateLocalId,
            format!("record {}: local id {id:?} is used by more than one entity", record.record_id),
        ));
    }
    record.mark_external_relations();
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HAPPY: &str = r#"<?xml version="1.0" encoding="UTF-8"?>
<carareWrap xmlns="http://www.carare.eu/carareSchema">
  <carare id="iid:2920154">
    <heritageAsset>
      <recordInformation><id>HA:6396</id></recordInformation>
      <appellation><name lang="en">  House of the Tragic Poet </name></appellation>
      <spatial id="SP.1">
        <geometry><lat>40.7515</lat><long>14.4839</long></geometry>
        <locationSet><namedLocation lang="it">Pompei</namedLocation></locationSet>
      </spatial>
      <relations><isPartOf>HA:1</isPartOf><hasRepresentation>DR:1</hasRepresentation></relations>
    </heritageAsset>
    <digitalResource>
      <recordInformation><id>DR:1</id></recordInformation>
      <appellation><name>Pompeiana</name></appellation>
      <creator>William Gell</creator>
      <link>http://example.org/a.jpg</link>
      <isRepresentationOf>HA:6396</isRepresentationOf>
    </digitalResource>
    <digitalResource>
      <recordInformation><id>DR:2</id></recordInformation>
      <link>http://example.org/b.jpg</link>
      <rights><holder>Someone</holder><date>2011-01-01</date></rights>
    </digitalResource>
  </carare>
</carareWrap>"#;

    #[test]
    fn happy_path() {
        let rec = parse_record(HAPPY, "a.xml").unwrap();
        assert_eq!(rec.record_id, "iid:2920154");
        assert_eq!(rec.heritage_asset.local_id, "HA:6396");
        assert_eq!(rec.heritage_asset.titles, vec![LangText::with_lang("House of the Tragic Poet", "en")]);
        assert_eq!(rec.digital_resources.len(), 2);
        assert_eq!(rec.digital_resources[1].rights.holder.as_deref(), Some("Someone"));
        let sp = &rec.heritage_asset.spatial[0];
        assert_eq!(sp.coordinates.as_ref().unwrap().lat.as_str(), "40.7515");
        assert!(rec.warnings.is_empty(), "{:?}", rec.warnings);
        let rels = &rec.heritage_asset.relations;
        assert!(rels[0].external);
        assert!(!rels[1].external);
    }

    #[test]
    fn two_heritage_assets_is_an_error() {
        let doc = r#"<carare id="r"><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset>
            <heritageAsset><recordInformation><id>HA:2</id></recordInformation></heritageAsset></carare>"#;
        let err = parse_record(doc, "d").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeritageAsset);
    }

    #[test]
    fn zero_heritage_assets_is_an_error() {
        let err = parse_record(r#"<carare id="r"/>"#, "d").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::MissingHeritageAsset);
    }

    #[test]
    fn missing_record_id() {
        let doc = r#"<carare><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset></carare>"#;
        assert_eq!(parse_record(doc, "d").unwrap_err().kind, ParseErrorKind::MissingRecordId);
    }

    #[test]
    fn record_id_from_child_element() {
        let doc = r#"<carare><recordId>iid:9</recordId><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset></carare>"#;
        assert_eq!(parse_record(doc, "d").unwrap().record_id, "iid:9");
    }

    #[test]
    fn unknown_child_is_a_warning() {
        let doc = r#"<carare id="r"><heritageAsset><recordInformation><id>HA:1</id></recordInformation>
            <appellation><name>x</name></appellation><colour>red</colour></heritageAsset></carare>"#;
        let rec = parse_record(doc, "d").unwrap();
        assert_eq!(rec.warnings, vec!["unrecognized element heritageAsset/colour".to_string()]);
    }

    #[test]
    fn foreign_namespace_is_skipped() {
        let doc = r#"<carare xmlns="http://www.carare.eu/carareSchema" xmlns:x="urn:other" id="r">
            <heritageAsset><recordInformation><id>HA:1</id></recordInformation><x:description>no</x:description></heritageAsset></carare>"#;
        let rec = parse_record(doc, "d").unwrap();
        assert!(rec.heritage_asset.descriptions.is_empty());
        assert_eq!(rec.warnings.len(), 1);
    }

    #[test]
    fn configurable_namespace() {
        let doc = r#"<carare xmlns="http://www.carare.eu/carareSchema/v1.1" id="r">
            <heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset></carare>"#;
        // the default namespace does not match, so no record element is found
        assert!(parse_record(doc, "d").is_err());
        let cfg = ParserConfig { namespace: Some("http://www.carare.eu/carareSchema/v1.1".into()) };
        assert!(parse_record_with(doc, "d", &cfg).is_ok());
        assert!(parse_record_with(doc, "d", &ParserConfig { namespace: None }).is_ok());
    }

    #[test]
    fn malformed_inputs() {
        for doc in [
            "",
            "<carare id='r'>",
            "<carare id='r'></carre>",
            "<a/><b/>",
            "<carare id='r'>&bogus;</carare>",
            "<x:carare id='r'/>",
        ] {
            let err = parse_record(doc, "d").unwrap_err();
            assert_eq!(err.kind, ParseErrorKind::MalformedXml, "{doc:?} -> {err:?}");
        }
    }

    #[test]
    fn duplicate_local_ids() {
        let doc = r#"<carare id="r"><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset>
            <digitalResource><recordInformation><id>DR:A</id></recordInformation></digitalResource>
            <digitalResource><recordInformation><id>DR:A</id></recordInformation></digitalResource></carare>"#;
        assert_eq!(parse_record(doc, "d").unwrap_err().kind, ParseErrorKind::DuplicateLocalId);
    }

    #[test]
    fn text_is_trimmed_and_entities_decoded() {
        let doc = "<carare id=' r1 '><heritageAsset><recordInformation><id>HA:1</id></recordInformation>\
            <description>\n  a &amp; b\n  c  </description></heritageAsset></carare>";
        let rec = parse_record(doc, "d").unwrap();
        assert_eq!(rec.record_id, "r1");
        assert_eq!(rec.heritage_asset.descriptions[0].text, "a & b\n  c");
    }

    #[test]
    fn coordinate_oddities() {
        let doc = r#"<carare id="r"><heritageAsset><recordInformation><id>HA:1</id></recordInformation>
            <spatial><geometry><lat>95.5</lat><long>200</long></geometry></spatial>
            <spatial><geometry><lat>1</lat></geometry></spatial>
            <spatial><geometry><lat>x</lat><long>1</long></geometry></spatial></heritageAsset></carare>"#;
        let rec = parse_record(doc, "d").unwrap();
        let sp = &rec.heritage_asset.spatial;
        assert_eq!(sp.iter().map(|s| s.place_local_id.as_str()).collect::<Vec<_>>(), ["SP.1", "SP.2", "SP.3"]);
        // out of range is preserved
        assert_eq!(sp[0].coordinates.as_ref().unwrap().lat.as_str(), "95.5");
        assert!(sp[1].coordinates.is_none());
        assert!(sp[2].coordinates.is_none());
        assert_eq!(rec.warnings.len(), 2);
    }

    #[test]
    fn relative_links_are_dropped() {
        let doc = r#"<carare id="r"><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset>
            <digitalResource><recordInformation><id>DR:A</id></recordInformation><link>img/a.jpg</link></digitalResource></carare>"#;
        let rec = parse_record(doc, "d").unwrap();
        assert!(rec.digital_resources[0].link.is_none());
        assert_eq!(rec.warnings.len(), 1);
    }

    #[test]
    fn batch_partitions_and_keeps_order() {
        let ok = |id: &str| format!(r#"<carare id="{id}"><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset></carare>"#);
        let sources = vec![
            ("1".to_string(), ok("a")),
            ("2".to_string(), "<carare".to_string()),
            ("3".to_string(), ok("b")),
            ("4".to_string(), ok("c")),
        ];
        let (records, errors) = parse_batch(&sources, &ParserConfig::default());
        assert_eq!(records.iter().map(|r| r.record_id.as_str()).collect::<Vec<_>>(), ["a", "b", "c"]);
        assert_eq!(errors.len(), 1);
        assert_eq!(errors[0].document_ref, "2");

        let empty: Vec<(String, String)> = vec![];
        let (r, e) = parse_batch(&empty, &ParserConfig::default());
        assert!(r.is_empty() && e.is_empty());
    }

    #[test]
    fn wrap_with_several_records() {
        let doc = r#"<carareWrap>
            <carare id="a"><heritageAsset><recordInformation><id>HA:1</id></recordInformation></heritageAsset></carare>
            <carare id="b"/>
            <carare id="c"><heritageAsset><recordInformation><id>HA:3</id></recordInformation></heritageAsset></carare>
        </carareWrap>"#;
        let results = parse_document(doc, "w.xml", &ParserConfig::default());
        assert_eq!(results.len(), 3);
        assert_eq!(results[1].as_ref().unwrap_err().document_ref, "w.xml#2");
        assert_eq!(results[2].as_ref().unwrap().record_id, "c");
    }

    #[test]
    fn deterministic() {
        assert_eq!(parse_record(HAPPY, "a").unwrap(), parse_record(HAPPY, "a").unwrap());
    }
}
