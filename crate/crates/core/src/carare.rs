//! In-memory model of a CARARE record.
//!
//! A record wraps exactly one [`HeritageAsset`] (the monument or site) together
//! with the [`DigitalResource`]s that depict it and optional collection and
//! activity descriptions. Values are immutable once the parser hands them out.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// A text value with an optional language tag, kept verbatim from the source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LangText {
    pub text: String,
    pub lang: Option<String>,
}

impl LangText {
    pub fn new(text: impl Into<String>) -> Self {
        LangText { text: text.into(), lang: None }
    }

    pub fn with_lang(text: impl Into<String>, lang: impl Into<String>) -> Self {
        LangText { text: text.into(), lang: Some(lang.into()) }
    }
}

/// A coordinate in decimal degrees, stored as the exact lexical form read from
/// the source document. Range checks work on a parsed copy.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DecimalDegrees(String);

impl DecimalDegrees {
    /// Accepts any string that parses as a finite decimal number.
    pub fn parse(lexical: &str) -> Option<Self> {
        let trimmed = lexical.trim();
        let value: f64 = trimmed.parse().ok()?;
        if !value.is_finite() || trimmed.contains(['e', 'E', 'i', 'I', 'n', 'N']) {
            return None;
        }
        Some(DecimalDegrees(trimmed.to_string()))
    }

    /// Builds a value without checking it is numeric. Used for hand-built
    /// bundles; the validator reports unparseable values.
    pub fn from_lexical(lexical: impl Into<String>) -> Self {
        DecimalDegrees(lexical.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn value(&self) -> Option<f64> {
        self.0.parse().ok()
    }
}

impl fmt::Display for DecimalDegrees {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A WGS84 position. Out-of-range values are kept and flagged downstream.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coordinates {
    pub lat: DecimalDegrees,
    pub long: DecimalDegrees,
}

impl Coordinates {
    pub fn in_range(&self) -> bool {
        match (self.lat.value(), self.long.value()) {
            (Some(lat), Some(long)) => {
                (-90.0..=90.0).contains(&lat) && (-180.0..=180.0).contains(&long)
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RightsInfo {
    pub statement: Option<String>,
    pub holder: Option<String>,
    pub date: Option<String>,
}

impl RightsInfo {
    pub fn is_empty(&self) -> bool {
        self.statement.is_none() && self.holder.is_none() && self.date.is_none()
    }

    /// The statement when it is an HTTP(S) URL, i.e. usable as a license URI.
    pub fn statement_uri(&self) -> Option<&str> {
        self.statement.as_deref().filter(|s| is_http_url(s))
    }

    /// The statement when it is free text rather than a URL.
    pub fn statement_literal(&self) -> Option<&str> {
        self.statement.as_deref().filter(|s| !is_http_url(s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RelationKind {
    PartOf,
    HasPart,
    RepresentedBy,
    Other(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationLink {
    pub kind: RelationKind,
    pub target_local_id: String,
    /// True when the target is not an entity of the same record.
    pub external: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpatialInfo {
    pub place_local_id: String,
    pub coordinates: Option<Coordinates>,
    pub labels: Vec<LangText>,
    pub address_note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeritageAsset {
    pub local_id: String,
    pub titles: Vec<LangText>,
    pub descriptions: Vec<LangText>,
    pub asset_types: Vec<String>,
    pub rights: RightsInfo,
    pub spatial: Vec<SpatialInfo>,
    pub temporal_notes: Vec<String>,
    pub relations: Vec<RelationLink>,
    pub source_attribution: Option<String>,
}

impl HeritageAsset {
    pub fn new(local_id: impl Into<String>) -> Self {
        HeritageAsset {
            local_id: local_id.into(),
            titles: Vec::new(),
            descriptions: Vec::new(),
            asset_types: Vec::new(),
            rights: RightsInfo::default(),
            spatial: Vec::new(),
            temporal_notes: Vec::new(),
            relations: Vec::new(),
            source_attribution: None,
        }
    }

    pub fn is_describable(&self) -> bool {
        !self.titles.is_empty() || !self.descriptions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitalResource {
    pub local_id: String,
    pub link: Option<String>,
    pub titles: Vec<LangText>,
    pub descriptions: Vec<LangText>,
    pub creators: Vec<String>,
    pub format: Option<String>,
    pub resource_type: Option<String>,
    pub rights: RightsInfo,
    /// Local ids of the heritage assets this resource depicts.
    pub represents: Vec<String>,
}

impl DigitalResource {
    pub fn new(local_id: impl Into<String>) -> Self {
        DigitalResource {
            local_id: local_id.into(),
            link: None,
            titles: Vec::new(),
            descriptions: Vec::new(),
            creators: Vec::new(),
            format: None,
            resource_type: None,
            rights: RightsInfo::default(),
            represents: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionInfo {
    pub local_id: String,
    pub title: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActivityInfo {
    pub local_id: String,
    pub title: Option<String>,
    pub description: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CarareRecord {
    pub record_id: String,
    pub heritage_asset: HeritageAsset,
    pub digital_resources: Vec<DigitalResource>,
    pub collection: Option<CollectionInfo>,
    pub activities: Vec<ActivityInfo>,
    /// Notices about source elements that were not carried into the model.
    pub warnings: Vec<String>,
}

impl CarareRecord {
    pub fn new(record_id: impl Into<String>, heritage_asset: HeritageAsset) -> Self {
        CarareRecord {
            record_id: record_id.into(),
            heritage_asset,
            digital_resources: Vec::new(),
            collection: None,
            activities: Vec::new(),
            warnings: Vec::new(),
        }
    }

    /// Recomputes the `external` flag of every heritage-asset relation against
    /// the entities actually present in this record.
    pub fn mark_external_relations(&mut self) {
        let ids: Vec<String> = self.local_ids().map(|(id, _)| id.to_string()).collect();
        for rel in &mut self.heritage_asset.relations {
            rel.external = !ids.contains(&rel.target_local_id);
        }
    }

    fn local_ids(&self) -> impl Iterator<Item = (&str, EntityRef<'_>)> {
        let ha = &self.heritage_asset;
        std::iter::once((ha.local_id.as_str(), EntityRef::HeritageAsset(ha)))
            .chain(ha.spatial.iter().map(|s| (s.place_local_id.as_str(), EntityRef::Place(s))))
            .chain(
                self.digital_resources
                    .iter()
                    .map(|d| (d.local_id.as_str(), EntityRef::DigitalResource(d))),
            )
            .chain(self.collection.iter().map(|c| (c.local_id.as_str(), EntityRef::Collection(c))))
            .chain(self.activities.iter().map(|a| (a.local_id.as_str(), EntityRef::Activity(a))))
    }
}

/// Borrowed reference to one identifiable entity of a record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntityRef<'a> {
    HeritageAsset(&'a HeritageAsset),
    DigitalResource(&'a DigitalResource),
    Place(&'a SpatialInfo),
    Collection(&'a CollectionInfo),
    Activity(&'a ActivityInfo),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IndexError {
    #[error("duplicate local identifier {0:?}")]
    DuplicateLocalId(String),
}

/// Maps every local identifier of a record to the entity carrying it.
pub type EntityIndex<'a> = BTreeMap<&'a str, EntityRef<'a>>;

/// Indexes the record's entities by local id, failing on the first id that is
/// carried by two entities.
pub fn record_entity_index(record: &CarareRecord) -> Result<EntityIndex<'_>, IndexError> {
    let mut index = BTreeMap::new();
    for (id, entity) in record.local_ids() {
        if index.insert(id, entity).is_some() {
            return Err(IndexError::DuplicateLocalId(id.to_string()));
        }
    }
    Ok(index)
}

pub(crate) fn is_http_url(s: &str) -> bool {
    let lower = s.get(..8).map(str::to_ascii_lowercase).unwrap_or_default();
    (lower.starts_with("http://") && s.len() > 7) || (lower.starts_with("https://") && s.len() > 8)
}

/// `scheme://rest` with a syntactically valid scheme and something after it.
pub(crate) fn is_absolute_url(s: &str) -> bool {
    let Some((scheme, rest)) = s.split_once("://") else {
        return false;
    };
    let mut chars = scheme.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || matches!(c, '+' | '-' | '.'))
        && !rest.is_empty()
        && !s.chars().any(char::is_whitespace)
}
