//! EDM output resources and the bundle that groups them for one provided object.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::carare::{Coordinates, LangText};

/// `edm:type` values.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdmType {
    Text,
    Image,
    Sound,
    Video,
    ThreeD,
    /// A value outside the EDM vocabulary; flagged by the validator.
    Other(String),
}

impl EdmType {
    pub fn as_str(&self) -> &str {
        match self {
            EdmType::Text => "TEXT",
            EdmType::Image => "IMAGE",
            EdmType::Sound => "SOUND",
            EdmType::Video => "VIDEO",
            EdmType::ThreeD => "3D",
            EdmType::Other(s) => s,
        }
    }

    pub fn is_standard(&self) -> bool {
        !matches!(self, EdmType::Other(_))
    }
}

impl fmt::Display for EdmType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EdmType {
    type Err = String;

    /// Accepts the EDM values (`3D` and `THREE_D` both name the 3D type),
    /// case-insensitively. Anything else is an error.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TEXT" => Ok(EdmType::Text),
            "IMAGE" => Ok(EdmType::Image),
            "SOUND" => Ok(EdmType::Sound),
            "VIDEO" => Ok(EdmType::Video),
            "3D" | "THREE_D" => Ok(EdmType::ThreeD),
            _ => Err(format!("unknown edm:type {s:?}; expected TEXT, IMAGE, SOUND, VIDEO or 3D")),
        }
    }
}

impl Serialize for EdmType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for EdmType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Object of a property that is either another resource or a plain literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropertyValue {
    Resource(String),
    Literal(String),
}

/// The cultural object itself. Holds only descriptive data about the object;
/// provider and licensing data live on [`EdmAggregation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProvidedCho {
    pub uri: String,
    pub titles: Vec<LangText>,
    pub descriptions: Vec<LangText>,
    pub creators: Vec<String>,
    pub subjects: Vec<String>,
    pub edm_type: EdmType,
    pub is_representation_of: Vec<String>,
    pub spatial_refs: Vec<String>,
    pub is_part_of: Vec<PropertyValue>,
    pub has_part: Vec<PropertyValue>,
    pub relations: Vec<PropertyValue>,
}

impl ProvidedCho {
    pub fn new(uri: impl Into<String>, edm_type: EdmType) -> Self {
        ProvidedCho {
            uri: uri.into(),
            titles: Vec::new(),
            descriptions: Vec::new(),
            creators: Vec::new(),
            subjects: Vec::new(),
            edm_type,
            is_representation_of: Vec::new(),
            spatial_refs: Vec::new(),
            is_part_of: Vec::new(),
            has_part: Vec::new(),
            relations: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdmWebResource {
    pub uri: String,
    /// `dc:rights` literals in output order.
    pub rights_literals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdmAggregation {
    pub uri: String,
    pub aggregated_cho: String,
    pub data_provider: String,
    pub provider: String,
    pub is_shown_by: Option<String>,
    pub is_shown_at: Option<String>,
    pub object_preview: Option<String>,
    pub rights: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdmPlace {
    pub uri: String,
    pub coordinates: Option<Coordinates>,
    pub pref_labels: Vec<LangText>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum BundleOrigin {
    FromHeritageAsset,
    FromDigitalResource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdmBundle {
    pub provided_cho: ProvidedCho,
    pub aggregation: EdmAggregation,
    pub web_resources: Vec<EdmWebResource>,
    pub places: Vec<EdmPlace>,
    pub origin: BundleOrigin,
    pub origin_record_id: String,
    pub origin_local_id: String,
}

impl EdmBundle {
    /// Ordering key used wherever bundles need a reproducible order.
    pub fn origin_key(&self) -> (&str, &str) {
        (&self.origin_record_id, &self.origin_local_id)
    }
}

/// A broken structural invariant of a bundle. Bundles with any of these cannot
/// be serialized.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvariantViolation {
    EmptyChoUri,
    AggregatedChoMismatch { aggregated_cho: String, cho_uri: String },
    ShownByNotAWebResource(String),
    DanglingSpatialRef(String),
}

impl fmt::Display for InvariantViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvariantViolation::EmptyChoUri => write!(f, "provided CHO has an empty uri"),
            InvariantViolation::AggregatedChoMismatch { aggregated_cho, cho_uri } => {
                write!(f, "aggregation points at {aggregated_cho:?} but the CHO is {cho_uri:?}")
            }
            InvariantViolation::ShownByNotAWebResource(uri) => {
                write!(f, "isShownBy {uri:?} has no matching web resource")
            }
            InvariantViolation::DanglingSpatialRef(uri) => {
                write!(f, "spatial reference {uri:?} has no matching place")
            }
        }
    }
}

pub fn bundle_check(bundle: &EdmBundle) -> Vec<InvariantViolation> {
    let mut out = Vec::new();
    let cho = &bundle.provided_cho;
    if cho.uri.is_empty() {
        out.push(InvariantViolation::EmptyChoUri);
    }
    if bundle.aggregation.aggregated_cho != cho.uri {
        out.push(InvariantViolation::AggregatedChoMismatch {
            aggregated_cho: bundle.aggregation.aggregated_cho.clone(),
            cho_uri: cho.uri.clone(),
        });
    }
    if let Some(shown_by) = &bundle.aggregation.is_shown_by {
        if !bundle.web_resources.iter().any(|w| &w.uri == shown_by) {
            out.push(InvariantViolation::ShownByNotAWebResource(shown_by.clone()));
        }
    }
    for place_ref in &cho.spatial_refs {
        if !bundle.places.iter().any(|p| &p.uri == place_ref) {
            out.push(InvariantViolation::DanglingSpatialRef(place_ref.clone()));
        }
    }
    out
}
