//! CARARE to EDM mapping.
//!
//! Every record yields one bundle for its heritage asset. Each digital resource
//! is either promoted to a provided object of its own, linked back to the asset
//! with `edm:isRepresentationOf`, or kept as a plain web resource of the asset's
//! aggregation. Which one is decided per dataset by [`ScenarioPolicy`].

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carare::{CarareRecord, DigitalResource, HeritageAsset, LangText, RelationKind, SpatialInfo};
use crate::edm::{
    BundleOrigin, EdmAggregation, EdmBundle, EdmPlace, EdmType, EdmWebResource, PropertyValue, ProvidedCho,
};
use crate::mint::{
    mint_aggregation_uri, mint_cho_uri, mint_landing_page_uri, mint_place_uri, ChoUriPolicy, MintConfig, MintError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioPolicy {
    /// Every digital resource becomes a provided object.
    PromoteAll,
    /// Digital resources only ever become web resources of the asset.
    ViewsOnly,
    /// Decide per resource from how richly it is described.
    #[default]
    Auto,
}

/// Where `edm:object` (the preview) comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectPreview {
    #[default]
    None,
    /// Asset bundles use the first linked resource in document order;
    /// promoted resources use their own link.
    FirstDigitalResource,
}

/// Maps a case-insensitive substring of a format or resource type to an edm:type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeRule {
    pub pattern: String,
    pub edm_type: EdmType,
}

impl TypeRule {
    pub fn new(pattern: impl Into<String>, edm_type: EdmType) -> Self {
        TypeRule { pattern: pattern.into(), edm_type }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetProfile {
    pub mint: MintConfig,
    pub data_provider: String,
    pub provider: String,
    pub scenario_policy: ScenarioPolicy,
    pub cho_uri_policy: ChoUriPolicy,
    pub default_edm_rights: String,
    pub default_edm_type: EdmType,
    pub type_map: Vec<TypeRule>,
    pub dedup_enabled: bool,
    pub object_preview: ObjectPreview,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error(transparent)]
    Mint(#[from] MintError),
    #[error("default_edm_type must be one of TEXT, IMAGE, SOUND, VIDEO, 3D")]
    NonStandardType,
}

impl DatasetProfile {
    /// A profile with the documented defaults: provider `CARARE`, automatic
    /// scenario selection, local CHO identifiers, IMAGE as fallback type.
    pub fn new(mint: MintConfig, data_provider: impl Into<String>, default_edm_rights: impl Into<String>) -> Self {
        DatasetProfile {
            mint,
            data_provider: data_provider.into(),
            provider: "CARARE".into(),
            scenario_policy: ScenarioPolicy::Auto,
            cho_uri_policy: ChoUriPolicy::Local,
            default_edm_rights: default_edm_rights.into(),
            default_edm_type: EdmType::Image,
            type_map: Vec::new(),
            dedup_enabled: true,
            object_preview: ObjectPreview::None,
        }
    }

    pub fn check(&self) -> Result<(), ProfileError> {
        self.mint.check()?;
        for (value, name) in [
            (&self.data_provider, "data_provider"),
            (&self.provider, "provider"),
            (&self.default_edm_rights, "default_edm_rights"),
        ] {
            if value.trim().is_empty() {
                return Err(ProfileError::Empty(name));
            }
        }
        if !self.default_edm_type.is_standard() {
            return Err(ProfileError::NonStandardType);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResourceRole {
    RepresentativeCho,
    ViewOnly,
}

pub fn classify_digital_resource(dr: &DigitalResource, profile: &DatasetProfile) -> ResourceRole {
    match profile.scenario_policy {
        ScenarioPolicy::PromoteAll => ResourceRole::RepresentativeCho,
        ScenarioPolicy::ViewsOnly => ResourceRole::ViewOnly,
        ScenarioPolicy::Auto => {
            if !dr.titles.is_empty() && (!dr.creators.is_empty() || !dr.descriptions.is_empty()) {
                ResourceRole::RepresentativeCho
            } else {
                ResourceRole::ViewOnly
            }
        }
    }
}

/// Anything that can carry a media format or resource type.
pub trait TypedEntity {
    fn format(&self) -> Option<&str> {
        None
    }
    fn resource_type(&self) -> Option<&str> {
        None
    }
}

impl TypedEntity for HeritageAsset {}

impl TypedEntity for DigitalResource {
    fn format(&self) -> Option<&str> {
        self.format.as_deref()
    }
    fn resource_type(&self) -> Option<&str> {
        self.resource_type.as_deref()
    }
}

pub fn derive_edm_type(entity: &impl TypedEntity, profile: &DatasetProfile) -> EdmType {
    let haystacks: Vec<String> = [entity.format(), entity.resource_type()]
        .into_iter()
        .flatten()
        .map(str::to_lowercase)
        .collect();
    profile
        .type_map
        .iter()
        .find(|rule| {
            let needle = rule.pattern.to_lowercase();
            haystacks.iter().any(|h| h.contains(&needle))
        })
        .map(|rule| rule.edm_type.clone())
        .unwrap_or_else(|| profile.default_edm_type.clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("digital resource {0} has no link")]
pub struct MissingLink(pub String);

pub fn map_web_resource(dr: &DigitalResource) -> Result<EdmWebResource, MissingLink> {
    let uri = dr.link.clone().ok_or_else(|| MissingLink(dr.local_id.clone()))?;
    let rights_literals = [dr.rights.holder.as_deref(), dr.rights.date.as_deref(), dr.rights.statement_literal()]
        .into_iter()
        .flatten()
        .map(str::to_string)
        .collect();
    Ok(EdmWebResource { uri, rights_literals })
}

pub fn map_place(spatial: &SpatialInfo, record_id: &str) -> Result<EdmPlace, MintError> {
    Ok(EdmPlace {
        uri: mint_place_uri(record_id, &spatial.place_local_id)?,
        coordinates: spatial.coordinates.clone(),
        pref_labels: spatial.labels.clone(),
        notes: spatial.address_note.iter().cloned().collect(),
    })
}

/// Looks up the CHO identifier of a heritage asset elsewhere in the batch.
pub trait HeritageResolver {
    fn cho_uri(&self, heritage_local_id: &str) -> Option<&str>;
}

/// Resolves nothing; every cross-record relation becomes a literal.
pub struct NoResolver;

impl HeritageResolver for NoResolver {
    fn cho_uri(&self, _: &str) -> Option<&str> {
        None
    }
}

impl HeritageResolver for HashMap<String, String> {
    fn cho_uri(&self, id: &str) -> Option<&str> {
        self.get(id).map(String::as_str)
    }
}

impl HeritageResolver for BTreeMap<String, String> {
    fn cho_uri(&self, id: &str) -> Option<&str> {
        self.get(id).map(String::as_str)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum MappingWarning {
    NoDigitalResources { record_id: String },
    MissingLink { record_id: String, local_id: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("record {record_id}: {source}")]
    Mint { record_id: String, source: MintError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct MappedRecord {
    /// The heritage-asset bundle first, then promoted resources in document order.
    pub bundles: Vec<EdmBundle>,
    pub warnings: Vec<MappingWarning>,
}

impl MappedRecord {
    pub fn heritage_bundle(&self) -> &EdmBundle {
        &self.bundles[0]
    }
}

pub fn map_record(record: &CarareRecord, profile: &DatasetProfile) -> Result<MappedRecord, MappingError> {
    map_record_with(record, profile, &NoResolver)
}

/// Like [`map_record`], resolving part/whole relations to other heritage
/// assets through `resolver`. Unresolved targets are kept as literals.
pub fn map_record_with(
    record: &CarareRecord,
    profile: &DatasetProfile,
    resolver: &dyn HeritageResolver,
) -> Result<MappedRecord, MappingError> {
    let mint_err = |source| MappingError::Mint { record_id: record.record_id.clone(), source };
    let rid = record.record_id.as_str();
    let ha = &record.heritage_asset;
    let mut warnings = Vec::new();

    if record.digital_resources.is_empty() {
        warnings.push(MappingWarning::NoDigitalResources { record_id: rid.to_string() });
    }

    let ha_cho_uri = mint_cho_uri(rid, &ha.local_id, profile).map_err(mint_err)?;
    let roles: Vec<ResourceRole> =
        record.digital_resources.iter().map(|dr| classify_digital_resource(dr, profile)).collect();

    let mut dr_cho_uris: HashMap<&str, String> = HashMap::new();
    for (dr, role) in record.digital_resources.iter().zip(&roles) {
        if *role == ResourceRole::RepresentativeCho {
            dr_cho_uris.insert(&dr.local_id, mint_cho_uri(rid, &dr.local_id, profile).map_err(mint_err)?);
        }
    }
    let resolve = |target: &str| -> PropertyValue {
        if target == ha.local_id {
            return PropertyValue::Resource(ha_cho_uri.clone());
        }
        if let Some(uri) = dr_cho_uris.get(target) {
            return PropertyValue::Resource(uri.clone());
        }
        match resolver.cho_uri(target) {
            Some(uri) => PropertyValue::Resource(uri.to_string()),
            None => PropertyValue::Literal(target.to_string()),
        }
    };

    // Heritage asset CHO.
    let mut cho = ProvidedCho::new(ha_cho_uri.clone(), derive_edm_type(ha, profile));
    cho.titles = ha.titles.clone();
    cho.descriptions = ha.descriptions.clone();
    cho.subjects = ha.asset_types.clone();
    if let Some(coll) = &record.collection {
        let label = coll.title.clone().unwrap_or_else(|| coll.local_id.clone());
        cho.is_part_of.push(PropertyValue::Literal(label));
    }
    for rel in &ha.relations {
        match &rel.kind {
            RelationKind::PartOf => cho.is_part_of.push(resolve(&rel.target_local_id)),
            RelationKind::HasPart => cho.has_part.push(resolve(&rel.target_local_id)),
            RelationKind::Other(_) => cho.relations.push(resolve(&rel.target_local_id)),
            RelationKind::RepresentedBy => {}
        }
    }
    let mut places = Vec::with_capacity(ha.spatial.len());
    for sp in &ha.spatial {
        let place = map_place(sp, rid).map_err(mint_err)?;
        cho.spatial_refs.push(place.uri.clone());
        places.push(place);
    }

    let mut views: Vec<EdmWebResource> = Vec::new();
    for (dr, role) in record.digital_resources.iter().zip(&roles) {
        if *role != ResourceRole::ViewOnly {
            continue;
        }
        match map_web_resource(dr) {
            Ok(wr) if views.iter().any(|v| v.uri == wr.uri) => {}
            Ok(wr) => views.push(wr),
            Err(_) => warnings.push(MappingWarning::MissingLink {
                record_id: rid.to_string(),
                local_id: dr.local_id.clone(),
            }),
        }
    }
    let is_shown_by = views.first().map(|v| v.uri.clone());
    let is_shown_at = match is_shown_by {
        Some(_) => None,
        None => Some(mint_landing_page_uri(&profile.mint, rid, &ha.local_id).map_err(mint_err)?),
    };
    let object_preview = match profile.object_preview {
        ObjectPreview::None => None,
        ObjectPreview::FirstDigitalResource => record.digital_resources.iter().find_map(|d| d.link.clone()),
    };
    let ha_rights = ha.rights.statement_uri().unwrap_or(&profile.default_edm_rights).to_string();

    let mut bundles = vec![EdmBundle {
        aggregation: EdmAggregation {
            uri: mint_aggregation_uri(&profile.mint, rid, &ha.local_id).map_err(mint_err)?,
            aggregated_cho: ha_cho_uri.clone(),
            data_provider: profile.data_provider.clone(),
            provider: profile.provider.clone(),
            is_shown_by,
            is_shown_at,
            object_preview,
            rights: ha_rights,
        },
        provided_cho: cho,
        web_resources: views,
        places,
        origin: BundleOrigin::FromHeritageAsset,
        origin_record_id: rid.to_string(),
        origin_local_id: ha.local_id.clone(),
    }];

    // Promoted digital resources.
    for (dr, role) in record.digital_resources.iter().zip(&roles) {
        if *role != ResourceRole::RepresentativeCho {
            continue;
        }
        let cho_uri = dr_cho_uris[dr.local_id.as_str()].clone();
        let mut cho = ProvidedCho::new(cho_uri.clone(), derive_edm_type(dr, profile));
        cho.titles = dr.titles.clone();
        cho.descriptions = dr.descriptions.clone();
        if cho.titles.is_empty() && cho.descriptions.is_empty() {
            cho.titles = fallback_title(ha);
        }
        cho.creators = dr.creators.clone();
        cho.is_representation_of.push(ha_cho_uri.clone());

        let (web_resources, is_shown_by, is_shown_at) = match map_web_resource(dr) {
            Ok(wr) => {
                let link = wr.uri.clone();
                (vec![wr], Some(link), None)
            }
            Err(_) => {
                warnings.push(MappingWarning::MissingLink { record_id: rid.to_string(), local_id: dr.local_id.clone() });
                (vec![], None, Some(mint_landing_page_uri(&profile.mint, rid, &dr.local_id).map_err(mint_err)?))
            }
        };
        let object_preview = match profile.object_preview {
            ObjectPreview::None => None,
            ObjectPreview::FirstDigitalResource => dr.link.clone(),
        };
        let rights = dr
            .rights
            .statement_uri()
            .or_else(|| ha.rights.statement_uri())
            .unwrap_or(&profile.default_edm_rights)
            .to_string();
        bundles.push(EdmBundle {
            aggregation: EdmAggregation {
                uri: mint_aggregation_uri(&profile.mint, rid, &dr.local_id).map_err(mint_err)?,
                aggregated_cho: cho_uri,
                data_provider: profile.data_provider.clone(),
                provider: profile.provider.clone(),
                is_shown_by,
                is_shown_at,
                object_preview,
                rights,
            },
            provided_cho: cho,
            web_resources,
            places: Vec::new(),
            origin: BundleOrigin::FromDigitalResource,
            origin_record_id: rid.to_string(),
            origin_local_id: dr.local_id.clone(),
        });
    }

    Ok(MappedRecord { bundles, warnings })
}

/// A promoted resource with neither title nor description is titled after the
/// asset it depicts.
fn fallback_title(ha: &HeritageAsset) -> Vec<LangText> {
    ha.titles.first().or(ha.descriptions.first()).cloned().into_iter().collect()
}
