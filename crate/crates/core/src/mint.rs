//! Output identifiers built from provider-local identifiers.
//!
//! Identifiers are concatenated verbatim. Local ids that contain `/` or whole
//! URLs are embedded as-is, so two different (record, entity) pairs can in rare
//! cases produce the same URI; batch validation reports those as `C1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::carare::is_http_url;
use crate::mapping::DatasetProfile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MintError {
    #[error("empty {0} identifier")]
    EmptyIdentifier(&'static str),
    #[error("base uri {0:?} must be an absolute http(s) URL without a trailing slash")]
    InvalidBaseUri(String),
    #[error("version suffix must be a positive integer")]
    InvalidVersion,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MintConfig {
    pub base_uri: String,
    #[serde(default)]
    pub version_suffix: Option<u32>,
}

impl MintConfig {
    pub fn new(base_uri: impl Into<String>, version_suffix: Option<u32>) -> Result<Self, MintError> {
        let cfg = MintConfig { base_uri: base_uri.into(), version_suffix };
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), MintError> {
        if !is_http_url(&self.base_uri) || self.base_uri.ends_with('/') {
            return Err(MintError::InvalidBaseUri(self.base_uri.clone()));
        }
        if self.version_suffix == Some(0) {
            return Err(MintError::InvalidVersion);
        }
        Ok(())
    }
}

/// How ProvidedCHO identifiers are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChoUriPolicy {
    /// The entity's local identifier, unchanged.
    #[default]
    Local,
    /// The landing-page URL of the entity.
    Web,
}

fn non_empty(value: &str, what: &'static str) -> Result<(), MintError> {
    if value.is_empty() {
        Err(MintError::EmptyIdentifier(what))
    } else {
        Ok(())
    }
}

/// `{base}/uid/{record}/{entity}` plus `.{version}` when configured.
pub fn mint_aggregation_uri(cfg: &MintConfig, record_id: &str, entity_local_id: &str) -> Result<String, MintError> {
    non_empty(record_id, "record")?;
    non_empty(entity_local_id, "entity")?;
    let mut uri = format!("{}/uid/{record_id}/{entity_local_id}", cfg.base_uri);
    if let Some(v) = cfg.version_suffix {
        uri.push('.');
        uri.push_str(&v.to_string());
    }
    Ok(uri)
}

pub fn mint_landing_page_uri(cfg: &MintConfig, record_id: &str, entity_local_id: &str) -> Result<String, MintError> {
    non_empty(record_id, "record")?;
    non_empty(entity_local_id, "entity")?;
    Ok(format!("{}/landing-page-ha.php?id={record_id}&eid={entity_local_id}", cfg.base_uri))
}

pub fn mint_cho_uri(record_id: &str, entity_local_id: &str, profile: &DatasetProfile) -> Result<String, MintError> {
    non_empty(entity_local_id, "entity")?;
    match profile.cho_uri_policy {
        ChoUriPolicy::Local => Ok(entity_local_id.to_string()),
        ChoUriPolicy::Web => mint_landing_page_uri(&profile.mint, record_id, entity_local_id),
    }
}

/// `{record}/{place}`, the identifier of an `edm:Place`.
pub fn mint_place_uri(record_id: &str, place_local_id: &str) -> Result<String, MintError> {
    non_empty(record_id, "record")?;
    non_empty(place_local_id, "place")?;
    Ok(format!("{record_id}/{place_local_id}"))
}
