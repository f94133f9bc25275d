//! Run configuration file (TOML).
//!
//! ```toml
//! input_dir = "records"            # relative paths resolve against the config file
//! output_dir = "out"
//! layout = "one-file-per-bundle"   # or "single-document"
//! report = "out/report.jsonl"      # optional, default <output_dir>/report.jsonl
//! workers = 4                      # optional, default: all cores
//! carare_namespace = "http://www.carare.eu/carareSchema"   # "" matches any namespace
//!
//! [profile]
//! base_uri = "http://store.carare.eu"
//! version_suffix = 3               # optional
//! data_provider = "National Heritage Institute"
//! provider = "CARARE"              # default
//! scenario_policy = "auto"         # auto | promote-all | views-only
//! cho_uri_policy = "local"         # local | web
//! default_edm_rights = "http://creativecommons.org/licenses/by-sa/3.0/"
//! default_edm_type = "IMAGE"
//! dedup_enabled = true
//! object_preview = "none"          # none | first-digital-resource
//!
//! [[profile.type_map]]
//! pattern = "image"
//! edm_type = "IMAGE"
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::edm::EdmType;
use crate::mapping::{DatasetProfile, ObjectPreview, ProfileError, ScenarioPolicy, TypeRule};
use crate::mint::{ChoUriPolicy, MintConfig};
use crate::parser::{ParserConfig, CARARE_NAMESPACE};
use crate::rdf::Layout;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid configuration: {0}")]
    Syntax(#[from] toml::de::Error),
    #[error("invalid profile: {0}")]
    Profile(#[from] ProfileError),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    input_dir: PathBuf,
    output_dir: PathBuf,
    #[serde(default)]
    layout: Layout,
    report: Option<PathBuf>,
    workers: Option<usize>,
    carare_namespace: Option<String>,
    profile: RawProfile,
}

fn default_provider() -> String {
    "CARARE".into()
}

fn default_true() -> bool {
    true
}

fn default_type() -> EdmType {
    EdmType::Image
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProfile {
    base_uri: String,
    version_suffix: Option<u32>,
    data_provider: String,
    #[serde(default = "default_provider")]
    provider: String,
    #[serde(default)]
    scenario_policy: ScenarioPolicy,
    #[serde(default)]
    cho_uri_policy: ChoUriPolicy,
    default_edm_rights: String,
    #[serde(default = "default_type")]
    default_edm_type: EdmType,
    #[serde(default)]
    type_map: Vec<TypeRule>,
    #[serde(default = "default_true")]
    dedup_enabled: bool,
    #[serde(default)]
    object_preview: ObjectPreview,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub input_dir: PathBuf,
    pub output_dir: PathBuf,
    pub layout: Layout,
    pub report_path: PathBuf,
    pub workers: Option<usize>,
    pub parser: ParserConfig,
    pub profile: DatasetProfile,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses configuration text; relative paths are taken relative to `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(text)?;
        let p = raw.profile;
        let profile = DatasetProfile {
            mint: MintConfig { base_uri: p.base_uri, version_suffix: p.version_suffix },
            data_provider: p.data_provider,
            provider: p.provider,
            scenario_policy: p.scenario_policy,
            cho_uri_policy: p.cho_uri_policy,
            default_edm_rights: p.default_edm_rights,
            default_edm_type: p.default_edm_type,
            type_map: p.type_map,
            dedup_enabled: p.dedup_enabled,
            object_preview: p.object_preview,
        };
        profile.check()?;
        if raw.workers == Some(0) {
            return Err(ConfigError::Invalid("workers must be at least 1".into()));
        }
        if profile.type_map.iter().any(|r| r.pattern.is_empty()) {
            return Err(ConfigError::Invalid("type_map patterns must not be empty".into()));
        }
        let namespace = match raw.carare_namespace {
            None => Some(CARARE_NAMESPACE.to_string()),
            Some(ns) if ns.is_empty() => None,
            Some(ns) => Some(ns),
        };
        let output_dir = base_dir.join(raw.output_dir);
        let report_path = match raw.report {
            Some(p) => base_dir.join(p),
            None => output_dir.join("report.jsonl"),
        };
        Ok(RunConfig {
            input_dir: base_dir.join(raw.input_dir),
            output_dir,
            layout: raw.layout,
            report_path,
            workers: raw.workers,
            parser: ParserConfig { namespace },
            profile,
        })
    }
}
