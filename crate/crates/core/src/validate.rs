//! Delivery checks on bundles.
//!
//! | code | severity | condition |
//! |---|---|---|
//! | A1 | error | aggregation has no aggregated CHO, or it differs from the CHO uri |
//! | A2 | error | data provider or provider missing |
//! | A3 | error | aggregation rights is not an http(s) URI |
//! | A4 | error | neither isShownBy nor isShownAt |
//! | C1 | error | a CHO or aggregation uri occurs more than once in the batch |
//! | C2 | error | CHO has neither title nor description |
//! | C3 | error | edm:type outside TEXT, IMAGE, SOUND, VIDEO, 3D |
//! | P1 | warning | place coordinates outside WGS84 range or not numeric |
//! | W1 | warning | web resource uri is not an absolute http(s) URL |
//!
//! Errors keep a bundle out of the export; warnings are only reported.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::carare::is_http_url;
use crate::edm::EdmBundle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ViolationCode {
    A1,
    A2,
    A3,
    A4,
    C1,
    C2,
    C3,
    P1,
    W1,
}

impl ViolationCode {
    pub const ALL: [ViolationCode; 9] = [
        ViolationCode::A1,
        ViolationCode::A2,
        ViolationCode::A3,
        ViolationCode::A4,
        ViolationCode::C1,
        ViolationCode::C2,
        ViolationCode::C3,
        ViolationCode::P1,
        ViolationCode::W1,
    ];

    pub fn severity(self) -> Severity {
        match self {
            ViolationCode::P1 | ViolationCode::W1 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

impl fmt::Display for ViolationCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Violation {
    pub bundle_ref: String,
    pub code: ViolationCode,
    pub severity: Severity,
    pub detail: String,
}

impl Violation {
    pub fn new(code: ViolationCode, bundle_ref: impl Into<String>, detail: impl Into<String>) -> Self {
        Violation { bundle_ref: bundle_ref.into(), code, severity: code.severity(), detail: detail.into() }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

pub fn has_errors(violations: &[Violation]) -> bool {
    violations.iter().any(Violation::is_error)
}

pub fn validate_bundle(bundle: &EdmBundle) -> Vec<Violation> {
    use ViolationCode::*;
    let agg = &bundle.aggregation;
    let cho = &bundle.provided_cho;
    let at = agg.uri.as_str();
    let mut out = Vec::new();

    if agg.aggregated_cho.is_empty() {
        out.push(Violation::new(A1, at, "aggregation has no aggregated CHO"));
    } else if agg.aggregated_cho != cho.uri {
        out.push(Violation::new(
            A1,
            at,
            format!("aggregated CHO {:?} differs from CHO uri {:?}", agg.aggregated_cho, cho.uri),
        ));
    }
    for (value, name) in [(&agg.data_provider, "data provider"), (&agg.provider, "provider")] {
        if value.trim().is_empty() {
            out.push(Violation::new(A2, at, format!("missing {name}")));
        }
    }
    if !is_http_url(&agg.rights) {
        out.push(Violation::new(A3, at, format!("rights {:?} is not a license URI", agg.rights)));
    }
    if agg.is_shown_by.is_none() && agg.is_shown_at.is_none() {
        out.push(Violation::new(A4, at, "neither isShownBy nor isShownAt"));
    }
    if cho.titles.is_empty() && cho.descriptions.is_empty() {
        out.push(Violation::new(C2, at, format!("CHO {:?} has no title and no description", cho.uri)));
    }
    if !cho.edm_type.is_standard() {
        out.push(Violation::new(C3, at, format!("edm:type {:?} is not an EDM type", cho.edm_type.as_str())));
    }
    for place in &bundle.places {
        if let Some(c) = &place.coordinates {
            if !c.in_range() {
                out.push(Violation::new(
                    P1,
                    at,
                    format!("place {} at lat {} long {} is outside WGS84 range", place.uri, c.lat, c.long),
                ));
            }
        }
    }
    for wr in &bundle.web_resources {
        if !is_http_url(&wr.uri) || wr.uri.chars().any(char::is_whitespace) {
            out.push(Violation::new(W1, at, format!("web resource {:?} is not an http(s) URL", wr.uri)));
        }
    }
    out
}

/// Counts resource identifiers across a batch to find collisions.
#[derive(Debug, Default, Clone)]
pub struct UriCensus {
    counts: HashMap<String, u32>,
}

impl UriCensus {
    pub fn add(&mut self, bundle: &EdmBundle) {
        self.add_uris(&bundle.provided_cho.uri, &bundle.aggregation.uri);
    }

    pub fn add_uris(&mut self, cho_uri: &str, aggregation_uri: &str) {
        *self.counts.entry(cho_uri.to_string()).or_default() += 1;
        *self.counts.entry(aggregation_uri.to_string()).or_default() += 1;
    }

    pub fn merge(&mut self, other: UriCensus) {
        for (uri, n) in other.counts {
            *self.counts.entry(uri).or_default() += n;
        }
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// A `C1` violation when either of the bundle's identifiers is shared.
    pub fn collision(&self, bundle: &EdmBundle) -> Option<Violation> {
        let count = |uri: &str| self.counts.get(uri).copied().unwrap_or(0);
        let cho = &bundle.provided_cho.uri;
        let agg = &bundle.aggregation.uri;
        let mut shared = Vec::new();
        if count(cho) > 1 {
            shared.push(format!("CHO uri {cho:?}"));
        }
        if agg != cho && count(agg) > 1 {
            shared.push(format!("aggregation uri {agg:?}"));
        }
        (!shared.is_empty())
            .then(|| Violation::new(ViolationCode::C1, agg.as_str(), format!("{} is not unique in the batch", shared.join(" and "))))
    }
}

/// Per-bundle checks plus batch-wide uniqueness, sorted by bundle and code.
pub fn validate_batch(bundles: &[EdmBundle]) -> Vec<Violation> {
    let mut census = UriCensus::default();
    for b in bundles {
        census.add(b);
    }
    let mut out: Vec<Violation> = bundles
        .iter()
        .flat_map(|b| validate_bundle(b).into_iter().chain(census.collision(b)))
        .collect();
    out.sort();
    out
}
