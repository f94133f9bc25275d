//! Batch-wide merging of provided objects that describe the same cultural
//! object but arrive through several heritage-asset records.
//!
//! Duplicates are recognised by [`DedupKey`]. The surviving bundle for a key is
//! the one with the smallest `(origin_record_id, origin_local_id)`, which makes
//! the result independent of the order in which workers observe bundles.

use std::collections::BTreeSet;

use dashmap::mapref::entry::Entry;
use dashmap::DashMap;
use serde::Serialize;

use crate::carare::LangText;
use crate::edm::{BundleOrigin, EdmBundle};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct DedupKey(String);

impl DedupKey {
    /// Key for a web link: trimmed, scheme and host lowercased, everything
    /// after the host kept as is.
    pub fn from_link(link: &str) -> Self {
        let link = link.trim();
        let Some((scheme, rest)) = link.split_once("://") else {
            return DedupKey(link.to_string());
        };
        let host_end = rest.find(['/', '?', '#']).unwrap_or(rest.len());
        let (host, tail) = rest.split_at(host_end);
        DedupKey(format!("{}://{}{}", scheme.to_ascii_lowercase(), host.to_ascii_lowercase(), tail))
    }

    /// Key for a resource without a link.
    pub fn record_qualified(record_id: &str, local_id: &str) -> Self {
        DedupKey(format!("{}/{}", record_id.trim(), local_id.trim()))
    }

    /// The link shown by the bundle when it has one, otherwise its origin.
    pub fn for_bundle(bundle: &EdmBundle) -> Self {
        match &bundle.aggregation.is_shown_by {
            Some(link) => DedupKey::from_link(link),
            None => DedupKey::record_qualified(&bundle.origin_record_id, &bundle.origin_local_id),
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "decision", rename_all = "snake_case")]
pub enum DedupDecision {
    First { canonical_uri: String },
    Duplicate { canonical_uri: String, dropped_uri: String },
}

/// One dropped bundle, as it appears in the merge log.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct MergeRecord {
    pub key: DedupKey,
    pub canonical_uri: String,
    pub dropped_uri: String,
}

/// Descriptive data that differed between merged bundles. The canonical values
/// are kept.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct DedupConflict {
    pub key: DedupKey,
    pub field: &'static str,
    pub canonical_uri: String,
    pub other_uri: String,
}

#[derive(Debug, Clone)]
struct Member {
    record_id: String,
    local_id: String,
    aggregation_uri: String,
    titles: Vec<LangText>,
    rights: Vec<Vec<String>>,
}

impl Member {
    fn of(bundle: &EdmBundle) -> Self {
        Member {
            record_id: bundle.origin_record_id.clone(),
            local_id: bundle.origin_local_id.clone(),
            aggregation_uri: bundle.aggregation.uri.clone(),
            titles: bundle.provided_cho.titles.clone(),
            rights: bundle.web_resources.iter().map(|w| w.rights_literals.clone()).collect(),
        }
    }

    fn order_key(&self) -> (&str, &str) {
        (&self.record_id, &self.local_id)
    }
}

struct Slot {
    canonical: EdmBundle,
    targets: BTreeSet<String>,
    members: Vec<Member>,
}

/// Concurrent registry of promoted digital-resource bundles.
pub struct DedupRegistry {
    enabled: bool,
    slots: DashMap<DedupKey, Slot>,
}

#[derive(Debug, Clone, Default)]
pub struct Finalized {
    /// Surviving bundles, sorted by origin.
    pub bundles: Vec<EdmBundle>,
    pub merges: Vec<MergeRecord>,
    pub conflicts: Vec<DedupConflict>,
}

impl DedupRegistry {
    pub fn new(enabled: bool) -> Self {
        DedupRegistry { enabled, slots: DashMap::new() }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Records `bundle` under `key`. The returned decision reflects what has
    /// been observed so far; a later bundle with a smaller origin can still take
    /// over as canonical. The final outcome comes from [`finalize`](Self::finalize).
    ///
    /// Heritage-asset bundles must not be passed here.
    pub fn observe(&self, key: DedupKey, bundle: EdmBundle) -> DedupDecision {
        debug_assert_eq!(bundle.origin, BundleOrigin::FromDigitalResource);
        let key = if self.enabled {
            key
        } else {
            // one slot per origin: nothing is ever merged
            DedupKey(format!("\u{0}{}\u{0}{}", bundle.origin_record_id, bundle.origin_local_id))
        };
        match self.slots.entry(key) {
            Entry::Vacant(v) => {
                let canonical_uri = bundle.aggregation.uri.clone();
                let targets = bundle.provided_cho.is_representation_of.iter().cloned().collect();
                v.insert(Slot { members: vec![Member::of(&bundle)], canonical: bundle, targets });
                DedupDecision::First { canonical_uri }
            }
            Entry::Occupied(mut o) => {
                let slot = o.get_mut();
                slot.targets.extend(bundle.provided_cho.is_representation_of.iter().cloned());
                slot.members.push(Member::of(&bundle));
                if bundle.origin_key() < slot.canonical.origin_key() {
                    let canonical_uri = bundle.aggregation.uri.clone();
                    slot.canonical = bundle;
                    DedupDecision::First { canonical_uri }
                } else {
                    DedupDecision::Duplicate {
                        canonical_uri: slot.canonical.aggregation.uri.clone(),
                        dropped_uri: bundle.aggregation.uri,
                    }
                }
            }
        }
    }

    pub fn finalize(self) -> Finalized {
        let mut out = Finalized::default();
        for (key, slot) in self.slots {
            let Slot { mut canonical, targets, mut members } = slot;
            members.sort_by(|a, b| a.order_key().cmp(&b.order_key()));
            let canonical_uri = canonical.aggregation.uri.clone();
            let head = &members[0];
            let head_rights = &head.rights;
            for other in &members[1..] {
                out.merges.push(MergeRecord {
                    key: key.clone(),
                    canonical_uri: canonical_uri.clone(),
                    dropped_uri: other.aggregation_uri.clone(),
                });
                if other.titles != head.titles {
                    out.conflicts.push(DedupConflict {
                        key: key.clone(),
                        field: "title",
                        canonical_uri: canonical_uri.clone(),
                        other_uri: other.aggregation_uri.clone(),
                    });
                }
                if &other.rights != head_rights {
                    out.conflicts.push(DedupConflict {
                        key: key.clone(),
                        field: "rights",
                        canonical_uri: canonical_uri.clone(),
                        other_uri: other.aggregation_uri.clone(),
                    });
                }
            }
            canonical.provided_cho.is_representation_of = targets.into_iter().collect();
            out.bundles.push(canonical);
        }
        out.bundles.sort_by(|a, b| a.origin_key().cmp(&b.origin_key()));
        out.merges.sort();
        out.conflicts.sort();
        out
    }
}
