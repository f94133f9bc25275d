//! Seeded generator of synthetic CARARE corpora.
//!
//! Alongside the XML documents it returns a [`Manifest`] that states, per
//! record, which resources are richly described, which are plain views, and
//! which belong to a sharing group (the same object attached to several
//! heritage assets). Tests derive expected counts from the manifest alone.

use std::fmt::Write as _;

use quick_xml::escape::{escape, partial_escape};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Asset with richly described resources (prints, books, drawings).
    RichResources,
    /// Asset sharing at least one resource with other assets.
    Shared,
    /// Asset documented by plain survey photographs.
    PlainViews,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestResource {
    pub local_id: String,
    pub link: Option<String>,
    /// Has a title and a creator, hence promoted under automatic selection.
    pub rich: bool,
    pub shared_group: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestRecord {
    pub record_id: String,
    pub heritage_local_id: String,
    pub scenario: Scenario,
    pub resources: Vec<ManifestResource>,
    pub places: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub records: Vec<ManifestRecord>,
    /// Names of documents that are deliberately not well-formed.
    pub malformed_documents: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub records: usize,
    /// Number of sharing groups; each spans 2..=max_share records.
    pub shared_groups: usize,
    pub max_share: usize,
    /// Records per document; 1 writes a bare `carare` root.
    pub records_per_document: usize,
    pub malformed_documents: usize,
    /// Probability that a resource has no link.
    pub missing_link_rate: f64,
    /// Only plain-view records: no promoted resources, no sharing.
    pub plain_views_only: bool,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        CorpusSpec {
            seed: 7,
            records: 50,
            shared_groups: 4,
            max_share: 4,
            records_per_document: 1,
            malformed_documents: 0,
            missing_link_rate: 0.0,
            plain_views_only: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub documents: Vec<(String, String)>,
    pub manifest: Manifest,
}

pub fn generate(spec: &CorpusSpec) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.records;
    let mut records: Vec<ManifestRecord> = (0..n)
        .map(|i| {
            let scenario = match rng.gen_range(0..3) {
                _ if spec.plain_views_only => Scenario::PlainViews,
                0 => Scenario::RichResources,
                _ if rng.gen_bool(0.5) => Scenario::PlainViews,
                _ => Scenario::RichResources,
            };
            ManifestRecord {
                record_id: format!("iid:{}", 1_000_000 + i),
                heritage_local_id: format!("HA:{}", 5000 + i),
                scenario,
                resources: Vec::new(),
                places: rng.gen_range(0..3),
            }
        })
        .collect();

    // Sharing groups pick distinct records; a record may be in several groups.
    if n >= 2 && spec.max_share >= 2 && !spec.plain_views_only {
        let mut order: Vec<usize> = (0..n).collect();
        for g in 0..spec.shared_groups {
            order.shuffle(&mut rng);
            let k = rng.gen_range(2..=spec.max_share.min(n));
            let link = shared_link(g, &mut rng);
            for &r in &order[..k] {
                records[r].scenario = Scenario::Shared;
                records[r].resources.push(ManifestResource {
                    local_id: format!("DR:shared/{g}"),
                    link: Some(link.clone()),
                    rich: true,
                    shared_group: Some(g),
                });
            }
        }
    }

    for (i, rec) in records.iter_mut().enumerate() {
        let (rich, plain) = match rec.scenario {
            Scenario::RichResources => (rng.gen_range(1..=3), rng.gen_range(0..=2)),
            Scenario::Shared => (rng.gen_range(0..=1), rng.gen_range(0..=2)),
            Scenario::PlainViews => (0, rng.gen_range(1..=6)),
        };
        let mut own = Vec::new();
        for j in 0..rich + plain {
            let link = (!rng.gen_bool(spec.missing_link_rate)).then(|| format!("http://media.example.org/{i}/{j}.jpg"));
            own.push(ManifestResource { local_id: format!("DR:{i}/{j}"), link, rich: j < rich, shared_group: None });
        }
        own.shuffle(&mut rng);
        // shared resources go in at random positions to vary document order
        for r in own {
            let pos = rng.gen_range(0..=rec.resources.len());
            rec.resources.insert(pos, r);
        }
    }

    let mut documents = Vec::new();
    let per_doc = spec.records_per_document.max(1);
    for (d, chunk) in records.chunks(per_doc).enumerate() {
        let mut xml = String::from("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        if per_doc == 1 {
            write_record(&mut xml, &chunk[0], true, d, &records);
        } else {
            xml.push_str("<carareWrap xmlns=\"http://www.carare.eu/carareSchema\">\n");
            for rec in chunk {
                write_record(&mut xml, rec, false, d, &records);
            }
            xml.push_str("</carareWrap>\n");
        }
        documents.push((format!("doc-{d:06}.xml"), xml));
    }

    let mut malformed = Vec::new();
    for m in 0..spec.malformed_documents {
        let name = format!("doc-{:06}-broken.xml", m * per_doc);
        documents.push((name.clone(), format!("<carare id=\"broken{m}\"><heritageAsset>")));
        malformed.push(name);
    }
    documents.sort_by(|a, b| a.0.cmp(&b.0));

    Corpus { documents, manifest: Manifest { records, malformed_documents: malformed } }
}

fn shared_link(group: usize, rng: &mut ChaCha8Rng) -> String {
    // host case varies between groups; keys lowercase it
    let host = if rng.gen_bool(0.5) { "Archive.Example.ORG" } else { "archive.example.org" };
    format!("http://{host}/Objects/{group}.pdf")
}

fn write_record(xml: &mut String, rec: &ManifestRecord, root: bool, doc: usize, all: &[ManifestRecord]) {
    let ns = if root { " xmlns=\"http://www.carare.eu/carareSchema\"" } else { "" };
    let _ = writeln!(xml, "<carare{ns} id=\"{}\">", escape(&rec.record_id));
    let _ = writeln!(xml, "  <heritageAsset>");
    let _ = writeln!(xml, "    <recordInformation><id>{}</id></recordInformation>", escape(&rec.heritage_local_id));
    let _ = writeln!(xml, "    <appellation><name lang=\"en\">Monument {}</name></appellation>", escape(&rec.heritage_local_id));
    if rec.scenario == Scenario::PlainViews {
        let _ = writeln!(xml, "    <description lang=\"en\">Survey report for {}</description>", escape(&rec.heritage_local_id));
    }
    let _ = writeln!(xml, "    <generalType>building</generalType>");
    for p in 1..=rec.places {
        let lat = 45.0 + (doc % 90) as f64 / 10.0 + p as f64 / 1000.0;
        let _ = writeln!(
            xml,
            "    <spatial id=\"SP.{p}\"><geometry><lat>{lat:.8}</lat><long>{:.8}</long></geometry>\
             <locationSet><namedLocation lang=\"cz\">Místo {p}</namedLocation></locationSet></spatial>",
            14.0 + p as f64 / 7.0
        );
    }
    // every fifth record is part of the first record's asset
    if doc % 5 == 4 {
        if let Some(first) = all.first() {
            let _ = writeln!(xml, "    <relations><isPartOf>{}</isPartOf></relations>", escape(&first.heritage_local_id));
        }
    }
    let _ = writeln!(xml, "  </heritageAsset>");
    for r in &rec.resources {
        let _ = writeln!(xml, "  <digitalResource>");
        let _ = writeln!(xml, "    <recordInformation><id>{}</id></recordInformation>", escape(&r.local_id));
        if r.rich {
            let _ = writeln!(xml, "    <appellation><name>Engraving of {}</name></appellation>", partial_escape(&r.local_id));
            let _ = writeln!(xml, "    <creator>William Gell</creator>");
        }
        if let Some(link) = &r.link {
            let _ = writeln!(xml, "    <link>{}</link>", partial_escape(link));
        }
        let _ = writeln!(xml, "    <format>{}</format>", if r.rich { "application/pdf" } else { "image/jpeg" });
        let _ = writeln!(xml, "    <rights><holder>Archive</holder><date>2011-01-01</date></rights>");
        let _ = writeln!(xml, "    <isRepresentationOf>{}</isRepresentationOf>", escape(&rec.heritage_local_id));
        let _ = writeln!(xml, "  </digitalResource>");
    }
    let _ = writeln!(xml, "</carare>");
}
