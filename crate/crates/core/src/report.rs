//! Batch report: counts, violations and merge decisions of one run.
//!
//! The machine-readable form is JSON Lines. The first line is the summary
//! (`"type": "summary"`), followed by one line per parse error, record warning,
//! violation, merge and dedup conflict, each tagged with its `type`.

use std::fmt;
use std::io::{self, Write};

use serde::Serialize;
use serde_json::json;

use crate::dedup::{DedupConflict, MergeRecord};
use crate::mapping::MappingWarning;
use crate::parser::ParseError;
use crate::validate::{Severity, Violation};

#[derive(Debug, Clone, Serialize)]
pub struct RecordWarning {
    pub record_id: String,
    pub message: String,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct BatchReport {
    pub records_read: usize,
    pub parse_errors: usize,
    pub bundles_pre_dedup: usize,
    pub duplicates_merged: usize,
    pub bundles_blocked: usize,
    pub bundles_exported: usize,
    pub web_resource_count: usize,
    pub place_count: usize,
    pub missing_links: usize,
    pub violations: Vec<Violation>,
    pub merge_log: Vec<MergeRecord>,
    pub dedup_conflicts: Vec<DedupConflict>,
    pub parse_failures: Vec<ParseError>,
    pub record_warnings: Vec<RecordWarning>,
    pub mapping_warnings: Vec<MappingWarning>,
    pub files_written: usize,
    pub elapsed_ms: u64,
    /// Peak resident memory of the process, when the platform reports it.
    pub peak_rss_kb: Option<u64>,
}

impl BatchReport {
    pub fn error_count(&self) -> usize {
        self.violations.iter().filter(|v| v.severity == Severity::Error).count()
    }

    pub fn warning_count(&self) -> usize {
        self.violations.len() - self.error_count()
    }

    /// 0 when the run saw no parse errors and no error-level violations, else 1.
    pub fn exit_code(&self) -> i32 {
        if self.parse_errors == 0 && self.error_count() == 0 {
            0
        } else {
            1
        }
    }

    /// Accounting identity between the counters.
    pub fn is_consistent(&self) -> bool {
        self.bundles_exported + self.duplicates_merged + self.bundles_blocked == self.bundles_pre_dedup
    }

    pub fn write_jsonl(&self, mut out: impl Write) -> io::Result<()> {
        let summary = json!({
            "type": "summary",
            "records_read": self.records_read,
            "parse_errors": self.parse_errors,
            "bundles_pre_dedup": self.bundles_pre_dedup,
            "duplicates_merged": self.duplicates_merged,
            "bundles_blocked": self.bundles_blocked,
            "bundles_exported": self.bundles_exported,
            "web_resource_count": self.web_resource_count,
            "place_count": self.place_count,
            "missing_links": self.missing_links,
            "violation_errors": self.error_count(),
            "violation_warnings": self.warning_count(),
            "files_written": self.files_written,
            "elapsed_ms": self.elapsed_ms,
            "peak_rss_kb": self.peak_rss_kb,
        });
        writeln!(out, "{summary}")?;
        let tagged = |kind: &str, value: serde_json::Value| {
            let mut v = value;
            if let serde_json::Value::Object(map) = &mut v {
                map.insert("type".into(), kind.into());
            }
            v
        };
        let lines = self
            .parse_failures
            .iter()
            .map(|e| tagged("parse_error", json!(e)))
            .chain(self.record_warnings.iter().map(|w| tagged("record_warning", json!(w))))
            .chain(self.mapping_warnings.iter().map(|w| tagged("mapping_warning", json!(w))))
            .chain(self.violations.iter().map(|v| tagged("violation", json!(v))))
            .chain(self.merge_log.iter().map(|m| tagged("merge", json!(m))))
            .chain(self.dedup_conflicts.iter().map(|c| tagged("dedup_conflict", json!(c))));
        for line in lines {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }
}

impl fmt::Display for BatchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "records read        {}", self.records_read)?;
        writeln!(f, "parse errors        {}", self.parse_errors)?;
        writeln!(f, "bundles (pre-dedup) {}", self.bundles_pre_dedup)?;
        writeln!(f, "duplicates merged   {}", self.duplicates_merged)?;
        writeln!(f, "bundles blocked     {}", self.bundles_blocked)?;
        writeln!(f, "bundles exported    {}", self.bundles_exported)?;
        writeln!(f, "web resources       {}", self.web_resource_count)?;
        writeln!(f, "places              {}", self.place_count)?;
        writeln!(f, "violations          {} errors, {} warnings", self.error_count(), self.warning_count())?;
        write!(f, "elapsed             {} ms", self.elapsed_ms)?;
        if let Some(kb) = self.peak_rss_kb {
            write!(f, "\npeak memory         {kb} kB")?;
        }
        Ok(())
    }
}

/// Peak resident set size of this process (Linux only).
pub fn peak_rss_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}
