//! Verification harness: the item catalog, suite configuration, parallel
//! orchestration, and machine-readable reporting.

mod items;

pub use items::{catalog, CatalogEntry};

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::elliptic::Fault;
use crate::{Error, Result};

/// Suite configuration. Defaults come from the `desk` profile; the
/// `nightly` profile raises the point count, depth, and order.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: u8,
    pub depth: usize,
    pub alpha_max: u32,
    pub order: usize,
    /// Requested item names; empty means the full catalog.
    pub suites: Vec<String>,
    pub strict: bool,
    pub jobs: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<String>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n: 3,
            depth: 6,
            alpha_max: 3,
            order: 8,
            suites: Vec::new(),
            strict: false,
            jobs: 0,
            fault: None,
        }
    }
}

impl SuiteConfig {
    pub fn desk() -> Self {
        SuiteConfig::default()
    }

    pub fn nightly() -> Self {
        SuiteConfig {
            n: 4,
            depth: 7,
            order: 10,
            ..SuiteConfig::default()
        }
    }

    pub fn from_profile(profile: &str) -> Result<Self> {
        match profile {
            "desk" => Ok(SuiteConfig::desk()),
            "nightly" => Ok(SuiteConfig::nightly()),
            other => Err(Error::InvalidConfig(format!("unknown profile {other:?}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 || self.depth < 2 || self.order < 4 {
            return Err(Error::InvalidConfig(
                "need n >= 2, depth >= 2, order >= 4".into(),
            ));
        }
        Ok(())
    }

    pub fn fault_enum(&self) -> Result<Option<Fault>> {
        match self.fault.as_deref() {
            None => Ok(None),
            Some("wp-a2-denominator") => Ok(Some(Fault::WpA2Denominator)),
            Some("fay-third-term-sign") => Ok(Some(Fault::FayThirdTermSign)),
            Some("sigma-binomial") => Ok(Some(Fault::SigmaBinomial)),
            Some(other) => Err(Error::InvalidConfig(format!("unknown fault {other:?}"))),
        }
    }
}

pub const FAULT_NAMES: &[&str] = &[
    "wp-a2-denominator",
    "fay-third-term-sign",
    "sigma-binomial",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ItemResult {
    pub name: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certified_order: Option<i64>,
    pub duration_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub flags: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub data: Option<serde_json::Value>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub items: Vec<ItemResult>,
    pub summary: Summary,
}

impl Report {
    pub fn any_failed(&self) -> bool {
        self.summary.failed > 0
    }

    pub fn any_inconclusive(&self) -> bool {
        self.summary.inconclusive > 0
    }

    /// Exit status under the configured strictness: 0 all-pass, 1 any fail
    /// (inconclusive counts as failure only under --strict).
    pub fn exit_code(&self) -> i32 {
        if self.any_failed() || (self.config.strict && self.any_inconclusive()) {
            1
        } else {
            0
        }
    }
}

/// The outcome a runner produces before timing is attached.
pub struct Outcome {
    pub status: Status,
    pub certified_order: Option<i64>,
    pub counterexample: Option<String>,
    pub flags: Vec<String>,
    pub data: Option<serde_json::Value>,
}

impl Outcome {
    pub fn pass() -> Self {
        Outcome {
            status: Status::Pass,
            certified_order: None,
            counterexample: None,
            flags: Vec::new(),
            data: None,
        }
    }

    pub fn pass_order(order: i64) -> Self {
        Outcome {
            certified_order: Some(order),
            ..Outcome::pass()
        }
    }

    pub fn from_error(e: Error) -> Self {
        match e {
            Error::Inconclusive { certified } => Outcome {
                status: Status::Inconclusive,
                certified_order: Some(certified),
                counterexample: Some("certified order is not positive".into()),
                flags: Vec::new(),
                data: None,
            },
            other => Outcome {
                status: Status::Fail,
                certified_order: None,
                counterexample: Some(other.to_string()),
                flags: Vec::new(),
                data: None,
            },
        }
    }
}

/// Execute the requested items and assemble a deterministic report
/// (items ordered by name; durations are the only non-reproducible field).
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    cfg.validate()?;
    cfg.fault_enum()?;
    let catalog = catalog();
    let all = cfg.suites.is_empty() || cfg.suites.iter().any(|s| s == "all");
    let selected: Vec<&CatalogEntry> = if all {
        catalog.iter().collect()
    } else {
        let mut sel = Vec::new();
        for name in &cfg.suites {
            let entry = catalog
                .iter()
                .find(|e| e.name == name)
                .ok_or_else(|| Error::UnknownItem(name.clone()))?;
            sel.push(entry);
        }
        sel
    };
    let run_one = |entry: &&CatalogEntry| -> ItemResult {
        let start = Instant::now();
        let outcome = (entry.runner)(cfg).unwrap_or_else(Outcome::from_error);
        let duration_ms = start.elapsed().as_millis();
        ItemResult {
            name: entry.name.to_string(),
            params: (entry.params)(cfg),
            status: outcome.status,
            certified_order: outcome.certified_order,
            duration_ms,
            counterexample: outcome.counterexample,
            flags: outcome.flags,
            data: outcome.data,
        }
    };
    let mut items: Vec<ItemResult> = if cfg.jobs == 1 {
        selected.iter().map(run_one).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.jobs)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;
        pool.install(|| {
            use rayon::prelude::*;
            selected.par_iter().map(run_one).collect()
        })
    };
    items.sort_by(|a, b| a.name.cmp(&b.name));
    let summary = Summary {
        total: items.len(),
        passed: items.iter().filter(|i| i.status == Status::Pass).count(),
        failed: items.iter().filter(|i| i.status == Status::Fail).count(),
        inconclusive: items
            .iter()
            .filter(|i| i.status == Status::Inconclusive)
            .count(),
    };
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        items,
        summary,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "markdown" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidConfig(format!("unknown format {other:?}"))),
        }
    }
}

/// Render a report as a JSON document or a markdown table.
pub fn emit_report(report: &Report, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        ReportFormat::Markdown => {
            let mut out = String::new();
            out.push_str("# Verification report\n\n");
            out.push_str(&format!(
                "config: n={}, depth={}, alpha_max={}, order={}\n\n",
                report.config.n, report.config.depth, report.config.alpha_max, report.config.order
            ));
            out.push_str("| item | check | status | certified order | duration (ms) | flags |\n");
            out.push_str("|------|-------|--------|-----------------|---------------|-------|\n");
            let cat = catalog();
            for item in &report.items {
                let desc = cat
                    .iter()
                    .find(|e| e.name == item.name)
                    .map(|e| e.description)
                    .unwrap_or("");
                let status = match item.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Inconclusive => "inconclusive",
                };
                out.push_str(&format!(
                    "| {} | {} | {} | {} | {} | {} |\n",
                    item.name,
                    desc,
                    status,
                    item.certified_order
                        .map(|o| o.to_string())
                        .unwrap_or_else(|| "-".into()),
                    item.duration_ms,
                    if item.flags.is_empty() {
                        "-".to_string()
                    } else {
                        item.flags.join("; ")
                    }
                ));
            }
            out.push_str(&format!(
                "\ntotal {} / passed {} / failed {} / inconclusive {}\n",
                report.summary.total,
                report.summary.passed,
                report.summary.failed,
                report.summary.inconclusive
            ));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_renders_with_zero_totals() {
        let report = Report {
            version: "0".into(),
            config: SuiteConfig::default(),
            items: Vec::new(),
            summary: Summary {
                total: 0,
                passed: 0,
                failed: 0,
                inconclusive: 0,
            },
        };
        let md = emit_report(&report, ReportFormat::Markdown);
        assert!(md.contains("total 0 / passed 0 / failed 0 / inconclusive 0"));
        let json = emit_report(&report, ReportFormat::Json);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back.summary.total, 0);
        assert!(back.items.is_empty());
    }

    #[test]
    fn unknown_item_is_a_usage_error() {
        let cfg = SuiteConfig {
            suites: vec!["nonsense".into()],
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite(&cfg), Err(Error::UnknownItem(_))));
    }

    #[test]
    fn empty_selection_runs_everything() {
        // smoke config: tiny parameters, two cheap items
        let cfg = SuiteConfig {
            n: 2,
            depth: 4,
            alpha_max: 1,
            order: 8,
            suites: vec!["weierstrass-ode".into(), "mu-f-alpha".into()],
            strict: false,
            jobs: 1,
            fault: None,
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.summary.total, 2);
        assert_eq!(report.summary.passed, 2);
        assert_eq!(report.exit_code(), 0);
    }

    #[test]
    fn report_round_trip() {
        let cfg = SuiteConfig {
            suites: vec!["weierstrass-ode".into()],
            order: 10,
            ..SuiteConfig::default()
        };
        let report = run_suite(&cfg).unwrap();
        let json = emit_report(&report, ReportFormat::Json);
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(report, back);
        // markdown contains the table row
        let md = emit_report(&report, ReportFormat::Markdown);
        assert!(md.contains("weierstrass-ode"));
    }

    #[test]
    fn determinism_modulo_durations() {
        let cfg = SuiteConfig {
            suites: vec!["weierstrass-ode".into(), "interm".into()],
            order: 9,
            alpha_max: 2,
            jobs: 2,
            ..SuiteConfig::default()
        };
        let strip = |mut r: Report| {
            for item in &mut r.items {
                item.duration_ms = 0;
            }
            serde_json::to_string(&r).unwrap()
        };
        let a = strip(run_suite(&cfg).unwrap());
        let b = strip(run_suite(&cfg).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn fault_injection_fails_the_targeted_item() {
        let cfg = SuiteConfig {
            suites: vec!["weierstrass-ode".into()],
            fault: Some("wp-a2-denominator".into()),
            order: 10,
            ..SuiteConfig::default()
        };
        let report = run_suite(&cfg).unwrap();
        assert_eq!(report.summary.failed, 1);
        assert_eq!(report.exit_code(), 1);
        assert!(report.items[0].counterexample.is_some());
    }
}
