//! Run the verifier over a labeled fixture corpus and score it.
//!
//! A corpus is a directory of `*.ctx` files, each with a `*.labels.json`
//! sidecar:
//!
//! ```json
//! { "expected_status": "has_invalid", "first_error_step": 2 }
//! ```
//!
//! Fixtures that fail to load are skipped with a warning and counted, never
//! fatal. The summary JSON is deterministic for a fixed corpus and seed;
//! under `--mock` the latency field is forced to zero so consecutive runs
//! are byte-identical.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use mathstep_core::parse_context;
use mathstep_critic::Overall;

use crate::config::{build_critic, Settings};
use crate::error::CliError;
use crate::io::emit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExpectedStatus {
    AllValid,
    HasInvalid,
    /// Deliberately hard fixtures where honest abstention is the right call.
    Inconclusive,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Labels {
    pub expected_status: ExpectedStatus,
    #[serde(default)]
    pub first_error_step: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureOutcome {
    pub name: String,
    pub expected: ExpectedStatus,
    pub got: String,
    pub first_error_expected: Option<usize>,
    pub first_error_got: Option<usize>,
    /// Status matches and, for seeded errors, the first failing step does too.
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchSummary {
    /// Fixtures verified (excludes skipped ones).
    pub fixtures: usize,
    /// Labeled correct (expected all-valid or inconclusive).
    pub correct_fixtures: usize,
    /// Labeled with a seeded error.
    pub seeded_fixtures: usize,
    pub skipped: usize,
    /// Seeded fixtures flagged invalid / seeded fixtures.
    pub detection_rate: f64,
    /// Correct fixtures flagged invalid / correct fixtures.
    pub false_alarm_rate: f64,
    /// Seeded fixtures whose first failing step matches the label / seeded fixtures.
    pub first_error_accuracy: f64,
    pub mean_latency_ms: f64,
    /// Total submitted-statement cost if every step cited everything before it.
    pub dense_cost_total: u64,
    /// Total cost actually incurred from explicit premise lists.
    pub sparse_cost_total: u64,
    /// sparse / dense; below 1 whenever explicit premises save work.
    pub savings_ratio: f64,
    pub results: Vec<FixtureOutcome>,
}

fn ratio(numerator: usize, denominator: usize, when_empty: f64) -> f64 {
    if denominator == 0 {
        when_empty
    } else {
        numerator as f64 / denominator as f64
    }
}

pub fn run(settings: &Settings, corpus: &Path) -> Result<i32, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(corpus)
        .map_err(|e| CliError::Input(format!("cannot read corpus {}: {e}", corpus.display())))?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|path| path.extension().is_some_and(|ext| ext == "ctx"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(CliError::Input(format!(
            "no .ctx fixtures in {}",
            corpus.display()
        )));
    }

    let critic = build_critic(settings)?;
    let mut results: Vec<FixtureOutcome> = Vec::new();
    let mut skipped = 0usize;
    let mut total_latency_ms = 0.0f64;
    let mut dense_total = 0u64;
    let mut sparse_total = 0u64;

    for path in &paths {
        let name = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let loaded = load_fixture(path);
        let (ctx, labels) = match loaded {
            Ok(pair) => pair,
            Err(why) => {
                eprintln!("warning: skipping {name}: {why}");
                skipped += 1;
                continue;
            }
        };
        let started = Instant::now();
        let report = match critic.verify_context(&ctx) {
            Ok(report) => report,
            Err(e) => {
                eprintln!("warning: skipping {name}: {e}");
                skipped += 1;
                continue;
            }
        };
        total_latency_ms += started.elapsed().as_secs_f64() * 1000.0;
        dense_total += report.cost.dense_cost;
        sparse_total += report.cost.sparse_cost;

        let (got, first_error_got) = match &report.overall {
            Overall::AllValid => ("all_valid".to_string(), None),
            Overall::HasInvalid { first_failing_id } => {
                ("has_invalid".to_string(), Some(*first_failing_id))
            }
            Overall::Inconclusive => ("inconclusive".to_string(), None),
        };
        let agrees = match labels.expected_status {
            ExpectedStatus::AllValid => got == "all_valid",
            ExpectedStatus::Inconclusive => got == "inconclusive",
            ExpectedStatus::HasInvalid => {
                got == "has_invalid" && first_error_got == labels.first_error_step
            }
        };
        results.push(FixtureOutcome {
            name,
            expected: labels.expected_status,
            got,
            first_error_expected: labels.first_error_step,
            first_error_got,
            agrees,
        });
    }

    if results.is_empty() {
        return Err(CliError::Input(format!(
            "no usable fixtures in {} ({skipped} skipped)",
            corpus.display()
        )));
    }

    let seeded: Vec<&FixtureOutcome> = results
        .iter()
        .filter(|r| r.expected == ExpectedStatus::HasInvalid)
        .collect();
    let correct: Vec<&FixtureOutcome> = results
        .iter()
        .filter(|r| r.expected != ExpectedStatus::HasInvalid)
        .collect();
    let detected = seeded.iter().filter(|r| r.got == "has_invalid").count();
    let located = seeded
        .iter()
        .filter(|r| r.got == "has_invalid" && r.first_error_got == r.first_error_expected)
        .count();
    let false_alarms = correct.iter().filter(|r| r.got == "has_invalid").count();

    let summary = BenchSummary {
        fixtures: results.len(),
        correct_fixtures: correct.len(),
        seeded_fixtures: seeded.len(),
        skipped,
        detection_rate: ratio(detected, seeded.len(), 1.0),
        false_alarm_rate: ratio(false_alarms, correct.len(), 0.0),
        first_error_accuracy: ratio(located, seeded.len(), 1.0),
        // timing is the one nondeterministic field; mock runs zero it
        mean_latency_ms: if settings.mock {
            0.0
        } else {
            total_latency_ms / results.len() as f64
        },
        dense_cost_total: dense_total,
        sparse_cost_total: sparse_total,
        savings_ratio: if dense_total == 0 {
            0.0
        } else {
            sparse_total as f64 / dense_total as f64
        },
        results,
    };

    print_table(&summary);
    let mut json = serde_json::to_string_pretty(&summary)
        .map_err(|e| CliError::Config(format!("cannot encode summary: {e}")))?;
    json.push('\n');
    emit(settings.report_out.as_deref(), &json)?;
    Ok(0)
}

fn load_fixture(path: &Path) -> Result<(mathstep_core::Context, Labels), String> {
    let labels_path = path.with_extension("labels.json");
    let ctx_text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
    let ctx = parse_context(&ctx_text).map_err(|e| e.to_string())?;
    let labels_text = std::fs::read_to_string(&labels_path)
        .map_err(|e| format!("{}: {e}", labels_path.display()))?;
    let labels: Labels = serde_json::from_str(&labels_text)
        .map_err(|e| format!("{}: {e}", labels_path.display()))?;
    Ok((ctx, labels))
}

fn print_table(summary: &BenchSummary) {
    eprintln!("{:<28} {:>12} {:>12} {:>6}", "fixture", "expected", "got", "ok");
    for row in &summary.results {
        let expected = match row.expected {
            ExpectedStatus::AllValid => "all_valid",
            ExpectedStatus::HasInvalid => "has_invalid",
            ExpectedStatus::Inconclusive => "inconclusive",
        };
        eprintln!(
            "{:<28} {:>12} {:>12} {:>6}",
            row.name,
            expected,
            row.got,
            if row.agrees { "yes" } else { "NO" }
        );
    }
    eprintln!(
        "{} fixture(s), {} skipped; detection {:.3}, false alarms {:.3}, first-error accuracy {:.3}",
        summary.fixtures, summary.skipped, summary.detection_rate, summary.false_alarm_rate,
        summary.first_error_accuracy
    );
    eprintln!(
        "cost: sparse {} vs dense {} (ratio {:.3}); mean latency {:.1} ms",
        summary.sparse_cost_total, summary.dense_cost_total, summary.savings_ratio,
        summary.mean_latency_ms
    );
}
