//! Report rendering: JSON, CSV and the one-line human summaries.

use ipv_core::report::{CheckReport, Verdict};
use serde::Serialize;

use crate::args::Format;

/// CSV header, one row per report item.
pub const CSV_COLUMNS: [&str; 7] = ["check_id", "instance", "verdict", "witness", "margin_lo", "margin_hi", "millis"];

#[derive(Serialize)]
struct CsvRow<'a> {
    check_id: &'a str,
    instance: &'a str,
    verdict: Verdict,
    witness: &'a str,
    margin_lo: &'a str,
    margin_hi: &'a str,
    millis: u64,
}

/// A single report renders as one JSON object, several as an array.
pub fn render(reports: &[CheckReport], format: Format) -> Result<String, String> {
    match format {
        Format::Json => {
            let text = match reports {
                [one] => serde_json::to_string_pretty(one),
                many => serde_json::to_string_pretty(many),
            };
            text.map(|t| t + "\n").map_err(|e| e.to_string())
        }
        Format::Csv => render_csv(reports),
    }
}

fn render_csv(reports: &[CheckReport]) -> Result<String, String> {
    let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    writer.write_record(CSV_COLUMNS).map_err(|e| e.to_string())?;
    for report in reports {
        for item in &report.items {
            let (lo, hi) = item.margin.as_ref().map_or(("", ""), |m| (m.lo.as_str(), m.hi.as_str()));
            writer
                .serialize(CsvRow {
                    check_id: &report.check_id,
                    instance: &item.instance,
                    verdict: item.verdict,
                    witness: item.witness.as_deref().unwrap_or(""),
                    margin_lo: lo,
                    margin_hi: hi,
                    millis: report.timing,
                })
                .map_err(|e| e.to_string())?;
        }
    }
    let bytes = writer.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

/// `theorem-3.3-base: pass (6815 items, 0 failed, 12 ms)`
pub fn summary(report: &CheckReport) -> String {
    let failed = report.items.iter().filter(|i| i.verdict == Verdict::Fail).count();
    let undecided = report.items.iter().filter(|i| i.verdict == Verdict::Undecided).count();
    let mut line = format!(
        "{}: {} ({} items, {} failed",
        report.check_id,
        report.status,
        report.items.len(),
        failed
    );
    if undecided > 0 {
        line.push_str(&format!(", {undecided} undecided"));
    }
    line.push_str(&format!(", {} ms)", report.timing));
    line
}
