use anyhow::Result;

use crate::record::VerificationRecord;

fn opt(x: Option<impl ToString>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

pub fn json(records: &[VerificationRecord]) -> Result<String> {
    Ok(serde_json::to_string_pretty(records)? + "\n")
}

pub fn csv(records: &[VerificationRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn text(records: &[VerificationRecord]) -> String {
    let header = ["claim", "k", "n", "expected", "computed", "status", "ms"].map(String::from);
    let rows: Vec<[String; 7]> = records
        .iter()
        .map(|r| {
            [
                r.claim.clone(),
                opt(r.k),
                opt(r.n),
                r.expected.clone(),
                r.computed.clone(),
                r.status.as_str().to_string(),
                opt(r.elapsed_ms),
            ]
        })
        .collect();
    let mut widths = header.clone().map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    let failed = records.iter().filter(|r| r.status == crate::record::Status::Fail).count();
    let skipped = records.iter().filter(|r| r.status == crate::record::Status::Skipped).count();
    out.push_str(&format!("\n{} records, {failed} failed, {skipped} skipped\n", records.len()));
    out
}
