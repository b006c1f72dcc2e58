use std::fs;
use std::io::Write;
use std::path::Path;

use serde_json::json;

use super::experiment::{CorrelationTable, ExperimentReport, MeanRow};
use super::BenchError;

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so a failed write never leaves a truncated file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), BenchError> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| BenchError::Io(e.error.to_string()))?;
    Ok(())
}

/// Renders a CSV into memory with `\n` line endings.
pub fn csv_bytes(f: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Result<Vec<u8>, BenchError> {
    let mut buf = Vec::new();
    f(&mut buf).map_err(|e| BenchError::Io(e.to_string()))?;
    Ok(buf)
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn writer(buf: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(buf)
}

pub fn means_csv(rows: &[MeanRow]) -> Result<Vec<u8>, BenchError> {
    csv_bytes(|buf| {
        let mut w = writer(buf);
        w.write_record([
            "iter", "cycle", "f_mean", "logSQ_max_mean", "logSE_mean", "logNSS", "GCR", "logCF", "logCCF", "FSW",
            "NSM", "URR", "logIRUIF",
        ])?;
        for r in rows {
            w.write_record([
                r.iter.to_string(),
                r.cycle.to_string(),
                r.f_mean.to_string(),
                opt(r.log_sq_max_mean),
                opt(r.log_se_mean),
                opt(r.ln_nss),
                opt(r.gcr),
                opt(r.log_cf),
                opt(r.log_ccf),
                opt(r.fsw),
                opt(r.nsm),
                opt(r.urr),
                opt(r.log_iruif),
            ])?;
        }
        w.flush()?;
        Ok(())
    })
}

/// Two-column `iter,<column>` curve.
pub fn curve_csv(column: &str, points: impl IntoIterator<Item = (usize, Option<f64>)>) -> Result<Vec<u8>, BenchError> {
    csv_bytes(|buf| {
        let mut w = writer(buf);
        w.write_record(["iter", column])?;
        for (k, v) in points {
            w.write_record([k.to_string(), opt(v)])?;
        }
        w.flush()?;
        Ok(())
    })
}

pub fn correlations_csv(table: &CorrelationTable) -> Result<Vec<u8>, BenchError> {
    csv_bytes(|buf| {
        let mut w = writer(buf);
        w.write_record(["indicator", "r_logSQ", "r_logSE"])?;
        for r in &table.rows {
            w.write_record([r.indicator.clone(), opt(r.vs_log_sq), opt(r.vs_log_se)])?;
        }
        w.flush()?;
        Ok(())
    })
}

/// JSON summary without the per-ordering and per-iteration payloads.
pub fn summary_json(report: &ExperimentReport) -> serde_json::Value {
    json!({
        "m": report.m,
        "cardinalities": report.cardinalities,
        "landscape": report.landscape,
        "seed": report.seed,
        "orderings": report.orderings,
        "variants": report.variants,
        "plans": report.plans.iter().map(|p| &p.summary).collect::<Vec<_>>(),
        "failures": report.failures,
        "correlations": report.correlations.rows,
    })
}

/// Writes `report.json`, `correlations.csv` and per plan `means_<label>.csv`,
/// `hist_<label>.csv`, `plot_quality_<label>.csv`, `plot_efficiency_<label>.csv`.
///
/// Every file is rendered before the first one is written.
pub fn write_report(dir: &Path, report: &ExperimentReport) -> Result<Vec<String>, BenchError> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    let mut summary = serde_json::to_vec_pretty(&summary_json(report)).map_err(|e| BenchError::Io(e.to_string()))?;
    summary.push(b'\n');
    files.push(("report.json".into(), summary));
    files.push(("correlations.csv".into(), correlations_csv(&report.correlations)?));
    for p in &report.plans {
        let label = &p.summary.label;
        files.push((format!("means_{label}.csv"), means_csv(&p.means)?));
        files.push((format!("hist_{label}.csv"), csv_bytes(|b| p.histogram.write_csv(b))?));
        files.push((
            format!("plot_quality_{label}.csv"),
            curve_csv("logSQ", p.means.iter().map(|r| (r.iter, r.log_sq_max_mean)))?,
        ));
        files.push((
            format!("plot_efficiency_{label}.csv"),
            curve_csv("logSE", p.means.iter().map(|r| (r.iter, r.log_se_mean)))?,
        ));
    }
    for (name, bytes) in &files {
        write_atomic(&dir.join(name), bytes)?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}
