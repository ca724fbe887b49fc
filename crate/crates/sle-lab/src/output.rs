//! Files written by a run: `report.json` always, `traces.csv` and
//! `curves.csv` in CSV format when there is something to export. Every file
//! carries the hash of the resolved config; the CSV files on a leading
//! `# config_hash=<hex>` line.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::config::{Format, RunConfig};
use crate::experiments::{Outcome, SampleCurve, SampleTrace};
use crate::LabError;

pub const REPORT_FILE: &str = "report.json";
pub const TRACES_FILE: &str = "traces.csv";
pub const CURVES_FILE: &str = "curves.csv";

/// The report with the resolved config and its hash, as pretty JSON.
pub fn report_json(config: &RunConfig, outcome: &Outcome) -> Result<String, LabError> {
    let mut value = serde_json::to_value(&outcome.report)?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("config".into(), serde_json::to_value(config)?);
        map.insert("config_hash".into(), config.hash().into());
    }
    let mut text = serde_json::to_string_pretty(&value)?;
    text.push('\n');
    Ok(text)
}

fn csv_writer(
    path: &Path,
    hash: &str,
    header: [&str; 4],
) -> Result<csv::Writer<BufWriter<File>>, LabError> {
    let mut file = BufWriter::new(File::create(path)?);
    writeln!(file, "# config_hash={hash}")?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header)?;
    Ok(w)
}

pub fn write_traces(path: &Path, hash: &str, traces: &[SampleTrace]) -> Result<(), LabError> {
    let mut w = csv_writer(path, hash, ["sample", "t", "re", "im"])?;
    for tr in traces {
        for (t, z) in tr.times.iter().zip(&tr.points) {
            w.serialize((tr.sample, t, z.re, z.im))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_curves(path: &Path, hash: &str, curves: &[SampleCurve]) -> Result<(), LabError> {
    let mut w = csv_writer(path, hash, ["sample", "idx", "re", "im"])?;
    for c in curves {
        for (i, z) in c.points.iter().enumerate() {
            w.serialize((c.sample, i, z.re, z.im))?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Writes all outputs into `dir`, creating it if needed. If any write fails
/// the files already written are removed.
pub fn write_all(
    dir: &Path,
    config: &RunConfig,
    outcome: &Outcome,
) -> Result<Vec<PathBuf>, LabError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let result = write_into(dir, config, outcome, &mut written);
    if result.is_err() {
        for p in &written {
            let _ = std::fs::remove_file(p);
        }
    }
    result.map(|_| written)
}

fn write_into(
    dir: &Path,
    config: &RunConfig,
    outcome: &Outcome,
    written: &mut Vec<PathBuf>,
) -> Result<(), LabError> {
    let hash = config.hash();
    if config.format == Format::Csv {
        if !outcome.traces.is_empty() {
            let p = dir.join(TRACES_FILE);
            written.push(p.clone());
            write_traces(&p, &hash, &outcome.traces)?;
        }
        if !outcome.curves.is_empty() {
            let p = dir.join(CURVES_FILE);
            written.push(p.clone());
            write_curves(&p, &hash, &outcome.curves)?;
        }
    }
    let p = dir.join(REPORT_FILE);
    written.push(p.clone());
    std::fs::write(&p, report_json(config, outcome)?)?;
    Ok(())
}

/// Reads a CSV export back, skipping the hash line.
pub fn read_rows(path: &Path) -> Result<Vec<(usize, f64, f64, f64)>, LabError> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        rows.push(rec?);
    }
    Ok(rows)
}
