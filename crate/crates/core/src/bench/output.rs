use std::fs;
use std::path::Path;
use std::str::FromStr;

use super::runs::{HistogramSeries, SweepResult, SweepRow};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "experiment,design,dictionary_kind,estimator,s,m,n,nhat,sigma2,trials,\
mse_mean,mse_stderr,sensed_energy_mean,singular_trials,seed";

pub const HISTOGRAM_HEADER: &str = "design,bin_left,bin_right,count";

const COLUMNS: [&str; 15] = [
    "experiment",
    "design",
    "dictionary_kind",
    "estimator",
    "s",
    "m",
    "n",
    "nhat",
    "sigma2",
    "trials",
    "mse_mean",
    "mse_stderr",
    "sensed_energy_mean",
    "singular_trials",
    "seed",
];

/// Scientific notation with 17 significant digits (exact for `f64`).
pub fn format_decimal(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_error(e: csv::Error) -> Error {
    Error::Schema(e.to_string())
}

fn render<I>(header: &str, records: I) -> Result<String>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header.split(',')).map_err(csv_error)?;
    for rec in records {
        w.write_record(&rec).map_err(csv_error)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Schema(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn to_csv_string(result: &SweepResult) -> Result<String> {
    render(
        CSV_HEADER,
        result.rows.iter().map(|r| {
            vec![
                r.experiment.clone(),
                r.design.clone(),
                r.dictionary_kind.clone(),
                r.estimator.clone(),
                r.s.to_string(),
                r.m.to_string(),
                r.n.to_string(),
                r.nhat.to_string(),
                format_decimal(r.sigma2),
                r.trials.to_string(),
                format_decimal(r.mse_mean),
                format_decimal(r.mse_stderr),
                format_decimal(r.sensed_energy_mean),
                r.singular_trials.to_string(),
                r.seed.to_string(),
            ]
        }),
    )
}

pub fn write_csv(result: &SweepResult, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, to_csv_string(result)?).map_err(|e| Error::io(path, e))
}

pub fn write_histogram_csv(series: &[HistogramSeries], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let records = series.iter().flat_map(|h| {
        h.counts.iter().enumerate().map(move |(b, c)| {
            vec![
                h.design.clone(),
                format_decimal(h.edges[b]),
                format_decimal(h.edges[b + 1]),
                c.to_string(),
            ]
        })
    });
    fs::write(path, render(HISTOGRAM_HEADER, records)?).map_err(|e| Error::io(path, e))
}

fn field<T: FromStr>(rec: &csv::StringRecord, idx: usize, line: usize) -> Result<T> {
    let raw = rec.get(idx).unwrap_or("");
    raw.parse()
        .map_err(|_| Error::Schema(format!("line {line}: cannot parse column '{}' from '{raw}'", COLUMNS[idx])))
}

pub fn read_csv_str(text: &str) -> Result<SweepResult> {
    if text.trim().is_empty() {
        return Err(Error::Schema("empty file: expected a header row".into()));
    }
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_error)?.clone();
    let mut index = [0usize; 15];
    for (slot, name) in index.iter_mut().zip(COLUMNS) {
        *slot = header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Schema(format!("missing column '{name}'")))?;
    }
    if let Some(extra) = header.iter().find(|h| !COLUMNS.contains(h)) {
        return Err(Error::Schema(format!("unexpected column '{extra}'")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = i + 2;
        // reorder to canonical column positions
        let ordered: csv::StringRecord = index.iter().map(|&j| rec.get(j).unwrap_or("")).collect();
        rows.push(SweepRow {
            experiment: ordered[0].to_string(),
            design: ordered[1].to_string(),
            dictionary_kind: ordered[2].to_string(),
            estimator: ordered[3].to_string(),
            s: field(&ordered, 4, line)?,
            m: field(&ordered, 5, line)?,
            n: field(&ordered, 6, line)?,
            nhat: field(&ordered, 7, line)?,
            sigma2: field(&ordered, 8, line)?,
            trials: field(&ordered, 9, line)?,
            mse_mean: field(&ordered, 10, line)?,
            mse_stderr: field(&ordered, 11, line)?,
            sensed_energy_mean: field(&ordered, 12, line)?,
            singular_trials: field(&ordered, 13, line)?,
            seed: field(&ordered, 14, line)?,
        });
    }
    Ok(SweepResult { rows })
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<SweepResult> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_csv_str(&text)
}
