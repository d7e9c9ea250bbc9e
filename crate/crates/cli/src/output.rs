//! CSV series and JSON comparison reports.

use std::collections::BTreeMap;
use std::path::Path;

use polydress::oracle::{ComparisonReport, Deviation};
use polydress::PeSeries64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Header `tau,pe,channel_<s>...`; every number as `{:.16e}`.
pub fn write_series(path: &Path, series: &PeSeries64) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["tau".to_string(), "pe".to_string()];
    header.extend(series.channels.keys().map(|s| format!("channel_{s}")));
    w.write_record(&header)?;
    for (i, t) in series.tau.iter().enumerate() {
        let mut row = vec![format!("{t:.16e}"), format!("{:.16e}", series.values[i])];
        row.extend(series.channels.values().map(|c| format!("{:.16e}", c[i])));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_series(path: &Path) -> Result<PeSeries64, CliError> {
    let bad = |msg: String| CliError::Validation(format!("{}: {msg}", path.display()));
    let mut r = csv::Reader::from_path(path)?;
    let header = r.headers()?.clone();
    if header.get(0) != Some("tau") || header.get(1) != Some("pe") {
        return Err(bad("header must start with tau,pe".into()));
    }
    let shifts = header
        .iter()
        .skip(2)
        .map(|h| {
            h.strip_prefix("channel_")
                .and_then(|s| s.parse::<i64>().ok())
                .ok_or_else(|| bad(format!("unrecognised column {h:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut tau = Vec::new();
    let mut values = Vec::new();
    let mut channels: Vec<Vec<f64>> = vec![Vec::new(); shifts.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| {
            rec.get(i)
                .and_then(|x| x.trim().parse::<f64>().ok())
                .ok_or_else(|| bad(format!("row {}: bad field {i}", line + 2)))
        };
        tau.push(num(0)?);
        values.push(num(1)?);
        for (k, c) in channels.iter_mut().enumerate() {
            c.push(num(k + 2)?);
        }
    }
    let mut series = PeSeries64::new(tau, values);
    series.channels = shifts.into_iter().zip(channels).collect();
    Ok(series)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeviationJson {
    pub max_abs: f64,
    pub rms: f64,
}

/// Serialised form of [`ComparisonReport`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportJson {
    pub max_abs: f64,
    pub rms: f64,
    pub per_channel: BTreeMap<i64, DeviationJson>,
}

impl From<&ComparisonReport> for ReportJson {
    fn from(r: &ComparisonReport) -> Self {
        let dev = |d: &Deviation| DeviationJson {
            max_abs: d.max_abs,
            rms: d.rms,
        };
        Self {
            max_abs: r.max_abs,
            rms: r.rms,
            per_channel: r.per_channel.iter().map(|(s, d)| (*s, dev(d))).collect(),
        }
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.csv");
        let mut s = PeSeries64::new(
            vec![0.0, 0.5, 1.0],
            vec![0.0, 0.1234567890123456, 1.0 / 3.0],
        );
        s.channels.insert(-2, vec![0.0, 1e-300, 0.5]);
        s.channels.insert(3, vec![0.25, 0.0, 0.0]);
        write_series(&path, &s).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("tau,pe,channel_-2,channel_3\n"));
        assert_eq!(read_series(&path).unwrap(), s);
    }

    #[test]
    fn rejects_foreign_csv() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        std::fs::write(&path, "time,value\n0,1\n").unwrap();
        assert!(matches!(read_series(&path), Err(CliError::Validation(_))));
    }
}
