//! CSV files for signal records, frequency samples, Bode and time traces.

use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::analysis::{BodeRow, TimeRow};
use crate::error::{Error, Result};
use crate::excitation::SignalRecord;
use crate::freqest::FrequencySample;
use crate::linalg::C64;

pub const SIGNAL_HEADER: [&str; 6] = ["k", "t", "u_re", "u_im", "y_re", "y_im"];
pub const FREQUENCY_HEADER: [&str; 4] = ["q_re", "q_im", "H_re", "H_im"];

/// 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows(path: &Path, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows(path: &Path, header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let mut r = csv::Reader::from_path(path)?;
    let found: Vec<String> = r.headers()?.iter().map(|h| h.trim().to_string()).collect();
    if found != header {
        return Err(Error::Format(format!(
            "{}: expected header {}, found {}",
            path.display(),
            header.join(","),
            found.join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Format(format!("{}: row {}: {e}", path.display(), line + 1)))?;
        out.push(vals);
    }
    Ok(out)
}

/// `k,t,u_re,u_im,y_re,y_im`, one row per sample (SISO).
pub fn write_signal_csv(path: impl AsRef<Path>, record: &SignalRecord) -> Result<()> {
    if record.u.nrows() != 1 || record.y.nrows() != 1 {
        return Err(Error::DimensionMismatch("signal CSV holds SISO records only".into()));
    }
    let rows = (0..record.len()).map(|k| {
        let (u, y) = (record.u[(0, k)], record.y[(0, k)]);
        vec![
            k.to_string(),
            fmt_f64(k as f64 * record.ts),
            fmt_f64(u.re),
            fmt_f64(u.im),
            fmt_f64(y.re),
            fmt_f64(y.im),
        ]
    });
    write_rows(path.as_ref(), &SIGNAL_HEADER, rows)
}

/// Reads a signal CSV; the sampling period comes from the `t` column.
pub fn read_signal_csv(path: impl AsRef<Path>) -> Result<SignalRecord> {
    let rows = read_rows(path.as_ref(), &SIGNAL_HEADER)?;
    if rows.len() < 2 {
        return Err(Error::Format("signal CSV needs at least two samples".into()));
    }
    let ts = rows[1][1] - rows[0][1];
    let u: Vec<C64> = rows.iter().map(|r| C64::new(r[2], r[3])).collect();
    let y: Vec<C64> = rows.iter().map(|r| C64::new(r[4], r[5])).collect();
    SignalRecord::siso(ts, &u, &y)
}

pub fn write_frequency_csv(path: impl AsRef<Path>, samples: &[FrequencySample]) -> Result<()> {
    let rows = samples.iter().map(|s| {
        let h = s.h();
        vec![fmt_f64(s.point.re), fmt_f64(s.point.im), fmt_f64(h.re), fmt_f64(h.im)]
    });
    write_rows(path.as_ref(), &FREQUENCY_HEADER, rows)
}

pub fn read_frequency_csv(path: impl AsRef<Path>) -> Result<Vec<FrequencySample>> {
    Ok(read_rows(path.as_ref(), &FREQUENCY_HEADER)?
        .into_iter()
        .map(|r| FrequencySample::scalar(C64::new(r[0], r[1]), C64::new(r[2], r[3])))
        .collect())
}

/// Reference and candidate Bode rows side by side.
pub fn write_bode_csv(path: impl AsRef<Path>, reference: &[BodeRow], candidate: &[BodeRow]) -> Result<()> {
    let header = ["omega", "ref_mag_db", "ref_phase_deg", "cand_mag_db", "cand_phase_deg"];
    let rows = reference.iter().zip(candidate).map(|(a, b)| {
        vec![
            fmt_f64(a.omega),
            fmt_f64(a.magnitude_db),
            fmt_f64(a.phase_deg),
            fmt_f64(b.magnitude_db),
            fmt_f64(b.phase_deg),
        ]
    });
    write_rows(path.as_ref(), &header, rows)
}

pub fn write_time_csv(path: impl AsRef<Path>, rows: &[TimeRow]) -> Result<()> {
    let rows = rows
        .iter()
        .map(|r| vec![fmt_f64(r.t), fmt_f64(r.y_ref), fmt_f64(r.y_cand)]);
    write_rows(path.as_ref(), &["t", "y_ref", "y_cand"], rows)
}

pub fn write_json(path: impl AsRef<Path>, value: &impl Serialize) -> Result<()> {
    std::fs::write(path, serde_json::to_string_pretty(value)? + "\n")?;
    Ok(())
}

/// `<out>.meta.json` next to a data file.
pub fn sidecar_path(path: impl AsRef<Path>) -> PathBuf {
    let mut s = path.as_ref().as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rec.csv");
        let u = [C64::new(0.1, -0.2), C64::new(1.0 / 3.0, 2.0), C64::new(-7e-300, 1e300)];
        let y = [C64::new(std::f64::consts::PI, 0.0), C64::new(0.0, -0.0), C64::new(1e-17, 5.5)];
        let rec = SignalRecord::siso(0.01, &u, &y).unwrap();
        write_signal_csv(&path, &rec).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert_eq!(back.u, rec.u);
        assert_eq!(back.y, rec.y);
        assert!((back.ts - 0.01).abs() < 1e-18);
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.starts_with("k,t,u_re,u_im,y_re,y_im\n"));
    }

    #[test]
    fn frequency_round_trip_and_header_check() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.csv");
        let s = vec![FrequencySample::scalar(C64::new(0.6, 0.8), C64::new(-0.4, -0.8))];
        write_frequency_csv(&path, &s).unwrap();
        assert_eq!(read_frequency_csv(&path).unwrap(), s);
        assert!(matches!(read_signal_csv(&path), Err(Error::Format(_))));
    }

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path("out/rec.csv"), PathBuf::from("out/rec.csv.meta.json"));
    }
}
