use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{io_err, CliError, Result};
use linchirp::dlct::DlctSpectrum;
use linchirp::eval::SweepResult;
use linchirp::Signal;

const SIGNAL_HEADER: &str = "n,re,im";
const GRID_HEADER: &str = "k,m,energy";
const SWEEP_HEADER: &str = "snr_db,method,mean_mae,std_mae,trials";

/// Formats a float with 17 significant digits, enough for an exact f64
/// round trip through the CSV files.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a signal as `n,re,im` rows.
pub fn write_signal_csv(path: &Path, signal: &Signal) -> Result<()> {
    let mut out = String::with_capacity(64 * signal.len());
    out.push_str(SIGNAL_HEADER);
    out.push('\n');
    for (n, z) in signal.samples().iter().enumerate() {
        let _ = writeln!(out, "{n},{},{}", num(z.re), num(z.im));
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Reads a signal from `n,re,im` rows. The index column is checked for
/// contiguity so silently reordered or truncated files are caught.
pub fn read_signal_csv(path: &Path) -> Result<Vec<Complex64>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let parse_err = |row: usize, msg: &str| {
        CliError::Io(format!("{}: row {row}: {msg}", path.display()))
    };
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SIGNAL_HEADER => {}
        Some(h) => return Err(parse_err(1, &format!("expected header `{SIGNAL_HEADER}`, got `{h}`"))),
        None => return Err(parse_err(1, "empty file")),
    }
    let mut samples = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(parse_err(row, &format!("expected 3 fields, got {}", fields.len())));
        }
        let n: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| parse_err(row, &format!("bad sample index `{}`", fields[0])))?;
        if n != samples.len() {
            return Err(parse_err(row, &format!("expected sample index {}, got {n}", samples.len())));
        }
        let re: f64 = fields[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(row, &format!("bad real value `{}`", fields[1])))?;
        let im: f64 = fields[2]
            .trim()
            .parse()
            .map_err(|_| parse_err(row, &format!("bad imaginary value `{}`", fields[2])))?;
        samples.push(Complex64::new(re, im));
    }
    Ok(samples)
}

/// Writes a spectrum's energy grid as `k,m,energy` rows, chirp-rate slices in
/// storage order, frequency bins ascending within each slice.
pub fn write_grid_csv(path: &Path, spectrum: &DlctSpectrum) -> Result<()> {
    let params = spectrum.params();
    let mut out = String::new();
    out.push_str(GRID_HEADER);
    out.push('\n');
    for j in 0..params.n_chirp() {
        let m = params.column_to_m(j);
        let slice = spectrum.slice(m).expect("column index within range");
        for (k, z) in slice.iter().enumerate() {
            let _ = writeln!(out, "{k},{m},{}", num(z.norm_sqr()));
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

/// Writes sweep statistics as `snr_db,method,mean_mae,std_mae,trials` rows,
/// SNR points in configuration order, methods in configuration order.
pub fn write_sweep_csv(path: &Path, result: &SweepResult) -> Result<()> {
    let mut out = String::new();
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for row in &result.rows {
        for stats in &row.methods {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                num(row.snr_db),
                stats.method.name(),
                num(stats.mean_mae),
                num(stats.std_mae),
                stats.trials
            );
        }
    }
    fs::write(path, out).map_err(|e| io_err(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("linchirp-csv-tests");
        fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn signal_round_trip_is_exact() {
        let path = tmp("roundtrip.csv");
        let samples: Vec<Complex64> = (0..50)
            .map(|i| {
                let t = i as f64 * 0.7391;
                Complex64::new(t.sin() * 1e-3, (t * 1.3).cos() * 1e6)
            })
            .collect();
        let sig = Signal::new(samples.clone()).unwrap();
        write_signal_csv(&path, &sig).unwrap();
        let back = read_signal_csv(&path).unwrap();
        assert_eq!(back, samples);
    }

    #[test]
    fn empty_file_fails_with_row_number() {
        let path = tmp("empty.csv");
        fs::write(&path, "").unwrap();
        let err = read_signal_csv(&path).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn header_only_yields_zero_samples() {
        let path = tmp("header_only.csv");
        fs::write(&path, "n,re,im\n").unwrap();
        assert!(read_signal_csv(&path).unwrap().is_empty());
    }

    #[test]
    fn bad_rows_fail_with_row_number() {
        let path = tmp("bad_value.csv");
        fs::write(&path, "n,re,im\n0,1.0,0.0\n1,not_a_number,0.0\n").unwrap();
        let err = read_signal_csv(&path).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        assert!(err.contains("not_a_number"), "{err}");

        let path = tmp("bad_width.csv");
        fs::write(&path, "n,re,im\n0,1.0\n").unwrap();
        let err = read_signal_csv(&path).unwrap_err().to_string();
        assert!(err.contains("row 2"), "{err}");

        let path = tmp("bad_index.csv");
        fs::write(&path, "n,re,im\n0,1.0,0.0\n5,1.0,0.0\n").unwrap();
        let err = read_signal_csv(&path).unwrap_err().to_string();
        assert!(err.contains("row 3"), "{err}");
        assert!(err.contains("expected sample index 1"), "{err}");
    }

    #[test]
    fn wrong_header_is_rejected() {
        let path = tmp("wrong_header.csv");
        fs::write(&path, "time,value\n0,1.0\n").unwrap();
        let err = read_signal_csv(&path).unwrap_err().to_string();
        assert!(err.contains("n,re,im"), "{err}");
    }

    #[test]
    fn grid_csv_has_full_lattice() {
        let params = linchirp::dlct::DlctParams::with_default_res(8, 4).unwrap();
        let sig = Signal::from_real(&[1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        let spec = linchirp::dlct::dlct_forward(&sig, &params).unwrap();
        let path = tmp("grid.csv");
        write_grid_csv(&path, &spec).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,m,energy");
        assert_eq!(lines.len(), 1 + 8 * 4);
        assert!(lines[1].starts_with("0,0,"));
        // Second half of the slices carries negative chirp indices.
        assert!(text.contains("\n0,-2,"));
        assert!(text.contains("\n0,-1,"));
    }
}
