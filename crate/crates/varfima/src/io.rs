//! CSV ingestion and emission of series and spectra.
//!
//! Series CSV dialect: '.' decimal point, ',' separator, '\n' line endings,
//! an optional header row, one time point per row, one coordinate per column.

use crate::error::{Error, Result};
use crate::series::MultivariateSeries;
use crate::spectral::SpectralSequence;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

/// Read a series from CSV. The first row is treated as a header when any of
/// its cells fails to parse as a number.
pub fn read_series_csv_from<R: Read>(reader: R) -> Result<MultivariateSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let mut row = Vec::with_capacity(record.len());
        let mut parse_failure: Option<usize> = None;
        for (col, cell) in record.iter().enumerate() {
            match cell.parse::<f64>() {
                Ok(v) => row.push(v),
                Err(_) => {
                    parse_failure = Some(col);
                    break;
                }
            }
        }
        match parse_failure {
            None => rows.push(row),
            Some(col) => {
                if first {
                    // Header row; skip it.
                } else {
                    return Err(Error::CsvData {
                        line,
                        col: col + 1,
                        msg: format!("cell '{}' is not a number", &record[col]),
                    });
                }
            }
        }
        first = false;
    }
    if rows.is_empty() {
        return Err(Error::Empty("CSV contains no data rows".into()));
    }
    MultivariateSeries::from_rows(&rows)
}

pub fn read_series_csv<P: AsRef<Path>>(path: P) -> Result<MultivariateSeries> {
    read_series_csv_from(File::open(path)?)
}

/// Render a series as header-less CSV with round-tripping float formatting.
pub fn series_to_csv(series: &MultivariateSeries) -> String {
    let mut out = String::new();
    for t in 0..series.n() {
        for (i, v) in series.row(t).iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{v}");
        }
        out.push('\n');
    }
    out
}

pub fn write_series_csv<P: AsRef<Path>>(series: &MultivariateSeries, path: P) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(series_to_csv(series).as_bytes())?;
    w.flush()?;
    Ok(())
}

/// Render a spectral sequence as CSV: `j,lambda`, then `re_r_s,im_r_s` for
/// every matrix entry in row-major order.
pub fn spectrum_to_csv(seq: &SpectralSequence) -> String {
    let q = seq.q();
    let mut out = String::from("j,lambda");
    for r in 1..=q {
        for s in 1..=q {
            let _ = write!(out, ",re_{r}_{s},im_{r}_{s}");
        }
    }
    out.push('\n');
    for (j, mat) in seq.mats().iter().enumerate() {
        let _ = write!(out, "{},{}", j + 1, seq.grid().freq(j + 1));
        for r in 0..q {
            for s in 0..q {
                let v = mat[(r, s)];
                let _ = write!(out, ",{},{}", v.re, v.im);
            }
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::FourierGrid;
    use crate::spectral::periodogram;

    #[test]
    fn reads_with_and_without_header() {
        let with = "x1,x2\n1.0,2.0\n3.0,4.0\n";
        let without = "1.0,2.0\n3.0,4.0\n";
        let a = read_series_csv_from(with.as_bytes()).unwrap();
        let b = read_series_csv_from(without.as_bytes()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n(), 2);
        assert_eq!(a.q(), 2);
    }

    #[test]
    fn names_bad_cell_position() {
        let text = "1.0,2.0\n3.0,oops\n";
        match read_series_csv_from(text.as_bytes()).unwrap_err() {
            Error::CsvData { line, col, .. } => {
                assert_eq!((line, col), (2, 2));
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            read_series_csv_from("".as_bytes()),
            Err(Error::Empty(_))
        ));
        assert!(matches!(
            read_series_csv_from("a,b\n".as_bytes()),
            Err(Error::Empty(_))
        ));
    }

    #[test]
    fn series_round_trips_bit_exact() {
        let x = MultivariateSeries::from_rows(&[
            vec![0.1, -2.5e-17],
            vec![std::f64::consts::PI, 4.0 / 3.0],
            vec![-1e300, 5e-300],
        ])
        .unwrap();
        let csv = series_to_csv(&x);
        let back = read_series_csv_from(csv.as_bytes()).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn spectrum_csv_layout() {
        let x = MultivariateSeries::from_flat(32, 2, (0..64).map(|i| (i % 7) as f64).collect())
            .unwrap()
            .demean();
        let grid = FourierGrid::new(32, 10).unwrap();
        let seq = periodogram(&x, &grid).unwrap();
        let csv = spectrum_to_csv(&seq);
        let lines: Vec<&str> = csv.trim_end().lines().collect();
        assert_eq!(lines.len(), 11);
        assert_eq!(
            lines[0],
            "j,lambda,re_1_1,im_1_1,re_1_2,im_1_2,re_2_1,im_2_1,re_2_2,im_2_2"
        );
        assert!(lines[1].starts_with("1,"));
    }
}
