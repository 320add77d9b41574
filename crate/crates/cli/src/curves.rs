//! Sampled curves and their CSV form: a `z` column followed by one column
//! per series, with empty cells where a series has no value.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hstair::exactnum::rational_decimal;
use hstair::Rational;

pub const SIG_DIGITS: usize = 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveSeries {
    pub label: String,
    pub points: Vec<(Rational, Option<String>)>,
}

/// A parsed CSV column: finite `(z, value)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct Column {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub fn emit_curve_csv(series: &[CurveSeries], path: &Path) -> Result<()> {
    if series.is_empty() {
        bail!("no series to write");
    }
    let mut rows: BTreeMap<&Rational, Vec<&str>> = BTreeMap::new();
    for (i, s) in series.iter().enumerate() {
        for (z, v) in &s.points {
            let row = rows.entry(z).or_insert_with(|| vec![""; series.len()]);
            if let Some(v) = v {
                row[i] = v;
            }
        }
    }
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
    let mut header = vec!["z".to_string()];
    header.extend(series.iter().map(|s| s.label.clone()));
    w.write_record(&header)?;
    for (z, vals) in rows {
        let mut rec = vec![rational_decimal(z, SIG_DIGITS)];
        rec.extend(vals.into_iter().map(str::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_curve_csv(path: &Path) -> Result<Vec<Column>> {
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header = r.headers()?.clone();
    if header.get(0) != Some("z") {
        bail!("{}: first column must be z", path.display());
    }
    let mut cols: Vec<Column> = header
        .iter()
        .skip(1)
        .map(|l| Column {
            label: l.to_string(),
            points: Vec::new(),
        })
        .collect();
    for rec in r.records() {
        let rec = rec?;
        let z: f64 = rec
            .get(0)
            .unwrap_or("")
            .parse()
            .with_context(|| format!("{}: bad z value", path.display()))?;
        for (c, cell) in cols.iter_mut().zip(rec.iter().skip(1)) {
            if cell.is_empty() {
                continue;
            }
            let v: f64 = cell
                .parse()
                .with_context(|| format!("{}: bad value {cell:?}", path.display()))?;
            c.points.push((z, v));
        }
    }
    Ok(cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hstair::exactnum::{int, rat};

    #[test]
    fn aligned_and_missing_cells() {
        let dir = std::env::temp_dir().join(format!("hstair-curves-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("c.csv");
        let a = CurveSeries {
            label: "a".into(),
            points: vec![(int(1), Some("1".into())), (rat(3, 2), Some("2".into()))],
        };
        let b = CurveSeries {
            label: "b,c".into(),
            points: vec![(rat(3, 2), None), (int(2), Some("0.5".into()))],
        };
        emit_curve_csv(&[a, b], &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "z,a,\"b,c\"\n1,1,\n1.5,2,\n2,,0.5\n");
        let cols = read_curve_csv(&path).unwrap();
        assert_eq!(cols[1].label, "b,c");
        assert_eq!(cols[1].points, vec![(2.0, 0.5)]);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn empty_rejected() {
        assert!(emit_curve_csv(&[], Path::new("/nonexistent/x.csv")).is_err());
    }
}
