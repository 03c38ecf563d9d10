//! Text exports: partition-indexed CSV matrices and JSON distributions.

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::partition::Partition;
use crate::scalar::{parse_scalar, Scalar};

/// Square matrix indexed by `labels` on both axes. Header row is the corner
/// label followed by the column labels; each row starts with its label.
pub fn matrix_to_csv(
    corner: &str,
    labels: &[Partition],
    entry: impl Fn(usize, usize) -> Scalar,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![corner.to_string()];
    header.extend(labels.iter().map(Partition::label));
    w.write_record(&header).expect("in-memory write");
    for (i, row) in labels.iter().enumerate() {
        let mut rec = vec![row.label()];
        rec.extend((0..labels.len()).map(|j| entry(i, j).to_string()));
        w.write_record(&rec).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn matrix_from_csv(text: &str) -> Result<(Vec<Partition>, RatMatrix)> {
    let bad = |m: String| Error::MalformedTable(m);
    let mut r = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(text.as_bytes());
    let mut records = r.records();
    let header = records
        .next()
        .ok_or_else(|| bad("missing header".into()))?
        .map_err(|e| bad(e.to_string()))?;
    let labels: Vec<Partition> = header
        .iter()
        .skip(1)
        .map(str::parse)
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(labels.len());
    for (i, rec) in records.enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let label: Partition = rec.get(0).unwrap_or("").parse()?;
        if labels.get(i) != Some(&label) {
            return Err(bad(format!(
                "row {i} labelled {label} does not match header"
            )));
        }
        let row: Vec<Scalar> = rec
            .iter()
            .skip(1)
            .map(parse_scalar)
            .collect::<Result<_>>()?;
        if row.len() != labels.len() {
            return Err(bad(format!("row {label} has {} entries", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != labels.len() {
        return Err(bad(format!(
            "{} rows for {} columns",
            rows.len(),
            labels.len()
        )));
    }
    Ok((labels, RatMatrix::from_rows(rows)))
}

/// Formats a real with 15 significant digits, as a JSON number.
pub fn json_real(x: f64) -> serde_json::Value {
    if !x.is_finite() {
        return serde_json::Value::Null;
    }
    let rounded: f64 = format!("{x:.14e}").parse().expect("valid float text");
    serde_json::Value::from(rounded)
}

pub fn json_exact(x: &Scalar) -> serde_json::Value {
    serde_json::Value::String(x.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    #[test]
    fn csv_rejects_garbage() {
        assert!(matrix_from_csv("").is_err());
        assert!(matrix_from_csv("x,[2],\"[1,1]\"\n[2],1\n").is_err());
        assert!(matrix_from_csv("x,[2],\"[1,1]\"\n\"[1,1]\",1,0\n[2],0,1\n").is_err());
        assert!(matrix_from_csv("x,[2],\"[1,1]\"\n[2],1,q\n\"[1,1]\",0,1\n").is_err());
    }

    #[test]
    fn csv_roundtrip_small() {
        let labels = vec!["[2]".parse().unwrap(), "[1,1]".parse().unwrap()];
        let vals = [[ratio(1, 3), ratio(2, 3)], [int(0), int(1)]];
        let text = matrix_to_csv("from\\to", &labels, |i, j| vals[i][j].clone());
        assert_eq!(text, "from\\to,[2],\"[1,1]\"\n[2],1/3,2/3\n\"[1,1]\",0,1\n");
        let (l, m) = matrix_from_csv(&text).unwrap();
        assert_eq!(l, labels);
        assert_eq!(m[(0, 1)], ratio(2, 3));
    }

    #[test]
    fn real_formatting() {
        assert_eq!(json_real(1.0 / 3.0).to_string(), "0.333333333333333");
        assert_eq!(json_real(0.5).to_string(), "0.5");
        assert_eq!(json_real(f64::NAN), serde_json::Value::Null);
    }
}
