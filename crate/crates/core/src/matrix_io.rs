//! Labeled dense matrices in CSV form.
//!
//! Layout: the header row holds a corner label followed by column names,
//! every following row holds a row name followed by values. Values are
//! written with Rust's shortest round-trip `f64` formatting, so a matrix
//! written and read back is bit-identical.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledMatrix {
    pub corner: String,
    pub row_names: Vec<String>,
    pub col_names: Vec<String>,
    pub values: Array2<f64>,
}

/// Formats a value for CSV output. Negative zero is written as `0`.
pub fn format_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v}")
    }
}

impl LabeledMatrix {
    pub fn new(
        corner: impl Into<String>,
        row_names: Vec<String>,
        col_names: Vec<String>,
        values: Array2<f64>,
    ) -> Result<Self> {
        if values.nrows() != row_names.len() || values.ncols() != col_names.len() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{} but has {} row names and {} column names",
                values.nrows(),
                values.ncols(),
                row_names.len(),
                col_names.len()
            )));
        }
        Ok(Self {
            corner: corner.into(),
            row_names,
            col_names,
            values,
        })
    }

    pub fn write_to<W: Write>(&self, out: W) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new().from_writer(out);
        let mut header = Vec::with_capacity(self.col_names.len() + 1);
        header.push(self.corner.clone());
        header.extend(self.col_names.iter().cloned());
        wtr.write_record(&header)?;
        for (name, row) in self.row_names.iter().zip(self.values.rows()) {
            let mut rec = Vec::with_capacity(row.len() + 1);
            rec.push(name.clone());
            rec.extend(row.iter().map(|&v| format_value(v)));
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(file)
    }

    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(input);
        let mut records = rdr.records();
        let header = match records.next() {
            Some(h) => h?,
            None => return Err(Error::invalid("matrix CSV is empty")),
        };
        let corner = header.get(0).unwrap_or("").to_string();
        let col_names: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
        let mut row_names = Vec::new();
        let mut data = Vec::new();
        for (line, rec) in records.enumerate() {
            let rec = rec?;
            if rec.len() != col_names.len() + 1 {
                return Err(Error::invalid(format!(
                    "matrix CSV row {} has {} fields, expected {}",
                    line + 2,
                    rec.len(),
                    col_names.len() + 1
                )));
            }
            row_names.push(rec[0].to_string());
            for field in rec.iter().skip(1) {
                let v: f64 = field.trim().parse().map_err(|_| {
                    Error::invalid(format!("non-numeric value {field:?} on row {}", line + 2))
                })?;
                if !v.is_finite() {
                    return Err(Error::invalid(format!(
                        "non-finite value on row {}",
                        line + 2
                    )));
                }
                data.push(v);
            }
        }
        let values = Array2::from_shape_vec((row_names.len(), col_names.len()), data)
            .map_err(|e| Error::Dimension(e.to_string()))?;
        Ok(Self {
            corner,
            row_names,
            col_names,
            values,
        })
    }

    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(file)
    }

    /// Reorders rows and columns of a square user × user matrix to follow
    /// `order`. Every name in `order` must be present on both axes.
    pub fn aligned_square(&self, order: &[String]) -> Result<Array2<f64>> {
        let rows = name_positions(&self.row_names);
        let cols = name_positions(&self.col_names);
        let mut out = Array2::zeros((order.len(), order.len()));
        let lookup = |map: &HashMap<&str, usize>, name: &str| {
            map.get(name)
                .copied()
                .ok_or_else(|| Error::invalid(format!("user {name:?} missing from matrix")))
        };
        for (i, a) in order.iter().enumerate() {
            let ri = lookup(&rows, a)?;
            for (j, b) in order.iter().enumerate() {
                out[[i, j]] = self.values[[ri, lookup(&cols, b)?]];
            }
        }
        Ok(out)
    }
}

fn name_positions(names: &[String]) -> HashMap<&str, usize> {
    names
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect()
}

/// Reads a `user_id,label` file. A first row of exactly `user_id,label` is
/// treated as a header.
pub fn read_labels(path: impl AsRef<Path>) -> Result<Vec<(String, String)>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_labels_from(file)
}

pub fn read_labels_from<R: Read>(input: R) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.len() != 2 {
            return Err(Error::invalid(format!(
                "labels row {} has {} fields, expected 2",
                i + 1,
                rec.len()
            )));
        }
        if i == 0 && &rec[0] == "user_id" && &rec[1] == "label" {
            continue;
        }
        out.push((rec[0].trim().to_string(), rec[1].trim().to_string()));
    }
    Ok(out)
}

pub fn write_labels<S: AsRef<str>, L: std::fmt::Display>(
    path: impl AsRef<Path>,
    rows: impl IntoIterator<Item = (S, L)>,
) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut wtr = csv::Writer::from_writer(file);
    wtr.write_record(["user_id", "label"])?;
    for (user, label) in rows {
        wtr.write_record([user.as_ref(), &label.to_string()])?;
    }
    wtr.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn csv_layout() {
        let m = LabeledMatrix::new(
            "expression",
            vec!["nhs".into(), "brexit".into()],
            vec!["a".into(), "b".into()],
            array![[4.0, -0.0], [-2.5, 1e-20]],
        )
        .unwrap();
        let s = m.to_csv_string().unwrap();
        assert_eq!(
            s,
            "expression,a,b\nnhs,4,0\nbrexit,-2.5,0.00000000000000000001\n"
        );
        let back = LabeledMatrix::read_from(s.as_bytes()).unwrap();
        assert_eq!(back.values[[1, 1]], 1e-20);
        assert_eq!(back.row_names, m.row_names);
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = LabeledMatrix::read_from("x,a,b\nr,1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn align_square_reorders() {
        let m = LabeledMatrix::new(
            "user_id",
            vec!["a".into(), "b".into()],
            vec!["a".into(), "b".into()],
            array![[0.0, 1.0], [2.0, 0.0]],
        )
        .unwrap();
        let w = m.aligned_square(&["b".into(), "a".into()]).unwrap();
        assert_eq!(w, array![[0.0, 2.0], [1.0, 0.0]]);
        assert!(m.aligned_square(&["c".into()]).is_err());
    }

    #[test]
    fn labels_header_optional() {
        let with = read_labels_from("user_id,label\nu1,dem\n".as_bytes()).unwrap();
        let without = read_labels_from("u1,dem\n".as_bytes()).unwrap();
        assert_eq!(with, without);
    }
}
