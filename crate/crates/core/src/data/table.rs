use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Names accepted by [`load_dataset`] without a path.
pub const BUNDLED_DATASETS: [&str; 4] = ["iris", "wine", "breast_cancer", "heart_disease"];

pub(crate) fn bundled(name: &str) -> Option<&'static str> {
    Some(match name {
        "iris" => include_str!("../../data/iris.csv"),
        "wine" => include_str!("../../data/wine.csv"),
        "breast_cancer" => include_str!("../../data/breast_cancer.csv"),
        "heart_disease" => include_str!("../../data/heart_disease.csv"),
        _ => return None,
    })
}

/// A parsed fixture. Missing cells hold `NaN` in `values` and `true` in `missing`.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub name: String,
    pub feature_names: Vec<String>,
    pub values: Array2<f64>,
    pub missing: Array2<bool>,
    pub classes: Vec<i64>,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.values.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.values.ncols()
    }

    pub fn missing_count(&self) -> usize {
        self.missing.iter().filter(|&&m| m).count()
    }
}

/// Load a bundled fixture by name, or any CSV file of the same format by path.
pub fn load_dataset(source: &str) -> Result<RawTable> {
    if let Some(text) = bundled(source) {
        return parse_table(source, text);
    }
    let path = Path::new(source);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or(source);
        return parse_table(name, &text);
    }
    Err(Error::Lookup(format!("{source} (expected one of {} or a CSV path)", BUNDLED_DATASETS.join(", "))))
}

fn is_missing(cell: &str) -> bool {
    cell.is_empty() || cell == "?"
}

/// Parse CSV text: header row, numeric feature columns, integer class code last.
pub fn parse_table(name: &str, text: &str) -> Result<RawTable> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| Error::Parse { line: 1, message: e.to_string() })?.clone();
    if header.len() < 2 {
        return Err(Error::Parse { line: 1, message: "need at least one feature column and a class column".into() });
    }
    let d = header.len() - 1;
    let feature_names: Vec<String> = header.iter().take(d).map(str::to_owned).collect();

    let mut values = Vec::new();
    let mut missing = Vec::new();
    let mut classes = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        if record.len() != header.len() {
            return Err(Error::Parse { line, message: format!("expected {} fields, found {}", header.len(), record.len()) });
        }
        for (j, cell) in record.iter().take(d).enumerate() {
            if is_missing(cell) {
                values.push(f64::NAN);
                missing.push(true);
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    values.push(v);
                    missing.push(false);
                }
                _ => {
                    return Err(Error::Parse { line, message: format!("column `{}`: not a number: `{cell}`", feature_names[j]) })
                }
            }
        }
        let class = &record[d];
        let code = class
            .parse::<i64>()
            .map_err(|_| Error::Parse { line, message: format!("class code must be an integer, found `{class}`") })?;
        classes.push(code);
    }
    if classes.is_empty() {
        return Err(Error::Parse { line: 2, message: "no data rows".into() });
    }
    let n = classes.len();
    Ok(RawTable {
        name: name.to_owned(),
        feature_names,
        values: Array2::from_shape_vec((n, d), values).expect("row-major fill"),
        missing: Array2::from_shape_vec((n, d), missing).expect("row-major fill"),
        classes,
    })
}
