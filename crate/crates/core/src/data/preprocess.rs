use ndarray::{s, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::table::RawTable;
use crate::error::{Error, Result};
use crate::qsim::HermitianMatrix;

/// How feature columns are brought to one column per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    /// Truncate when there are more columns than qubits, pad when fewer.
    #[default]
    Auto,
    Truncate,
    Pad,
    Pca,
}

/// Which rows the standardization statistics are fitted on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingMode {
    /// Every row, test rows included.
    #[default]
    #[serde(alias = "all-rows")]
    AllRows,
    /// Labeled and unlabeled rows only.
    #[serde(alias = "no-leakage")]
    NoLeakage,
}

impl std::str::FromStr for FeatureMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(FeatureMode::Auto),
            "truncate" => Ok(FeatureMode::Truncate),
            "pad" => Ok(FeatureMode::Pad),
            "pca" => Ok(FeatureMode::Pca),
            other => Err(Error::Validation(format!("unknown feature mode `{other}`"))),
        }
    }
}

impl std::str::FromStr for ScalingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all-rows" | "all_rows" => Ok(ScalingMode::AllRows),
            "no-leakage" | "no_leakage" => Ok(ScalingMode::NoLeakage),
            other => Err(Error::Validation(format!("unknown scaling mode `{other}`"))),
        }
    }
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Replace each missing cell with the median of its column's present values.
pub fn impute_median(mut table: RawTable) -> Result<RawTable> {
    for j in 0..table.n_features() {
        let col = table.values.column(j);
        let mask = table.missing.column(j);
        if !mask.iter().any(|&m| m) {
            continue;
        }
        let mut present: Vec<f64> = col.iter().zip(mask).filter(|(_, &m)| !m).map(|(&v, _)| v).collect();
        if present.is_empty() {
            return Err(Error::Validation(format!("column `{}` has no values to impute from", table.feature_names[j])));
        }
        present.sort_by(f64::total_cmp);
        let fill = median(&present);
        for i in 0..table.n_rows() {
            if table.missing[[i, j]] {
                table.values[[i, j]] = fill;
                table.missing[[i, j]] = false;
            }
        }
    }
    Ok(table)
}

/// Shift class codes so the smallest is 0, then map `y > 0` to 1.
pub fn binarize_labels(codes: &[i64]) -> Vec<u8> {
    let min = codes.iter().copied().min().unwrap_or(0);
    codes.iter().map(|&c| u8::from(c - min > 0)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ColumnStats {
    pub mean: f64,
    pub std: f64,
}

/// Z-score every column with mean and population std computed on `fit_rows`.
/// Columns whose std is below `1e-12` become zero.
pub fn standardize(features: ArrayView2<f64>, fit_rows: &[usize]) -> Result<(Array2<f64>, Vec<ColumnStats>)> {
    if fit_rows.is_empty() {
        return Err(Error::Validation("standardize needs at least one fit row".into()));
    }
    if let Some(&bad) = fit_rows.iter().find(|&&r| r >= features.nrows()) {
        return Err(Error::Index(format!("fit row {bad} with {} rows", features.nrows())));
    }
    let m = fit_rows.len() as f64;
    let mut out = features.to_owned();
    let mut stats = Vec::with_capacity(features.ncols());
    for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
        let mean = fit_rows.iter().map(|&r| features[[r, j]]).sum::<f64>() / m;
        let var = fit_rows.iter().map(|&r| (features[[r, j]] - mean).powi(2)).sum::<f64>() / m;
        let std = var.sqrt();
        if std < 1e-12 {
            col.fill(0.0);
        } else {
            col.mapv_inplace(|v| (v - mean) / std);
        }
        stats.push(ColumnStats { mean, std });
    }
    Ok((out, stats))
}

/// Bring the matrix to exactly `n_qubits` columns.
pub fn reduce_features(features: ArrayView2<f64>, n_qubits: usize, mode: FeatureMode) -> Result<Array2<f64>> {
    let d = features.ncols();
    if d == 0 || n_qubits == 0 {
        return Err(Error::Validation(format!("cannot map {d} features onto {n_qubits} qubits")));
    }
    let mode = match mode {
        FeatureMode::Auto if d >= n_qubits => FeatureMode::Truncate,
        FeatureMode::Auto => FeatureMode::Pad,
        m => m,
    };
    match mode {
        FeatureMode::Truncate if d >= n_qubits => Ok(features.slice(s![.., ..n_qubits]).to_owned()),
        FeatureMode::Pad if d <= n_qubits => {
            let mut out = Array2::zeros((features.nrows(), n_qubits));
            out.slice_mut(s![.., ..d]).assign(&features);
            Ok(out)
        }
        FeatureMode::Pca if d >= n_qubits => pca(features, n_qubits),
        m => Err(Error::Validation(format!("{m:?} cannot map {d} features onto {n_qubits} qubits"))),
    }
}

/// Projection of the centered data onto the top-`k` covariance eigenvectors.
/// Each component is signed so its largest-magnitude entry is positive.
fn pca(features: ArrayView2<f64>, k: usize) -> Result<Array2<f64>> {
    let n = features.nrows();
    if n == 0 {
        return Err(Error::Validation("pca on an empty matrix".into()));
    }
    let mean = features.mean_axis(Axis(0)).expect("nonempty");
    let centered = &features - &mean;
    let mut cov = centered.t().dot(&centered) / n as f64;
    let sym = 0.5 * (&cov + &cov.t());
    cov.assign(&sym);
    let (_, vecs) = HermitianMatrix::from_real_symmetric(&cov)?.eigh()?;
    let d = cov.nrows();
    let mut basis = Array2::zeros((d, k));
    for (c, src) in (0..k).map(|c| (c, d - 1 - c)) {
        let mut v: Vec<f64> = vecs.column(src).iter().map(|z| z.re).collect();
        let lead = v.iter().copied().fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if lead < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        basis.column_mut(c).assign(&ndarray::Array1::from(v));
    }
    Ok(centered.dot(&basis))
}
