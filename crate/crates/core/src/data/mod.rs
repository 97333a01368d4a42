//! Dataset fixtures, preprocessing and seeded stratified splits.

mod fetch;
mod preprocess;
mod split;
mod table;

pub use fetch::{convert_uci, fetch_dataset, uci_url};
pub use preprocess::{binarize_labels, impute_median, reduce_features, standardize, ColumnStats, FeatureMode, ScalingMode};
pub use split::{stratified_split, SplitFractions, SplitIndices};
pub use table::{load_dataset, parse_table, RawTable, BUNDLED_DATASETS};

use ndarray::Array2;

/// Features and binary labels after imputation and label binarization.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub features: Array2<f64>,
    pub labels: Vec<u8>,
    pub feature_names: Vec<String>,
}

impl Dataset {
    pub fn n_samples(&self) -> usize {
        self.features.nrows()
    }

    pub fn n_features(&self) -> usize {
        self.features.ncols()
    }
}

/// Impute missing cells and binarize the class codes.
pub fn clean(table: RawTable) -> crate::Result<Dataset> {
    let table = impute_median(table)?;
    Ok(Dataset {
        labels: binarize_labels(&table.classes),
        name: table.name,
        features: table.values,
        feature_names: table.feature_names,
    })
}
