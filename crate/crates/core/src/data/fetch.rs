use std::path::{Path, PathBuf};

use super::table::{bundled, parse_table};
use crate::error::{Error, Result};

const UCI_BASE: &str = "https://archive.ics.uci.edu/ml/machine-learning-databases";

/// Source file for each bundled dataset.
pub fn uci_url(name: &str) -> Option<String> {
    let rel = match name {
        "iris" => "iris/iris.data",
        "wine" => "wine/wine.data",
        "breast_cancer" => "breast-cancer-wisconsin/wdbc.data",
        "heart_disease" => "heart-disease/processed.cleveland.data",
        _ => return None,
    };
    Some(format!("{UCI_BASE}/{rel}"))
}

fn expected_shape(name: &str) -> (usize, usize) {
    match name {
        "iris" => (150, 4),
        "wine" => (178, 13),
        "breast_cancer" => (569, 30),
        _ => (303, 13),
    }
}

fn iris_class(s: &str) -> Result<&'static str> {
    match s {
        "Iris-setosa" => Ok("0"),
        "Iris-versicolor" => Ok("1"),
        "Iris-virginica" => Ok("2"),
        other => Err(Error::Validation(format!("unknown iris class `{other}`"))),
    }
}

/// Rewrite a raw UCI data file into fixture CSV: header, features, class last.
/// Wine and Cleveland keep their original class codes; the diagnosis letter
/// maps malignant to 0 and benign to 1.
pub fn convert_uci(name: &str, raw: &str) -> Result<String> {
    let header = bundled(name).and_then(|t| t.lines().next()).ok_or_else(|| Error::Lookup(name.to_owned()))?;
    let mut out = String::with_capacity(raw.len() + header.len());
    out.push_str(header);
    out.push('\n');
    for (i, line) in raw.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let bad = |msg: &str| Error::Parse { line: i + 1, message: msg.to_owned() };
        let row: Vec<&str> = match name {
            "iris" => {
                let (class, feats) = fields.split_last().ok_or_else(|| bad("empty row"))?;
                let mut r = feats.to_vec();
                r.push(iris_class(class).map_err(|e| bad(&e.to_string()))?);
                r
            }
            "wine" => {
                let (class, feats) = fields.split_first().ok_or_else(|| bad("empty row"))?;
                let mut r = feats.to_vec();
                r.push(class);
                r
            }
            "breast_cancer" => {
                if fields.len() < 2 {
                    return Err(bad("expected id and diagnosis"));
                }
                let class = match fields[1] {
                    "M" => "0",
                    "B" => "1",
                    other => return Err(bad(&format!("unknown diagnosis `{other}`"))),
                };
                let mut r = fields[2..].to_vec();
                r.push(class);
                r
            }
            _ => fields,
        };
        out.push_str(&row.join(","));
        out.push('\n');
    }
    let table = parse_table(name, &out)?;
    let want = expected_shape(name);
    if (table.n_rows(), table.n_features()) != want {
        return Err(Error::Validation(format!(
            "{name}: converted table is {}×{}, expected {}×{}",
            table.n_rows(),
            table.n_features(),
            want.0,
            want.1
        )));
    }
    Ok(out)
}

/// Download one dataset, convert it, check its shape and write `<dir>/<name>.csv`.
pub fn fetch_dataset(name: &str, data_dir: &Path) -> Result<PathBuf> {
    let url = uci_url(name).ok_or_else(|| Error::Lookup(name.to_owned()))?;
    log::info!("fetching {url}");
    let raw = ureq::get(&url)
        .call()
        .map_err(|e| Error::Network(format!("{url}: {e}")))?
        .body_mut()
        .read_to_string()
        .map_err(|e| Error::Network(format!("{url}: {e}")))?;
    let csv = convert_uci(name, &raw)?;
    std::fs::create_dir_all(data_dir).map_err(|e| Error::io(data_dir, e))?;
    let path = data_dir.join(format!("{name}.csv"));
    std::fs::write(&path, csv).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn repeat(line: &str, n: usize) -> String {
        format!("{}\n", vec![line; n].join("\n"))
    }

    #[test]
    fn iris_conversion_maps_species() {
        let mut raw = repeat("5.1,3.5,1.4,0.2,Iris-setosa", 50);
        raw += &repeat("7.0,3.2,4.7,1.4,Iris-versicolor", 50);
        raw += &repeat("6.3,3.3,6.0,2.5,Iris-virginica", 50);
        raw += "\n";
        let csv = convert_uci("iris", &raw).unwrap();
        let t = parse_table("iris", &csv).unwrap();
        assert_eq!(t.classes.iter().filter(|&&c| c == 2).count(), 50);
        assert_eq!(t.values[[0, 0]], 5.1);
    }

    #[test]
    fn wine_moves_class_to_the_end() {
        let row = format!("3,{}", vec!["1.5"; 13].join(","));
        let csv = convert_uci("wine", &repeat(&row, 178)).unwrap();
        let t = parse_table("wine", &csv).unwrap();
        assert!(t.classes.iter().all(|&c| c == 3));
    }

    #[test]
    fn wdbc_drops_id_and_maps_diagnosis() {
        let feats = vec!["0.25"; 30].join(",");
        let raw = format!("842302,M,{feats}\n") + &repeat(&format!("1,B,{feats}"), 568);
        let t = parse_table("bc", &convert_uci("breast_cancer", &raw).unwrap()).unwrap();
        assert_eq!(t.classes[0], 0);
        assert_eq!(t.classes[1], 1);
        assert_eq!(t.n_features(), 30);
    }

    #[test]
    fn cleveland_keeps_missing_markers() {
        let raw = "63.0,1.0,1.0,145.0,233.0,1.0,2.0,150.0,0.0,2.3,3.0,?,6.0,2\n".repeat(303);
        let t = parse_table("hd", &convert_uci("heart_disease", &raw).unwrap()).unwrap();
        assert_eq!(t.missing_count(), 303);
        assert_eq!(t.classes[0], 2);
    }

    #[test]
    fn wrong_row_count_is_rejected() {
        let raw = repeat("5.1,3.5,1.4,0.2,Iris-setosa", 10);
        assert!(matches!(convert_uci("iris", &raw), Err(Error::Validation(_))));
        assert!(convert_uci("iris", "1,2,3,4,Iris-unknown\n").is_err());
        assert!(uci_url("mnist").is_none());
    }
}
