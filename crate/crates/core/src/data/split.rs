use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Purpose};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitFractions {
    pub labeled: f64,
    pub unlabeled: f64,
    pub test: f64,
}

impl Default for SplitFractions {
    fn default() -> Self {
        SplitFractions { labeled: 0.2, unlabeled: 0.5, test: 0.3 }
    }
}

impl SplitFractions {
    /// Fractions with the unlabeled share taking the remainder.
    pub fn from_labeled_test(labeled: f64, test: f64) -> Self {
        SplitFractions { labeled, unlabeled: 1.0 - labeled - test, test }
    }

    pub fn validate(&self) -> Result<()> {
        let parts = [self.labeled, self.unlabeled, self.test];
        if parts.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::Validation(format!("split fractions must all be positive, got {parts:?}")));
        }
        let sum: f64 = parts.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!("split fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    fn as_array(&self) -> [f64; 3] {
        [self.labeled, self.unlabeled, self.test]
    }
}

/// Disjoint, ascending index sets covering `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitIndices {
    pub labeled: Vec<usize>,
    pub unlabeled: Vec<usize>,
    pub test: Vec<usize>,
    /// Classes that could not be represented in every part.
    pub warnings: Vec<String>,
}

impl SplitIndices {
    pub fn len(&self) -> usize {
        self.labeled.len() + self.unlabeled.len() + self.test.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Labeled and unlabeled rows, ascending.
    pub fn non_test(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.labeled.iter().chain(&self.unlabeled).copied().collect();
        v.sort_unstable();
        v
    }
}

/// Largest-remainder apportionment of `n` items over `fractions`; ties in the
/// remainder go to the earlier part.
fn apportion(n: usize, fractions: &[f64; 3]) -> [usize; 3] {
    let quotas = fractions.map(|f| n as f64 * f);
    let mut counts = quotas.map(|q| q.floor() as usize);
    let assigned: usize = counts.iter().sum();
    let mut order = [0, 1, 2];
    order.sort_by(|&a, &b| (quotas[b] - quotas[b].floor()).total_cmp(&(quotas[a] - quotas[a].floor())).then(a.cmp(&b)));
    for &k in order.iter().take(n.saturating_sub(assigned)) {
        counts[k] += 1;
    }
    counts
}

/// Per-class proportional split, shuffled by the seed's split stream.
pub fn stratified_split(labels: &[u8], fractions: &SplitFractions, seed: u64) -> Result<SplitIndices> {
    fractions.validate()?;
    let mut by_class: BTreeMap<u8, Vec<usize>> = BTreeMap::new();
    for (i, &y) in labels.iter().enumerate() {
        by_class.entry(y).or_default().push(i);
    }
    let mut rng = rng::stream(seed, Purpose::Split);
    let mut out = SplitIndices::default();
    for (class, mut idx) in by_class {
        idx.shuffle(&mut rng);
        let [nl, nu, _] = apportion(idx.len(), &fractions.as_array());
        let (l, rest) = idx.split_at(nl);
        let (u, t) = rest.split_at(nu);
        if l.is_empty() || u.is_empty() || t.is_empty() {
            let msg = format!(
                "class {class} ({} samples) split as {}/{}/{} labeled/unlabeled/test",
                idx.len(),
                l.len(),
                u.len(),
                t.len()
            );
            log::warn!("{msg}");
            out.warnings.push(msg);
        }
        out.labeled.extend_from_slice(l);
        out.unlabeled.extend_from_slice(u);
        out.test.extend_from_slice(t);
    }
    for part in [&mut out.labeled, &mut out.unlabeled, &mut out.test] {
        part.sort_unstable();
    }
    if out.labeled.is_empty() || out.unlabeled.is_empty() || out.test.is_empty() {
        return Err(Error::Validation(format!(
            "{} samples cannot fill every split part ({}/{}/{})",
            labels.len(),
            out.labeled.len(),
            out.unlabeled.len(),
            out.test.len()
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn proportional_allocation() {
        let labels: Vec<u8> = (0..100).map(|i| (i % 2) as u8).collect();
        let f = SplitFractions { labeled: 0.3, unlabeled: 0.5, test: 0.2 };
        let s = stratified_split(&labels, &f, 1).unwrap();
        assert_eq!(s.test.len(), 20);
        assert_eq!(s.test.iter().filter(|&&i| labels[i] == 1).count(), 10);
        assert_eq!((s.labeled.len(), s.unlabeled.len()), (30, 50));
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn largest_remainder() {
        // 7 × (0.2, 0.5, 0.3) = (1.4, 3.5, 2.1): floors (1, 3, 2), the spare goes to 0.5
        assert_eq!(apportion(7, &[0.2, 0.5, 0.3]), [1, 4, 2]);
        // 10 × thirds: equal remainders, earliest part wins
        assert_eq!(apportion(10, &[1.0 / 3.0; 3]), [4, 3, 3]);
        assert_eq!(apportion(0, &[0.2, 0.5, 0.3]), [0, 0, 0]);
    }

    #[test]
    fn seeded_determinism() {
        let labels: Vec<u8> = (0..57).map(|i| u8::from(i % 3 == 0)).collect();
        let f = SplitFractions::default();
        assert_eq!(stratified_split(&labels, &f, 9).unwrap(), stratified_split(&labels, &f, 9).unwrap());
        assert_ne!(stratified_split(&labels, &f, 9).unwrap(), stratified_split(&labels, &f, 10).unwrap());
    }

    #[test]
    fn invalid_fractions() {
        let labels = [0u8, 1, 0, 1];
        let f = SplitFractions { labeled: 1.0, unlabeled: 0.0, test: 0.0 };
        assert!(matches!(stratified_split(&labels, &f, 0), Err(Error::Validation(_))));
        let f = SplitFractions { labeled: 0.5, unlabeled: 0.5, test: 0.5 };
        assert!(stratified_split(&labels, &f, 0).is_err());
    }

    #[test]
    fn tiny_class_warns_but_proceeds() {
        let mut labels = vec![0u8; 40];
        labels.push(1);
        let s = stratified_split(&labels, &SplitFractions::default(), 3).unwrap();
        assert_eq!(s.warnings.len(), 1);
        assert_eq!(s.len(), 41);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        assert!(stratified_split(&[0, 1], &SplitFractions::default(), 0).is_err());
    }
}
