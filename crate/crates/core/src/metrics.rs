//! Tense prediction accuracy, structure distributions and confusion counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tense_en::{SentenceLabel, TenseCategory};

/// How two sentence labels are compared.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComparisonMode {
    /// Same categories in the same order.
    Sequence,
    /// Same categories with the same multiplicities, any order.
    #[default]
    Multiset,
    /// Same distinct categories.
    Set,
}

impl ComparisonMode {
    pub const ALL: [ComparisonMode; 3] = [ComparisonMode::Sequence, ComparisonMode::Multiset, ComparisonMode::Set];

    pub fn as_str(self) -> &'static str {
        match self {
            ComparisonMode::Sequence => "sequence",
            ComparisonMode::Multiset => "multiset",
            ComparisonMode::Set => "set",
        }
    }

    /// Two empty labels are equal in every mode.
    pub fn equal(self, a: &SentenceLabel, b: &SentenceLabel) -> bool {
        match self {
            ComparisonMode::Sequence => a == b,
            ComparisonMode::Multiset => a.len() == b.len() && a.sorted() == b.sorted(),
            ComparisonMode::Set => a.distinct() == b.distinct(),
        }
    }
}

impl fmt::Display for ComparisonMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComparisonMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sequence" | "seq" => Ok(ComparisonMode::Sequence),
            "multiset" | "bag" => Ok(ComparisonMode::Multiset),
            "set" => Ok(ComparisonMode::Set),
            other => {
                Err(Error::Config(format!("unknown comparison mode `{other}` (expected sequence, multiset or set)")))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AccuracyResult {
    pub n_correct: usize,
    pub n_total: usize,
    pub accuracy: f64,
    pub mode: ComparisonMode,
}

fn check_aligned(refs: usize, hyps: usize) -> Result<()> {
    if refs != hyps {
        return Err(Error::LengthMismatch { what: "hypotheses".into(), left: hyps, right: refs });
    }
    if refs == 0 {
        return Err(Error::EmptyInput("no sentences to compare".into()));
    }
    Ok(())
}

/// Fraction of hypotheses whose label equals the reference label under
/// `mode`: `n_correct / n_total`.
pub fn tense_accuracy(refs: &[SentenceLabel], hyps: &[SentenceLabel], mode: ComparisonMode) -> Result<AccuracyResult> {
    check_aligned(refs.len(), hyps.len())?;
    let n_correct = refs.iter().zip(hyps).filter(|(r, h)| mode.equal(r, h)).count();
    let n_total = refs.len();
    Ok(AccuracyResult { n_correct, n_total, accuracy: n_correct as f64 / n_total as f64, mode })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CategoryShare {
    pub category: TenseCategory,
    pub count: usize,
    pub proportion: f64,
}

/// Occurrence counts of every category over a set of labels.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TenseDistribution {
    pub total: usize,
    pub sentences: usize,
    /// One entry per category, in canonical order.
    pub categories: Vec<CategoryShare>,
}

impl TenseDistribution {
    pub fn count(&self, c: TenseCategory) -> usize {
        self.categories[c.index()].count
    }

    pub fn proportion(&self, c: TenseCategory) -> f64 {
        self.categories[c.index()].proportion
    }
}

/// Count every structure occurrence, duplicates included. Proportions are
/// zero when no label has any structure.
pub fn distribution(labels: &[SentenceLabel]) -> Result<TenseDistribution> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("no labels".into()));
    }
    let mut counts = [0usize; 7];
    for l in labels {
        for c in l.categories() {
            counts[c.index()] += 1;
        }
    }
    let total: usize = counts.iter().sum();
    let categories = TenseCategory::ALL
        .iter()
        .map(|&category| {
            let count = counts[category.index()];
            let proportion = if total == 0 { 0.0 } else { count as f64 / total as f64 };
            CategoryShare { category, count, proportion }
        })
        .collect();
    Ok(TenseDistribution { total, sentences: labels.len(), categories })
}

/// Index of the null bucket in [`ConfusionMatrix::cells`].
pub const NULL: usize = 7;

/// Structure-level confusion counts. Rows are reference categories,
/// columns hypothesis categories; row and column [`NULL`] collect
/// structures of sentences whose labels differ in length.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix {
    pub cells: [[usize; 8]; 8],
    /// Hypothesis structures of length-mismatched sentences.
    pub unaligned_hyp: usize,
}

impl ConfusionMatrix {
    pub fn get(&self, r: TenseCategory, h: TenseCategory) -> usize {
        self.cells[r.index()][h.index()]
    }

    /// Reference structures in the null column.
    pub fn unaligned_ref(&self) -> usize {
        (0..7).map(|r| self.cells[r][NULL]).sum()
    }

    pub fn aligned(&self) -> usize {
        (0..7).flat_map(|r| (0..7).map(move |h| (r, h))).map(|(r, h)| self.cells[r][h]).sum()
    }

    pub fn diagonal(&self) -> usize {
        (0..7).map(|c| self.cells[c][c]).sum()
    }

    /// Diagonal mass over aligned mass; `None` when nothing aligned.
    pub fn structure_accuracy(&self) -> Option<f64> {
        let aligned = self.aligned();
        (aligned > 0).then(|| self.diagonal() as f64 / aligned as f64)
    }

    /// Per reference category: aligned structures and correctly predicted
    /// ones.
    pub fn per_category(&self) -> Vec<(TenseCategory, usize, usize)> {
        TenseCategory::ALL
            .iter()
            .map(|&c| {
                let row: usize = self.cells[c.index()][..7].iter().sum();
                (c, row, self.cells[c.index()][c.index()])
            })
            .collect()
    }
}

/// Align structures by position for sentences whose labels have equal
/// length; otherwise send the reference structures to the null column.
pub fn confusion(refs: &[SentenceLabel], hyps: &[SentenceLabel]) -> Result<ConfusionMatrix> {
    if refs.len() != hyps.len() {
        return Err(Error::LengthMismatch { what: "hypotheses".into(), left: hyps.len(), right: refs.len() });
    }
    let mut m = ConfusionMatrix::default();
    for (r, h) in refs.iter().zip(hyps) {
        if r.len() == h.len() {
            for (a, b) in r.categories().iter().zip(h.categories()) {
                m.cells[a.index()][b.index()] += 1;
            }
        } else {
            for a in r.categories() {
                m.cells[a.index()][NULL] += 1;
            }
            m.unaligned_hyp += h.len();
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(v: &[&str]) -> Vec<SentenceLabel> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    #[test]
    fn accuracy_examples() {
        let refs = labels(&["Present", "Past+Future", "Modal", ""]);
        assert_eq!(tense_accuracy(&refs, &refs, ComparisonMode::Sequence).unwrap().accuracy, 1.0);
        let hyps = labels(&["Present", "Future+Past", "Modal", "Past"]);
        let r = tense_accuracy(&refs, &hyps, ComparisonMode::Multiset).unwrap();
        assert_eq!((r.n_correct, r.n_total, r.accuracy), (3, 4, 0.75));
        assert_eq!(tense_accuracy(&refs, &hyps, ComparisonMode::Sequence).unwrap().n_correct, 2);
        let t1 = labels(&["PasPerfect"]);
        let t1h = labels(&["Past"]);
        for mode in ComparisonMode::ALL {
            assert_eq!(tense_accuracy(&t1, &t1h, mode).unwrap().n_correct, 0);
        }
    }

    #[test]
    fn accuracy_errors() {
        let a = labels(&["Past"]);
        assert!(matches!(tense_accuracy(&a, &[], ComparisonMode::Set), Err(Error::LengthMismatch { .. })));
        assert!(matches!(tense_accuracy(&[], &[], ComparisonMode::Set), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn modes_differ_on_duplicates() {
        let a = labels(&["Present+Present"]);
        let b = labels(&["Present"]);
        assert!(!ComparisonMode::Multiset.equal(&a[0], &b[0]));
        assert!(ComparisonMode::Set.equal(&a[0], &b[0]));
    }

    #[test]
    fn distribution_examples() {
        let d = distribution(&labels(&["Present+PrePerfect", "Present"])).unwrap();
        assert_eq!(d.total, 3);
        assert_eq!(d.count(TenseCategory::Present), 2);
        assert!((d.proportion(TenseCategory::Present) - 2.0 / 3.0).abs() < 1e-12);
        assert!((d.proportion(TenseCategory::PrePerfect) - 1.0 / 3.0).abs() < 1e-12);
        let d = distribution(&labels(&["Past"])).unwrap();
        assert_eq!(d.proportion(TenseCategory::Past), 1.0);
        assert!(distribution(&[]).is_err());
    }

    #[test]
    fn confusion_examples() {
        let refs = labels(&["PasPerfect", "Present+Future", "Modal"]);
        let hyps = labels(&["Past", "Present", "Modal"]);
        let m = confusion(&refs, &hyps).unwrap();
        assert_eq!(m.get(TenseCategory::PasPerfect, TenseCategory::Past), 1);
        assert_eq!(m.unaligned_ref(), 2);
        assert_eq!(m.unaligned_hyp, 1);
        assert_eq!(m.diagonal(), 1);
        assert_eq!(m.structure_accuracy(), Some(0.5));
        let same = confusion(&refs, &refs).unwrap();
        assert_eq!(same.diagonal(), same.aligned());
        assert_eq!(same.aligned(), 4);
    }
}
