use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-paper citation counts of one venue, kept sorted non-increasing.
///
/// Every metric in this crate is a function of the multiset of counts, so
/// the original paper order is dropped on construction.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "Vec<u64>", from = "Vec<u64>")]
pub struct CitationVector(Vec<u64>);

impl CitationVector {
    pub fn new(mut counts: Vec<u64>) -> Self {
        counts.sort_unstable_by(|a, b| b.cmp(a));
        CitationVector(counts)
    }

    /// Number of papers (P).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Σc_i
    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, u64> {
        self.0.iter()
    }
}

impl From<Vec<u64>> for CitationVector {
    fn from(counts: Vec<u64>) -> Self {
        CitationVector::new(counts)
    }
}

impl From<CitationVector> for Vec<u64> {
    fn from(v: CitationVector) -> Self {
        v.0
    }
}

impl FromIterator<u64> for CitationVector {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        CitationVector::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CitationVector {
    type Item = &'a u64;
    type IntoIter = std::slice::Iter<'a, u64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Validates raw (possibly signed) counts and returns them in canonical order.
pub fn canonicalize(raw_counts: &[i64]) -> Result<CitationVector> {
    let counts = raw_counts
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            u64::try_from(value).map_err(|_| Error::NegativeCount { index, value })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CitationVector::new(counts))
}
