//! Index sets and downward-closed families of them.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{MascError, Result};

/// A subset of `{0, …, n-1}` stored as a strictly increasing index list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportSet {
    n: usize,
    indices: Vec<usize>,
}

impl SupportSet {
    /// Builds a support set from indices in any order; duplicates are rejected.
    pub fn new(n: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        if indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(MascError::input("support set contains a repeated index"));
        }
        if let Some(&last) = indices.last() {
            if last >= n {
                return Err(MascError::input(format!(
                    "index {last} out of range for ambient dimension {n}"
                )));
            }
        }
        Ok(SupportSet { n, indices })
    }

    pub(crate) fn from_sorted_unchecked(n: usize, indices: Vec<usize>) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(indices.last().is_none_or(|&i| i < n));
        SupportSet { n, indices }
    }

    pub fn empty(n: usize) -> Self {
        SupportSet { n, indices: Vec::new() }
    }

    /// The whole universe `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        SupportSet { n, indices: (0..n).collect() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    pub fn is_subset(&self, other: &SupportSet) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    pub fn complement(&self) -> SupportSet {
        let indices = (0..self.n).filter(|&i| !self.contains(i)).collect();
        SupportSet { n: self.n, indices }
    }

    pub fn intersection_len(&self, other: &SupportSet) -> usize {
        self.indices.iter().filter(|&&i| other.contains(i)).count()
    }

    pub fn with(&self, i: usize) -> SupportSet {
        let mut indices = self.indices.clone();
        if let Err(pos) = indices.binary_search(&i) {
            indices.insert(pos, i);
        }
        SupportSet { n: self.n, indices }
    }

    pub(crate) fn from_mask(n: usize, mask: u64) -> SupportSet {
        let indices = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        SupportSet { n, indices }
    }

    /// Parses a comma separated index list such as `0,4,7` (empty string = ∅).
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(SupportSet::empty(n));
        }
        let idx = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|_| MascError::input(format!("bad index `{t}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        SupportSet::new(n, idx)
    }
}

impl fmt::Debug for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices)
    }
}

impl fmt::Display for SupportSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for SupportSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.indices.serialize(s)
    }
}

/// A downward-closed family of supports, stored by its maximal faces.
///
/// The represented family is every subset of a maximal face, which always
/// includes `∅`. When `∅` is the only member, `maximal_faces == [∅]` and
/// `contains_empty_only` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexSummary {
    pub ambient_dim: usize,
    pub maximal_faces: Vec<SupportSet>,
    pub contains_empty_only: bool,
}

impl SimplicialComplexSummary {
    /// Reduces `faces` to its inclusion-maximal members.
    pub fn from_faces(n: usize, faces: Vec<SupportSet>) -> Self {
        let mut faces: Vec<SupportSet> = faces.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        faces.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        let mut maximal: Vec<SupportSet> = Vec::new();
        for f in faces {
            if !maximal.iter().any(|m| f.is_subset(m)) {
                maximal.push(f);
            }
        }
        if maximal.is_empty() {
            maximal.push(SupportSet::empty(n));
        }
        maximal.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let contains_empty_only = maximal.len() == 1 && maximal[0].is_empty();
        SimplicialComplexSummary { ambient_dim: n, maximal_faces: maximal, contains_empty_only }
    }

    pub fn contains(&self, s: &SupportSet) -> bool {
        self.maximal_faces.iter().any(|f| s.is_subset(f))
    }

    /// Every member of the family of cardinality `k`, in lexicographic order.
    pub fn faces_of_size(&self, k: usize) -> Vec<SupportSet> {
        use itertools::Itertools;
        let mut out = BTreeSet::new();
        for f in &self.maximal_faces {
            for c in f.indices().iter().copied().combinations(k) {
                out.insert(SupportSet::from_sorted_unchecked(self.ambient_dim, c));
            }
        }
        out.into_iter().collect()
    }

    /// Number of sets in the family, `∅` included.
    pub fn face_count(&self) -> usize {
        let top = self.maximal_faces.iter().map(SupportSet::len).max().unwrap_or(0);
        (0..=top).map(|k| self.faces_of_size(k).len()).sum()
    }

    /// `{"n": …, "maximal_faces": [[…], …]}`
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            n: usize,
            maximal_faces: &'a [SupportSet],
        }
        serde_json::to_string(&Out { n: self.ambient_dim, maximal_faces: &self.maximal_faces })
            .expect("support sets always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            maximal_faces: Vec<Vec<usize>>,
        }
        let raw: Raw = serde_json::from_str(text)?;
        let faces = raw
            .maximal_faces
            .into_iter()
            .map(|f| SupportSet::new(raw.n, f))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimplicialComplexSummary::from_faces(raw.n, faces))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(SupportSet::new(3, [0, 0]).is_err());
        assert!(SupportSet::new(3, [3]).is_err());
        let s = SupportSet::new(5, [4, 1]).unwrap();
        assert_eq!(s.indices(), &[1, 4]);
        assert_eq!(s.complement().indices(), &[0, 2, 3]);
        assert_eq!(SupportSet::parse(5, "4, 1").unwrap(), s);
        assert!(SupportSet::parse(5, "").unwrap().is_empty());
    }

    #[test]
    fn maximal_faces_drop_contained_sets() {
        let f = |v: &[usize]| SupportSet::new(4, v.iter().copied()).unwrap();
        let c = SimplicialComplexSummary::from_faces(4, vec![f(&[0]), f(&[0, 1]), f(&[2]), f(&[])]);
        assert_eq!(c.maximal_faces, vec![f(&[2]), f(&[0, 1])]);
        assert!(!c.contains_empty_only);
        assert!(c.contains(&f(&[1])));
        assert!(!c.contains(&f(&[1, 2])));
        // ∅, {0}, {1}, {2}, {0,1}
        assert_eq!(c.face_count(), 5);
        let back = SimplicialComplexSummary::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn empty_only_family() {
        let c = SimplicialComplexSummary::from_faces(3, vec![]);
        assert!(c.contains_empty_only);
        assert_eq!(c.to_json(), r#"{"n":3,"maximal_faces":[[]]}"#);
        assert_eq!(c.face_count(), 1);
    }
}
