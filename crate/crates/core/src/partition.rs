//! Equivalence relations on the points of a finite space.

use petgraph::unionfind::UnionFind;

use crate::error::{Error, Result};
use crate::topology::{FiniteSpace, PointSet};

/// A partition of `0..n` into nonempty disjoint classes.
///
/// Class ids are assigned in order of each class's least point, so two equal
/// relations always have identical representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
    classes: Vec<PointSet>,
}

impl Partition {
    /// Canonicalises an arbitrary labelling.
    pub fn from_labels(labels: &[usize]) -> Self {
        let n = labels.len();
        let mut remap = std::collections::HashMap::new();
        let mut class_of = Vec::with_capacity(n);
        for &l in labels {
            let next = remap.len();
            class_of.push(*remap.entry(l).or_insert(next));
        }
        let mut classes = vec![PointSet::empty(n); remap.len()];
        for (x, &c) in class_of.iter().enumerate() {
            classes[c].insert(x);
        }
        Partition { class_of, classes }
    }

    /// Finest equivalence containing the given pairs.
    pub fn from_unions(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut uf = UnionFind::<usize>::new(n);
        for (x, y) in pairs {
            uf.union(x, y);
        }
        Self::from_labels(&uf.into_labeling())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn single(n: usize) -> Self {
        Self::from_labels(&vec![0; n])
    }

    /// The equivalence generated by a cover `(K_x)` indexed by points:
    /// `x ∼ y` iff a chain of pairwise-overlapping members links them.
    /// Each class is the union of the members indexed by its points.
    pub fn generated_by_cover(space: &FiniteSpace, cover: &[PointSet]) -> Result<Self> {
        let n = space.len();
        if cover.len() != n {
            return Err(Error::Cover(format!(
                "cover has {} members for {n} points",
                cover.len()
            )));
        }
        if let Some(x) = (0..n).find(|&x| !cover[x].contains(x)) {
            return Err(Error::Cover(space.name(x).to_owned()));
        }
        // x ∈ K_x, so merging every member of K_x with x realises the chains.
        Ok(Self::from_unions(
            n,
            cover
                .iter()
                .enumerate()
                .flat_map(|(x, k)| k.iter().map(move |y| (x, y))),
        ))
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_id(&self, x: usize) -> usize {
        self.class_of[x]
    }

    pub fn class_of(&self, x: usize) -> &PointSet {
        &self.classes[self.class_of[x]]
    }

    pub fn classes(&self) -> &[PointSet] {
        &self.classes
    }

    pub fn labels(&self) -> &[usize] {
        &self.class_of
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.class_of[x] == self.class_of[y]
    }

    /// Union of all classes meeting `s`.
    pub fn saturate(&self, s: &PointSet) -> PointSet {
        let mut out = PointSet::empty(self.len());
        let mut seen = vec![false; self.classes.len()];
        for x in s.iter() {
            let c = self.class_of[x];
            if !seen[c] {
                seen[c] = true;
                out.union_with(&self.classes[c]);
            }
        }
        out
    }

    pub fn is_saturated(&self, s: &PointSet) -> bool {
        self.saturate(s) == *s
    }

    /// Every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        self.classes.iter().all(|c| {
            let first = c.first().expect("nonempty class");
            c.iter().all(|y| coarser.same_class(first, y))
        })
    }

    pub fn is_single(&self) -> bool {
        self.classes.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(n: usize) -> FiniteSpace {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        FiniteSpace::build(&names, &[]).unwrap()
    }

    #[test]
    fn singleton_cover_is_identity() {
        let s = space(4);
        let cover: Vec<_> = (0..4).map(|x| PointSet::singleton(4, x)).collect();
        assert_eq!(
            Partition::generated_by_cover(&s, &cover).unwrap(),
            Partition::identity(4)
        );
    }

    #[test]
    fn whole_space_cover_is_single() {
        let s = space(3);
        let cover = vec![PointSet::full(3); 3];
        assert!(Partition::generated_by_cover(&s, &cover).unwrap().is_single());
    }

    #[test]
    fn cover_must_contain_index() {
        let s = space(2);
        let cover = vec![PointSet::singleton(2, 1), PointSet::singleton(2, 1)];
        assert_eq!(
            Partition::generated_by_cover(&s, &cover).unwrap_err(),
            Error::Cover("0".into())
        );
    }

    #[test]
    fn chained_overlaps_merge() {
        let s = space(5);
        let cover = vec![
            PointSet::from_indices(5, [0, 1]),
            PointSet::from_indices(5, [1]),
            PointSet::from_indices(5, [2, 1]),
            PointSet::from_indices(5, [3]),
            PointSet::from_indices(5, [4, 3]),
        ];
        let p = Partition::generated_by_cover(&s, &cover).unwrap();
        assert_eq!(p.labels(), &[0, 0, 0, 1, 1]);
    }

    #[test]
    fn canonical_ids_follow_least_point() {
        let p = Partition::from_labels(&[7, 3, 7, 9]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
    }

    #[test]
    fn saturation_and_refinement() {
        let p = Partition::from_labels(&[0, 0, 1, 2]);
        let s = PointSet::from_indices(4, [1, 3]);
        assert_eq!(p.saturate(&s), PointSet::from_indices(4, [0, 1, 3]));
        assert!(Partition::identity(4).refines(&p));
        assert!(p.refines(&Partition::single(4)));
        assert!(!Partition::single(4).refines(&p));
    }
}
