//! Finite topological spaces presented by their specialization preorder.
//!
//! Convention used throughout the crate: `specializes(x, y)` holds iff
//! `x ∈ cl({y})`. Closed sets are the down-sets of this relation, open sets
//! the up-sets, and the least open set containing `x` is
//! `{y : specializes(x, y)}`.

use std::collections::HashMap;
use std::fmt;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A subset of the points of one finite space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet {
    bits: FixedBitSet,
}

impl PointSet {
    pub fn empty(n: usize) -> Self {
        PointSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        PointSet { bits }
    }

    pub fn singleton(n: usize, x: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(x);
        s
    }

    pub fn from_indices(n: usize, xs: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for x in xs {
            s.insert(x);
        }
        s
    }

    /// Bitmask constructor for spaces with at most 64 points.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        Self::from_indices(n, (0..n).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn mask(&self) -> u64 {
        self.iter().fold(0u64, |m, i| m | 1 << i)
    }

    /// Size of the ambient space.
    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.bits.contains(x)
    }

    pub fn insert(&mut self, x: usize) {
        self.bits.insert(x);
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn complement(&self) -> PointSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        PointSet { bits }
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.minimum()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite topological space as a preorder on named points.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    names: Vec<String>,
    index: HashMap<String, usize>,
    /// `down[y]` = `cl({y})` = `{x : x ≼ y}`.
    down: Vec<PointSet>,
    /// `up[x]` = least open set containing `x` = `{y : x ≼ y}`.
    up: Vec<PointSet>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<(&str, &str)> = self
            .covering_pairs()
            .into_iter()
            .map(|(x, y)| (self.name(x), self.name(y)))
            .collect();
        f.debug_struct("FiniteSpace")
            .field("points", &self.names)
            .field("covers", &pairs)
            .finish()
    }
}

impl FiniteSpace {
    /// Builds a space from names and generating pairs `(x, y)` meaning
    /// `x ∈ cl({y})`. The relation is closed reflexively and transitively.
    pub fn build<S: AsRef<str>>(points: &[S], pairs: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = points.iter().map(|p| p.as_ref().to_owned()).collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::Name(name.clone()));
            }
        }
        let lookup = |s: &S| {
            index
                .get(s.as_ref())
                .copied()
                .ok_or_else(|| Error::Name(s.as_ref().to_owned()))
        };
        let idx_pairs = pairs
            .iter()
            .map(|(x, y)| Ok((lookup(x)?, lookup(y)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indexed(names, &idx_pairs)
    }

    /// Index-based constructor; names are taken as given.
    pub fn from_indexed(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        let mut rel = vec![vec![false; n]; n];
        for (i, row) in rel.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Name(format!("#{}", x.max(y))));
            }
            rel[x][y] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if rel[i][k] {
                    let row = rel[k].clone();
                    for (r, &b) in rel[i].iter_mut().zip(&row) {
                        *r |= b;
                    }
                }
            }
        }
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect::<HashMap<_, _>>();
        if index.len() != n {
            let dup = names
                .iter()
                .enumerate()
                .find(|(i, s)| index[*s] != *i)
                .map(|(_, s)| s.clone())
                .unwrap_or_default();
            return Err(Error::Name(dup));
        }
        let up = (0..n)
            .map(|x| PointSet::from_indices(n, (0..n).filter(|&y| rel[x][y])))
            .collect();
        let down = (0..n)
            .map(|y| PointSet::from_indices(n, (0..n).filter(|&x| rel[x][y])))
            .collect();
        Ok(FiniteSpace {
            names,
            index,
            down,
            up,
        })
    }

    /// Space on points `p0..p{n-1}` given by a relation matrix that must
    /// already be a preorder (used by the census).
    pub(crate) fn from_preorder_matrix(rel: &[u64]) -> Self {
        let n = rel.len();
        let names = (0..n).map(|i| format!("p{i}")).collect::<Vec<_>>();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let up = (0..n).map(|x| PointSet::from_mask(n, rel[x])).collect();
        let down = (0..n)
            .map(|y| PointSet::from_indices(n, (0..n).filter(|&x| rel[x] >> y & 1 == 1)))
            .collect();
        FiniteSpace {
            names,
            index,
            down,
            up,
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: usize) -> &str {
        &self.names[x]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::Name(name.to_owned()))
    }

    pub fn set_of<S: AsRef<str>>(&self, names: &[S]) -> Result<PointSet> {
        let mut s = self.empty_set();
        for name in names {
            s.insert(self.index_of(name.as_ref())?);
        }
        Ok(s)
    }

    pub fn names_of(&self, s: &PointSet) -> Vec<String> {
        s.iter().map(|i| self.names[i].clone()).collect()
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// `x ∈ cl({y})`.
    pub fn specializes(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn point_closure(&self, y: usize) -> &PointSet {
        &self.down[y]
    }

    pub fn minimal_open(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    /// Smallest closed (down-closed) superset.
    pub fn closure(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for y in s.iter() {
            out.union_with(&self.down[y]);
        }
        out
    }

    /// Smallest open (up-closed) superset.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for x in s.iter() {
            out.union_with(&self.up[x]);
        }
        out
    }

    /// Largest open subset.
    pub fn interior(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.up[x].is_subset(s)),
        )
    }

    pub fn is_closed(&self, s: &PointSet) -> bool {
        s.iter().all(|y| self.down[y].is_subset(s))
    }

    pub fn is_open(&self, s: &PointSet) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// `s` is a neighbourhood of every point of `of`.
    pub fn is_neighborhood(&self, s: &PointSet, of: &PointSet) -> bool {
        self.open_hull(of).is_subset(s)
    }

    /// Connected components of the comparability graph.
    pub fn comparability_partition(&self) -> Partition {
        Partition::from_unions(
            self.len(),
            (0..self.len()).flat_map(|x| self.up[x].iter().map(move |y| (x, y))),
        )
    }

    /// Finite Hausdorff spaces are exactly the discrete ones.
    pub fn is_discrete(&self) -> bool {
        (0..self.len()).all(|x| self.up[x].len() == 1)
    }

    /// Transitive reduction of the specialization relation: mutually
    /// specializing points are joined in a cycle (in index order), and
    /// distinct equivalence classes are linked through their least members
    /// when nothing lies strictly between them.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let equiv = |a: usize, b: usize| self.specializes(a, b) && self.specializes(b, a);
        let rep = |x: usize| (0..n).find(|&z| equiv(x, z)).unwrap_or(x);
        let mut out = Vec::new();
        for x in (0..n).filter(|&x| rep(x) == x) {
            let members: Vec<usize> = (0..n).filter(|&z| equiv(x, z)).collect();
            if members.len() > 1 {
                for w in members.windows(2) {
                    out.push((w[0], w[1]));
                }
                out.push((members[members.len() - 1], members[0]));
            }
        }
        for x in (0..n).filter(|&x| rep(x) == x) {
            for y in (0..n).filter(|&y| rep(y) == y && y != x) {
                if !self.specializes(x, y) {
                    continue;
                }
                let between = (0..n).any(|z| {
                    rep(z) == z && z != x && z != y && self.specializes(x, z) && self.specializes(z, y)
                });
                if !between {
                    out.push((x, y));
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// A continuous self-map of a finite space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfMap {
    image: Vec<usize>,
}

impl SelfMap {
    /// Validates `assignment[x] = f(x)` for monotonicity w.r.t. specialization,
    /// which on finite spaces is exactly continuity.
    pub fn validate(space: &FiniteSpace, assignment: Vec<usize>) -> Result<Self> {
        let n = space.len();
        if assignment.len() != n {
            return Err(Error::Name(format!(
                "map assigns {} points, space has {n}",
                assignment.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= n) {
            return Err(Error::Name(format!("#{bad}")));
        }
        if let Some((x, y)) = Self::continuity_witness(space, &assignment) {
            return Err(Error::Continuity {
                x: space.name(x).to_owned(),
                y: space.name(y).to_owned(),
            });
        }
        Ok(SelfMap { image: assignment })
    }

    /// First pair (in index order) with `x ≼ y` but `f(x) ⋠ f(y)`.
    pub fn continuity_witness(space: &FiniteSpace, f: &[usize]) -> Option<(usize, usize)> {
        let n = space.len();
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .find(|&(x, y)| space.specializes(x, y) && !space.specializes(f[x], f[y]))
    }

    pub fn validate_named<S: AsRef<str>>(space: &FiniteSpace, pairs: &[(S, S)]) -> Result<Self> {
        let mut image = vec![usize::MAX; space.len()];
        for (x, fx) in pairs {
            let xi = space.index_of(x.as_ref())?;
            if image[xi] != usize::MAX {
                return Err(Error::Name(x.as_ref().to_owned()));
            }
            image[xi] = space.index_of(fx.as_ref())?;
        }
        if let Some(missing) = image.iter().position(|&v| v == usize::MAX) {
            return Err(Error::Name(space.name(missing).to_owned()));
        }
        Self::validate(space, image)
    }

    pub(crate) fn unchecked(image: Vec<usize>) -> Self {
        SelfMap { image }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.image
    }
}

/// A finite topological dynamical system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSystem {
    space: FiniteSpace,
    map: SelfMap,
}

impl FiniteSystem {
    pub fn new(space: FiniteSpace, assignment: Vec<usize>) -> Result<Self> {
        let map = SelfMap::validate(&space, assignment)?;
        Ok(FiniteSystem { space, map })
    }

    pub(crate) fn from_parts_unchecked(space: FiniteSpace, map: SelfMap) -> Self {
        FiniteSystem { space, map }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn map(&self) -> &SelfMap {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    pub fn image(&self, s: &PointSet) -> PointSet {
        PointSet::from_indices(self.len(), s.iter().map(|x| self.map.apply(x)))
    }

    /// Smallest forward-invariant superset: `⋃_{n≥0} φⁿ(s)`.
    pub fn forward_saturation(&self, s: &PointSet) -> PointSet {
        let mut out = s.clone();
        let mut frontier: Vec<usize> = s.iter().collect();
        while let Some(x) = frontier.pop() {
            let y = self.map.apply(x);
            if !out.contains(y) {
                out.insert(y);
                frontier.push(y);
            }
        }
        out
    }

    pub fn is_invariant(&self, s: &PointSet) -> bool {
        s.iter().all(|x| s.contains(self.map.apply(x)))
    }
}
