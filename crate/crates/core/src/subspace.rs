//! Graded subspaces of a finite-dimensional graded vector space with a fixed basis.
//!
//! Each degree block is kept in canonical reduced row-echelon form, so two subspaces
//! are equal exactly when their stored rows are equal.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{add_scaled, add_term, fmt_q, scaled, SparseVec, Q};

/// Per-degree dimensions of an ambient space. Basis indices are laid out degree by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    dims: Vec<usize>,
    offsets: Vec<usize>,
    additive: bool,
}

impl Grading {
    /// `additive` says that a product of degree `a` and degree `b` lands in degree `a + b`.
    pub fn new(dims: Vec<usize>, additive: bool) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut acc = 0;
        for d in &dims {
            offsets.push(acc);
            acc += d;
        }
        offsets.push(acc);
        Grading {
            dims,
            offsets,
            additive,
        }
    }

    /// An ungraded space: one block in degree 0.
    pub fn single(dim: usize) -> Self {
        Grading::new(vec![dim], false)
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn num_degrees(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, d: usize) -> usize {
        self.dims[d]
    }

    pub fn offset(&self, d: usize) -> usize {
        self.offsets[d]
    }

    pub fn is_additive(&self) -> bool {
        self.additive
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        // offsets is nondecreasing; blocks of size 0 are skipped by taking the last match
        match self.offsets.binary_search(&idx) {
            Ok(mut p) => {
                while p + 1 < self.dims.len() && self.dims[p] == 0 {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        }
    }

    /// Target degree of a product, or `None` if it leaves the truncated range.
    pub fn product_degree(&self, d1: usize, d2: usize) -> Option<usize> {
        if self.additive {
            let d = d1 + d2;
            (d < self.dims.len()).then_some(d)
        } else {
            Some(0)
        }
    }

    /// Splits `v` into its homogeneous components.
    pub fn components(&self, v: &SparseVec) -> BTreeMap<usize, SparseVec> {
        let mut out: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for (&i, c) in v {
            out.entry(self.degree_of(i))
                .or_default()
                .insert(i, c.clone());
        }
        out
    }

    pub fn check(&self, v: &SparseVec) -> Result<()> {
        match v.keys().next_back() {
            Some(&i) if i >= self.total() => Err(Error::DimensionMismatch {
                expected: self.total(),
                found: i + 1,
            }),
            _ => Ok(()),
        }
    }
}

/// A subspace in canonical reduced row-echelon form. Rows are keyed by pivot column.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Rref {
    rows: BTreeMap<usize, SparseVec>,
}

impl Rref {
    pub fn new() -> Self {
        Rref::default()
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Remainder of `v` modulo the subspace. Each row vanishes on every other pivot
    /// column, so one pass over the pivots present in `v` suffices.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let hits: Vec<(usize, Q)> = v
            .iter()
            .filter(|(i, _)| self.rows.contains_key(i))
            .map(|(&i, c)| (i, c.clone()))
            .collect();
        let mut out = v.clone();
        for (p, c) in hits {
            add_scaled(&mut out, &self.rows[&p], &-c);
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns the new normalized row when `v` was independent.
    pub fn insert(&mut self, v: &SparseVec) -> Option<SparseVec> {
        let r = self.reduce(v);
        let (&p, lead) = r.iter().next()?;
        let row = scaled(&r, &(Q::one() / lead));
        for other in self.rows.values_mut() {
            if let Some(c) = other.get(&p).cloned() {
                add_scaled(other, &row, &-c);
            }
        }
        self.rows.insert(p, row.clone());
        Some(row)
    }

    /// Builds from rows the caller guarantees to already be canonical.
    pub(crate) fn from_canonical(rows: Vec<SparseVec>) -> Self {
        let rows = rows
            .into_iter()
            .map(|r| (*r.keys().next().expect("zero row"), r))
            .collect();
        Rref { rows }
    }
}

/// A subspace of a graded space, one [`Rref`] block per degree.
#[derive(Clone, Debug)]
pub struct GradedSubspace {
    grading: Arc<Grading>,
    blocks: Vec<Rref>,
}

impl PartialEq for GradedSubspace {
    fn eq(&self, other: &Self) -> bool {
        self.grading == other.grading && self.blocks == other.blocks
    }
}

impl Eq for GradedSubspace {}

impl GradedSubspace {
    pub fn zero(grading: &Arc<Grading>) -> Self {
        GradedSubspace {
            grading: grading.clone(),
            blocks: vec![Rref::new(); grading.num_degrees()],
        }
    }

    pub fn full(grading: &Arc<Grading>) -> Self {
        let blocks = (0..grading.num_degrees())
            .map(|d| {
                let off = grading.offset(d);
                Rref::from_canonical(
                    (off..off + grading.dim(d))
                        .map(crate::scalar::unit_vec)
                        .collect(),
                )
            })
            .collect();
        GradedSubspace {
            grading: grading.clone(),
            blocks,
        }
    }

    pub fn span<'a, I>(grading: &Arc<Grading>, vectors: I) -> Self
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut s = GradedSubspace::zero(grading);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    /// Like [`span`](Self::span) but rejects vectors outside the ambient space.
    pub fn try_span<'a, I>(grading: &Arc<Grading>, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a SparseVec>,
    {
        let mut s = GradedSubspace::zero(grading);
        for v in vectors {
            grading.check(v)?;
            s.insert(v);
        }
        Ok(s)
    }

    pub(crate) fn from_blocks(grading: &Arc<Grading>, blocks: Vec<Rref>) -> Self {
        debug_assert_eq!(blocks.len(), grading.num_degrees());
        GradedSubspace {
            grading: grading.clone(),
            blocks,
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn block(&self, d: usize) -> &Rref {
        &self.blocks[d]
    }

    /// Inserts every homogeneous component of `v`. Returns true if the space grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut grew = false;
        for (d, c) in self.grading.components(v) {
            grew |= self.blocks[d].insert(&c).is_some();
        }
        grew
    }

    /// Inserts `v` and returns the components that were new, as normalized rows.
    pub fn insert_new(&mut self, v: &SparseVec) -> Vec<SparseVec> {
        let mut out = Vec::new();
        for (d, c) in self.grading.components(v) {
            if let Some(r) = self.blocks[d].insert(&c) {
                out.push(r);
            }
        }
        out
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.grading
            .components(v)
            .iter()
            .all(|(&d, c)| d < self.blocks.len() && self.blocks[d].contains(c))
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(Rref::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(Rref::is_empty)
    }

    pub fn dim_profile(&self) -> Vec<usize> {
        self.blocks.iter().map(Rref::dim).collect()
    }

    pub fn basis(&self) -> Vec<SparseVec> {
        self.blocks.iter().flat_map(|b| b.rows().cloned()).collect()
    }

    pub fn basis_in_degree(&self, d: usize) -> Vec<SparseVec> {
        self.blocks[d].rows().cloned().collect()
    }

    fn same_ambient(&self, other: &Self) -> Result<()> {
        if self.grading == other.grading {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let blocks = self
            .blocks
            .par_iter()
            .zip(other.blocks.par_iter())
            .map(|(a, b)| {
                let (mut big, small) = if a.dim() >= b.dim() {
                    (a.clone(), b)
                } else {
                    (b.clone(), a)
                };
                for r in small.rows() {
                    big.insert(r);
                }
                big
            })
            .collect();
        Ok(GradedSubspace::from_blocks(&self.grading, blocks))
    }

    /// In-place sum for callers that already know both sides share an ambient space.
    pub fn absorb(&mut self, other: &Self) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            for r in b.rows() {
                a.insert(r);
            }
        }
    }

    /// Zassenhaus: reduce rows `[v | v]` and `[w | 0]`; rows with empty left half span
    /// the intersection.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.same_ambient(other)?;
        let shift = self.grading.total();
        let blocks = self
            .blocks
            .par_iter()
            .zip(other.blocks.par_iter())
            .map(|(a, b)| {
                if a.is_empty() || b.is_empty() {
                    return Rref::new();
                }
                let mut z = Rref::new();
                for v in a.rows() {
                    let mut row = v.clone();
                    for (&i, c) in v {
                        row.insert(i + shift, c.clone());
                    }
                    z.insert(&row);
                }
                for w in b.rows() {
                    z.insert(w);
                }
                let mut out = Rref::new();
                for (p, row) in &z.rows {
                    if *p >= shift {
                        let v: SparseVec =
                            row.iter().map(|(&i, c)| (i - shift, c.clone())).collect();
                        out.insert(&v);
                    }
                }
                out
            })
            .collect();
        Ok(GradedSubspace::from_blocks(&self.grading, blocks))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a.rows().all(|r| b.contains(r))))
    }

    pub fn equals(&self, other: &Self) -> Result<bool> {
        self.same_ambient(other)?;
        Ok(self == other)
    }

    /// Span of `mul(a, b)` over basis rows `a` of `s1` and `b` of `s2`; the result lives in
    /// `target`. Degree pairs whose product leaves the truncated range are skipped.
    pub fn op_product<M>(s1: &Self, s2: &Self, target: &Arc<Grading>, mul: M) -> Self
    where
        M: Fn(&SparseVec, &SparseVec) -> SparseVec + Sync,
    {
        Self::op_general(s1, s2, target, |a, b| mul(a, b))
    }

    /// Span of `mul(a, b) - mul(b, a)`.
    pub fn op_bracket<M>(s1: &Self, s2: &Self, target: &Arc<Grading>, mul: M) -> Self
    where
        M: Fn(&SparseVec, &SparseVec) -> SparseVec + Sync,
    {
        Self::op_general(s1, s2, target, |a, b| {
            let mut v = mul(a, b);
            add_scaled(&mut v, &mul(b, a), &-Q::one());
            v
        })
    }

    fn op_general<M>(s1: &Self, s2: &Self, target: &Arc<Grading>, f: M) -> Self
    where
        M: Fn(&SparseVec, &SparseVec) -> SparseVec + Sync,
    {
        let nd = target.num_degrees();
        let mut jobs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); nd];
        for d1 in 0..s1.blocks.len() {
            if s1.blocks[d1].is_empty() {
                continue;
            }
            for d2 in 0..s2.blocks.len() {
                if s2.blocks[d2].is_empty() {
                    continue;
                }
                if let Some(d) = target.product_degree(d1, d2) {
                    jobs[d].push((d1, d2));
                }
            }
        }
        let graded = target.is_additive();
        let blocks: Vec<Rref> = if graded {
            jobs.par_iter()
                .map(|pairs| {
                    let mut r = Rref::new();
                    for &(d1, d2) in pairs {
                        for a in s1.blocks[d1].rows() {
                            for b in s2.blocks[d2].rows() {
                                let v = f(a, b);
                                if !v.is_empty() {
                                    r.insert(&v);
                                }
                            }
                        }
                    }
                    r
                })
                .collect()
        } else {
            // ungraded products can land anywhere; split by component afterwards
            let mut out = GradedSubspace::zero(target);
            for pairs in &jobs {
                for &(d1, d2) in pairs {
                    for a in s1.blocks[d1].rows() {
                        for b in s2.blocks[d2].rows() {
                            out.insert(&f(a, b));
                        }
                    }
                }
            }
            return out;
        };
        GradedSubspace::from_blocks(target, blocks)
    }

    /// The image of the subspace under a linear map.
    pub fn map<M>(&self, target: &Arc<Grading>, f: M) -> Self
    where
        M: Fn(&SparseVec) -> SparseVec,
    {
        let mut out = GradedSubspace::zero(target);
        for r in self.blocks.iter().flat_map(Rref::rows) {
            out.insert(&f(r));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Block {
            degree: usize,
            rows: Vec<Vec<(usize, String)>>,
        }
        let blocks: Vec<Block> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(degree, b)| Block {
                degree,
                rows: b
                    .rows()
                    .map(|r| r.iter().map(|(&i, c)| (i, fmt_q(c))).collect())
                    .collect(),
            })
            .collect();
        serde_json::to_value(blocks).expect("serializable")
    }
}

impl fmt::Display for GradedSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dims {:?}", self.dim_profile())
    }
}

/// Dense helper used by tests and the linear-map code: `v` written as a coordinate row.
pub fn coords(v: &SparseVec, len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    for (&i, c) in v {
        out[i] = c.clone();
    }
    out
}

pub fn from_coords(c: &[Q]) -> SparseVec {
    let mut v = SparseVec::new();
    for (i, x) in c.iter().enumerate() {
        add_term(&mut v, i, x.clone());
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, unit_vec};
    use proptest::prelude::*;

    fn grading() -> Arc<Grading> {
        Arc::new(Grading::new(vec![0, 2, 4], true))
    }

    fn vec_of(entries: &[(usize, i64)]) -> SparseVec {
        let mut v = SparseVec::new();
        for &(i, c) in entries {
            add_term(&mut v, i, q(c));
        }
        v
    }

    #[test]
    fn degree_lookup_skips_empty_blocks() {
        let g = grading();
        assert_eq!(g.degree_of(0), 1);
        assert_eq!(g.degree_of(1), 1);
        assert_eq!(g.degree_of(2), 2);
        assert_eq!(g.degree_of(5), 2);
    }

    #[test]
    fn span_of_multiples_is_one_dimensional() {
        let g = grading();
        let v = vec_of(&[(2, 1), (3, -2)]);
        let s = GradedSubspace::span(&g, [&v, &scaled(&v, &q(2))]);
        assert_eq!(s.dim_profile(), vec![0, 0, 1]);
        assert!(GradedSubspace::span(&g, []).is_zero());
    }

    #[test]
    fn span_splits_components() {
        let g = grading();
        let v = vec_of(&[(0, 1), (4, 3)]);
        let s = GradedSubspace::span(&g, [&v]);
        assert_eq!(s.dim_profile(), vec![0, 1, 1]);
        assert!(s.contains(&unit_vec(0)));
        assert!(!s.contains(&unit_vec(1)));
    }

    #[test]
    fn full_space() {
        let g = grading();
        let all: Vec<_> = (0..6).map(unit_vec).collect();
        assert_eq!(GradedSubspace::span(&g, &all), GradedSubspace::full(&g));
    }

    #[test]
    fn rejects_out_of_range() {
        let g = grading();
        assert!(GradedSubspace::try_span(&g, [&unit_vec(9)]).is_err());
    }

    fn arb_vec() -> impl Strategy<Value = SparseVec> {
        proptest::collection::vec((0usize..6, -3i64..4), 0..5).prop_map(|es| {
            let mut v = SparseVec::new();
            for (i, c) in es {
                add_term(&mut v, i, q(c));
            }
            v
        })
    }

    proptest! {
        #[test]
        fn rank_identity(a in proptest::collection::vec(arb_vec(), 0..5),
                         b in proptest::collection::vec(arb_vec(), 0..5)) {
            let g = grading();
            let s1 = GradedSubspace::span(&g, &a);
            let s2 = GradedSubspace::span(&g, &b);
            let s = s1.sum(&s2).unwrap();
            let i = s1.intersect(&s2).unwrap();
            for d in 0..3 {
                prop_assert_eq!(s.block(d).dim() + i.block(d).dim(), s1.block(d).dim() + s2.block(d).dim());
            }
            prop_assert!(i.is_subset(&s1).unwrap() && i.is_subset(&s2).unwrap());
            prop_assert_eq!(s1.intersect(&s1).unwrap(), s1.clone());
            prop_assert_eq!(s1.sum(&GradedSubspace::zero(&g)).unwrap(), s1.clone());
        }

        #[test]
        fn canonical_under_reordering(mut a in proptest::collection::vec(arb_vec(), 0..6)) {
            let g = grading();
            let s1 = GradedSubspace::span(&g, &a);
            a.reverse();
            let s2 = GradedSubspace::span(&g, &a);
            prop_assert_eq!(&s1, &s2);
            let again = GradedSubspace::span(&g, &s1.basis());
            prop_assert_eq!(s1, again);
        }
    }
}
