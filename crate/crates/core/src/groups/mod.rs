//! Current groups: conjugation in `(F ⊗ A)^×`, direct membership tests and the Cartan
//! criteria for diagonal matrices.
//!
//! Indices `i, j` of diagonal entries and difference tables are 1-based, matching the usual
//! way these formulas are written; vectors are stored 0-based.

pub mod battery;
pub mod calculus;

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::coeffalg::Algebra;
use crate::commfilt::FiltrationCache;
use crate::current::TensorContext;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::pairs::CompatiblePair;
use crate::scalar::{add_scaled, binomial, sign, sub, unit_vec, SparseVec, Q};
use crate::subspace::GradedSubspace;

pub use battery::{diagonal_battery, BatteryInstance, DiagKind};
pub use calculus::{
    diagonal_from_ratios, elementary_generators, from_delta_to_d_check, homogeneity_check_dij,
    homogeneity_check_dm, inverse_table_check, is_stable_nilpotent, partial, solve_m_from_h,
    DeltaToD, DijVerdict, InverseTableReport,
};

/// `diag(f_1, ..., f_n)` with every `f_i` a unit.
#[derive(Clone, Debug)]
pub struct DiagonalUnit {
    alg: Arc<Algebra>,
    fs: Vec<SparseVec>,
    inv: Vec<SparseVec>,
}

impl DiagonalUnit {
    pub fn new(alg: &Arc<Algebra>, fs: Vec<SparseVec>) -> Result<Self> {
        if fs.is_empty() {
            return Err(Error::InvalidSize(
                "a diagonal needs at least one entry".into(),
            ));
        }
        let inv = fs
            .iter()
            .map(|f| alg.inverse(f))
            .collect::<Result<Vec<_>>>()?;
        Ok(DiagonalUnit {
            alg: alg.clone(),
            fs,
            inv,
        })
    }

    /// Parses entries separated by `;`, e.g. `1 ; 1+[x,y] ; 1`.
    pub fn parse(alg: &Arc<Algebra>, text: &str) -> Result<Self> {
        let fs = text
            .split(';')
            .map(|t| alg.parse(t.trim()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alg, fs)
    }

    pub fn scalar(alg: &Arc<Algebra>, cs: &[Q]) -> Result<Self> {
        let one = alg
            .unit()
            .ok_or_else(|| Error::NonUnit("algebra has no unit".into()))?;
        Self::new(
            alg,
            cs.iter().map(|c| crate::scalar::scaled(&one, c)).collect(),
        )
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    /// `f_i`, 1-based.
    pub fn f(&self, i: usize) -> &SparseVec {
        &self.fs[i - 1]
    }

    /// `f_i^{-1}`, 1-based.
    pub fn f_inv(&self, i: usize) -> &SparseVec {
        &self.inv[i - 1]
    }

    pub fn entries(&self) -> &[SparseVec] {
        &self.fs
    }

    /// `m_i = f_i f_{i+1}^{-1}` for `i = 1..n-1`.
    pub fn ratios(&self) -> Vec<SparseVec> {
        (1..self.len())
            .map(|i| self.alg.mul(self.f(i), self.f_inv(i + 1)))
            .collect()
    }

    /// `f_i u f_j^{-1}`
    pub fn sandwich(&self, i: usize, u: &SparseVec, j: usize) -> SparseVec {
        self.alg.mul(&self.alg.mul(self.f(i), u), self.f_inv(j))
    }

    pub fn to_tensor(&self, tctx: &TensorContext) -> SparseVec {
        tctx.diagonal(&self.fs)
    }

    /// Top degree among the nonconstant terms of the entries.
    pub fn shift_degree(&self) -> usize {
        element_shift(&self.alg, self.fs.iter())
    }

    pub fn format(&self) -> String {
        self.fs
            .iter()
            .map(|f| self.alg.format(f))
            .collect::<Vec<_>>()
            .join(" ; ")
    }
}

fn element_shift<'a>(alg: &Algebra, vs: impl Iterator<Item = &'a SparseVec>) -> usize {
    let g = alg.grading();
    vs.flat_map(|v| v.keys().map(|&i| g.degree_of(i)))
        .max()
        .unwrap_or(0)
}

/// `sum_k (-1)^k C(l, k) m_{k+1}` for `l + 1` inputs.
pub fn difference_derivative(ms: &[SparseVec]) -> Result<SparseVec> {
    if ms.is_empty() {
        return Err(Error::InvalidSize(
            "difference derivative of an empty list".into(),
        ));
    }
    let l = ms.len() - 1;
    let mut out = SparseVec::new();
    for (k, m) in ms.iter().enumerate() {
        add_scaled(&mut out, m, &(sign(k) * binomial(l, k)));
    }
    Ok(out)
}

/// All `m_ij = Δ^(j-i)(m_i, ..., m_j)` and `m*_ij = Δ^(j-i)(m_i^{-1}, ..., m_j^{-1})`.
pub struct DifferenceTable {
    l: usize,
    m: Vec<Vec<SparseVec>>,
    mstar: Vec<Vec<SparseVec>>,
}

impl DifferenceTable {
    pub fn new(alg: &Algebra, ms: &[SparseVec]) -> Result<Self> {
        let inv = ms
            .iter()
            .map(|m| alg.inverse(m))
            .collect::<Result<Vec<_>>>()?;
        let l = ms.len();
        let build = |src: &[SparseVec]| -> Result<Vec<Vec<SparseVec>>> {
            (0..l)
                .map(|i| (i..l).map(|j| difference_derivative(&src[i..=j])).collect())
                .collect()
        };
        Ok(DifferenceTable {
            l,
            m: build(ms)?,
            mstar: build(&inv)?,
        })
    }

    pub fn len(&self) -> usize {
        self.l
    }

    pub fn is_empty(&self) -> bool {
        self.l == 0
    }

    pub fn m(&self, i: usize, j: usize) -> &SparseVec {
        &self.m[i - 1][j - i]
    }

    pub fn mstar(&self, i: usize, j: usize) -> &SparseVec {
        &self.mstar[i - 1][j - i]
    }

    /// `m_ij = m_{i,j-1} - m_{i+1,j}` for both tables.
    pub fn recursion_holds(&self) -> bool {
        for i in 1..=self.l {
            for j in i + 1..=self.l {
                if *self.m(i, j) != sub(self.m(i, j - 1), self.m(i + 1, j)) {
                    return false;
                }
                if *self.mstar(i, j) != sub(self.mstar(i, j - 1), self.mstar(i + 1, j)) {
                    return false;
                }
            }
        }
        true
    }

    /// `Δ^(k)(m_1, ..., m_{k+1}) ∈ I_k` for `k = 1..l-1`.
    pub fn first_row_in_filtration(&self, filt: &mut FiltrationCache) -> bool {
        (2..=self.l).all(|j| filt.in_ik(j - 1, self.m(1, j)))
    }

    /// `m_ij ∈ I_{j-i}` for all `i <= j`.
    pub fn all_in_filtration(&self, filt: &mut FiltrationCache) -> bool {
        self.table_in_filtration(filt, false)
    }

    /// `m*_ij ∈ I_{j-i}` for all `i <= j`.
    pub fn all_star_in_filtration(&self, filt: &mut FiltrationCache) -> bool {
        self.table_in_filtration(filt, true)
    }

    fn table_in_filtration(&self, filt: &mut FiltrationCache, star: bool) -> bool {
        for i in 1..=self.l {
            for j in i..=self.l {
                let v = if star { self.mstar(i, j) } else { self.m(i, j) };
                if !filt.in_ik(j - i, v) {
                    return false;
                }
            }
        }
        true
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectVerdict {
    pub member: bool,
    /// Largest degree of `u` tested.
    pub budget: usize,
    pub tested: usize,
    /// First failing `(u, s)` as basis indices of `F` and positions in the basis of `g`.
    pub failure: Option<(usize, usize)>,
}

/// Checks `g (u ⊗ s) g^{-1} ∈ L` for basis words `u` of degree at most `D - shift`, where
/// `shift` is the top degree of the nonconstant part of `g`, and `s` running over the basis
/// of `g`. `closure` should be the current algebra of the pair in this tensor context.
pub fn in_group_direct(
    g: &SparseVec,
    pair: &CompatiblePair,
    tctx: &TensorContext,
    closure: &GradedSubspace,
) -> Result<DirectVerdict> {
    let f = tctx.coeffs();
    let ginv = tctx.inverse(g)?;
    let words = match f.as_free() {
        Some(fc) => {
            let fg = f.grading();
            let shift = g
                .keys()
                .map(|&t| fg.degree_of(tctx.split(t).0))
                .max()
                .unwrap_or(0);
            if shift > fc.degree_cap() {
                return Err(Error::BudgetExhausted);
            }
            fc.degree_cap() - shift
        }
        None => 0,
    };
    let us = f.words_up_to(words);
    let mut tested = 0;
    for &w in &us {
        let u = unit_vec(w);
        for (si, s) in pair.g_basis().iter().enumerate() {
            let x = tctx.pure(&u, s);
            let c = tctx.mul(&tctx.mul(g, &x), &ginv);
            tested += 1;
            if !closure.contains(&c) {
                return Ok(DirectVerdict {
                    member: false,
                    budget: words,
                    tested,
                    failure: Some((w, si)),
                });
            }
        }
    }
    Ok(DirectVerdict {
        member: true,
        budget: words,
        tested,
        failure: None,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionVerdict {
    pub holds: bool,
    /// One entry per condition, in the order they are stated.
    pub conditions: Vec<bool>,
}

impl CriterionVerdict {
    fn from(conditions: Vec<bool>) -> Self {
        CriterionVerdict {
            holds: conditions.iter().all(|&b| b),
            conditions,
        }
    }
}

/// `f_i f_{n-i+1} - f_1 f_n ∈ I_1` for `i = 1..n`.
pub fn cartan_criterion_classical(
    d: &DiagonalUnit,
    filt: &mut FiltrationCache,
) -> Result<CriterionVerdict> {
    check_same(d, filt)?;
    let n = d.len();
    let alg = d.algebra().clone();
    let base = alg.mul(d.f(1), d.f(n));
    let conds = (1..=n)
        .map(|i| {
            let v = sub(&alg.mul(d.f(i), d.f(n + 1 - i)), &base);
            filt.in_ik(1, &v)
        })
        .collect();
    Ok(CriterionVerdict::from(conds))
}

/// `Δ^(k)(f_1 f_2^{-1}, ..., f_{k+1} f_{k+2}^{-1}) ∈ I_k` for `k = 1..n-2`.
pub fn cartan_criterion_sl2(
    d: &DiagonalUnit,
    filt: &mut FiltrationCache,
) -> Result<CriterionVerdict> {
    check_same(d, filt)?;
    if d.len() < 2 {
        return Err(Error::InvalidSize("the sl2 criterion needs n >= 2".into()));
    }
    let ms = d.ratios();
    let conds = (1..d.len().saturating_sub(1))
        .map(|k| Ok(filt.in_ik(k, &difference_derivative(&ms[..=k])?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(CriterionVerdict::from(conds))
}

fn check_same(d: &DiagonalUnit, filt: &FiltrationCache) -> Result<()> {
    if !Arc::ptr_eq(d.algebra(), filt.algebra()) {
        return Err(Error::ContextMismatch);
    }
    Ok(())
}

/// Which root vector of the `sl_2` triple is conjugated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Root {
    Raising,
    Lowering,
}

/// The sequences `f_i u f_{i+1}^{-1}` (raising) or `f_{n+1-i} u f_{n-i}^{-1}` (lowering),
/// `i = 1..n-1`.
pub fn conjugation_sequence(d: &DiagonalUnit, u: &SparseVec, root: Root) -> Vec<SparseVec> {
    let n = d.len();
    (1..n)
        .map(|i| match root {
            Root::Raising => d.sandwich(i, u, i + 1),
            Root::Lowering => d.sandwich(n + 1 - i, u, n - i),
        })
        .collect()
}

/// Memberships `Δ^(k)` of the raising and lowering sequences in `I_k`, `k = 1..n-2`.
pub fn stabilization_conditions(
    d: &DiagonalUnit,
    u: &SparseVec,
    filt: &mut FiltrationCache,
) -> Result<(Vec<bool>, Vec<bool>)> {
    check_same(d, filt)?;
    let n = d.len();
    let mut out = (Vec::new(), Vec::new());
    for (root, dst) in [(Root::Raising, &mut out.0), (Root::Lowering, &mut out.1)] {
        let seq = conjugation_sequence(d, u, root);
        for k in 1..n.saturating_sub(1) {
            dst.push(filt.in_ik(k, &difference_derivative(&seq[..=k])?));
        }
    }
    Ok(out)
}

/// `E^(k) = sum_{i=k+1}^{n-1} i C(i-1, k) E_{i,i+1}` for `k = 0..n-2`.
pub fn ek_basis(n: usize) -> Vec<Mat> {
    weighted_basis(n, |i| (i - 1, i))
}

/// `F^(k) = sum_{i=k+1}^{n-1} i C(i-1, k) E_{n+1-i,n-i}` for `k = 0..n-2`.
pub fn fk_basis(n: usize) -> Vec<Mat> {
    weighted_basis(n, |i| (n - i, n - i - 1))
}

fn weighted_basis(n: usize, pos: impl Fn(usize) -> (usize, usize)) -> Vec<Mat> {
    (0..n.saturating_sub(1))
        .map(|k| {
            let mut m = Mat::zeros(n, n);
            for i in k + 1..n {
                m[pos(i)] = Q::from_integer((i as i64).into()) * binomial(i - 1, k);
            }
            m
        })
        .collect()
}

/// Coefficients `c_k ∈ F` with `D (u ⊗ X) D^{-1} = sum_k c_k ⊗ X^(k)`, where `X` is the
/// raising or lowering element of the `sl_2` triple and `X^(k)` the matching basis above.
/// Computed by conjugating in `F ⊗ M_n` and solving in the basis.
pub fn conjugation_expansion(
    d: &DiagonalUnit,
    u: &SparseVec,
    tctx: &TensorContext,
    root: Root,
) -> Result<Vec<SparseVec>> {
    let n = d.len();
    if tctx.size() != n || !Arc::ptr_eq(tctx.coeffs(), d.algebra()) {
        return Err(Error::ContextMismatch);
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let [e, f, _] = crate::pairs::sl2_triple(n);
    let (x, basis) = match root {
        Root::Raising => (e, ek_basis(n)),
        Root::Lowering => (f, fk_basis(n)),
    };
    let dt = d.to_tensor(tctx);
    let conj = tctx.conjugate(&dt, &tctx.pure(u, &x.to_sparse()))?;
    // positions carrying the basis
    let pos: Vec<(usize, usize)> = (1..n)
        .map(|i| match root {
            Root::Raising => (i - 1, i),
            Root::Lowering => (n - i, n - i - 1),
        })
        .collect();
    let mut bmat = Mat::zeros(n - 1, n - 1);
    for (k, b) in basis.iter().enumerate() {
        for (r, &p) in pos.iter().enumerate() {
            bmat[(r, k)] = b[p].clone();
        }
    }
    let entries: Vec<SparseVec> = pos.iter().map(|&(i, j)| tctx.entry(&conj, i, j)).collect();
    let mut leftover = conj.clone();
    for (&(i, j), v) in pos.iter().zip(&entries) {
        add_scaled(
            &mut leftover,
            &tctx.pure(v, &unit_vec(i * n + j)),
            &-Q::one(),
        );
    }
    if !leftover.is_empty() {
        return Err(Error::Precondition(
            "conjugate leaves the root space".into(),
        ));
    }
    let fdim = d.algebra().dim();
    let mut coeffs = vec![SparseVec::new(); n - 1];
    for w in 0..fdim {
        let rhs: Vec<Q> = entries
            .iter()
            .map(|v| v.get(&w).cloned().unwrap_or_else(Q::zero))
            .collect();
        if rhs.iter().all(Zero::is_zero) {
            continue;
        }
        let sol = bmat
            .solve(&rhs)
            .ok_or_else(|| Error::Precondition("basis is singular".into()))?;
        for (k, c) in sol.into_iter().enumerate() {
            crate::scalar::add_term(&mut coeffs[k], w, c);
        }
    }
    Ok(coeffs)
}

/// `Δ^(k)` of the raising or lowering sequence, `k = 0..n-2`, without any sign.
pub fn expansion_deltas(d: &DiagonalUnit, u: &SparseVec, root: Root) -> Result<Vec<SparseVec>> {
    let seq = conjugation_sequence(d, u, root);
    (0..seq.len())
        .map(|k| difference_derivative(&seq[..=k]))
        .collect()
}

/// Which sign makes `c_k = s(k) Δ^(k)` hold for every `k`: `Some(0)` for `(-1)^k`,
/// `Some(1)` for `(-1)^{k+1}`, `None` if neither does.
pub fn expansion_sign(
    d: &DiagonalUnit,
    u: &SparseVec,
    tctx: &TensorContext,
    root: Root,
) -> Result<Option<usize>> {
    let cs = conjugation_expansion(d, u, tctx, root)?;
    let ds = expansion_deltas(d, u, root)?;
    for shift in 0..2 {
        if cs
            .iter()
            .zip(&ds)
            .enumerate()
            .all(|(k, (c, dl))| *c == crate::scalar::scaled(dl, &sign(k + shift)))
        {
            return Ok(Some(shift));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    /// `g (1 ⊗ s) g^{-1} ∈ L` for every basis element `s` of `g`.
    pub conjectural: bool,
    pub direct: bool,
    pub agree: bool,
    pub budget: usize,
}

/// Compares the conjugation test on `1 ⊗ g` alone with the full direct test.
pub fn conjecture_probe(
    g: &SparseVec,
    pair: &CompatiblePair,
    tctx: &TensorContext,
    closure: &GradedSubspace,
) -> Result<ConjectureReport> {
    let one = tctx
        .coeffs()
        .unit()
        .ok_or_else(|| Error::NonUnit("algebra has no unit".into()))?;
    let ginv = tctx.inverse(g)?;
    let conjectural = pair.g_basis().iter().all(|s| {
        let c = tctx.mul(&tctx.mul(g, &tctx.pure(&one, s)), &ginv);
        closure.contains(&c)
    });
    let direct = in_group_direct(g, pair, tctx, closure)?;
    Ok(ConjectureReport {
        conjectural,
        direct: direct.member,
        agree: conjectural == direct.member,
        budget: direct.budget,
    })
}
