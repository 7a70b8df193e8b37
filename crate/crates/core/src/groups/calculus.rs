//! Difference operators on `F` and the homogeneity statements they satisfy relative to the
//! ideals `I_k`.

use std::sync::Arc;

use serde::Serialize;

use super::{difference_derivative, DiagonalUnit, DifferenceTable};
use crate::coeffalg::Algebra;
use crate::commfilt::FiltrationCache;
use crate::current::TensorContext;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::pairs::{is_nilpotent, CompatiblePair};
use crate::scalar::{add, sign, sub, unit_vec, SparseVec};
use crate::subspace::GradedSubspace;

/// `∂_m(u) = m u m^{-1} - u`, given `m^{-1}`.
pub fn partial(alg: &Algebra, m: &SparseVec, minv: &SparseVec, u: &SparseVec) -> SparseVec {
    sub(&alg.mul(&alg.mul(m, u), minv), u)
}

/// Whether `∂_m` sends every basis vector of `I_k` into `I_{k+1}`.
pub fn homogeneity_check_dm(filt: &mut FiltrationCache, m: &SparseVec, k: usize) -> Result<bool> {
    let alg = filt.algebra().clone();
    let minv = alg.inverse(m)?;
    let ik = filt.ideal_ik(k);
    let target = filt.ideal_ik(k + 1);
    Ok(ik
        .basis()
        .iter()
        .all(|b| target.contains(&partial(&alg, m, &minv, b))))
}

#[derive(Clone, Debug, Serialize)]
pub struct DijVerdict {
    /// `Δ^(j-i)(∂_{m_i}, ..., ∂_{m_j})` maps `I_k` into `I_{k+j+1-i}`.
    pub dij: bool,
    /// `Δ^(j-i)(m_i d_{i+1}...d_j, ..., m_j)` maps `I_k` into `I_{k+j-i}`.
    pub upper: bool,
}

/// Both homogeneity statements for the operators built from `m_i..m_j` (1-based), tested
/// on a basis of `I_k`. Fails with `PremiseViolated` unless every `m_ab` lies in `I_{b-a}`.
pub fn homogeneity_check_dij(
    filt: &mut FiltrationCache,
    ms: &[SparseVec],
    i: usize,
    j: usize,
    k: usize,
) -> Result<DijVerdict> {
    if i < 1 || i > j || j > ms.len() {
        return Err(Error::InvalidSize(format!(
            "need 1 <= i <= j <= {}",
            ms.len()
        )));
    }
    let alg = filt.algebra().clone();
    let table = DifferenceTable::new(&alg, ms)?;
    if !table.all_in_filtration(filt) {
        return Err(Error::PremiseViolated("some m_ij is not in I_{j-i}".into()));
    }
    let inv = ms
        .iter()
        .map(|m| alg.inverse(m))
        .collect::<Result<Vec<_>>>()?;
    let basis = filt.ideal_ik(k).basis();
    let lower = filt.ideal_ik(k + j + 1 - i);
    let upper_target = filt.ideal_ik(k + j - i);
    let mut verdict = DijVerdict {
        dij: true,
        upper: true,
    };
    for b in &basis {
        let parts: Vec<SparseVec> = (i..=j)
            .map(|t| partial(&alg, &ms[t - 1], &inv[t - 1], b))
            .collect();
        if verdict.dij && !lower.contains(&difference_derivative(&parts)?) {
            verdict.dij = false;
        }
        let seq = upper_sequence(&alg, ms, &inv, i, j, b);
        if verdict.upper && !upper_target.contains(&difference_derivative(&seq)?) {
            verdict.upper = false;
        }
    }
    Ok(verdict)
}

/// `(m_i d_{i+1}...d_j (u), m_{i+1} d_{i+2}...d_j (u), ..., m_j u)` with `d_t(x) = m_t x m_t^{-1}`
/// and `m_t` acting by left multiplication.
fn upper_sequence(
    alg: &Algebra,
    ms: &[SparseVec],
    inv: &[SparseVec],
    i: usize,
    j: usize,
    u: &SparseVec,
) -> Vec<SparseVec> {
    let mut out = vec![SparseVec::new(); j + 1 - i];
    let mut inner = u.clone();
    for t in (i..=j).rev() {
        out[t - i] = alg.mul(&ms[t - 1], &inner);
        inner = alg.mul(&alg.mul(&ms[t - 1], &inner), &inv[t - 1]);
    }
    out
}

/// The sequence `m_1, m_2, ..., m_l` with `Δ^(k)(m_1, ..., m_{k+1}) = h_k` for the given
/// `h_1, ..., h_{l-1}`. Each `h_k` must lie in `I_k`.
pub fn solve_m_from_h(
    filt: &mut FiltrationCache,
    m1: &SparseVec,
    hs: &[SparseVec],
) -> Result<Vec<SparseVec>> {
    let alg = filt.algebra().clone();
    alg.inverse(m1)?;
    for (k, h) in hs.iter().enumerate() {
        if !filt.in_ik(k + 1, h) {
            return Err(Error::PremiseViolated(format!(
                "h_{} is not in I_{}",
                k + 1,
                k + 1
            )));
        }
    }
    let mut ms = vec![m1.clone()];
    for (idx, h) in hs.iter().enumerate() {
        let k = idx + 1;
        // h_k = sum_{t<k} (-1)^t C(k,t) m_{t+1} + (-1)^k m_{k+1}
        let mut rest = ms.clone();
        rest.push(SparseVec::new());
        let partial_sum = difference_derivative(&rest)?;
        let next = crate::scalar::scaled(&sub(h, &partial_sum), &sign(k));
        ms.push(next);
    }
    Ok(ms)
}

/// `diag(f_1, ..., f_n)` with `f_{i+1} = m_i^{-1} f_i`, so that `m_i = f_i f_{i+1}^{-1}`.
pub fn diagonal_from_ratios(
    alg: &Arc<Algebra>,
    f1: &SparseVec,
    ms: &[SparseVec],
) -> Result<DiagonalUnit> {
    let mut fs = vec![f1.clone()];
    for m in ms {
        let prev = fs.last().unwrap();
        fs.push(alg.mul(&alg.inverse(m)?, prev));
    }
    DiagonalUnit::new(alg, fs)
}

#[derive(Clone, Debug, Serialize)]
pub struct InverseTableReport {
    /// every `m_ij` in `I_{j-i}`
    pub direct: bool,
    /// every `m*_ij` in `I_{j-i}`
    pub star: bool,
}

impl InverseTableReport {
    pub fn equivalent(&self) -> bool {
        self.direct == self.star
    }
}

pub fn inverse_table_check(
    filt: &mut FiltrationCache,
    ms: &[SparseVec],
) -> Result<InverseTableReport> {
    let alg = filt.algebra().clone();
    let table = DifferenceTable::new(&alg, ms)?;
    Ok(InverseTableReport {
        direct: table.all_in_filtration(filt),
        star: table.all_star_in_filtration(filt),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaToD {
    /// identity holds with `u' = f_j u f_j^{-1}`
    pub with_fj: bool,
    /// identity holds with `u' = f_{j+1} u f_{j+1}^{-1}`
    pub with_fj1: bool,
}

/// Evaluates `Δ^(j-i)(f_i u f_{i+1}^{-1}, ..., f_j u f_{j+1}^{-1})` against
/// `Δ^(j-i)(m_i d_{i+1}...d_j, ..., m_j)(u')` for both readings of `u'`, with
/// `m_t = f_t f_{t+1}^{-1}` and `1 <= i <= j < n`.
pub fn from_delta_to_d_check(
    d: &DiagonalUnit,
    u: &SparseVec,
    i: usize,
    j: usize,
) -> Result<DeltaToD> {
    let n = d.len();
    if i < 1 || i > j || j + 1 > n {
        return Err(Error::InvalidSize(format!("need 1 <= i <= j < {n}")));
    }
    let alg = d.algebra().clone();
    let ms = d.ratios();
    let inv = ms
        .iter()
        .map(|m| alg.inverse(m))
        .collect::<Result<Vec<_>>>()?;
    let lhs = difference_derivative(&(i..=j).map(|t| d.sandwich(t, u, t + 1)).collect::<Vec<_>>())?;
    let eval = |up: &SparseVec| -> Result<bool> {
        Ok(difference_derivative(&upper_sequence(&alg, &ms, &inv, i, j, up))? == lhs)
    };
    Ok(DeltaToD {
        with_fj: eval(&d.sandwich(j, u, j))?,
        with_fj1: eval(&d.sandwich(j + 1, u, j + 1))?,
    })
}

/// Nilpotent elements of `g` used for elementary generators: nilpotent basis vectors and
/// nilpotent sums and differences of two basis vectors.
pub fn nilpotent_elements(pair: &CompatiblePair) -> Vec<SparseVec> {
    let n = pair.size();
    let basis = pair.g_basis();
    let mut found = GradedSubspace::zero(pair.matrix_algebra().grading());
    let mut out = Vec::new();
    let mut consider = |v: SparseVec, out: &mut Vec<SparseVec>| {
        if !v.is_empty() && is_nilpotent(&Mat::from_sparse(n, &v)) && found.insert(&v) {
            out.push(v);
        }
    };
    for b in basis {
        consider(b.clone(), &mut out);
    }
    for (a, x) in basis.iter().enumerate() {
        for y in &basis[a + 1..] {
            consider(add(x, y), &mut out);
            consider(sub(x, y), &mut out);
        }
    }
    out
}

/// `exp(w ⊗ s)` for basis words `w` of degree at most `degree_cap` and nilpotent `s` in `g`.
/// The series is finite because `w ⊗ s` is nilpotent.
pub fn elementary_generators(
    pair: &CompatiblePair,
    tctx: &TensorContext,
    degree_cap: usize,
) -> Vec<SparseVec> {
    let Some(one) = tctx.one() else {
        return Vec::new();
    };
    let nil = nilpotent_elements(pair);
    let mut out = Vec::new();
    for w in tctx.coeffs().words_up_to(degree_cap) {
        for s in &nil {
            let x = tctx.pure(&unit_vec(w), s);
            let mut sum = one.clone();
            let mut term = one.clone();
            let mut k = 1i64;
            loop {
                term = crate::scalar::scaled(&tctx.mul(&term, &x), &crate::scalar::qr(1, k));
                if term.is_empty() {
                    break;
                }
                sum = add(&sum, &term);
                k += 1;
            }
            out.push(sum);
        }
    }
    out
}

/// Whether the two-sided ideal `F e F` is nilpotent.
pub fn is_stable_nilpotent(alg: &Arc<Algebra>, e: &SparseVec) -> bool {
    let dim = alg.dim();
    let mut gens = Vec::new();
    for a in 0..dim {
        let ae = alg.mul(&unit_vec(a), e);
        for b in 0..dim {
            gens.push(alg.mul(&ae, &unit_vec(b)));
        }
    }
    let ideal = GradedSubspace::span(alg.grading(), &gens);
    let mut power = ideal.clone();
    loop {
        if power.is_zero() {
            return true;
        }
        let next = alg.span_product(&power, &ideal);
        if next == power {
            return false;
        }
        power = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::current::lie_closure;
    use crate::groups::in_group_direct;
    use crate::pairs::{make_sl, make_sl2_irrep};

    fn ctx() -> Arc<Algebra> {
        Algebra::free(2, 4, true).unwrap()
    }

    #[test]
    fn partial_is_zero_for_central_units() {
        let f = ctx();
        let mut filt = FiltrationCache::new(&f);
        let three = f.parse("3").unwrap();
        assert!(partial(
            &f,
            &three,
            &f.inverse(&three).unwrap(),
            &f.parse("x*y").unwrap()
        )
        .is_empty());
        assert!(homogeneity_check_dm(&mut filt, &f.parse("1").unwrap(), 0).unwrap());
        assert!(homogeneity_check_dm(&mut filt, &f.parse("1+x").unwrap(), 0).unwrap());
        assert!(homogeneity_check_dm(&mut filt, &f.parse("1+x").unwrap(), 1).unwrap());
    }

    #[test]
    fn solving_for_ratios() {
        let f = ctx();
        let mut filt = FiltrationCache::new(&f);
        let m1 = f.parse("2+x").unwrap();
        let ms = solve_m_from_h(&mut filt, &m1, &[]).unwrap();
        assert_eq!(ms, vec![m1.clone()]);
        let h1 = f.parse("[x,y]").unwrap();
        let ms = solve_m_from_h(&mut filt, &m1, std::slice::from_ref(&h1)).unwrap();
        assert_eq!(ms[1], sub(&m1, &h1));
        let h2 = f.parse("[x,[x,y]]").unwrap();
        let ms = solve_m_from_h(&mut filt, &m1, &[h1, h2]).unwrap();
        let table = DifferenceTable::new(&f, &ms).unwrap();
        assert!(table.recursion_holds());
        assert!(table.first_row_in_filtration(&mut filt));
        assert!(table.all_in_filtration(&mut filt));
        let bad = solve_m_from_h(&mut filt, &m1, &[f.parse("x").unwrap()]);
        assert!(matches!(bad, Err(Error::PremiseViolated(_))));
    }

    #[test]
    fn premise_violation_is_reported() {
        let f = ctx();
        let mut filt = FiltrationCache::new(&f);
        let ms = vec![f.parse("1").unwrap(), f.parse("1+x").unwrap()];
        assert!(matches!(
            homogeneity_check_dij(&mut filt, &ms, 1, 2, 0),
            Err(Error::PremiseViolated(_))
        ));
    }

    #[test]
    fn dij_on_solved_instance() {
        let f = ctx();
        let mut filt = FiltrationCache::new(&f);
        let m1 = f.parse("1+[x,y]").unwrap();
        let ms = solve_m_from_h(&mut filt, &m1, &[f.parse("[x,y]*x").unwrap()]).unwrap();
        for k in 0..=1 {
            let v = homogeneity_check_dij(&mut filt, &ms, 1, 2, k).unwrap();
            assert!(v.dij && v.upper);
        }
    }

    #[test]
    fn delta_to_d_reading() {
        let f = ctx();
        let d = DiagonalUnit::parse(&f, "1+x ; 2-y ; 1+x*y").unwrap();
        let u = f.parse("y").unwrap();
        let r = from_delta_to_d_check(&d, &u, 1, 2).unwrap();
        assert!(r.with_fj1 && !r.with_fj);
    }

    #[test]
    fn elementary_generators_for_sl2() {
        let f = Algebra::free(2, 2, true).unwrap();
        let p = make_sl(2).unwrap();
        assert_eq!(nilpotent_elements(&p).len(), 2);
        let t = TensorContext::new(&f, 2);
        let gens = elementary_generators(&p, &t, 1);
        assert_eq!(gens.len(), 3 * 2);
        let p3 = make_sl2_irrep(3).unwrap();
        let t3 = TensorContext::new(&f, 3);
        let l3 = lie_closure(&p3, &t3, None);
        for g in elementary_generators(&p3, &t3, 1) {
            assert!(in_group_direct(&g, &p3, &t3, &l3).unwrap().member);
        }
    }

    #[test]
    fn stable_nilpotents() {
        let m = Algebra::matrices(2);
        assert!(!is_stable_nilpotent(&m, &m.parse("e12").unwrap()));
        assert!(is_stable_nilpotent(&m, &SparseVec::new()));
        let f = Algebra::free(2, 3, true).unwrap();
        assert!(is_stable_nilpotent(&f, &f.parse("x - y*x").unwrap()));
        assert!(!is_stable_nilpotent(&f, &f.parse("1 + x").unwrap()));
    }
}
