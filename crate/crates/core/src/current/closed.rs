//! Closed-form descriptions of current algebras and their upper bounds, assembled from the
//! commutator filtration of `F` and products of powers of `g`.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::tensor::TensorContext;
use crate::commfilt::FiltrationCache;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::pairs::{kernel_of_form, CompatiblePair, PairType};
use crate::scalar::{SparseVec, Q};
use crate::subspace::GradedSubspace;

/// Deliberate corruption of one formula, used to check that the test suites can tell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Uses `I_k` instead of `I_{k-1}` in front of `(g^k)_+` in the semisimple form.
    ShiftSemisimpleIndex,
}

pub struct ClosedForms<'a> {
    pair: &'a CompatiblePair,
    tctx: &'a TensorContext,
    filt: FiltrationCache,
    jfilt: FiltrationCache,
    fbr: HashMap<usize, GradedSubspace>,
    mutation: Mutation,
}

impl<'a> ClosedForms<'a> {
    pub fn new(pair: &'a CompatiblePair, tctx: &'a TensorContext) -> Self {
        ClosedForms {
            pair,
            tctx,
            filt: FiltrationCache::new(tctx.coeffs()),
            jfilt: FiltrationCache::with_subspace(pair.matrix_algebra(), pair.g_space().clone()),
            fbr: HashMap::new(),
            mutation: Mutation::None,
        }
    }

    pub fn with_mutation(mut self, m: Mutation) -> Self {
        self.mutation = m;
        self
    }

    pub fn filtration(&mut self) -> &mut FiltrationCache {
        &mut self.filt
    }

    fn full_f(&self) -> GradedSubspace {
        self.tctx.coeffs().full_space()
    }

    fn zero(&self) -> GradedSubspace {
        GradedSubspace::zero(self.tctx.grading())
    }

    fn t(&self, e: &GradedSubspace, b: &GradedSubspace) -> GradedSubspace {
        self.tctx.tensor_span(e, b)
    }

    fn mspan(&self, vs: &[SparseVec]) -> GradedSubspace {
        GradedSubspace::span(self.pair.matrix_algebra().grading(), vs)
    }

    /// `[F, I_k]`
    fn f_bracket_ik(&mut self, k: usize) -> GradedSubspace {
        if let Some(s) = self.fbr.get(&k) {
            return s.clone();
        }
        let ik = self.filt.ideal_ik(k);
        let out = self.tctx.coeffs().span_bracket(&self.full_f(), &ik);
        self.fbr.insert(k, out.clone());
        out
    }

    /// `F' = [F, F]`
    fn f_prime(&mut self) -> GradedSubspace {
        self.filt.commutator_space(1)
    }

    /// `F F'`
    fn f_f_prime(&mut self) -> GradedSubspace {
        let fp = self.f_prime();
        self.tctx.coeffs().span_product(&self.full_f(), &fp)
    }

    /// Largest `k` whose term in the upper bound can contribute anything new: past the
    /// type, past the point where `g^k` stops changing, or past the degree cap of a free `F`.
    pub fn k_horizon(&self) -> usize {
        let mut h = self.pair.stabilization_point();
        if let PairType::Finite(t) = self.pair.pair_type() {
            h = h.min(t.saturating_sub(1));
        }
        if let Some(fc) = self.tctx.coeffs().as_free() {
            h = h.min(fc.degree_cap().saturating_sub(1));
        }
        h
    }

    /// `F · g`
    pub fn fg(&self) -> GradedSubspace {
        self.t(&self.full_f(), self.pair.g_space())
    }

    /// `F · <g>_m = sum_{k=1..m} F · g^k`
    pub fn f_enveloping(&self, m: usize) -> GradedSubspace {
        let f = self.full_f();
        let mut acc = self.zero();
        for k in 1..=m {
            acc.absorb(&self.t(&f, &self.pair.g_power(k)));
        }
        acc
    }

    /// The upper bound `F g + sum_k I_k [g, g^{k+1}] + [F, I_{k-1}] g^{k+1}`, or its filtered
    /// version built from `I_k^{<= m-k}` when `m_cap` is given.
    pub fn tilde_bound(&mut self, m_cap: Option<usize>) -> GradedSubspace {
        let mut acc = self.fg();
        match m_cap {
            None => {
                for k in 1..=self.k_horizon() {
                    let ik = self.filt.ideal_ik(k);
                    let fb = self.f_bracket_ik(k - 1);
                    acc.absorb(&self.t(&ik, &self.pair.bracket_power(k + 1)));
                    acc.absorb(&self.t(&fb, &self.pair.g_power(k + 1)));
                }
            }
            Some(m) => {
                let f = self.full_f();
                for k in 1..m {
                    let ik = self.filt.ideal_ik_le(k, m - k);
                    let prev = self.filt.ideal_ik_le(k - 1, m - k);
                    let fb = self.tctx.coeffs().span_bracket(&f, &prev);
                    acc.absorb(&self.t(&ik, &self.pair.bracket_power(k + 1)));
                    acc.absorb(&self.t(&fb, &self.pair.g_power(k + 1)));
                }
            }
        }
        acc
    }

    fn overline_term(&mut self, k1: usize, k2: usize, l1: usize, l2: usize) -> GradedSubspace {
        let falg = self.tctx.coeffs().clone();
        let malg = self.pair.matrix_algebra().clone();
        let i1 = self.filt.ideal_ikl(k1, l1 + 1);
        let i2 = self.filt.ideal_ikl(k2, l2 + 1);
        let j1 = self.jfilt.ideal_ikl(l1, k1 + 1);
        let j2 = self.jfilt.ideal_ikl(l2, k2 + 1);
        let mut out = self.t(&falg.span_product(&i1, &i2), &malg.span_bracket(&j1, &j2));
        out.absorb(&self.t(&falg.span_bracket(&i1, &i2), &malg.span_product(&j2, &j1)));
        out
    }

    /// The refined upper bound. Unfiltered, the index layers `k1 + k2 + l1 + l2 = s` are added
    /// in order of `s` until two consecutive layers add nothing (or, for a nonunital free `F`,
    /// until every product has degree above the cap). Filtered, layers with `s + 2 <= m`.
    pub fn overline_bound(&mut self, m_cap: Option<usize>) -> GradedSubspace {
        let mut acc = self.fg();
        let f = self.tctx.coeffs().clone();
        let degree_limit = match (f.as_free(), f.is_unital()) {
            (Some(fc), false) => Some(fc.degree_cap()),
            _ => None,
        };
        let mut quiet = 0;
        let mut s = 0;
        loop {
            if let Some(m) = m_cap {
                if s + 2 > m {
                    break;
                }
            }
            if let Some(d) = degree_limit {
                if s + 2 > d {
                    break;
                }
            }
            let before = acc.dim();
            for k1 in 0..=s {
                for k2 in 0..=s - k1 {
                    for l1 in 0..=s - k1 - k2 {
                        let l2 = s - k1 - k2 - l1;
                        let term = self.overline_term(k1, k2, l1, l2);
                        acc.absorb(&term);
                    }
                }
            }
            if m_cap.is_none() {
                quiet = if acc.dim() == before { quiet + 1 } else { 0 };
                if quiet == 2 {
                    break;
                }
            }
            s += 1;
        }
        acc
    }

    /// `F g + F' A + F F' [A, A]`, valid for pairs of type 2.
    pub fn type2_formula(&mut self) -> Result<GradedSubspace> {
        let t = self.pair.pair_type();
        if t != PairType::Finite(2) {
            return Err(Error::TypeMismatch(t.to_string()));
        }
        let a = self.pair.a_space().clone();
        let aa = self.pair.matrix_algebra().span_bracket(&a, &a);
        let fp = self.f_prime();
        let ffp = self.f_f_prime();
        let mut acc = self.fg();
        acc.absorb(&self.t(&fp, &a));
        acc.absorb(&self.t(&ffp, &aa));
        Ok(acc)
    }

    /// `F' · 1 + F · sl(V)` for the pair `sl:n`.
    pub fn special_linear_form(&mut self) -> GradedSubspace {
        let n = self.pair.size();
        let mut sl = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sl.push(Mat::unit(n, i, j).to_sparse());
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            sl.push((&Mat::unit(n, i, i) - &Mat::unit(n, i + 1, i + 1)).to_sparse());
        }
        let sl = self.mspan(&sl);
        let one = self.mspan(&[self.pair.identity()]);
        let fp = self.f_prime();
        let mut acc = self.t(&self.full_f(), &sl);
        acc.absorb(&self.t(&fp, &one));
        acc
    }

    /// `F o + F' 1 + F' 1_K + (F F' + F') sl(V, K)` for the pair of a symmetric or skew form,
    /// where `K` is the kernel of the form and `A` its stabilizer.
    pub fn orthogonal_form(&mut self, phi: &Mat) -> Result<GradedSubspace> {
        let n = self.pair.size();
        if phi.rows != n || !phi.is_square() {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: phi.rows,
            });
        }
        // o(2) is abelian and does not generate its stabilizer
        if self.pair.is_abelian() {
            return Err(Error::Precondition(
                "g is abelian, use the abelian form".into(),
            ));
        }
        let kernel = kernel_of_form(phi);
        let a = self.pair.a_space().clone();
        let a_basis = a.basis();
        // functionals on A: the trace, and the trace of the restriction to K
        let mut funcs = vec![Mat::identity(n)];
        if !kernel.is_empty() {
            funcs.push(restriction_projector(n, &kernel));
        }
        let rows: Vec<Vec<Q>> = funcs
            .iter()
            .map(|p| {
                a_basis
                    .iter()
                    .map(|b| (&Mat::from_sparse(n, b) * p).trace())
                    .collect()
            })
            .collect();
        let ns = Mat::from_rows(rows).nullspace();
        let combine = |c: &[Q]| {
            let mut v = SparseVec::new();
            for (ci, bi) in c.iter().zip(&a_basis) {
                crate::scalar::add_scaled(&mut v, bi, ci);
            }
            v
        };
        let sl_vk = self.mspan(&ns.iter().map(|c| combine(c)).collect::<Vec<_>>());
        let one_v = self.pair.identity();
        let one = self.mspan(std::slice::from_ref(&one_v));
        // 1_K completes k 1 + sl(V, K) to A; zero when K = 0
        let mut one_k = self.mspan(&[]);
        if !kernel.is_empty() {
            let mut base = sl_vk.clone();
            base.insert(&one_v);
            if let Some(b) = a_basis.iter().find(|b| !base.contains(b)) {
                one_k = self.mspan(std::slice::from_ref(b));
            }
        }
        let fp = self.f_prime();
        let mut coeff = self.f_f_prime();
        coeff.absorb(&fp);
        let mut acc = self.fg();
        acc.absorb(&self.t(&fp, &one));
        acc.absorb(&self.t(&fp, &one_k));
        acc.absorb(&self.t(&coeff, &sl_vk));
        Ok(acc)
    }

    /// `sum_k F^(k) g^{k+1}`
    pub fn abelian_currents_form(&mut self) -> GradedSubspace {
        let mut acc = self.fg();
        let mut k = 1;
        loop {
            let fk = self.filt.commutator_space(k);
            let gk = self.pair.g_power(k + 1);
            if fk.is_zero() || gk.is_zero() || k > self.pair.stabilization_point() + 1 {
                break;
            }
            acc.absorb(&self.t(&fk, &gk));
            k += 1;
        }
        acc
    }

    /// `F g + sum_{k>=2} I_{k-1} (g^k)_+ + [F, I_{k-2}] Z_k` for semisimple perfect pairs.
    pub fn semisimple_closed_form(&mut self) -> Result<GradedSubspace> {
        if !self.pair.is_semisimple() {
            return Err(Error::Precondition(format!(
                "pair {} is not declared semisimple",
                self.pair.name()
            )));
        }
        let rep = self.pair.is_perfect(None);
        if !rep.perfect {
            return Err(Error::Precondition(format!(
                "pair {} fails the perfectness check at k = {}",
                self.pair.name(),
                rep.first_failure.unwrap_or(0)
            )));
        }
        let mut acc = self.fg();
        let top = self.k_horizon() + 1;
        for k in 2..=top.max(2) {
            let idx = match self.mutation {
                Mutation::None => k - 1,
                Mutation::ShiftSemisimpleIndex => k,
            };
            let ik = self.filt.ideal_ik(idx);
            let fb = self.f_bracket_ik(k - 2);
            acc.absorb(&self.t(&ik, &self.pair.bracket_power(k)));
            acc.absorb(&self.t(&fb, &self.pair.center_part(k)));
        }
        Ok(acc)
    }

    /// `[F, F] 1 + sum_{k=1}^{n-1} I_{k-1} V_{2k}` for the `n`-dimensional simple `sl_2` module.
    pub fn sl2_closed_form(&mut self) -> Result<GradedSubspace> {
        let n = self.pair.size();
        if n < 2 || !self.pair.name().starts_with("sl2irrep") {
            return Err(Error::Precondition(
                "expects the pair of an sl2 simple module".into(),
            ));
        }
        let one = self.mspan(&[self.pair.identity()]);
        let fp = self.f_prime();
        let mut acc = self.t(&fp, &one);
        for k in 1..n {
            let ik = self.filt.ideal_ik(k - 1);
            acc.absorb(&self.t(&ik, &self.pair.sl2_module(k)));
        }
        Ok(acc)
    }

    /// `F g + F [g, <g>] + [F, F] <g>`, for coefficient algebras with `I_1(F) = F`.
    pub fn simple_f_form(&mut self) -> GradedSubspace {
        let env = self.pair.enveloping();
        let genv = self
            .pair
            .matrix_algebra()
            .span_bracket(self.pair.g_space(), &env);
        let f = self.full_f();
        let fp = self.f_prime();
        let mut acc = self.fg();
        acc.absorb(&self.t(&f, &genv));
        acc.absorb(&self.t(&fp, &env));
        acc
    }

    /// `(F^(k) g^{k+1}, F F^(k) [g, g^{k+1}])`
    pub fn lower_bound_terms(&mut self, k: usize) -> (GradedSubspace, GradedSubspace) {
        let fk = self.filt.commutator_space(k);
        let ffk = self.tctx.coeffs().span_product(&self.full_f(), &fk);
        (
            self.t(&fk, &self.pair.g_power(k + 1)),
            self.t(&ffk, &self.pair.bracket_power(k + 1)),
        )
    }
}

/// Matrix `P` with `tr(M P) = tr(M|_K)` for `M` preserving `K`: the projection `K L` where
/// `L` is a left inverse of the basis matrix of `K`.
fn restriction_projector(n: usize, kernel: &[Vec<Q>]) -> Mat {
    let r = kernel.len();
    let mut kmat = Mat::zeros(n, r);
    for (j, k) in kernel.iter().enumerate() {
        for i in 0..n {
            kmat[(i, j)] = k[i].clone();
        }
    }
    let kt = kmat.transpose();
    let mut left = Mat::zeros(r, n);
    for j in 0..r {
        let mut e = vec![Q::zero(); r];
        e[j] = Q::one();
        // rows of the left inverse solve K^T x = e_j
        let x = kt.solve(&e).expect("kernel basis has full rank");
        for (i, xi) in x.into_iter().enumerate() {
            left[(j, i)] = xi;
        }
    }
    &kmat * &left
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffalg::Algebra;
    use crate::current::saturation::lie_closure;
    use crate::pairs::{make_abelian_nilpotent, make_sl, make_sl2_irrep};
    use crate::scalar::add_scaled;
    use rand::{Rng, SeedableRng};

    #[test]
    fn sl2_special_linear_profile() {
        let f = Algebra::free(2, 2, false).unwrap();
        let p = make_sl(2).unwrap();
        let t = TensorContext::new(&f, 2);
        let mut cf = ClosedForms::new(&p, &t);
        let form = cf.special_linear_form();
        assert_eq!(form.dim_profile(), vec![0, 6, 13]);
        assert_eq!(form, lie_closure(&p, &t, None));
    }

    #[test]
    fn abelian_currents_small() {
        let f = Algebra::free(2, 3, false).unwrap();
        let p = make_abelian_nilpotent(3).unwrap();
        let t = TensorContext::new(&f, 3);
        let mut cf = ClosedForms::new(&p, &t);
        assert_eq!(cf.abelian_currents_form(), lie_closure(&p, &t, None));
    }

    #[test]
    fn matrix_coefficients_simple_form() {
        let f = Algebra::matrices(2);
        let p = make_sl(2).unwrap();
        let t = TensorContext::new(&f, 2);
        let mut cf = ClosedForms::new(&p, &t);
        assert_eq!(cf.simple_f_form(), lie_closure(&p, &t, None));
    }

    #[test]
    fn sl2_module_form_small() {
        let f = Algebra::free(2, 3, true).unwrap();
        let p = make_sl2_irrep(3).unwrap();
        let t = TensorContext::new(&f, 3);
        let mut cf = ClosedForms::new(&p, &t);
        assert_eq!(cf.sl2_closed_form().unwrap(), lie_closure(&p, &t, None));
    }

    #[test]
    fn type_two_rejects_jordan() {
        let f = Algebra::free(2, 2, true).unwrap();
        let p = make_abelian_nilpotent(3).unwrap();
        let t = TensorContext::new(&f, 3);
        let mut cf = ClosedForms::new(&p, &t);
        assert!(matches!(cf.type2_formula(), Err(Error::TypeMismatch(_))));
    }

    // [sE, tF] = st [E, F] + [s, t] F E
    #[test]
    fn bracket_of_pure_tensors() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = Algebra::free(2, 3, true).unwrap();
        let t = TensorContext::new(&f, 3);
        let m = Algebra::matrices(3);
        let rand_vec = |rng: &mut rand_chacha::ChaCha8Rng, dim: usize| {
            let mut v = SparseVec::new();
            for _ in 0..4 {
                let i = rng.gen_range(0..dim);
                crate::scalar::add_term(
                    &mut v,
                    i,
                    Q::from_integer(rng.gen_range(-3i64..=3).into()),
                );
            }
            v
        };
        for _ in 0..100 {
            let s = rand_vec(&mut rng, f.dim());
            let tt = rand_vec(&mut rng, f.dim());
            let e = rand_vec(&mut rng, 9);
            let ff = rand_vec(&mut rng, 9);
            let lhs = t.bracket(&t.pure(&s, &e), &t.pure(&tt, &ff));
            let mut rhs = t.pure(&f.mul(&s, &tt), &m.bracket(&e, &ff));
            add_scaled(
                &mut rhs,
                &t.pure(&f.bracket(&s, &tt), &m.mul(&ff, &e)),
                &Q::one(),
            );
            assert_eq!(lhs, rhs);
        }
    }
}
