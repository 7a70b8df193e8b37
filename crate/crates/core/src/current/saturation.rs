//! Lie closure of `F ⊗ g` inside `F ⊗ M_n` by repeated bracketing.
//!
//! This is the reference computation that the closed forms are tested against, so it only
//! uses the tensor product and subspace arithmetic.

use rayon::prelude::*;

use super::tensor::TensorContext;
use crate::pairs::CompatiblePair;
use crate::scalar::SparseVec;
use crate::subspace::GradedSubspace;

/// `w ⊗ s` for every basis element `w` of `F` and `s` of `g`.
pub fn generators(pair: &CompatiblePair, tctx: &TensorContext) -> Vec<SparseVec> {
    let dim_f = tctx.coeffs().dim();
    let mut out = Vec::with_capacity(dim_f * pair.g_basis().len());
    for w in 0..dim_f {
        let u = crate::scalar::unit_vec(w);
        for s in pair.g_basis() {
            out.push(tctx.pure(&u, s));
        }
    }
    out
}

/// The Lie subalgebra of `F ⊗ A` generated by `F ⊗ g`. With `m_cap = Some(m)` returns the
/// filtered piece spanned by brackets of fewer than `m` generators' worth of nesting, that is
/// `sum_{k < m} (F g)^(k)`.
pub fn lie_closure(
    pair: &CompatiblePair,
    tctx: &TensorContext,
    m_cap: Option<usize>,
) -> GradedSubspace {
    let gens = generators(pair, tctx);
    match m_cap {
        None => saturate(tctx, &gens),
        Some(m) => filtered(tctx, &gens, m),
    }
}

/// The Lie subalgebra generated by arbitrary elements of the tensor context.
pub fn close_from(tctx: &TensorContext, gens: &[SparseVec]) -> GradedSubspace {
    saturate(tctx, gens)
}

fn brackets_against(tctx: &TensorContext, gens: &[SparseVec], vs: &[SparseVec]) -> Vec<SparseVec> {
    vs.par_iter()
        .flat_map_iter(|v| gens.iter().map(move |g| tctx.bracket(g, v)))
        .filter(|b| !b.is_empty())
        .collect()
}

fn saturate(tctx: &TensorContext, gens: &[SparseVec]) -> GradedSubspace {
    let mut l = GradedSubspace::zero(tctx.grading());
    let mut frontier = Vec::new();
    for g in gens {
        frontier.extend(l.insert_new(g));
    }
    // every element of the closure is a combination of left-normed brackets
    // [g_1, [g_2, ... [g_k, g_{k+1}]]], so bracketing the generators against the
    // newly found rows is enough
    while !frontier.is_empty() {
        let cand = brackets_against(tctx, gens, &frontier);
        let mut next = Vec::new();
        for b in &cand {
            next.extend(l.insert_new(b));
        }
        frontier = next;
    }
    l
}

fn filtered(tctx: &TensorContext, gens: &[SparseVec], m: usize) -> GradedSubspace {
    let mut total = GradedSubspace::zero(tctx.grading());
    if m == 0 {
        return total;
    }
    let mut level = tctx.span(gens);
    total.absorb(&level);
    for _ in 1..m {
        let cand = brackets_against(tctx, gens, &level.basis());
        level = tctx.span(&cand);
        if level.is_zero() {
            break;
        }
        total.absorb(&level);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffalg::Algebra;
    use crate::pairs::{make_abelian_nilpotent, make_sl};

    #[test]
    fn commutative_coefficients_give_f_tensor_g() {
        let f = Algebra::free(1, 3, true).unwrap();
        let p = make_sl(2).unwrap();
        let t = TensorContext::new(&f, 2);
        let l = lie_closure(&p, &t, None);
        assert_eq!(l, t.tensor_span(&f.full_space(), p.g_space()));
    }

    #[test]
    fn sl2_small_profile() {
        let f = Algebra::free(2, 2, false).unwrap();
        let p = make_sl(2).unwrap();
        let t = TensorContext::new(&f, 2);
        let l = lie_closure(&p, &t, None);
        assert_eq!(l.dim_profile(), vec![0, 6, 13]);
        assert!(t.is_bracket_closed(&l));
    }

    #[test]
    fn filtered_pieces_increase_to_closure() {
        let f = Algebra::free(2, 3, false).unwrap();
        let p = make_abelian_nilpotent(3).unwrap();
        let t = TensorContext::new(&f, 3);
        let full = lie_closure(&p, &t, None);
        let mut prev = lie_closure(&p, &t, Some(1));
        assert_eq!(prev, t.span(&generators(&p, &t)));
        for m in 2..=4 {
            let cur = lie_closure(&p, &t, Some(m));
            assert!(prev.is_subset(&cur).unwrap());
            assert!(cur.is_subset(&full).unwrap());
            prev = cur;
        }
        assert_eq!(prev, full);
    }
}
