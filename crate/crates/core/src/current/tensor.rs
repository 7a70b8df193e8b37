//! The tensor algebra `F ⊗ M_n`, graded by the degree in `F`.
//!
//! A basis element `e_f ⊗ E_a` sits at index `f * n^2 + a`. Because `F` is laid out degree
//! by degree, so is the tensor space.

use std::sync::Arc;

use num_traits::One;

use crate::coeffalg::Algebra;
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{add_scaled, add_term, SparseVec, Q};
use crate::subspace::{GradedSubspace, Grading, Rref};

pub struct TensorContext {
    f: Arc<Algebra>,
    n: usize,
    nn: usize,
    grading: Arc<Grading>,
}

impl TensorContext {
    pub fn new(f: &Arc<Algebra>, n: usize) -> Self {
        let nn = n * n;
        let fg = f.grading();
        let dims = fg.dims().iter().map(|d| d * nn).collect();
        TensorContext {
            f: f.clone(),
            n,
            nn,
            grading: Arc::new(Grading::new(dims, fg.is_additive())),
        }
    }

    pub fn coeffs(&self) -> &Arc<Algebra> {
        &self.f
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn index(&self, f: usize, a: usize) -> usize {
        f * self.nn + a
    }

    pub fn split(&self, t: usize) -> (usize, usize) {
        (t / self.nn, t % self.nn)
    }

    /// `u ⊗ M` for an element `u` of `F` and a matrix given by its coordinates.
    pub fn pure(&self, u: &SparseVec, m: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&f, x) in u {
            for (&a, y) in m {
                add_term(&mut out, self.index(f, a), x * y);
            }
        }
        out
    }

    /// A matrix with entries in `F`, given row-major.
    pub fn from_entries(&self, entries: &[SparseVec]) -> SparseVec {
        assert_eq!(entries.len(), self.nn);
        let mut out = SparseVec::new();
        for (a, u) in entries.iter().enumerate() {
            for (&f, c) in u {
                add_term(&mut out, self.index(f, a), c.clone());
            }
        }
        out
    }

    /// Entry `(i, j)` as an element of `F`.
    pub fn entry(&self, x: &SparseVec, i: usize, j: usize) -> SparseVec {
        let a = i * self.n + j;
        x.iter()
            .filter(|(&t, _)| t % self.nn == a)
            .map(|(&t, c)| (t / self.nn, c.clone()))
            .collect()
    }

    pub fn diagonal(&self, fs: &[SparseVec]) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, u) in fs.iter().enumerate() {
            add_scaled(
                &mut out,
                &self.pure(u, &crate::scalar::unit_vec(i * self.n + i)),
                &Q::one(),
            );
        }
        out
    }

    pub fn one(&self) -> Option<SparseVec> {
        let u = self.f.unit()?;
        Some(self.pure(&u, &Mat::identity(self.n).to_sparse()))
    }

    /// `(u ⊗ E_ij)(v ⊗ E_kl) = uv ⊗ δ_jk E_il`
    pub fn mul(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        let n = self.n;
        for (&t1, c1) in x {
            let (f1, a1) = self.split(t1);
            let (i, j) = (a1 / n, a1 % n);
            for (&t2, c2) in y {
                let (f2, a2) = self.split(t2);
                if a2 / n != j {
                    continue;
                }
                let a = i * n + a2 % n;
                let c = c1 * c2;
                self.f.for_each_basis_product(f1, f2, |k, s| {
                    let v = match s {
                        None => c.clone(),
                        Some(s) => &c * s,
                    };
                    add_term(&mut out, k * self.nn + a, v);
                });
            }
        }
        out
    }

    pub fn bracket(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = self.mul(x, y);
        add_scaled(&mut out, &self.mul(y, x), &-Q::one());
        out
    }

    /// Inverse of an element whose degree-0 part is invertible, by a truncated
    /// geometric series (free backend) or a linear solve over `F ⊗ M_n` (structure backend).
    pub fn inverse(&self, x: &SparseVec) -> Result<SparseVec> {
        let one = self
            .one()
            .ok_or_else(|| Error::NonUnit("coefficient algebra has no unit".into()))?;
        match self.f.as_ref() {
            Algebra::Free(fc) => {
                // split x = x0 + r with x0 in degree 0 (a scalar matrix)
                let d0 = self.grading.dim(0);
                let mut x0 = Mat::zeros(self.n, self.n);
                let mut rest = SparseVec::new();
                for (&t, c) in x {
                    if t < d0 {
                        let a = t % self.nn;
                        x0[(a / self.n, a % self.n)] = c.clone();
                    } else {
                        rest.insert(t, c.clone());
                    }
                }
                let inv0 = invert_mat(&x0)
                    .ok_or_else(|| Error::NonUnit("constant part is singular".into()))?;
                let inv0 = self.pure(&crate::scalar::unit_vec(0), &inv0.to_sparse());
                // x^{-1} = sum_k (-x0^{-1} r)^k x0^{-1}
                let step = crate::scalar::scaled(&self.mul(&inv0, &rest), &-Q::one());
                let mut acc = one.clone();
                let mut term = one;
                for _ in 0..fc.degree_cap() {
                    term = self.mul(&term, &step);
                    if term.is_empty() {
                        break;
                    }
                    add_scaled(&mut acc, &term, &Q::one());
                }
                Ok(self.mul(&acc, &inv0))
            }
            Algebra::Structure(_) => {
                let dim = self.grading.total();
                let mut m = Mat::zeros(dim, dim);
                for j in 0..dim {
                    for (k, c) in self.mul(x, &crate::scalar::unit_vec(j)) {
                        m[(k, j)] = c;
                    }
                }
                let rhs = crate::subspace::coords(&one, dim);
                let sol = m
                    .solve(&rhs)
                    .ok_or_else(|| Error::NonUnit("matrix not invertible".into()))?;
                let inv = crate::subspace::from_coords(&sol);
                if self.mul(&inv, x) != one {
                    return Err(Error::NonUnit("only one-sided inverse".into()));
                }
                Ok(inv)
            }
        }
    }

    /// `E ⊗ B` for subspaces `E` of `F` and `B` of `M_n`. Kronecker products of reduced
    /// echelon bases are already reduced, so no elimination is needed.
    pub fn tensor_span(&self, e: &GradedSubspace, b: &GradedSubspace) -> GradedSubspace {
        let brows: Vec<&SparseVec> = b.block(0).rows().collect();
        let blocks = (0..self.grading.num_degrees())
            .map(|d| {
                let mut rows = Vec::new();
                for er in e.block(d).rows() {
                    for br in &brows {
                        rows.push(self.pure(er, br));
                    }
                }
                rows.sort_by_key(|r| *r.keys().next().unwrap());
                Rref::from_canonical(rows)
            })
            .collect();
        GradedSubspace::from_blocks(&self.grading, blocks)
    }

    pub fn span(&self, vs: &[SparseVec]) -> GradedSubspace {
        GradedSubspace::span(&self.grading, vs)
    }

    pub fn span_bracket(&self, s1: &GradedSubspace, s2: &GradedSubspace) -> GradedSubspace {
        GradedSubspace::op_bracket(s1, s2, &self.grading, |a, b| self.mul(a, b))
    }

    /// Whether `[s, s] ⊆ s`.
    pub fn is_bracket_closed(&self, s: &GradedSubspace) -> bool {
        let basis = s.basis();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i + 1..] {
                if !s.contains(&self.bracket(a, b)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn conjugate(&self, g: &SparseVec, x: &SparseVec) -> Result<SparseVec> {
        let ginv = self.inverse(g)?;
        Ok(self.mul(&self.mul(g, x), &ginv))
    }
}

fn invert_mat(m: &Mat) -> Option<Mat> {
    let n = m.rows;
    let mut out = Mat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![Q::from_integer(0.into()); n];
        e[j] = Q::one();
        let col = m.solve(&e)?;
        for (i, c) in col.into_iter().enumerate() {
            out[(i, j)] = c;
        }
    }
    ((m * &out) == Mat::identity(n)).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::unit_vec;

    #[test]
    fn pure_product() {
        let f = Algebra::free(2, 2, true).unwrap();
        let t = TensorContext::new(&f, 2);
        let x = f.parse("x").unwrap();
        let y = f.parse("y").unwrap();
        let a = t.pure(&x, &unit_vec(1)); // x ⊗ E12
        let b = t.pure(&y, &unit_vec(2)); // y ⊗ E21
        assert_eq!(
            t.mul(&a, &b),
            t.pure(&f.parse("x*y").unwrap(), &unit_vec(0))
        );
        let one = t.one().unwrap();
        assert_eq!(t.mul(&one, &a), a);
        assert_eq!(t.mul(&a, &one), a);
    }

    #[test]
    fn inverse_of_unipotent() {
        let f = Algebra::free(2, 3, true).unwrap();
        let t = TensorContext::new(&f, 2);
        let one = t.one().unwrap();
        let g = crate::scalar::add(&one, &t.pure(&f.parse("x").unwrap(), &unit_vec(1)));
        let inv = t.inverse(&g).unwrap();
        assert_eq!(
            inv,
            crate::scalar::sub(&one, &t.pure(&f.parse("x").unwrap(), &unit_vec(1)))
        );
        assert_eq!(t.mul(&g, &inv), one);
    }

    #[test]
    fn tensor_span_is_canonical() {
        let f = Algebra::free(2, 2, false).unwrap();
        let t = TensorContext::new(&f, 2);
        let fs = f.full_space();
        let m = Algebra::matrices(2);
        let b = GradedSubspace::span(
            m.grading(),
            &[m.parse("e12").unwrap(), m.parse("e11 - e22").unwrap()],
        );
        let direct = t.tensor_span(&fs, &b);
        let mut slow = Vec::new();
        for u in fs.basis() {
            for v in b.basis() {
                slow.push(t.pure(&u, &v));
            }
        }
        assert_eq!(direct, t.span(&slow));
    }
}
