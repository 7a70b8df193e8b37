//! Small dense rational matrices: products, kernels, characteristic polynomials.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::{add_term, SparseVec, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    /// Matrix unit `E_{ij}` (0-based).
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        m[(i, j)] = Q::one();
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<Q> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), r * c, "ragged rows");
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Q::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Q) -> Self {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn trace(&self) -> Q {
        (0..self.rows.min(self.cols))
            .map(|i| self[(i, i)].clone())
            .sum()
    }

    pub fn bracket(&self, other: &Mat) -> Mat {
        &(self * other) - &(other * self)
    }

    pub fn pow(&self, k: usize) -> Mat {
        let mut acc = Mat::identity(self.rows);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Row-major flattening as a sparse vector over matrix units `E_{ij} -> i*n + j`.
    pub fn to_sparse(&self) -> SparseVec {
        let mut v = SparseVec::new();
        for (i, x) in self.data.iter().enumerate() {
            add_term(&mut v, i, x.clone());
        }
        v
    }

    pub fn from_sparse(n: usize, v: &SparseVec) -> Mat {
        let mut m = Mat::zeros(n, n);
        for (&i, c) in v {
            m.data[i] = c.clone();
        }
        m
    }

    /// In-place reduced row-echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = Q::one() / &self[(r, c)];
            for j in 0..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in 0..self.cols {
                        let t = &self[(r, j)] * &f;
                        self[(i, j)] -= t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{x : self * x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Q::zero(); self.cols];
                x[f] = Q::one();
                for (r, &p) in pivots.iter().enumerate() {
                    x[p] = -m[(r, f)].clone();
                }
                x
            })
            .collect()
    }

    /// Solves `self * x = b`, returning any solution.
    pub fn solve(&self, b: &[Q]) -> Option<Vec<Q>> {
        let mut aug = Mat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Q::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }

    /// Coefficients `c_0..c_n` (ascending, monic) of `det(t I - self)`, by Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Vec<Q> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![Q::zero(); n + 1];
        coeffs[n] = Q::one();
        let mut m = Mat::zeros(n, n);
        for k in 1..=n {
            let mut next = self * &m;
            for i in 0..n {
                next[(i, i)] += &coeffs[n - k + 1];
            }
            m = next;
            let am = self * &m;
            coeffs[n - k] = -am.trace() / Q::from_integer(BigInt::from(k));
        }
        coeffs
    }

    pub fn apply(&self, x: &[Q]) -> Vec<Q> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &x[j]).sum())
            .collect()
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

fn eval(poly: &[Q], x: &Q) -> Q {
    poly.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out
}

fn divide_linear(poly: &[Q], r: &Q) -> Vec<Q> {
    // synthetic division by (t - r), poly ascending
    let n = poly.len() - 1;
    let mut out = vec![Q::zero(); n];
    let mut carry = Q::zero();
    for k in (0..n).rev() {
        carry = &poly[k + 1] + carry * r;
        out[k] = carry.clone();
    }
    out
}

/// Rational roots with multiplicity. Returns `None` if the polynomial does not split over Q.
pub fn rational_roots(poly: &[Q]) -> Option<Vec<Q>> {
    let mut p: Vec<Q> = poly.to_vec();
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    let mut roots = Vec::new();
    while p.len() > 1 && p[0].is_zero() {
        roots.push(Q::zero());
        p.remove(0);
    }
    if p.len() == 1 {
        return Some(roots);
    }
    // clear denominators to get integer coefficients
    let lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .iter()
        .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let cands_num = divisors(&ints[0]);
    let cands_den = divisors(ints.last().unwrap());
    let mut cands = Vec::new();
    for a in &cands_num {
        for b in &cands_den {
            let r = Q::new(a.clone(), b.clone());
            cands.push(r.clone());
            cands.push(-r);
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        while p.len() > 1 && eval(&p, &r).is_zero() {
            p = divide_linear(&p, &r);
            roots.push(r.clone());
        }
    }
    (p.len() == 1).then_some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    #[test]
    fn nullspace_of_rank_one() {
        let m = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(m.apply(&x).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn char_poly_of_diag() {
        let m = Mat::from_i64(&[&[2, 0], &[0, -3]]);
        // (t-2)(t+3) = t^2 + t - 6
        assert_eq!(m.char_poly(), vec![q(-6), q(1), q(1)]);
        let mut r = rational_roots(&m.char_poly()).unwrap();
        r.sort();
        assert_eq!(r, vec![q(-3), q(2)]);
    }

    #[test]
    fn non_split() {
        // t^2 + 1
        assert!(rational_roots(&[q(1), q(0), q(1)]).is_none());
        let r = rational_roots(&[q(0), q(0), q(1)]).unwrap();
        assert_eq!(r, vec![q(0), q(0)]);
    }

    #[test]
    fn solve_square() {
        let m = Mat::from_i64(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[q(3), q(2)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let s = Mat::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(s.solve(&[q(1), q(0)]).is_none());
    }
}
