//! Exact rational scalars and sparse coordinate vectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar field: arbitrary-precision rationals.
pub type Q = BigRational;

/// A sparse coordinate vector keyed by basis index. Zero entries are never stored.
pub type SparseVec = BTreeMap<usize, Q>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Binomial coefficient `C(n, k)` as a rational (zero when `k > n`).
pub fn binomial(n: usize, k: usize) -> Q {
    if k > n {
        return Q::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    Q::from_integer(acc)
}

/// `(-1)^k`
pub fn sign(k: usize) -> Q {
    if k.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn fmt_q(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Adds `c` to entry `idx`, dropping the entry if it cancels.
pub fn add_term(v: &mut SparseVec, idx: usize, c: Q) {
    if c.is_zero() {
        return;
    }
    match v.entry(idx) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `v += c * w`
pub fn add_scaled(v: &mut SparseVec, w: &SparseVec, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (&i, x) in w {
        add_term(v, i, x * c);
    }
}

pub fn scaled(w: &SparseVec, c: &Q) -> SparseVec {
    if c.is_zero() {
        return SparseVec::new();
    }
    w.iter().map(|(&i, x)| (i, x * c)).collect()
}

pub fn sub(v: &SparseVec, w: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    add_scaled(&mut out, w, &-Q::one());
    out
}

pub fn add(v: &SparseVec, w: &SparseVec) -> SparseVec {
    let mut out = v.clone();
    add_scaled(&mut out, w, &Q::one());
    out
}

pub fn unit_vec(idx: usize) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(idx, Q::one());
    v
}

pub fn is_nonneg_integer(c: &Q) -> bool {
    c.is_integer() && !c.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), q(10));
        assert_eq!(binomial(4, 0), q(1));
        assert_eq!(binomial(3, 4), q(0));
    }

    #[test]
    fn cancelling_terms_are_dropped() {
        let mut v = SparseVec::new();
        add_term(&mut v, 3, q(2));
        add_term(&mut v, 3, q(-2));
        assert!(v.is_empty());
    }
}
