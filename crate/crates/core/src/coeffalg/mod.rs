//! Finite-dimensional graded coefficient algebras.
//!
//! Two backends: the free algebra on `m` generators truncated above degree `D`, and an
//! algebra given by a table of structure constants (all basis elements in degree 0).

mod parse;

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{add_scaled, add_term, fmt_q, scaled, unit_vec, SparseVec, Q};
use crate::subspace::{GradedSubspace, Grading};

pub use parse::parse_vec;

/// Truncated free algebra. Words are ordered by length, then lexicographically.
#[derive(Clone, Debug)]
pub struct FreeContext {
    m: usize,
    deg: usize,
    unital: bool,
    names: Vec<String>,
    pows: Vec<usize>,
    grading: Arc<Grading>,
}

impl FreeContext {
    pub fn new(m: usize, deg: usize, unital: bool) -> Result<Self> {
        Self::with_names(default_names(m), deg, unital)
    }

    pub fn with_names(names: Vec<String>, deg: usize, unital: bool) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::InvalidSize("need at least one generator".into()));
        }
        if deg == 0 {
            return Err(Error::InvalidSize(
                "truncation degree must be at least 1".into(),
            ));
        }
        let mut pows = vec![1usize];
        for _ in 0..deg {
            pows.push(pows.last().unwrap() * m);
        }
        let mut dims = pows.clone();
        if !unital {
            dims[0] = 0;
        }
        Ok(FreeContext {
            m,
            deg,
            unital,
            names,
            pows,
            grading: Arc::new(Grading::new(dims, true)),
        })
    }

    pub fn generators_count(&self) -> usize {
        self.m
    }

    pub fn degree_cap(&self) -> usize {
        self.deg
    }

    fn split(&self, idx: usize) -> (usize, usize) {
        let len = self.grading.degree_of(idx);
        (len, idx - self.grading.offset(len))
    }

    pub fn word_index(&self, letters: &[usize]) -> Option<usize> {
        if letters.len() > self.deg || (letters.is_empty() && !self.unital) {
            return None;
        }
        let mut code = 0;
        for &l in letters {
            if l >= self.m {
                return None;
            }
            code = code * self.m + l;
        }
        Some(self.grading.offset(letters.len()) + code)
    }

    pub fn word(&self, idx: usize) -> Vec<usize> {
        let (len, mut code) = self.split(idx);
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = code % self.m;
            code /= self.m;
        }
        out
    }

    fn mul_basis(&self, i: usize, j: usize) -> Option<usize> {
        let (l1, c1) = self.split(i);
        let (l2, c2) = self.split(j);
        (l1 + l2 <= self.deg).then(|| self.grading.offset(l1 + l2) + c1 * self.pows[l2] + c2)
    }
}

pub fn default_names(m: usize) -> Vec<String> {
    const LETTERS: [&str; 4] = ["x", "y", "z", "w"];
    if m <= LETTERS.len() {
        LETTERS[..m].iter().map(|s| s.to_string()).collect()
    } else {
        (0..m).map(|i| format!("x{i}")).collect()
    }
}

/// Algebra given by structure constants `e_i e_j = sum_k c_ij^k e_k`, graded in degree 0.
#[derive(Clone, Debug)]
pub struct StructureContext {
    names: Vec<String>,
    table: Vec<Vec<SparseVec>>,
    unit: Option<SparseVec>,
    grading: Arc<Grading>,
}

impl StructureContext {
    pub fn new(
        names: Vec<String>,
        table: Vec<Vec<SparseVec>>,
        unit: Option<SparseVec>,
    ) -> Result<Self> {
        let d = names.len();
        if table.len() != d || table.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidSize(
                "multiplication table must be d x d".into(),
            ));
        }
        let ctx = StructureContext {
            names,
            table,
            unit,
            grading: Arc::new(Grading::single(d)),
        };
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let left = ctx.mul(&ctx.table[i][j], &unit_vec(k));
                    let right = ctx.mul(&unit_vec(i), &ctx.table[j][k]);
                    if left != right {
                        return Err(Error::NotAssociative);
                    }
                }
            }
        }
        if let Some(u) = &ctx.unit {
            for i in 0..d {
                let e = unit_vec(i);
                if ctx.mul(u, &e) != e || ctx.mul(&e, u) != e {
                    return Err(Error::NotAssociative);
                }
            }
        }
        Ok(ctx)
    }

    /// `M_n(Q)` with matrix units `E_ij` at index `i*n + j` (0-based), named `e11`, `e12`, ...
    pub fn matrix_algebra(n: usize) -> Self {
        let names = (0..n * n)
            .map(|k| format!("e{}{}", k / n + 1, k % n + 1))
            .collect();
        let mut table = vec![vec![SparseVec::new(); n * n]; n * n];
        for (a, row) in table.iter_mut().enumerate() {
            for (b, slot) in row.iter_mut().enumerate() {
                let (i, j) = (a / n, a % n);
                let (k, l) = (b / n, b % n);
                if j == k {
                    *slot = unit_vec(i * n + l);
                }
            }
        }
        let unit = Mat::identity(n).to_sparse();
        StructureContext {
            names,
            table,
            unit: Some(unit),
            grading: Arc::new(Grading::single(n * n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, x) in a {
            for (&j, y) in b {
                add_scaled(&mut out, &self.table[i][j], &(x * y));
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub enum Algebra {
    Free(FreeContext),
    Structure(StructureContext),
}

impl Algebra {
    pub fn free(m: usize, deg: usize, unital: bool) -> Result<Arc<Self>> {
        Ok(Arc::new(Algebra::Free(FreeContext::new(m, deg, unital)?)))
    }

    pub fn free_named(names: Vec<String>, deg: usize, unital: bool) -> Result<Arc<Self>> {
        Ok(Arc::new(Algebra::Free(FreeContext::with_names(
            names, deg, unital,
        )?)))
    }

    pub fn matrices(n: usize) -> Arc<Self> {
        Arc::new(Algebra::Structure(StructureContext::matrix_algebra(n)))
    }

    pub fn grading(&self) -> &Arc<Grading> {
        match self {
            Algebra::Free(f) => &f.grading,
            Algebra::Structure(s) => &s.grading,
        }
    }

    pub fn dim(&self) -> usize {
        self.grading().total()
    }

    pub fn is_unital(&self) -> bool {
        match self {
            Algebra::Free(f) => f.unital,
            Algebra::Structure(s) => s.unit.is_some(),
        }
    }

    pub fn is_graded(&self) -> bool {
        self.grading().is_additive()
    }

    /// Degree cap for the free backend; structure algebras report 0.
    pub fn degree_cap(&self) -> usize {
        match self {
            Algebra::Free(f) => f.deg,
            Algebra::Structure(_) => 0,
        }
    }

    pub fn unit(&self) -> Option<SparseVec> {
        match self {
            Algebra::Free(f) => f.unital.then(|| unit_vec(0)),
            Algebra::Structure(s) => s.unit.clone(),
        }
    }

    pub fn names(&self) -> &[String] {
        match self {
            Algebra::Free(f) => &f.names,
            Algebra::Structure(s) => &s.names,
        }
    }

    /// Algebra generators: the letters of a free algebra, the basis of a structure algebra.
    pub fn generators(&self) -> Vec<SparseVec> {
        match self {
            Algebra::Free(f) => (0..f.m)
                .map(|l| unit_vec(f.word_index(&[l]).unwrap()))
                .collect(),
            Algebra::Structure(s) => (0..s.dim()).map(unit_vec).collect(),
        }
    }

    pub fn as_free(&self) -> Option<&FreeContext> {
        match self {
            Algebra::Free(f) => Some(f),
            Algebra::Structure(_) => None,
        }
    }

    /// Product of two basis elements as a sparse vector.
    pub fn mul_basis(&self, i: usize, j: usize) -> SparseVec {
        match self {
            Algebra::Free(f) => f.mul_basis(i, j).map(unit_vec).unwrap_or_default(),
            Algebra::Structure(s) => s.table[i][j].clone(),
        }
    }

    /// Calls `f(k, c)` for each term `c e_k` of `e_i e_j`; `None` stands for coefficient 1.
    #[inline]
    pub fn for_each_basis_product<G: FnMut(usize, Option<&Q>)>(
        &self,
        i: usize,
        j: usize,
        mut f: G,
    ) {
        match self {
            Algebra::Free(fc) => {
                if let Some(k) = fc.mul_basis(i, j) {
                    f(k, None);
                }
            }
            Algebra::Structure(s) => {
                for (&k, c) in &s.table[i][j] {
                    f(k, Some(c));
                }
            }
        }
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        match self {
            Algebra::Free(f) => {
                let mut out = SparseVec::new();
                for (&i, x) in a {
                    for (&j, y) in b {
                        if let Some(k) = f.mul_basis(i, j) {
                            add_term(&mut out, k, x * y);
                        }
                    }
                }
                out
            }
            Algebra::Structure(s) => s.mul(a, b),
        }
    }

    pub fn bracket(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut out = self.mul(a, b);
        add_scaled(&mut out, &self.mul(b, a), &-Q::one());
        out
    }

    pub fn constant_term(&self, a: &SparseVec) -> Q {
        match self {
            Algebra::Free(f) if f.unital => a.get(&0).cloned().unwrap_or_else(Q::zero),
            _ => Q::zero(),
        }
    }

    pub fn inverse(&self, a: &SparseVec) -> Result<SparseVec> {
        let unit = self
            .unit()
            .ok_or_else(|| Error::NonUnit("algebra has no unit".into()))?;
        match self {
            Algebra::Free(f) => {
                let c = self.constant_term(a);
                if c.is_zero() {
                    return Err(Error::NonUnit(self.format(a)));
                }
                let cinv = Q::one() / &c;
                let mut w = a.clone();
                w.remove(&0);
                let step = scaled(&w, &-cinv.clone());
                let mut term = unit.clone();
                let mut acc = unit;
                for _ in 0..f.deg {
                    term = self.mul(&term, &step);
                    if term.is_empty() {
                        break;
                    }
                    add_scaled(&mut acc, &term, &Q::one());
                }
                Ok(scaled(&acc, &cinv))
            }
            Algebra::Structure(s) => {
                let d = s.dim();
                // left multiplication by a as a matrix acting on coordinates of x
                let mut m = Mat::zeros(d, d);
                for j in 0..d {
                    for (k, c) in self.mul(a, &unit_vec(j)) {
                        m[(k, j)] = c;
                    }
                }
                let rhs = crate::subspace::coords(&unit, d);
                let x = m
                    .solve(&rhs)
                    .ok_or_else(|| Error::NonUnit(self.format(a)))?;
                let x = crate::subspace::from_coords(&x);
                if self.mul(&x, a) != unit {
                    return Err(Error::NonUnit(self.format(a)));
                }
                Ok(x)
            }
        }
    }

    pub fn is_unit(&self, a: &SparseVec) -> bool {
        self.inverse(a).is_ok()
    }

    pub fn basis_label(&self, idx: usize) -> String {
        match self {
            Algebra::Free(f) => {
                let w = f.word(idx);
                if w.is_empty() {
                    "1".into()
                } else {
                    w.iter()
                        .map(|&l| f.names[l].as_str())
                        .collect::<Vec<_>>()
                        .join("*")
                }
            }
            Algebra::Structure(s) => s.names[idx].clone(),
        }
    }

    /// Canonical printer; its output parses back to the same element.
    pub fn format(&self, a: &SparseVec) -> String {
        if a.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (n, (&i, c)) in a.iter().enumerate() {
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let label = self.basis_label(i);
            let is_one = matches!(self, Algebra::Free(_)) && label == "1";
            if is_one {
                out.push_str(&fmt_q(&mag));
            } else if mag.is_one() {
                out.push_str(&label);
            } else {
                out.push_str(&fmt_q(&mag));
                out.push('*');
                out.push_str(&label);
            }
        }
        out
    }

    pub fn parse(&self, text: &str) -> Result<SparseVec> {
        parse_vec(self, text)
    }

    pub fn full_space(&self) -> GradedSubspace {
        GradedSubspace::full(self.grading())
    }

    /// All basis vectors of degree at most `d`.
    pub fn words_up_to(&self, d: usize) -> Vec<usize> {
        let g = self.grading();
        let top = (d + 1).min(g.num_degrees());
        (0..g.offset(top)).collect()
    }

    pub fn span_product(&self, s1: &GradedSubspace, s2: &GradedSubspace) -> GradedSubspace {
        GradedSubspace::op_product(s1, s2, self.grading(), |a, b| self.mul(a, b))
    }

    pub fn span_bracket(&self, s1: &GradedSubspace, s2: &GradedSubspace) -> GradedSubspace {
        GradedSubspace::op_bracket(s1, s2, self.grading(), |a, b| self.mul(a, b))
    }
}

/// An element together with its algebra.
#[derive(Clone)]
pub struct AlgElement {
    ctx: Arc<Algebra>,
    coeffs: SparseVec,
}

impl AlgElement {
    pub fn new(ctx: &Arc<Algebra>, coeffs: SparseVec) -> Result<Self> {
        ctx.grading().check(&coeffs)?;
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(AlgElement {
            ctx: ctx.clone(),
            coeffs,
        })
    }

    pub fn parse(ctx: &Arc<Algebra>, text: &str) -> Result<Self> {
        Ok(AlgElement {
            ctx: ctx.clone(),
            coeffs: ctx.parse(text)?,
        })
    }

    pub fn zero(ctx: &Arc<Algebra>) -> Self {
        AlgElement {
            ctx: ctx.clone(),
            coeffs: SparseVec::new(),
        }
    }

    pub fn one(ctx: &Arc<Algebra>) -> Result<Self> {
        let u = ctx
            .unit()
            .ok_or_else(|| Error::NonUnit("algebra has no unit".into()))?;
        Ok(AlgElement {
            ctx: ctx.clone(),
            coeffs: u,
        })
    }

    pub fn context(&self) -> &Arc<Algebra> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &SparseVec {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> SparseVec {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ctx, &other.ctx) {
            Ok(())
        } else {
            Err(Error::ContextMismatch)
        }
    }

    fn wrap(&self, coeffs: SparseVec) -> Self {
        AlgElement {
            ctx: self.ctx.clone(),
            coeffs,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.ctx.mul(&self.coeffs, &other.coeffs)))
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(self.ctx.bracket(&self.coeffs, &other.coeffs)))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(crate::scalar::add(&self.coeffs, &other.coeffs)))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.wrap(crate::scalar::sub(&self.coeffs, &other.coeffs)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        self.wrap(scaled(&self.coeffs, c))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(self.wrap(self.ctx.inverse(&self.coeffs)?))
    }
}

impl PartialEq for AlgElement {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ctx, &other.ctx) && self.coeffs == other.coeffs
    }
}

impl fmt::Display for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctx.format(&self.coeffs))
    }
}

impl fmt::Debug for AlgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgElement({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use proptest::prelude::*;

    fn el(ctx: &Arc<Algebra>, s: &str) -> AlgElement {
        AlgElement::parse(ctx, s).unwrap()
    }

    #[test]
    fn concatenation_and_truncation() {
        let f = Algebra::free(2, 2, false).unwrap();
        assert_eq!(el(&f, "x").mul(&el(&f, "y")).unwrap(), el(&f, "x*y"));
        assert!(el(&f, "x").mul(&el(&f, "x*y")).unwrap().is_zero());
        assert!(el(&f, "x^3").is_zero());
    }

    #[test]
    fn matrix_units() {
        let m = Algebra::matrices(2);
        assert_eq!(el(&m, "e12").mul(&el(&m, "e21")).unwrap(), el(&m, "e11"));
        assert!(el(&m, "e12").mul(&el(&m, "e12")).unwrap().is_zero());
    }

    #[test]
    fn commutators() {
        let f = Algebra::free(2, 3, true).unwrap();
        assert!(el(&f, "x").commutator(&el(&f, "x")).unwrap().is_zero());
        assert_eq!(
            el(&f, "x").commutator(&el(&f, "y")).unwrap(),
            el(&f, "x*y - y*x")
        );
        assert!(el(&f, "1").commutator(&el(&f, "y")).unwrap().is_zero());
        assert_eq!(el(&f, "[x,y]"), el(&f, "x*y - y*x"));
    }

    #[test]
    fn geometric_inverse() {
        let f = Algebra::free(2, 3, true).unwrap();
        assert_eq!(
            el(&f, "1+x").inverse().unwrap(),
            el(&f, "1 - x + x^2 - x^3")
        );
        assert_eq!(el(&f, "1").inverse().unwrap(), el(&f, "1"));
        assert!(matches!(el(&f, "x").inverse(), Err(Error::NonUnit(_))));
    }

    #[test]
    fn structure_inverse() {
        let m = Algebra::matrices(2);
        let a = el(&m, "e11 + e12 + 2*e22");
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), AlgElement::one(&m).unwrap());
        assert!(el(&m, "e11").inverse().is_err());
    }

    #[test]
    fn parse_errors() {
        let f = Algebra::free(2, 2, false).unwrap();
        assert!(matches!(f.parse("z"), Err(Error::UnknownGenerator(_))));
        assert!(matches!(f.parse("1 + x"), Err(Error::UnitInNonunital)));
        assert!(matches!(f.parse("x + * y"), Err(Error::Syntax { .. })));
        assert!(f.parse("2*x").is_ok());
    }

    #[test]
    fn printer_round_trip() {
        let f = Algebra::free(2, 3, true).unwrap();
        let a = el(&f, "1 + 2*x*y - y*x + 1/3*y^3");
        assert_eq!(el(&f, &a.to_string()), a);
        assert_eq!(a.to_string(), "1 + 2*x*y - y*x + 1/3*y*y*y");
    }

    #[test]
    fn structure_table_must_be_associative() {
        // a two-dimensional table with e0 e1 = e0 and everything else zero except e1 e1 = e0
        let mut table = vec![vec![SparseVec::new(); 2]; 2];
        table[0][1] = unit_vec(0);
        table[1][1] = unit_vec(0);
        table[1][0] = unit_vec(1);
        let r = StructureContext::new(vec!["a".into(), "b".into()], table, None);
        assert!(matches!(r, Err(Error::NotAssociative)));
    }

    fn arb_elem(dim: usize) -> impl Strategy<Value = SparseVec> {
        proptest::collection::vec((0..dim, -3i64..4), 0..6).prop_map(|es| {
            let mut v = SparseVec::new();
            for (i, c) in es {
                add_term(&mut v, i, q(c));
            }
            v
        })
    }

    proptest! {
        #[test]
        fn associativity_free(a in arb_elem(15), b in arb_elem(15), c in arb_elem(15)) {
            let f = Algebra::free(2, 3, true).unwrap();
            prop_assert_eq!(f.mul(&f.mul(&a, &b), &c), f.mul(&a, &f.mul(&b, &c)));
        }

        #[test]
        fn associativity_matrix(a in arb_elem(9), b in arb_elem(9), c in arb_elem(9)) {
            let m = Algebra::matrices(3);
            prop_assert_eq!(m.mul(&m.mul(&a, &b), &c), m.mul(&a, &m.mul(&b, &c)));
        }

        #[test]
        fn units_invert_both_sides(a in arb_elem(15), c in 1i64..5) {
            let f = Algebra::free(2, 3, true).unwrap();
            let mut u = a;
            u.insert(0, q(c));
            let inv = f.inverse(&u).unwrap();
            prop_assert_eq!(f.mul(&u, &inv), unit_vec(0));
            prop_assert_eq!(f.mul(&inv, &u), unit_vec(0));
        }

        #[test]
        fn grading_is_additive(i in 0usize..14, j in 0usize..14) {
            let f = Algebra::free(2, 3, false).unwrap();
            let g = f.grading();
            let p = f.mul_basis(i, j);
            for k in p.keys() {
                prop_assert_eq!(g.degree_of(*k), g.degree_of(i) + g.degree_of(j));
            }
        }
    }
}
