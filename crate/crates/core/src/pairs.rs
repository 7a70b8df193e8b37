//! Compatible pairs `(g, A)`: a Lie subalgebra `g` of a unital matrix algebra `A`.
//!
//! Everything lives inside `M_n(Q)`, with `E_ij` at coordinate `i*n + j`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};
use serde::Deserialize;

use crate::coeffalg::Algebra;
use crate::error::{Error, Result};
use crate::linalg::{rational_roots, Mat};
use crate::scalar::{add_scaled, q, SparseVec, Q};
use crate::subspace::{coords, from_coords, GradedSubspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PairType {
    Finite(usize),
    Infinite,
}

impl fmt::Display for PairType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PairType::Finite(m) => write!(f, "{m}"),
            PairType::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerfectReport {
    pub perfect: bool,
    pub first_failure: Option<usize>,
    pub checked_up_to: usize,
}

pub struct CompatiblePair {
    name: String,
    n: usize,
    mat: Arc<Algebra>,
    a: GradedSubspace,
    g: GradedSubspace,
    g_basis: Vec<SparseVec>,
    semisimple: bool,
    powers: Mutex<Vec<GradedSubspace>>,
}

impl fmt::Debug for CompatiblePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CompatiblePair({}, dim g = {}, dim A = {})",
            self.name,
            self.g.dim(),
            self.a.dim()
        )
    }
}

impl CompatiblePair {
    /// Builds a pair from a basis of `g` and an optional basis of `A` (default: all of `M_n`).
    pub fn new(
        name: impl Into<String>,
        n: usize,
        g_basis: &[Mat],
        a_basis: Option<&[Mat]>,
        semisimple: bool,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("matrix size must be positive".into()));
        }
        let mat = Algebra::matrices(n);
        let grading = mat.grading().clone();
        let g = GradedSubspace::span(
            &grading,
            &g_basis.iter().map(Mat::to_sparse).collect::<Vec<_>>(),
        );
        let a = match a_basis {
            Some(b) => {
                GradedSubspace::span(&grading, &b.iter().map(Mat::to_sparse).collect::<Vec<_>>())
            }
            None => mat.full_space(),
        };
        if !a.contains(&Mat::identity(n).to_sparse()) {
            return Err(Error::NotCompatible("A must contain the identity".into()));
        }
        if !mat.span_product(&a, &a).is_subset(&a)? {
            return Err(Error::NotCompatible(
                "A is not closed under multiplication".into(),
            ));
        }
        if !g.is_subset(&a)? {
            return Err(Error::NotCompatible("g is not contained in A".into()));
        }
        if !mat.span_bracket(&g, &g).is_subset(&g)? {
            return Err(Error::NotCompatible("[g, g] is not contained in g".into()));
        }
        let g_basis = g.basis();
        Ok(CompatiblePair {
            name: name.into(),
            n,
            mat,
            a,
            powers: Mutex::new(vec![g.clone()]),
            g,
            g_basis,
            semisimple,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn matrix_algebra(&self) -> &Arc<Algebra> {
        &self.mat
    }

    pub fn a_space(&self) -> &GradedSubspace {
        &self.a
    }

    pub fn g_space(&self) -> &GradedSubspace {
        &self.g
    }

    pub fn g_basis(&self) -> &[SparseVec] {
        &self.g_basis
    }

    pub fn g_matrices(&self) -> Vec<Mat> {
        self.g_basis
            .iter()
            .map(|v| Mat::from_sparse(self.n, v))
            .collect()
    }

    pub fn is_semisimple(&self) -> bool {
        self.semisimple
    }

    pub fn is_abelian(&self) -> bool {
        self.mat.span_bracket(&self.g, &self.g).is_zero()
    }

    pub fn identity(&self) -> SparseVec {
        Mat::identity(self.n).to_sparse()
    }

    fn span(&self, vs: &[SparseVec]) -> GradedSubspace {
        GradedSubspace::span(self.mat.grading(), vs)
    }

    /// `g^k`, the span of `k`-fold products.
    pub fn g_power(&self, k: usize) -> GradedSubspace {
        assert!(k >= 1, "powers start at 1");
        let mut memo = self.powers.lock().unwrap();
        while memo.len() < k {
            let next = self.mat.span_product(&self.g, memo.last().unwrap());
            memo.push(next);
        }
        memo[k - 1].clone()
    }

    /// `[g, g^k]`
    pub fn bracket_power(&self, k: usize) -> GradedSubspace {
        self.mat.span_bracket(&self.g, &self.g_power(k))
    }

    /// `g + g^2 + ... + g^m`
    pub fn cumulative_power(&self, m: usize) -> GradedSubspace {
        let mut acc = self.g.clone();
        for k in 2..=m {
            acc.absorb(&self.g_power(k));
        }
        acc
    }

    /// Index after which the cumulative sums stop growing.
    fn cumulative_stable_index(&self) -> usize {
        let mut acc = self.g.clone();
        let mut k = 1;
        loop {
            let before = acc.dim();
            acc.absorb(&self.g_power(k + 1));
            if acc.dim() == before {
                return k;
            }
            k += 1;
        }
    }

    /// The associative subalgebra generated by `g`.
    pub fn enveloping(&self) -> GradedSubspace {
        self.cumulative_power(self.cumulative_stable_index())
    }

    /// First `k` with `g^k = g^{k+1}` (after which the powers are constant), capped two steps
    /// past the point where the cumulative sums stop growing.
    pub fn stabilization_point(&self) -> usize {
        let cap = self.cumulative_stable_index() + 2;
        (1..cap)
            .find(|&k| self.g_power(k) == self.g_power(k + 1))
            .unwrap_or(cap)
    }

    pub fn pair_type(&self) -> PairType {
        let mut acc = self.g.clone();
        let mut m = 1;
        loop {
            if acc == self.a {
                return PairType::Finite(m);
            }
            let before = acc.dim();
            acc.absorb(&self.g_power(m + 1));
            if acc.dim() == before {
                return PairType::Infinite;
            }
            m += 1;
        }
    }

    /// Checks `[g, g^k] g + (g^k ∩ g^{k+1}) = g^{k+1}` for `k = 2..=k_max`.
    pub fn is_perfect(&self, k_max: Option<usize>) -> PerfectReport {
        let k_max = k_max.unwrap_or_else(|| self.stabilization_point()).max(2);
        for k in 2..=k_max {
            let lhs = self.mat.span_product(&self.bracket_power(k), &self.g);
            let inter = self.g_power(k).intersect(&self.g_power(k + 1)).unwrap();
            let lhs = lhs.sum(&inter).unwrap();
            if lhs != self.g_power(k + 1) {
                return PerfectReport {
                    perfect: false,
                    first_failure: Some(k),
                    checked_up_to: k_max,
                };
            }
        }
        PerfectReport {
            perfect: true,
            first_failure: None,
            checked_up_to: k_max,
        }
    }

    /// Span of `x^k` over `x` in `g`, via symmetrized products of basis elements.
    pub fn tilde_power(&self, k: usize) -> GradedSubspace {
        let mats = self.g_matrices();
        let d = mats.len();
        let mut memo: BTreeMap<Vec<usize>, Mat> = BTreeMap::new();
        let mut out = Vec::new();
        let mut counts = vec![0usize; d];
        multisets(d, k, &mut counts, 0, &mut |c| {
            out.push(sym_product(c, &mats, self.n, &mut memo).to_sparse());
        });
        self.span(&out)
    }

    /// Center of the enveloping algebra intersected with `g^k`.
    pub fn center_part(&self, k: usize) -> GradedSubspace {
        let env = self.enveloping();
        self.center_of(&env).intersect(&self.g_power(k)).unwrap()
    }

    fn center_of(&self, s: &GradedSubspace) -> GradedSubspace {
        let basis = s.basis();
        let nn = self.n * self.n;
        // unknown coefficients c_i with [sum c_i b_i, b_j] = 0 for every j
        let mut rows = Vec::new();
        for bj in &basis {
            let brs: Vec<Vec<Q>> = basis
                .iter()
                .map(|bi| coords(&self.mat.bracket(bi, bj), nn))
                .collect();
            for e in 0..nn {
                rows.push(brs.iter().map(|b| b[e].clone()).collect::<Vec<_>>());
            }
        }
        if rows.is_empty() {
            return s.clone();
        }
        let ns = Mat::from_rows(rows).nullspace();
        let vs: Vec<SparseVec> = ns
            .iter()
            .map(|c| {
                let mut v = SparseVec::new();
                for (ci, bi) in c.iter().zip(&basis) {
                    add_scaled(&mut v, bi, ci);
                }
                v
            })
            .collect();
        self.span(&vs)
    }

    /// Coordinates of `v` in the stored basis of `g`.
    pub fn g_coords(&self, v: &SparseVec) -> Option<Vec<Q>> {
        let nn = self.n * self.n;
        let cols: Vec<Vec<Q>> = self.g_basis.iter().map(|b| coords(b, nn)).collect();
        let mut m = Mat::zeros(nn, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m.solve(&coords(v, nn))
    }

    /// Checks that `ad h0` diagonalizes `g` over Q and that its zero eigenspace is
    /// `sum_{c != 0} [g_c, g_{-c}]`.
    pub fn strongly_graded_witness(&self, h0: &Mat) -> Result<bool> {
        let h = h0.to_sparse();
        if !self.g.contains(&h) {
            return Err(Error::Precondition("h0 is not in g".into()));
        }
        let d = self.g_basis.len();
        let mut ad = Mat::zeros(d, d);
        for (j, b) in self.g_basis.iter().enumerate() {
            let c = self
                .g_coords(&self.mat.bracket(&h, b))
                .expect("g is a Lie algebra");
            for (i, x) in c.into_iter().enumerate() {
                ad[(i, j)] = x;
            }
        }
        let roots = rational_roots(&ad.char_poly())
            .ok_or_else(|| Error::Unsupported("ad h0 has eigenvalues outside Q".into()))?;
        let mut distinct = roots;
        distinct.sort();
        distinct.dedup();
        let mut spaces: Vec<(Q, Vec<SparseVec>)> = Vec::new();
        let mut total = 0;
        for c in distinct {
            let shifted = &ad - &Mat::identity(d).scale(&c);
            let vecs: Vec<SparseVec> = shifted
                .nullspace()
                .iter()
                .map(|x| {
                    let mut v = SparseVec::new();
                    for (xi, bi) in x.iter().zip(&self.g_basis) {
                        add_scaled(&mut v, bi, xi);
                    }
                    v
                })
                .collect();
            total += vecs.len();
            spaces.push((c, vecs));
        }
        if total != d {
            return Ok(false);
        }
        let zero_space = spaces
            .iter()
            .find(|(c, _)| c.is_zero())
            .map(|(_, v)| self.span(v))
            .unwrap_or_else(|| GradedSubspace::zero(self.mat.grading()));
        let mut gen = GradedSubspace::zero(self.mat.grading());
        for (c, vs) in &spaces {
            if c.is_zero() {
                continue;
            }
            if let Some((_, ws)) = spaces.iter().find(|(c2, _)| *c2 == -c.clone()) {
                let a = self.span(vs);
                let b = self.span(ws);
                gen.absorb(&self.mat.span_bracket(&a, &b));
            }
        }
        Ok(gen == zero_space)
    }

    /// The highest-weight module `V_{2k}` spanned by `(ad F)^j (E^k)`, `j = 0..=2k`, for an
    /// `sl_2` pair given by [`make_sl2_irrep`].
    pub fn sl2_module(&self, k: usize) -> GradedSubspace {
        let [e, f, _] = sl2_triple(self.n);
        let mut cur = e.pow(k);
        let mut out = vec![cur.to_sparse()];
        for _ in 0..2 * k {
            cur = f.bracket(&cur);
            out.push(cur.to_sparse());
        }
        self.span(&out)
    }
}

fn multisets(
    d: usize,
    k: usize,
    counts: &mut Vec<usize>,
    start: usize,
    f: &mut dyn FnMut(&[usize]),
) {
    if k == 0 {
        f(counts);
        return;
    }
    for i in start..d {
        counts[i] += 1;
        multisets(d, k - 1, counts, i, f);
        counts[i] -= 1;
    }
}

/// Sum of `b_{s_1} ... b_{s_k}` over distinct orderings of the multiset with the given counts.
fn sym_product(
    counts: &[usize],
    mats: &[Mat],
    n: usize,
    memo: &mut BTreeMap<Vec<usize>, Mat>,
) -> Mat {
    if counts.iter().all(|&c| c == 0) {
        return Mat::identity(n);
    }
    if let Some(m) = memo.get(counts) {
        return m.clone();
    }
    let mut acc = Mat::zeros(n, n);
    let mut rest = counts.to_vec();
    for i in 0..counts.len() {
        if counts[i] == 0 {
            continue;
        }
        rest[i] -= 1;
        let tail = sym_product(&rest, mats, n, memo);
        acc = &acc + &(&mats[i] * &tail);
        rest[i] += 1;
    }
    memo.insert(counts.to_vec(), acc.clone());
    acc
}

pub fn make_gl(n: usize) -> Result<CompatiblePair> {
    if n < 1 {
        return Err(Error::InvalidSize("gl needs n >= 1".into()));
    }
    let basis: Vec<Mat> = (0..n * n).map(|k| Mat::unit(n, k / n, k % n)).collect();
    CompatiblePair::new(format!("gl:{n}"), n, &basis, None, false)
}

pub fn make_sl(n: usize) -> Result<CompatiblePair> {
    if n < 2 {
        return Err(Error::InvalidSize("sl needs n >= 2".into()));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(Mat::unit(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        basis.push(&Mat::unit(n, i, i) - &Mat::unit(n, i + 1, i + 1));
    }
    CompatiblePair::new(format!("sl:{n}"), n, &basis, None, true)
}

/// Antidiagonal symmetric form `x_1 y_n + ... + x_n y_1`.
pub fn form_phi0(n: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        m[(i, n - 1 - i)] = Q::one();
    }
    m
}

/// Skew form on `Q^{2m}`: `+1` at `(i, 2m+1-i)` for `i <= m`, `-1` below the middle.
pub fn form_phi1(m: usize) -> Mat {
    let n = 2 * m;
    let mut out = Mat::zeros(n, n);
    for i in 0..n {
        out[(i, n - 1 - i)] = if i < m { Q::one() } else { -Q::one() };
    }
    out
}

/// Solutions of `M^T Φ + Φ M = 0` as matrices.
pub fn form_algebra(phi: &Mat) -> Vec<Mat> {
    let n = phi.rows;
    let mut rows = Vec::new();
    for r in 0..n {
        for c in 0..n {
            // (M^T Φ + Φ M)_{rc} = sum_k M_{kr} Φ_{kc} + Φ_{rk} M_{kc}
            let mut row = vec![Q::zero(); n * n];
            for k in 0..n {
                row[k * n + r] += &phi[(k, c)];
                row[k * n + c] += &phi[(r, k)];
            }
            rows.push(row);
        }
    }
    Mat::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(|x| Mat::from_sparse(n, &from_coords(&x)))
        .collect()
}

pub fn make_orthogonal(n: usize) -> Result<CompatiblePair> {
    if n < 2 {
        return Err(Error::InvalidSize("orthogonal algebra needs n >= 2".into()));
    }
    let basis = form_algebra(&form_phi0(n));
    // o(2) is one-dimensional abelian
    CompatiblePair::new(format!("so:{n}"), n, &basis, None, n >= 3)
}

pub fn make_symplectic(n: usize) -> Result<CompatiblePair> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(Error::InvalidSize(
            "symplectic algebra needs an even n >= 2".into(),
        ));
    }
    let basis = form_algebra(&form_phi1(n / 2));
    CompatiblePair::new(format!("sp:{n}"), n, &basis, None, true)
}

/// Pair attached to a possibly degenerate form: `A` is the stabilizer of the kernel
/// `K = ker_left + ker_right`, and `g = o(Φ) ∩ A`.
pub fn make_orthogonal_degenerate(phi: &Mat) -> Result<CompatiblePair> {
    let n = phi.rows;
    if !phi.is_square() || n == 0 {
        return Err(Error::InvalidSize("form must be a square matrix".into()));
    }
    let t = phi.transpose();
    if t != *phi && t != phi.scale(&-Q::one()) {
        return Err(Error::FormNotSymmetric);
    }
    let kernel = kernel_of_form(phi);
    let grading = Algebra::matrices(n).grading().clone();
    let a_basis = stabilizer(n, &kernel);
    let a_space = GradedSubspace::span(
        &grading,
        &a_basis.iter().map(Mat::to_sparse).collect::<Vec<_>>(),
    );
    let o_space = GradedSubspace::span(
        &grading,
        &form_algebra(phi)
            .iter()
            .map(Mat::to_sparse)
            .collect::<Vec<_>>(),
    );
    let g_space = o_space.intersect(&a_space)?;
    let g_basis: Vec<Mat> = g_space
        .basis()
        .iter()
        .map(|v| Mat::from_sparse(n, v))
        .collect();
    CompatiblePair::new(format!("form:{n}"), n, &g_basis, Some(&a_basis), false)
}

/// Basis of `ker_left(Φ) + ker_right(Φ)` as coordinate vectors.
pub fn kernel_of_form(phi: &Mat) -> Vec<Vec<Q>> {
    let mut all = phi.nullspace();
    all.extend(phi.transpose().nullspace());
    if all.is_empty() {
        return all;
    }
    let mut m = Mat::from_rows(all);
    let piv = m.rref();
    (0..piv.len())
        .map(|r| (0..m.cols).map(|c| m[(r, c)].clone()).collect())
        .collect()
}

/// Basis of `{M : M K ⊆ K}`.
fn stabilizer(n: usize, kernel: &[Vec<Q>]) -> Vec<Mat> {
    if kernel.is_empty() {
        return (0..n * n).map(|k| Mat::unit(n, k / n, k % n)).collect();
    }
    // annihilator of K: rows w with w·k = 0
    let ann = Mat::from_rows(kernel.to_vec()).nullspace();
    let mut rows = Vec::new();
    for w in &ann {
        for k in kernel {
            // w^T M k = sum_{ij} w_i M_ij k_j
            let mut row = vec![Q::zero(); n * n];
            for i in 0..n {
                for j in 0..n {
                    row[i * n + j] = &w[i] * &k[j];
                }
            }
            rows.push(row);
        }
    }
    if rows.is_empty() {
        return (0..n * n).map(|k| Mat::unit(n, k / n, k % n)).collect();
    }
    Mat::from_rows(rows)
        .nullspace()
        .into_iter()
        .map(|x| Mat::from_sparse(n, &from_coords(&x)))
        .collect()
}

/// `E`, `F`, `H` acting on the `n`-dimensional simple module.
pub fn sl2_triple(n: usize) -> [Mat; 3] {
    let mut e = Mat::zeros(n, n);
    let mut f = Mat::zeros(n, n);
    for i in 1..n {
        e[(i - 1, i)] = q(i as i64);
        f[(n - i, n - i - 1)] = q(i as i64);
    }
    let h = e.bracket(&f);
    [e, f, h]
}

pub fn make_sl2_irrep(n: usize) -> Result<CompatiblePair> {
    if n < 2 {
        return Err(Error::InvalidSize("sl2 module needs n >= 2".into()));
    }
    let basis = sl2_triple(n);
    CompatiblePair::new(format!("sl2irrep:{n}"), n, &basis, None, true)
}

/// One nilpotent Jordan block spanning an abelian `g`.
pub fn make_abelian_nilpotent(n: usize) -> Result<CompatiblePair> {
    if n < 2 {
        return Err(Error::InvalidSize("Jordan block needs n >= 2".into()));
    }
    let mut nmat = Mat::zeros(n, n);
    for i in 0..n - 1 {
        nmat[(i, i + 1)] = Q::one();
    }
    CompatiblePair::new(format!("jordan:{n}"), n, &[nmat], None, false)
}

/// Parses `sl:3`, `gl:2`, `so:4`, `sp:4`, `sl2irrep:3`, `jordan:3`.
pub fn pair_from_spec(spec: &str) -> Result<CompatiblePair> {
    let (kind, size) = spec
        .split_once(':')
        .ok_or_else(|| Error::Config(format!("pair spec '{spec}' should look like kind:n")))?;
    let n: usize = size
        .parse()
        .map_err(|_| Error::Config(format!("bad size in pair spec '{spec}'")))?;
    match kind {
        "sl" => make_sl(n),
        "gl" => make_gl(n),
        "so" => make_orthogonal(n),
        "sp" => make_symplectic(n),
        "sl2irrep" => make_sl2_irrep(n),
        "jordan" => make_abelian_nilpotent(n),
        _ => Err(Error::Config(format!("unknown pair kind '{kind}'"))),
    }
}

#[derive(Deserialize)]
struct PairFile {
    name: Option<String>,
    n: usize,
    g: Vec<Vec<Vec<serde_json::Value>>>,
    a: Option<Vec<Vec<Vec<serde_json::Value>>>>,
    #[serde(default)]
    semisimple: bool,
}

fn json_entry(v: &serde_json::Value) -> Result<Q> {
    match v {
        serde_json::Value::Number(x) => x
            .as_i64()
            .map(q)
            .ok_or_else(|| Error::Config(format!("matrix entry {x} is not an integer"))),
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (num, den) = s.split_once('/').unwrap_or((s, "1"));
            let num: num_bigint::BigInt = num
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad entry '{s}'")))?;
            let den: num_bigint::BigInt = den
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad entry '{s}'")))?;
            if den.is_zero() {
                return Err(Error::Config("zero denominator".into()));
            }
            Ok(Q::new(num, den))
        }
        _ => Err(Error::Config(
            "matrix entries must be numbers or rational strings".into(),
        )),
    }
}

fn json_mats(n: usize, ms: &[Vec<Vec<serde_json::Value>>]) -> Result<Vec<Mat>> {
    ms.iter()
        .map(|m| {
            if m.len() != n || m.iter().any(|r| r.len() != n) {
                return Err(Error::InvalidSize(format!("expected {n}x{n} matrices")));
            }
            let mut out = Mat::zeros(n, n);
            for (i, r) in m.iter().enumerate() {
                for (j, x) in r.iter().enumerate() {
                    out[(i, j)] = json_entry(x)?;
                }
            }
            Ok(out)
        })
        .collect()
}

/// Loads `{"name": .., "n": .., "g": [matrices], "a": [matrices]?, "semisimple": bool?}`.
pub fn pair_from_json(text: &str) -> Result<CompatiblePair> {
    let f: PairFile = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let g = json_mats(f.n, &f.g)?;
    let a = f.a.as_ref().map(|a| json_mats(f.n, a)).transpose()?;
    CompatiblePair::new(
        f.name.unwrap_or_else(|| "custom".into()),
        f.n,
        &g,
        a.as_deref(),
        f.semisimple,
    )
}

/// Casimir `2EF + 2FE + H^2` of the triple.
pub fn casimir(n: usize) -> Mat {
    let [e, f, h] = sl2_triple(n);
    let two = q(2);
    &(&(&e * &f).scale(&two) + &(&f * &e).scale(&two)) + &(&h * &h)
}

/// Whether a matrix is nilpotent (`M^n = 0`).
pub fn is_nilpotent(m: &Mat) -> bool {
    m.pow(m.rows).is_zero()
}
