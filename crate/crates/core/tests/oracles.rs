//! Dimension counts checked against oracles that do not use the library's algorithms:
//! necklace counts, commutative monomial counts and a dense brute-force closure.

use std::collections::{BTreeMap, HashMap};

use ncurrents::commfilt::FiltrationCache;
use ncurrents::current::{lie_closure, ClosedForms, TensorContext};
use ncurrents::pairs::{pair_from_spec, CompatiblePair};
use ncurrents::Algebra;
use num_rational::BigRational;
use num_traits::{One, Zero};

type Q = BigRational;

fn euler_phi(n: usize) -> usize {
    (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count()
}

/// Cyclic words of length `d` over `m` letters.
fn necklaces(m: usize, d: usize) -> usize {
    let s: usize = (1..=d)
        .filter(|e| d.is_multiple_of(*e))
        .map(|e| euler_phi(e) * m.pow((d / e) as u32))
        .sum();
    s / d
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// `dim [F,F]_d` in the free algebra: words modulo rotation span the cokernel.
fn commutator_dim(m: usize, d: usize) -> usize {
    if d == 0 {
        0
    } else {
        m.pow(d as u32) - necklaces(m, d)
    }
}

/// `dim I_1(F)_d`: kernel of the map onto commutative polynomials.
fn abelian_kernel_dim(m: usize, d: usize) -> usize {
    m.pow(d as u32) - binom(d + m - 1, m - 1)
}

#[test]
fn commutator_space_matches_necklaces() {
    for (m, deg) in [(2, 6), (3, 4)] {
        for unital in [false, true] {
            let f = Algebra::free(m, deg, unital).unwrap();
            let mut c = FiltrationCache::new(&f);
            let want: Vec<usize> = (0..=deg).map(|d| commutator_dim(m, d)).collect();
            assert_eq!(
                c.commutator_space(1).dim_profile(),
                want,
                "m={m} unital={unital}"
            );
        }
    }
}

#[test]
fn first_ideal_is_the_abelianization_kernel() {
    for (m, deg) in [(2, 6), (3, 4)] {
        let f = Algebra::free(m, deg, false).unwrap();
        let mut c = FiltrationCache::new(&f);
        let want: Vec<usize> = (0..=deg)
            .map(|d| if d == 0 { 0 } else { abelian_kernel_dim(m, d) })
            .collect();
        assert_eq!(c.ideal_ik(1).dim_profile(), want, "m={m}");
    }
    // two letters, degree three: one commutator in degree 2 and four in degree 3
    let f = Algebra::free(2, 3, false).unwrap();
    let mut c = FiltrationCache::new(&f);
    assert_eq!(c.ideal_ik(1).dim_profile(), vec![0, 0, 1, 4]);
}

#[test]
fn special_linear_closure_dimensions() {
    // trace splits the closure into [F,F] 1 and F sl_n
    for n in [2, 3] {
        let f = Algebra::free(2, 4, false).unwrap();
        let p = pair_from_spec(&format!("sl:{n}")).unwrap();
        let t = TensorContext::new(&f, n);
        let l = lie_closure(&p, &t, None);
        let want: Vec<usize> = (0..=4)
            .map(|d| {
                if d == 0 {
                    0
                } else {
                    (n * n - 1) * 2usize.pow(d as u32) + commutator_dim(2, d)
                }
            })
            .collect();
        assert_eq!(l.dim_profile(), want, "sl:{n}");
    }
    let f = Algebra::free(2, 2, false).unwrap();
    let t = TensorContext::new(&f, 2);
    let l = lie_closure(&pair_from_spec("sl:2").unwrap(), &t, None);
    assert_eq!(l.dim_profile(), vec![0, 6, 13]);
}

#[test]
fn matrix_coefficients() {
    // F = M_2: the closure of F sl_2 is sl_2 1 + M_2 sl_2, of dimension 3 + 12
    let f = Algebra::matrices(2);
    let p = pair_from_spec("sl:2").unwrap();
    let t = TensorContext::new(&f, 2);
    let l = lie_closure(&p, &t, None);
    assert_eq!(l.dim(), 15);
    let mut cf = ClosedForms::new(&p, &t);
    assert_eq!(cf.simple_f_form(), l);
}

/// Elements of `F ⊗ M_n` keyed by (word, row, column), words of length `1..=deg`.
type Elem = BTreeMap<(Vec<u8>, usize, usize), Q>;

fn mul(x: &Elem, y: &Elem, deg: usize) -> Elem {
    let mut out = Elem::new();
    for ((w1, i, j), a) in x {
        for ((w2, k, l), b) in y {
            if j != k || w1.len() + w2.len() > deg {
                continue;
            }
            let mut w = w1.clone();
            w.extend(w2);
            let e = out.entry((w, *i, *l)).or_insert_with(Q::zero);
            *e += a * b;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

fn bracket(x: &Elem, y: &Elem, deg: usize) -> Elem {
    let mut out = mul(x, y, deg);
    for (k, v) in mul(y, x, deg) {
        let e = out.entry(k).or_insert_with(Q::zero);
        *e -= v;
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Row-reduced rows over a shared coordinate map, one echelon per degree.
#[derive(Default)]
struct Echelon {
    index: HashMap<(Vec<u8>, usize, usize), usize>,
    rows: BTreeMap<usize, Vec<(usize, Vec<Q>)>>,
}

impl Echelon {
    fn dense(&mut self, x: &Elem) -> Vec<Q> {
        for k in x.keys() {
            let next = self.index.len();
            self.index.entry(k.clone()).or_insert(next);
        }
        let mut v = vec![Q::zero(); self.index.len()];
        for (k, c) in x {
            v[self.index[k]] = c.clone();
        }
        v
    }

    /// Adds `x` (homogeneous) and reports whether the span grew.
    fn insert(&mut self, x: &Elem) -> bool {
        let Some(((w, _, _), _)) = x.iter().next() else {
            return false;
        };
        let d = w.len();
        let mut v = self.dense(x);
        let rows = self.rows.entry(d).or_default();
        for (p, r) in rows.iter() {
            if *p < v.len() && !v[*p].is_zero() {
                let c = v[*p].clone();
                for (i, ri) in r.iter().enumerate() {
                    if i < v.len() {
                        v[i] -= &c * ri;
                    }
                }
            }
        }
        let Some(p) = v.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = Q::one() / &v[p];
        for c in v.iter_mut() {
            *c *= &inv;
        }
        for (_, r) in rows.iter_mut() {
            if r.len() > p && !r[p].is_zero() {
                let c = r[p].clone();
                r.resize(v.len().max(r.len()), Q::zero());
                for i in 0..v.len() {
                    let t = &c * &v[i];
                    r[i] -= t;
                }
            }
        }
        rows.push((p, v));
        true
    }

    fn profile(&self, deg: usize) -> Vec<usize> {
        (0..=deg)
            .map(|d| self.rows.get(&d).map_or(0, Vec::len))
            .collect()
    }
}

fn words(m: u8, deg: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer = vec![Vec::new()];
    for _ in 0..deg {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..m {
                let mut w2: Vec<u8> = w.clone();
                w2.push(a);
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Brute-force closure of `F ⊗ g` for the nonunital free algebra on two letters.
fn brute_closure(pair: &CompatiblePair, deg: usize) -> Vec<usize> {
    let n = pair.size();
    let mut gens = Vec::new();
    for w in words(2, deg) {
        for g in pair.g_matrices() {
            let mut e = Elem::new();
            for i in 0..n {
                for j in 0..n {
                    let c = g[(i, j)].clone();
                    if !c.is_zero() {
                        e.insert((w.clone(), i, j), c);
                    }
                }
            }
            gens.push(e);
        }
    }
    let mut ech = Echelon::default();
    let mut frontier = Vec::new();
    for g in &gens {
        if ech.insert(g) {
            frontier.push(g.clone());
        }
    }
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for x in &frontier {
            for g in &gens {
                let b = bracket(g, x, deg);
                if !b.is_empty() && ech.insert(&b) {
                    next.push(b);
                }
            }
        }
        frontier = next;
    }
    ech.profile(deg)
}

#[test]
fn brute_force_closures_agree() {
    for (spec, deg) in [
        ("jordan:3", 3),
        ("so:3", 3),
        ("sl2irrep:3", 2),
        ("sp:4", 2),
        ("sl:2", 3),
    ] {
        let p = pair_from_spec(spec).unwrap();
        let f = Algebra::free(2, deg, false).unwrap();
        let t = TensorContext::new(&f, p.size());
        let l = lie_closure(&p, &t, None);
        assert_eq!(l.dim_profile(), brute_closure(&p, deg), "{spec} D={deg}");
    }
}

#[test]
fn brute_force_oracle_on_scalars() {
    // sanity check of the oracle itself on F ⊗ gl_1
    let p = pair_from_spec("gl:1").unwrap();
    let prof = brute_closure(&p, 3);
    assert_eq!(prof, vec![0, 2, 4, 8]);
}
