//! Commutator filtration of a coefficient algebra.
//!
//! For a subspace `S` of an algebra, `S^(0) = S` and `S^(k) = [S, S^(k-1)]`. The spaces
//! `I_k^l(S)` are sums of `l`-fold products `S^(a_1) ... S^(a_l)` with `a_1 + ... + a_l = k`.
//! With `S` the whole algebra these give the ideals `I_k`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::coeffalg::Algebra;
use crate::subspace::GradedSubspace;

/// Memoized filtration data for one algebra and one generating subspace.
pub struct FiltrationCache {
    alg: Arc<Algebra>,
    s: GradedSubspace,
    comm: Vec<GradedSubspace>,
    prefix: HashMap<Vec<usize>, GradedSubspace>,
    ikl: HashMap<(usize, usize), GradedSubspace>,
    ik: HashMap<usize, GradedSubspace>,
}

impl FiltrationCache {
    /// Filtration of the whole algebra.
    pub fn new(alg: &Arc<Algebra>) -> Self {
        Self::with_subspace(alg, alg.full_space())
    }

    /// Filtration generated by `s` inside `alg`.
    pub fn with_subspace(alg: &Arc<Algebra>, s: GradedSubspace) -> Self {
        FiltrationCache {
            alg: alg.clone(),
            comm: vec![s.clone()],
            s,
            prefix: HashMap::new(),
            ikl: HashMap::new(),
            ik: HashMap::new(),
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn generating_space(&self) -> &GradedSubspace {
        &self.s
    }

    pub fn zero(&self) -> GradedSubspace {
        GradedSubspace::zero(self.alg.grading())
    }

    /// `S^(k)`
    pub fn commutator_space(&mut self, k: usize) -> GradedSubspace {
        while self.comm.len() <= k {
            let prev = self.comm.last().unwrap();
            let next = self.alg.span_bracket(&self.s, prev);
            self.comm.push(next);
        }
        self.comm[k].clone()
    }

    fn prefix_product(&mut self, parts: &[usize]) -> GradedSubspace {
        if let Some(p) = self.prefix.get(parts) {
            return p.clone();
        }
        let out = match parts {
            [] => unreachable!("empty prefix"),
            [a] => self.commutator_space(*a),
            [init @ .., last] => {
                let head = self.prefix_product(init);
                if head.is_zero() {
                    head
                } else {
                    let tail = self.commutator_space(*last);
                    self.alg.span_product(&head, &tail)
                }
            }
        };
        self.prefix.insert(parts.to_vec(), out.clone());
        out
    }

    /// Sum over compositions of `k` into `l` nonnegative parts, built depth-first so that
    /// every prefix product is computed once and zero prefixes cut the search.
    pub fn ideal_ikl(&mut self, k: usize, l: usize) -> GradedSubspace {
        if let Some(s) = self.ikl.get(&(k, l)) {
            return s.clone();
        }
        let mut acc = self.zero();
        if l > 0 {
            let mut stack = vec![Vec::new()];
            while let Some(parts) = stack.pop() {
                let used: usize = parts.iter().sum();
                if parts.len() + 1 == l {
                    let mut full = parts.clone();
                    full.push(k - used);
                    let p = self.prefix_product(&full);
                    acc.absorb(&p);
                    continue;
                }
                for a in 0..=(k - used) {
                    let mut next = parts.clone();
                    next.push(a);
                    if !self.prefix_product(&next).is_zero() {
                        stack.push(next);
                    }
                }
            }
        }
        self.ikl.insert((k, l), acc.clone());
        acc
    }

    /// `I_k^{<=l}`
    pub fn ideal_ik_le(&mut self, k: usize, l: usize) -> GradedSubspace {
        let mut acc = self.zero();
        for j in 1..=l {
            let t = self.ideal_ikl(k, j);
            acc.absorb(&t);
        }
        acc
    }

    /// `I_k = sum_l I_k^l`. The sum stops at the first `l` where `I_j^{<=l+1} = I_j^{<=l}`
    /// for every `j <= k`; from there the recursion `I_j^{<=l+1} = F[F, I_{j-1}^{<=l}] +
    /// [F, I_{j-1}^{<=l+1}]` keeps every later term inside.
    pub fn ideal_ik(&mut self, k: usize) -> GradedSubspace {
        if let Some(s) = self.ik.get(&k) {
            return s.clone();
        }
        let bound = self.alg.dim() + 2;
        let mut cum: Vec<GradedSubspace> = (0..=k).map(|j| self.ideal_ikl(j, 1)).collect();
        for l in 1..=bound {
            let mut stable = true;
            for (j, c) in cum.iter_mut().enumerate() {
                let next = self.ideal_ikl(j, l + 1);
                let before = c.dim();
                c.absorb(&next);
                stable &= c.dim() == before;
            }
            if stable {
                break;
            }
        }
        for (j, c) in cum.into_iter().enumerate() {
            self.ik.entry(j).or_insert(c);
        }
        self.ik[&k].clone()
    }

    /// `I_k^k + F I_k^k`, the closed form valid for unital algebras.
    pub fn ideal_ik_closed(&mut self, k: usize) -> GradedSubspace {
        if k == 0 {
            return self.alg.full_space();
        }
        let ikk = self.ideal_ikl(k, k);
        let f = self.alg.full_space();
        let prod = self.alg.span_product(&f, &ikk);
        ikk.sum(&prod).expect("same ambient")
    }

    pub fn in_ik(&mut self, k: usize, v: &crate::scalar::SparseVec) -> bool {
        self.ideal_ik(k).contains(v)
    }
}

/// The Lie subalgebra generated by `s`: the smallest `L` with `L = s + [s, L]`.
pub fn lie_generated(alg: &Algebra, s: &GradedSubspace) -> GradedSubspace {
    let gens = s.basis();
    let mut l = s.clone();
    let mut frontier = gens.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for g in &gens {
                let b = alg.bracket(g, f);
                if !b.is_empty() {
                    next.extend(l.insert_new(&b));
                }
            }
        }
        frontier = next;
    }
    l
}
