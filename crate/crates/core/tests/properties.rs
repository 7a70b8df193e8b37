use std::sync::{Arc, LazyLock};

use ncurrents::commfilt::FiltrationCache;
use ncurrents::current::{close_from, generators, lie_closure, TensorContext};
use ncurrents::groups::{
    cartan_criterion_sl2, conjugation_expansion, diagonal_battery, expansion_deltas,
    solve_m_from_h, stabilization_conditions, DiagonalUnit, DifferenceTable, Root,
};
use ncurrents::pairs::{pair_from_spec, CompatiblePair};
use ncurrents::scalar::{add, q, scaled, sub, unit_vec, SparseVec};
use ncurrents::{Algebra, GradedSubspace};
use proptest::prelude::*;

static FREE: LazyLock<Arc<Algebra>> = LazyLock::new(|| Algebra::free(2, 4, true).unwrap());
static FREE_NU: LazyLock<Arc<Algebra>> = LazyLock::new(|| Algebra::free(3, 3, false).unwrap());
static MAT: LazyLock<Arc<Algebra>> = LazyLock::new(|| Algebra::matrices(3));

fn backends() -> [&'static Arc<Algebra>; 3] {
    [&FREE, &FREE_NU, &MAT]
}

/// Random element as a short list of (basis index, coefficient).
fn element(dim: usize) -> impl Strategy<Value = SparseVec> {
    prop::collection::vec((0..dim, -3i64..=3), 0..5).prop_map(|terms| {
        let mut v = SparseVec::new();
        for (i, c) in terms {
            v = add(&v, &scaled(&unit_vec(i), &q(c)));
        }
        v
    })
}

fn triple(b: usize) -> impl Strategy<Value = (usize, SparseVec, SparseVec, SparseVec)> {
    let dim = backends()[b].dim();
    (Just(b), element(dim), element(dim), element(dim))
}

fn any_triple() -> impl Strategy<Value = (usize, SparseVec, SparseVec, SparseVec)> {
    (0..3usize).prop_flat_map(triple)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn associativity((b, x, y, z) in any_triple()) {
        let f = backends()[b];
        prop_assert_eq!(f.mul(&f.mul(&x, &y), &z), f.mul(&x, &f.mul(&y, &z)));
    }

    #[test]
    fn jacobi_leibniz((b, x, y, z) in any_triple()) {
        let f = backends()[b];
        let s = add(
            &add(&f.bracket(&f.mul(&x, &y), &z), &f.bracket(&f.mul(&y, &z), &x)),
            &f.bracket(&f.mul(&z, &x), &y),
        );
        prop_assert!(s.is_empty());
    }

    #[test]
    fn jacobi((b, x, y, z) in any_triple()) {
        let f = backends()[b];
        let s = add(
            &add(&f.bracket(&x, &f.bracket(&y, &z)), &f.bracket(&y, &f.bracket(&z, &x))),
            &f.bracket(&z, &f.bracket(&x, &y)),
        );
        prop_assert!(s.is_empty());
    }

    #[test]
    fn inverse_of_units(c in 1i64..5, x in element(31)) {
        let f = &*FREE;
        let one = f.unit().unwrap();
        // drop the constant term, then add a nonzero one
        let mut x = x;
        x.remove(&0);
        let a = add(&scaled(&one, &q(c)), &x);
        let inv = f.inverse(&a).unwrap();
        prop_assert_eq!(f.mul(&a, &inv), one.clone());
        prop_assert_eq!(f.mul(&inv, &a), one);
    }

    #[test]
    fn grading_is_additive(i in 0usize..31, j in 0usize..31) {
        let f = &*FREE;
        let g = f.grading();
        let p = f.mul(&unit_vec(i), &unit_vec(j));
        let d = g.degree_of(i) + g.degree_of(j);
        prop_assert!(p.keys().all(|&k| g.degree_of(k) == d));
    }

    #[test]
    fn span_ignores_order(vs in prop::collection::vec(element(31), 0..6), seed in any::<u64>()) {
        let g = FREE.grading();
        let a = GradedSubspace::span(g, &vs);
        let mut ws = vs.clone();
        let k = if ws.is_empty() { 0 } else { (seed as usize) % ws.len() };
        ws.rotate_left(k);
        ws.reverse();
        let b = GradedSubspace::span(g, &ws);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(GradedSubspace::span(g, &a.basis()), a.clone());
        prop_assert!(a.equals(&b).unwrap() && b.equals(&a).unwrap());
    }

    #[test]
    fn sum_and_intersection_dimensions(u in prop::collection::vec(element(31), 0..6), v in prop::collection::vec(element(31), 0..6)) {
        let g = FREE.grading();
        let a = GradedSubspace::span(g, &u);
        let b = GradedSubspace::span(g, &v);
        let s = a.sum(&b).unwrap();
        let i = a.intersect(&b).unwrap();
        prop_assert_eq!(s.dim() + i.dim(), a.dim() + b.dim());
        prop_assert!(i.is_subset(&a).unwrap() && a.is_subset(&s).unwrap());
    }

    #[test]
    fn bracket_span_is_symmetric(u in prop::collection::vec(element(31), 0..4), v in prop::collection::vec(element(31), 0..4)) {
        let f = &*FREE;
        let a = GradedSubspace::span(f.grading(), &u);
        let b = GradedSubspace::span(f.grading(), &v);
        prop_assert_eq!(f.span_bracket(&a, &b), f.span_bracket(&b, &a));
    }

    #[test]
    fn ideals_are_two_sided(k in 1usize..3, x in element(31), u in element(31)) {
        let f = &*FREE;
        let mut c = FiltrationCache::new(f);
        let basis = c.ideal_ik(k).basis();
        if let Some(b) = basis.first() {
            let v = f.mul(&f.mul(&x, b), &u);
            prop_assert!(c.in_ik(k, &v));
        }
    }

    #[test]
    fn difference_table_recursion(ms in prop::collection::vec(element(31), 1..5)) {
        let f = &*FREE;
        let one = f.unit().unwrap();
        let ms: Vec<SparseVec> = ms.iter().map(|m| {
            let mut m = m.clone();
            m.remove(&0);
            add(&one, &m)
        }).collect();
        let t = DifferenceTable::new(f, &ms).unwrap();
        prop_assert!(t.recursion_holds());
    }

    #[test]
    fn solved_sequences_have_prescribed_differences(c in 1i64..4, h1 in 0usize..8, h2 in 0usize..8) {
        let f = &*FREE;
        let mut filt = FiltrationCache::new(f);
        let i1 = filt.ideal_ik(1).basis();
        let i2 = filt.ideal_ik(2).basis();
        let hs = vec![i1[h1 % i1.len()].clone(), i2[h2 % i2.len()].clone()];
        let m1 = add(&scaled(&f.unit().unwrap(), &q(c)), &f.parse("x").unwrap());
        let ms = solve_m_from_h(&mut filt, &m1, &hs).unwrap();
        let t = DifferenceTable::new(f, &ms).unwrap();
        prop_assert_eq!(t.m(1, 2), &hs[0]);
        prop_assert_eq!(t.m(1, 3), &hs[1]);
        prop_assert!(t.all_in_filtration(&mut filt));
    }

    #[test]
    fn conjugation_expansion_matches_deltas(seed in any::<u64>(), n in 3usize..5, w in 1usize..7) {
        let f = &*FREE;
        let mut filt = FiltrationCache::new(f);
        let t = TensorContext::new(f, n);
        let u = unit_vec(w);
        for inst in diagonal_battery(&mut filt, n, seed, 1).unwrap() {
            for root in [Root::Raising, Root::Lowering] {
                let cs = conjugation_expansion(&inst.diag, &u, &t, root).unwrap();
                let ds = expansion_deltas(&inst.diag, &u, root).unwrap();
                for (k, (c, d)) in cs.iter().zip(&ds).enumerate() {
                    let signed = if k % 2 == 0 { d.clone() } else { scaled(d, &q(-1)) };
                    prop_assert_eq!(c, &signed);
                }
            }
        }
    }
}

static SL2_3: LazyLock<(CompatiblePair, TensorContext)> = LazyLock::new(|| {
    let p = pair_from_spec("sl2irrep:3").unwrap();
    let t = TensorContext::new(&FREE, 3);
    (p, t)
});

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn closure_ignores_generator_order(seed in any::<u64>()) {
        let f = Algebra::free(2, 2, false).unwrap();
        let p = pair_from_spec("so:3").unwrap();
        let t = TensorContext::new(&f, 3);
        let mut gens = generators(&p, &t);
        let k = (seed as usize) % gens.len();
        gens.rotate_left(k);
        if seed % 2 == 0 {
            gens.reverse();
        }
        let l = close_from(&t, &gens);
        prop_assert_eq!(&l, &lie_closure(&p, &t, None));
        prop_assert!(t.is_bracket_closed(&l));
    }

    #[test]
    fn criterion_implies_stabilization(seed in any::<u64>()) {
        let (p, _) = &*SL2_3;
        let f = &*FREE;
        let mut filt = FiltrationCache::new(f);
        for inst in diagonal_battery(&mut filt, p.size(), seed, 1).unwrap() {
            if !cartan_criterion_sl2(&inst.diag, &mut filt).unwrap().holds {
                continue;
            }
            // words of degree at most D minus the shift of the diagonal
            let budget = f.degree_cap().saturating_sub(inst.diag.shift_degree());
            for w in f.words_up_to(budget) {
                let (up, down) = stabilization_conditions(&inst.diag, &unit_vec(w), &mut filt).unwrap();
                prop_assert!(up.iter().chain(&down).all(|&b| b), "word {}", f.basis_label(w));
            }
        }
    }
}

#[test]
fn jacobi_leibniz_hundred_seeded_triples() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for f in backends() {
        let dim = f.dim();
        let mut rand_elem = || {
            let mut v = SparseVec::new();
            for _ in 0..4 {
                v = add(
                    &v,
                    &scaled(&unit_vec(rng.gen_range(0..dim)), &q(rng.gen_range(-3..=3))),
                );
            }
            v
        };
        for _ in 0..100 {
            let (a, b, c) = (rand_elem(), rand_elem(), rand_elem());
            let s = add(
                &add(
                    &f.bracket(&f.mul(&a, &b), &c),
                    &f.bracket(&f.mul(&b, &c), &a),
                ),
                &f.bracket(&f.mul(&c, &a), &b),
            );
            assert!(s.is_empty());
        }
    }
}

#[test]
fn powers_of_g() {
    for spec in [
        "sl:2",
        "sl:3",
        "gl:2",
        "so:3",
        "so:4",
        "sp:4",
        "sl2irrep:2",
        "sl2irrep:3",
        "sl2irrep:4",
        "jordan:3",
    ] {
        let p = pair_from_spec(spec).unwrap();
        let env = p.enveloping();
        let mut prev = 0;
        for k in 1..=p.stabilization_point() {
            let gk = p.g_power(k);
            assert!(gk.is_subset(&env).unwrap(), "{spec}");
            assert!(p.cumulative_power(k).dim() >= prev, "{spec}");
            prev = p.cumulative_power(k).dim();
        }
        let mat = p.matrix_algebra();
        // [g^{k+1}, g^m] in [g, g^{k+m}]
        for k in 1..=3 {
            for m in 1..=3 {
                let lhs = mat.span_bracket(&p.g_power(k + 1), &p.g_power(m));
                assert!(
                    lhs.is_subset(&p.bracket_power(k + m)).unwrap(),
                    "{spec} k={k} m={m}"
                );
            }
        }
        // powers x^k together with g^{k-1} ∩ g^k fill g^k
        for k in 2..=4 {
            let inter = p.g_power(k - 1).intersect(&p.g_power(k)).unwrap();
            assert_eq!(
                p.tilde_power(k).sum(&inter).unwrap(),
                p.g_power(k),
                "{spec} k={k}"
            );
        }
    }
}

#[test]
fn semisimple_powers_split_off_the_center() {
    for spec in [
        "sl:2",
        "sl:3",
        "so:3",
        "so:4",
        "sp:4",
        "sl2irrep:3",
        "sl2irrep:4",
    ] {
        let p = pair_from_spec(spec).unwrap();
        assert!(p.is_semisimple(), "{spec}");
        for k in 2..=4 {
            let plus = p.bracket_power(k);
            let z = p.center_part(k);
            assert!(plus.intersect(&z).unwrap().is_zero(), "{spec} k={k}");
            assert_eq!(plus.sum(&z).unwrap(), p.g_power(k), "{spec} k={k}");
        }
    }
}

#[test]
fn diagonal_round_trip() {
    let f = &*FREE;
    let d = DiagonalUnit::parse(f, "2 ; 1+x ; 3-x*y").unwrap();
    let t = TensorContext::new(f, 3);
    let g = d.to_tensor(&t);
    let x = t.pure(&f.parse("y").unwrap(), &unit_vec(1));
    let c = t.conjugate(&g, &x).unwrap();
    let back = t.conjugate(&t.inverse(&g).unwrap(), &c).unwrap();
    assert_eq!(back, x);
    assert!(sub(&back, &x).is_empty());
}
