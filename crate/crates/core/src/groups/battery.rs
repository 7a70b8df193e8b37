//! Seeded families of diagonal units for comparing the Cartan criteria with direct tests.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::calculus::{diagonal_from_ratios, solve_m_from_h};
use super::DiagonalUnit;
use crate::coeffalg::Algebra;
use crate::commfilt::FiltrationCache;
use crate::error::{Error, Result};
use crate::scalar::{add, add_scaled, qr, scaled, unit_vec, SparseVec, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagKind {
    Constant,
    Geometric,
    BracketPerturbed,
    WordPerturbed,
    Solved,
}

impl DiagKind {
    pub const ALL: [DiagKind; 5] = [
        DiagKind::Constant,
        DiagKind::Geometric,
        DiagKind::BracketPerturbed,
        DiagKind::WordPerturbed,
        DiagKind::Solved,
    ];
}

#[derive(Clone, Debug)]
pub struct BatteryInstance {
    pub kind: DiagKind,
    pub diag: DiagonalUnit,
}

fn small_q(rng: &mut ChaCha8Rng) -> Q {
    let num = *[1i64, 2, 3, -1, -2].choose(rng).unwrap();
    let den = *[1i64, 1, 2, 3].choose(rng).unwrap();
    qr(num, den)
}

/// A random combination of a few basis words of degree 1..=2.
fn low_degree_element(alg: &Algebra, rng: &mut ChaCha8Rng) -> SparseVec {
    let words = alg.words_up_to(2);
    let start = usize::from(alg.is_unital());
    let mut v = SparseVec::new();
    for _ in 0..2 {
        let w = words[rng.gen_range(start..words.len())];
        add_scaled(&mut v, &unit_vec(w), &small_q(rng));
    }
    v
}

fn random_unit(alg: &Algebra, rng: &mut ChaCha8Rng, one: &SparseVec) -> SparseVec {
    let c = small_q(rng);
    add(&scaled(one, &c), &low_degree_element(alg, rng))
}

fn geometric(one: &SparseVec, n: usize, rng: &mut ChaCha8Rng) -> Vec<SparseVec> {
    let q = small_q(rng);
    let mut c = Q::from_integer(1.into());
    (0..n)
        .map(|_| {
            let v = scaled(one, &c);
            c *= &q;
            v
        })
        .collect()
}

/// A random element of `I_k` built from a few basis vectors of degree at most `k + 2`.
fn random_in_ik(filt: &mut FiltrationCache, k: usize, rng: &mut ChaCha8Rng) -> SparseVec {
    let alg = filt.algebra().clone();
    let g = alg.grading().clone();
    let basis: Vec<SparseVec> = filt
        .ideal_ik(k)
        .basis()
        .into_iter()
        .filter(|b| b.keys().all(|&i| g.degree_of(i) <= k + 2))
        .collect();
    let mut v = SparseVec::new();
    if basis.is_empty() {
        return v;
    }
    for _ in 0..2 {
        add_scaled(&mut v, basis.choose(rng).unwrap(), &small_q(rng));
    }
    v
}

/// `per_kind` diagonals of size `n` for each kind, reproducible from `seed`. Needs a unital
/// free algebra on at least two letters.
pub fn diagonal_battery(
    filt: &mut FiltrationCache,
    n: usize,
    seed: u64,
    per_kind: usize,
) -> Result<Vec<BatteryInstance>> {
    let alg: Arc<Algebra> = filt.algebra().clone();
    let one = alg
        .unit()
        .ok_or_else(|| Error::NonUnit("battery needs a unital algebra".into()))?;
    let letters = alg.generators();
    if alg.as_free().is_none() || letters.len() < 2 {
        return Err(Error::Unsupported(
            "battery needs a free algebra on two or more letters".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for kind in DiagKind::ALL {
        for _ in 0..per_kind {
            let fs = match kind {
                DiagKind::Constant => vec![random_unit(&alg, &mut rng, &one); n],
                DiagKind::Geometric => geometric(&one, n, &mut rng),
                DiagKind::BracketPerturbed => {
                    let mut fs = geometric(&one, n, &mut rng);
                    let (a, b) = (
                        rng.gen_range(0..letters.len()),
                        rng.gen_range(0..letters.len()),
                    );
                    let a2 = if a == b { (a + 1) % letters.len() } else { a };
                    let br = alg.bracket(&letters[a2], &letters[b]);
                    let i = rng.gen_range(0..n);
                    let factor = add(&one, &scaled(&br, &small_q(&mut rng)));
                    fs[i] = alg.mul(&fs[i], &factor);
                    fs
                }
                DiagKind::WordPerturbed => {
                    let mut fs = geometric(&one, n, &mut rng);
                    let i = rng.gen_range(0..n);
                    let factor = add(&one, &low_degree_element(&alg, &mut rng));
                    fs[i] = alg.mul(&factor, &fs[i]);
                    fs
                }
                DiagKind::Solved => {
                    let m1 = random_unit(&alg, &mut rng, &one);
                    let hs: Vec<SparseVec> = (1..n.saturating_sub(1))
                        .map(|k| random_in_ik(filt, k, &mut rng))
                        .collect();
                    let ms = solve_m_from_h(filt, &m1, &hs)?;
                    let f1 = random_unit(&alg, &mut rng, &one);
                    let ms = &ms[..n.saturating_sub(1).min(ms.len())];
                    diagonal_from_ratios(&alg, &f1, ms)?.entries().to_vec()
                }
            };
            // a zero constant term would not be a unit; retry with a shifted constant
            let fs = fs
                .into_iter()
                .map(|f| {
                    if alg.constant_term(&f) == Q::from_integer(0.into()) {
                        add(&f, &one)
                    } else {
                        f
                    }
                })
                .collect();
            out.push(BatteryInstance {
                kind,
                diag: DiagonalUnit::new(&alg, fs)?,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn battery_is_reproducible() {
        let f = Algebra::free(2, 3, true).unwrap();
        let mut filt = FiltrationCache::new(&f);
        let a = diagonal_battery(&mut filt, 3, 11, 2).unwrap();
        let b = diagonal_battery(&mut filt, 3, 11, 2).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.diag.entries(), y.diag.entries());
            assert_eq!(x.diag.len(), 3);
        }
    }

    #[test]
    fn solved_diagonals_meet_sl2_criterion() {
        let f = Algebra::free(2, 4, true).unwrap();
        let mut filt = FiltrationCache::new(&f);
        for inst in diagonal_battery(&mut filt, 4, 3, 3).unwrap() {
            if inst.kind == DiagKind::Solved {
                assert!(
                    crate::groups::cartan_criterion_sl2(&inst.diag, &mut filt)
                        .unwrap()
                        .holds
                );
            }
        }
    }
}
