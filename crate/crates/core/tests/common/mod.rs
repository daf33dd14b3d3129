//! Helpers shared by the integration tests.
#![allow(dead_code)]

use hypernorm::engine::{DiscreteMeasureSpace, GridFunction};
use hypernorm::{Complex64, HypergraphPair, Omega};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300)
}

pub fn close_c(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-300)
}

/// Pair from `(coords, alpha, beta)` triples.
pub fn pair(dims: &[usize], cells: &[(&[usize], f64, f64)]) -> HypergraphPair {
    HypergraphPair::from_entries(
        dims.to_vec(),
        cells.iter().map(|(w, a, _)| (Omega::new(w.to_vec()), *a)),
        cells.iter().map(|(w, _, b)| (Omega::new(w.to_vec()), *b)),
    )
    .unwrap()
}

/// Random nonnegative pair; roughly half the cells carry weight.
/// `integer` restricts weights to {1, 2}.
pub fn random_pair(r: &mut impl Rng, dims: &[usize], integer: bool) -> HypergraphPair {
    loop {
        let h = HypergraphPair::from_fn(dims.to_vec(), |_| {
            let mut w = || {
                if r.random_bool(0.5) {
                    0.0
                } else if integer {
                    r.random_range(1..=2) as f64
                } else {
                    r.random_range(0.25..1.5)
                }
            };
            (w(), w())
        })
        .unwrap();
        if !h.is_zero() {
            return h;
        }
    }
}

pub fn random_space(r: &mut impl Rng, n: usize) -> DiscreteMeasureSpace {
    DiscreteMeasureSpace::new((0..n).map(|_| r.random_range(0.2..1.0)).collect()).unwrap()
}

pub fn random_function(r: &mut impl Rng, space: DiscreteMeasureSpace, k: usize) -> GridFunction {
    GridFunction::from_fn(space, k, |_| c(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))).unwrap()
}

pub fn random_nonnegative(r: &mut impl Rng, space: DiscreteMeasureSpace, k: usize) -> GridFunction {
    GridFunction::from_fn(space, k, |_| c(r.random_range(0.0..1.0), 0.0)).unwrap()
}

/// Random per-axis permutations.
pub fn random_relabelling(r: &mut impl Rng, dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter()
        .map(|&d| {
            let mut p: Vec<usize> = (0..d).collect();
            p.shuffle(r);
            p
        })
        .collect()
}

/// Random complex function on a randomly weighted `n`-point space.
pub fn random_fn(r: &mut impl Rng, n: usize, k: usize) -> GridFunction {
    let space = random_space(r, n);
    random_function(r, space, k)
}

pub fn random_nonnegative_fn(r: &mut impl Rng, n: usize, k: usize) -> GridFunction {
    let space = random_space(r, n);
    random_nonnegative(r, space, k)
}
