//! Isomorphism search between pairs on the same grid shape.

use std::cmp::Ordering;

use super::{HypergraphPair, Omega};

const TOL: f64 = 1e-9;

/// Per-axis bijections `maps[i][v] = h_i(v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isomorphism {
    pub maps: Vec<Vec<usize>>,
}

impl Isomorphism {
    pub fn identity(dims: &[usize]) -> Self {
        Isomorphism {
            maps: dims.iter().map(|&d| (0..d).collect()).collect(),
        }
    }

    pub fn apply(&self, omega: &Omega) -> Omega {
        Omega(omega.0.iter().zip(&self.maps).map(|(c, m)| m[*c]).collect())
    }

    pub fn inverse(&self) -> Self {
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (v, &w) in m.iter().enumerate() {
                    inv[w] = v;
                }
                inv
            })
            .collect();
        Isomorphism { maps }
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.iter().map(|&v| b[v]).collect())
            .collect();
        Isomorphism { maps }
    }

    /// Checks `alpha(w) = alpha'(h(w))` and `beta(w) = beta'(h(w))` on both supports.
    pub fn verify(&self, from: &HypergraphPair, to: &HypergraphPair) -> bool {
        if from.dims() != to.dims() {
            return false;
        }
        let inv = self.inverse();
        let fwd_ok = from.support().into_iter().all(|o| {
            let img = self.apply(o);
            close(from.alpha(o), to.alpha(&img)) && close(from.beta(o), to.beta(&img))
        });
        let back_ok = to.support().into_iter().all(|o| {
            let pre = inv.apply(o);
            close(to.alpha(o), from.alpha(&pre)) && close(to.beta(o), from.beta(&pre))
        });
        fwd_ok && back_ok
    }
}

pub fn isomorphic(h1: &HypergraphPair, h2: &HypergraphPair) -> bool {
    find_isomorphism(h1, h2).is_some()
}

/// Backtracking search over per-axis bijections, pruned by per-vertex degree
/// profiles and by checking every fully assigned support cell in both
/// directions as soon as it becomes determined.
pub fn find_isomorphism(h1: &HypergraphPair, h2: &HypergraphPair) -> Option<Isomorphism> {
    if h1.dims() != h2.dims() {
        return None;
    }
    let s1 = weight_multiset(h1);
    let s2 = weight_multiset(h2);
    if s1.len() != s2.len() || !s1.iter().zip(&s2).all(|(a, b)| pair_close(*a, *b)) {
        return None;
    }
    let dims = h1.dims().to_vec();
    let k = dims.len();
    let inc1 = incidence(h1);
    let inc2 = incidence(h2);
    let prof1 = profiles(h1, &inc1);
    let prof2 = profiles(h2, &inc2);

    let mut candidates: Vec<Vec<Vec<usize>>> = Vec::with_capacity(k);
    for axis in 0..k {
        let mut per_axis = Vec::with_capacity(dims[axis]);
        for p1 in &prof1[axis] {
            let c: Vec<usize> = (0..dims[axis])
                .filter(|&w| profile_eq(p1, &prof2[axis][w]))
                .collect();
            if c.is_empty() {
                return None;
            }
            per_axis.push(c);
        }
        candidates.push(per_axis);
    }

    // Round-robin over axes so that support cells become fully assigned early.
    let mut order = Vec::new();
    let max_d = dims.iter().copied().max().unwrap_or(0);
    for v in 0..max_d {
        for (axis, &d) in dims.iter().enumerate() {
            if v < d {
                order.push((axis, v));
            }
        }
    }

    let mut search = Search {
        h1,
        h2,
        inc1: &inc1,
        inc2: &inc2,
        candidates: &candidates,
        order: &order,
        fwd: dims.iter().map(|&d| vec![None; d]).collect(),
        inv: dims.iter().map(|&d| vec![None; d]).collect(),
    };
    if search.run(0) {
        let maps = search
            .fwd
            .into_iter()
            .map(|m| m.into_iter().map(|x| x.expect("complete assignment")).collect())
            .collect();
        let iso = Isomorphism { maps };
        debug_assert!(iso.verify(h1, h2));
        Some(iso)
    } else {
        None
    }
}

struct Search<'a> {
    h1: &'a HypergraphPair,
    h2: &'a HypergraphPair,
    inc1: &'a [Vec<Vec<Omega>>],
    inc2: &'a [Vec<Vec<Omega>>],
    candidates: &'a [Vec<Vec<usize>>],
    order: &'a [(usize, usize)],
    fwd: Vec<Vec<Option<usize>>>,
    inv: Vec<Vec<Option<usize>>>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        let Some(&(axis, v)) = self.order.get(depth) else {
            return true;
        };
        for &w in &self.candidates[axis][v] {
            if self.inv[axis][w].is_some() {
                continue;
            }
            self.fwd[axis][v] = Some(w);
            self.inv[axis][w] = Some(v);
            if self.consistent(axis, v, w) && self.run(depth + 1) {
                return true;
            }
            self.fwd[axis][v] = None;
            self.inv[axis][w] = None;
        }
        false
    }

    fn consistent(&self, axis: usize, v: usize, w: usize) -> bool {
        for o in &self.inc1[axis][v] {
            if let Some(img) = map_all(o, &self.fwd) {
                if !(close(self.h1.alpha(o), self.h2.alpha(&img))
                    && close(self.h1.beta(o), self.h2.beta(&img)))
                {
                    return false;
                }
            }
        }
        for o in &self.inc2[axis][w] {
            if let Some(pre) = map_all(o, &self.inv) {
                if !(close(self.h2.alpha(o), self.h1.alpha(&pre))
                    && close(self.h2.beta(o), self.h1.beta(&pre)))
                {
                    return false;
                }
            }
        }
        true
    }
}

fn map_all(o: &Omega, maps: &[Vec<Option<usize>>]) -> Option<Omega> {
    o.0.iter()
        .zip(maps)
        .map(|(c, m)| m[*c])
        .collect::<Option<Vec<_>>>()
        .map(Omega)
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

fn pair_close(a: (f64, f64), b: (f64, f64)) -> bool {
    close(a.0, b.0) && close(a.1, b.1)
}

fn cmp_pair(a: &(f64, f64), b: &(f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

fn weight_multiset(h: &HypergraphPair) -> Vec<(f64, f64)> {
    let mut v: Vec<(f64, f64)> = h.entries().iter().map(|e| (e.alpha, e.beta)).collect();
    v.sort_by(cmp_pair);
    v
}

fn incidence(h: &HypergraphPair) -> Vec<Vec<Vec<Omega>>> {
    let mut inc: Vec<Vec<Vec<Omega>>> = h.dims().iter().map(|&d| vec![Vec::new(); d]).collect();
    for o in h.support() {
        for (axis, &c) in o.0.iter().enumerate() {
            inc[axis][c].push(o.clone());
        }
    }
    inc
}

/// Sorted multiset of `(alpha, beta)` weights of the support cells through each vertex.
fn profiles(h: &HypergraphPair, inc: &[Vec<Vec<Omega>>]) -> Vec<Vec<Vec<(f64, f64)>>> {
    inc.iter()
        .map(|axis| {
            axis.iter()
                .map(|cells| {
                    let mut p: Vec<(f64, f64)> =
                        cells.iter().map(|o| (h.alpha(o), h.beta(o))).collect();
                    p.sort_by(cmp_pair);
                    p
                })
                .collect()
        })
        .collect()
}

fn profile_eq(a: &[(f64, f64)], b: &[(f64, f64)]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| pair_close(*x, *y))
}
