//! Connected components of a pair and the minimality test.

use serde::Serialize;

use super::{isomorphic, HypergraphPair};

/// One connected block of the support, restricted and relabelled.
#[derive(Clone, Debug, PartialEq)]
pub struct Component {
    pub pair: HypergraphPair,
    /// Original vertex labels per axis, increasing.
    pub vertices: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Factorization {
    pub components: Vec<Component>,
    /// `(axis, vertex)` pairs incident to no support cell.
    pub isolated: Vec<(usize, usize)>,
}

impl Factorization {
    /// Exactly one component and no isolated vertices.
    pub fn is_non_factorizable(&self) -> bool {
        self.components.len() == 1 && self.isolated.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MinimalityFailure {
    EmptySupport,
    IsolatedVertex { axis: usize, vertex: usize },
    /// Every component class occurs an even number of times.
    Doubled { class_sizes: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Minimality {
    pub minimal: bool,
    pub failure: Option<MinimalityFailure>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the smaller index as root so roots order components.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

pub fn factorize(h: &HypergraphPair) -> Factorization {
    let dims = h.dims();
    let offsets: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let total = h.total_dims();
    let mut uf = UnionFind::new(total);
    let mut touched = vec![false; total];
    let support = h.support();
    for o in &support {
        let first = offsets[0] + o.0[0];
        for (axis, &c) in o.0.iter().enumerate() {
            let id = offsets[axis] + c;
            touched[id] = true;
            uf.union(first, id);
        }
    }

    let mut isolated = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for (axis, &d) in dims.iter().enumerate() {
        for v in 0..d {
            let id = offsets[axis] + v;
            if !touched[id] {
                isolated.push((axis, v));
            } else {
                let r = uf.find(id);
                if !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    // Roots are the smallest flattened vertex of each component.
    roots.sort_unstable();

    let components = roots
        .iter()
        .map(|&root| {
            let vertices: Vec<Vec<usize>> = dims
                .iter()
                .enumerate()
                .map(|(axis, &d)| {
                    (0..d)
                        .filter(|&v| {
                            let id = offsets[axis] + v;
                            touched[id] && uf.find(id) == root
                        })
                        .collect()
                })
                .collect();
            let pair = h
                .restrict(&vertices)
                .expect("component vertex sets are in range and nonempty");
            Component { pair, vertices }
        })
        .collect();
    Factorization {
        components,
        isolated,
    }
}

/// Groups components into isomorphism classes; returns class sizes in order
/// of first appearance.
pub(crate) fn component_classes(f: &Factorization) -> Vec<Vec<usize>> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, c) in f.components.iter().enumerate() {
        match classes
            .iter_mut()
            .find(|cl| isomorphic(&f.components[cl[0]].pair, &c.pair))
        {
            Some(cl) => cl.push(i),
            None => classes.push(vec![i]),
        }
    }
    classes
}

pub fn is_minimal(h: &HypergraphPair) -> Minimality {
    let fail = |failure| Minimality {
        minimal: false,
        failure: Some(failure),
    };
    if h.is_zero() {
        return fail(MinimalityFailure::EmptySupport);
    }
    let f = factorize(h);
    if let Some(&(axis, vertex)) = f.isolated.first() {
        return fail(MinimalityFailure::IsolatedVertex { axis, vertex });
    }
    let classes = component_classes(&f);
    if classes.iter().all(|c| c.len() % 2 == 0) {
        return fail(MinimalityFailure::Doubled {
            class_sizes: classes.iter().map(Vec::len).collect(),
        });
    }
    Minimality {
        minimal: true,
        failure: None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::Omega;
    use super::*;

    fn lp(p: f64) -> HypergraphPair {
        HypergraphPair::from_entries(vec![1], [(Omega::new([0]), p / 2.0)], [(Omega::new([0]), p / 2.0)])
            .unwrap()
    }

    fn u2() -> HypergraphPair {
        HypergraphPair::from_fn(vec![2, 2], |w| {
            let a = ((w[0] + w[1]) % 2) as f64;
            (a, 1.0 - a)
        })
        .unwrap()
    }

    #[test]
    fn u2_is_one_component() {
        let f = factorize(&u2());
        assert_eq!(f.components.len(), 1);
        assert!(f.is_non_factorizable());
        assert!(is_minimal(&u2()).minimal);
    }

    #[test]
    fn union_splits() {
        let h = lp(2.0).disjoint_union(&lp(3.0)).unwrap();
        let f = factorize(&h);
        assert_eq!(f.components.len(), 2);
        assert_eq!(f.components[0].pair, lp(2.0));
        assert_eq!(f.components[1].pair, lp(3.0));
        assert!(is_minimal(&h).minimal);

        let uu = u2().disjoint_union(&u2()).unwrap();
        let f = factorize(&uu);
        assert_eq!(f.components.len(), 2);
        assert!(f.components.iter().all(|c| isomorphic(&c.pair, &u2())));
    }

    #[test]
    fn zero_pair_is_all_isolated() {
        let z = HypergraphPair::zero(vec![2]).unwrap();
        let f = factorize(&z);
        assert!(f.components.is_empty());
        assert_eq!(f.isolated, vec![(0, 0), (0, 1)]);
        assert_eq!(is_minimal(&z).failure, Some(MinimalityFailure::EmptySupport));
    }

    #[test]
    fn doubled_and_isolated_are_not_minimal() {
        let d = lp(2.0).disjoint_union(&lp(2.0)).unwrap();
        assert!(matches!(
            is_minimal(&d).failure,
            Some(MinimalityFailure::Doubled { .. })
        ));
        let iso = HypergraphPair::from_entries(vec![2], [(Omega::new([0]), 1.0)], [(Omega::new([0]), 1.0)])
            .unwrap();
        assert_eq!(
            is_minimal(&iso).failure,
            Some(MinimalityFailure::IsolatedVertex { axis: 0, vertex: 1 })
        );
    }
}
