//! Hypergraph pairs `H = (alpha, beta)` and their algebra.
//!
//! A pair lives on a product grid `V_1 x ... x V_k` with `|V_i| = dims[i]`.
//! Both weight maps are stored sparsely with sorted keys; cells whose weight
//! is zero are never stored, so structural equality of two pairs is plain
//! map equality.

mod factor;
mod iso;
mod json;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::util::for_each_index;

pub use factor::{factorize, is_minimal, Component, Factorization, Minimality, MinimalityFailure};
pub use iso::{find_isomorphism, isomorphic, Isomorphism};
pub use json::{EntryJson, PairJson, PairLimits};

/// Weights with magnitude below this are dropped after arithmetic.
pub const PRUNE_EPS: f64 = 1e-12;

/// A cell `(w_1, ..., w_k)` of the vertex grid.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Omega(pub Vec<usize>);

impl Omega {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        Omega(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn in_range(&self, dims: &[usize]) -> bool {
        self.0.len() == dims.len() && self.0.iter().zip(dims).all(|(c, d)| c < d)
    }
}

impl From<Vec<usize>> for Omega {
    fn from(v: Vec<usize>) -> Self {
        Omega(v)
    }
}

impl From<&[usize]> for Omega {
    fn from(v: &[usize]) -> Self {
        Omega(v.to_vec())
    }
}

impl fmt::Display for Omega {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Support entry view: a cell with both of its weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry<'a> {
    pub omega: &'a Omega,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HypergraphPair {
    dims: Vec<usize>,
    alpha: BTreeMap<Omega, f64>,
    beta: BTreeMap<Omega, f64>,
}

impl HypergraphPair {
    /// The zero pair over the given grid.
    pub fn zero(dims: impl Into<Vec<usize>>) -> Result<Self> {
        let dims = dims.into();
        if dims.is_empty() {
            return Err(Error::InvalidArgument("a pair needs at least one axis".into()));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidArgument(format!(
                "every axis needs at least one vertex, got dims {dims:?}"
            )));
        }
        Ok(HypergraphPair {
            dims,
            alpha: BTreeMap::new(),
            beta: BTreeMap::new(),
        })
    }

    /// Builds a pair from explicit entry lists. Repeated cells accumulate.
    pub fn from_entries(
        dims: impl Into<Vec<usize>>,
        alpha: impl IntoIterator<Item = (Omega, f64)>,
        beta: impl IntoIterator<Item = (Omega, f64)>,
    ) -> Result<Self> {
        let mut h = Self::zero(dims)?;
        for (omega, v) in alpha {
            h.check_omega(&omega)?;
            check_finite(&omega, v)?;
            *h.alpha.entry(omega).or_insert(0.0) += v;
        }
        for (omega, v) in beta {
            h.check_omega(&omega)?;
            check_finite(&omega, v)?;
            *h.beta.entry(omega).or_insert(0.0) += v;
        }
        h.prune();
        Ok(h)
    }

    /// Builds a pair by evaluating `weights` on every cell of the grid.
    pub fn from_fn(
        dims: impl Into<Vec<usize>>,
        mut weights: impl FnMut(&[usize]) -> (f64, f64),
    ) -> Result<Self> {
        let mut h = Self::zero(dims)?;
        let dims = h.dims.clone();
        let mut bad = None;
        for_each_index(&dims, |idx| {
            let (a, b) = weights(idx);
            if !(a.is_finite() && b.is_finite()) {
                bad.get_or_insert_with(|| idx.to_vec());
            }
            if a != 0.0 {
                h.alpha.insert(Omega::from(idx), a);
            }
            if b != 0.0 {
                h.beta.insert(Omega::from(idx), b);
            }
        });
        if let Some(omega) = bad {
            return Err(Error::InvalidArgument(format!("non-finite weight at {omega:?}")));
        }
        h.prune();
        Ok(h)
    }

    /// `1_psi = (delta_psi, 0)`.
    pub fn delta(dims: impl Into<Vec<usize>>, psi: Omega) -> Result<Self> {
        Self::from_entries(dims, [(psi, 1.0)], [])
    }

    pub fn k(&self) -> usize {
        self.dims.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dims(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn alpha(&self, omega: &Omega) -> f64 {
        self.alpha.get(omega).copied().unwrap_or(0.0)
    }

    pub fn beta(&self, omega: &Omega) -> f64 {
        self.beta.get(omega).copied().unwrap_or(0.0)
    }

    pub fn alpha_map(&self) -> &BTreeMap<Omega, f64> {
        &self.alpha
    }

    pub fn beta_map(&self) -> &BTreeMap<Omega, f64> {
        &self.beta
    }

    /// `supp(alpha) ∪ supp(beta)` in lexicographic order.
    pub fn support(&self) -> BTreeSet<&Omega> {
        self.alpha.keys().chain(self.beta.keys()).collect()
    }

    /// Every support cell with both weights, lexicographic.
    pub fn entries(&self) -> Vec<Entry<'_>> {
        self.support()
            .into_iter()
            .map(|omega| Entry {
                omega,
                alpha: self.alpha(omega),
                beta: self.beta(omega),
            })
            .collect()
    }

    pub fn support_len(&self) -> usize {
        self.support().len()
    }

    pub fn is_zero(&self) -> bool {
        self.alpha.is_empty() && self.beta.is_empty()
    }

    /// `|H| = sum |alpha| + |beta|`.
    pub fn size(&self) -> f64 {
        self.alpha.values().map(|v| v.abs()).sum::<f64>()
            + self.beta.values().map(|v| v.abs()).sum::<f64>()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.alpha.values().chain(self.beta.values()).all(|&v| v >= 0.0)
    }

    /// First negative weight, if any. Used by the norm-evaluating operations.
    pub fn first_negative(&self) -> Option<(Omega, f64)> {
        self.alpha
            .iter()
            .chain(self.beta.iter())
            .find(|(_, &v)| v < 0.0)
            .map(|(o, &v)| (o.clone(), v))
    }

    pub fn require_nonnegative(&self) -> Result<()> {
        match self.first_negative() {
            Some((omega, value)) => Err(Error::NegativeWeight {
                omega: omega.0,
                value,
            }),
            None => Ok(()),
        }
    }

    /// True when every stored weight is an integer (within 1e-9).
    pub fn is_integer_valued(&self) -> bool {
        self.alpha
            .values()
            .chain(self.beta.values())
            .all(|v| (v - v.round()).abs() <= 1e-9)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_grid(other, "add")?;
        let mut out = self.clone();
        for (o, v) in &other.alpha {
            *out.alpha.entry(o.clone()).or_insert(0.0) += v;
        }
        for (o, v) in &other.beta {
            *out.beta.entry(o.clone()).or_insert(0.0) += v;
        }
        out.prune();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// `conj(H) = (beta, alpha)`.
    pub fn conjugate(&self) -> Self {
        HypergraphPair {
            dims: self.dims.clone(),
            alpha: self.beta.clone(),
            beta: self.alpha.clone(),
        }
    }

    pub fn scale(&self, r: f64) -> Self {
        let mut out = self.clone();
        out.alpha.values_mut().for_each(|v| *v *= r);
        out.beta.values_mut().for_each(|v| *v *= r);
        out.prune();
        out
    }

    /// `H1 ⊔ H2`: `self` occupies the low block of each axis, `other` the high block.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch(format!(
                "disjoint union needs equal k, got {} and {}",
                self.k(),
                other.k()
            )));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let shift = |o: &Omega| -> Omega {
            Omega(o.0.iter().zip(&self.dims).map(|(c, d)| c + d).collect())
        };
        let mut out = Self::zero(dims)?;
        out.alpha = self.alpha.clone();
        out.beta = self.beta.clone();
        out.alpha.extend(other.alpha.iter().map(|(o, v)| (shift(o), *v)));
        out.beta.extend(other.beta.iter().map(|(o, v)| (shift(o), *v)));
        Ok(out)
    }

    /// `H1 ⊗ H2 = (a1⊗a2 + b1⊗b2, a1⊗b2 + b1⊗a2)` with vertex `(v, w)` flattened
    /// to `v * dims2[i] + w`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.k() != other.k() {
            return Err(Error::DimensionMismatch(format!(
                "tensor product needs equal k, got {} and {}",
                self.k(),
                other.k()
            )));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a * b).collect();
        let mut out = Self::zero(dims)?;
        let flat = |o1: &Omega, o2: &Omega| -> Omega {
            Omega(
                o1.0.iter()
                    .zip(&o2.0)
                    .zip(&other.dims)
                    .map(|((v, w), d2)| v * d2 + w)
                    .collect(),
            )
        };
        let put = |map: &mut BTreeMap<Omega, f64>,
                       m1: &BTreeMap<Omega, f64>,
                       m2: &BTreeMap<Omega, f64>| {
            for (o1, v1) in m1 {
                for (o2, v2) in m2 {
                    *map.entry(flat(o1, o2)).or_insert(0.0) += v1 * v2;
                }
            }
        };
        put(&mut out.alpha, &self.alpha, &other.alpha);
        put(&mut out.alpha, &self.beta, &other.beta);
        put(&mut out.beta, &self.alpha, &other.beta);
        put(&mut out.beta, &self.beta, &other.alpha);
        out.prune();
        Ok(out)
    }

    /// Projection `H_S`: fiber sums onto the axes in `axes` (kept in the given order).
    pub fn project(&self, axes: &[usize]) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidArgument("projection needs a nonempty axis set".into()));
        }
        let mut seen = BTreeSet::new();
        for &a in axes {
            if a >= self.k() {
                return Err(Error::InvalidArgument(format!(
                    "axis {a} out of range for k = {}",
                    self.k()
                )));
            }
            if !seen.insert(a) {
                return Err(Error::InvalidArgument(format!("axis {a} repeated in projection")));
            }
        }
        let dims: Vec<usize> = axes.iter().map(|&a| self.dims[a]).collect();
        let mut out = Self::zero(dims)?;
        let pi = |o: &Omega| Omega(axes.iter().map(|&a| o.0[a]).collect());
        for (o, v) in &self.alpha {
            *out.alpha.entry(pi(o)).or_insert(0.0) += v;
        }
        for (o, v) in &self.beta {
            *out.beta.entry(pi(o)).or_insert(0.0) += v;
        }
        out.prune();
        Ok(out)
    }

    /// Places this pair's axis `j` at position `axes[j]` of a `k`-axis pair;
    /// every other axis gets a single vertex.
    pub fn lift(&self, k: usize, axes: &[usize]) -> Result<Self> {
        if axes.len() != self.k() || axes.iter().any(|&a| a >= k) {
            return Err(Error::InvalidArgument(format!(
                "cannot place {} axes at {axes:?} among {k}",
                self.k()
            )));
        }
        if axes.iter().collect::<BTreeSet<_>>().len() != axes.len() {
            return Err(Error::InvalidArgument(format!("axis positions {axes:?} repeat")));
        }
        let mut dims = vec![1; k];
        for (j, &a) in axes.iter().enumerate() {
            dims[a] = self.dims[j];
        }
        let place = |o: &Omega| {
            let mut c = vec![0; k];
            for (j, &a) in axes.iter().enumerate() {
                c[a] = o.0[j];
            }
            Omega(c)
        };
        Ok(HypergraphPair {
            dims,
            alpha: self.alpha.iter().map(|(o, v)| (place(o), *v)).collect(),
            beta: self.beta.iter().map(|(o, v)| (place(o), *v)).collect(),
        })
    }

    /// Restriction to the sub-box `W_1 x ... x W_k` (vertices relabelled in
    /// increasing order).
    pub fn restrict(&self, boxes: &[Vec<usize>]) -> Result<Self> {
        if boxes.len() != self.k() {
            return Err(Error::DimensionMismatch("restriction needs one vertex set per axis".into()));
        }
        let mut relabel: Vec<BTreeMap<usize, usize>> = Vec::with_capacity(self.k());
        for (axis, w) in boxes.iter().enumerate() {
            let mut m = BTreeMap::new();
            let mut sorted = w.clone();
            sorted.sort_unstable();
            sorted.dedup();
            for (new, &old) in sorted.iter().enumerate() {
                if old >= self.dims[axis] {
                    return Err(Error::OutOfRange {
                        omega: vec![old],
                        dims: self.dims.clone(),
                    });
                }
                m.insert(old, new);
            }
            relabel.push(m);
        }
        let dims: Vec<usize> = relabel.iter().map(|m| m.len()).collect();
        let mut out = Self::zero(dims)?;
        let map = |o: &Omega| -> Option<Omega> {
            o.0.iter()
                .zip(&relabel)
                .map(|(c, m)| m.get(c).copied())
                .collect::<Option<Vec<_>>>()
                .map(Omega)
        };
        for (o, v) in &self.alpha {
            if let Some(n) = map(o) {
                out.alpha.insert(n, *v);
            }
        }
        for (o, v) in &self.beta {
            if let Some(n) = map(o) {
                out.beta.insert(n, *v);
            }
        }
        Ok(out)
    }

    /// Relabels vertices: `maps[i][v]` is the new label of vertex `v` on axis `i`.
    pub fn relabel(&self, maps: &[Vec<usize>]) -> Result<Self> {
        if maps.len() != self.k() || maps.iter().zip(&self.dims).any(|(m, &d)| m.len() != d) {
            return Err(Error::DimensionMismatch("relabelling needs one bijection per axis".into()));
        }
        for (m, &d) in maps.iter().zip(&self.dims) {
            let set: BTreeSet<_> = m.iter().copied().collect();
            if set.len() != d || set.iter().any(|&x| x >= d) {
                return Err(Error::InvalidArgument("relabelling is not a bijection".into()));
            }
        }
        let apply = |o: &Omega| Omega(o.0.iter().zip(maps).map(|(c, m)| m[*c]).collect());
        Ok(HypergraphPair {
            dims: self.dims.clone(),
            alpha: self.alpha.iter().map(|(o, v)| (apply(o), *v)).collect(),
            beta: self.beta.iter().map(|(o, v)| (apply(o), *v)).collect(),
        })
    }

    /// `sum_{w_i = v} alpha(w)` and the same for beta, per axis and vertex.
    pub fn fiber_sums(&self) -> Vec<Vec<(f64, f64)>> {
        let mut sums: Vec<Vec<(f64, f64)>> = self.dims.iter().map(|&d| vec![(0.0, 0.0); d]).collect();
        for (o, v) in &self.alpha {
            for (axis, &c) in o.0.iter().enumerate() {
                sums[axis][c].0 += v;
            }
        }
        for (o, v) in &self.beta {
            for (axis, &c) in o.0.iter().enumerate() {
                sums[axis][c].1 += v;
            }
        }
        sums
    }

    pub fn to_json(&self) -> String {
        PairJson::from(self).to_string_pretty()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        PairJson::parse(text)?.into_pair(&PairLimits::default())
    }

    fn check_omega(&self, omega: &Omega) -> Result<()> {
        if omega.in_range(&self.dims) {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                omega: omega.0.clone(),
                dims: self.dims.clone(),
            })
        }
    }

    fn same_grid(&self, other: &Self, op: &str) -> Result<()> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "{op} needs identical grids, got {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.alpha.retain(|_, v| v.abs() >= PRUNE_EPS);
        self.beta.retain(|_, v| v.abs() >= PRUNE_EPS);
    }
}

fn check_finite(omega: &Omega, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("non-finite weight {v} at {omega}")))
    }
}
