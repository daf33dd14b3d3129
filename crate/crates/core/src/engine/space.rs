use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Finite point set `{0, .., n-1}` with strictly positive weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteMeasureSpace {
    weights: Vec<f64>,
}

impl TryFrom<Vec<f64>> for DiscreteMeasureSpace {
    type Error = Error;

    fn try_from(weights: Vec<f64>) -> Result<Self> {
        Self::new(weights)
    }
}

impl From<DiscreteMeasureSpace> for Vec<f64> {
    fn from(s: DiscreteMeasureSpace) -> Self {
        s.weights
    }
}

impl DiscreteMeasureSpace {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidArgument("a measure space needs at least one point".into()));
        }
        if let Some((i, w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(Error::InvalidArgument(format!(
                "point {i} has weight {w}; weights must be finite and > 0"
            )));
        }
        Ok(DiscreteMeasureSpace { weights })
    }

    /// Every point has weight 1.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n])
    }

    /// Every point has weight `1/n`.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= 1e-12
    }

    /// Product space with point `(x, y)` flattened to `x * other.n + y`.
    pub fn product(&self, other: &Self) -> Self {
        let weights = self
            .weights
            .iter()
            .flat_map(|a| other.weights.iter().map(move |b| a * b))
            .collect();
        DiscreteMeasureSpace { weights }
    }
}

/// Dense complex function on `Omega^k`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    space: DiscreteMeasureSpace,
    k: usize,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(space: DiscreteMeasureSpace, k: usize, values: Vec<Complex64>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("a grid function needs k >= 1".into()));
        }
        let len = checked_pow(space.n(), k)?;
        if values.len() != len {
            return Err(Error::DimensionMismatch(format!(
                "expected n^k = {len} values, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument(format!("value {i} is not finite")));
        }
        Ok(GridFunction { space, k, values })
    }

    pub fn from_fn(
        space: DiscreteMeasureSpace,
        k: usize,
        mut f: impl FnMut(&[usize]) -> Complex64,
    ) -> Result<Self> {
        let n = space.n();
        let len = checked_pow(n, k)?;
        let mut idx = vec![0usize; k];
        let mut values = Vec::with_capacity(len);
        for _ in 0..len {
            values.push(f(&idx));
            crate::util::advance(&mut idx, &vec![n; k]);
        }
        Self::new(space, k, values)
    }

    pub fn constant(space: DiscreteMeasureSpace, k: usize, c: Complex64) -> Result<Self> {
        let len = checked_pow(space.n(), k)?;
        Self::new(space, k, vec![c; len])
    }

    pub fn space(&self) -> &DiscreteMeasureSpace {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Direct access for in-place search steps; callers keep values finite.
    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn get(&self, idx: &[usize]) -> Complex64 {
        let n = self.n();
        let flat = idx.iter().fold(0, |acc, &x| acc * n + x);
        self.values[flat]
    }

    /// Applies `g` pointwise, keeping the space.
    pub fn map(&self, g: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        Self::new(self.space.clone(), self.k, self.values.iter().map(|z| g(*z)).collect())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|z| z * c).expect("scaling finite values by a finite constant")
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj()).expect("conjugation preserves finiteness")
    }

    pub fn abs(&self) -> Self {
        self.map(|z| Complex64::new(z.norm(), 0.0))
            .expect("modulus preserves finiteness")
    }

    pub fn zip_with(&self, other: &Self, g: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.k != other.k || self.space != other.space {
            return Err(Error::DimensionMismatch(
                "pointwise operations need the same space and k".into(),
            ));
        }
        Self::new(
            self.space.clone(),
            self.k,
            self.values.iter().zip(&other.values).map(|(a, b)| g(*a, *b)).collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&FunctionJson::from(self)).expect("function JSON serialization")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: FunctionJson = serde_json::from_str(text)?;
        j.into_function()
    }
}

/// Exchange format `{"k", "n", "values": [[re, im], ..], "weights"}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionJson {
    pub k: usize,
    pub n: usize,
    pub values: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl FunctionJson {
    pub fn into_function(self) -> Result<GridFunction> {
        if self.weights.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "n = {} but {} weights given",
                self.n,
                self.weights.len()
            )));
        }
        let space = DiscreteMeasureSpace::new(self.weights)?;
        let values = self.values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
        GridFunction::new(space, self.k, values)
    }
}

impl From<&GridFunction> for FunctionJson {
    fn from(f: &GridFunction) -> Self {
        FunctionJson {
            k: f.k,
            n: f.n(),
            values: f.values.iter().map(|z| [z.re, z.im]).collect(),
            weights: f.space.weights.clone(),
        }
    }
}

/// `(f ⊗ g)[(x_1,y_1),..,(x_k,y_k)] = f(x) g(y)` on the product space.
pub fn tensor_function(f: &GridFunction, g: &GridFunction) -> Result<GridFunction> {
    if f.k != g.k {
        return Err(Error::DimensionMismatch(format!(
            "tensor of functions needs equal k, got {} and {}",
            f.k, g.k
        )));
    }
    let space = f.space.product(&g.space);
    let (nf, ng) = (f.n(), g.n());
    let k = f.k;
    let mut xs = vec![0usize; k];
    let mut ys = vec![0usize; k];
    GridFunction::from_fn(space, k, |idx| {
        for (i, &p) in idx.iter().enumerate() {
            xs[i] = p / ng;
            ys[i] = p % ng;
        }
        debug_assert!(xs.iter().all(|&x| x < nf));
        f.get(&xs) * g.get(&ys)
    })
}

pub(crate) fn checked_pow(n: usize, k: usize) -> Result<usize> {
    u32::try_from(k)
        .ok()
        .and_then(|k| n.checked_pow(k))
        .filter(|&len| len <= (1 << 28))
        .ok_or_else(|| Error::InvalidArgument(format!("grid n^k = {n}^{k} is too large to store")))
}
