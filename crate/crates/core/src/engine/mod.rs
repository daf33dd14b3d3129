//! Evaluation of `integral f^H` over finite product measure spaces.
//!
//! The integral runs over one copy of `Omega` per vertex of the pair, i.e.
//! over `sum(dims)` variables. Each support cell `w` contributes the factor
//! `f(x_{1,w_1}, .., x_{k,w_k})^alpha(w) * conj(..)^beta(w)`, which touches
//! exactly `k` variables. [`integrate_brute`] enumerates every assignment;
//! [`integrate`] eliminates variables one at a time along a greedy min-fill
//! order (see [`ContractionPlan`]).
//!
//! Both paths accept several `(pair, function)` parts sharing one grid, which
//! is how mixed integrals such as `integral f^{H - 1_psi} g^{1_psi}` are
//! evaluated.

mod brute;
mod kernel;
mod plan;
mod space;

use std::collections::HashMap;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pair::HypergraphPair;

pub use kernel::{power_kernel, power_kernel_signed, principal_arg};
pub use plan::{ContractionPlan, PlanStep};
pub(crate) use space::checked_pow;
pub use space::{tensor_function, DiscreteMeasureSpace, FunctionJson, GridFunction};

/// Default brute-force budget in term evaluations.
pub const DEFAULT_TERM_BUDGET: f64 = 1e8;
/// Default planned-path budget for the largest intermediate, in bytes.
pub const DEFAULT_BYTE_BUDGET: f64 = 256.0 * 1024.0 * 1024.0;

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub term_budget: f64,
    pub byte_budget: f64,
    /// Worker threads; 0 uses the global rayon pool.
    pub threads: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            term_budget: DEFAULT_TERM_BUDGET,
            byte_budget: DEFAULT_BYTE_BUDGET,
            threads: 0,
        }
    }
}

impl EngineConfig {
    /// Defaults overridden by `HYPERNORM_BUDGET=terms[,bytes]` when set.
    pub fn from_env() -> Self {
        let mut cfg = Self::default();
        if let Ok(text) = std::env::var("HYPERNORM_BUDGET") {
            let _ = cfg.apply_budget_string(&text);
        }
        cfg
    }

    pub fn apply_budget_string(&mut self, text: &str) -> Result<()> {
        let mut it = text.split(',').map(str::trim);
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite() && *v > 0.0)
                .ok_or_else(|| Error::InvalidArgument(format!("bad budget value {s:?}")))
        };
        if let Some(t) = it.next().filter(|s| !s.is_empty()) {
            self.term_budget = parse(t)?;
        }
        if let Some(b) = it.next().filter(|s| !s.is_empty()) {
            self.byte_budget = parse(b)?;
        }
        Ok(())
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub(crate) fn run<R: Send>(&self, job: impl FnOnce() -> R + Send) -> R {
        if self.threads == 0 {
            return job();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.threads).build() {
            Ok(pool) => pool.install(job),
            Err(_) => job(),
        }
    }
}

/// One `(pair, function)` factor of a mixed integral.
#[derive(Clone, Copy, Debug)]
pub struct Part<'a> {
    pub pair: &'a HypergraphPair,
    pub f: &'a GridFunction,
}

impl<'a> Part<'a> {
    pub fn new(pair: &'a HypergraphPair, f: &'a GridFunction) -> Self {
        Part { pair, f }
    }
}

/// A factor touching `vars` (one per axis, increasing) with a dense table over `n^k`.
#[derive(Clone, Debug)]
pub(crate) struct Factor {
    pub vars: Vec<usize>,
    pub table: std::sync::Arc<Vec<Complex64>>,
}

/// The flattened integration problem shared by both evaluation paths.
#[derive(Clone, Debug)]
pub(crate) struct Problem {
    pub n: usize,
    pub weights: Vec<f64>,
    pub dims: Vec<usize>,
    pub nvars: usize,
    pub factors: Vec<Factor>,
}

impl Problem {
    pub fn build(parts: &[Part<'_>]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("an integral needs at least one part".into()))?;
        let dims = first.pair.dims().to_vec();
        let k = dims.len();
        let space = first.f.space();
        for p in parts {
            p.pair.require_nonnegative()?;
            if p.pair.dims() != dims.as_slice() {
                return Err(Error::DimensionMismatch(format!(
                    "all parts must share dims, got {:?} and {:?}",
                    dims,
                    p.pair.dims()
                )));
            }
            if p.f.k() != k {
                return Err(Error::DimensionMismatch(format!(
                    "function has k = {} but the pair has k = {k}",
                    p.f.k()
                )));
            }
            if p.f.space() != space {
                return Err(Error::DimensionMismatch(
                    "all functions of a mixed integral must live on one measure space".into(),
                ));
            }
        }
        let offsets: Vec<usize> = dims
            .iter()
            .scan(0, |acc, &d| {
                let o = *acc;
                *acc += d;
                Some(o)
            })
            .collect();
        let nvars = dims.iter().sum();
        let mut cache: HashMap<(usize, u64, u64), std::sync::Arc<Vec<Complex64>>> = HashMap::new();
        let mut factors = Vec::new();
        for (pi, p) in parts.iter().enumerate() {
            for e in p.pair.entries() {
                let key = (pi, e.alpha.to_bits(), e.beta.to_bits());
                let table = cache
                    .entry(key)
                    .or_insert_with(|| {
                        std::sync::Arc::new(
                            p.f.values()
                                .iter()
                                .map(|z| power_kernel(*z, e.alpha, e.beta))
                                .collect(),
                        )
                    })
                    .clone();
                let vars = e.omega.0.iter().zip(&offsets).map(|(c, o)| c + o).collect();
                factors.push(Factor { vars, table });
            }
        }
        Ok(Problem {
            n: space.n(),
            weights: space.weights().to_vec(),
            dims,
            nvars,
            factors,
        })
    }
}

/// `integral f^H` along the planned path, budgets from the environment.
pub fn integrate(h: &HypergraphPair, f: &GridFunction) -> Result<Complex64> {
    integrate_with(h, f, &EngineConfig::from_env())
}

pub fn integrate_with(h: &HypergraphPair, f: &GridFunction, cfg: &EngineConfig) -> Result<Complex64> {
    integrate_parts(&[Part::new(h, f)], cfg)
}

/// Reference brute-force evaluation.
pub fn integrate_brute(h: &HypergraphPair, f: &GridFunction) -> Result<Complex64> {
    integrate_brute_with(h, f, &EngineConfig::from_env())
}

pub fn integrate_brute_with(h: &HypergraphPair, f: &GridFunction, cfg: &EngineConfig) -> Result<Complex64> {
    integrate_parts_brute(&[Part::new(h, f)], cfg)
}

/// Mixed integral `integral prod_j f_j^{H_j}` along the planned path.
pub fn integrate_parts(parts: &[Part<'_>], cfg: &EngineConfig) -> Result<Complex64> {
    let problem = Problem::build(parts)?;
    let plan = ContractionPlan::for_problem(&problem, cfg)?;
    Ok(plan.execute(&problem, cfg))
}

pub fn integrate_parts_brute(parts: &[Part<'_>], cfg: &EngineConfig) -> Result<Complex64> {
    let problem = Problem::build(parts)?;
    brute::integrate(&problem, cfg)
}

/// Plans the contraction of `H` over a space with `n` points.
pub fn plan(h: &HypergraphPair, n: usize, cfg: &EngineConfig) -> Result<ContractionPlan> {
    h.require_nonnegative()?;
    let offsets: Vec<usize> = h
        .dims()
        .iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect();
    let scopes = h
        .support()
        .into_iter()
        .map(|o| o.0.iter().zip(&offsets).map(|(c, off)| c + off).collect())
        .collect();
    ContractionPlan::build(h.dims().to_vec(), n, scopes, cfg)
}

/// `integral |f|^{alpha+beta}` over the same parts: the natural scale for
/// relative comparisons of mixed integrals that may cancel.
pub fn absolute_integral(parts: &[Part<'_>], cfg: &EngineConfig) -> Result<f64> {
    let abs: Vec<GridFunction> = parts.iter().map(|p| p.f.abs()).collect();
    let abs_parts: Vec<Part<'_>> = parts
        .iter()
        .zip(&abs)
        .map(|(p, f)| Part::new(p.pair, f))
        .collect();
    Ok(integrate_parts(&abs_parts, cfg)?.re)
}

/// A pair with its contraction plan for a fixed space size, for repeated
/// evaluation on many functions.
#[derive(Clone, Debug)]
pub struct PreparedPair {
    pair: HypergraphPair,
    plan: ContractionPlan,
    size: f64,
    cfg: EngineConfig,
}

impl PreparedPair {
    pub fn new(pair: &HypergraphPair, n: usize, cfg: &EngineConfig) -> Result<Self> {
        let plan = plan(pair, n, cfg)?;
        Ok(PreparedPair {
            pair: pair.clone(),
            plan,
            size: pair.size(),
            cfg: cfg.clone(),
        })
    }

    pub fn pair(&self) -> &HypergraphPair {
        &self.pair
    }

    pub fn plan(&self) -> &ContractionPlan {
        &self.plan
    }

    pub fn integrate(&self, f: &GridFunction) -> Result<Complex64> {
        if f.n() != self.plan.n {
            return Err(Error::DimensionMismatch(format!(
                "plan is for n = {}, function has n = {}",
                self.plan.n,
                f.n()
            )));
        }
        let problem = Problem::build(&[Part::new(&self.pair, f)])?;
        Ok(self.plan.execute(&problem, &self.cfg))
    }

    pub fn norm(&self, f: &GridFunction) -> Result<NormValue> {
        if self.size == 0.0 {
            return Err(Error::ZeroSize);
        }
        Ok(NormValue::from_integral(self.integrate(f)?, self.size))
    }

    pub fn norm_value(&self, f: &GridFunction) -> Result<f64> {
        Ok(self.norm(f)?.value)
    }
}

/// `||f||_H` with the raw integral and its phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormValue {
    /// `|integral f^H|^(1/|H|)`.
    pub value: f64,
    pub integral: Complex64,
    pub size: f64,
    /// Principal argument of the integral.
    pub phase: f64,
    /// `|Im| > 1e-9 |integral|`.
    pub imaginary: bool,
    /// Real part negative beyond `1e-9 |integral|`.
    pub negative: bool,
}

impl NormValue {
    pub fn from_integral(integral: Complex64, size: f64) -> Self {
        let m = integral.norm();
        NormValue {
            value: if m == 0.0 { 0.0 } else { m.powf(1.0 / size) },
            integral,
            size,
            phase: principal_arg(integral),
            imaginary: integral.im.abs() > 1e-9 * m,
            negative: integral.re < -1e-9 * m,
        }
    }

    /// True when the integral is a nonnegative real, as it must be for a genuine norm.
    pub fn is_clean(&self) -> bool {
        !self.imaginary && !self.negative
    }
}

pub fn norm(h: &HypergraphPair, f: &GridFunction) -> Result<NormValue> {
    norm_with(h, f, &EngineConfig::from_env())
}

pub fn norm_with(h: &HypergraphPair, f: &GridFunction, cfg: &EngineConfig) -> Result<NormValue> {
    let size = h.size();
    h.require_nonnegative()?;
    if size == 0.0 {
        return Err(Error::ZeroSize);
    }
    let integral = integrate_with(h, f, cfg)?;
    Ok(NormValue::from_integral(integral, size))
}

/// Norm value only; convenience for numeric code that has already validated `H`.
pub fn norm_value(h: &HypergraphPair, f: &GridFunction, cfg: &EngineConfig) -> Result<f64> {
    Ok(norm_with(h, f, cfg)?.value)
}
