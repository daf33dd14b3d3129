use std::collections::BTreeSet;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{EngineConfig, Problem};
use crate::error::{Error, Result};

/// Variables of a factor and its dense values over them.
type Table = (Vec<usize>, std::sync::Arc<Vec<Complex64>>);

/// One elimination: multiply the `inputs` factors, sum out `var` against the
/// measure, and store the result as a new factor over `scope`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlanStep {
    pub var: usize,
    pub inputs: Vec<usize>,
    pub scope: Vec<usize>,
    /// `n^(|scope| + 1)` multiply-adds.
    pub cost: f64,
}

/// Greedy min-fill elimination order for a fixed support pattern.
///
/// Factor ids `0..factors.len()` are the support cells; step `i` produces
/// factor `factors.len() + i`. Variables are numbered axis by axis: vertex `v`
/// of axis `a` is `sum(dims[..a]) + v`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContractionPlan {
    pub dims: Vec<usize>,
    pub n: usize,
    pub factors: Vec<Vec<usize>>,
    pub order: Vec<usize>,
    pub steps: Vec<PlanStep>,
    /// Largest single-step term count.
    pub cost: f64,
    pub total_terms: f64,
    /// Largest intermediate table, in bytes.
    pub peak_bytes: f64,
    /// Term count of plain enumeration, for comparison.
    pub brute_terms: f64,
}

impl ContractionPlan {
    pub(crate) fn for_problem(p: &Problem, cfg: &EngineConfig) -> Result<Self> {
        let scopes = p.factors.iter().map(|f| f.vars.clone()).collect();
        Self::build(p.dims.clone(), p.n, scopes, cfg)
    }

    pub(crate) fn build(
        dims: Vec<usize>,
        n: usize,
        factors: Vec<Vec<usize>>,
        cfg: &EngineConfig,
    ) -> Result<Self> {
        let nvars: usize = dims.iter().sum();
        let nf = n as f64;
        let mut active: Vec<Option<Vec<usize>>> = factors.iter().cloned().map(Some).collect();
        let mut remaining: BTreeSet<usize> = (0..nvars).collect();
        let mut order = Vec::with_capacity(nvars);
        let mut steps = Vec::with_capacity(nvars);
        let (mut cost, mut total, mut peak) = (0.0f64, 0.0f64, 0.0f64);

        while !remaining.is_empty() {
            let var = pick_min_fill(&active, &remaining);
            let inputs: Vec<usize> = active
                .iter()
                .enumerate()
                .filter(|(_, s)| s.as_ref().is_some_and(|s| s.contains(&var)))
                .map(|(i, _)| i)
                .collect();
            let scope: Vec<usize> = inputs
                .iter()
                .flat_map(|&i| active[i].as_ref().unwrap().iter().copied())
                .filter(|&v| v != var)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            for &i in &inputs {
                active[i] = None;
            }
            let step_cost = nf.powi(scope.len() as i32 + 1);
            cost = cost.max(step_cost);
            total += step_cost;
            peak = peak.max(nf.powi(scope.len() as i32) * 16.0);
            active.push(Some(scope.clone()));
            remaining.remove(&var);
            order.push(var);
            steps.push(PlanStep {
                var,
                inputs,
                scope,
                cost: step_cost,
            });
        }

        let plan = ContractionPlan {
            dims,
            n,
            factors,
            order,
            steps,
            cost,
            total_terms: total,
            peak_bytes: peak,
            brute_terms: nf.powi(nvars as i32),
        };
        if plan.peak_bytes > cfg.byte_budget {
            return Err(Error::BudgetExceeded {
                what: "planned intermediate bytes",
                needed: plan.peak_bytes,
                budget: cfg.byte_budget,
                best_cost: plan.cost,
            });
        }
        if plan.total_terms > cfg.term_budget {
            return Err(Error::BudgetExceeded {
                what: "planned term evaluations",
                needed: plan.total_terms,
                budget: cfg.term_budget,
                best_cost: plan.cost,
            });
        }
        Ok(plan)
    }

    /// Runs the plan on a problem with the same support pattern.
    pub(crate) fn execute(&self, p: &Problem, cfg: &EngineConfig) -> Complex64 {
        debug_assert_eq!(p.factors.len(), self.factors.len());
        let n = self.n;
        let mut tables: Vec<Option<Table>> = p
            .factors
            .iter()
            .map(|f| Some((f.vars.clone(), f.table.clone())))
            .collect();
        let total_mass: f64 = p.weights.iter().sum();

        for step in &self.steps {
            let inputs: Vec<Table> = step
                .inputs
                .iter()
                .map(|&i| tables[i].take().expect("each factor is consumed once"))
                .collect();
            let out = if inputs.is_empty() {
                vec![Complex64::new(total_mass, 0.0)]
            } else {
                eliminate(&inputs, step, n, &p.weights, cfg)
            };
            tables.push(Some((step.scope.clone(), std::sync::Arc::new(out))));
        }

        let mut result = Complex64::new(1.0, 0.0);
        for (scope, t) in tables.into_iter().flatten() {
            debug_assert!(scope.is_empty());
            result *= t[0];
        }
        result
    }
}

fn eliminate(
    inputs: &[Table],
    step: &PlanStep,
    n: usize,
    weights: &[f64],
    cfg: &EngineConfig,
) -> Vec<Complex64> {
    let scope = &step.scope;
    // For each input: stride of every scope position (0 when absent) and of `var`.
    let layouts: Vec<(Vec<usize>, usize)> = inputs
        .iter()
        .map(|(vars, _)| {
            let strides = row_major_strides(vars.len(), n);
            let pos = |v: usize| vars.iter().position(|&x| x == v);
            let scope_strides = scope.iter().map(|&v| pos(v).map_or(0, |i| strides[i])).collect();
            let var_stride = strides[pos(step.var).expect("input contains the eliminated variable")];
            (scope_strides, var_stride)
        })
        .collect();
    let len = n.pow(scope.len() as u32);
    let entry = |o: usize| -> Complex64 {
        let mut bases = vec![0usize; inputs.len()];
        let mut rem = o;
        for pos in (0..scope.len()).rev() {
            let digit = rem % n;
            rem /= n;
            for (b, (ss, _)) in bases.iter_mut().zip(&layouts) {
                *b += digit * ss[pos];
            }
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, &w) in weights.iter().enumerate() {
            let mut term = Complex64::new(w, 0.0);
            for ((_, table), (&b, (_, vs))) in inputs.iter().zip(bases.iter().zip(&layouts)) {
                term *= table[b + x * vs];
            }
            acc += term;
        }
        acc
    };
    if len >= 4096 {
        cfg.run(|| (0..len).into_par_iter().map(entry).collect())
    } else {
        (0..len).map(entry).collect()
    }
}

fn row_major_strides(len: usize, n: usize) -> Vec<usize> {
    let mut s = vec![1usize; len];
    for i in (0..len.saturating_sub(1)).rev() {
        s[i] = s[i + 1] * n;
    }
    s
}

/// Variable whose elimination adds the fewest new edges to the interaction
/// graph; ties go to the smaller neighbourhood, then the smaller id.
fn pick_min_fill(active: &[Option<Vec<usize>>], remaining: &BTreeSet<usize>) -> usize {
    let scopes: Vec<&Vec<usize>> = active.iter().flatten().collect();
    let adjacent = |a: usize, b: usize| scopes.iter().any(|s| s.contains(&a) && s.contains(&b));
    let mut best: Option<(usize, usize, usize)> = None;
    for &v in remaining {
        let nbrs: BTreeSet<usize> = scopes
            .iter()
            .filter(|s| s.contains(&v))
            .flat_map(|s| s.iter().copied())
            .filter(|&u| u != v)
            .collect();
        let nb: Vec<usize> = nbrs.into_iter().collect();
        let mut fill = 0;
        for i in 0..nb.len() {
            for j in i + 1..nb.len() {
                if !adjacent(nb[i], nb[j]) {
                    fill += 1;
                }
            }
        }
        let key = (fill, nb.len(), v);
        if best.is_none_or(|b| key < b) {
            best = Some(key);
        }
    }
    best.expect("remaining is nonempty").2
}
