use num_complex::Complex64;
use rayon::prelude::*;

use super::{EngineConfig, Problem};
use crate::error::{Error, Result};

/// Compensated complex accumulator (Neumaier's variant of Kahan summation).
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct KahanSum {
    sum: Complex64,
    comp: Complex64,
}

fn neumaier(sum: &mut f64, comp: &mut f64, x: f64) {
    let t = *sum + x;
    if sum.abs() >= x.abs() {
        *comp += (*sum - t) + x;
    } else {
        *comp += (x - t) + *sum;
    }
    *sum = t;
}

impl KahanSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.sum.re, &mut self.comp.re, z.re);
        neumaier(&mut self.sum.im, &mut self.comp.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Enumerates all `n^nvars` assignments in lexicographic order.
///
/// Work is split by the value of the first variable; chunk sums are combined
/// in index order, so the result does not depend on the thread count.
pub(crate) fn integrate(p: &Problem, cfg: &EngineConfig) -> Result<Complex64> {
    let terms = (p.n as f64).powi(p.nvars as i32);
    if terms > cfg.term_budget {
        return Err(Error::BudgetExceeded {
            what: "brute-force term evaluations",
            needed: terms,
            budget: cfg.term_budget,
            best_cost: terms,
        });
    }
    let n = p.n;
    let k = p.dims.len();
    let mut strides = vec![1usize; k];
    for i in (0..k.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * n;
    }
    let chunk = |x0: usize| -> Complex64 {
        let mut x = vec![0usize; p.nvars];
        x[0] = x0;
        let rest = vec![n; p.nvars - 1];
        let mut acc = KahanSum::default();
        loop {
            let mut term = Complex64::new(x.iter().map(|&xi| p.weights[xi]).product::<f64>(), 0.0);
            for fac in &p.factors {
                let idx: usize = fac.vars.iter().zip(&strides).map(|(&v, s)| x[v] * s).sum();
                term *= fac.table[idx];
            }
            acc.add(term);
            if !crate::util::advance(&mut x[1..], &rest) {
                break;
            }
        }
        acc.value()
    };
    let chunks: Vec<Complex64> = cfg.run(|| (0..n).into_par_iter().map(chunk).collect());
    let mut total = KahanSum::default();
    for c in chunks {
        total.add(c);
    }
    Ok(total.value())
}
