//! Search for `f, g` with `||f+g||_H > ||f||_H + ||g||_H`.

use rayon::prelude::*;
use serde::Serialize;

use super::{hill_climb, sample_function, Sampling, CLIMB_CANDIDATES};
use crate::engine::{integrate_brute_with, DiscreteMeasureSpace, EngineConfig, FunctionJson, GridFunction, PreparedPair};
use crate::error::{Error, Result};
use crate::pair::HypergraphPair;
use crate::rng::{stream_id, trial_rng};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub restarts: usize,
    pub seed: u64,
    pub omega_size: usize,
    pub amplitude: f64,
    pub tolerance: f64,
    /// Best restarts refined by hill climbing.
    pub climb_candidates: usize,
    pub threads: usize,
    #[serde(skip)]
    pub engine: EngineConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            restarts: 10_000,
            seed: 0,
            omega_size: 2,
            amplitude: 1.0,
            tolerance: 1e-9,
            climb_candidates: CLIMB_CANDIDATES,
            threads: 0,
            engine: EngineConfig::from_env(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub f: FunctionJson,
    pub g: FunctionJson,
    /// `||f+g|| - ||f|| - ||g||`, all three by brute-force contraction.
    pub gap: f64,
    pub relative_gap: f64,
    pub norm_f: f64,
    pub norm_g: f64,
    pub norm_sum: f64,
    /// Restart the witness was climbed from.
    pub restart: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchReport {
    pub restarts: usize,
    pub seed: u64,
    pub omega_size: usize,
    pub tolerance: f64,
    /// Largest relative gap seen on the search path (may be a float artifact).
    pub best_relative_gap: f64,
    pub violation: Option<Violation>,
}

/// Random restarts (alternately nonnegative and complex) followed by
/// coordinate ascent on the relative gap from the best restarts. A
/// candidate is reported only if brute-force re-evaluation confirms a gap
/// above `max(tolerance, 1e-7 (||f|| + ||g||))`; the first confirmed
/// candidate in rank order wins.
pub fn search_triangle_violation(h: &HypergraphPair, cfg: &SearchConfig) -> Result<SearchReport> {
    h.require_nonnegative()?;
    if h.size() <= 0.0 {
        return Err(Error::ZeroSize);
    }
    if cfg.restarts == 0 || cfg.omega_size == 0 {
        return Err(Error::InvalidArgument("restarts and omega_size must be positive".into()));
    }
    let inner = EngineConfig {
        threads: 0,
        ..cfg.engine.clone()
    };
    let prepared = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let space = DiscreteMeasureSpace::uniform(cfg.omega_size)?;
    let k = h.k();
    let stream = stream_id("triangle_search");

    let rel_gap = |fs: &[GridFunction]| -> Result<f64> {
        let nf = prepared.norm_value(&fs[0])?;
        let ng = prepared.norm_value(&fs[1])?;
        let ns = prepared.norm_value(&fs[0].add(&fs[1])?)?;
        if nf + ng == 0.0 {
            return Ok(0.0);
        }
        Ok((ns - nf - ng) / (nf + ng))
    };
    let sampling = |r: usize| {
        if r.is_multiple_of(2) {
            Sampling::Nonnegative
        } else {
            Sampling::Complex
        }
    };

    let pool = EngineConfig::default().with_threads(cfg.threads);
    let starts: Vec<(f64, Vec<GridFunction>)> = pool.run(|| {
        (0..cfg.restarts)
            .into_par_iter()
            .map(|r| {
                let mut rng = trial_rng(cfg.seed, stream, r as u64);
                let fs = vec![
                    sample_function(&mut rng, &space, k, sampling(r), cfg.amplitude)?,
                    sample_function(&mut rng, &space, k, sampling(r), cfg.amplitude)?,
                ];
                let g = rel_gap(&fs).unwrap_or(f64::NEG_INFINITY);
                Ok((if g.is_nan() { f64::NEG_INFINITY } else { g }, fs))
            })
            .collect::<Result<Vec<_>>>()
    })?;

    // Climbing from the best raw gaps alone tends to collapse onto f ∝ g,
    // where the gap is exactly zero, so half the climbs start from
    // unselected restarts in index order.
    let budget = cfg.climb_candidates.max(1).min(starts.len());
    let mut ranked: Vec<usize> = (0..starts.len()).collect();
    ranked.sort_by(|&a, &b| starts[b].0.total_cmp(&starts[a].0).then(a.cmp(&b)));
    let mut order: Vec<usize> = ranked[..budget.div_ceil(2)].to_vec();
    for r in 0..starts.len() {
        if order.len() == budget {
            break;
        }
        if !order.contains(&r) {
            order.push(r);
        }
    }

    let climbed: Vec<(f64, Vec<GridFunction>)> = pool.run(|| {
        order
            .par_iter()
            .map(|&r| {
                let mut fs = starts[r].1.clone();
                let samplings = [sampling(r); 2];
                let v = hill_climb(&mut fs, &samplings, cfg.amplitude, &|fs| rel_gap(fs).map(|g| -g));
                (-v, fs)
            })
            .collect()
    });

    let best_relative_gap = climbed
        .iter()
        .map(|c| c.0)
        .chain(starts.iter().map(|s| s.0))
        .fold(f64::NEG_INFINITY, f64::max);

    let mut violation = None;
    for (&r, (_, fs)) in order.iter().zip(&climbed) {
        if let Some(v) = certify(h, &fs[0], &fs[1], cfg, &inner)? {
            violation = Some(Violation { restart: r, ..v });
            break;
        }
    }
    Ok(SearchReport {
        restarts: cfg.restarts,
        seed: cfg.seed,
        omega_size: cfg.omega_size,
        tolerance: cfg.tolerance,
        best_relative_gap,
        violation,
    })
}

/// Brute-force re-evaluation of a candidate.
fn certify(
    h: &HypergraphPair,
    f: &GridFunction,
    g: &GridFunction,
    cfg: &SearchConfig,
    engine: &EngineConfig,
) -> Result<Option<Violation>> {
    let size = h.size();
    let norm = |x: &GridFunction| -> Result<f64> {
        let m = integrate_brute_with(h, x, engine)?.norm();
        Ok(if m == 0.0 { 0.0 } else { m.powf(1.0 / size) })
    };
    let nf = norm(f)?;
    let ng = norm(g)?;
    let ns = norm(&f.add(g)?)?;
    let gap = ns - nf - ng;
    if gap > cfg.tolerance.max(1e-7 * (nf + ng)) {
        Ok(Some(Violation {
            f: FunctionJson::from(f),
            g: FunctionJson::from(g),
            gap,
            relative_gap: gap / (nf + ng),
            norm_f: nf,
            norm_g: ng,
            norm_sum: ns,
            restart: 0,
        }))
    } else {
        Ok(None)
    }
}
