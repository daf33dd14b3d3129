//! Seeded randomized checks of the Hölder-type inequalities satisfied by
//! semi-norming pairs, the triangle-violation searcher, and the
//! pseudorandom sign generator.
//!
//! Every trial draws from its own counter-derived generator, so a report is
//! a pure function of `(inputs, TrialConfig)` regardless of thread count.
//! Margins are `RHS - LHS`; most verifiers divide by the right-hand side
//! (which homogeneity lets us normalize to 1), so margins are relative.

mod gowers;
mod holder;
mod search;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{DiscreteMeasureSpace, EngineConfig, FunctionJson, GridFunction};
use crate::error::{Error, Result};
use crate::rng::{stream_id, trial_rng, TrialRng};

pub use gowers::{
    gen_pseudorandom_sign, verify_gowers_approx, verify_gowers_cs, verify_zero_one_bound, PseudorandomSign,
};
pub use holder::{
    verify_factor_equality, verify_first_holder, verify_general_holder, verify_lattice_concavity,
    verify_lattice_convexity, verify_norm_monotonicity, HolderMode, MonotonicityMode, Side,
};
pub use search::{search_triangle_violation, SearchConfig, SearchReport, Violation};

/// Number of best trials refined by hill climbing in search mode.
pub const CLIMB_CANDIDATES: usize = 16;
pub const CLIMB_SWEEPS: usize = 60;
pub const CLIMB_DECAY: f64 = 0.7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialConfig {
    pub trials: usize,
    pub seed: u64,
    pub omega_size: usize,
    /// Entries are drawn with modulus at most `amplitude`.
    pub amplitude: f64,
    pub tolerance: f64,
    /// Refine the worst trials by hill climbing on the margin.
    pub search: bool,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
    #[serde(skip)]
    pub engine: EngineConfig,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            trials: 1000,
            seed: 0,
            omega_size: 2,
            amplitude: 1.0,
            tolerance: 1e-9,
            search: false,
            threads: 0,
            engine: EngineConfig::from_env(),
        }
    }
}

impl TrialConfig {
    pub fn new(trials: usize, seed: u64, omega_size: usize) -> Self {
        TrialConfig {
            trials,
            seed,
            omega_size,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.omega_size == 0 {
            return Err(Error::InvalidArgument("omega_size must be at least 1".into()));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        if !(self.amplitude > 0.0 && self.amplitude.is_finite()) {
            return Err(Error::InvalidArgument("amplitude must be positive".into()));
        }
        Ok(())
    }

    /// Engine settings for evaluations inside a trial: trials are already
    /// spread over the pool, so inner calls never build their own.
    pub(crate) fn inner_engine(&self) -> EngineConfig {
        EngineConfig {
            threads: 0,
            ..self.engine.clone()
        }
    }
}

/// Inputs at the worst margin.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialWitness {
    pub trial: usize,
    pub functions: Vec<FunctionJson>,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InequalityReport {
    pub id: String,
    pub mode: String,
    pub trials: usize,
    pub seed: u64,
    pub omega_size: usize,
    pub tolerance: f64,
    /// Minimum of `RHS - LHS` over all trials (and climbs in search mode).
    pub worst_margin: f64,
    pub max_margin: f64,
    pub witness: TrialWitness,
    /// `worst_margin >= -tolerance`; `None` for exploration runs, which
    /// record margins without a verdict.
    pub passed: Option<bool>,
    /// Whether the inequality is a theorem for these inputs.
    pub expected_to_hold: bool,
    pub searched: bool,
    pub notes: Vec<String>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.passed.unwrap_or(true)
    }

    /// The inequality failed where it was supposed to hold.
    pub fn is_unexpected_failure(&self) -> bool {
        self.expected_to_hold && self.passed == Some(false)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report JSON serialization")
    }
}

/// How a random function is drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// Complex Gaussian, modulus clamped to the amplitude.
    Complex,
    /// Modulus of a complex Gaussian draw.
    Nonnegative,
    /// Uniform `{-1, 1}`.
    Sign,
    /// Uniform `{0, 1}`.
    ZeroOne,
}

impl Sampling {
    fn climb_coords(self) -> usize {
        match self {
            Sampling::Complex => 2,
            Sampling::Nonnegative => 1,
            Sampling::Sign | Sampling::ZeroOne => 0,
        }
    }
}

pub(crate) fn sample_value(rng: &mut TrialRng, sampling: Sampling, amplitude: f64) -> Complex64 {
    match sampling {
        Sampling::Complex | Sampling::Nonnegative => {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let mut z = Complex64::new(re, im) * (amplitude / 2.0);
            let m = z.norm();
            if m > amplitude {
                z *= amplitude / m;
            }
            if sampling == Sampling::Nonnegative {
                Complex64::new(z.norm(), 0.0)
            } else {
                z
            }
        }
        Sampling::Sign => Complex64::new(if rng.random::<bool>() { 1.0 } else { -1.0 }, 0.0),
        Sampling::ZeroOne => Complex64::new(if rng.random::<bool>() { 1.0 } else { 0.0 }, 0.0),
    }
}

pub(crate) fn sample_function(
    rng: &mut TrialRng,
    space: &DiscreteMeasureSpace,
    k: usize,
    sampling: Sampling,
    amplitude: f64,
) -> Result<GridFunction> {
    let len = space.n().pow(k as u32);
    let values = (0..len).map(|_| sample_value(rng, sampling, amplitude)).collect();
    GridFunction::new(space.clone(), k, values)
}

/// Random weights in `[0.25, 1]`, normalized to total mass 1 when
/// `probability` is set.
pub(crate) fn sample_space(rng: &mut TrialRng, n: usize, probability: bool) -> Result<DiscreteMeasureSpace> {
    let mut w: Vec<f64> = (0..n).map(|_| 0.25 + 0.75 * rng.random::<f64>()).collect();
    if probability {
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
    }
    DiscreteMeasureSpace::new(w)
}

/// What a verifier needs from the shared trial runner.
pub(crate) struct TrialSpec<'a> {
    pub id: &'a str,
    pub mode: String,
    pub k: usize,
    pub samplings: Vec<Sampling>,
    pub probability: bool,
    pub expected_to_hold: bool,
    pub exploration: bool,
    pub notes: Vec<String>,
}

type Draw<'a> = dyn Fn(usize, &mut TrialRng, &DiscreteMeasureSpace) -> Result<Vec<GridFunction>> + Sync + 'a;
type Margin<'a> = dyn Fn(&[GridFunction]) -> Result<f64> + Sync + 'a;

impl TrialSpec<'_> {
    /// Default draw: one function per entry of `samplings` on a shared space.
    pub fn draw_default(&self, cfg: &TrialConfig, rng: &mut TrialRng, space: &DiscreteMeasureSpace) -> Result<Vec<GridFunction>> {
        self.samplings
            .iter()
            .map(|&s| sample_function(rng, space, self.k, s, cfg.amplitude))
            .collect()
    }

    pub fn run(&self, cfg: &TrialConfig, margin: &Margin<'_>) -> Result<InequalityReport> {
        self.run_with(cfg, &|_, rng, space| self.draw_default(cfg, rng, space), margin)
    }

    pub fn run_with(&self, cfg: &TrialConfig, draw: &Draw<'_>, margin: &Margin<'_>) -> Result<InequalityReport> {
        cfg.validate()?;
        let stream = stream_id(self.id);
        let pool = EngineConfig::default().with_threads(cfg.threads);
        let trials: Vec<(f64, Vec<GridFunction>)> = pool.run(|| {
            (0..cfg.trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = trial_rng(cfg.seed, stream, i as u64);
                    let space = sample_space(&mut rng, cfg.omega_size, self.probability)?;
                    let fs = draw(i, &mut rng, &space)?;
                    let m = margin(&fs)?;
                    Ok((sanitize(m), fs))
                })
                .collect::<Result<Vec<_>>>()
        })?;

        let max_margin = trials.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
        let mut worst = worst_index(trials.iter().map(|t| t.0));
        let mut witness = TrialWitness {
            trial: worst,
            functions: trials[worst].1.iter().map(FunctionJson::from).collect(),
            margin: trials[worst].0,
        };

        if cfg.search {
            let mut order: Vec<usize> = (0..trials.len()).collect();
            order.sort_by(|&a, &b| trials[a].0.total_cmp(&trials[b].0).then(a.cmp(&b)));
            order.truncate(CLIMB_CANDIDATES);
            let climbed: Vec<(f64, Vec<GridFunction>)> = pool.run(|| {
                order
                    .par_iter()
                    .map(|&i| {
                        let mut fs = trials[i].1.clone();
                        let m = hill_climb(&mut fs, &self.samplings, cfg.amplitude, &|x| margin(x).map(sanitize));
                        (m, fs)
                    })
                    .collect()
            });
            let best = worst_index(climbed.iter().map(|c| c.0));
            if climbed[best].0 < witness.margin {
                worst = order[best];
                witness = TrialWitness {
                    trial: worst,
                    functions: climbed[best].1.iter().map(FunctionJson::from).collect(),
                    margin: climbed[best].0,
                };
            }
        }

        let worst_margin = witness.margin;
        Ok(InequalityReport {
            id: self.id.to_string(),
            mode: self.mode.clone(),
            trials: cfg.trials,
            seed: cfg.seed,
            omega_size: cfg.omega_size,
            tolerance: cfg.tolerance,
            worst_margin,
            max_margin,
            witness,
            passed: (!self.exploration).then_some(worst_margin >= -cfg.tolerance),
            expected_to_hold: self.expected_to_hold,
            searched: cfg.search,
            notes: self.notes.clone(),
        })
    }
}

/// NaN margins count as the worst possible outcome.
fn sanitize(m: f64) -> f64 {
    if m.is_nan() {
        f64::NEG_INFINITY
    } else {
        m
    }
}

/// Index of the smallest value, first index on ties.
fn worst_index(values: impl Iterator<Item = f64>) -> usize {
    let mut best = (0, f64::INFINITY);
    for (i, v) in values.enumerate() {
        if i == 0 || v < best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// Coordinate descent on `objective` over the free real coordinates of
/// `fs` (both parts of complex functions, the real part of nonnegative
/// ones). Step starts at `amplitude / 4` and decays by 0.7 per sweep.
/// Errors count as `+inf`. Returns the final objective value.
pub(crate) fn hill_climb(
    fs: &mut [GridFunction],
    samplings: &[Sampling],
    amplitude: f64,
    objective: &dyn Fn(&[GridFunction]) -> Result<f64>,
) -> f64 {
    let eval = |fs: &[GridFunction]| objective(fs).unwrap_or(f64::INFINITY);
    let mut best = eval(fs);
    let mut step = amplitude / 4.0;
    for _ in 0..CLIMB_SWEEPS {
        for j in 0..fs.len() {
            let coords = samplings.get(j).copied().map_or(0, Sampling::climb_coords);
            let len = fs[j].values().len();
            for i in 0..len {
                for part in 0..coords {
                    let old = fs[j].values()[i];
                    for dir in [1.0, -1.0] {
                        let mut z = old;
                        if part == 0 {
                            z.re += dir * step;
                            if samplings[j] == Sampling::Nonnegative {
                                z.re = z.re.max(0.0);
                            }
                        } else {
                            z.im += dir * step;
                        }
                        fs[j].values_mut()[i] = z;
                        let v = eval(fs);
                        if v < best {
                            best = v;
                            break;
                        }
                        fs[j].values_mut()[i] = old;
                    }
                }
            }
        }
        step *= CLIMB_DECAY;
    }
    best
}

/// `1 - lhs / rhs`, or `-lhs` when the right-hand side vanishes.
pub(crate) fn relative_margin(lhs: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        1.0 - lhs / rhs
    } else {
        -lhs
    }
}
