//! Banach-space geometry of `L_H`: scalar two-point constants, sampled
//! smoothness/convexity constants with directed witnesses, Hanner and
//! Clarkson inequalities, moduli estimates and the diagonal embedding of
//! `l_{|H|}`.
//!
//! Sampled quantities are one-sided bounds and are labelled as such.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{classify, Verdict};
use crate::engine::{DiscreteMeasureSpace, EngineConfig, FunctionJson, GridFunction, PreparedPair};
use crate::error::{Error, Result};
use crate::lab::{hill_climb, relative_margin, sample_function, InequalityReport, Sampling, TrialConfig, TrialSpec};
use crate::pair::{factorize, HypergraphPair};
use crate::rng::{stream_id, trial_rng};

const GRID_U: usize = 512;
const GRID_THETA: usize = 256;
/// Keeps `rho = tan(u)` inside `[1e-4, 1e4]`, where the stable evaluation
/// below is accurate to ~1e-12.
const U_MARGIN: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstantKind {
    /// `C(t, p)`: `M_p(x+y, x-y) <= (|x|^t + |C y|^t)^{1/t}`.
    C,
    /// `C*(r, q)`: `M_q(x+y, x-y) >= (|x|^r + |y / C*|^r)^{1/r}`.
    CStar,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoPointConstant {
    pub kind: ConstantKind,
    /// `t` for `C`, `r` for `C*`.
    pub a: f64,
    /// `p` for `C`, `q` for `C*`.
    pub b: f64,
    pub value: f64,
    /// Maximizer `x = 1`, `y = rho e^{i theta}`.
    pub rho: f64,
    pub theta: f64,
}

/// `((|1+y|^p + |1-y|^p)/2) - 1` for `y = rho e^{i theta}`, without
/// cancellation for small `rho`.
fn mean_power_minus_one(rho: f64, theta: f64, p: f64) -> f64 {
    let c = 2.0 * rho * theta.cos();
    let r2 = rho * rho;
    let a = 0.5 * p * (r2 + c).ln_1p();
    let b = 0.5 * p * (r2 - c).ln_1p();
    0.5 * (a.exp_m1() + b.exp_m1())
}

/// `M_p(1+y, 1-y)^e - 1`.
fn mean_pow_minus_one(rho: f64, theta: f64, p: f64, e: f64) -> f64 {
    (e / p * mean_power_minus_one(rho, theta, p).ln_1p()).exp_m1()
}

fn two_point_ratio(kind: ConstantKind, a: f64, b: f64, u: f64, theta: f64) -> f64 {
    let rho = u.tan();
    let d = mean_pow_minus_one(rho, theta, b, a);
    match kind {
        ConstantKind::C => d.max(0.0).powf(1.0 / a) / rho,
        ConstantKind::CStar => {
            if d <= 0.0 {
                f64::INFINITY
            } else {
                rho / d.powf(1.0 / a)
            }
        }
    }
}

fn golden_max(lo: f64, hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    [(x, fx), (lo, f(lo)), (hi, f(hi))]
        .into_iter()
        .fold((x, fx), |best, c| if c.1 > best.1 { c } else { best })
}

/// Smallest constant in the scalar two-point inequality, by a 512 x 256
/// grid over `u = atan(rho)` and `theta` followed by alternating
/// golden-section refinement.
pub fn two_point_constant(kind: ConstantKind, a: f64, b: f64) -> Result<TwoPointConstant> {
    let ok = match kind {
        ConstantKind::C => a > 1.0 && a <= 2.0,
        ConstantKind::CStar => (2.0..f64::INFINITY).contains(&a),
    } && b > 1.0
        && b.is_finite();
    if !ok {
        return Err(Error::InvalidArgument(format!(
            "parameters out of range for {kind:?}: ({a}, {b})"
        )));
    }
    let (u_lo, u_hi) = (U_MARGIN, FRAC_PI_2 - U_MARGIN);
    let du = (u_hi - u_lo) / (GRID_U - 1) as f64;
    let dt = FRAC_PI_2 / (GRID_THETA - 1) as f64;
    let (mut u, mut theta, mut value) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..GRID_U {
        let ui = u_lo + du * i as f64;
        for j in 0..GRID_THETA {
            let tj = dt * j as f64;
            let v = two_point_ratio(kind, a, b, ui, tj);
            if v > value {
                (u, theta, value) = (ui, tj, v);
            }
        }
    }
    for _ in 0..6 {
        let (nu, v) = golden_max((u - du).max(u_lo), (u + du).min(u_hi), 1e-10, |x| {
            two_point_ratio(kind, a, b, x, theta)
        });
        if v >= value {
            (u, value) = (nu, v);
        }
        let (nt, v) = golden_max((theta - dt).max(0.0), (theta + dt).min(FRAC_PI_2), 1e-10, |x| {
            two_point_ratio(kind, a, b, u, x)
        });
        if v >= value {
            (theta, value) = (nt, v);
        }
    }
    Ok(TwoPointConstant {
        kind,
        a,
        b,
        value,
        rho: u.tan(),
        theta,
    })
}

/// `((|x+ry|^q + |x-ry|^q)/2)^{1/q} <= ((|x+y|^p + |x-y|^p)/2)^{1/p}` with
/// `r = sqrt((p-1)/(q-1))`, on random complex scalars.
pub fn check_bonami_beckner(p: f64, q: f64, cfg: &TrialConfig) -> Result<InequalityReport> {
    if !(p > 1.0 && p <= q && q.is_finite()) {
        return Err(Error::InvalidArgument(format!("need 1 < p <= q < inf, got ({p}, {q})")));
    }
    let r = ((p - 1.0) / (q - 1.0)).sqrt();
    let mean = |u: Complex64, v: Complex64, e: f64| ((u.norm().powf(e) + v.norm().powf(e)) / 2.0).powf(1.0 / e);
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let (x, y) = (fs[0].values()[0], fs[1].values()[0]);
        Ok(relative_margin(mean(x + y * r, x - y * r, q), mean(x + y, x - y, p)))
    };
    let scalar = TrialConfig {
        omega_size: 1,
        ..cfg.clone()
    };
    TrialSpec {
        id: "bonami_beckner",
        mode: format!("p={p},q={q}"),
        k: 1,
        samplings: vec![Sampling::Complex; 2],
        probability: false,
        expected_to_hold: true,
        exploration: false,
        notes: vec!["two-point form on complex scalars".into()],
    }
    .run(&scalar, &margin)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KKind {
    /// `K_{t,p}`: smoothness form.
    Smooth,
    /// `K*_{r,q}`: convexity form.
    Convex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KWitness {
    pub x: FunctionJson,
    pub y: FunctionJson,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KConstantEstimate {
    pub kind: KKind,
    pub t: f64,
    pub p: f64,
    /// Best of the directed and sampled bounds.
    pub lower_bound: f64,
    pub directed_bound: f64,
    pub sampled_bound: f64,
    pub witness: KWitness,
    pub samples: usize,
    pub seed: u64,
    /// Closed form, when known for this pair and exponents.
    pub exact: Option<f64>,
    /// No sample exceeded `exact` by more than the tolerance.
    pub consistent_with_exact: Option<bool>,
}

/// Smallest `K` making one pair `(x, y)` satisfy the smoothness or
/// convexity form, from the four norms involved.
pub fn k_from_norms(kind: KKind, t: f64, p: f64, nx: f64, ny: f64, n_plus: f64, n_minus: f64) -> f64 {
    let m = ((n_plus.powf(p) + n_minus.powf(p)) / 2.0).powf(1.0 / p);
    let d = m.powf(t) - nx.powf(t);
    match kind {
        KKind::Smooth => {
            if ny == 0.0 {
                return 0.0;
            }
            d.max(0.0).powf(1.0 / t) / ny
        }
        KKind::Convex => {
            if ny == 0.0 {
                0.0
            } else if d <= 0.0 {
                f64::INFINITY
            } else {
                ny / d.powf(1.0 / t)
            }
        }
    }
}

/// `sqrt(max(|H|, p) - 1)` for `t = 2` and non-factorizable semi-norming
/// `H` of Type II, or of Type I with parameter at least 2.
pub fn exact_k_smooth(h: &HypergraphPair, t: f64, p: f64) -> Result<Option<f64>> {
    if t != 2.0 || h.size() < 2.0 || !factorize(h).is_non_factorizable() {
        return Ok(None);
    }
    let applies = match classify(h)?.verdict {
        Verdict::TypeII => true,
        Verdict::TypeI { s } => s >= 2.0 - 1e-12,
        Verdict::NotSemiNorming => false,
    };
    Ok(applies.then(|| (h.size().max(p) - 1.0).sqrt()))
}

/// `f_a(i, .., i) = a_i`, zero off the diagonal, on counting measure.
pub fn diagonal_function(a: &[Complex64], k: usize) -> Result<GridFunction> {
    let space = DiscreteMeasureSpace::counting(a.len())?;
    GridFunction::from_fn(space, k, |idx| {
        if idx.iter().all(|&i| i == idx[0]) {
            a[idx[0]]
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Lower bound on `K_{t,p}(L_H)` (or `K*_{t,p}`) from directed witnesses
/// `x = (a, a)`, `y = (b, -b)` sent through the diagonal embedding, and
/// from random pairs with `y` rescaled over several orders of magnitude.
pub fn estimate_k(h: &HypergraphPair, t: f64, p: f64, kind: KKind, cfg: &TrialConfig) -> Result<KConstantEstimate> {
    cfg.validate()?;
    let range_ok = match kind {
        KKind::Smooth => t > 1.0 && t <= 2.0,
        KKind::Convex => t >= 2.0 && t.is_finite(),
    } && p > 1.0
        && p.is_finite();
    if !range_ok {
        return Err(Error::InvalidArgument(format!("exponents out of range: t = {t}, p = {p}")));
    }
    let verdict = classify(h)?;
    if !verdict.is_candidate() {
        return Err(Error::Rejected("classify rejects H; its L_H is not a normed space".into()));
    }
    let inner = cfg.inner_engine();
    let k = h.k();
    let one = Complex64::new(1.0, 0.0);

    let diag = PreparedPair::new(h, 2, &inner)?;
    let pair_k = |prep: &PreparedPair, x: &GridFunction, y: &GridFunction| -> Result<f64> {
        let nx = prep.norm_value(x)?;
        let ny = prep.norm_value(y)?;
        let np = prep.norm_value(&x.add(y)?)?;
        let nm = prep.norm_value(&x.sub(y)?)?;
        Ok(k_from_norms(kind, t, p, nx, ny, np, nm))
    };

    let mut best = (f64::NEG_INFINITY, None::<(GridFunction, GridFunction)>);
    for j in 1..=14 {
        let rho = 2f64.powi(-j) * 4.0;
        for step in 0..=8 {
            let b = Complex64::from_polar(rho, FRAC_PI_2 * step as f64 / 8.0);
            let x = diagonal_function(&[one, one], k)?;
            let y = diagonal_function(&[b, -b], k)?;
            let v = pair_k(&diag, &x, &y)?;
            if v > best.0 {
                best = (v, Some((x, y)));
            }
        }
    }
    let directed_bound = best.0;

    let prep = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let space = DiscreteMeasureSpace::counting(cfg.omega_size)?;
    let stream = stream_id("estimate_k");
    let pool = EngineConfig::default().with_threads(cfg.threads);
    let sampled: Vec<(f64, GridFunction, GridFunction)> = pool.run(|| {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(cfg.seed, stream, i as u64);
                let x = sample_function(&mut rng, &space, k, Sampling::Complex, cfg.amplitude)?;
                let scale = 10f64.powf(rng.random_range(-2.0..0.5));
                let y = sample_function(&mut rng, &space, k, Sampling::Complex, cfg.amplitude)?
                    .scale(Complex64::new(scale, 0.0));
                let v = pair_k(&prep, &x, &y).unwrap_or(f64::NAN);
                Ok((if v.is_nan() { f64::NEG_INFINITY } else { v }, x, y))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut sampled_bound = f64::NEG_INFINITY;
    let mut sampled_best = None;
    for (v, x, y) in sampled {
        if v > sampled_bound {
            sampled_bound = v;
            sampled_best = Some((x, y));
        }
    }

    let (lower_bound, (wx, wy)) = if directed_bound >= sampled_bound {
        (directed_bound, best.1.expect("directed family is nonempty"))
    } else {
        (sampled_bound, sampled_best.expect("at least one sample"))
    };
    let exact = match kind {
        KKind::Smooth => exact_k_smooth(h, t, p)?,
        KKind::Convex => None,
    };
    let tol = cfg.tolerance.max(1e-6);
    Ok(KConstantEstimate {
        kind,
        t,
        p,
        lower_bound,
        directed_bound,
        sampled_bound,
        witness: KWitness {
            x: FunctionJson::from(&wx),
            y: FunctionJson::from(&wy),
            value: lower_bound,
        },
        samples: cfg.trials,
        seed: cfg.seed,
        exact,
        consistent_with_exact: exact.map(|e| directed_bound.max(sampled_bound) <= e + tol),
    })
}

fn hanner_hypothesis(h: &HypergraphPair) -> Result<bool> {
    Ok(match classify(h)?.verdict {
        Verdict::TypeII => true,
        Verdict::TypeI { s } => (s / 2.0 - (s / 2.0).round()).abs() < 1e-9,
        Verdict::NotSemiNorming => false,
    })
}

/// `||f+g||^q + ||f-g||^q <= (||f|| + ||g||)^q + |||f|| - ||g|||^q`,
/// `q = |H|`. Outside the theorem's hypothesis (Type II, or Type I with
/// even integer parameter) the run is exploratory: margins only.
pub fn check_hanner(h: &HypergraphPair, cfg: &TrialConfig) -> Result<InequalityReport> {
    let proved = hanner_hypothesis(h)?;
    let q = h.size();
    let inner = cfg.inner_engine();
    let prep = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let (f, g) = (&fs[0], &fs[1]);
        let (nf, ng) = (prep.norm_value(f)?, prep.norm_value(g)?);
        let lhs = prep.norm_value(&f.add(g)?)?.powf(q) + prep.norm_value(&f.sub(g)?)?.powf(q);
        let rhs = (nf + ng).powf(q) + (nf - ng).abs().powf(q);
        Ok(relative_margin(lhs, rhs))
    };
    let mut notes = vec![format!("q = |H| = {q}; margin = 1 - LHS/RHS")];
    if !proved {
        notes.push("outside the proved cases: exploration, no verdict".into());
    }
    TrialSpec {
        id: "hanner",
        mode: if proved { "proved" } else { "exploration" }.into(),
        k: h.k(),
        samplings: vec![Sampling::Complex; 2],
        probability: false,
        expected_to_hold: proved,
        exploration: !proved,
        notes,
    }
    .run(cfg, &margin)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClarksonReport {
    pub q: f64,
    pub p: f64,
    /// `(M_q(f+g, f-g)) <= (||f||^p + ||g||^p)^{1/p}`.
    pub direct: InequalityReport,
    /// The same inequality after `(f, g) -> ((f+g)/2, (f-g)/2)`.
    pub dual: InequalityReport,
}

impl ClarksonReport {
    pub fn passed(&self) -> bool {
        self.direct.passed() && self.dual.passed()
    }
}

/// Clarkson's inequality with `q = |H|`, `1/p + 1/q = 1`, and its
/// transformed form.
pub fn check_clarkson(h: &HypergraphPair, cfg: &TrialConfig) -> Result<ClarksonReport> {
    let q = h.size();
    if q < 2.0 {
        return Err(Error::InvalidArgument(format!("Clarkson needs |H| >= 2, got {q}")));
    }
    let p = q / (q - 1.0);
    let expected = match classify(h)?.verdict {
        Verdict::TypeII => true,
        Verdict::TypeI { s } => s >= 2.0 - 1e-12,
        Verdict::NotSemiNorming => false,
    };
    let inner = cfg.inner_engine();
    let prep = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let half = Complex64::new(0.5, 0.0);
    let run = |dual: bool| -> Result<InequalityReport> {
        let margin = |fs: &[GridFunction]| -> Result<f64> {
            let (f, g) = if dual {
                (fs[0].add(&fs[1])?.scale(half), fs[0].sub(&fs[1])?.scale(half))
            } else {
                (fs[0].clone(), fs[1].clone())
            };
            let np = prep.norm_value(&f.add(&g)?)?;
            let nm = prep.norm_value(&f.sub(&g)?)?;
            let lhs = ((np.powf(q) + nm.powf(q)) / 2.0).powf(1.0 / q);
            let rhs = (prep.norm_value(&f)?.powf(p) + prep.norm_value(&g)?.powf(p)).powf(1.0 / p);
            Ok(relative_margin(lhs, rhs))
        };
        TrialSpec {
            id: if dual { "clarkson_dual" } else { "clarkson" },
            mode: format!("q={q},p={p}"),
            k: h.k(),
            samplings: vec![Sampling::Complex; 2],
            probability: false,
            expected_to_hold: expected,
            exploration: false,
            notes: vec!["margin = 1 - LHS/RHS".into()],
        }
        .run(cfg, &margin)
    };
    Ok(ClarksonReport {
        q,
        p,
        direct: run(false)?,
        dual: run(true)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulusKind {
    Smoothness,
    Convexity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModulusEstimate {
    pub kind: ModulusKind,
    /// `lower_bound` for smoothness, `upper_bound` for convexity.
    pub direction: String,
    pub grid: Vec<f64>,
    /// After monotone cleanup.
    pub values: Vec<f64>,
    pub raw_values: Vec<f64>,
    /// Closed form for `l_2` when the target is `L_2`.
    pub l2_reference: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
}

pub fn rho_l2(tau: f64) -> f64 {
    (1.0 + tau * tau).sqrt() - 1.0
}

pub fn delta_l2(eps: f64) -> f64 {
    1.0 - (1.0 - eps * eps).max(0.0).sqrt()
}

/// Sampled `rho_X(tau)` (a lower bound) or `delta_X(eps)` (an upper bound)
/// for `X = L_H` over `omega_size` points with counting measure.
/// Unit vectors come from normalizing Gaussian samples; the best samples
/// are refined by hill climbing, with a penalty enforcing the distance
/// constraint for convexity.
pub fn estimate_modulus(h: &HypergraphPair, kind: ModulusKind, grid: &[f64], cfg: &TrialConfig) -> Result<ModulusEstimate> {
    cfg.validate()?;
    if grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidArgument("grid values must be finite and nonnegative".into()));
    }
    if kind == ModulusKind::Convexity && grid.iter().any(|&e| e > 1.0) {
        return Err(Error::InvalidArgument("convexity grid must lie in [0, 1]".into()));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let inner = cfg.inner_engine();
    let prep = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let space = DiscreteMeasureSpace::counting(cfg.omega_size)?;
    let k = h.k();
    let pool = EngineConfig::default().with_threads(cfg.threads);

    let unit = |f: &GridFunction| -> Result<GridFunction> {
        let n = prep.norm_value(f)?;
        if n == 0.0 {
            return Err(Error::InvalidArgument("zero vector".into()));
        }
        Ok(f.scale(Complex64::new(1.0 / n, 0.0)))
    };
    // Smoothness: maximize; convexity: minimize among feasible pairs.
    let value = |fs: &[GridFunction], param: f64| -> Result<(f64, bool)> {
        let x = unit(&fs[0])?;
        let y = unit(&fs[1])?;
        match kind {
            ModulusKind::Smoothness => {
                let ty = y.scale(Complex64::new(param, 0.0));
                let a = prep.norm_value(&x.add(&ty)?)?;
                let b = prep.norm_value(&x.sub(&ty)?)?;
                Ok(((a + b) / 2.0 - 1.0, true))
            }
            ModulusKind::Convexity => {
                let dist = prep.norm_value(&x.sub(&y)?)?;
                let mid = prep.norm_value(&x.add(&y)?)? / 2.0;
                // Relative slack so the antipodal pair stays feasible at eps = 1.
                Ok((1.0 - mid, dist >= 2.0 * param * (1.0 - 1e-12)))
            }
        }
    };
    let sign = if kind == ModulusKind::Smoothness { -1.0 } else { 1.0 };

    let raw: Vec<f64> = grid
        .iter()
        .enumerate()
        .map(|(gi, &param)| -> Result<f64> {
            // Both moduli vanish at 0; sampling would only add rounding noise.
            if param == 0.0 {
                return Ok(0.0);
            }
            let stream = stream_id("modulus") ^ (gi as u64).wrapping_mul(0x9E37_79B9);
            let samples: Vec<(f64, Vec<GridFunction>)> = pool.run(|| {
                (0..cfg.trials)
                    .into_par_iter()
                    .map(|i| {
                        let mut rng = trial_rng(cfg.seed, stream, i as u64);
                        let x = sample_function(&mut rng, &space, k, Sampling::Complex, cfg.amplitude)?;
                        let y = if kind == ModulusKind::Convexity && i == 0 {
                            x.scale(Complex64::new(-1.0, 0.0))
                        } else {
                            sample_function(&mut rng, &space, k, Sampling::Complex, cfg.amplitude)?
                        };
                        let fs = vec![x, y];
                        let score = match value(&fs, param) {
                            Ok((v, true)) => sign * v,
                            _ => f64::INFINITY,
                        };
                        Ok((score, fs))
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            let mut order: Vec<usize> = (0..samples.len()).collect();
            order.sort_by(|&a, &b| samples[a].0.total_cmp(&samples[b].0).then(a.cmp(&b)));
            order.truncate(crate::lab::CLIMB_CANDIDATES / 2);
            let penalized = |fs: &[GridFunction]| -> Result<f64> {
                let x = unit(&fs[0])?;
                let y = unit(&fs[1])?;
                match kind {
                    ModulusKind::Smoothness => value(fs, param).map(|v| -v.0),
                    ModulusKind::Convexity => {
                        let dist = prep.norm_value(&x.sub(&y)?)?;
                        let mid = prep.norm_value(&x.add(&y)?)? / 2.0;
                        Ok(1.0 - mid + 10.0 * (2.0 * param - dist).max(0.0))
                    }
                }
            };
            let climbed: Vec<f64> = pool.run(|| {
                order
                    .par_iter()
                    .map(|&i| {
                        let mut fs = samples[i].1.clone();
                        hill_climb(&mut fs, &[Sampling::Complex; 2], cfg.amplitude, &penalized);
                        match value(&fs, param) {
                            Ok((v, true)) => sign * v,
                            _ => f64::INFINITY,
                        }
                    })
                    .collect()
            });
            let best = samples
                .iter()
                .map(|s| s.0)
                .chain(climbed)
                .fold(f64::INFINITY, f64::min);
            Ok(sign * best)
        })
        .collect::<Result<_>>()?;

    let mut values = raw.clone();
    match kind {
        // A lower bound at tau also bounds rho at every larger tau.
        ModulusKind::Smoothness => {
            for i in 1..values.len() {
                values[i] = values[i].max(values[i - 1]);
            }
        }
        // An upper bound at eps also bounds delta at every smaller eps.
        ModulusKind::Convexity => {
            for i in (0..values.len().saturating_sub(1)).rev() {
                values[i] = values[i].min(values[i + 1]);
            }
        }
    }
    let l2_reference = grid
        .iter()
        .map(|&v| match kind {
            ModulusKind::Smoothness => rho_l2(v),
            ModulusKind::Convexity => delta_l2(v),
        })
        .collect();
    Ok(ModulusEstimate {
        kind,
        direction: match kind {
            ModulusKind::Smoothness => "lower_bound",
            ModulusKind::Convexity => "upper_bound",
        }
        .into(),
        grid,
        values,
        raw_values: raw,
        l2_reference,
        samples: cfg.trials,
        seed: cfg.seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub n: usize,
    pub a: Vec<[f64; 2]>,
    pub norm_h: f64,
    /// `(sum |a_i|^{|H|})^{1/|H|}`.
    pub lp_norm: f64,
    pub relative_error: f64,
    pub passed: bool,
}

/// Checks `||f_a||_H = ||a||_{|H|}` for the diagonal embedding of a random
/// `a` in `C^n` (or the given one).
pub fn embedding_witness(h: &HypergraphPair, n: usize, a: Option<Vec<Complex64>>, seed: u64) -> Result<EmbeddingReport> {
    h.require_nonnegative()?;
    if !factorize(h).is_non_factorizable() {
        return Err(Error::Rejected("the diagonal embedding needs a non-factorizable pair".into()));
    }
    let a = match a {
        Some(a) => {
            if a.len() != n {
                return Err(Error::DimensionMismatch(format!("a has {} entries, n = {n}", a.len())));
            }
            a
        }
        None => {
            let mut rng = trial_rng(seed, stream_id("embedding"), 0);
            (0..n)
                .map(|_| crate::lab::sample_value(&mut rng, Sampling::Complex, 1.0))
                .collect()
        }
    };
    let size = h.size();
    let f = diagonal_function(&a, h.k())?;
    let norm_h = crate::engine::norm_with(h, &f, &EngineConfig::from_env())?.value;
    let lp_norm = a.iter().map(|z| z.norm().powf(size)).sum::<f64>().powf(1.0 / size);
    let relative_error = if lp_norm == 0.0 {
        norm_h
    } else {
        (norm_h - lp_norm).abs() / lp_norm
    };
    Ok(EmbeddingReport {
        n,
        a: a.iter().map(|z| [z.re, z.im]).collect(),
        norm_h,
        lp_norm,
        relative_error,
        passed: relative_error <= 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stable_mean_matches_direct_formula() {
        for &(rho, theta, p) in &[(0.3, 0.2, 3.0), (2.0, 1.0, 1.5), (0.01, 0.0, 4.0)] {
            let y = Complex64::from_polar(rho, theta);
            let direct = ((1.0 + y).norm().powf(p) + (1.0 - y).norm().powf(p)) / 2.0 - 1.0;
            let stable = mean_power_minus_one(rho, theta, p);
            assert!((direct - stable).abs() < 1e-12 * (1.0 + direct.abs()), "{direct} {stable}");
        }
    }

    #[test]
    fn golden_section_finds_interior_maximum() {
        let (x, v) = golden_max(0.0, 2.0, 1e-12, |x| -(x - 1.3) * (x - 1.3));
        assert!((x - 1.3).abs() < 1e-6 && v.abs() < 1e-12);
    }

    #[test]
    fn k_from_norms_parallelogram() {
        // Hilbert space: ||x+y||^2 + ||x-y||^2 = 2||x||^2 + 2||y||^2, so K = 1.
        let (nx, ny) = (1.0f64, 0.5f64);
        let s = (nx * nx + ny * ny).sqrt();
        let k = k_from_norms(KKind::Smooth, 2.0, 2.0, nx, ny, s, s);
        assert!((k - 1.0).abs() < 1e-12);
    }
}
