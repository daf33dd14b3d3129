//! Estimates against the Gowers norm, the zero-one lower bound, and
//! balanced random sign functions with small `U_k` norm.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::Rng;
use serde::Serialize;

use super::{relative_margin, sample_function, InequalityReport, Sampling, TrialConfig, TrialSpec};
use crate::catalog::make_gowers;
use crate::engine::{integrate_parts, DiscreteMeasureSpace, EngineConfig, GridFunction, Part, PreparedPair};
use crate::error::{Error, Result};
use crate::pair::{HypergraphPair, Omega};
use crate::rng::{stream_id, trial_rng};

/// `|integral f^H g^{1_psi}| <= ||g||_{U_k} ||f||_inf^{|H|}` for `psi`
/// outside the support of `H`, on probability spaces.
pub fn verify_gowers_cs(h: &HypergraphPair, psi: &Omega, cfg: &TrialConfig) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    if !psi.in_range(h.dims()) {
        return Err(Error::OutOfRange {
            omega: psi.0.clone(),
            dims: h.dims().to_vec(),
        });
    }
    if h.alpha(psi) != 0.0 || h.beta(psi) != 0.0 {
        return Err(Error::InvalidArgument(format!("psi = {psi} lies in the support of H")));
    }
    let inner = cfg.inner_engine();
    let delta = HypergraphPair::delta(h.dims().to_vec(), psi.clone())?;
    let gowers = PreparedPair::new(&make_gowers(h.k())?, cfg.omega_size, &inner)?;
    let size = h.size();
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let (f, g) = (&fs[0], &fs[1]);
        let lhs = integrate_parts(&[Part::new(h, f), Part::new(&delta, g)], &inner)?.norm();
        let rhs = gowers.norm_value(g)? * f.sup_norm().powf(size);
        Ok(relative_margin(lhs, rhs))
    };
    TrialSpec {
        id: "gowers_cs",
        mode: "complex".into(),
        k: h.k(),
        samplings: vec![Sampling::Complex; 2],
        probability: true,
        expected_to_hold: true,
        exploration: false,
        notes: vec![format!("psi = {psi}; probability spaces; margin = 1 - LHS/RHS")],
    }
    .run(cfg, &margin)
}

/// `|integral f^H - g^H| <= |H| ||f-g||_{U_k} max(||f||_inf, ||g||_inf)^{|H|-1}`
/// for `H = (alpha, 0)` with zero-one `alpha`. Odd trials draw `g` as a
/// perturbation of `f` of size `10^-j`, `j = 1..9`. The margin is absolute
/// (`RHS - LHS`) so that it stays meaningful as the perturbation vanishes.
pub fn verify_gowers_approx(h: &HypergraphPair, cfg: &TrialConfig) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    if !h.beta_map().is_empty() {
        return Err(Error::InvalidArgument("H must have beta = 0".into()));
    }
    if h.alpha_map().values().any(|&a| (a - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidArgument("alpha must be zero-one valued".into()));
    }
    if h.is_zero() {
        return Err(Error::InvalidArgument("H must be nonzero".into()));
    }
    let inner = cfg.inner_engine();
    let ph = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let gowers = PreparedPair::new(&make_gowers(h.k())?, cfg.omega_size, &inner)?;
    let size = h.size();
    let k = h.k();
    let draw = |i: usize, rng: &mut crate::rng::TrialRng, space: &DiscreteMeasureSpace| -> Result<Vec<GridFunction>> {
        let f = sample_function(rng, space, k, Sampling::Complex, cfg.amplitude)?;
        let g = if i % 2 == 1 {
            let eps = 10f64.powi(-(1 + ((i / 2) % 9) as i32));
            let noise = sample_function(rng, space, k, Sampling::Complex, cfg.amplitude)?;
            f.zip_with(&noise, |a, b| a + b * eps)?
        } else {
            sample_function(rng, space, k, Sampling::Complex, cfg.amplitude)?
        };
        Ok(vec![f, g])
    };
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let (f, g) = (&fs[0], &fs[1]);
        let lhs = (ph.integrate(f)? - ph.integrate(g)?).norm();
        let m = f.sup_norm().max(g.sup_norm());
        let rhs = size * gowers.norm_value(&f.sub(g)?)? * m.powf(size - 1.0);
        Ok(rhs - lhs)
    };
    TrialSpec {
        id: "gowers_approx",
        mode: "complex".into(),
        k,
        samplings: vec![Sampling::Complex; 2],
        probability: true,
        expected_to_hold: true,
        exploration: false,
        notes: vec!["probability spaces; absolute margin RHS - LHS".into()],
    }
    .run_with(cfg, &draw, &margin)
}

/// `integral f^H >= ||f||_1^{prod |V_i|}` for zero-one `f` on probability
/// spaces. Absolute margin.
pub fn verify_zero_one_bound(h: &HypergraphPair, cfg: &TrialConfig) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    let inner = cfg.inner_engine();
    let ph = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let cells: f64 = h.dims().iter().map(|&d| d as f64).product();
    let k = h.k();
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let f = &fs[0];
        let l1 = l1_norm(f);
        Ok(ph.integrate(f)?.re - l1.powf(cells))
    };
    TrialSpec {
        id: "zero_one_bound",
        mode: "zero_one".into(),
        k,
        samplings: vec![Sampling::ZeroOne],
        probability: true,
        expected_to_hold: true,
        exploration: false,
        notes: vec!["probability spaces; absolute margin".into()],
    }
    .run(cfg, &margin)
}

/// `integral |f| d mu^k`.
fn l1_norm(f: &GridFunction) -> f64 {
    let w = f.space().weights();
    let n = f.n();
    f.values()
        .iter()
        .enumerate()
        .map(|(mut i, z)| {
            let mut m = 1.0;
            for _ in 0..f.k() {
                m *= w[i % n];
                i /= n;
            }
            m * z.norm()
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PseudorandomSign {
    #[serde(skip)]
    pub g: GridFunction,
    pub m: usize,
    pub k: usize,
    pub seed: u64,
    /// Entries flipped to reach a zero sum.
    pub flipped: usize,
    /// `sum g`, exactly zero.
    pub sum: i64,
    pub gowers_norm: f64,
}

/// Independent uniform signs on `[m]^k` (uniform probability measure),
/// balanced to zero sum by flipping randomly chosen entries of the
/// majority sign.
pub fn gen_pseudorandom_sign(m: usize, k: usize, seed: u64) -> Result<PseudorandomSign> {
    gen_pseudorandom_sign_with(m, k, seed, &EngineConfig::from_env())
}

pub fn gen_pseudorandom_sign_with(m: usize, k: usize, seed: u64, cfg: &EngineConfig) -> Result<PseudorandomSign> {
    if m < 2 || m % 2 == 1 {
        return Err(Error::InvalidArgument(format!("m must be even and at least 2, got {m}")));
    }
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let len = crate::engine::checked_pow(m, k)?;
    let mut rng = trial_rng(seed, stream_id("pseudorandom_sign"), 0);
    let mut signs: Vec<i8> = (0..len).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
    let plus = signs.iter().filter(|&&s| s == 1).count();
    let (majority, excess) = if plus * 2 >= len {
        (1i8, plus - len / 2)
    } else {
        (-1i8, len / 2 - plus)
    };
    if excess > 0 {
        let positions: Vec<usize> = (0..len).filter(|&i| signs[i] == majority).collect();
        for j in sample(&mut rng, positions.len(), excess) {
            signs[positions[j]] = -majority;
        }
    }
    let sum: i64 = signs.iter().map(|&s| s as i64).sum();
    let space = DiscreteMeasureSpace::uniform(m)?;
    let g = GridFunction::new(space, k, signs.iter().map(|&s| Complex64::new(s as f64, 0.0)).collect())?;
    let gowers_norm = PreparedPair::new(&make_gowers(k)?, m, cfg)?.norm_value(&g)?;
    Ok(PseudorandomSign {
        g,
        m,
        k,
        seed,
        flipped: excess,
        sum,
        gowers_norm,
    })
}
