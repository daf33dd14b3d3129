//! Hölder-type inequalities for a single pair and its splittings, norm
//! monotonicity, the disjoint-union identity and the lattice estimates.

use num_complex::Complex64;
use serde::Serialize;

use super::{relative_margin, InequalityReport, Sampling, TrialConfig, TrialSpec};
use crate::analysis::{classify, Verdict};
use crate::engine::{integrate_parts, power_kernel_signed, GridFunction, Part, PreparedPair};
use crate::error::{Error, Result};
use crate::pair::{HypergraphPair, Omega};

/// Which exponent of `psi` is lowered by one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `|integral f^{H - 1_psi} g^{1_psi}|`.
    Alpha,
    /// `|integral f^{H - conj(1_psi)} conj(g)^{1_psi}|`.
    Beta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HolderMode {
    /// Nonnegative functions, any real parts.
    Nonnegative,
    /// Complex functions, integer-valued parts.
    Integer,
    /// Complex functions, arbitrary parts. Not a theorem.
    Complex,
}

/// Preconditions under which `||f||_K <= ||f||_H` on probability spaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MonotonicityMode {
    /// `f >= 0`.
    Nonnegative,
    /// `H` of Type I, complex `f`.
    TypeOne,
    /// All weights of `H` and `K` integers, complex `f`.
    Integer,
}

fn is_candidate(h: &HypergraphPair) -> Result<bool> {
    Ok(classify(h)?.is_candidate())
}

fn type_one_parameter(h: &HypergraphPair) -> Result<f64> {
    match classify(h)?.verdict {
        Verdict::TypeI { s } => Ok(s),
        _ => Err(Error::InvalidArgument(
            "lattice estimates are stated for pairs of Type I".into(),
        )),
    }
}

fn without_cell(h: &HypergraphPair, psi: &Omega) -> Result<HypergraphPair> {
    let keep = |m: &std::collections::BTreeMap<Omega, f64>| -> Vec<(Omega, f64)> {
        m.iter().filter(|(o, _)| *o != psi).map(|(o, v)| (o.clone(), *v)).collect()
    };
    HypergraphPair::from_entries(h.dims().to_vec(), keep(h.alpha_map()), keep(h.beta_map()))
}

/// `|integral f^{H-1_psi} g^{1_psi}| <= ||f||_H^{|H|-1} ||g||_H` (or the
/// conjugate form), with relative margin `1 - LHS/RHS`.
pub fn verify_first_holder(h: &HypergraphPair, psi: &Omega, side: Side, cfg: &TrialConfig) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    if !psi.in_range(h.dims()) {
        return Err(Error::OutOfRange {
            omega: psi.0.clone(),
            dims: h.dims().to_vec(),
        });
    }
    let (a, b) = (h.alpha(psi), h.beta(psi));
    let on_side = match side {
        Side::Alpha => a,
        Side::Beta => b,
    };
    if on_side == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "psi = {psi} is outside supp({})",
            if side == Side::Alpha { "alpha" } else { "beta" }
        )));
    }
    let rest = without_cell(h, psi)?;
    let delta = HypergraphPair::delta(h.dims().to_vec(), psi.clone())?;
    let inner = cfg.inner_engine();
    let prepared = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let size = h.size();
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let (f, g) = (&fs[0], &fs[1]);
        let nf = prepared.norm_value(f)?;
        let ng = prepared.norm_value(g)?;
        let cell = f.zip_with(g, |x, y| match side {
            Side::Alpha => power_kernel_signed(x, a - 1.0, b) * y,
            Side::Beta => power_kernel_signed(x, a, b - 1.0) * y.conj(),
        })?;
        let lhs = integrate_parts(&[Part::new(&rest, f), Part::new(&delta, &cell)], &inner)?.norm();
        Ok(relative_margin(lhs, nf.powf(size - 1.0) * ng))
    };
    TrialSpec {
        id: "first_holder",
        mode: format!("{side:?}").to_lowercase(),
        k: h.k(),
        samplings: vec![Sampling::Complex; 2],
        probability: false,
        expected_to_hold: is_candidate(h)?,
        exploration: false,
        notes: vec![format!("psi = {psi}; margin = 1 - LHS/RHS")],
    }
    .run(cfg, &margin)
}

/// `|integral prod f_i^{H_i}| <= prod ||f_i||_H^{|H_i|}` for `H = sum H_i`.
pub fn verify_general_holder(
    h: &HypergraphPair,
    parts: &[HypergraphPair],
    mode: HolderMode,
    cfg: &TrialConfig,
) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    if parts.is_empty() {
        return Err(Error::InvalidArgument("at least one part is required".into()));
    }
    let mut sum = HypergraphPair::zero(h.dims().to_vec())?;
    for (i, p) in parts.iter().enumerate() {
        if p.is_zero() {
            return Err(Error::InvalidArgument(format!("part {i} is zero")));
        }
        p.require_nonnegative()?;
        if mode == HolderMode::Integer && !p.is_integer_valued() {
            return Err(Error::InvalidArgument(format!(
                "integer mode needs integer-valued parts; part {i} is not"
            )));
        }
        sum = sum.add(p)?;
    }
    let diff = sum.sub(h)?;
    let off = diff
        .alpha_map()
        .values()
        .chain(diff.beta_map().values())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    if off > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "parts do not sum to H (largest deviation {off:e})"
        )));
    }
    let inner = cfg.inner_engine();
    let prepared = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let sizes: Vec<f64> = parts.iter().map(HypergraphPair::size).collect();
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let ps: Vec<Part<'_>> = parts.iter().zip(fs).map(|(p, f)| Part::new(p, f)).collect();
        let lhs = integrate_parts(&ps, &inner)?.norm();
        let mut rhs = 1.0;
        for (f, s) in fs.iter().zip(&sizes) {
            rhs *= prepared.norm_value(f)?.powf(*s);
        }
        Ok(relative_margin(lhs, rhs))
    };
    let sampling = if mode == HolderMode::Nonnegative {
        Sampling::Nonnegative
    } else {
        Sampling::Complex
    };
    let mut notes = vec![format!("{} parts; margin = 1 - LHS/RHS", parts.len())];
    if mode == HolderMode::Complex {
        notes.push("complex functions with arbitrary parts: not covered by the theorem".into());
    }
    TrialSpec {
        id: "general_holder",
        mode: format!("{mode:?}").to_lowercase(),
        k: h.k(),
        samplings: vec![sampling; parts.len()],
        probability: false,
        expected_to_hold: mode != HolderMode::Complex && is_candidate(h)?,
        exploration: false,
        notes,
    }
    .run(cfg, &margin)
}

/// `||f||_K <= ||f||_H` on probability spaces for `K <= H` entrywise.
pub fn verify_norm_monotonicity(
    h: &HypergraphPair,
    kp: &HypergraphPair,
    mode: MonotonicityMode,
    cfg: &TrialConfig,
) -> Result<InequalityReport> {
    h.require_nonnegative()?;
    kp.require_nonnegative()?;
    if h.dims() != kp.dims() {
        return Err(Error::DimensionMismatch(format!(
            "K has dims {:?}, H has {:?}",
            kp.dims(),
            h.dims()
        )));
    }
    if kp.is_zero() {
        return Err(Error::InvalidArgument("K must be nonzero".into()));
    }
    for e in kp.entries() {
        if e.alpha > h.alpha(e.omega) + 1e-12 || e.beta > h.beta(e.omega) + 1e-12 {
            return Err(Error::InvalidArgument(format!("K is not below H at {}", e.omega)));
        }
    }
    let mut notes = vec!["probability spaces; margin = 1 - ||f||_K / ||f||_H".to_string()];
    let verdict = classify(h)?.verdict;
    let mut expected = verdict != Verdict::NotSemiNorming;
    match mode {
        MonotonicityMode::Nonnegative => {}
        MonotonicityMode::TypeOne => {
            if !matches!(verdict, Verdict::TypeI { .. }) {
                expected = false;
                notes.push("H is not of Type I".into());
            }
        }
        MonotonicityMode::Integer => {
            if !(h.is_integer_valued() && kp.is_integer_valued()) {
                expected = false;
                notes.push("weights are not all integers".into());
            }
        }
    }
    let inner = cfg.inner_engine();
    let ph = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let pk = PreparedPair::new(kp, cfg.omega_size, &inner)?;
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        Ok(relative_margin(pk.norm_value(&fs[0])?, ph.norm_value(&fs[0])?))
    };
    let sampling = if mode == MonotonicityMode::Nonnegative {
        Sampling::Nonnegative
    } else {
        Sampling::Complex
    };
    TrialSpec {
        id: "norm_monotonicity",
        mode: format!("{mode:?}").to_lowercase(),
        k: h.k(),
        samplings: vec![sampling],
        probability: true,
        expected_to_hold: expected,
        exploration: false,
        notes,
    }
    .run(cfg, &margin)
}

/// `||f||_{H1 ⊔ H1} = ||f||_{H1}`; margin is minus the relative difference,
/// so the report passes when the two agree within the tolerance.
pub fn verify_factor_equality(h1: &HypergraphPair, cfg: &TrialConfig) -> Result<InequalityReport> {
    h1.require_nonnegative()?;
    let doubled = h1.disjoint_union(h1)?;
    let inner = cfg.inner_engine();
    let p1 = PreparedPair::new(h1, cfg.omega_size, &inner)?;
    let p2 = PreparedPair::new(&doubled, cfg.omega_size, &inner)?;
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let a = p1.norm_value(&fs[0])?;
        let b = p2.norm_value(&fs[0])?;
        Ok(-(a - b).abs() / a.max(f64::MIN_POSITIVE))
    };
    TrialSpec {
        id: "factor_equality",
        mode: "disjoint_union".into(),
        k: h1.k(),
        samplings: vec![Sampling::Complex],
        probability: false,
        expected_to_hold: true,
        exploration: false,
        notes: vec!["margin = -|rel. difference|".into()],
    }
    .run(cfg, &margin)
}

fn pointwise_power_sum(fs: &[GridFunction], q: f64) -> Result<GridFunction> {
    let mut acc = fs[0].map(|z| Complex64::new(z.norm().powf(q), 0.0))?;
    for f in &fs[1..] {
        acc = acc.zip_with(f, |a, z| a + z.norm().powf(q))?;
    }
    acc.map(|a| Complex64::new(a.re.powf(1.0 / q), 0.0))
}

/// `(sum ||f_i||^{|H|})^{1/|H|} <= ||(sum |f_i|^{|H|})^{1/|H|}||_H`.
pub fn verify_lattice_concavity(h: &HypergraphPair, count: usize, cfg: &TrialConfig) -> Result<InequalityReport> {
    lattice(h, count, cfg, true)
}

/// `||(sum |f_i|^s)^{1/s}||_H <= (sum ||f_i||^s)^{1/s}` for Type I `H`
/// with parameter `s`.
pub fn verify_lattice_convexity(h: &HypergraphPair, count: usize, cfg: &TrialConfig) -> Result<InequalityReport> {
    lattice(h, count, cfg, false)
}

fn lattice(h: &HypergraphPair, count: usize, cfg: &TrialConfig, concave: bool) -> Result<InequalityReport> {
    if count == 0 {
        return Err(Error::InvalidArgument("need at least one function".into()));
    }
    let s = type_one_parameter(h)?;
    let q = if concave { h.size() } else { s };
    let inner = cfg.inner_engine();
    let prepared = PreparedPair::new(h, cfg.omega_size, &inner)?;
    let margin = |fs: &[GridFunction]| -> Result<f64> {
        let mut sum = 0.0;
        for f in fs {
            sum += prepared.norm_value(f)?.powf(q);
        }
        let of_norms = sum.powf(1.0 / q);
        let of_sum = prepared.norm_value(&pointwise_power_sum(fs, q)?)?;
        Ok(if concave {
            relative_margin(of_norms, of_sum)
        } else {
            relative_margin(of_sum, of_norms)
        })
    };
    TrialSpec {
        id: if concave { "lattice_concavity" } else { "lattice_convexity" },
        mode: format!("q={q}"),
        k: h.k(),
        samplings: vec![Sampling::Nonnegative; count],
        probability: false,
        expected_to_hold: true,
        exploration: false,
        notes: vec![format!("{count} functions; margin = 1 - LHS/RHS")],
    }
    .run(cfg, &margin)
}
