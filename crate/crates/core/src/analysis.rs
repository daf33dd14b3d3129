//! Necessary-condition screen for semi-norming pairs.
//!
//! A semi-norming pair must be of one of two shapes: Type I (`alpha = beta =
//! s/2` on the support, `s >= 1`) or Type II (`{alpha, beta} = {0, 1}` on the
//! support). It must also be isomorphic to its conjugate, and every projection
//! onto a subset of axes must pass the same tests. Sub-boxes of a connected
//! semi-norming pair may not carry more than their share of `|H|`.
//!
//! Passing every check means "consistent with semi-norming", never a proof.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::pair::{factorize, isomorphic, HypergraphPair};

pub const TOL: f64 = 1e-9;
pub const DEFAULT_SPREADING_BUDGET: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type")]
pub enum Verdict {
    TypeI { s: f64 },
    TypeII,
    NotSemiNorming,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CellRef {
    pub omega: Vec<usize>,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    EmptySupport,
    /// A cell whose weights fit neither shape, or whose parameter is too small.
    Cell(CellRef),
    /// Two cells with `alpha = beta` but different values.
    CellPair { first: CellRef, second: CellRef },
    Vertex {
        axis: usize,
        vertex: usize,
        alpha_sum: f64,
        beta_sum: f64,
    },
    NoConjugateIsomorphism,
    SubBox {
        component: usize,
        boxes: Vec<Vec<usize>>,
        ratio: f64,
        bound: f64,
    },
    Projection {
        axes: Vec<usize>,
        check: String,
        inner: Box<Witness>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationResult {
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ClassificationResult {
    pub fn is_candidate(&self) -> bool {
        !matches!(self.verdict, Verdict::NotSemiNorming)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Largest `sum(dims)` of a component whose sub-boxes are enumerated.
    pub spreading_budget: usize,
    /// Sizes of the axis subsets `S` whose projections are screened.
    /// `None` screens every proper nonempty subset.
    pub projection_sizes: Option<Vec<usize>>,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            spreading_budget: DEFAULT_SPREADING_BUDGET,
            projection_sizes: Some(vec![1, 2]),
        }
    }
}

/// Support shape per the Type I / Type II dichotomy.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    TypeI { s: f64 },
    TypeII,
}

fn cell_ref(e: &crate::pair::Entry<'_>) -> CellRef {
    CellRef {
        omega: e.omega.0.clone(),
        alpha: e.alpha,
        beta: e.beta,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= TOL
}

/// Decides which shape the support has, or returns a cell fitting neither.
pub fn support_shape(h: &HypergraphPair) -> std::result::Result<Shape, Witness> {
    let entries = h.entries();
    let Some(first) = entries.first() else {
        return Err(Witness::EmptySupport);
    };
    if close(first.alpha, first.beta) {
        let v = first.alpha;
        for e in &entries {
            if !close(e.alpha, e.beta) {
                return Err(Witness::Cell(cell_ref(e)));
            }
            if !close(e.alpha, v) {
                return Err(Witness::CellPair {
                    first: cell_ref(first),
                    second: cell_ref(e),
                });
            }
        }
        Ok(Shape::TypeI { s: 2.0 * v })
    } else {
        let binary = |e: &crate::pair::Entry<'_>| {
            (close(e.alpha, 0.0) && close(e.beta, 1.0)) || (close(e.alpha, 1.0) && close(e.beta, 0.0))
        };
        match entries.iter().find(|e| !binary(e)) {
            Some(e) => Err(Witness::Cell(cell_ref(e))),
            None => Ok(Shape::TypeII),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisDegrees {
    /// `(sum alpha, sum beta)` over the fiber of each vertex.
    pub sums: Vec<(f64, f64)>,
    pub regular: bool,
    pub d: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub axes: Vec<AxisDegrees>,
    /// Every axis has one common value `d_i` for both sums at every vertex.
    pub regular: bool,
    /// First vertex breaking regularity.
    pub witness: Option<Witness>,
}

pub fn degree_profile(h: &HypergraphPair) -> DegreeProfile {
    let mut witness = None;
    let axes: Vec<AxisDegrees> = h
        .fiber_sums()
        .into_iter()
        .enumerate()
        .map(|(axis, sums)| {
            let d = sums[0].0;
            let bad = sums
                .iter()
                .position(|&(a, b)| !(close(a, d) && close(b, d)));
            if let (Some(v), None) = (bad, &witness) {
                witness = Some(Witness::Vertex {
                    axis,
                    vertex: v,
                    alpha_sum: sums[v].0,
                    beta_sum: sums[v].1,
                });
            }
            AxisDegrees {
                regular: bad.is_none(),
                d: bad.is_none().then_some(d),
                sums,
            }
        })
        .collect();
    DegreeProfile {
        regular: axes.iter().all(|a| a.regular),
        axes,
        witness,
    }
}

/// Degree condition implied by screening each one-axis projection: on every
/// axis, the vertices of nonzero degree either all carry `alpha = beta = d_i`,
/// or each carries `{alpha, beta} = {0, 1}`.
fn degree_condition(h: &HypergraphPair) -> Option<Witness> {
    for (axis, sums) in h.fiber_sums().into_iter().enumerate() {
        let live: Vec<(usize, (f64, f64))> = sums
            .iter()
            .copied()
            .enumerate()
            .filter(|(_, (a, b))| !(close(*a, 0.0) && close(*b, 0.0)))
            .collect();
        let Some(&(_, (a0, b0))) = live.first() else {
            continue;
        };
        let bad = if close(a0, b0) {
            live.iter().find(|(_, (a, b))| !(close(*a, a0) && close(*b, a0)))
        } else {
            live.iter().find(|(_, (a, b))| {
                !((close(*a, 0.0) && close(*b, 1.0)) || (close(*a, 1.0) && close(*b, 0.0)))
            })
        };
        if let Some(&(v, (a, b))) = bad {
            return Some(Witness::Vertex {
                axis,
                vertex: v,
                alpha_sum: a,
                beta_sum: b,
            });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpreadingReport {
    pub passed: bool,
    /// `|H| / (sum |V_i| - 1)`; `None` when the denominator vanishes.
    pub bound: Option<f64>,
    pub max_ratio: Option<f64>,
    pub worst_box: Option<Vec<Vec<usize>>>,
}

/// Enumerates every sub-box `W_1 x .. x W_k` and compares
/// `|H'| / (sum |W_i| - 1)` against `|H| / (sum |V_i| - 1)`.
pub fn check_spreading(h: &HypergraphPair) -> Result<SpreadingReport> {
    check_spreading_with_budget(h, DEFAULT_SPREADING_BUDGET)
}

pub fn check_spreading_with_budget(h: &HypergraphPair, budget: usize) -> Result<SpreadingReport> {
    let total = h.total_dims();
    if total > budget {
        return Err(Error::BudgetExceeded {
            what: "sub-box enumeration (sum of dims)",
            needed: total as f64,
            budget: budget as f64,
            best_cost: total as f64,
        });
    }
    if total <= 1 {
        return Ok(SpreadingReport {
            passed: true,
            bound: None,
            max_ratio: None,
            worst_box: None,
        });
    }
    let bound = h.size() / (total as f64 - 1.0);
    let dims = h.dims().to_vec();
    let cells: Vec<(Vec<usize>, f64)> = h
        .entries()
        .iter()
        .map(|e| (e.omega.0.clone(), e.alpha.abs() + e.beta.abs()))
        .collect();
    let k = dims.len();

    // Best (ratio, masks) for each first-axis mask; the first maximum in
    // lexicographic mask order wins, independent of thread scheduling.
    let per_first: Vec<Option<(f64, Vec<u32>)>> = (1u32..(1 << dims[0]))
        .into_par_iter()
        .map(|m0| {
            let mut masks = vec![1u32; k];
            masks[0] = m0;
            let mut best: Option<(f64, Vec<u32>)> = None;
            loop {
                let count: u32 = masks.iter().map(|m| m.count_ones()).sum();
                if count > 1 {
                    let size: f64 = cells
                        .iter()
                        .filter(|(o, _)| o.iter().zip(&masks).all(|(c, m)| m >> c & 1 == 1))
                        .map(|(_, w)| w)
                        .sum();
                    let ratio = size / (count as f64 - 1.0);
                    if best.as_ref().is_none_or(|(r, _)| ratio > *r) {
                        best = Some((ratio, masks.clone()));
                    }
                }
                // Advance masks[1..] through all nonempty subsets.
                let mut pos = k;
                loop {
                    if pos == 1 {
                        return best;
                    }
                    pos -= 1;
                    masks[pos] += 1;
                    if masks[pos] < (1 << dims[pos]) {
                        break;
                    }
                    masks[pos] = 1;
                }
            }
        })
        .collect();
    let mut best: Option<(f64, Vec<u32>)> = None;
    for cand in per_first.into_iter().flatten() {
        if best.as_ref().is_none_or(|(r, _)| cand.0 > *r) {
            best = Some(cand);
        }
    }
    let (ratio, masks) = best.expect("at least one sub-box with two vertices");
    let boxes = masks
        .iter()
        .zip(&dims)
        .map(|(m, &d)| (0..d).filter(|v| m >> v & 1 == 1).collect())
        .collect();
    Ok(SpreadingReport {
        passed: ratio <= bound + TOL,
        bound: Some(bound),
        max_ratio: Some(ratio),
        worst_box: Some(boxes),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateAxes {
    /// Axes on which every vertex has total degree `sum (alpha + beta) = 1`.
    pub axes: Vec<usize>,
    /// `H` projected onto the remaining axes, when any remain.
    pub complement: Option<HypergraphPair>,
}

pub fn detect_degenerate_axes(h: &HypergraphPair) -> DegenerateAxes {
    let axes: Vec<usize> = h
        .fiber_sums()
        .iter()
        .enumerate()
        .filter(|(_, sums)| sums.iter().all(|(a, b)| close(a + b, 1.0)))
        .map(|(i, _)| i)
        .collect();
    let rest: Vec<usize> = (0..h.k()).filter(|i| !axes.contains(i)).collect();
    let complement = (!rest.is_empty()).then(|| h.project(&rest).expect("valid axis subset"));
    DegenerateAxes { axes, complement }
}

fn spreading_per_component(
    h: &HypergraphPair,
    budget: usize,
    notes: &mut Vec<String>,
    label: &str,
) -> Option<Witness> {
    for (ci, comp) in factorize(h).components.iter().enumerate() {
        match check_spreading_with_budget(&comp.pair, budget) {
            Ok(r) if !r.passed => {
                // Report the sub-box in the original vertex labels.
                let boxes = r
                    .worst_box
                    .unwrap_or_default()
                    .iter()
                    .zip(&comp.vertices)
                    .map(|(w, labels)| w.iter().map(|&v| labels[v]).collect())
                    .collect();
                return Some(Witness::SubBox {
                    component: ci,
                    boxes,
                    ratio: r.max_ratio.unwrap_or(f64::NAN),
                    bound: r.bound.unwrap_or(f64::NAN),
                });
            }
            Ok(_) => {}
            Err(_) => notes.push(format!(
                "{label}: component {ci} has {} vertices, above the enumeration budget {budget}; spreading not checked",
                comp.pair.total_dims()
            )),
        }
    }
    None
}

/// Runs shape, parameter, and self-conjugacy checks; returns failures.
fn core_checks(h: &HypergraphPair) -> Vec<(&'static str, Option<Witness>)> {
    let mut out = Vec::new();
    match support_shape(h) {
        Err(w) => out.push(("type_dichotomy", Some(w))),
        Ok(shape) => {
            out.push(("type_dichotomy", None));
            if let Shape::TypeI { s } = shape {
                let w = (s < 1.0 - TOL).then(|| {
                    let e = &h.entries()[0];
                    Witness::Cell(cell_ref(e))
                });
                out.push(("parameter_at_least_one", w));
            }
        }
    }
    let conj_ok = isomorphic(h, &h.conjugate());
    out.push(("self_conjugate", (!conj_ok).then_some(Witness::NoConjugateIsomorphism)));
    out
}

fn axis_subsets(k: usize, sizes: &Option<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        let s: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
        if s.len() == k {
            continue;
        }
        if sizes.as_ref().is_none_or(|z| z.contains(&s.len())) {
            out.push(s);
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

pub fn classify(h: &HypergraphPair) -> Result<ClassificationResult> {
    classify_with(h, &ClassifyOptions::default())
}

pub fn classify_with(h: &HypergraphPair, opts: &ClassifyOptions) -> Result<ClassificationResult> {
    h.require_nonnegative()?;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let mut push = |name: &str, witness: Option<Witness>| {
        checks.push(Check {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        })
    };

    if h.is_zero() {
        push("support_nonempty", Some(Witness::EmptySupport));
        return Ok(ClassificationResult {
            verdict: Verdict::NotSemiNorming,
            checks,
            notes: vec!["the pair has empty support and |H| = 0".into()],
        });
    }
    push("support_nonempty", None);

    let shape = support_shape(h).ok();
    for (name, w) in core_checks(h) {
        push(name, w);
    }
    push("degree_regularity", degree_condition(h));
    if !degree_profile(h).regular {
        notes.push(
            "some vertex fails the strict equal-degree condition; the screen only requires it on vertices of nonzero degree of each one-axis projection shape"
                .into(),
        );
    }
    let f = factorize(h);
    if !f.isolated.is_empty() {
        notes.push(format!(
            "{} isolated vertices ignored by the sub-box test",
            f.isolated.len()
        ));
    }
    push(
        "spreading",
        spreading_per_component(h, opts.spreading_budget, &mut notes, "pair"),
    );

    for axes in axis_subsets(h.k(), &opts.projection_sizes) {
        let p = h.project(&axes)?;
        let mut fails: Vec<(&str, Witness)> = core_checks(&p)
            .into_iter()
            .filter_map(|(n, w)| w.map(|w| (n, w)))
            .collect();
        let label = format!("projection {axes:?}");
        if let Some(w) = spreading_per_component(&p, opts.spreading_budget, &mut notes, &label) {
            fails.push(("spreading", w));
        }
        let name = format!("projection_{}", axes.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("_"));
        match fails.into_iter().next() {
            Some((check, w)) => push(
                &name,
                Some(Witness::Projection {
                    axes: axes.clone(),
                    check: check.to_string(),
                    inner: Box::new(w),
                }),
            ),
            None => push(&name, None),
        }
    }

    let all_pass = checks.iter().all(|c| c.passed);
    let verdict = match (all_pass, shape) {
        (true, Some(Shape::TypeI { s })) => Verdict::TypeI { s },
        (true, Some(Shape::TypeII)) => Verdict::TypeII,
        _ => Verdict::NotSemiNorming,
    };
    if verdict != Verdict::NotSemiNorming {
        notes.push("all necessary conditions hold; this does not prove the pair is norming".into());
    }
    Ok(ClassificationResult {
        verdict,
        checks,
        notes,
    })
}
