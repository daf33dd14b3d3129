//! Named pair families and classical reference formulas.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::engine::{DiscreteMeasureSpace, GridFunction};
use crate::error::{Error, Result};
use crate::pair::{HypergraphPair, Omega};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum NamedFamily {
    Lp { p: f64 },
    Gowers { k: usize },
    /// Trace norm `S_{2m}`; `exponent` is `2m`.
    Schatten { exponent: usize },
    Complete { p: f64, dims: Vec<usize> },
    DegenerateExtension { base: Box<NamedFamily>, extra_axes: usize },
    /// `2 U_2`: every weight of the Gowers `U_2` pair doubled.
    DoubledGowers2,
    /// Weights `sqrt(2)/2` on the diagonal of a 2x2 grid and `1/2` off it.
    Root2,
}

impl NamedFamily {
    pub fn build(&self) -> Result<HypergraphPair> {
        match self {
            NamedFamily::Lp { p } => make_lp(*p),
            NamedFamily::Gowers { k } => make_gowers(*k),
            NamedFamily::Schatten { exponent } => make_schatten(*exponent),
            NamedFamily::Complete { p, dims } => make_complete(*p, dims),
            NamedFamily::DegenerateExtension { base, extra_axes } => {
                Ok(make_degenerate_extension(&base.build()?, *extra_axes)?.pair)
            }
            NamedFamily::DoubledGowers2 => Ok(make_gowers(2)?.scale(2.0)),
            NamedFamily::Root2 => make_root2_pair(),
        }
    }
}

/// `L_p`: one axis, one vertex, `alpha = beta = p/2`. Requires `p >= 1`.
pub fn make_lp(p: f64) -> Result<HypergraphPair> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "L_p needs p >= 1 for norm use, got {p}; see make_lp_experimental"
        )));
    }
    lp_unchecked(p)
}

/// `L_p` for any `p > 0`, with a warning when `p < 1` (not a norm there).
pub fn make_lp_experimental(p: f64) -> Result<(HypergraphPair, Option<String>)> {
    if !(p.is_finite() && p > 0.0) {
        return Err(Error::InvalidArgument(format!("L_p needs p > 0, got {p}")));
    }
    let warning = (p < 1.0).then(|| format!("p = {p} < 1: the triangle inequality fails"));
    Ok((lp_unchecked(p)?, warning))
}

fn lp_unchecked(p: f64) -> Result<HypergraphPair> {
    HypergraphPair::from_entries(vec![1], [(Omega::new([0]), p / 2.0)], [(Omega::new([0]), p / 2.0)])
}

/// Gowers `U_k`: dims `[2; k]`, `alpha` = parity of the coordinates, `beta = 1 - alpha`.
pub fn make_gowers(k: usize) -> Result<HypergraphPair> {
    if k == 0 {
        return Err(Error::InvalidArgument("U_k needs k >= 1".into()));
    }
    HypergraphPair::from_fn(vec![2; k], |w| {
        let a = (w.iter().sum::<usize>() % 2) as f64;
        (a, 1.0 - a)
    })
}

/// Schatten `S_{2m}` from its exponent `2m`: dims `[m, m]`, `alpha(i,i) = 1`,
/// `beta(i,j) = 1` iff `i = j + 1 (mod m)`.
pub fn make_schatten(exponent: usize) -> Result<HypergraphPair> {
    if exponent == 0 || !exponent.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "Schatten pairs exist for even exponents 2m >= 2, got {exponent}"
        )));
    }
    let m = exponent / 2;
    HypergraphPair::from_fn(vec![m, m], |w| {
        let a = if w[0] == w[1] { 1.0 } else { 0.0 };
        let b = if w[0] == (w[1] + 1) % m { 1.0 } else { 0.0 };
        (a, b)
    })
}

/// `K = (p, p)` on the full grid. Requires `p >= 1/2`.
pub fn make_complete(p: f64, dims: &[usize]) -> Result<HypergraphPair> {
    if !(p.is_finite() && p >= 0.5) {
        return Err(Error::InvalidArgument(format!("complete pairs need p >= 1/2, got {p}")));
    }
    HypergraphPair::from_fn(dims.to_vec(), |_| (p, p))
}

/// Two-axis pair with `|f|^sqrt(2)` on the diagonal and `|f|` off it.
pub fn make_root2_pair() -> Result<HypergraphPair> {
    let h = std::f64::consts::SQRT_2 / 2.0;
    HypergraphPair::from_fn(vec![2, 2], |w| if w[0] == w[1] { (h, h) } else { (0.5, 0.5) })
}

/// A pair `G` on `k + k'` axes whose norm is the base norm of `f` averaged
/// over the extra axes.
#[derive(Clone, Debug, PartialEq)]
pub struct DegenerateExtension {
    pub pair: HypergraphPair,
    pub base: HypergraphPair,
    /// Indices of the added axes in `pair` (0-based).
    pub new_axes: Vec<usize>,
    /// Vertex `j` of every added axis stands for `(labels[j].0, labels[j].1)`:
    /// a support cell of the base and an index in `0..2m`.
    pub labels: Vec<(Omega, usize)>,
    pub m: usize,
}

/// Requires a Type I base with `alpha = beta = m` on its support, `m` a
/// positive integer. Each added axis has `|supp alpha| * 2m` vertices.
pub fn make_degenerate_extension(base: &HypergraphPair, extra_axes: usize) -> Result<DegenerateExtension> {
    if extra_axes == 0 {
        return Err(Error::InvalidArgument("need at least one added axis".into()));
    }
    let entries = base.entries();
    let first = entries
        .first()
        .ok_or_else(|| Error::InvalidArgument("base pair has empty support".into()))?;
    let m_f = first.alpha;
    let type_one = entries
        .iter()
        .all(|e| (e.alpha - m_f).abs() <= 1e-9 && (e.beta - m_f).abs() <= 1e-9);
    if !type_one {
        return Err(Error::InvalidArgument(
            "base must be Type I: alpha = beta, constant on the support".into(),
        ));
    }
    if (m_f - m_f.round()).abs() > 1e-9 || m_f.round() < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "base parameter {} is not an even integer",
            2.0 * m_f
        )));
    }
    let m = m_f.round() as usize;
    let k = base.k();
    let labels: Vec<(Omega, usize)> = entries
        .iter()
        .flat_map(|e| (0..2 * m).map(move |i| (e.omega.clone(), i)))
        .collect();
    let new_size = labels.len();
    let mut dims = base.dims().to_vec();
    dims.extend(std::iter::repeat_n(new_size, extra_axes));
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for (j, (psi, i)) in labels.iter().enumerate() {
        let mut coords = psi.0.clone();
        coords.extend(std::iter::repeat_n(j, extra_axes));
        if *i < m {
            alpha.push((Omega(coords), 1.0));
        } else {
            beta.push((Omega(coords), 1.0));
        }
    }
    let pair = HypergraphPair::from_entries(dims, alpha, beta)?;
    Ok(DegenerateExtension {
        pair,
        base: base.clone(),
        new_axes: (k..k + extra_axes).collect(),
        labels,
        m,
    })
}

impl DegenerateExtension {
    /// `F(x_1..x_k) = integral f(x_1..x_{k+k'}) dx_{k+1} .. dx_{k+k'}`.
    pub fn average_out(&self, f: &GridFunction) -> Result<GridFunction> {
        average_trailing_axes(f, self.new_axes.len())
    }
}

/// Integrates out the last `r` coordinates of `f` against its measure.
pub fn average_trailing_axes(f: &GridFunction, r: usize) -> Result<GridFunction> {
    if r >= f.k() {
        return Err(Error::DimensionMismatch(format!(
            "cannot integrate out {r} of {} axes",
            f.k()
        )));
    }
    let n = f.n();
    let w = f.space().weights();
    let block = n.pow(r as u32);
    let mut tail_weights = vec![1.0; block];
    for (t, tw) in tail_weights.iter_mut().enumerate() {
        let mut rem = t;
        for _ in 0..r {
            *tw *= w[rem % n];
            rem /= n;
        }
    }
    let values = f
        .values()
        .chunks(block)
        .map(|chunk| chunk.iter().zip(&tail_weights).map(|(z, tw)| z * tw).sum())
        .collect();
    GridFunction::new(f.space().clone(), f.k() - r, values)
}

/// `(sum_i w_i |f_i|^p)^(1/p)` for a one-axis function.
pub fn lp_oracle(f: &GridFunction, p: f64) -> Result<f64> {
    if f.k() != 1 {
        return Err(Error::DimensionMismatch("the L_p formula needs k = 1".into()));
    }
    let s: f64 = f
        .values()
        .iter()
        .zip(f.space().weights())
        .map(|(z, w)| w * z.norm().powf(p))
        .sum();
    Ok(s.powf(1.0 / p))
}

fn matrix_of(f: &GridFunction) -> Result<Vec<Vec<Complex64>>> {
    if f.k() != 2 {
        return Err(Error::DimensionMismatch("trace norms need a two-axis function".into()));
    }
    if f.space().weights().iter().any(|&w| w != 1.0) {
        return Err(Error::InvalidArgument(
            "the trace formula is stated for counting measure".into(),
        ));
    }
    let n = f.n();
    Ok((0..n).map(|i| f.values()[i * n..(i + 1) * n].to_vec()).collect())
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// `Tr((A A*)^m)^(1/2m)` by repeated multiplication; counting measure only.
pub fn schatten_oracle(f: &GridFunction, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let a = matrix_of(f)?;
    let n = a.len();
    let a_star: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect();
    let b = mat_mul(&a, &a_star);
    let mut p = b.clone();
    for _ in 1..m {
        p = mat_mul(&p, &b);
    }
    let tr: Complex64 = (0..n).map(|i| p[i][i]).sum();
    Ok(tr.re.max(0.0).powf(1.0 / (2 * m) as f64))
}

/// Same quantity from the eigenvalues of the Hermitian matrix `A A*`.
pub fn schatten_oracle_eigen(f: &GridFunction, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be >= 1".into()));
    }
    let a = matrix_of(f)?;
    let n = a.len();
    let mat = DMatrix::from_fn(n, n, |i, j| a[i][j]);
    let b = &mat * mat.adjoint();
    let eig = b.symmetric_eigen();
    let s: f64 = eig.eigenvalues.iter().map(|l| l.max(0.0).powi(m as i32)).sum();
    Ok(s.powf(1.0 / (2 * m) as f64))
}

/// Counting-measure space of size `n` with a matrix as a two-axis function.
pub fn matrix_function(rows: &[Vec<Complex64>]) -> Result<GridFunction> {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix must be square".into()));
    }
    let space = DiscreteMeasureSpace::counting(n)?;
    GridFunction::new(space, 2, rows.iter().flatten().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::norm;
    use crate::pair::{isomorphic, is_minimal};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sizes() {
        assert_eq!(make_gowers(2).unwrap().size(), 4.0);
        assert_eq!(make_schatten(4).unwrap().size(), 4.0);
        assert_eq!(make_lp(3.0).unwrap().size(), 3.0);
        assert_eq!(make_complete(0.5, &[2, 3]).unwrap().size(), 6.0);
        assert!(make_lp(0.5).is_err());
        assert!(make_lp_experimental(0.5).unwrap().1.is_some());
        assert!(make_schatten(3).is_err());
        assert!(make_complete(0.25, &[2]).is_err());
    }

    #[test]
    fn gowers_structure() {
        for k in 1..=3 {
            let u = make_gowers(k).unwrap();
            assert!(isomorphic(&u, &u.conjugate()));
            assert!(is_minimal(&u).minimal);
        }
        let u1 = make_gowers(1).unwrap();
        let t = u1.lift(2, &[0]).unwrap().tensor(&u1.lift(2, &[1]).unwrap()).unwrap();
        assert!(isomorphic(&make_gowers(2).unwrap(), &t));
    }

    #[test]
    fn identity_under_s4() {
        let id = matrix_function(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]).unwrap();
        let v = norm(&make_schatten(4).unwrap(), &id).unwrap().value;
        assert!((v - 2f64.powf(0.25)).abs() < 1e-14);
        assert!((schatten_oracle(&id, 2).unwrap() - v).abs() < 1e-14);
    }

    #[test]
    fn oracle_needs_counting_measure() {
        let s = DiscreteMeasureSpace::uniform(2).unwrap();
        let f = GridFunction::constant(s, 2, c(1.0, 0.0)).unwrap();
        assert!(schatten_oracle(&f, 2).is_err());
    }

    #[test]
    fn degenerate_extension_of_l2() {
        let g = make_degenerate_extension(&make_lp(2.0).unwrap(), 1).unwrap();
        assert_eq!(g.pair.dims(), &[1, 2]);
        assert_eq!(g.new_axes, vec![1]);
        assert_eq!(g.pair.size(), 2.0);
        assert!(make_degenerate_extension(&make_lp(3.0).unwrap(), 1).is_err());
        assert!(make_degenerate_extension(&make_gowers(2).unwrap(), 1).is_err());

        let s = DiscreteMeasureSpace::uniform(3).unwrap();
        let f = GridFunction::from_fn(s, 2, |i| c(i[0] as f64 - 1.0, i[1] as f64)).unwrap();
        let big = norm(&g.pair, &f).unwrap().value;
        let small = norm(&g.base, &g.average_out(&f).unwrap()).unwrap().value;
        assert!((big - small).abs() < 1e-12);
    }
}
