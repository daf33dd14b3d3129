//! Norms defined by weighted hypergraph pairs on finite measure spaces.
//!
//! A hypergraph pair `H = (alpha, beta)` over a product grid `V_1 x ... x V_k`
//! assigns to a function `f: Omega^k -> C` the quantity
//! `||f||_H = (integral f^H)^(1/|H|)`, where `f^H` multiplies
//! `f^alpha(w) * conj(f)^beta(w)` over every cell `w` of the grid.
//!
//! The crate is organised as:
//!
//! * [`pair`]: value-semantics algebra of pairs (arithmetic, unions, tensor
//!   products, projections, isomorphism, factorization, minimality).
//! * [`engine`]: exact evaluation of `integral f^H` by brute force and by a
//!   variable-elimination contraction plan.
//! * [`catalog`]: the named families (L_p, Gowers U_k, Schatten S_2m,
//!   complete pairs, degenerate extensions) and classical oracles.
//! * [`analysis`]: necessary-condition screen for semi-norming pairs.
//! * [`lab`]: seeded randomized verification of Hölder-type inequalities and
//!   the triangle-violation searcher.
//! * [`geometry`]: two-point constants, smoothness/convexity constants and
//!   moduli, Hanner and Clarkson checks, the diagonal embedding.
//! * [`cli`]: the `hypernorm` command-line front end.

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod lab;
pub mod pair;
pub mod rng;
mod util;

pub use engine::{
    integrate, integrate_brute, norm, power_kernel, ContractionPlan, DiscreteMeasureSpace,
    EngineConfig, GridFunction, NormValue,
};
pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use pair::{HypergraphPair, Omega};
