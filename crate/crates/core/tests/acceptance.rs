//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Reference values are computed here, independently of
//! the library's own oracles.

use std::time::{Duration, Instant};

use hypernorm::analysis::{classify, Verdict};
use hypernorm::catalog::{make_complete, make_gowers, make_lp, make_root2_pair, make_schatten};
use hypernorm::engine::{self, tensor_function, DiscreteMeasureSpace, EngineConfig, GridFunction, Part};
use hypernorm::geometry::{self, ConstantKind, KKind, ModulusKind};
use hypernorm::lab::{self, HolderMode, MonotonicityMode, SearchConfig, Side, TrialConfig};
use hypernorm::pair::{HypergraphPair, Omega};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SCHATTEN_TOL: f64 = 1e-10;
const SCHATTEN_LIMIT: Duration = Duration::from_secs(10);
const LP_TOL: f64 = 1e-12;
const LP_LIMIT: Duration = Duration::from_secs(5);
const U2_S4_TOL: f64 = 1e-10;
const GAP_MIN: f64 = 1e-6;
const SEARCH_RESTARTS: usize = 10_000;
const SEARCH_LIMIT: Duration = Duration::from_secs(60);
const MARGIN_TOL: f64 = 1e-9;
const LAB_TRIALS: usize = 1000;
const LAB_LIMIT: Duration = Duration::from_secs(120);
const FIGURE_TOL: f64 = 1e-3;
const FIGURE_P: [f64; 5] = [1.5, 2.0, 3.0, 4.0, 6.0];
const TWO_POINT_SAMPLES: usize = 10_000;
const K_REACH: f64 = 0.02;
const K_CEILING: f64 = 1e-6;
const MODULUS_TOL: f64 = 1e-3;
const SIGN_M: usize = 64;
const SIGN_BOUND: f64 = 0.35;
const SIGN_SEEDS: u64 = 100;
const SIGN_REQUIRED: usize = 95;
const PLAN_TOL: f64 = 1e-9;
const THREAD_TOL: f64 = 1e-12;
const TENSOR_TOL: f64 = 1e-10;

struct Line {
    ok: bool,
    detail: String,
}

fn line(ok: bool, detail: impl Into<String>) -> Line {
    Line { ok, detail: detail.into() }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform on the square `[-1, 1]^2`.
fn entry(r: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

fn random_matrix(r: &mut ChaCha8Rng, n: usize) -> Vec<Vec<Complex64>> {
    (0..n).map(|_| (0..n).map(|_| entry(r)).collect()).collect()
}

fn as_function(a: &[Vec<Complex64>]) -> GridFunction {
    let n = a.len();
    let values = a.iter().flatten().copied().collect();
    GridFunction::new(DiscreteMeasureSpace::counting(n).unwrap(), 2, values).unwrap()
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|l| a[i][l] * b[l][j]).sum()).collect())
        .collect()
}

/// `Tr((A A*)^m)`.
fn trace_power(a: &[Vec<Complex64>], m: usize) -> f64 {
    let n = a.len();
    let adj: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect();
    let b = mat_mul(a, &adj);
    let mut p = b.clone();
    for _ in 1..m {
        p = mat_mul(&p, &b);
    }
    (0..n).map(|i| p[i][i].re).sum()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

fn criterion_1() -> Line {
    let start = Instant::now();
    let mut r = rng(1);
    let mut worst = 0.0f64;
    for m in [2usize, 3] {
        let h = make_schatten(2 * m).unwrap();
        for i in 0..200 {
            let a = random_matrix(&mut r, 2 + i % 4);
            let got = engine::norm(&h, &as_function(&a)).unwrap().value;
            let want = trace_power(&a, m).powf(1.0 / (2 * m) as f64);
            worst = worst.max(rel(got, want));
        }
    }
    let t = start.elapsed();
    line(
        worst <= SCHATTEN_TOL && t < SCHATTEN_LIMIT,
        format!("Schatten S_4/S_6 vs trace formula, 400 matrices: max rel err {worst:.2e} (tol {SCHATTEN_TOL:.0e}), {t:.2?} (limit {SCHATTEN_LIMIT:?})"),
    )
}

fn criterion_2() -> Line {
    let start = Instant::now();
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for p in [1.0, 2.0, 3.5, 4.0] {
        let h = make_lp(p).unwrap();
        for _ in 0..200 {
            let n = r.random_range(1..=16);
            let w: Vec<f64> = (0..n).map(|_| r.random_range(0.1..2.0)).collect();
            let v: Vec<Complex64> = (0..n).map(|_| entry(&mut r)).collect();
            let want = w.iter().zip(&v).map(|(w, z)| w * z.norm().powf(p)).sum::<f64>().powf(1.0 / p);
            let f = GridFunction::new(DiscreteMeasureSpace::new(w).unwrap(), 1, v).unwrap();
            worst = worst.max(rel(engine::norm(&h, &f).unwrap().value, want));
        }
    }
    let t = start.elapsed();
    line(
        worst <= LP_TOL && t < LP_LIMIT,
        format!("L_p vs weighted sum, p in {{1,2,3.5,4}}, 800 functions: max rel err {worst:.2e} (tol {LP_TOL:.0e}), {t:.2?} (limit {LP_LIMIT:?})"),
    )
}

fn criterion_3() -> Line {
    let mut r = rng(3);
    let h = make_gowers(2).unwrap();
    let mut worst = 0.0f64;
    for i in 0..100 {
        let a = random_matrix(&mut r, 1 + i % 4);
        let got = engine::norm(&h, &as_function(&a)).unwrap().value.powi(4);
        worst = worst.max(rel(got, trace_power(&a, 2)));
    }
    line(
        worst <= U2_S4_TOL,
        format!("||f||_U2^4 = Tr((FF*)^2), 100 matrices: max rel err {worst:.2e} (tol {U2_S4_TOL:.0e})"),
    )
}

fn criterion_4() -> Line {
    let type_i = |s: f64| move |v: &Verdict| matches!(v, Verdict::TypeI { s: t } if (t - s).abs() < 1e-9);
    let mut cases: Vec<(String, HypergraphPair, Box<dyn Fn(&Verdict) -> bool>)> = Vec::new();
    for p in [1.0, 2.0, 3.0] {
        cases.push((format!("L_{p}"), make_lp(p).unwrap(), Box::new(type_i(p))));
    }
    for k in 1..=3 {
        cases.push((format!("U_{k}"), make_gowers(k).unwrap(), Box::new(|v: &Verdict| *v == Verdict::TypeII)));
    }
    for m in [2, 3] {
        cases.push((format!("S_{}", 2 * m), make_schatten(2 * m).unwrap(), Box::new(|v: &Verdict| *v == Verdict::TypeII)));
    }
    for (p, dims) in [(1.0, vec![2, 2]), (1.5, vec![2, 3]), (2.0, vec![1, 2, 2]), (0.5, vec![3, 3])] {
        cases.push((
            format!("K=({p},{p}) on {dims:?}"),
            make_complete(p, &dims).unwrap(),
            Box::new(type_i(2.0 * p)),
        ));
    }
    let not = |v: &Verdict| *v == Verdict::NotSemiNorming;
    cases.push(("3 S_4".into(), make_schatten(4).unwrap().scale(3.0), Box::new(not)));
    cases.push(("2 U_2".into(), make_gowers(2).unwrap().scale(2.0), Box::new(not)));
    cases.push(("sqrt2 pair".into(), make_root2_pair().unwrap(), Box::new(not)));
    let total = cases.len();
    let wrong: Vec<String> = cases
        .iter()
        .filter_map(|(name, h, want)| {
            let v = classify(h).unwrap().verdict;
            (!want(&v)).then(|| format!("{name} -> {v:?}"))
        })
        .collect();
    line(
        wrong.is_empty(),
        format!("classification, {} of {total} agree{}", total - wrong.len(), if wrong.is_empty() { String::new() } else { format!("; wrong: {}", wrong.join(", ")) }),
    )
}

fn criterion_5() -> Line {
    let cfg = SearchConfig {
        restarts: SEARCH_RESTARTS,
        seed: 7,
        omega_size: 2,
        ..SearchConfig::default()
    };
    let mut ok = true;
    let mut parts = Vec::new();
    let targets = [
        ("2U_2", make_gowers(2).unwrap().scale(2.0), true),
        ("sqrt2-pair", make_root2_pair().unwrap(), true),
        ("U_2", make_gowers(2).unwrap(), false),
        ("S_4", make_schatten(4).unwrap(), false),
        ("L_2", make_lp(2.0).unwrap(), false),
    ];
    for (name, h, want) in targets {
        let start = Instant::now();
        let r = lab::search_triangle_violation(&h, &cfg).unwrap();
        let t = start.elapsed();
        let found = r.violation.as_ref().map(|v| v.gap);
        let good = match (want, found) {
            (true, Some(gap)) => gap > GAP_MIN && t < SEARCH_LIMIT,
            (false, None) => true,
            _ => false,
        };
        ok &= good;
        let what = match found {
            Some(gap) => format!("gap {gap:.3e}"),
            None => format!("none (best rel {:.1e})", r.best_relative_gap),
        };
        parts.push(format!("{name}: {what} {t:.1?}{}", if good { "" } else { " <-" }));
    }
    line(ok, format!("triangle search, {SEARCH_RESTARTS} restarts, n=2: {}", parts.join("; ")))
}

fn one_sided(dims: &[usize], cells: Vec<(Omega, f64)>, alpha: bool) -> HypergraphPair {
    let none = Vec::new();
    if alpha {
        HypergraphPair::from_entries(dims.to_vec(), cells, none).unwrap()
    } else {
        HypergraphPair::from_entries(dims.to_vec(), none, cells).unwrap()
    }
}

fn criterion_6() -> Line {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    let mut failures = Vec::new();
    let mut runs = 0;
    let u2 = make_gowers(2).unwrap();
    let s4 = make_schatten(4).unwrap();
    let k22 = make_complete(1.5, &[2, 2]).unwrap();
    let mut record = |what: &str, r: lab::InequalityReport| {
        runs += 1;
        worst = worst.min(r.worst_margin);
        if r.worst_margin < -MARGIN_TOL || r.trials < LAB_TRIALS {
            failures.push(format!("{what} {:.2e}", r.worst_margin));
        }
    };
    for n in [2usize, 3] {
        let cfg = TrialConfig::new(LAB_TRIALS, 11 + n as u64, n);
        for (name, h) in [("U_2", &u2), ("S_4", &s4)] {
            for side in [Side::Alpha, Side::Beta] {
                let psi = if side == Side::Alpha { h.alpha_map() } else { h.beta_map() }.keys().next().unwrap().clone();
                record(&format!("first-holder {name} {side:?} n={n}"), lab::verify_first_holder(h, &psi, side, &cfg).unwrap());
            }
        }
        let singles: Vec<HypergraphPair> = u2
            .entries()
            .iter()
            .flat_map(|e| {
                let mut out = Vec::new();
                if e.alpha > 0.0 {
                    out.push(one_sided(u2.dims(), vec![(e.omega.clone(), e.alpha)], true));
                }
                if e.beta > 0.0 {
                    out.push(one_sided(u2.dims(), vec![(e.omega.clone(), e.beta)], false));
                }
                out
            })
            .collect();
        record(&format!("general-holder nonneg n={n}"), lab::verify_general_holder(&u2, &singles, HolderMode::Nonnegative, &cfg).unwrap());
        record(&format!("general-holder integer n={n}"), lab::verify_general_holder(&u2, &singles, HolderMode::Integer, &cfg).unwrap());
        let l4 = make_lp(4.0).unwrap();
        record(&format!("monotonicity nonneg n={n}"), lab::verify_norm_monotonicity(&l4, &make_lp(2.0).unwrap(), MonotonicityMode::Nonnegative, &cfg).unwrap());
        record(&format!("monotonicity type-one n={n}"), lab::verify_norm_monotonicity(&k22, &k22.scale(0.5), MonotonicityMode::TypeOne, &cfg).unwrap());
        record(&format!("monotonicity integer n={n}"), lab::verify_norm_monotonicity(&u2, &singles[0], MonotonicityMode::Integer, &cfg).unwrap());
        let cell = one_sided(&[2, 2], vec![(Omega::new(vec![0, 0]), 1.0)], true);
        record(&format!("gowers-cs n={n}"), lab::verify_gowers_cs(&cell, &Omega::new(vec![1, 1]), &cfg).unwrap());
        let u2_alpha = one_sided(&[2, 2], u2.alpha_map().iter().map(|(o, v)| (o.clone(), *v)).collect(), true);
        record(&format!("gowers-approx n={n}"), lab::verify_gowers_approx(&u2_alpha, &cfg).unwrap());
        record(&format!("factor-equality n={n}"), lab::verify_factor_equality(&k22, &cfg).unwrap());
        record(&format!("factor-equality L_3 n={n}"), lab::verify_factor_equality(&make_lp(3.0).unwrap(), &cfg).unwrap());
        record(&format!("concavity n={n}"), lab::verify_lattice_concavity(&k22, 3, &cfg).unwrap());
        record(&format!("convexity n={n}"), lab::verify_lattice_convexity(&k22, 3, &cfg).unwrap());
    }
    let t = start.elapsed();
    line(
        failures.is_empty() && t < LAB_LIMIT,
        format!(
            "inequality suite, {runs} runs x {LAB_TRIALS} trials at n in {{2,3}}: worst margin {worst:.2e} (tol -{MARGIN_TOL:.0e}), {t:.1?} (limit {LAB_LIMIT:?}){}",
            if failures.is_empty() { String::new() } else { format!("; failed: {}", failures.join(", ")) }
        ),
    )
}

fn criterion_7() -> Line {
    let mut worst = 0.0f64;
    for p in FIGURE_P {
        let c = geometry::two_point_constant(ConstantKind::C, 2.0, p).unwrap().value;
        let cs = geometry::two_point_constant(ConstantKind::CStar, 2.0, p).unwrap().value;
        worst = worst.max((c - 1f64.max((p - 1.0).sqrt())).abs());
        worst = worst.max((cs - 1f64.max((1.0 / (p - 1.0)).sqrt())).abs());
    }
    let mut bb_worst = f64::INFINITY;
    for (i, (p, q)) in [(1.5, 2.0), (2.0, 4.0), (1.2, 3.0), (3.0, 3.0)].into_iter().enumerate() {
        let r = geometry::check_bonami_beckner(p, q, &TrialConfig::new(TWO_POINT_SAMPLES, 70 + i as u64, 1)).unwrap();
        bb_worst = bb_worst.min(r.worst_margin);
    }
    line(
        worst <= FIGURE_TOL && bb_worst >= -MARGIN_TOL,
        format!("C(2,p), C*(2,p) at p in {FIGURE_P:?}: max err {worst:.2e} (tol {FIGURE_TOL:.0e}); two-point hypercontractivity, 4 x {TWO_POINT_SAMPLES} samples: worst margin {bb_worst:.2e}"),
    )
}

fn criterion_8() -> Line {
    let u2 = make_gowers(2).unwrap();
    let cfg = TrialConfig::new(LAB_TRIALS, 8, 2);
    let k = geometry::estimate_k(&u2, 2.0, 4.0, KKind::Smooth, &cfg).unwrap();
    let exact = 3f64.sqrt();
    let k_ok = k.directed_bound >= exact - K_REACH && k.directed_bound.max(k.sampled_bound) <= exact + K_CEILING;
    let hanner = geometry::check_hanner(&u2, &cfg).unwrap();
    let clarkson = geometry::check_clarkson(&u2, &cfg).unwrap();
    let grid = [0.25, 0.5, 1.0];
    let modulus = geometry::estimate_modulus(&make_lp(2.0).unwrap(), ModulusKind::Smoothness, &grid, &TrialConfig::new(LAB_TRIALS, 9, 3)).unwrap();
    let rho_err = grid
        .iter()
        .zip(&modulus.values)
        .map(|(t, v)| (v - ((1.0 + t * t).sqrt() - 1.0)).abs())
        .fold(0.0, f64::max);
    let ok = k_ok && hanner.passed == Some(true) && clarkson.passed() && rho_err <= MODULUS_TOL;
    line(
        ok,
        format!(
            "U_2: directed K_2,4 {:.6} sampled {:.6} (target sqrt3 = {exact:.6}); Hanner worst {:.2e}; Clarkson worst {:.2e}/{:.2e}; L_2 rho err {rho_err:.2e} (tol {MODULUS_TOL:.0e})",
            k.directed_bound, k.sampled_bound, hanner.worst_margin, clarkson.direct.worst_margin, clarkson.dual.worst_margin
        ),
    )
}

fn criterion_9() -> Line {
    let mut good = 0;
    let mut balanced = true;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for seed in 0..SIGN_SEEDS {
        let g = lab::gen_pseudorandom_sign(SIGN_M, 2, seed).unwrap();
        let sum: f64 = g.g.values().iter().map(|z| z.re).sum();
        balanced &= g.sum == 0 && sum == 0.0;
        lo = lo.min(g.gowers_norm);
        hi = hi.max(g.gowers_norm);
        if g.gowers_norm <= SIGN_BOUND {
            good += 1;
        }
    }
    line(
        balanced && good >= SIGN_REQUIRED,
        format!(
            "pseudorandom sign m={SIGN_M}, k=2: balanced {balanced}; ||g||_U2 <= {SIGN_BOUND} for {good}/{SIGN_SEEDS} seeds (need {SIGN_REQUIRED}); range [{lo:.4}, {hi:.4}], floor m^(-1/4) = {:.4}",
            (SIGN_M as f64).powf(-0.25)
        ),
    )
}

fn random_pair(r: &mut ChaCha8Rng) -> HypergraphPair {
    let k = r.random_range(1..=3);
    let dims: Vec<usize> = (0..k).map(|_| r.random_range(1..=2 + (k == 1) as usize)).collect();
    let weights = [0.0, 0.0, 0.5, 1.0, 1.5, 2.0];
    loop {
        let h = HypergraphPair::from_fn(dims.clone(), |_| {
            (weights[r.random_range(0..weights.len())], weights[r.random_range(0..weights.len())])
        })
        .unwrap();
        if h.size() > 0.0 {
            return h;
        }
    }
}

fn random_function(r: &mut ChaCha8Rng, n: usize, k: usize) -> GridFunction {
    let w: Vec<f64> = (0..n).map(|_| r.random_range(0.25..1.5)).collect();
    let len = n.pow(k as u32);
    let v = (0..len).map(|_| entry(r)).collect();
    GridFunction::new(DiscreteMeasureSpace::new(w).unwrap(), k, v).unwrap()
}

/// Same support, with `beta` moved so that `alpha - beta` is an integer.
fn integer_shift(h: &HypergraphPair) -> HypergraphPair {
    HypergraphPair::from_fn(h.dims().to_vec(), |w| {
        let o = Omega::new(w.to_vec());
        let (a, b) = (h.alpha(&o), h.beta(&o));
        (a, b + (a - b).fract().abs())
    })
    .unwrap()
}

fn criterion_10() -> Line {
    let mut r = rng(10);
    let cfg = EngineConfig::default();
    let (mut plan_err, mut thread_err, mut tensor_err) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..100 {
        let h = random_pair(&mut r);
        let n = r.random_range(2..=3);
        let f = random_function(&mut r, n, h.k());
        let scale = engine::absolute_integral(&[Part::new(&h, &f)], &cfg).unwrap().max(f64::MIN_POSITIVE);
        let planned = engine::integrate_with(&h, &f, &cfg).unwrap();
        let brute = engine::integrate_brute_with(&h, &f, &cfg).unwrap();
        plan_err = plan_err.max((planned - brute).norm() / scale);

        let serial = engine::integrate_with(&h, &f, &cfg.clone().with_threads(1)).unwrap();
        let parallel = engine::integrate_with(&h, &f, &cfg.clone().with_threads(8)).unwrap();
        let serial_b = engine::integrate_brute_with(&h, &f, &cfg.clone().with_threads(1)).unwrap();
        let parallel_b = engine::integrate_brute_with(&h, &f, &cfg.clone().with_threads(8)).unwrap();
        thread_err = thread_err
            .max((serial - parallel).norm() / scale)
            .max((serial_b - parallel_b).norm() / scale);

        // z -> |z|^(a+b) e^{i(a-b)Arg z} is multiplicative only for integer
        // a - b, so odd instances use |f|, |g| and even ones integer-shifted
        // weights on complex f, g.
        let (th, tf, tg) = if i % 2 == 0 {
            let hi = integer_shift(&h);
            let g = random_function(&mut r, 2, h.k());
            (hi, f.clone(), g)
        } else {
            let g = random_function(&mut r, 2, h.k());
            (h.clone(), f.abs(), g.abs())
        };
        let fg = tensor_function(&tf, &tg).unwrap();
        let lhs = engine::integrate_with(&th, &fg, &cfg).unwrap();
        let rhs = engine::integrate_with(&th, &tf, &cfg).unwrap() * engine::integrate_with(&th, &tg, &cfg).unwrap();
        let tscale = engine::absolute_integral(&[Part::new(&th, &tf)], &cfg).unwrap()
            * engine::absolute_integral(&[Part::new(&th, &tg)], &cfg).unwrap();
        tensor_err = tensor_err.max((lhs - rhs).norm() / tscale.max(f64::MIN_POSITIVE));
    }
    line(
        plan_err <= PLAN_TOL && thread_err <= THREAD_TOL && tensor_err <= TENSOR_TOL,
        format!(
            "engine, 100 random (H, f): planned vs brute {plan_err:.2e} (tol {PLAN_TOL:.0e}); 8 vs 1 threads {thread_err:.2e} (tol {THREAD_TOL:.0e}); tensor identity {tensor_err:.2e} (tol {TENSOR_TOL:.0e})"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Line); 10] = [
        ("oracle equivalence, Schatten", criterion_1),
        ("oracle equivalence, L_p", criterion_2),
        ("U_2 / S_4 identity", criterion_3),
        ("classification suite", criterion_4),
        ("violation search", criterion_5),
        ("inequality suite", criterion_6),
        ("two-point constants", criterion_7),
        ("geometry of L_U2", criterion_8),
        ("pseudorandom sign", criterion_9),
        ("engine self-consistency", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            line(false, format!("panicked: {msg}"))
        });
        if !result.ok {
            failed += 1;
        }
        println!(
            "{} {:>2} {name}: {} [{:.1?}]",
            if result.ok { "PASS" } else { "FAIL" },
            i + 1,
            result.detail,
            start.elapsed()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
