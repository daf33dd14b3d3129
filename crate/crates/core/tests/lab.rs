mod common;

use common::{c, close, random_fn, rng};
use hypernorm::catalog::{make_complete, make_gowers, make_lp, make_schatten};
use hypernorm::engine::{integrate_parts, norm, DiscreteMeasureSpace, EngineConfig, GridFunction, Part};
use hypernorm::lab::{
    gen_pseudorandom_sign, search_triangle_violation, verify_factor_equality, verify_first_holder,
    verify_general_holder, verify_gowers_approx, verify_gowers_cs, verify_lattice_concavity, verify_lattice_convexity,
    verify_norm_monotonicity, verify_zero_one_bound, HolderMode, MonotonicityMode, SearchConfig, Side, TrialConfig,
};
use hypernorm::{HypergraphPair, Omega};

fn cfg(trials: usize, seed: u64, n: usize) -> TrialConfig {
    TrialConfig::new(trials, seed, n)
}

fn singletons(h: &HypergraphPair) -> Vec<HypergraphPair> {
    let dims = h.dims().to_vec();
    let mut out = Vec::new();
    for (w, &a) in h.alpha_map() {
        out.push(HypergraphPair::from_entries(dims.clone(), [(w.clone(), a)], []).unwrap());
    }
    for (w, &b) in h.beta_map() {
        out.push(HypergraphPair::from_entries(dims.clone(), [], [(w.clone(), b)]).unwrap());
    }
    out
}

#[test]
fn config_is_validated() {
    let u2 = make_gowers(2).unwrap();
    let psi = Omega::new([1, 0]);
    for bad in [
        cfg(0, 0, 2),
        cfg(10, 0, 0),
        TrialConfig {
            tolerance: 0.0,
            ..cfg(10, 0, 2)
        },
    ] {
        assert!(verify_first_holder(&u2, &psi, Side::Alpha, &bad).is_err());
    }
}

#[test]
fn first_holder() {
    let u2 = make_gowers(2).unwrap();
    let r = verify_first_holder(&u2, &Omega::new([1, 0]), Side::Alpha, &cfg(1000, 1, 2)).unwrap();
    assert_eq!(r.trials, 1000);
    assert!(r.passed(), "{}", r.to_json());
    let r = verify_first_holder(&u2, &Omega::new([0, 0]), Side::Beta, &cfg(500, 2, 3)).unwrap();
    assert!(r.passed());
    assert!(verify_first_holder(&u2, &Omega::new([0, 0]), Side::Alpha, &cfg(10, 0, 2)).is_err());

    // g = f: LHS is |integral f^H| = ||f||^{|H|}.
    let mut r = rng(3);
    let f = random_fn(&mut r, 2, 2);
    let psi = Omega::new([0, 1]);
    let one = HypergraphPair::delta(vec![2, 2], psi).unwrap();
    let rest = u2.sub(&one).unwrap();
    let lhs = integrate_parts(&[Part::new(&rest, &f), Part::new(&one, &f)], &EngineConfig::default())
        .unwrap()
        .norm();
    let rhs = norm(&u2, &f).unwrap().value.powf(4.0);
    assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));

    let doubled = u2.scale(2.0);
    let search = TrialConfig {
        search: true,
        ..cfg(300, 4, 2)
    };
    let r = verify_first_holder(&doubled, &Omega::new([1, 0]), Side::Alpha, &search).unwrap();
    assert!(!r.passed(), "{}", r.to_json());
    assert!(!r.expected_to_hold);
}

#[test]
fn general_holder() {
    let u2 = make_gowers(2).unwrap();
    let r = verify_general_holder(&u2, &singletons(&u2), HolderMode::Nonnegative, &cfg(1000, 5, 2)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    let r = verify_general_holder(&u2, &singletons(&u2), HolderMode::Integer, &cfg(500, 6, 2)).unwrap();
    assert!(r.passed());

    let r = verify_general_holder(&u2, std::slice::from_ref(&u2), HolderMode::Integer, &cfg(100, 7, 3)).unwrap();
    assert!(r.worst_margin.abs() < 1e-12 && r.max_margin.abs() < 1e-12);

    let s4 = make_schatten(4).unwrap();
    let third = s4.scale(1.0 / 3.0);
    let parts = vec![third.clone(), third.clone(), third];
    let search = TrialConfig {
        search: true,
        ..cfg(500, 8, 2)
    };
    let r = verify_general_holder(&s4, &parts, HolderMode::Complex, &search).unwrap();
    assert!(!r.passed(), "{}", r.to_json());
    assert!(!r.is_unexpected_failure());

    assert!(verify_general_holder(&s4, &parts, HolderMode::Integer, &cfg(10, 0, 2)).is_err());
    assert!(verify_general_holder(&s4, &[u2.scale(0.5)], HolderMode::Nonnegative, &cfg(10, 0, 2)).is_err());
}

#[test]
fn norm_monotonicity() {
    let r = verify_norm_monotonicity(
        &make_lp(4.0).unwrap(),
        &make_lp(2.0).unwrap(),
        MonotonicityMode::Nonnegative,
        &cfg(1000, 9, 3),
    )
    .unwrap();
    assert!(r.passed());

    let u2 = make_gowers(2).unwrap();
    let one = HypergraphPair::delta(vec![2, 2], Omega::new([0, 1])).unwrap();
    let r = verify_norm_monotonicity(&u2, &one, MonotonicityMode::Integer, &cfg(1000, 10, 2)).unwrap();
    assert!(r.passed());

    let r = verify_norm_monotonicity(&u2, &u2, MonotonicityMode::Integer, &cfg(100, 11, 2)).unwrap();
    assert!(r.worst_margin.abs() < 1e-12);

    assert!(verify_norm_monotonicity(&one, &u2, MonotonicityMode::Integer, &cfg(10, 0, 2)).is_err());
}

#[test]
fn gowers_cauchy_schwarz() {
    let h = HypergraphPair::delta(vec![2, 2], Omega::new([0, 0])).unwrap();
    let r = verify_gowers_cs(&h, &Omega::new([1, 1]), &cfg(1000, 12, 2)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert!(verify_gowers_cs(&h, &Omega::new([0, 0]), &cfg(10, 0, 2)).is_err());

    // g = 0: both sides vanish. f = 1: |integral g| <= ||g||_{U_2}.
    let space = DiscreteMeasureSpace::uniform(3).unwrap();
    let zero = GridFunction::constant(space.clone(), 2, c(0.0, 0.0)).unwrap();
    let ones = GridFunction::constant(space, 2, c(1.0, 0.0)).unwrap();
    let delta = HypergraphPair::delta(vec![2, 2], Omega::new([1, 1])).unwrap();
    let cfg0 = EngineConfig::default();
    let lhs = integrate_parts(&[Part::new(&h, &ones), Part::new(&delta, &zero)], &cfg0).unwrap();
    assert_eq!(lhs.norm(), 0.0);
    assert_eq!(norm(&make_gowers(2).unwrap(), &zero).unwrap().value, 0.0);

    let mut r = rng(13);
    for _ in 0..50 {
        let g = random_fn(&mut r, 3, 2);
        let uniform = GridFunction::new(DiscreteMeasureSpace::uniform(3).unwrap(), 2, g.values().to_vec()).unwrap();
        let ones = GridFunction::constant(DiscreteMeasureSpace::uniform(3).unwrap(), 2, c(1.0, 0.0)).unwrap();
        let lhs = integrate_parts(&[Part::new(&h, &ones), Part::new(&delta, &uniform)], &cfg0).unwrap().norm();
        let rhs = norm(&make_gowers(2).unwrap(), &uniform).unwrap().value;
        assert!(lhs <= rhs + 1e-12);
    }
}

#[test]
fn gowers_approximation() {
    let alpha_part = HypergraphPair::from_entries(
        vec![2, 2],
        make_gowers(2).unwrap().alpha_map().iter().map(|(w, a)| (w.clone(), *a)),
        [],
    )
    .unwrap();
    let r = verify_gowers_approx(&alpha_part, &cfg(1000, 14, 2)).unwrap();
    assert!(r.passed(), "{}", r.to_json());
    assert!(verify_gowers_approx(&make_gowers(2).unwrap(), &cfg(10, 0, 2)).is_err());
    assert!(verify_gowers_approx(&alpha_part.scale(2.0), &cfg(10, 0, 2)).is_err());

    // Continuity sweep: g = f + t e with t -> 0.
    let mut r = rng(15);
    let space = DiscreteMeasureSpace::uniform(2).unwrap();
    let f = GridFunction::new(space.clone(), 2, random_fn(&mut r, 2, 2).values().to_vec()).unwrap();
    let e = GridFunction::new(space, 2, random_fn(&mut r, 2, 2).values().to_vec()).unwrap();
    let u2 = make_gowers(2).unwrap();
    for t in [1e-1, 1e-3, 1e-6, 1e-9, 0.0] {
        let g = f.add(&e.scale(c(t, 0.0))).unwrap();
        let lhs = (hypernorm::engine::integrate(&alpha_part, &f).unwrap()
            - hypernorm::engine::integrate(&alpha_part, &g).unwrap())
        .norm();
        let sup = f.sup_norm().max(g.sup_norm());
        let rhs = alpha_part.size() * norm(&u2, &f.sub(&g).unwrap()).unwrap().value * sup.powf(alpha_part.size() - 1.0);
        assert!(rhs - lhs >= -1e-9, "t = {t}");
    }
}

#[test]
fn zero_one_bound_and_factor_equality() {
    for h in [make_gowers(2).unwrap(), make_schatten(4).unwrap()] {
        let r = verify_zero_one_bound(&h, &cfg(500, 16, 3)).unwrap();
        assert!(r.passed());
    }
    for h in [make_lp(3.0).unwrap(), make_complete(0.5, &[2, 2]).unwrap()] {
        let r = verify_factor_equality(&h, &cfg(300, 17, 2)).unwrap();
        assert!(r.passed());
        assert!(r.worst_margin.abs() < 1e-10);
    }
}

#[test]
fn lattice_estimates() {
    for h in [make_lp(3.0).unwrap(), make_complete(1.0, &[2, 2]).unwrap()] {
        assert!(verify_lattice_concavity(&h, 3, &cfg(300, 18, 2)).unwrap().passed());
        assert!(verify_lattice_convexity(&h, 3, &cfg(300, 19, 2)).unwrap().passed());
    }
    assert!(verify_lattice_concavity(&make_gowers(2).unwrap(), 2, &cfg(10, 0, 2)).is_err());
}

#[test]
fn catalog_pairs_pass_every_verifier() {
    let pairs = [
        make_gowers(2).unwrap(),
        make_schatten(4).unwrap(),
        make_schatten(6).unwrap(),
        make_complete(0.5, &[2, 2]).unwrap(),
    ];
    for h in &pairs {
        for n in [2, 3] {
            let c = cfg(1000, 20 + n as u64, n);
            for w in h.alpha_map().keys() {
                assert!(verify_first_holder(h, w, Side::Alpha, &c).unwrap().passed());
            }
            let r = verify_general_holder(h, &singletons(h), HolderMode::Nonnegative, &c).unwrap();
            assert!(r.worst_margin >= -1e-9);
        }
    }
}

#[test]
fn pseudorandom_signs() {
    let g = gen_pseudorandom_sign(2, 1, 0).unwrap();
    let v: Vec<f64> = g.g.values().iter().map(|z| z.re).collect();
    assert!(v == vec![1.0, -1.0] || v == vec![-1.0, 1.0]);
    assert_eq!(g.sum, 0);
    assert!(g.gowers_norm.abs() < 1e-12);

    let a = gen_pseudorandom_sign(16, 2, 1).unwrap();
    let b = gen_pseudorandom_sign(16, 2, 2).unwrap();
    assert_ne!(a.g.values(), b.g.values());
    for s in [&a, &b] {
        assert_eq!(s.sum, 0);
        assert!(s.g.values().iter().all(|z| z.im == 0.0 && z.re.abs() == 1.0));
        assert!(s.g.space().is_probability());
    }
    assert_eq!(gen_pseudorandom_sign(16, 2, 1).unwrap().g, a.g);
    assert!(gen_pseudorandom_sign(3, 1, 0).is_err());
}

#[test]
fn reports_replay_exactly() {
    let u2 = make_gowers(2).unwrap();
    let c = TrialConfig {
        search: true,
        ..cfg(200, 99, 2)
    };
    let a = verify_first_holder(&u2, &Omega::new([1, 0]), Side::Alpha, &c).unwrap();
    let threaded = TrialConfig { threads: 3, ..c.clone() };
    let b = verify_first_holder(&u2, &Omega::new([1, 0]), Side::Alpha, &threaded).unwrap();
    assert_eq!(a.worst_margin.to_bits(), b.worst_margin.to_bits());
    assert_eq!(a.witness, b.witness);
    assert_eq!(a.to_json(), b.to_json());
}

fn search_cfg(restarts: usize, seed: u64) -> SearchConfig {
    SearchConfig {
        restarts,
        seed,
        omega_size: 2,
        ..SearchConfig::default()
    }
}

/// Independent re-evaluation of a reported witness.
fn recheck(h: &HypergraphPair, v: &hypernorm::lab::Violation) -> f64 {
    let f = v.f.clone().into_function().unwrap();
    let g = v.g.clone().into_function().unwrap();
    let n = |x: &GridFunction| {
        hypernorm::engine::integrate_brute(h, x).unwrap().norm().powf(1.0 / h.size())
    };
    n(&f.add(&g).unwrap()) - n(&f) - n(&g)
}

#[test]
fn search_finds_certified_violations() {
    for (h, seed) in [(make_gowers(2).unwrap().scale(2.0), 7), (make_schatten(4).unwrap().scale(3.0), 8)] {
        let r = search_triangle_violation(&h, &search_cfg(400, seed)).unwrap();
        let v = r.violation.expect("violation");
        assert!(v.gap > 1e-6);
        let gap = recheck(&h, &v);
        assert!(close(gap, v.gap, 1e-9) && gap > 1e-6);
    }
}

#[test]
fn search_finds_nothing_on_a_norm() {
    let r = search_triangle_violation(&make_gowers(2).unwrap(), &search_cfg(10_000, 3)).unwrap();
    assert!(r.violation.is_none(), "{:?}", r.violation);
}
