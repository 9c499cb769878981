//! Acceptance suite: one test per criterion, each printing a pass line
//! once its exact checks (zero tolerance throughout) go through.
//!
//! 1. table reproduction   2. Hamilton residuals   3. accessory derivation
//! 4. pull-back equality   5. Painlevé residuals   6. formal-data checks
//! 7. randomized property sweeps   8. negative controls and exit codes

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use irrgar_core::classifier::{search, tables, ClassRow, SearchMode};
use irrgar_core::covers::{analyze_cover, bound_margin, rh_genus, scatter, Partition, Passport};
use irrgar_core::exactalg::{parse, rat_int, MPoly, Mono, Rat, RatFunc, Vars};
use irrgar_core::formal::{
    chi_irr, gauge_equivalent, pullback_local, teich_dim, BaseEquation, Exponent, FormalDatum,
    HalfInt, Pullback,
};
use irrgar_core::garnier::{
    builtins, derived_system, hamilton_residual, painleve_residual, painleve_solution,
    solved_hamiltonians, verify_pullback, SolutionId, SystemId,
};
use irrgar_core::odes::{schwarzian, sl_pullback, solve_accessory, RationalMap, SLForm};

use num_traits::Signed;

fn matches_expected(row: &ClassRow, exp: &tables::ExpectedRow) -> bool {
    if row.degree != exp.degree || row.b != exp.free_simple {
        return false;
    }
    if !gauge_equivalent(&row.target, &exp.target_data()) {
        return false;
    }
    let exp_base = exp.base_data();
    if !gauge_equivalent(&row.base.poles, &exp_base) {
        return false;
    }
    let mut got: Vec<(String, &Partition)> = row
        .base
        .poles
        .iter()
        .zip(&row.passport.pole_fibers)
        .map(|(p, f)| (format!("{:?}", p.gauge_key()), f))
        .collect();
    let exp_pass = exp.passport();
    let mut want: Vec<(String, &Partition)> = exp_base
        .iter()
        .zip(&exp_pass.pole_fibers)
        .map(|(p, f)| (format!("{:?}", p.gauge_key()), f))
        .collect();
    got.sort();
    want.sort();
    got == want
}

#[test]
fn criterion_1_table_reproduction() {
    let t0 = Instant::now();
    for (mode, expected, name) in [
        (SearchMode::Log, tables::logarithmic_rows(), "log"),
        (SearchMode::Scattered, tables::scattered_rows(), "scattered"),
        (SearchMode::Confluent, tables::confluent_rows(), "confluent"),
    ] {
        let rows = search(mode, 6).unwrap();
        assert_eq!(rows.len(), expected.len(), "{name}: row count");
        for exp in &expected {
            assert!(
                rows.iter().any(|r| matches_expected(r, exp)),
                "{name}: missing row {exp:?}"
            );
        }
    }
    // The same three searches through the CLI, with deterministic output.
    let out = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(["classify", "--mode", "scattered"])
        .output()
        .expect("run irrgar");
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("7 rows"), "CLI scattered row count:\n{text}");
    let out2 = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(["classify", "--mode", "scattered"])
        .output()
        .expect("run irrgar");
    assert_eq!(out.stdout, out2.stdout, "classify output not byte-deterministic");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 120, "classification took {elapsed:?}");
    println!(
        "criterion 1: PASS - log=5, scattered=7, confluent=3 rows match the tables ({elapsed:?})"
    );
}

#[test]
fn criterion_2_hamilton_residuals() {
    let t0 = Instant::now();
    for (id, sol) in [
        (SystemId::Kim122, builtins::kim122_solution()),
        (SystemId::Kim23, builtins::kim23_solution()),
        (SystemId::Kaw4, builtins::kaw4_solution()),
    ] {
        let tcase = Instant::now();
        let sys = derived_system(id).unwrap();
        let residuals = hamilton_residual(&sys, &sol).unwrap();
        assert_eq!(residuals.len(), 8);
        for (i, r) in residuals.iter().enumerate() {
            assert!(r.is_zero(), "{}: residual {i} nonzero: {r}", id.label());
        }
        assert!(tcase.elapsed().as_secs() < 60, "{} too slow", id.label());
    }
    println!(
        "criterion 2: PASS - 8/8 residuals identically zero for H(1,2,2), H(2,3), K(5/2,3/2) ({:?})",
        t0.elapsed()
    );
}

#[test]
fn criterion_3_accessory_derivation() {
    // LinearP2 reproduces H_II exactly.
    let vars = Vars::new(["x", "q", "p", "t", "alpha", "H"]);
    let template = SLForm {
        indep: "x".into(),
        q: parse("x^4 + t*x^2 + 2*alpha*x + 2*H + 3/(4*(x-q)^2) - p/(x-q)", &vars).unwrap(),
    };
    let sol = solve_accessory(&template, &["H".into()], &[parse("q", &vars).unwrap()]).unwrap();
    let h2 = parse("(p^2 - q^4 - t*q^2 - 2*alpha*q)/2", &vars).unwrap();
    assert_eq!(sol["H"], h2, "H_II mismatch");

    // L(2,3) reproduces H(2,3) exactly.
    let (d1, d2) = solved_hamiltonians(SystemId::Kim23).unwrap();
    let (p1, p2) = builtins::kim23_printed_hamiltonians();
    assert_eq!(d1, p1, "H(2,3) H1");
    assert_eq!(d2, p2, "H(2,3) H2");

    // L(1,2,2) reproduces H(1,2,2) up to the documented p1/p2 slip.
    let (d1, d2) = solved_hamiltonians(SystemId::Kim122).unwrap();
    let (c1, c2) = builtins::kim122_printed_hamiltonians(true);
    let (v1, v2) = builtins::kim122_printed_hamiltonians(false);
    assert_eq!(d1, c1, "H(1,2,2) H1 corrected");
    assert_eq!(d2, c2, "H(1,2,2) H2 corrected");
    assert_ne!(d1, v1, "H(1,2,2) H1 verbatim must differ");
    assert_ne!(d2, v2, "H(1,2,2) H2 verbatim must differ");
    println!(
        "criterion 3: PASS - H_II, H(2,3) exact; H(1,2,2) exact up to the documented p1/p2 slip"
    );
}

#[test]
fn criterion_4_pullback_equality() {
    for case in [SystemId::Kim122, SystemId::Kim23] {
        let report = verify_pullback(case).unwrap();
        assert!(report.sl_equal, "{}: SL equality failed", case.label());
        assert!(!report.fallback_used);
    }
    let report = verify_pullback(SystemId::Kaw4).unwrap();
    assert!(report.sl_equal, "Kaw4 SL equality failed");
    let ex: BTreeMap<String, RatFunc> =
        report.extracted.unwrap().into_iter().collect();
    let vars = ex["u1"].vars().clone();
    let expect = |s: &str| parse(s, &vars).unwrap();
    assert_eq!(ex["u1"], expect("-t1"));
    assert_eq!(ex["u2"], expect("t2"));
    assert_eq!(ex["v1"], expect("0"));
    assert_eq!(ex["v2"], expect("3/(4*t2)"));
    println!(
        "criterion 4: PASS - pull-backs match the templates on the curves; Kaw4 extracts (-t1, t2, 0, 3/(4 t2))"
    );
}

#[test]
fn criterion_5_painleve_residuals() {
    let ids = [
        SolutionId::PvRat,
        SolutionId::PvLag,
        SolutionId::PvAlg,
        SolutionId::PivRat,
        SolutionId::PivHer,
        SolutionId::PiiiD6,
        SolutionId::PiiiD8,
        SolutionId::PiiiD7,
        SolutionId::P34,
        SolutionId::P2Rat,
    ];
    for id in ids {
        let sol = painleve_solution(id).unwrap();
        let r = painleve_residual(sol.kind, &sol.params, &sol.record).unwrap();
        assert!(r.is_zero(), "{}: residual {r}", sol.record.label);
    }
    println!("criterion 5: PASS - all 10 algebraic Painlevé rows have identically zero residual");
}

#[test]
fn criterion_6_formal_data_tables() {
    let two = rat_int(2);
    for row in tables::logarithmic_rows()
        .iter()
        .chain(tables::scattered_rows().iter())
        .chain(tables::confluent_rows().iter())
    {
        let base = row.base_equation();
        let passport = row.passport();
        let chi = chi_irr(&base);
        assert!(chi.is_negative(), "{row:?}");
        assert!(
            rat_int(row.degree as i64) * chi.abs() <= Rat::from_integer(1.into()),
            "d|chi| > 1 for {row:?}"
        );
        let analysis = analyze_cover(&base, &passport).unwrap();
        assert_eq!(analysis.genus, 0, "{row:?}");
        assert_eq!(analysis.b, row.free_simple, "{row:?}");
        assert_eq!(analysis.t, teich_dim(0, &row.target_data()), "{row:?}");
        assert!(analysis.n_k.iter().all(|n| n.denom() == &1.into()), "{row:?}");
        let n_sum: Rat = analysis.n_k.iter().fold(Rat::from_integer(0.into()), |a, b| a + b);
        assert_eq!(n_sum, rat_int(analysis.n), "{row:?}");
        assert!(gauge_equivalent(&analysis.target, &row.target_data()), "{row:?}");
        let (lhs, rhs) = bound_margin(&base, &passport).unwrap();
        assert!(rat_int(lhs) >= rhs, "{row:?}");
        let _ = &two;
    }
    for (lit, _) in tables::classical_rank2_list() {
        let data = irrgar_core::formal::parse_formal_data(lit).unwrap();
        assert_eq!(teich_dim(0, &data), 2, "{lit}");
    }
    println!(
        "criterion 6: PASS - every table row recomputes (g, N_k, T, B, chi, d|chi|<=1); classical list has T=2"
    );
}

// --- criterion 7: randomized sweeps, seeded and self-contained ---------

fn rand_poly(rng: &mut StdRng, vars: &Vars) -> MPoly {
    let mut acc = MPoly::zero(vars);
    for _ in 0..rng.gen_range(1..4) {
        let mono = Mono(vec![rng.gen_range(0..3u32), rng.gen_range(0..3u32)]);
        let mut t = BTreeMap::new();
        t.insert(mono, rat_int(rng.gen_range(-5i64..6)));
        acc = &acc + &MPoly::from_terms(vars, t);
    }
    acc
}

fn rand_ratfunc(rng: &mut StdRng, vars: &Vars) -> RatFunc {
    loop {
        let n = rand_poly(rng, vars);
        let d = rand_poly(rng, vars);
        if !d.is_zero() {
            return RatFunc::new(n, d).unwrap();
        }
    }
}

#[test]
fn criterion_7_property_sweeps() {
    let t0 = Instant::now();
    let vars = Vars::new(["x", "y"]);
    let mut rng = StdRng::seed_from_u64(0x0de5_eed1);

    // field laws, Leibniz, substitution homomorphism
    for _ in 0..1000 {
        let a = rand_ratfunc(&mut rng, &vars);
        let b = rand_ratfunc(&mut rng, &vars);
        let c = rand_ratfunc(&mut rng, &vars);
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&a * &b, &b * &a);
        assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !a.is_zero() {
            assert_eq!(&a * &a.inverse().unwrap(), RatFunc::one(&vars));
        }
        let lhs = (&a * &b).derivative(0);
        let rhs = &(&a.derivative(0) * &b) + &(&a * &b.derivative(0));
        assert_eq!(lhs, rhs);

        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), RatFunc::from_poly(rand_poly(&mut rng, &vars)));
        if let (Ok(sa), Ok(sb), Ok(ssum)) = (
            a.substitute(&bind),
            b.substitute(&bind),
            (&a + &b).substitute(&bind),
        ) {
            assert_eq!(ssum, &sa + &sb);
        }
    }

    // Schwarzian cocycle and pull-back functoriality on random maps
    let vx = Vars::new(["x"]);
    let mut checked = 0;
    while checked < 1000 {
        let phi = rand_map(&mut rng, &vx);
        let psi = rand_map(&mut rng, &vx);
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), psi.clone());
        let composed = match phi.substitute(&bind) {
            Ok(c) if !c.derivative(0).is_zero() => c,
            _ => continue,
        };
        let map = |v: RatFunc| RationalMap { indep: "x".into(), value: v };
        let lhs = schwarzian(&map(composed.clone())).unwrap();
        let s_phi = schwarzian(&map(phi.clone())).unwrap();
        let s_psi = schwarzian(&map(psi.clone())).unwrap();
        let pulled = match s_phi.substitute(&bind) {
            Ok(p) => p,
            Err(_) => continue,
        };
        let dpsi = psi.derivative(0);
        assert_eq!(lhs, &(&pulled * &(&dpsi * &dpsi)) + &s_psi, "cocycle");

        let q0 = SLForm { indep: "x".into(), q: RatFunc::from_poly(rand_poly2(&mut rng, &vx)) };
        let step = sl_pullback(&q0, &map(phi.clone())).unwrap();
        let two_step = sl_pullback(&SLForm { indep: "x".into(), q: step.q }, &map(psi.clone()));
        let direct = sl_pullback(&q0, &map(composed));
        if let (Ok(l), Ok(r)) = (two_step, direct) {
            assert_eq!(l.q, r.q, "functoriality");
        }
        checked += 1;
    }

    // pullback_local multiplicativity
    for _ in 0..1000 {
        let twice = rng.gen_range(0i64..5);
        let theta = if twice % 2 == 0 {
            Exponent::rational(rng.gen_range(-6i64..7), rng.gen_range(1i64..7))
        } else {
            Exponent::zero()
        };
        let fd = FormalDatum::new(HalfInt::from_twice(twice), theta).unwrap();
        let (m1, m2) = (rng.gen_range(1u32..4), rng.gen_range(1u32..4));
        let seq = match pullback_local(&fd, m1) {
            Pullback::Removed => continue,
            Pullback::Datum(d) => pullback_local(&d, m2),
        };
        assert_eq!(seq, pullback_local(&fd, m1 * m2));
    }

    // Prop 7.2 inequality, scatter monotonicity, idempotence, R conservation
    let mut checked = 0usize;
    while checked < 1000 {
        let base = rand_base(&mut rng);
        let d = rng.gen_range(2..=6u32);
        let pole_fibers: Vec<Partition> =
            base.poles.iter().map(|_| rand_partition(&mut rng, d)).collect();
        let mut free = Vec::new();
        for _ in 0..rng.gen_range(0..4usize) {
            let f = rand_partition(&mut rng, d);
            if !f.is_trivial() {
                free.push(f);
            }
        }
        let mut passport = match Passport::new(d, pole_fibers, free) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if passport.total_ramification() % 2 != 0 {
            let mut parts = vec![1u32; (d - 1) as usize];
            parts[0] = 2;
            passport.free_fibers.push(Partition::new(parts).unwrap());
        }
        if rh_genus(d, &passport, 0).is_err() || analyze_cover(&base, &passport).is_err() {
            continue;
        }
        let (lhs, rhs) = bound_margin(&base, &passport).unwrap();
        assert!(rat_int(lhs) >= rhs, "bound violated: {base} {passport}");
        let s = scatter(&base, &passport);
        assert_eq!(s.total_ramification(), passport.total_ramification());
        assert_eq!(scatter(&base, &s), s);
        let (lhs2, _) = bound_margin(&base, &s).unwrap();
        assert!(lhs2 <= lhs);
        checked += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 240, "sweeps took {elapsed:?}");
    println!(
        "criterion 7: PASS - 1000-case sweeps: field/Leibniz/hom laws, Schwarzian cocycle, \
         pull-back functoriality and multiplicativity, admissibility bound, scattering laws ({elapsed:?})"
    );
}

fn rand_map(rng: &mut StdRng, vars: &Vars) -> RatFunc {
    loop {
        let x = MPoly::var(vars, 0);
        let mut n = MPoly::zero(vars);
        for k in 0..3u32 {
            n = &n + &x.pow(k).scale(&rat_int(rng.gen_range(-4i64..5)));
        }
        let mut d = MPoly::zero(vars);
        for k in 0..2u32 {
            d = &d + &x.pow(k).scale(&rat_int(rng.gen_range(-4i64..5)));
        }
        if d.is_zero() {
            continue;
        }
        let r = RatFunc::new(n, d).unwrap();
        if !r.derivative(0).is_zero() {
            return r;
        }
    }
}

fn rand_poly2(rng: &mut StdRng, vars: &Vars) -> MPoly {
    let x = MPoly::var(vars, 0);
    let mut p = MPoly::zero(vars);
    for k in 0..3u32 {
        p = &p + &x.pow(k).scale(&rat_int(rng.gen_range(-4i64..5)));
    }
    p
}

fn rand_partition(rng: &mut StdRng, d: u32) -> Partition {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    Partition::new(parts).unwrap()
}

fn rand_base(rng: &mut StdRng) -> BaseEquation {
    let n = rng.gen_range(1..=4usize);
    let mut poles = Vec::new();
    for i in 0..n {
        let twice = *[0i64, 0, 0, 1, 2, 3, 4].get(rng.gen_range(0..7)).unwrap();
        let theta = if twice % 2 != 0 {
            Exponent::zero()
        } else if twice > 0 {
            Exponent::symbol(&format!("s{i}"))
        } else if rng.gen_bool(0.4) {
            Exponent::symbol(&format!("s{i}"))
        } else {
            // normalized bases carry non-integer rational exponents
            loop {
                let q = rng.gen_range(2..=6i64);
                let p = rng.gen_range(1..q);
                let e = Exponent::rational(p, q);
                if !matches!(
                    irrgar_core::formal::orbifold_order(&e),
                    irrgar_core::formal::OrbifoldOrder::Finite(1)
                ) {
                    break e;
                }
            }
        };
        poles.push(FormalDatum::new(HalfInt::from_twice(twice), theta).unwrap());
    }
    BaseEquation::genus0_with(poles, None)
}

#[test]
fn criterion_8_negative_controls() {
    // Perturbed Kaw4 solution: nonzero residuals.
    let sys = builtins::kaw4_uv_system();
    let mut sol = builtins::kaw4_solution();
    let vars = sys.hamiltonians[0].vars().clone();
    sol.assignments.insert("v1".into(), RatFunc::one(&vars));
    let residuals = hamilton_residual(&sys, &sol).unwrap();
    assert!(residuals.iter().any(|r| !r.is_zero()), "perturbed Kaw4 must fail");

    // P_IV with q = -t: nonzero residual and exit code 1 through the CLI.
    let out = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(["check-painleve", "--eq", "p4", "--params", "0,-2/9", "--q", "-s"])
        .output()
        .expect("run irrgar");
    assert_eq!(out.status.code(), Some(1), "expected exit 1: {out:?}");

    // Control: the genuine solution verifies with exit 0.
    let out = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(["verify", "--solution", "kaw4"])
        .output()
        .expect("run irrgar");
    assert_eq!(out.status.code(), Some(0), "kaw4 verify: {out:?}");
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("8/8 residuals zero"), "{text}");

    // Usage error surfaces as exit 2.
    let out = Command::new(env!("CARGO_BIN_EXE_irrgar"))
        .args(["verify", "--solution", "nonsense"])
        .output()
        .expect("run irrgar");
    assert_eq!(out.status.code(), Some(2));
    println!(
        "criterion 8: PASS - perturbed Kaw4 and P_IV(q=-t) rejected; exit codes 1/0/2 as specified"
    );
}
