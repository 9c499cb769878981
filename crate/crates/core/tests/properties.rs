//! Randomized property suites: field and calculus laws of the exact
//! arithmetic, the Schwarzian cocycle, pull-back functoriality and
//! multiplicativity, and the admissibility inequality with the scattering
//! monotonicity over random bases and passports.

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use irrgar_core::covers::{
    analyze_cover, bound_margin, rh_genus, scatter, Partition, Passport,
};
use irrgar_core::exactalg::{
    equals_mod, gcd, laurent_coeffs, rat_int, reduce_mod, AlgebraicContext, MPoly, PointSpec,
    RatFunc, Vars,
};
use irrgar_core::formal::{
    gauge_equivalent, orbifold_order, pullback_local, BaseEquation, Exponent, FormalDatum,
    HalfInt, OrbifoldOrder, Pullback,
};
use irrgar_core::odes::{schwarzian, sl_pullback, RationalMap, SLForm};

// ---------------------------------------------------------------------------
// exactalg laws
// ---------------------------------------------------------------------------

fn vars2() -> Vars {
    Vars::new(["x", "y"])
}

/// A random small polynomial in (x, y).
fn arb_poly() -> impl Strategy<Value = MPoly> {
    proptest::collection::vec((0u32..4, 0u32..3, -6i64..7), 0..5).prop_map(|terms| {
        let vars = vars2();
        let mut acc = MPoly::zero(&vars);
        for (ex, ey, c) in terms {
            let mono = irrgar_core::exactalg::Mono(vec![ex, ey]);
            let mut t = BTreeMap::new();
            t.insert(mono, rat_int(c));
            acc = &acc + &MPoly::from_terms(&vars, t);
        }
        acc
    })
}

fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
    (arb_poly(), arb_poly()).prop_filter_map("nonzero denominator", |(n, d)| {
        if d.is_zero() {
            None
        } else {
            Some(RatFunc::new(n, d).unwrap())
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, .. ProptestConfig::default() })]

    #[test]
    fn field_laws(a in arb_ratfunc(), b in arb_ratfunc(), c in arb_ratfunc()) {
        // associativity and commutativity of + and *
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        // distributivity
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        // inverses for nonzero
        if !a.is_zero() {
            let inv = a.inverse().unwrap();
            prop_assert_eq!(&a * &inv, RatFunc::one(a.vars()));
        }
        // subtraction is inverse of addition
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
    }

    #[test]
    fn canonical_form_uniqueness(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
        // (p r)/(q r) and p/q canonicalize identically
        prop_assume!(!q.is_zero() && !r.is_zero());
        let plain = RatFunc::new(p.clone(), q.clone()).unwrap();
        let padded = RatFunc::new(&p * &r, &q * &r).unwrap();
        prop_assert_eq!(plain, padded);
    }

    #[test]
    fn gcd_divides_both(p in arb_poly(), q in arb_poly()) {
        let g = gcd(&p, &q);
        if !g.is_zero() {
            prop_assert!(p.is_zero() || p.divide_exact(&g).is_some());
            prop_assert!(q.is_zero() || q.divide_exact(&g).is_some());
        }
    }

    #[test]
    fn leibniz_rule(a in arb_ratfunc(), b in arb_ratfunc()) {
        let xi = 0;
        let lhs = (&a * &b).derivative(xi);
        let rhs = &(&a.derivative(xi) * &b) + &(&a * &b.derivative(xi));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in arb_ratfunc(), b in arb_ratfunc(), v in arb_poly()) {
        let vars = vars2();
        let mut bind = BTreeMap::new();
        bind.insert("x".to_string(), RatFunc::from_poly(v));
        let sub = |r: &RatFunc| r.substitute(&bind);
        // denominators may collapse under substitution; skip those draws
        if let (Ok(sa), Ok(sb), Ok(ssum), Ok(sprod)) =
            (sub(&a), sub(&b), sub(&(&a + &b)), sub(&(&a * &b)))
        {
            prop_assert_eq!(ssum, &sa + &sb);
            prop_assert_eq!(sprod, &sa * &sb);
        }
    }

    #[test]
    fn laurent_reconstructs_the_head(n in arb_poly(), d in arb_poly(), k in 0usize..4) {
        prop_assume!(!d.is_zero());
        let vars = vars2();
        let r = RatFunc::new(n, d).unwrap();
        let from = -3i64;
        let count = k + 2;
        let c = laurent_coeffs(&r, "x", &PointSpec::origin(&r), from, count).unwrap();
        let x = RatFunc::var(&vars, "x").unwrap();
        let mut partial = RatFunc::zero(&vars);
        for (i, ci) in c.iter().enumerate() {
            let e = from + i as i64;
            partial = &partial + &(ci * &x.pow(e).unwrap());
        }
        let tail = &r - &partial;
        // the tail must have no Laurent terms below from+count
        let check = laurent_coeffs(&tail, "x", &PointSpec::origin(&r), from, count).unwrap();
        for ci in check {
            prop_assert!(ci.is_zero());
        }
    }

    #[test]
    fn reduce_mod_is_idempotent_and_equals_mod_reflexive(
        n in arb_poly(), d in arb_poly(), t in -3i64..4
    ) {
        prop_assume!(!d.is_zero());
        let vars = vars2();
        // relation x^2 = y + t over base parameter y
        let rel = {
            let x = MPoly::var(&vars, 0);
            let y = MPoly::var(&vars, 1);
            &(&x.pow(2) - &y) - &MPoly::int(&vars, t)
        };
        let ctx = AlgebraicContext::new("x", rel).unwrap();
        let r = RatFunc::new(n, d).unwrap();
        match reduce_mod(&r, &ctx) {
            Err(_) => {} // denominator vanished on the curve
            Ok(red) => {
                prop_assert_eq!(reduce_mod(&red, &ctx).unwrap(), red.clone());
                prop_assert!(equals_mod(&red, &r, &ctx).unwrap());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Schwarzian cocycle and pull-back functoriality
// ---------------------------------------------------------------------------

fn arb_moebius_plus() -> impl Strategy<Value = RatFunc> {
    // rational maps of small degree with nonzero derivative
    (proptest::collection::vec(-5i64..6, 3), proptest::collection::vec(-5i64..6, 2)).prop_filter_map(
        "non-constant",
        |(num, den)| {
            let vars = Vars::new(["x"]);
            let x = MPoly::var(&vars, 0);
            let mut n = MPoly::zero(&vars);
            for (k, c) in num.iter().enumerate() {
                n = &n + &x.pow(k as u32).scale(&rat_int(*c));
            }
            let mut d = MPoly::zero(&vars);
            for (k, c) in den.iter().enumerate() {
                d = &d + &x.pow(k as u32).scale(&rat_int(*c));
            }
            if d.is_zero() {
                return None;
            }
            let r = RatFunc::new(n, d).unwrap();
            if r.derivative(0).is_zero() {
                None
            } else {
                Some(r)
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, .. ProptestConfig::default() })]

    #[test]
    fn schwarzian_cocycle(phi in arb_moebius_plus(), psi in arb_moebius_plus()) {
        // {φ∘ψ, x} = ({φ,x}∘ψ)·(ψ')² + {ψ,x}
        let vars = phi.vars().clone();
        let compose = {
            let mut b = BTreeMap::new();
            b.insert("x".to_string(), psi.clone());
            phi.substitute(&b)
        };
        let composed = match compose {
            Ok(c) => c,
            Err(_) => return Ok(()), // ψ hits a pole of φ identically
        };
        let map = |v: RatFunc| RationalMap { indep: "x".into(), value: v };
        if composed.derivative(0).is_zero() {
            return Ok(());
        }
        let lhs = schwarzian(&map(composed)).unwrap();
        let s_phi = schwarzian(&map(phi.clone())).unwrap();
        let s_psi = schwarzian(&map(psi.clone())).unwrap();
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), psi.clone());
        let pulled = match s_phi.substitute(&b) {
            Ok(p) => p,
            Err(_) => return Ok(()),
        };
        let dpsi = psi.derivative(0);
        let rhs = &(&pulled * &(&dpsi * &dpsi)) + &s_psi;
        prop_assert_eq!(lhs, rhs);
        let _ = vars;
    }

    #[test]
    fn sl_pullback_functorial(
        phi in arb_moebius_plus(), psi in arb_moebius_plus(),
        qn in proptest::collection::vec(-4i64..5, 3)
    ) {
        // pulling back along ψ then φ equals pulling back along φ∘ψ
        let vars = Vars::new(["x"]);
        let x = MPoly::var(&vars, 0);
        let mut qp = MPoly::zero(&vars);
        for (k, c) in qn.iter().enumerate() {
            qp = &qp + &x.pow(k as u32).scale(&rat_int(*c));
        }
        let q0 = SLForm { indep: "x".into(), q: RatFunc::from_poly(qp) };
        let map = |v: RatFunc| RationalMap { indep: "x".into(), value: v };
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), psi.clone());
        let composed = match phi.substitute(&b) {
            Ok(c) if !c.derivative(0).is_zero() => c,
            _ => return Ok(()),
        };
        let step1 = sl_pullback(&q0, &map(phi.clone())).unwrap();
        let lhs = sl_pullback(&SLForm { indep: "x".into(), q: step1.q }, &map(psi.clone()));
        let rhs = sl_pullback(&q0, &map(composed));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => prop_assert_eq!(l.q, r.q),
            _ => {}
        }
    }
}

// ---------------------------------------------------------------------------
// formal data
// ---------------------------------------------------------------------------

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, .. ProptestConfig::default() })]

    #[test]
    fn pullback_local_multiplicative(
        twice_kappa in 0i64..5, p in -6i64..7, q in 1i64..7,
        m1 in 1u32..4, m2 in 1u32..4
    ) {
        let theta = if twice_kappa % 2 == 0 {
            Exponent::rational(p, q)
        } else {
            Exponent::zero()
        };
        let fd = FormalDatum::new(HalfInt::from_twice(twice_kappa), theta).unwrap();
        let seq = match pullback_local(&fd, m1) {
            Pullback::Removed => return Ok(()),
            Pullback::Datum(d) => pullback_local(&d, m2),
        };
        let direct = pullback_local(&fd, m1 * m2);
        prop_assert_eq!(seq, direct);
    }

    #[test]
    fn gauge_equivalence_is_an_equivalence(
        p in -6i64..7, q in 1i64..7, shift in -3i64..4, flip in proptest::bool::ANY,
        m in 1u32..4
    ) {
        let a = FormalDatum::new(HalfInt::ZERO, Exponent::rational(p, q)).unwrap();
        let theta_b = {
            let t = Exponent::rational(p, q);
            let t = if flip { t.neg() } else { t };
            t.add_integer(shift)
        };
        let b = FormalDatum::new(HalfInt::ZERO, theta_b).unwrap();
        // symmetric + reflexive + constructed-equivalent
        prop_assert!(gauge_equivalent(&[a.clone()], &[a.clone()]));
        prop_assert!(gauge_equivalent(&[a.clone()], &[b.clone()]));
        prop_assert!(gauge_equivalent(&[b.clone()], &[a.clone()]));
        // preserved by simultaneous pull-back with equal m
        match (pullback_local(&a, m), pullback_local(&b, m)) {
            (Pullback::Datum(pa), Pullback::Datum(pb)) => {
                prop_assert!(gauge_equivalent(&[pa], &[pb]));
            }
            (Pullback::Removed, Pullback::Removed) => {}
            _ => prop_assert!(false, "removal must be gauge-invariant"),
        }
    }
}

// ---------------------------------------------------------------------------
// covers: admissibility bound and scattering, seeded random sweep
// ---------------------------------------------------------------------------

fn random_partition(rng: &mut StdRng, d: u32) -> Partition {
    let mut parts = Vec::new();
    let mut left = d;
    while left > 0 {
        let p = rng.gen_range(1..=left);
        parts.push(p);
        left -= p;
    }
    Partition::new(parts).unwrap()
}

fn random_base(rng: &mut StdRng) -> BaseEquation {
    let n = rng.gen_range(1..=4usize);
    let mut poles = Vec::new();
    for i in 0..n {
        let twice_kappa = *[0i64, 0, 0, 1, 2, 3, 4].get(rng.gen_range(0..7)).unwrap();
        let theta = if twice_kappa % 2 != 0 {
            Exponent::zero()
        } else if twice_kappa > 0 {
            Exponent::symbol(&format!("s{i}"))
        } else {
            match rng.gen_range(0..3) {
                0 => Exponent::symbol(&format!("s{i}")),
                1 => {
                    let nu = rng.gen_range(2..=6i64);
                    Exponent::rational(1, nu)
                }
                _ => {
                    let nu = rng.gen_range(2..=6i64);
                    let p = rng.gen_range(1..nu);
                    Exponent::rational(p, nu)
                }
            }
        };
        poles.push(FormalDatum::new(HalfInt::from_twice(twice_kappa), theta).unwrap());
    }
    BaseEquation::genus0_with(poles, None)
}

#[test]
fn admissibility_bound_and_scattering_monotone() {
    let mut rng = StdRng::seed_from_u64(0x1239_88fe);
    let mut checked = 0usize;
    while checked < 1500 {
        let base = random_base(&mut rng);
        let d = rng.gen_range(2..=6u32);
        let pole_fibers: Vec<Partition> =
            base.poles.iter().map(|_| random_partition(&mut rng, d)).collect();
        let mut free = Vec::new();
        for _ in 0..rng.gen_range(0..4usize) {
            let f = random_partition(&mut rng, d);
            if !f.is_trivial() {
                free.push(f);
            }
        }
        let mut passport = match Passport::new(d, pole_fibers, free) {
            Ok(p) => p,
            Err(_) => continue,
        };
        // fix ramification parity with one extra simple fiber
        if (2 * d as i64) < 2 + passport.total_ramification() as i64 {
            continue;
        }
        if passport.total_ramification() % 2 != 0 {
            let mut parts = vec![1u32; (d - 1) as usize];
            parts[0] = 2;
            passport.free_fibers.push(Partition::new(parts).unwrap());
        }
        if rh_genus(d, &passport, 0).is_err() {
            continue;
        }
        let analysis = match analyze_cover(&base, &passport) {
            Ok(a) => a,
            Err(_) => continue,
        };
        // every pole count integral and the genus non-negative
        assert!(analysis.genus >= 0);
        let (lhs, rhs) = bound_margin(&base, &passport).unwrap();
        assert!(
            rat_int(lhs) >= rhs,
            "bound violated: base {base}, passport {passport}, {lhs} < {rhs}"
        );

        // scattering: conserves R, never increases T-B, idempotent
        let s = scatter(&base, &passport);
        assert_eq!(s.total_ramification(), passport.total_ramification());
        assert_eq!(scatter(&base, &s), s, "scatter not idempotent");
        if let (Ok((lhs0, _)), Ok((lhs1, _))) =
            (bound_margin(&base, &passport), bound_margin(&base, &s))
        {
            assert!(lhs1 <= lhs0, "scattering increased T-B: {base} {passport}");
        }
        // free-fiber scattering alone keeps N and increases B
        let free_only = Passport::new(
            d,
            passport.pole_fibers.clone(),
            s.free_fibers[..passport
                .free_fibers
                .iter()
                .map(|f| f.ramification() as usize)
                .sum::<usize>()]
                .to_vec(),
        )
        .unwrap();
        if let (Ok(a0), Ok(a1)) = (analyze_cover(&base, &passport), analyze_cover(&base, &free_only))
        {
            assert_eq!(a0.n, a1.n);
            assert!(a1.b >= a0.b);
        }
        checked += 1;
    }
}

#[test]
fn gcd_recovers_planted_common_factors() {
    let vars = Vars::new(["x", "y"]);
    let mut rng = StdRng::seed_from_u64(42);
    let mut random_poly = |rng: &mut StdRng| {
        let mut acc = MPoly::zero(&vars);
        for _ in 0..rng.gen_range(1..4) {
            let mono = irrgar_core::exactalg::Mono(vec![
                rng.gen_range(0..3u32),
                rng.gen_range(0..3u32),
            ]);
            let c = rng.gen_range(-4i64..5);
            let mut t = BTreeMap::new();
            t.insert(mono, rat_int(c));
            acc = &acc + &MPoly::from_terms(&vars, t);
        }
        acc
    };
    let mut checked = 0usize;
    while checked < 5000 {
        let p = random_poly(&mut rng);
        let q = random_poly(&mut rng);
        let r = random_poly(&mut rng);
        if p.is_zero() || q.is_zero() || r.is_zero() {
            continue;
        }
        let g = gcd(&(&p * &r), &(&q * &r));
        assert!(
            g.divide_exact(&r.monic()).is_some(),
            "gcd lost the planted factor: p={p} q={q} r={r} gcd={g}"
        );
        checked += 1;
    }
}

#[test]
fn orbifold_order_consistency() {
    // integer exponents have order 1, proper fractions their denominator
    for p in -12i64..13 {
        for q in 1i64..7 {
            let e = Exponent::rational(p, q);
            match orbifold_order(&e) {
                OrbifoldOrder::Finite(n) => {
                    let g = num_integer::gcd(p.unsigned_abs(), q as u64);
                    assert_eq!(n, (q as u64) / g.max(1));
                }
                OrbifoldOrder::Infinite => panic!("rational exponent with infinite order"),
            }
        }
    }
}
