//! Multivariate polynomial gcd over Q.
//!
//! Two engines behind one entry point: the heuristic evaluation gcd
//! (integer evaluation at a growing point, balanced radix reconstruction,
//! exact-division verification — the GCDHEU scheme), falling back to
//! primitive pseudo-remainder sequences with content extraction when the
//! heuristic gives up. Exact over Q, no factorization involved.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::mpoly::{MPoly, Mono, Rat};

/// Monic gcd of two polynomials. `gcd(0,0) = 0`; any nonzero constant
/// input yields `1`.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert_eq!(a.vars(), b.vars(), "vars mismatch in gcd");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one(a.vars());
    }
    if a == b {
        return a.monic();
    }

    // Strip the common monomial factor first; it is both cheap and the
    // dominant case for denominators like x^2*(x-1)^2.
    let ma = a.mono_gcd().unwrap();
    let mb = b.mono_gcd().unwrap();
    let common = super::mpoly::Mono(ma.0.iter().zip(&mb.0).map(|(x, y)| (*x).min(*y)).collect());
    let mut a = a.div_mono(&ma);
    let mut b = b.div_mono(&mb);

    // Variables occurring in only one operand cannot occur in the gcd:
    // replace that operand by its content over them. This collapses the
    // frequent case of a huge many-variable polynomial against a
    // denominator in few variables into small-arity gcds.
    let mut trivial_core = false;
    loop {
        let occ_a = occurring(&a);
        let occ_b = occurring(&b);
        if occ_a.iter().zip(&occ_b).any(|(x, y)| *x && !y) {
            a = content_outside(&a, &occ_b);
            if a.as_constant().is_some() {
                trivial_core = true;
                break;
            }
            continue;
        }
        if occ_b.iter().zip(&occ_a).any(|(x, y)| *x && !y) {
            b = content_outside(&b, &occ_a);
            if b.as_constant().is_some() {
                trivial_core = true;
                break;
            }
            continue;
        }
        break;
    }

    let core = if trivial_core {
        MPoly::one(a.vars())
    } else {
        match heuristic_gcd(&a, &b) {
            Some(g) => g,
            None => gcd_stripped(&a, &b),
        }
    };
    let res = core.mul_mono(&common, &Rat::one());
    res.monic()
}

fn occurring(p: &MPoly) -> Vec<bool> {
    let mut occ = vec![false; p.vars().len()];
    for (m, _) in p.terms() {
        for (i, &e) in m.0.iter().enumerate() {
            if e > 0 {
                occ[i] = true;
            }
        }
    }
    occ
}

/// gcd of the coefficients of `p` viewed as a polynomial in the variables
/// NOT flagged in `keep`; the result involves only `keep` variables.
fn content_outside(p: &MPoly, keep: &[bool]) -> MPoly {
    let vars = p.vars().clone();
    let mut groups: std::collections::BTreeMap<Mono, MPoly> = std::collections::BTreeMap::new();
    for (m, c) in p.terms() {
        let mut outer = m.clone();
        let mut inner = m.clone();
        for i in 0..vars.len() {
            if keep[i] {
                outer.0[i] = 0;
            } else {
                inner.0[i] = 0;
            }
        }
        let entry = groups.entry(outer).or_insert_with(|| MPoly::zero(&vars));
        let mut t = std::collections::BTreeMap::new();
        t.insert(inner, c.clone());
        *entry = &*entry + &MPoly::from_terms(&vars, t);
    }
    let coeffs: Vec<MPoly> = groups.into_values().collect();
    gcd_list(&coeffs)
}

// ---------------------------------------------------------------------------
// Heuristic gcd (integer evaluation / balanced reconstruction)
// ---------------------------------------------------------------------------

/// Integer-primitive form: the polynomial with integer coefficients of
/// content 1 (sign fixed by the leading coefficient).
fn integer_primitive(p: &MPoly) -> MPoly {
    let c = p.rat_content();
    p.scale(&(Rat::one() / c))
}

fn coeff_norm(p: &MPoly) -> BigInt {
    let mut m = BigInt::zero();
    for (_, c) in p.terms() {
        // integer-primitive inputs: denominators are 1
        let a = c.numer().abs();
        if a > m {
            m = a;
        }
    }
    m
}

fn eval_var_int(p: &MPoly, v: usize, xi: &BigInt) -> MPoly {
    let coeffs = p.coeffs_in(v);
    let vars = p.vars().clone();
    let mut acc = MPoly::zero(&vars);
    let xi_rat = Rat::from_integer(xi.clone());
    for c in coeffs.iter().rev() {
        acc = &acc.scale(&xi_rat) + c;
    }
    acc
}

/// Balanced base-ξ reconstruction of `g` from its evaluation: digits are
/// polynomials in the remaining variables with coefficients in
/// (-ξ/2, ξ/2].
fn reconstruct(gamma: &MPoly, v: usize, xi: &BigInt, max_deg: u32) -> Option<MPoly> {
    let vars = gamma.vars().clone();
    let mut rem = gamma.clone();
    let mut digits: Vec<MPoly> = Vec::new();
    let half = xi / 2;
    while !rem.is_zero() {
        if digits.len() > max_deg as usize {
            return None;
        }
        // digit = rem balanced-mod ξ, coefficient-wise
        let mut digit_terms = std::collections::BTreeMap::new();
        for (m, c) in rem.terms() {
            debug_assert!(c.denom().is_one());
            let mut r = c.numer() % xi;
            if r > half {
                r -= xi;
            } else if r < -&half {
                r += xi;
            }
            if !r.is_zero() {
                digit_terms.insert(m.clone(), Rat::from_integer(r));
            }
        }
        let digit = MPoly::from_terms(&vars, digit_terms);
        rem = (&rem - &digit).scale(&Rat::new(BigInt::one(), xi.clone()));
        // the subtraction must leave every coefficient divisible by ξ
        if rem.terms().any(|(_, c)| !c.denom().is_one()) {
            return None;
        }
        digits.push(digit);
    }
    let mut out = MPoly::zero(&vars);
    for (k, d) in digits.iter().enumerate() {
        let mono = {
            let mut e = vec![0u32; vars.len()];
            e[v] = k as u32;
            Mono(e)
        };
        out = &out + &d.mul_mono(&mono, &Rat::one());
    }
    Some(out)
}

/// GCDHEU: evaluate one variable at a large integer, recurse, reconstruct
/// by balanced radix digits, verify by exact division. `None` when the
/// attempts are exhausted; the caller falls back to the PRS engine.
///
/// The recursion computes the gcd in Z[vars] INCLUDING the integer
/// content: the content of an evaluated image is exactly where the image
/// of a non-constant gcd factor lands (e.g. x−2 evaluated at ξ is the
/// integer ξ−2), so it must flow back up intact.
fn heuristic_gcd(a: &MPoly, b: &MPoly) -> Option<MPoly> {
    let a = integer_primitive(a);
    let b = integer_primitive(b);
    heuristic_full(&a, &b, 0).map(|g| g.monic())
}

/// Full gcd over Z of integer-coefficient polynomials, content included.
fn heuristic_full(a: &MPoly, b: &MPoly, depth: usize) -> Option<MPoly> {
    if depth > 16 {
        return None;
    }
    let vars = a.vars().clone();
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    // Split integer contents; gcd = gcd(contents) * gcd(primitive parts).
    let ca = a.rat_content();
    let cb = b.rat_content();
    let pa = a.scale(&(Rat::one() / ca.clone()));
    let pb = b.scale(&(Rat::one() / cb.clone()));
    let g0 = num_integer::gcd(ca.numer().abs(), cb.numer().abs());
    let g0 = Rat::from_integer(g0);

    // Pick the occurring variable of lowest joint degree.
    let mut var: Option<(usize, u32)> = None;
    for v in 0..vars.len() {
        let da = pa.degree_in(v).unwrap_or(0);
        let db = pb.degree_in(v).unwrap_or(0);
        if da > 0 || db > 0 {
            let key = da.max(db);
            if var.map_or(true, |(_, k)| key < k) {
                var = Some((v, key));
            }
        }
    }
    let (v, _) = match var {
        Some(x) => x,
        // Both primitive parts are units.
        None => return Some(MPoly::constant(&vars, g0)),
    };
    let max_deg = pa.degree_in(v).unwrap_or(0).min(pb.degree_in(v).unwrap_or(0));

    let norm = coeff_norm(&pa).min(coeff_norm(&pb));
    let mut xi: BigInt = BigInt::from(2) * norm + BigInt::from(29);
    for _ in 0..6 {
        let ae = eval_var_int(&pa, v, &xi);
        let be = eval_var_int(&pb, v, &xi);
        if !ae.is_zero() && !be.is_zero() {
            if let Some(gamma) = heuristic_full(&ae, &be, depth + 1) {
                if let Some(g) = reconstruct(&gamma, v, &xi, max_deg) {
                    // The result we seek at this level is primitive.
                    let g = integer_primitive(&g);
                    if pa.divide_exact(&g).is_some() && pb.divide_exact(&g).is_some() {
                        return Some(g.scale(&g0));
                    }
                }
            }
        }
        xi = (&xi * BigInt::from(73794)) / BigInt::from(27011) + BigInt::from(17);
    }
    None
}

/// gcd of a list, with early exit on 1.
pub fn gcd_list(polys: &[MPoly]) -> MPoly {
    let mut acc: Option<MPoly> = None;
    for p in polys {
        acc = Some(match acc {
            None => p.monic(),
            Some(g) => gcd(&g, p),
        });
        if let Some(g) = &acc {
            if g.is_one() {
                return g.clone();
            }
        }
    }
    acc.unwrap_or_else(|| MPoly::zero(polys[0].vars()))
}

fn gcd_stripped(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.as_constant().is_some() || b.as_constant().is_some() {
        return MPoly::one(a.vars());
    }
    if a == b {
        return a.monic();
    }

    // Main variable: present in both, minimizing the larger degree.
    let nv = a.vars().len();
    let mut main: Option<(usize, u32)> = None;
    for v in 0..nv {
        let da = a.degree_in(v).unwrap_or(0);
        let db = b.degree_in(v).unwrap_or(0);
        if da > 0 && db > 0 {
            let key = da.max(db);
            if main.map_or(true, |(_, k)| key < k) {
                main = Some((v, key));
            }
        }
    }
    let v = match main {
        Some((v, _)) => v,
        // No common variable: coprime up to constants.
        None => return MPoly::one(a.vars()),
    };

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.divide_exact(&ca).expect("content divides");
    let pb = b.divide_exact(&cb).expect("content divides");
    let gc = gcd(&ca, &cb);

    let gp = prs_gcd(&pa, &pb, v);
    (&gc * &gp).monic()
}

/// Content of `p` with respect to `v`: gcd of its `v`-coefficients.
fn content_in(p: &MPoly, v: usize) -> MPoly {
    let coeffs = p.coeffs_in(v);
    let nonzero: Vec<MPoly> = coeffs.into_iter().filter(|c| !c.is_zero()).collect();
    gcd_list(&nonzero)
}

fn primitive_part(p: &MPoly, v: usize) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, v);
    p.divide_exact(&c).expect("content divides").monic()
}

/// Primitive PRS on two primitive polynomials in the main variable `v`.
fn prs_gcd(a: &MPoly, b: &MPoly, v: usize) -> MPoly {
    let (mut r0, mut r1) = if a.degree_in(v) >= b.degree_in(v) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if r1.is_zero() {
            return primitive_part(&r0, v);
        }
        if r1.degree_in(v).unwrap_or(0) == 0 {
            // Nonzero v-free remainder of primitive inputs: coprime in v.
            return MPoly::one(a.vars());
        }
        let r2 = pseudo_rem(&r0, &r1, v);
        let r2 = if r2.is_zero() { r2 } else { primitive_part(&r2, v) };
        r0 = r1;
        r1 = r2;
    }
}

/// Pseudo-remainder of `f` by `g` in variable `v`: some `lc(g)^k * f mod g`
/// computed without coefficient fractions.
pub fn pseudo_rem(f: &MPoly, g: &MPoly, v: usize) -> MPoly {
    let vars = f.vars().clone();
    let dg = g.degree_in(v).expect("pseudo_rem by zero") as usize;
    let gc = g.coeffs_in(v);
    let lg = gc[dg].clone();
    let mut fc = f.coeffs_in(v);
    loop {
        while fc.last().is_some_and(|c| c.is_zero()) {
            fc.pop();
        }
        if fc.len() <= dg {
            return MPoly::from_coeffs_in(&vars, v, &fc);
        }
        let df = fc.len() - 1;
        let lf = fc[df].clone();
        let shift = df - dg;
        // f := lg*f - lf * x^shift * g
        for c in fc.iter_mut() {
            *c = &*c * &lg;
        }
        for (i, gcoef) in gc.iter().enumerate() {
            let t = &lf * gcoef;
            fc[i + shift] = &fc[i + shift] - &t;
        }
        debug_assert!(fc[df].is_zero());
    }
}
