//! Scalar second-order equations over exact coefficient fields: SL normal
//! form, Schwarzian derivative and its pull-back cocycle, local formal
//! invariants computed from Riccati series, apparent-singularity
//! obstructions, and accessory-parameter solving.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactalg::{
    laurent_coeffs, rat, reduce_mod, AlgebraicContext, Error as AlgError, MPoly, PointSpec, Rat,
    RatFunc,
};
use crate::formal::{Exponent, HalfInt};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum OdeError {
    ConstantMap,
    NonSquare(String),
    UnsupportedExponent(String),
    NotApparentCandidate(String),
    NonlinearAccessory,
    SingularSystem,
    InconsistentFibers,
    Alg(AlgError),
}

impl fmt::Display for OdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::ConstantMap => write!(f, "rational map is constant"),
            OdeError::NonSquare(s) => write!(f, "not a perfect square: {s}"),
            OdeError::UnsupportedExponent(s) => write!(f, "unsupported exponent shape: {s}"),
            OdeError::NotApparentCandidate(s) => {
                write!(f, "not a candidate apparent point: {s}")
            }
            OdeError::NonlinearAccessory => {
                write!(f, "obstruction is not affine-linear in the unknowns")
            }
            OdeError::SingularSystem => write!(f, "singular accessory linear system"),
            OdeError::InconsistentFibers => {
                write!(f, "declared fibers do not divide the critical polynomial")
            }
            OdeError::Alg(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for OdeError {}

impl From<AlgError> for OdeError {
    fn from(e: AlgError) -> Self {
        OdeError::Alg(e)
    }
}

/// u'' + f u' + g u = 0 over the parameter field.
#[derive(Clone, Debug)]
pub struct GeneralScalar {
    pub indep: String,
    pub f: RatFunc,
    pub g: RatFunc,
}

/// v'' = Q v.
#[derive(Clone, PartialEq, Debug)]
pub struct SLForm {
    pub indep: String,
    pub q: RatFunc,
}

/// A non-constant rational covering map in one variable.
#[derive(Clone, Debug)]
pub struct RationalMap {
    pub indep: String,
    pub value: RatFunc,
}

/// Local formal data read off one pole of an SL form.
#[derive(Clone, PartialEq, Debug)]
pub struct LocalInvariant {
    pub kappa: HalfInt,
    pub theta: Exponent,
    pub pole_order: i64,
    pub apparent: Option<bool>,
}

/// Gauge u = v·exp(-∫f/2) brings u'' + f u' + g u = 0 to v'' = Q v with
/// Q = f²/4 + f'/2 − g.
pub fn sl_normalize(e: &GeneralScalar) -> Result<SLForm, OdeError> {
    let xi = e
        .f
        .vars()
        .index(&e.indep)
        .ok_or_else(|| AlgError::UnknownSymbol(e.indep.clone()))?;
    let quarter = RatFunc::constant(e.f.vars(), rat(1, 4));
    let half = RatFunc::constant(e.f.vars(), rat(1, 2));
    let f2 = &(&e.f * &e.f) * &quarter;
    let fp = &e.f.derivative(xi) * &half;
    let q = &(&f2 + &fp) - &e.g;
    Ok(SLForm { indep: e.indep.clone(), q })
}

/// Schwarzian derivative {φ, x} = (φ''/φ')' − ½(φ''/φ')².
pub fn schwarzian(phi: &RationalMap) -> Result<RatFunc, OdeError> {
    let xi = phi
        .value
        .vars()
        .index(&phi.indep)
        .ok_or_else(|| AlgError::UnknownSymbol(phi.indep.clone()))?;
    let d1 = phi.value.derivative(xi);
    if d1.is_zero() {
        return Err(OdeError::ConstantMap);
    }
    let d2 = d1.derivative(xi);
    let h = (&d2 / &d1)?;
    let half = RatFunc::constant(phi.value.vars(), rat(1, 2));
    Ok(&h.derivative(xi) - &(&(&h * &h) * &half))
}

/// Pull back an SL form through φ: Q̃ = (Q∘φ)·(φ')² − ½{φ,x}. The
/// solution-ratio of the result is w∘φ where w is the ratio for Q.
pub fn sl_pullback(q: &SLForm, phi: &RationalMap) -> Result<SLForm, OdeError> {
    assert_eq!(q.q.vars(), phi.value.vars(), "vars mismatch in sl_pullback");
    let xi = phi
        .value
        .vars()
        .index(&phi.indep)
        .ok_or_else(|| AlgError::UnknownSymbol(phi.indep.clone()))?;
    let mut b = BTreeMap::new();
    b.insert(q.indep.clone(), phi.value.clone());
    let q_comp = q.q.substitute(&b)?;
    let d1 = phi.value.derivative(xi);
    if d1.is_zero() {
        return Err(OdeError::ConstantMap);
    }
    let half = RatFunc::constant(q.q.vars(), rat(1, 2));
    let sch = schwarzian(phi)?;
    Ok(SLForm {
        indep: phi.indep.clone(),
        q: &(&q_comp * &(&d1 * &d1)) - &(&sch * &half),
    })
}

/// Move the expansion point of `q` to the origin: x → x + c for a finite
/// center, x → 1/x with the quartic cocycle weight for infinity.
fn recenter(q: &RatFunc, x: &str, center: &PointSpec) -> Result<RatFunc, OdeError> {
    let vars = q.vars().clone();
    let shifted = crate::exactalg::recenter_at_zero(q, x, center)?;
    match center {
        PointSpec::Finite(_) => Ok(shifted),
        PointSpec::Infinity => {
            let xv = RatFunc::var(&vars, x)?;
            Ok(&shifted * &xv.pow(-4).expect("x nonzero"))
        }
    }
}

/// Laurent coefficients of `q0` at the origin. With a context the whole
/// expansion happens on the curve (valuations included): coefficients that
/// vanish modulo the relation shift the pole order.
fn coeffs_at(
    q0: &RatFunc,
    x: &str,
    from: i64,
    count: usize,
    ctx: Option<&AlgebraicContext>,
) -> Result<Vec<RatFunc>, OdeError> {
    let zero = PointSpec::Finite(RatFunc::zero(q0.vars()));
    match ctx {
        None => Ok(laurent_coeffs(q0, x, &zero, from, count)?),
        Some(c) => Ok(crate::exactalg::laurent_coeffs_mod(q0, x, &zero, from, count, c)?),
    }
}

/// Square root of a polynomial; `None` when it is not a perfect square.
pub fn poly_sqrt(p: &MPoly) -> Option<MPoly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let (lm, lc) = p.leading()?;
    let half_mono = crate::exactalg::Mono(
        lm.0.iter()
            .map(|&e| if e % 2 == 0 { Some(e / 2) } else { None })
            .collect::<Option<Vec<u32>>>()?,
    );
    let lc_sqrt = rat_sqrt(lc)?;
    let mut s = MPoly::from_terms(p.vars(), {
        let mut t = BTreeMap::new();
        t.insert(half_mono, lc_sqrt);
        t
    });
    let bound = p.total_degree() / 2;
    for _ in 0..4096 {
        let r = p - &(&s * &s);
        if r.is_zero() {
            return Some(s);
        }
        let (rm, rc) = r.leading().unwrap();
        let (sm, sc) = s.leading().unwrap();
        let m = rm.div(sm)?;
        if m.total_degree() > bound {
            return None;
        }
        let c = rc / (rat(2, 1) * sc);
        let t = MPoly::from_terms(p.vars(), {
            let mut t = BTreeMap::new();
            t.insert(m, c);
            t
        });
        let s2 = &s + &t;
        if s2.leading().map(|(m, _)| m.clone()) != s.leading().map(|(m, _)| m.clone()) {
            return None;
        }
        s = s2;
    }
    None
}

fn rat_sqrt(c: &Rat) -> Option<Rat> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Square root of a rational function: both numerator and denominator must
/// be perfect squares up to the monic normalization.
pub fn ratfunc_sqrt(r: &RatFunc) -> Option<RatFunc> {
    let n = poly_sqrt(r.num())?;
    let d = poly_sqrt(r.den())?;
    Some(RatFunc::new(n, d).expect("den nonzero"))
}

/// Convert a rational function of the parameters into an exponent.
/// Accepts constants and affine integer combinations of parameters.
fn ratfunc_to_exponent(r: &RatFunc) -> Result<Exponent, OdeError> {
    if let Some(c) = r.as_constant() {
        return Ok(Exponent::Rational(c));
    }
    if !r.is_polynomial() {
        return Err(OdeError::UnsupportedExponent(r.to_string()));
    }
    let mut coeffs = BTreeMap::new();
    let mut shift = Rat::zero();
    for (m, c) in r.num().terms() {
        match m.total_degree() {
            0 => shift = c.clone(),
            1 => {
                let idx = m.0.iter().position(|&e| e == 1).unwrap();
                if !c.denom().is_one() {
                    return Err(OdeError::UnsupportedExponent(r.to_string()));
                }
                let ci: i64 = c
                    .numer()
                    .try_into()
                    .map_err(|_| OdeError::UnsupportedExponent(r.to_string()))?;
                coeffs.insert(r.vars().name(idx).to_string(), ci);
            }
            _ => return Err(OdeError::UnsupportedExponent(r.to_string())),
        }
    }
    Ok(Exponent::affine(coeffs, shift))
}

/// Reported-θ normalization: rational non-integers fold into [0, 1/2] by
/// the gauge action, integers keep their absolute value (that is the
/// resonance order), affine exponents normalize the overall sign.
fn normalize_theta(e: Exponent) -> Exponent {
    match e {
        Exponent::Rational(r) => {
            if r.denom().is_one() {
                Exponent::Rational(r.abs())
            } else {
                let f = r.fract();
                let mut f = if f.is_negative() { f + Rat::one() } else { f };
                if f > rat(1, 2) {
                    f = Rat::one() - f;
                }
                Exponent::Rational(f)
            }
        }
        Exponent::Affine { coeffs, shift } => {
            let first = coeffs.values().next().copied().unwrap_or(0);
            if first < 0 {
                Exponent::affine(coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect(), -shift)
            } else {
                Exponent::Affine { coeffs, shift }
            }
        }
    }
}

/// Formal invariants (κ, θ) of v'' = Qv at a point. The pole order ℓ gives
/// κ = (ℓ−2)/2 for ℓ ≥ 3; for ℓ ≤ 2 the exponent is √(1+4c₂); for even
/// ℓ ≥ 4 it is the difference of the residues of the two formal Riccati
/// branches of ω' + ω² = Q.
pub fn local_invariants(
    q: &SLForm,
    center: &PointSpec,
    ctx: Option<&AlgebraicContext>,
) -> Result<LocalInvariant, OdeError> {
    let x = q.indep.as_str();
    let q0 = recenter(&q.q, x, center)?;
    let vars = q0.vars().clone();

    // Pole order, on the curve when a relation is in play.
    let zero_pt = PointSpec::Finite(RatFunc::zero(&vars));
    let order = match ctx {
        None => crate::exactalg::pole_order(&q0, x, &zero_pt)?,
        Some(c) => crate::exactalg::pole_order_mod(&q0, x, &zero_pt, c)?,
    }
    .unwrap_or(0);

    if order <= 0 {
        return Ok(LocalInvariant {
            kappa: HalfInt::ZERO,
            theta: Exponent::zero(),
            pole_order: 0,
            apparent: None,
        });
    }

    if order <= 2 {
        // Logarithmic point: θ² = 1 + 4c₋₂.
        let c2 = coeffs_at(&q0, x, -2, 1, ctx)?.remove(0);
        let disc = &RatFunc::one(&vars) + &(&c2 * &RatFunc::int(&vars, 4));
        let root =
            ratfunc_sqrt(&disc).ok_or_else(|| OdeError::NonSquare(format!("1+4c2 = {disc}")))?;
        let theta = normalize_theta(ratfunc_to_exponent(&root)?);
        let apparent = match &theta {
            Exponent::Rational(r) if r.denom().is_one() && r.numer() > &BigInt::zero() => {
                let n: i64 = r.numer().try_into().unwrap();
                Some(apparent_obstruction_at_origin(&q0, x, n, ctx)?.is_zero())
            }
            _ => None,
        };
        return Ok(LocalInvariant { kappa: HalfInt::ZERO, theta, pole_order: order, apparent });
    }

    let kappa = HalfInt::from_twice(order - 2);
    if order % 2 == 1 {
        return Ok(LocalInvariant {
            kappa,
            theta: Exponent::zero(),
            pole_order: order,
            apparent: None,
        });
    }

    // Even order 2L >= 4: solve ω' + ω² = Q term by term from the leading
    // square root; θ is the difference of the two branch residues.
    let l = order / 2;
    let qs = coeffs_at(&q0, x, -2 * l, l as usize, ctx)?;
    let lead = &qs[0];
    let s = ratfunc_sqrt(lead)
        .ok_or_else(|| OdeError::NonSquare(format!("leading coefficient {lead}")))?;
    let residue = |sign: i64| -> Result<RatFunc, OdeError> {
        let w_lead = &s * &RatFunc::int(&vars, sign);
        // ω_i for i = -L..-1, stored at index i+L.
        let mut w: Vec<RatFunc> = vec![RatFunc::zero(&vars); l as usize];
        w[0] = w_lead.clone();
        for i in (-l + 1)..=(-1i64) {
            let m = i - l;
            let mut rhs = qs[(m + 2 * l) as usize].clone();
            // products ω_{i1}ω_{i2} with i1+i2 = m, both strictly between
            // -L and i
            for i1 in (-l + 1)..i {
                let i2 = m - i1;
                if i2 <= -l || i2 >= i || i2 < i1 {
                    continue;
                }
                let prod = &w[(i1 + l) as usize] * &w[(i2 + l) as usize];
                let f = if i1 == i2 { 1 } else { 2 };
                rhs = &rhs - &(&prod * &RatFunc::int(&vars, f));
            }
            if i == -1 {
                // derivative contribution (m+1)ω_{m+1} at m+1 = -L
                rhs = &rhs - &(&w[0] * &RatFunc::int(&vars, -l));
            }
            let denom = &w_lead * &RatFunc::int(&vars, 2);
            let val = (&rhs / &denom)?;
            let val = match ctx {
                Some(c) => reduce_mod(&val, c)?,
                None => val,
            };
            w[(i + l) as usize] = val;
        }
        Ok(w[(l - 1) as usize].clone())
    };
    let diff = &residue(1)? - &residue(-1)?;
    let diff = match ctx {
        Some(c) => reduce_mod(&diff, c)?,
        None => diff,
    };
    let theta = normalize_theta(ratfunc_to_exponent(&diff)?);
    Ok(LocalInvariant { kappa, theta, pole_order: order, apparent: None })
}

/// Frobenius resonance obstruction at a logarithmic point with integer
/// exponent n ≥ 1, for the recentered form. Zero iff no logarithm appears,
/// i.e. the point is apparent.
fn apparent_obstruction_at_origin(
    q0: &RatFunc,
    x: &str,
    n: i64,
    ctx: Option<&AlgebraicContext>,
) -> Result<RatFunc, OdeError> {
    let vars = q0.vars().clone();
    // Need c_{-2} .. c_{n-2}; with u = Σ u_k x^{k+ρ} at the smaller root ρ
    // the recursion collapses to k(k-n)·u_k = Σ_{j<k} c_{k-2-j}·u_j.
    let cs = coeffs_at(q0, x, -2, (n + 1) as usize, ctx)?;
    let c = |m: i64| -> &RatFunc { &cs[(m + 2) as usize] };
    let mut u: Vec<RatFunc> = vec![RatFunc::one(&vars)];
    for k in 1..n {
        let mut rhs = RatFunc::zero(&vars);
        for (j, uj) in u.iter().enumerate() {
            let m = k - 2 - j as i64;
            if m >= -2 {
                rhs = &rhs + &(c(m) * uj);
            }
        }
        let denom = RatFunc::int(&vars, k * (k - n));
        let val = (&rhs / &denom)?;
        let val = match ctx {
            Some(cx) => reduce_mod(&val, cx)?,
            None => val,
        };
        u.push(val);
    }
    let mut obstruction = RatFunc::zero(&vars);
    for (j, uj) in u.iter().enumerate() {
        let m = n - 2 - j as i64;
        if m >= -2 {
            obstruction = &obstruction + &(c(m) * uj);
        }
    }
    match ctx {
        Some(cx) => Ok(reduce_mod(&obstruction, cx)?),
        None => Ok(obstruction),
    }
}

/// Resonance obstruction of `q` at `center`; the precondition is a
/// logarithmic point with integer indicial difference n ≥ 1.
pub fn apparent_obstruction(
    q: &SLForm,
    center: &PointSpec,
    ctx: Option<&AlgebraicContext>,
) -> Result<RatFunc, OdeError> {
    let inv = local_invariants(q, center, ctx)?;
    if !inv.kappa.is_zero() || inv.pole_order == 0 {
        return Err(OdeError::NotApparentCandidate(format!(
            "pole order {} at the center",
            inv.pole_order
        )));
    }
    let n = match &inv.theta {
        Exponent::Rational(r) if r.denom().is_one() && r.numer() > &BigInt::zero() => {
            let n: i64 = r.numer().try_into().unwrap();
            n
        }
        t => {
            return Err(OdeError::NotApparentCandidate(format!(
                "exponent {t} is not a positive integer"
            )))
        }
    };
    let q0 = recenter(&q.q, &q.indep, center)?;
    apparent_obstruction_at_origin(&q0, &q.indep, n, ctx)
}

/// Solve for accessory parameters: the values of the unknowns making the
/// resonance obstruction vanish at every listed apparent point. Each
/// obstruction must be affine-linear in the unknowns jointly and the
/// resulting square system nonsingular.
pub fn solve_accessory(
    template: &SLForm,
    unknowns: &[String],
    apparent_points: &[RatFunc],
) -> Result<BTreeMap<String, RatFunc>, OdeError> {
    if unknowns.len() != apparent_points.len() || unknowns.is_empty() {
        return Err(OdeError::SingularSystem);
    }
    let vars = template.q.vars().clone();
    let m = unknowns.len();
    let idx: Vec<usize> = unknowns
        .iter()
        .map(|u| vars.index(u).ok_or_else(|| AlgError::UnknownSymbol(u.clone())))
        .collect::<Result<_, _>>()?;

    // rows: obstruction_i = Σ_j A[i][j]·H_j + b[i]
    let mut mat: Vec<Vec<RatFunc>> = Vec::with_capacity(m);
    let mut rhs: Vec<RatFunc> = Vec::with_capacity(m);
    for pt in apparent_points {
        let obs = apparent_obstruction(template, &PointSpec::Finite(pt.clone()), None)?;
        for &ui in &idx {
            if obs.den().contains_var(ui) {
                return Err(OdeError::NonlinearAccessory);
            }
        }
        let mut row = vec![MPoly::zero(&vars); m];
        let mut cst = MPoly::zero(&vars);
        for (mono, coef) in obs.num().terms() {
            let deg_unknowns: u32 = idx.iter().map(|&ui| mono.0[ui]).sum();
            match deg_unknowns {
                0 => {
                    let mut t = BTreeMap::new();
                    t.insert(mono.clone(), coef.clone());
                    cst = &cst + &MPoly::from_terms(&vars, t);
                }
                1 => {
                    let j = idx.iter().position(|&ui| mono.0[ui] == 1).unwrap();
                    let mut stripped = mono.clone();
                    stripped.0[idx[j]] = 0;
                    let mut t = BTreeMap::new();
                    t.insert(stripped, coef.clone());
                    row[j] = &row[j] + &MPoly::from_terms(&vars, t);
                }
                _ => return Err(OdeError::NonlinearAccessory),
            }
        }
        let den = RatFunc::from_poly(obs.den().clone());
        mat.push(
            row.into_iter()
                .map(|p| (&RatFunc::from_poly(p) / &den).expect("den nonzero"))
                .collect(),
        );
        rhs.push(-&(&RatFunc::from_poly(cst) / &den).expect("den nonzero"));
    }

    // Gaussian elimination over the rational-function field: A·H = rhs.
    for col in 0..m {
        let pivot =
            (col..m).find(|&r| !mat[r][col].is_zero()).ok_or(OdeError::SingularSystem)?;
        mat.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = mat[col][col].clone();
        for r in 0..m {
            if r == col || mat[r][col].is_zero() {
                continue;
            }
            let factor = (&mat[r][col] / &p).expect("pivot nonzero");
            for c in 0..m {
                let t = &factor * &mat[col][c];
                mat[r][c] = &mat[r][c] - &t;
            }
            let t = &factor * &rhs[col];
            rhs[r] = &rhs[r] - &t;
        }
    }
    let mut out = BTreeMap::new();
    for col in 0..m {
        let v = (&rhs[col] / &mat[col][col]).map_err(|_| OdeError::SingularSystem)?;
        out.insert(unknowns[col].clone(), v);
    }
    Ok(out)
}

/// Monic polynomial whose roots are the critical points of φ away from the
/// declared fibers: the numerator of φ′ with each declared factor divided
/// out exactly to its stated power.
pub fn free_critical_points(
    phi: &RationalMap,
    declared: &[(MPoly, u32)],
) -> Result<MPoly, OdeError> {
    let xi = phi
        .value
        .vars()
        .index(&phi.indep)
        .ok_or_else(|| AlgError::UnknownSymbol(phi.indep.clone()))?;
    let d1 = phi.value.derivative(xi);
    if d1.is_zero() {
        return Err(OdeError::ConstantMap);
    }
    let mut g = d1.num().clone();
    for (factor, power) in declared {
        let f = factor.embed(g.vars())?;
        for _ in 0..*power {
            g = g.divide_exact(&f).ok_or(OdeError::InconsistentFibers)?;
        }
    }
    let xdeg = g.degree_in(xi).unwrap_or(0);
    if xdeg == 0 {
        return Ok(MPoly::one(g.vars()));
    }
    // Drop parameter-only content, then normalize the leading x-coefficient.
    let nonzero: Vec<MPoly> = g.coeffs_in(xi).into_iter().filter(|c| !c.is_zero()).collect();
    let content = crate::exactalg::gcd_list(&nonzero);
    if !content.is_one() {
        g = g.divide_exact(&content).expect("content divides");
    }
    let lead = g.coeffs_in(xi).pop().unwrap();
    if let Some(c) = lead.as_constant() {
        g = g.scale(&(Rat::one() / c));
    }
    Ok(g)
}
