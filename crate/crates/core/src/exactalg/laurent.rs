//! Laurent expansion of rational functions at a point.

use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::Error;

/// Expansion center: a finite point (an expression in the remaining
/// symbols) or the point at infinity, handled through `v -> 1/v`.
#[derive(Clone, Debug)]
pub enum PointSpec {
    Finite(RatFunc),
    Infinity,
}

impl PointSpec {
    pub fn origin(r: &RatFunc) -> PointSpec {
        PointSpec::Finite(RatFunc::zero(r.vars()))
    }
}

/// Move the expansion point to the origin: `v -> v + c` for a finite
/// center (which must not involve `v`), `v -> 1/v` for infinity. Both are
/// coprimality-preserving changes of variable.
pub fn recenter_at_zero(r: &RatFunc, v: &str, center: &PointSpec) -> Result<RatFunc, Error> {
    let vars = r.vars().clone();
    let vi = vars.index(v).ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
    match center {
        PointSpec::Finite(c) => {
            assert_eq!(c.vars(), &vars, "center vars mismatch");
            if c.num().contains_var(vi) || c.den().contains_var(vi) {
                return Err(Error::UnknownSymbol(format!(
                    "center must not involve the expansion variable {v}"
                )));
            }
            if c.is_zero() {
                Ok(r.clone())
            } else if c.is_polynomial() {
                Ok(r.shift_var(vi, c.num()))
            } else {
                // Rational center: clear it through v -> v + n/d by the
                // scaling v -> v/d first; equivalently substitute with the
                // general engine.
                let vv = RatFunc::var(&vars, v)?;
                let mut b = std::collections::BTreeMap::new();
                b.insert(v.to_string(), &vv + c);
                r.substitute(&b)
            }
        }
        PointSpec::Infinity => Ok(r.invert_var(vi)),
    }
}

/// Coefficients `a_{from}, ..., a_{from+count-1}` of the Laurent series of
/// `r` in `(v - center)`. For `PointSpec::Infinity` the series is taken in
/// `w = 1/v` (so order conventions are in `w`); any pull-back weight is the
/// caller's business. Coefficients live in the remaining-symbol field (the
/// same `Vars`, free of `v`).
pub fn laurent_coeffs(
    r: &RatFunc,
    v: &str,
    center: &PointSpec,
    from_order: i64,
    count: usize,
) -> Result<Vec<RatFunc>, Error> {
    let vars = r.vars().clone();
    let vi = vars.index(v).ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
    let shifted = recenter_at_zero(r, v, center)?;
    expand_at_zero(&shifted, vi, from_order, count)
}

/// Laurent coefficients at `v = 0`: with n/d and d = v^b·(d0 + d1 v + ...),
/// d0 ≠ 0, the series coefficients satisfy
/// c_k = (n_k − Σ_{j≥1} d_j c_{k−j}) / d0. Keeping every c_k in reduced
/// form keeps the intermediates small; the cancellations are real.
fn expand_at_zero(
    r: &RatFunc,
    vi: usize,
    from_order: i64,
    count: usize,
) -> Result<Vec<RatFunc>, Error> {
    let vars = r.vars().clone();
    if r.is_zero() {
        return Ok(vec![RatFunc::zero(&vars); count]);
    }
    let num = r.num();
    let den = r.den();
    let a = num.valuation_in(vi).unwrap() as i64;
    let b = den.valuation_in(vi).unwrap() as i64;
    let lead = a - b;

    let strip = |p: &MPoly, val: i64| -> Vec<RatFunc> {
        let cs = p.coeffs_in(vi);
        cs[val as usize..].iter().cloned().map(RatFunc::from_poly).collect()
    };
    let n_c = strip(num, a);
    let d_c = strip(den, b);
    let d0 = &d_c[0];

    let need = {
        let hi = from_order + count as i64 - 1;
        if hi < lead {
            0
        } else {
            (hi - lead + 1) as usize
        }
    };
    let mut series: Vec<RatFunc> = Vec::with_capacity(need);
    for k in 0..need {
        let mut s = if k < n_c.len() { n_c[k].clone() } else { RatFunc::zero(&vars) };
        for j in 1..=k.min(d_c.len() - 1) {
            let t = &d_c[j] * &series[k - j];
            s = &s - &t;
        }
        series.push((&s / d0)?);
    }

    let mut out = Vec::with_capacity(count);
    for ord in from_order..from_order + count as i64 {
        if ord < lead {
            out.push(RatFunc::zero(&vars));
        } else {
            out.push(series[(ord - lead) as usize].clone());
        }
    }
    Ok(out)
}

/// Order of the pole of `r` in `v` at the given center: the negative of
/// the lowest Laurent order, 0 or negative when `r` is regular or vanishes
/// there, `None` when `r` is identically 0.
pub fn pole_order(r: &RatFunc, v: &str, center: &PointSpec) -> Result<Option<i64>, Error> {
    let vars = r.vars().clone();
    let vi = vars.index(v).ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
    if r.is_zero() {
        return Ok(None);
    }
    let shifted = recenter_at_zero(r, v, center)?;
    let a = shifted.num().valuation_in(vi).unwrap() as i64;
    let b = shifted.den().valuation_in(vi).unwrap() as i64;
    Ok(Some(b - a))
}
