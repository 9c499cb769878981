//! Reduction modulo one algebraic relation.
//!
//! An [`AlgebraicContext`] binds a generator symbol by an irreducible
//! polynomial relation over the fraction field of the base parameters.
//! Irreducibility in the generator is the caller's promise; it is what
//! makes `equals_mod` a field-level equality test.

use super::gcd::pseudo_rem;
use super::mpoly::MPoly;
use super::ratfunc::RatFunc;
use super::vars::Vars;
use super::Error;

#[derive(Clone, Debug)]
pub struct AlgebraicContext {
    pub generator: String,
    pub base_params: Vec<String>,
    pub relation: MPoly,
}

impl AlgebraicContext {
    /// `relation` must have positive degree in `generator`; its remaining
    /// variables become the base parameters.
    pub fn new(generator: &str, relation: MPoly) -> Result<Self, Error> {
        let gi = relation
            .vars()
            .index(generator)
            .ok_or_else(|| Error::UnknownSymbol(generator.to_string()))?;
        if relation.degree_in(gi).unwrap_or(0) == 0 {
            return Err(Error::DegenerateRelation);
        }
        let base_params = relation
            .vars()
            .names()
            .iter()
            .filter(|n| n.as_str() != generator)
            .cloned()
            .collect();
        Ok(AlgebraicContext { generator: generator.to_string(), base_params, relation })
    }

    fn embedded(&self, vars: &Vars) -> Result<(usize, MPoly), Error> {
        let gi = vars
            .index(&self.generator)
            .ok_or_else(|| Error::UnknownSymbol(self.generator.clone()))?;
        Ok((gi, self.relation.embed(vars)?))
    }

    /// Fraction-free test `p ≡ 0 (mod relation)` over the base-parameter
    /// fraction field.
    pub fn poly_is_zero(&self, p: &MPoly) -> Result<bool, Error> {
        let (gi, rel) = self.embedded(p.vars())?;
        if p.is_zero() {
            return Ok(true);
        }
        if p.degree_in(gi).unwrap_or(0) < rel.degree_in(gi).unwrap() {
            return Ok(p.is_zero());
        }
        Ok(pseudo_rem(p, &rel, gi).is_zero())
    }

    /// Remainder of `p` under division by the relation, as a polynomial in
    /// the generator with rational-function coefficients, then recombined.
    pub fn poly_reduce(&self, p: &MPoly) -> Result<RatFunc, Error> {
        let vars = p.vars().clone();
        let (gi, rel) = self.embedded(&vars)?;
        let dg = rel.degree_in(gi).unwrap() as usize;
        let rel_c: Vec<RatFunc> =
            rel.coeffs_in(gi).into_iter().map(RatFunc::from_poly).collect();
        let lead = rel_c[dg].clone();

        let mut f: Vec<RatFunc> =
            p.coeffs_in(gi).into_iter().map(RatFunc::from_poly).collect();
        loop {
            while f.last().is_some_and(|c| c.is_zero()) {
                f.pop();
            }
            if f.len() <= dg {
                break;
            }
            let df = f.len() - 1;
            let q = (&f[df] / &lead).expect("relation leading coefficient nonzero");
            let shift = df - dg;
            for (i, rc) in rel_c.iter().enumerate() {
                let t = &q * rc;
                f[i + shift] = &f[i + shift] - &t;
            }
            debug_assert!(f[df].is_zero());
            f.pop();
        }

        let gen = RatFunc::var(&vars, &self.generator)?;
        let mut acc = RatFunc::zero(&vars);
        for c in f.iter().rev() {
            acc = &(&acc * &gen) + c;
        }
        Ok(acc)
    }
}

/// Reduce a rational function modulo the relation: numerator and
/// denominator are replaced by their remainders. Errors when the
/// denominator is ≡ 0 on the curve.
pub fn reduce_mod(r: &RatFunc, ctx: &AlgebraicContext) -> Result<RatFunc, Error> {
    let den_red = ctx.poly_reduce(r.den())?;
    if den_red.is_zero() {
        return Err(Error::SingularOnCurve);
    }
    let num_red = ctx.poly_reduce(r.num())?;
    &num_red / &den_red
}

/// `a ≡ b (mod relation)`: the cross-multiplied difference reduces to zero
/// and both denominators stay nonzero on the curve.
pub fn equals_mod(a: &RatFunc, b: &RatFunc, ctx: &AlgebraicContext) -> Result<bool, Error> {
    for d in [a.den(), b.den()] {
        if ctx.poly_is_zero(d)? {
            return Err(Error::SingularOnCurve);
        }
    }
    let cross = &(a.num() * b.den()) - &(b.num() * a.den());
    ctx.poly_is_zero(&cross)
}

/// Laurent coefficients of `r` at a center that may be algebraic over the
/// base parameters: orders and coefficients are taken on the curve, i.e.
/// every series coefficient is reduced modulo the relation as it is
/// produced. Returns coefficients a_{from}, ..., a_{from+count-1}.
pub fn laurent_coeffs_mod(
    r: &RatFunc,
    v: &str,
    center: &super::laurent::PointSpec,
    from_order: i64,
    count: usize,
    ctx: &AlgebraicContext,
) -> Result<Vec<RatFunc>, Error> {
    let vars = r.vars().clone();
    let vi = vars.index(v).ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
    let shifted = super::laurent::recenter_at_zero(r, v, center)?;
    if shifted.is_zero() {
        return Ok(vec![RatFunc::zero(&vars); count]);
    }

    // Reduce the v-coefficient arrays on the curve; the valuations are the
    // first indices with nonzero reduced coefficient.
    let reduce_coeffs = |p: &MPoly| -> Result<Vec<RatFunc>, Error> {
        p.coeffs_in(vi).iter().map(|c| ctx.poly_reduce(c)).collect()
    };
    let n_all = reduce_coeffs(shifted.num())?;
    let d_all = reduce_coeffs(shifted.den())?;
    let a = n_all.iter().position(|c| !c.is_zero());
    let b = d_all
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(Error::SingularOnCurve)?;
    let a = match a {
        None => return Ok(vec![RatFunc::zero(&vars); count]),
        Some(a) => a,
    };
    let n_c = &n_all[a..];
    let d_c = &d_all[b..];
    let d0 = &d_c[0];
    let lead = a as i64 - b as i64;

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
        for j in 1..=k.min(d_c.len().saturating_sub(1)) {
            let t = &d_c[j] * &series[k - j];
            s = &s - &t;
        }
        let c = (&s / d0)?;
        series.push(reduce_mod(&c, ctx)?);
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

/// Pole order of `r` at the center, computed on the curve. `None` when `r`
/// vanishes identically on the curve.
pub fn pole_order_mod(
    r: &RatFunc,
    v: &str,
    center: &super::laurent::PointSpec,
    ctx: &AlgebraicContext,
) -> Result<Option<i64>, Error> {
    let vars = r.vars().clone();
    let vi = vars.index(v).ok_or_else(|| Error::UnknownSymbol(v.to_string()))?;
    let shifted = super::laurent::recenter_at_zero(r, v, center)?;
    if shifted.is_zero() {
        return Ok(None);
    }
    let val = |p: &MPoly| -> Result<Option<usize>, Error> {
        for (k, c) in p.coeffs_in(vi).iter().enumerate() {
            if !ctx.poly_is_zero(c)? {
                return Ok(Some(k));
            }
        }
        Ok(None)
    };
    let a = match val(shifted.num())? {
        None => return Ok(None),
        Some(a) => a,
    };
    let b = val(shifted.den())?.ok_or(Error::SingularOnCurve)?;
    Ok(Some(b as i64 - a as i64))
}
