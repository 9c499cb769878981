//! Canonical multivariate rational functions.
//!
//! Invariants: the denominator is nonzero, gcd(num, den) = 1, and the
//! denominator's leading coefficient under graded-lex is 1. Equal functions
//! therefore have identical representations and `==` is semantic equality.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::One;

use super::gcd::gcd;
use super::mpoly::{MPoly, Rat};
use super::vars::Vars;
use super::Error;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl RatFunc {
    /// Build and canonicalize; errors when `den` is the zero polynomial.
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, Error> {
        assert_eq!(num.vars(), den.vars(), "vars mismatch in RatFunc::new");
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(RatFunc { den: MPoly::one(num.vars()), num });
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.divide_exact(&g).expect("gcd divides num"),
                den.divide_exact(&g).expect("gcd divides den"),
            )
        };
        let lc = den.leading().expect("den nonzero").1.clone();
        if !lc.is_one() {
            let inv = Rat::one() / lc;
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MPoly) -> Self {
        RatFunc { den: MPoly::one(p.vars()), num: p }
    }

    pub fn zero(vars: &Vars) -> Self {
        Self::from_poly(MPoly::zero(vars))
    }

    pub fn one(vars: &Vars) -> Self {
        Self::from_poly(MPoly::one(vars))
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        Self::from_poly(MPoly::constant(vars, c))
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        Self::from_poly(MPoly::int(vars, n))
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, Error> {
        MPoly::var_named(vars, name)
            .map(Self::from_poly)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if !self.den.is_one() {
            return None;
        }
        self.num.as_constant()
    }

    pub fn inverse(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // num and den are coprime; only the monic normalization moves.
        let lc = self.num.leading().unwrap().1.clone();
        let inv = Rat::one() / lc;
        Ok(RatFunc { num: self.den.scale(&inv), den: self.num.scale(&inv) })
    }

    pub fn pow(&self, e: i64) -> Result<Self, Error> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.vars());
        // num and den stay coprime, so exponentiate them separately.
        let ue = e.unsigned_abs() as u32;
        acc.num = base.num.pow(ue);
        acc.den = base.den.pow(ue);
        Ok(acc)
    }

    pub fn derivative(&self, v: usize) -> Self {
        let n = &self.num;
        let d = &self.den;
        if d.is_one() {
            return Self::from_poly(n.derivative(v));
        }
        let raw_num = &(&n.derivative(v) * d) - &(n * &d.derivative(v));
        // Cancel against d before squaring: gcd(raw, d) carries the whole
        // common factor with d^2 except multiplicities, so finish with new().
        let g = gcd(&raw_num, d);
        if g.is_one() {
            RatFunc::new(raw_num, d * d).expect("den nonzero")
        } else {
            let num = raw_num.divide_exact(&g).unwrap();
            let d_red = d.divide_exact(&g).unwrap();
            RatFunc::new(num, &d_red * d).expect("den nonzero")
        }
    }

    pub fn derivative_named(&self, name: &str) -> Result<Self, Error> {
        let v = self.vars().index(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(self.derivative(v))
    }

    /// Substitute `v -> v + offset` (offset free of v). A ring
    /// automorphism, so the canonical form carries over without a gcd.
    pub fn shift_var(&self, v: usize, offset: &MPoly) -> Self {
        let num = self.num.shift_var(v, offset);
        let den = self.den.shift_var(v, offset);
        Self::new_reduced(num, &den)
    }

    /// Substitute `v -> 1/v`. Numerator and denominator reverse in `v`
    /// without gaining common factors beyond a power of `v`.
    pub fn invert_var(&self, v: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let (nr, dn) = self.num.reverse_var(v);
        let (dr, dd) = self.den.reverse_var(v);
        // num(1/v)/den(1/v) = nr·v^dd / (dr·v^dn); v divides neither nr
        // nor dr, so only the explicit v-power moves.
        let vm = {
            let mut e = vec![0u32; self.vars().len()];
            e[v] = dd.max(dn) - dd.min(dn);
            super::mpoly::Mono(e)
        };
        use num_traits::One;
        if dd >= dn {
            Self::new_reduced(nr.mul_mono(&vm, &Rat::one()), &dr)
        } else {
            Self::new_reduced(nr, &dr.mul_mono(&vm, &Rat::one()))
        }
    }

    /// Ring-homomorphic substitution. Bindings map variable names to values
    /// over `target`; unbound variables must exist in `target` and map to
    /// themselves.
    pub fn substitute_into(
        &self,
        target: &Vars,
        bindings: &BTreeMap<String, RatFunc>,
    ) -> Result<Self, Error> {
        for (k, v) in bindings {
            if self.vars().index(k).is_none() {
                return Err(Error::UnknownSymbol(k.clone()));
            }
            assert_eq!(v.vars(), target, "binding vars mismatch");
        }
        // All-polynomial bindings evaluate in the polynomial ring, with a
        // single canonicalization at the end.
        if self.vars() == target && bindings.values().all(RatFunc::is_polynomial) {
            let polys: BTreeMap<String, MPoly> =
                bindings.iter().map(|(k, v)| (k.clone(), v.num().clone())).collect();
            let nv = self.num.eval_poly(&polys);
            let dv = self.den.eval_poly(&polys);
            if dv.is_zero() {
                return Err(Error::ZeroDenominator);
            }
            return RatFunc::new(nv, dv);
        }
        let bind = |i: usize| -> RatFunc {
            let name = self.vars().name(i);
            match bindings.get(name) {
                Some(v) => v.clone(),
                None => RatFunc::var(target, name).expect("unbound variable missing in target"),
            }
        };
        let nv = self.num.eval(target, &bind)?;
        let dv = self.den.eval(target, &bind)?;
        if dv.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        &nv / &dv
    }

    /// Substitution with the same variable set on both sides.
    pub fn substitute(&self, bindings: &BTreeMap<String, RatFunc>) -> Result<Self, Error> {
        self.substitute_into(self.vars(), bindings)
    }

    /// Re-express over a superset of the variables.
    pub fn embed(&self, target: &Vars) -> Result<Self, Error> {
        Ok(RatFunc { num: self.num.embed(target)?, den: self.den.embed(target)? })
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let g0 = gcd(&self.den, &rhs.den);
        if g0.is_one() {
            let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            return RatFunc::new(num, &self.den * &rhs.den).expect("den nonzero");
        }
        let db = rhs.den.divide_exact(&g0).unwrap();
        let da = self.den.divide_exact(&g0).unwrap();
        let num = &(&self.num * &db) + &(&rhs.num * &da);
        // Remaining cancellation can only involve g0.
        let g1 = gcd(&num, &g0);
        if g1.is_one() {
            RatFunc::new_reduced(num, &(&self.den * &db))
        } else {
            let num = num.divide_exact(&g1).unwrap();
            let den = &self.den.divide_exact(&g1).unwrap() * &db;
            RatFunc::new_reduced(num, &den)
        }
    }
}

impl RatFunc {
    /// Internal: operands already coprime; only normalizes the denominator.
    fn new_reduced(num: MPoly, den: &MPoly) -> RatFunc {
        if num.is_zero() {
            return RatFunc { den: MPoly::one(num.vars()), num };
        }
        let lc = den.leading().expect("den nonzero").1.clone();
        if lc.is_one() {
            RatFunc { num, den: den.clone() }
        } else {
            let inv = Rat::one() / lc;
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.vars());
        }
        // Cross-cancel: gcd(num_a, den_b) and gcd(num_b, den_a); the four
        // pieces are pairwise coprime afterwards.
        let g1 = gcd(&self.num, &rhs.den);
        let g2 = gcd(&rhs.num, &self.den);
        let na = if g1.is_one() { self.num.clone() } else { self.num.divide_exact(&g1).unwrap() };
        let db = if g1.is_one() { rhs.den.clone() } else { rhs.den.divide_exact(&g1).unwrap() };
        let nb = if g2.is_one() { rhs.num.clone() } else { rhs.num.divide_exact(&g2).unwrap() };
        let da = if g2.is_one() { self.den.clone() } else { self.den.divide_exact(&g2).unwrap() };
        RatFunc::new_reduced(&na * &nb, &(&da * &db))
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc, Error>;
    fn div(self, rhs: &RatFunc) -> Result<RatFunc, Error> {
        Ok(self * &rhs.inverse()?)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let ns = format!("{}", self.num);
        let n = if self.num.num_terms() > 1 || ns.contains('/') {
            format!("({ns})")
        } else {
            ns
        };
        let d = if self.den.num_terms() > 1 {
            format!("({})", self.den)
        } else {
            format!("{}", self.den)
        };
        write!(f, "{}/{}", n, d)
    }
}
