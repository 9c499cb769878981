//! Sparse multivariate polynomials over Q.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vector under the
//! graded-lexicographic order, so the last entry is the leading term and
//! iteration order is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::vars::Vars;

pub type Rat = BigRational;

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Exponent vector; ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn unit(n: usize) -> Self {
        Mono(vec![0; n])
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise division; `None` when some exponent would go negative.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&other.0) {
            if a < b {
                return None;
            }
            out.push(a - b);
        }
        Some(Mono(out))
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        let d1 = self.total_degree();
        let d2 = other.total_degree();
        d1.cmp(&d2).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in the variables of `vars` with rational coefficients.
/// Invariant: no zero coefficient is stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MPoly {
    vars: Vars,
    terms: BTreeMap<Mono, Rat>,
}

impl MPoly {
    pub fn zero(vars: &Vars) -> Self {
        MPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::unit(vars.len()), c);
        }
        MPoly { vars: vars.clone(), terms }
    }

    pub fn int(vars: &Vars, n: i64) -> Self {
        Self::constant(vars, rat_int(n))
    }

    pub fn var(vars: &Vars, idx: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Mono(e), Rat::one());
        MPoly { vars: vars.clone(), terms }
    }

    pub fn var_named(vars: &Vars, name: &str) -> Option<Self> {
        vars.index(name).map(|i| Self::var(vars, i))
    }

    pub fn from_terms(vars: &Vars, terms: BTreeMap<Mono, Rat>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        MPoly { vars: vars.clone(), terms }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(c)` when the polynomial is the constant `c` (zero included).
    pub fn as_constant(&self) -> Option<Rat> {
        match self.terms.len() {
            0 => Some(Rat::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                (m.total_degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// Leading term under graded-lex.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Degree in variable `v`; `None` for the zero polynomial.
    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    /// Minimal exponent of `v` over all terms; `None` for zero.
    pub fn valuation_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).min()
    }

    pub fn contains_var(&self, v: usize) -> bool {
        self.degree_in(v).unwrap_or(0) > 0
    }

    fn add_term(terms: &mut BTreeMap<Mono, Rat>, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_mono(&self, m: &Mono, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(&self.vars);
        }
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, v: usize) -> MPoly {
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let e = m.0[v];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[v] = e - 1;
            Self::add_term(&mut terms, m2, c * rat_int(e as i64));
        }
        MPoly { vars: self.vars.clone(), terms }
    }

    /// Coefficients of `self` as a univariate polynomial in `v`; entry `k`
    /// is the coefficient of `v^k` (an `MPoly` over the same vars with
    /// `v`-degree zero).
    pub fn coeffs_in(&self, v: usize) -> Vec<MPoly> {
        let d = match self.degree_in(v) {
            None => return Vec::new(),
            Some(d) => d,
        };
        let mut out = vec![MPoly::zero(&self.vars); d as usize + 1];
        for (m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut m2 = m.clone();
            m2.0[v] = 0;
            Self::add_term(&mut out[k].terms, m2, c.clone());
        }
        out
    }

    pub fn from_coeffs_in(vars: &Vars, v: usize, coeffs: &[MPoly]) -> MPoly {
        let mut terms = BTreeMap::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (m, a) in &c.terms {
                let mut m2 = m.clone();
                m2.0[v] += k as u32;
                Self::add_term(&mut terms, m2, a.clone());
            }
        }
        MPoly { vars: vars.clone(), terms }
    }

    /// Exact multivariate division; `None` when `self` is not a multiple
    /// of `d`.
    pub fn divide_exact(&self, d: &MPoly) -> Option<MPoly> {
        assert_eq!(self.vars, d.vars, "vars mismatch in divide_exact");
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&(Rat::one() / c)));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.div(&dm)?;
            let c = rc / &dc;
            rem = &rem - &d.mul_mono(&m, &c);
            Self::add_term(&mut quot, m, c);
        }
        Some(MPoly { vars: self.vars.clone(), terms: quot })
    }

    /// Componentwise minimum of all exponent vectors (`None` for zero).
    pub fn mono_gcd(&self) -> Option<Mono> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| {
            Mono(acc.0.iter().zip(&m.0).map(|(a, b)| (*a).min(*b)).collect())
        }))
    }

    /// Divide out a monomial known to divide every term.
    pub fn div_mono(&self, m: &Mono) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m).expect("monomial does not divide"), c.clone()))
                .collect(),
        }
    }

    /// Rational content: gcd of numerators over lcm of denominators, with
    /// the sign of the leading coefficient.
    pub fn rat_content(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num_integer::gcd(num, c.numer().abs());
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut content = Rat::new(num, den);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        content
    }

    /// Substitute polynomials for variables (unbound variables map to
    /// themselves), staying in the polynomial ring.
    pub fn eval_poly(&self, bindings: &BTreeMap<String, MPoly>) -> MPoly {
        let n = self.vars.len();
        let mut max_e = vec![0u32; n];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                max_e[i] = max_e[i].max(*e);
            }
        }
        let mut powers: Vec<Vec<MPoly>> = Vec::with_capacity(n);
        for (i, &me) in max_e.iter().enumerate() {
            let mut p = vec![MPoly::one(&self.vars)];
            if me > 0 {
                let val = bindings
                    .get(self.vars.name(i))
                    .cloned()
                    .unwrap_or_else(|| MPoly::var(&self.vars, i));
                for k in 1..=me as usize {
                    let next = &p[k - 1] * &val;
                    p.push(next);
                }
            }
            powers.push(p);
        }
        let mut acc = MPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut term = MPoly::constant(&self.vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Substitute rational functions for variables. Unbound variables map
    /// to themselves. The result lives over `target` vars.
    pub fn eval(
        &self,
        target: &Vars,
        bind: &dyn Fn(usize) -> super::RatFunc,
    ) -> Result<super::RatFunc, super::Error> {
        use super::RatFunc;
        // Precompute the needed powers of each bound value.
        let n = self.vars.len();
        let mut max_e = vec![0u32; n];
        for m in self.terms.keys() {
            for (i, e) in m.0.iter().enumerate() {
                max_e[i] = max_e[i].max(*e);
            }
        }
        let mut powers: Vec<Vec<RatFunc>> = Vec::with_capacity(n);
        for (i, &me) in max_e.iter().enumerate() {
            let mut p = vec![RatFunc::one(target)];
            if me > 0 {
                let val = bind(i);
                for k in 1..=me as usize {
                    let next = &p[k - 1] * &val;
                    p.push(next);
                }
            }
            powers.push(p);
        }
        let mut acc = RatFunc::zero(target);
        for (m, c) in &self.terms {
            let mut term = RatFunc::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitute `v -> v + offset` where `offset` does not involve `v`,
    /// via Horner in `v`. Stays in polynomial arithmetic.
    pub fn shift_var(&self, v: usize, offset: &MPoly) -> MPoly {
        debug_assert!(!offset.contains_var(v));
        let coeffs = self.coeffs_in(v);
        if coeffs.is_empty() {
            return self.clone();
        }
        let xv = MPoly::var(&self.vars, v);
        let shifted = &xv + offset;
        let mut acc = MPoly::zero(&self.vars);
        for c in coeffs.iter().rev() {
            acc = &(&acc * &shifted) + c;
        }
        acc
    }

    /// Reciprocal in `v`: returns (p_rev, d) with p(1/v) = p_rev(v) / v^d,
    /// where d = deg_v(p). The reversal never gains a factor of v.
    pub fn reverse_var(&self, v: usize) -> (MPoly, u32) {
        let d = self.degree_in(v).unwrap_or(0);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0[v] = d - m.0[v];
            terms.insert(m2, c.clone());
        }
        (MPoly { vars: self.vars.clone(), terms }, d)
    }

    /// Re-index the polynomial over another variable list. Variables that
    /// actually occur must exist in the target; unused ones may be dropped.
    pub fn embed(&self, target: &Vars) -> Result<MPoly, super::Error> {
        if &self.vars == target {
            return Ok(self.clone());
        }
        let mut map: Vec<Option<usize>> = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            let t = target.index(name);
            if t.is_none() && self.contains_var(i) {
                return Err(super::Error::UnknownSymbol(name.clone()));
            }
            map.push(t);
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.len()];
            for (i, &exp) in m.0.iter().enumerate() {
                if exp > 0 {
                    e[map[i].expect("occurring variable present in target")] = exp;
                }
            }
            Self::add_term(&mut terms, Mono(e), c.clone());
        }
        Ok(MPoly { vars: target.clone(), terms })
    }

    /// Leading coefficient normalized to one (graded-lex); zero unchanged.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rat::one() / c.clone();
                self.scale(&inv)
            }
        }
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.vars, rhs.vars, "vars mismatch in +");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            MPoly::add_term(&mut terms, m.clone(), c.clone());
        }
        MPoly { vars: self.vars.clone(), terms }
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.vars, rhs.vars, "vars mismatch in -");
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            MPoly::add_term(&mut terms, m.clone(), -c.clone());
        }
        MPoly { vars: self.vars.clone(), terms }
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        MPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        assert_eq!(self.vars, rhs.vars, "vars mismatch in *");
        let mut terms = BTreeMap::new();
        // Iterate the smaller operand outside.
        let (a, b) = if self.terms.len() <= rhs.terms.len() { (self, rhs) } else { (rhs, self) };
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                MPoly::add_term(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        MPoly { vars: self.vars.clone(), terms }
    }
}

fn fmt_rat(c: &Rat) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        // Descending graded-lex: leading term first.
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.total_degree() == 0 {
                factors.push(fmt_rat(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(self.vars.name(i).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.vars.name(i), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
