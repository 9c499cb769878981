//! The formal-data calculus: half-integer irregularity indices, exponents,
//! orbifold orders, the irregular Euler characteristic, deformation
//! dimension, local pull-back of a pole's data, and gauge equivalence.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactalg::{rat_int, Rat};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FormalError {
    RamifiedNonzeroExponent,
    NegativeIndex,
    BadLiteral(String),
}

impl fmt::Display for FormalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormalError::RamifiedNonzeroExponent => {
                write!(f, "a non-integer irregularity index forces exponent 0")
            }
            FormalError::NegativeIndex => write!(f, "irregularity index must be >= 0"),
            FormalError::BadLiteral(s) => write!(f, "bad formal-data literal: {s}"),
        }
    }
}

impl std::error::Error for FormalError {}

/// A non-negative half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub fn from_integer(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub fn twice(&self) -> i64 {
        self.twice
    }

    pub fn is_integer(&self) -> bool {
        self.twice % 2 == 0
    }

    pub fn is_zero(&self) -> bool {
        self.twice == 0
    }

    /// Smallest integer >= self.
    pub fn ceil(&self) -> i64 {
        if self.twice >= 0 {
            (self.twice + 1) / 2
        } else {
            self.twice / 2
        }
    }

    pub fn times(&self, m: i64) -> HalfInt {
        HalfInt { twice: self.twice * m }
    }

    pub fn to_rat(&self) -> Rat {
        Rat::new(BigInt::from(self.twice), BigInt::from(2))
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A pole exponent: an explicit rational, or an integer-linear combination
/// of named free parameters plus a rational shift.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Exponent {
    Rational(Rat),
    Affine { coeffs: BTreeMap<String, i64>, shift: Rat },
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent::Rational(Rat::zero())
    }

    pub fn rational(p: i64, q: i64) -> Self {
        Exponent::Rational(crate::exactalg::rat(p, q))
    }

    pub fn integer(n: i64) -> Self {
        Exponent::Rational(rat_int(n))
    }

    pub fn symbol(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), 1);
        Exponent::Affine { coeffs, shift: Rat::zero() }
    }

    pub fn affine(coeffs: BTreeMap<String, i64>, shift: Rat) -> Self {
        let coeffs: BTreeMap<String, i64> =
            coeffs.into_iter().filter(|(_, c)| *c != 0).collect();
        if coeffs.is_empty() {
            Exponent::Rational(shift)
        } else {
            Exponent::Affine { coeffs, shift }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Rational(r) if r.is_zero())
    }

    pub fn scale(&self, m: i64) -> Exponent {
        let mr = rat_int(m);
        match self {
            Exponent::Rational(r) => Exponent::Rational(r * &mr),
            Exponent::Affine { coeffs, shift } => Exponent::affine(
                coeffs.iter().map(|(k, c)| (k.clone(), c * m)).collect(),
                shift * &mr,
            ),
        }
    }

    pub fn neg(&self) -> Exponent {
        self.scale(-1)
    }

    pub fn add_integer(&self, n: i64) -> Exponent {
        let nr = rat_int(n);
        match self {
            Exponent::Rational(r) => Exponent::Rational(r + &nr),
            Exponent::Affine { coeffs, shift } => {
                Exponent::Affine { coeffs: coeffs.clone(), shift: shift + &nr }
            }
        }
    }

    /// Canonical representative of the gauge class θ ↦ ±θ + Z. Rationals
    /// fold into [0, 1/2]; affine exponents choose the sign making the
    /// first coefficient positive, then reduce the shift mod 1.
    pub fn gauge_key(&self) -> GaugeKey {
        match self {
            Exponent::Rational(r) => {
                let f = r.fract();
                let mut f = if f.is_negative() { f + Rat::one() } else { f };
                if f > crate::exactalg::rat(1, 2) {
                    f = Rat::one() - f;
                }
                GaugeKey::Rational(f)
            }
            Exponent::Affine { coeffs, shift } => {
                let first = coeffs.values().next().copied().unwrap_or(0);
                let (coeffs, shift) = if first < 0 {
                    (
                        coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect(),
                        -shift.clone(),
                    )
                } else {
                    (coeffs.clone(), shift.clone())
                };
                let f = shift.fract();
                let f = if f.is_negative() { f + Rat::one() } else { f };
                GaugeKey::Affine { coeffs, shift: f }
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Exponent::Affine { coeffs, shift } => {
                let mut first = true;
                for (name, c) in coeffs {
                    if first {
                        match *c {
                            1 => write!(f, "{name}")?,
                            -1 => write!(f, "-{name}")?,
                            c => write!(f, "{c}*{name}")?,
                        }
                        first = false;
                    } else if *c >= 0 {
                        if *c == 1 {
                            write!(f, "+{name}")?;
                        } else {
                            write!(f, "+{c}*{name}")?;
                        }
                    } else if *c == -1 {
                        write!(f, "-{name}")?;
                    } else {
                        write!(f, "{c}*{name}")?;
                    }
                }
                if !shift.is_zero() {
                    if shift.is_negative() {
                        write!(f, "-")?;
                    } else {
                        write!(f, "+")?;
                    }
                    let a = shift.abs();
                    if a.denom().is_one() {
                        write!(f, "{}", a.numer())?;
                    } else {
                        write!(f, "{}/{}", a.numer(), a.denom())?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Canonical gauge representative, used for equality of gauge classes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum GaugeKey {
    Rational(Rat),
    Affine { coeffs: BTreeMap<String, i64>, shift: Rat },
}

/// One pole's formal data (κ, θ).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormalDatum {
    pub kappa: HalfInt,
    pub theta: Exponent,
}

impl FormalDatum {
    pub fn new(kappa: HalfInt, theta: Exponent) -> Result<Self, FormalError> {
        if kappa.twice() < 0 {
            return Err(FormalError::NegativeIndex);
        }
        if !kappa.is_integer() && !theta.is_zero() {
            return Err(FormalError::RamifiedNonzeroExponent);
        }
        Ok(FormalDatum { kappa, theta })
    }

    pub fn log(theta: Exponent) -> Self {
        FormalDatum { kappa: HalfInt::ZERO, theta }
    }

    pub fn gauge_key(&self) -> (HalfInt, GaugeKey) {
        (self.kappa, self.theta.gauge_key())
    }
}

impl fmt::Display for FormalDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.kappa, self.theta)
    }
}

/// Orbifold order of the local monodromy at a logarithmic pole.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum OrbifoldOrder {
    Finite(u64),
    Infinite,
}

impl fmt::Display for OrbifoldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrbifoldOrder::Finite(n) => write!(f, "{n}"),
            OrbifoldOrder::Infinite => write!(f, "inf"),
        }
    }
}

/// Order of θ modulo Z: the reduced denominator for rational θ (1 for
/// integers, which are apparent-capable), infinite for free parameters.
pub fn orbifold_order(theta: &Exponent) -> OrbifoldOrder {
    match theta {
        Exponent::Rational(r) => {
            let d = r.denom();
            if d.is_one() {
                OrbifoldOrder::Finite(1)
            } else {
                OrbifoldOrder::Finite(u64::try_from(d.clone()).expect("denominator fits u64"))
            }
        }
        Exponent::Affine { .. } => OrbifoldOrder::Infinite,
    }
}

/// Catalog tag for the genus-0 equations with at most three poles counted
/// with multiplicity.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CatalogId {
    Gauss,
    Kummer,
    Weber,
    DegenerateConfluent,
    Airy,
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CatalogId::Gauss => "Gauss",
            CatalogId::Kummer => "Kummer",
            CatalogId::Weber => "Weber",
            CatalogId::DegenerateConfluent => "DegenerateConfluent",
            CatalogId::Airy => "Airy",
        };
        write!(f, "{s}")
    }
}

/// A base equation: genus-0 curve data with a list of poles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BaseEquation {
    pub genus0: i64,
    pub poles: Vec<FormalDatum>,
    pub catalog: Option<CatalogId>,
}

impl BaseEquation {
    pub fn genus0_with(poles: Vec<FormalDatum>, catalog: Option<CatalogId>) -> Self {
        BaseEquation { genus0: 0, poles, catalog }
    }
}

impl fmt::Display for BaseEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.poles {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Irregular Euler characteristic 2 − 2g − Σ(1+κ_k) + Σ_{κ=0} 1/ν_k.
pub fn chi_irr(base: &BaseEquation) -> Rat {
    let mut chi = rat_int(2 - 2 * base.genus0);
    for p in &base.poles {
        chi -= Rat::one() + p.kappa.to_rat();
        if p.kappa.is_zero() {
            if let OrbifoldOrder::Finite(n) = orbifold_order(&p.theta) {
                chi += Rat::new(BigInt::one(), BigInt::from(n));
            }
        }
    }
    chi
}

/// Deformation dimension T = 3g − 3 + Σ(1 + ⌈κ_i⌉) of the irregular curve.
pub fn teich_dim(genus: i64, data: &[FormalDatum]) -> i64 {
    3 * genus - 3 + data.iter().map(|d| 1 + d.kappa.ceil()).sum::<i64>()
}

/// Result of pulling back one pole's data through a point of multiplicity m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Pullback {
    Datum(FormalDatum),
    Removed,
}

/// Local pull-back (κ, θ) ↦ (mκ, mθ), with the two special cases: a
/// logarithmic pole whose exponent becomes an integer is removed, and a
/// ramified pole over an even multiplicity unramifies with θ normalized
/// to 0.
pub fn pullback_local(fd: &FormalDatum, m: u32) -> Pullback {
    assert!(m >= 1, "multiplicity must be >= 1");
    let m = m as i64;
    if fd.kappa.is_zero() {
        if let Exponent::Rational(r) = &fd.theta {
            let scaled = r * rat_int(m);
            if scaled.denom().is_one() {
                return Pullback::Removed;
            }
            return Pullback::Datum(FormalDatum::log(Exponent::Rational(scaled)));
        }
    }
    let kappa = fd.kappa.times(m);
    if !fd.kappa.is_integer() {
        // θ was 0; an even cover unramifies the pole and the resulting
        // integer exponent is normalized away.
        return Pullback::Datum(FormalDatum { kappa, theta: Exponent::zero() });
    }
    Pullback::Datum(FormalDatum { kappa, theta: fd.theta.scale(m) })
}

/// Equality of formal-data lists up to pole permutation and the gauge
/// action θ ↦ ±θ + Z at each pole.
pub fn gauge_equivalent(a: &[FormalDatum], b: &[FormalDatum]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ka: Vec<_> = a.iter().map(FormalDatum::gauge_key).collect();
    let mut kb: Vec<_> = b.iter().map(FormalDatum::gauge_key).collect();
    ka.sort();
    kb.sort();
    ka == kb
}

/// Parse a formal-data literal "(k1,theta1)(k2,theta2)...". Irregularity
/// indices are integers or halves "p/2"; exponents are rationals or
/// integer-linear expressions in named parameters.
pub fn parse_formal_data(text: &str) -> Result<Vec<FormalDatum>, FormalError> {
    let s = text.trim();
    let mut out = Vec::new();
    let mut rest = s;
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| FormalError::BadLiteral(format!("expected '(' in {rest:?}")))?;
        if rest[..open].trim() != "" {
            return Err(FormalError::BadLiteral(format!("junk before '(': {rest:?}")));
        }
        let close = rest[open..]
            .find(')')
            .ok_or_else(|| FormalError::BadLiteral("missing ')'".into()))?
            + open;
        let inner = &rest[open + 1..close];
        let comma = inner
            .find(',')
            .ok_or_else(|| FormalError::BadLiteral(format!("missing ',' in ({inner})")))?;
        let kappa = parse_halfint(inner[..comma].trim())?;
        let theta = parse_exponent(inner[comma + 1..].trim())?;
        out.push(FormalDatum::new(kappa, theta)?);
        rest = rest[close + 1..].trim_start();
    }
    if out.is_empty() {
        return Err(FormalError::BadLiteral("empty formal-data literal".into()));
    }
    Ok(out)
}

fn parse_halfint(s: &str) -> Result<HalfInt, FormalError> {
    let bad = || FormalError::BadLiteral(format!("bad half-integer {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 2 {
            return Ok(HalfInt::from_twice(p));
        }
        if q == 1 {
            return Ok(HalfInt::from_integer(p));
        }
        return Err(bad());
    }
    let n: i64 = s.parse().map_err(|_| bad())?;
    Ok(HalfInt::from_integer(n))
}

/// Parse an exponent expression over parameters collected from the text.
pub fn parse_exponent(s: &str) -> Result<Exponent, FormalError> {
    use crate::exactalg::{parse, Vars};
    let bad = |m: &str| FormalError::BadLiteral(format!("bad exponent {s:?}: {m}"));
    // Collect identifiers as the parameter set.
    let mut names: Vec<String> = Vec::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c == b'_' || c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i] == b'_' || bytes[i].is_ascii_alphanumeric()) {
                i += 1;
            }
            let name = s[start..i].to_string();
            if !names.contains(&name) {
                names.push(name);
            }
        } else {
            i += 1;
        }
    }
    names.sort();
    let vars = Vars::new(names.clone());
    let r = parse(s, &vars).map_err(|e| bad(&e.to_string()))?;
    if !r.is_polynomial() {
        return Err(bad("exponent must be polynomial in its parameters"));
    }
    let mut coeffs = BTreeMap::new();
    let mut shift = Rat::zero();
    for (m, c) in r.num().terms() {
        match m.total_degree() {
            0 => shift = c.clone(),
            1 => {
                let idx = m.0.iter().position(|&e| e == 1).unwrap();
                if !c.denom().is_one() {
                    return Err(bad("parameter coefficients must be integers"));
                }
                let ci: i64 = c
                    .numer()
                    .try_into()
                    .map_err(|_| bad("parameter coefficient too large"))?;
                coeffs.insert(vars.name(idx).to_string(), ci);
            }
            _ => return Err(bad("exponent must be affine in its parameters")),
        }
    }
    Ok(Exponent::affine(coeffs, shift))
}
