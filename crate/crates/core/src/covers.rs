//! Passport combinatorics of ramified covers: genus bookkeeping, pole-fiber
//! counts, the scattering rewriter, admissibility, and realizability of a
//! passport as permutation monodromy.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exactalg::{rat_int, Rat};
use crate::formal::{
    chi_irr, orbifold_order, pullback_local, BaseEquation, FormalDatum, OrbifoldOrder, Pullback,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CoverError {
    EmptyPartition,
    PartitionSumMismatch { expected: u32, got: u32 },
    TrivialFreeFiber,
    FiberCountMismatch { poles: usize, fibers: usize },
    OddRamification,
    NegativeGenus,
    NonIntegralPoleCount(usize),
    DegreeTooLarge(u32),
    BadLiteral(String),
}

impl fmt::Display for CoverError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoverError::EmptyPartition => write!(f, "empty partition"),
            CoverError::PartitionSumMismatch { expected, got } => {
                write!(f, "partition sums to {got}, expected {expected}")
            }
            CoverError::TrivialFreeFiber => write!(f, "free fibers need a part > 1"),
            CoverError::FiberCountMismatch { poles, fibers } => {
                write!(f, "{fibers} pole fibers for {poles} poles")
            }
            CoverError::OddRamification => write!(f, "total ramification is odd"),
            CoverError::NegativeGenus => write!(f, "passport forces negative genus"),
            CoverError::NonIntegralPoleCount(k) => {
                write!(f, "non-integral pole count over fiber {k}")
            }
            CoverError::DegreeTooLarge(d) => {
                write!(f, "degree {d} above the realizability search bound")
            }
            CoverError::BadLiteral(s) => write!(f, "bad passport literal: {s}"),
        }
    }
}

impl std::error::Error for CoverError {}

/// An integer partition, kept sorted in decreasing order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self, CoverError> {
        if parts.is_empty() || parts.iter().any(|&p| p == 0) {
            return Err(CoverError::EmptyPartition);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition(parts))
    }

    pub fn trivial(d: u32) -> Self {
        Partition(vec![1; d as usize])
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total ramification d - s of the fiber.
    pub fn ramification(&self) -> u32 {
        self.sum() - self.len() as u32
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|&p| p == 1)
    }

    pub fn is_simple(&self) -> bool {
        self.ramification() == 1
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// All partitions of `d`, decreasing part lists, deterministic order.
pub fn partitions(d: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, acc: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(acc.clone()));
            return;
        }
        let hi = remaining.min(max);
        for p in (1..=hi).rev() {
            acc.push(p);
            rec(remaining - p, p, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// Fiber data of a degree-d cover: one partition per base pole (trivial
/// allowed) and the branching fibers away from the poles.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Passport {
    pub degree: u32,
    pub pole_fibers: Vec<Partition>,
    pub free_fibers: Vec<Partition>,
}

impl Passport {
    pub fn new(
        degree: u32,
        pole_fibers: Vec<Partition>,
        free_fibers: Vec<Partition>,
    ) -> Result<Self, CoverError> {
        for p in pole_fibers.iter().chain(&free_fibers) {
            if p.sum() != degree {
                return Err(CoverError::PartitionSumMismatch { expected: degree, got: p.sum() });
            }
        }
        if free_fibers.iter().any(Partition::is_trivial) {
            return Err(CoverError::TrivialFreeFiber);
        }
        Ok(Passport { degree, pole_fibers, free_fibers })
    }

    pub fn with_simple_free(
        degree: u32,
        pole_fibers: Vec<Partition>,
        count: usize,
    ) -> Result<Self, CoverError> {
        let simple = simple_fiber(degree);
        Passport::new(degree, pole_fibers, vec![simple; count])
    }

    /// Total ramification over every fiber.
    pub fn total_ramification(&self) -> u32 {
        self.pole_fibers
            .iter()
            .chain(&self.free_fibers)
            .map(Partition::ramification)
            .sum()
    }
}

impl fmt::Display for Passport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d={}; poles=", self.degree)?;
        let ps: Vec<String> = self.pole_fibers.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", ps.join(","))?;
        write!(f, "; free=")?;
        if self.free_fibers.iter().all(Partition::is_simple) {
            write!(f, "simple*{}", self.free_fibers.len())
        } else {
            let fs: Vec<String> = self.free_fibers.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", fs.join(","))
        }
    }
}

fn simple_fiber(d: u32) -> Partition {
    assert!(d >= 2);
    let mut parts = vec![1u32; (d - 1) as usize];
    parts[0] = 2;
    Partition::new(parts).unwrap()
}

/// Genus of the cover from the Riemann–Hurwitz count
/// 2 − 2g = d(2 − 2g₀) − R.
pub fn rh_genus(d: u32, passport: &Passport, base_genus: i64) -> Result<i64, CoverError> {
    let r = passport.total_ramification() as i64;
    let chi = (d as i64) * (2 - 2 * base_genus) - r;
    if chi % 2 != 0 {
        return Err(CoverError::OddRamification);
    }
    let g = (2 - chi) / 2;
    if g < 0 {
        return Err(CoverError::NegativeGenus);
    }
    Ok(g)
}

/// The derived bookkeeping of a cover over a base equation.
#[derive(Clone, Debug)]
pub struct CoverAnalysis {
    pub genus: i64,
    /// Poles counted with multiplicity over each base-pole fiber.
    pub n_k: Vec<Rat>,
    /// Ramification over each base-pole fiber.
    pub r_k: Vec<i64>,
    /// Number of branching fibers away from the poles.
    pub b: usize,
    pub n: i64,
    pub t: i64,
    pub admissible: bool,
    pub target: Vec<FormalDatum>,
}

/// Number of poles (with multiplicity) of the pulled-back equation over one
/// base pole, by pole type. A finite orbifold order covers the integer
/// exponent case ν = 1 (an apparent-capable pole, removed over every
/// point), keeping the count consistent with the pulled-back divisor.
fn fiber_pole_count(pole: &FormalDatum, fiber: &Partition, d: u32) -> Rat {
    let rk = rat_int(fiber.ramification() as i64);
    let dd = rat_int(d as i64);
    if pole.kappa.is_zero() {
        match orbifold_order(&pole.theta) {
            OrbifoldOrder::Finite(nu) => {
                let killed =
                    fiber.parts().iter().filter(|&&m| (m as u64) % nu == 0).count() as i64;
                &dd - &rk - rat_int(killed)
            }
            OrbifoldOrder::Infinite => &dd - &rk,
        }
    } else if pole.kappa.is_integer() {
        &(&dd * &(Rat::one() + pole.kappa.to_rat())) - &rk
    } else {
        let odd = fiber.parts().iter().filter(|&&m| m % 2 == 1).count() as i64;
        &(&dd * &(Rat::one() + pole.kappa.to_rat())) - &rk
            + Rat::new(BigInt::from(odd), BigInt::from(2))
    }
}

/// Full analysis: genus, per-fiber counts, deformation dimension, the
/// admissibility verdict, and the pulled-back formal data.
pub fn analyze_cover(base: &BaseEquation, passport: &Passport) -> Result<CoverAnalysis, CoverError> {
    if base.poles.len() != passport.pole_fibers.len() {
        return Err(CoverError::FiberCountMismatch {
            poles: base.poles.len(),
            fibers: passport.pole_fibers.len(),
        });
    }
    let d = passport.degree;
    let genus = rh_genus(d, passport, base.genus0)?;

    let mut n_k = Vec::new();
    let mut r_k = Vec::new();
    let mut target = Vec::new();
    let mut n_total = Rat::zero();
    for (k, (pole, fiber)) in base.poles.iter().zip(&passport.pole_fibers).enumerate() {
        let nk = fiber_pole_count(pole, fiber, d);
        if !nk.denom().is_one() {
            return Err(CoverError::NonIntegralPoleCount(k));
        }
        n_total += &nk;
        n_k.push(nk);
        r_k.push(fiber.ramification() as i64);
        for &m in fiber.parts() {
            if let Pullback::Datum(fd) = pullback_local(pole, m) {
                target.push(fd);
            }
        }
    }
    let n: i64 = i64::try_from(n_total.to_integer()).expect("pole count fits i64");
    // Cross-check the fiber-count formulas against the assembled target.
    debug_assert_eq!(n, crate::formal::teich_dim(genus, &target) - (3 * genus - 3));

    let b = passport.free_fibers.len();
    let t = 3 * genus - 3 + n;
    let admissible = t >= 1 && t <= b as i64;
    Ok(CoverAnalysis { genus, n_k, r_k, b, n, t, admissible, target })
}

/// Prop 7.2 margin: returns (T − B, g − 1 − d·χ_irr); the inequality
/// lhs ≥ rhs holds for every cover.
pub fn bound_margin(
    base: &BaseEquation,
    passport: &Passport,
) -> Result<(i64, Rat), CoverError> {
    let analysis = analyze_cover(base, passport)?;
    let lhs = analysis.t - analysis.b as i64;
    let rhs = rat_int(analysis.genus - 1)
        - rat_int(passport.degree as i64) * chi_irr(base);
    Ok((lhs, rhs))
}

/// Rewrite a passport into scattered shape: free branching split into
/// simple fibers, pole fibers reduced to the minimal shapes, with the
/// removed ramification reappearing as extra simple free fibers. Total
/// ramification is conserved and T − B never increases.
pub fn scatter(base: &BaseEquation, passport: &Passport) -> Passport {
    let d = passport.degree;
    let mut extra_simple: u32 = passport.free_fibers.iter().map(Partition::ramification).sum();
    let mut pole_fibers = Vec::with_capacity(passport.pole_fibers.len());

    for (pole, fiber) in base.poles.iter().zip(&passport.pole_fibers) {
        let modulus: Option<u32> = if pole.kappa.is_zero() {
            match orbifold_order(&pole.theta) {
                OrbifoldOrder::Finite(nu) if nu > 1 => Some(nu as u32),
                _ => None,
            }
        } else if pole.kappa.is_integer() {
            None
        } else {
            Some(2)
        };
        match modulus {
            None => {
                // Branching moves wholesale to simple free fibers.
                extra_simple += fiber.ramification();
                pole_fibers.push(Partition::trivial(d));
            }
            Some(nu) => {
                let mut parts = Vec::new();
                for &m in fiber.parts() {
                    let q = m / nu;
                    let r = m % nu;
                    parts.extend(std::iter::repeat(nu).take(q as usize));
                    parts.extend(std::iter::repeat(1).take(r as usize));
                    extra_simple += q + r - 1;
                }
                pole_fibers.push(Partition::new(parts).expect("nonempty"));
            }
        }
    }

    let free = vec![simple_fiber(d); extra_simple as usize];
    Passport::new(d, pole_fibers, free).expect("scattered passport is valid")
}

/// True when the passport's pole fibers already have scattered shape and
/// all free fibers are simple.
pub fn is_scattered(base: &BaseEquation, passport: &Passport) -> bool {
    scatter(base, passport) == *passport
}

// ---------------------------------------------------------------------------
// Realizability as permutation monodromy
// ---------------------------------------------------------------------------

const REALIZABILITY_DEGREE_BOUND: u32 = 8;

fn cycle_type(perm: &[usize]) -> Vec<u32> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut len = 0u32;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        cycles.push(len);
    }
    cycles.sort_unstable_by(|a, b| b.cmp(a));
    cycles
}

fn compose(a: &[usize], b: &[usize]) -> Vec<usize> {
    // (a∘b)(i) = a(b(i)); products are taken left to right.
    b.iter().map(|&i| a[i]).collect()
}

fn inverse(a: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// One representative permutation with the given cycle type, on
/// consecutive points.
fn representative(parts: &[u32], d: u32) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..d as usize).collect();
    let mut next = 0usize;
    for &len in parts {
        let len = len as usize;
        for k in 0..len {
            perm[next + k] = next + (k + 1) % len;
        }
        next += len;
    }
    perm
}

fn all_perms(d: u32) -> Vec<Vec<usize>> {
    fn heap(k: usize, arr: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(arr.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, arr, out);
            if k % 2 == 0 {
                arr.swap(i, k - 1);
            } else {
                arr.swap(0, k - 1);
            }
        }
    }
    let mut arr: Vec<usize> = (0..d as usize).collect();
    let mut out = Vec::new();
    heap(d as usize, &mut arr, &mut out);
    out
}

fn transitive(perms: &[&Vec<usize>], d: usize) -> bool {
    let mut parent: Vec<usize> = (0..d).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for p in perms {
        for (i, &j) in p.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a] = b;
            }
        }
    }
    (1..d).all(|i| find(&mut parent, i) == find(&mut parent, 0))
}

/// Whether permutations of the given cycle types (trivial fibers omitted)
/// exist whose ordered product is the identity and which generate a
/// transitive subgroup. The first nontrivial class is fixed to a
/// representative; the existence question is conjugation invariant.
pub fn realizable(passport: &Passport) -> Result<bool, CoverError> {
    let d = passport.degree;
    if d > REALIZABILITY_DEGREE_BOUND {
        return Err(CoverError::DegreeTooLarge(d));
    }
    let classes: Vec<Vec<u32>> = passport
        .pole_fibers
        .iter()
        .chain(&passport.free_fibers)
        .filter(|p| !p.is_trivial())
        .map(|p| p.parts().to_vec())
        .collect();
    if classes.is_empty() {
        return Ok(d == 1);
    }
    if classes.len() == 1 {
        // A single nontrivial permutation is never the identity.
        return Ok(false);
    }
    let universe = all_perms(d);
    let by_type = |t: &Vec<u32>| -> Vec<&Vec<usize>> {
        universe.iter().filter(|p| &cycle_type(p) == t).collect()
    };

    let first = representative(&classes[0], d);
    let middle: Vec<Vec<&Vec<usize>>> =
        classes[1..classes.len() - 1].iter().map(by_type).collect();
    let last_type = classes.last().unwrap().clone();

    fn dfs(
        chosen: &mut Vec<Vec<usize>>,
        product: Vec<usize>,
        middle: &[Vec<&Vec<usize>>],
        last_type: &Vec<u32>,
        d: usize,
    ) -> bool {
        if middle.is_empty() {
            // The last factor is forced: product * last = id.
            let last = inverse(&product);
            if &cycle_type(&last) != last_type {
                return false;
            }
            chosen.push(last);
            let refs: Vec<&Vec<usize>> = chosen.iter().collect();
            let ok = transitive(&refs, d);
            chosen.pop();
            return ok;
        }
        for cand in &middle[0] {
            let next = compose(&product, cand);
            chosen.push((*cand).clone());
            if dfs(chosen, next, &middle[1..], last_type, d) {
                chosen.pop();
                return true;
            }
            chosen.pop();
        }
        false
    }

    let mut chosen = vec![first.clone()];
    Ok(dfs(&mut chosen, first, &middle, &last_type, d as usize))
}

/// Parse a passport literal like
/// `d=6; poles=[3,3],[2,2,2]; free=[2,1,1,1,1]*3` (a `*n` suffix repeats a
/// fiber; `free=simple*n` abbreviates n simple fibers; `free=` empty allowed).
pub fn parse_passport(text: &str) -> Result<Passport, CoverError> {
    let bad = |m: &str| CoverError::BadLiteral(m.to_string());
    let mut degree: Option<u32> = None;
    let mut poles: Vec<Partition> = Vec::new();
    let mut free: Vec<Partition> = Vec::new();
    for piece in text.split(';') {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        let (key, val) = piece
            .split_once('=')
            .ok_or_else(|| bad(&format!("expected key=value, got {piece:?}")))?;
        match key.trim() {
            "d" => {
                degree =
                    Some(val.trim().parse().map_err(|_| bad(&format!("bad degree {val:?}")))?);
            }
            "poles" => {
                poles = parse_fiber_list(val, degree.ok_or_else(|| bad("d must come first"))?)?;
            }
            "free" => {
                free = parse_fiber_list(val, degree.ok_or_else(|| bad("d must come first"))?)?;
            }
            other => return Err(bad(&format!("unknown key {other:?}"))),
        }
    }
    let d = degree.ok_or_else(|| bad("missing d="))?;
    Passport::new(d, poles, free)
}

fn parse_fiber_list(text: &str, d: u32) -> Result<Vec<Partition>, CoverError> {
    let bad = |m: &str| CoverError::BadLiteral(m.to_string());
    let mut out = Vec::new();
    let mut rest = text.trim();
    while !rest.is_empty() {
        let (fiber, repeat, tail) = if let Some(r) = rest.strip_prefix("simple") {
            let (rep, tail) = parse_repeat(r)?;
            (simple_fiber(d), rep, tail)
        } else if rest.starts_with('[') {
            let close = rest.find(']').ok_or_else(|| bad("missing ']'"))?;
            let inner = &rest[1..close];
            let mut parts = Vec::new();
            for p in inner.split(',') {
                let p = p.trim();
                if p.is_empty() {
                    continue;
                }
                parts.push(p.parse().map_err(|_| bad(&format!("bad part {p:?}")))?);
            }
            let (rep, tail) = parse_repeat(&rest[close + 1..])?;
            (Partition::new(parts)?, rep, tail)
        } else {
            return Err(bad(&format!("expected '[' or 'simple' at {rest:?}")));
        };
        for _ in 0..repeat {
            out.push(fiber.clone());
        }
        rest = tail.trim_start().strip_prefix(',').unwrap_or(tail).trim_start();
    }
    Ok(out)
}

fn parse_repeat(text: &str) -> Result<(u32, &str), CoverError> {
    let t = text.trim_start();
    if let Some(r) = t.strip_prefix('*') {
        let r = r.trim_start();
        let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
        let n: u32 = r[..end]
            .parse()
            .map_err(|_| CoverError::BadLiteral(format!("bad repeat count {r:?}")))?;
        Ok((n, &r[end..]))
    } else {
        Ok((1, t))
    }
}
