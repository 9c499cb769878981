//! The built-in linear templates, Hamiltonian systems, covering maps and
//! algebraic solutions, entered verbatim and wired to the solvers.

use std::collections::BTreeMap;

use crate::exactalg::{parse, AlgebraicContext, RatFunc, Vars};
use crate::odes::{sl_normalize, solve_accessory, GeneralScalar, OdeError, RationalMap, SLForm};

use super::{
    AlgebraicSolutionRecord, GarnierError, HamiltonianSystem, PainleveKind,
};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SystemId {
    Kim122,
    Kim23,
    Kaw4,
}

impl SystemId {
    pub fn label(&self) -> &'static str {
        match self {
            SystemId::Kim122 => "H(1,2,2)",
            SystemId::Kim23 => "H(2,3)",
            SystemId::Kaw4 => "K(5/2,3/2)",
        }
    }
}

fn rf(s: &str, vars: &Vars) -> RatFunc {
    parse(s, vars).expect("static expression")
}

// ---------------------------------------------------------------------------
// Linear templates
// ---------------------------------------------------------------------------

/// Variables of the H(1,2,2) template.
pub fn kim122_template_vars() -> Vars {
    Vars::new(["x", "q1", "q2", "p1", "p2", "t1", "t2", "th0", "th1", "thI", "H1", "H2"])
}

/// The L(1,2,2) scalar equation: poles of order 2 at x = 0, 1, order 1 at
/// infinity, apparent points q1, q2, accessory coefficients H1, H2.
pub fn kim122_template() -> GeneralScalar {
    let vars = kim122_template_vars();
    let f = rf(
        "t2/x^2 + (2-th0)/x + t1/(x-1)^2 + (2-th1)/(x-1) - 1/(x-q1) - 1/(x-q2)",
        &vars,
    );
    let g = rf(
        "((th0+th1-1)^2 - thI^2)/(4*x*(x-1)) - t1*H1/(x*(x-1)^2) + t2*H2/(x^2*(x-1)) \
         + q1*(q1-1)*p1/(x*(x-1)*(x-q1)) + q2*(q2-1)*p2/(x*(x-1)*(x-q2))",
        &vars,
    );
    GeneralScalar { indep: "x".into(), f, g }
}

/// H(1,2,2) Hamiltonians as printed. The printed text ends both q2-indexed
/// quadratic blocks with p1; `corrected` substitutes the evident p2.
pub fn kim122_printed_hamiltonians(corrected: bool) -> (RatFunc, RatFunc) {
    let vars = kim122_template_vars();
    let last = if corrected { "p2" } else { "p1" };
    let h1 = format!(
        "-(q1^2*(q1-1)^2*(q2-1))/(t1*(q1-q2)) \
          * (p1^2 - (th0/q1 - t2/q1^2 + (th1-1)/(q1-1) - t1/(q1-1)^2)*p1 \
             + ((th0+th1-1)^2 - thI^2)/(4*q1*(q1-1))) \
         + ((q1-1)*q2^2*(q2-1)^2)/(t1*(q1-q2)) \
          * (p2^2 - (th0/q2 - t2/q2^2 + (th1-1)/(q2-1) - t1/(q2-1)^2)*{last} \
             + ((th0+th1-1)^2 - thI^2)/(4*q2*(q2-1)))"
    );
    let h2 = format!(
        "-(q1^2*(q1-1)^2*q2)/(t2*(q1-q2)) \
          * (p1^2 - ((th0-1)/q1 - t2/q1^2 + th1/(q1-1) - t1/(q1-1)^2)*p1 \
             + ((th0+th1-1)^2 - thI^2)/(4*q1*(q1-1))) \
         + (q1*q2^2*(q2-1)^2)/(t2*(q1-q2)) \
          * (p2^2 - ((th0-1)/q2 - t2/q2^2 + th1/(q2-1) - t1/(q2-1)^2)*{last} \
             + ((th0+th1-1)^2 - thI^2)/(4*q2*(q2-1)))"
    );
    (rf(&h1, &vars), rf(&h2, &vars))
}

pub fn kim23_template_vars() -> Vars {
    Vars::new(["x", "q1", "q2", "p1", "p2", "t1", "t2", "th0", "thI", "H1", "H2"])
}

/// The L(2,3) scalar equation: pole of order 2 at x = 0, order 3 at
/// infinity, apparent points q1, q2. The residue part of g is printed with
/// (x-1) factors carried over from L(1,2,2) where x=1 has already merged
/// into the irregular point; the confluent shape that reproduces the
/// printed H(2,3) exactly is q_k p_k/(x(x-q_k)) with the x^{-2} accessory
/// term -t2 H2/x^2 (the (x-1) factor at x=0 accounts for the sign).
pub fn kim23_template() -> GeneralScalar {
    let vars = kim23_template_vars();
    let f = rf("t2/x^2 + (2-th0)/x - t1 - x/2 - 1/(x-q1) - 1/(x-q2)", &vars);
    let g = rf(
        "(th0+thI-1)/8 - H1/(2*x) - t2*H2/x^2 \
         + q1*p1/(x*(x-q1)) + q2*p2/(x*(x-q2))",
        &vars,
    );
    GeneralScalar { indep: "x".into(), f, g }
}

/// H(2,3) as printed.
pub fn kim23_printed_hamiltonians() -> (RatFunc, RatFunc) {
    let vars = kim23_template_vars();
    let h1 = "2*q1^2/(q1-q2) \
          * (p1^2 - (th0/q1 - t2/q1^2 + q1/2 + t1)*p1 + (th0+thI-1)/8) \
         - 2*q2^2/(q1-q2) \
          * (p2^2 - (th0/q2 - t2/q2^2 + q2/2 + t1)*p2 + (th0+thI-1)/8)";
    let h2 = "-(q1^2*q2)/(t2*(q1-q2)) \
          * (p1^2 - ((th0-1)/q1 - t2/q1^2 + q1/2 + t1)*p1 + (th0+thI-1)/8) \
         + (q1*q2^2)/(t2*(q1-q2)) \
          * (p2^2 - ((th0-1)/q2 - t2/q2^2 + q2/2 + t1)*p2 + (th0+thI-1)/8)";
    (rf(h1, &vars), rf(h2, &vars))
}

pub fn kaw4_template_vars() -> Vars {
    Vars::new(["x", "q1", "q2", "p1", "p2", "t1", "t2", "H1", "H2"])
}

/// The L(5/2,3/2) equation u'' = g(x) u, already in SL form.
pub fn kaw4_template() -> SLForm {
    let vars = kaw4_template_vars();
    let g = rf(
        "t2^2/(4*x^3) + H1/x^2 + H2/x + t1/2 + x/4 \
         + 3/(4*(x-q1)^2) - p1/(x-q1) + 3/(4*(x-q2)^2) - p2/(x-q2)",
        &vars,
    );
    SLForm { indep: "x".into(), q: g }
}

// ---------------------------------------------------------------------------
// Hamiltonian systems
// ---------------------------------------------------------------------------

fn system_vars() -> Vars {
    Vars::new(["q1", "q2", "p1", "p2", "t1", "t2"])
}

/// Drop the template-only variables and specialize the exponents of one of
/// the Kimura templates, landing in the canonical system variables.
fn specialize(
    h: &RatFunc,
    theta: &[(&str, &str)],
) -> Result<RatFunc, GarnierError> {
    let vars = h.vars().clone();
    let mut bind = BTreeMap::new();
    for (name, val) in theta {
        bind.insert(name.to_string(), rf(val, &vars));
    }
    let out = h.substitute(&bind).map_err(OdeError::from)?;
    Ok(out.embed(&system_vars()).map_err(OdeError::from)?)
}

/// Accessory-solved Hamiltonians of a Kimura template, fully symbolic in
/// the exponents.
pub fn solved_hamiltonians(id: SystemId) -> Result<(RatFunc, RatFunc), GarnierError> {
    let (template, vars) = match id {
        SystemId::Kim122 => (sl_normalize(&kim122_template())?, kim122_template_vars()),
        SystemId::Kim23 => (sl_normalize(&kim23_template())?, kim23_template_vars()),
        SystemId::Kaw4 => (kaw4_template(), kaw4_template_vars()),
    };
    let points = [rf("q1", &vars), rf("q2", &vars)];
    let sol = solve_accessory(&template, &["H1".into(), "H2".into()], &points)?;
    Ok((sol["H1"].clone(), sol["H2"].clone()))
}

/// The Hamiltonian system verbatim from the printed formulas (Kim122
/// carries the documented p1/p2 slip; Kaw4 is the (u,v,K) system).
pub fn builtin_system(id: SystemId) -> HamiltonianSystem {
    match id {
        SystemId::Kim122 => {
            let (h1, h2) = kim122_printed_hamiltonians(false);
            let h1 = specialize(&h1, &[("th0", "0"), ("th1", "0"), ("thI", "1/3")]).unwrap();
            let h2 = specialize(&h2, &[("th0", "0"), ("th1", "0"), ("thI", "1/3")]).unwrap();
            HamiltonianSystem {
                times: vec!["t1".into(), "t2".into()],
                coords: vec!["q1".into(), "q2".into()],
                momenta: vec!["p1".into(), "p2".into()],
                hamiltonians: vec![h1, h2],
            }
        }
        SystemId::Kim23 => {
            let (h1, h2) = kim23_printed_hamiltonians();
            let h1 = specialize(&h1, &[("th0", "0"), ("thI", "-1")]).unwrap();
            let h2 = specialize(&h2, &[("th0", "0"), ("thI", "-1")]).unwrap();
            HamiltonianSystem {
                times: vec!["t1".into(), "t2".into()],
                coords: vec!["q1".into(), "q2".into()],
                momenta: vec!["p1".into(), "p2".into()],
                hamiltonians: vec![h1, h2],
            }
        }
        SystemId::Kaw4 => kaw4_uv_system(),
    }
}

/// The (u, v, K) form of the Kaw4 system.
pub fn kaw4_uv_system() -> HamiltonianSystem {
    let vars = Vars::new(["u1", "u2", "v1", "v2", "t1", "t2"]);
    let k1 = rf(
        "2*u1*v1^2 + 4*u2*v1*v2 - 4*v1 - u1^2/2 - t1*u1 + u2/2 + t2^2/(2*u2)",
        &vars,
    );
    let k2 = rf(
        "(-2*u2*v1^2 + 2*u2^2*v2^2 - 2*u2*v2 + u1*u2/2 + t1*u2 - t2^2*u1/(2*u2))/t2",
        &vars,
    );
    HamiltonianSystem {
        times: vec!["t1".into(), "t2".into()],
        coords: vec!["u1".into(), "u2".into()],
        momenta: vec!["v1".into(), "v2".into()],
        hamiltonians: vec![k1, k2],
    }
}

/// The Hamiltonian system with accessory coefficients re-derived by the
/// apparency solver; this is the verified form.
pub fn derived_system(id: SystemId) -> Result<HamiltonianSystem, GarnierError> {
    match id {
        SystemId::Kim122 => {
            let (h1, h2) = solved_hamiltonians(id)?;
            Ok(HamiltonianSystem {
                times: vec!["t1".into(), "t2".into()],
                coords: vec!["q1".into(), "q2".into()],
                momenta: vec!["p1".into(), "p2".into()],
                hamiltonians: vec![
                    specialize(&h1, &[("th0", "0"), ("th1", "0"), ("thI", "1/3")])?,
                    specialize(&h2, &[("th0", "0"), ("th1", "0"), ("thI", "1/3")])?,
                ],
            })
        }
        SystemId::Kim23 => {
            let (h1, h2) = solved_hamiltonians(id)?;
            Ok(HamiltonianSystem {
                times: vec!["t1".into(), "t2".into()],
                coords: vec!["q1".into(), "q2".into()],
                momenta: vec!["p1".into(), "p2".into()],
                hamiltonians: vec![
                    specialize(&h1, &[("th0", "0"), ("thI", "-1")])?,
                    specialize(&h2, &[("th0", "0"), ("thI", "-1")])?,
                ],
            })
        }
        SystemId::Kaw4 => Ok(kaw4_uv_system()),
    }
}

// ---------------------------------------------------------------------------
// Defining relations and solutions
// ---------------------------------------------------------------------------

fn relation_vars() -> Vars {
    Vars::new(["q1", "t1", "t2"])
}

/// Clearing of (q1(q1+1)/((q1-1)(q1-2)))^3 = (t2/t1)^2.
pub fn g1_relation() -> AlgebraicContext {
    let vars = relation_vars();
    let p = rf("q1^3*(q1+1)^3*t1^2 - (q1-1)^3*(q1-2)^3*t2^2", &vars);
    AlgebraicContext::new("q1", p.num().clone()).expect("valid relation")
}

/// Clearing of (q1(3q1+2t1)/3)^3 = 2 t2^2.
pub fn g2_relation() -> AlgebraicContext {
    let vars = relation_vars();
    let p = rf("q1^3*(3*q1+2*t1)^3 - 54*t2^2", &vars);
    AlgebraicContext::new("q1", p.num().clone()).expect("valid relation")
}

/// q1 q2 = t2 with q1 + q2 = -t1: the Kaw4 critical-point relation.
pub fn kaw4_relation() -> AlgebraicContext {
    let vars = relation_vars();
    let p = rf("q1^2 + t1*q1 + t2", &vars);
    AlgebraicContext::new("q1", p.num().clone()).expect("valid relation")
}

pub fn kim122_solution() -> AlgebraicSolutionRecord {
    let vars = system_vars();
    let mut assignments = BTreeMap::new();
    assignments.insert("q1".to_string(), rf("q1", &vars));
    assignments.insert("q2".to_string(), rf("(q1+1)/(2*q1-1)", &vars));
    assignments.insert(
        "p1".to_string(),
        rf("-t1/(2*(q1-1)^2) - t2/(2*q1^2) - (2*q1-1)/(6*q1*(q1-1))", &vars),
    );
    assignments.insert(
        "p2".to_string(),
        rf(
            "-(2*q1-1)^2*t1/(2*(q1-2)^2) - (2*q1-1)^2*t2/(2*(q1+1)^2) \
             + (2*q1-1)/(2*(q1-2)*(q1+1))",
            &vars,
        ),
    );
    AlgebraicSolutionRecord {
        ctx: Some(g1_relation()),
        assignments,
        label: "Kim122".into(),
    }
}

pub fn kim23_solution() -> AlgebraicSolutionRecord {
    let vars = system_vars();
    let mut assignments = BTreeMap::new();
    assignments.insert("q1".to_string(), rf("q1", &vars));
    assignments.insert("q2".to_string(), rf("-q1 - 2*t1/3", &vars));
    assignments.insert(
        "p1".to_string(),
        rf("q1/4 + t1/2 - 1/(6*q1) - t2/(2*q1^2)", &vars),
    );
    assignments.insert(
        "p2".to_string(),
        rf(
            "-q1/4 + t1/3 + 1/(2*(3*q1+2*t1)) - 9*t2/(2*(3*q1+2*t1)^2)",
            &vars,
        ),
    );
    AlgebraicSolutionRecord {
        ctx: Some(g2_relation()),
        assignments,
        label: "Kim23".into(),
    }
}

pub fn kaw4_solution() -> AlgebraicSolutionRecord {
    let vars = Vars::new(["u1", "u2", "v1", "v2", "t1", "t2"]);
    let mut assignments = BTreeMap::new();
    assignments.insert("u1".to_string(), rf("-t1", &vars));
    assignments.insert("u2".to_string(), rf("t2", &vars));
    assignments.insert("v1".to_string(), rf("0", &vars));
    assignments.insert("v2".to_string(), rf("3/(4*t2)", &vars));
    AlgebraicSolutionRecord { ctx: None, assignments, label: "Kaw4".into() }
}

// ---------------------------------------------------------------------------
// Base equations and covering maps for the pull-back constructions
// ---------------------------------------------------------------------------

pub fn pullback_vars() -> Vars {
    Vars::new(["x", "z", "q1", "t1", "t2"])
}

/// Degenerate Whittaker base u'' = (1/z - 2/(9z^2)) u, the SL form of the
/// degenerate Kummer equation at c = 2/3.
pub fn dw_base() -> SLForm {
    SLForm { indep: "z".into(), q: rf("1/z - 2/(9*z^2)", &pullback_vars()) }
}

/// Dihedral base u'' = (1/z - 3/(16 z^2)) u used by the Kaw4 construction.
pub fn kaw_base() -> SLForm {
    SLForm { indep: "z".into(), q: rf("1/z - 3/(16*z^2)", &pullback_vars()) }
}

pub fn kim122_cover() -> RationalMap {
    RationalMap {
        indep: "x".into(),
        value: rf(
            "t2^2*(2*x - 4*q1*x + q1^2 + q1)^3/(16*q1^3*(q1+1)^3*x^2*(x-1)^2)",
            &pullback_vars(),
        ),
    }
}

pub fn kim23_cover() -> RationalMap {
    RationalMap {
        indep: "x".into(),
        value: rf("(3*x^2 + 8*t1*x + 4*q1*t1 + 6*q1^2)^3/(6912*x^2)", &pullback_vars()),
    }
}

pub fn kaw4_cover() -> RationalMap {
    RationalMap {
        indep: "x".into(),
        value: rf("(x^2 + 3*t1*x - 3*t2)^2/(36*x)", &pullback_vars()),
    }
}

// ---------------------------------------------------------------------------
// Painlevé solutions (the algebraic rows)
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolutionId {
    Kim122,
    Kim23,
    Kaw4,
    PvRat,
    PvLag,
    PvAlg,
    PivRat,
    PivHer,
    PiiiD6,
    PiiiD8,
    PiiiD7,
    P34,
    P2Rat,
}

impl SolutionId {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "kim122" => SolutionId::Kim122,
            "kim23" => SolutionId::Kim23,
            "kaw4" => SolutionId::Kaw4,
            "pv-rat" => SolutionId::PvRat,
            "pv-lag" => SolutionId::PvLag,
            "pv-alg" => SolutionId::PvAlg,
            "piv-rat" => SolutionId::PivRat,
            "piv-her" => SolutionId::PivHer,
            "piii-d6" => SolutionId::PiiiD6,
            "piii-d8" => SolutionId::PiiiD8,
            "piii-d7" => SolutionId::PiiiD7,
            "p34" => SolutionId::P34,
            "pii" => SolutionId::P2Rat,
            _ => return None,
        })
    }
}

/// A Table-2 row bound to a residual check: equation kind, parameters, and
/// the solution with its uniformizer (t and q as functions of s).
pub struct PainleveSolution {
    pub kind: PainleveKind,
    pub params: Vec<RatFunc>,
    pub record: AlgebraicSolutionRecord,
}

fn painleve_vars() -> Vars {
    Vars::new(["s", "theta"])
}

fn painleve_record(label: &str, q: &str, t: &str) -> AlgebraicSolutionRecord {
    let vars = painleve_vars();
    let mut assignments = BTreeMap::new();
    assignments.insert("q".to_string(), rf(q, &vars));
    assignments.insert("t".to_string(), rf(t, &vars));
    AlgebraicSolutionRecord { ctx: None, assignments, label: label.into() }
}

/// The algebraic Painlevé rows. The two P_III' rows (D6, D8) are stated in
/// the quadratic-time normal form q'' = q'²/q − q'/t + q²(α+γq)/(4t²) +
/// β/(4t) + δ/(4q), matching their q = √t representatives; the D7 row uses
/// the plain P_III normal form.
pub fn painleve_solution(id: SolutionId) -> Option<PainleveSolution> {
    let vars = painleve_vars();
    let p4 = |a: &str, b: &str| vec![rf(a, &vars), rf(b, &vars)];
    let p44 = |a: &str, b: &str, c: &str, d: &str| {
        vec![rf(a, &vars), rf(b, &vars), rf(c, &vars), rf(d, &vars)]
    };
    Some(match id {
        SolutionId::PvRat => PainleveSolution {
            kind: PainleveKind::P5,
            params: p44("theta^2/2", "-theta^2/2", "0", "-1/2"),
            record: painleve_record("P_V-rat", "-1", "s"),
        },
        SolutionId::PvLag => PainleveSolution {
            kind: PainleveKind::P5,
            params: p44("theta^2/2", "-1/2", "theta", "-1/2"),
            record: painleve_record("P_V-Lag", "s/theta + 1", "s"),
        },
        SolutionId::PvAlg => PainleveSolution {
            kind: PainleveKind::P5,
            params: p44("theta^2/2", "-1/8", "-2", "0"),
            record: painleve_record("P_V-alg", "2*s/theta + 1", "s^2"),
        },
        SolutionId::PivRat => PainleveSolution {
            kind: PainleveKind::P4,
            params: p4("0", "-2/9"),
            record: painleve_record("P_IV-rat", "-2*s/3", "s"),
        },
        SolutionId::PivHer => PainleveSolution {
            kind: PainleveKind::P4,
            params: p4("0", "-2"),
            record: painleve_record("P_IV-Her", "-2*s", "s"),
        },
        SolutionId::PiiiD6 => PainleveSolution {
            kind: PainleveKind::P3Prime,
            params: p44("4*theta", "-4*theta", "4", "-4"),
            record: painleve_record("P_III^D6-alg", "s", "s^2"),
        },
        SolutionId::PiiiD8 => PainleveSolution {
            kind: PainleveKind::P3Prime,
            params: p44("4", "-4", "0", "0"),
            record: painleve_record("P_III^D8-alg", "s", "s^2"),
        },
        SolutionId::PiiiD7 => PainleveSolution {
            kind: PainleveKind::P3,
            params: p44("-8", "0", "0", "-4"),
            record: painleve_record("P_III^D7-alg", "s", "-2*s^3"),
        },
        SolutionId::P34 => PainleveSolution {
            kind: PainleveKind::P2,
            params: vec![rf("0", &vars)],
            record: painleve_record("P_34-rat", "0", "s"),
        },
        SolutionId::P2Rat => PainleveSolution {
            kind: PainleveKind::P2,
            params: vec![rf("0", &vars)],
            record: painleve_record("P_II-rat", "0", "s"),
        },
        SolutionId::Kim122 | SolutionId::Kim23 | SolutionId::Kaw4 => return None,
    })
}
