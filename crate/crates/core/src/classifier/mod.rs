//! Bounded exhaustive search for admissible covers: base-equation
//! enumeration under the Euler-characteristic bound, passport enumeration
//! (scattered and confluent shapes), admissibility and realizability
//! filtering, and canonical row output.

pub mod tables;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Signed};


use crate::covers::{
    analyze_cover, is_scattered, partitions, realizable, CoverError, Partition, Passport,
};
use crate::exactalg::Rat;
use crate::formal::{
    chi_irr, orbifold_order, BaseEquation, CatalogId, Exponent, FormalDatum, HalfInt,
    OrbifoldOrder,
};

/// One classified cover: a base equation, a passport, and the derived data.
#[derive(Clone, Debug)]
pub struct ClassRow {
    pub base: BaseEquation,
    pub degree: u32,
    pub passport: Passport,
    pub b: usize,
    pub target: Vec<FormalDatum>,
    pub t: i64,
    pub genus: i64,
    pub label: Option<String>,
    /// Set when the base is outside the catalog whose Galois criteria we
    /// can check formally; such rows are reported, not suppressed.
    pub galois_uncertain: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BaseMode {
    Logarithmic,
    Irregular,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SearchMode {
    Log,
    Scattered,
    Confluent,
}

impl SearchMode {
    fn base_mode(self) -> BaseMode {
        match self {
            SearchMode::Log => BaseMode::Logarithmic,
            _ => BaseMode::Irregular,
        }
    }
}

const MAX_NU: u64 = 6;
const DEGREE_HARD_BOUND: u32 = 8;

fn fd(kappa: HalfInt, theta: Exponent) -> FormalDatum {
    FormalDatum::new(kappa, theta).expect("valid datum")
}

/// Pole sort key: κ first, then explicit rationals ascending, then
/// parameters. Fixes the canonical pole order of bases and rows.
fn pole_cmp(a: &FormalDatum, b: &FormalDatum) -> Ordering {
    a.kappa.cmp(&b.kappa).then_with(|| match (&a.theta, &b.theta) {
        (Exponent::Rational(x), Exponent::Rational(y)) => x.cmp(y),
        (Exponent::Rational(_), Exponent::Affine { .. }) => Ordering::Less,
        (Exponent::Affine { .. }, Exponent::Rational(_)) => Ordering::Greater,
        (Exponent::Affine { coeffs: ca, shift: sa }, Exponent::Affine { coeffs: cb, shift: sb }) => {
            ca.cmp(cb).then_with(|| sa.cmp(sb))
        }
    })
}

/// The §3-style reducibility/dihedral filters that can be read off the
/// formal data of a catalog base. True means the base is excluded.
fn catalog_galois_excluded(base: &BaseEquation) -> bool {
    match base.catalog {
        Some(CatalogId::DegenerateConfluent) => {
            // dihedral exactly when the logarithmic exponent lies in 1/2+Z
            base.poles.iter().any(|p| {
                p.kappa.is_zero()
                    && matches!(orbifold_order(&p.theta), OrbifoldOrder::Finite(2))
            })
        }
        Some(CatalogId::Kummer) => {
            // reducible iff θ∞ = ±θ0 mod 2Z; decidable only when both are
            // explicit rationals
            let mut log_theta = None;
            let mut irr_theta = None;
            for p in &base.poles {
                if p.kappa.is_zero() {
                    log_theta = Some(&p.theta);
                } else {
                    irr_theta = Some(&p.theta);
                }
            }
            match (log_theta, irr_theta) {
                (Some(Exponent::Rational(a)), Some(Exponent::Rational(b))) => {
                    let two = crate::exactalg::rat_int(2);
                    let diff = (a - b) / &two;
                    let sum = (a + b) / &two;
                    diff.denom().is_one() || sum.denom().is_one()
                }
                _ => false,
            }
        }
        Some(CatalogId::Weber) => base.poles.iter().any(|p| match &p.theta {
            Exponent::Rational(r) => (r / crate::exactalg::rat_int(2)).denom().is_one(),
            _ => false,
        }),
        _ => false,
    }
}

fn assign_catalog(poles: &[FormalDatum]) -> Option<CatalogId> {
    let mut twice: Vec<i64> = poles.iter().map(|p| p.kappa.twice()).collect();
    twice.sort_unstable();
    match twice.as_slice() {
        [0, 0, 0] => Some(CatalogId::Gauss),
        [0, 2] => Some(CatalogId::Kummer),
        [4] => Some(CatalogId::Weber),
        [0, 1] => Some(CatalogId::DegenerateConfluent),
        [3] => Some(CatalogId::Airy),
        _ => None,
    }
}

fn make_base(mut poles: Vec<FormalDatum>) -> BaseEquation {
    poles.sort_by(pole_cmp);
    let catalog = assign_catalog(&poles);
    BaseEquation { genus0: 0, poles, catalog }
}

/// Whether a degree ≥ 2 cover can be admissible over this base:
/// χ < 0 and 2·|χ| ≤ 1.
fn chi_feasible(base: &BaseEquation) -> bool {
    let chi = chi_irr(base);
    chi.is_negative() && crate::exactalg::rat_int(2) * chi.abs() <= Rat::one()
}

/// Enumerate the candidate genus-0 base equations for the search.
///
/// Logarithmic mode: all poles logarithmic, at least one of infinite
/// orbifold order, finite orders in 2..=6. Irregular mode: at least one
/// irregular pole with κ ≤ 2 and at most 3 poles. Both modes keep only
/// bases over which some degree ≥ 2 cover satisfies d·|χ| ≤ 1, and drop
/// catalog bases whose formal data forces a reducible or dihedral Galois
/// group.
pub fn enumerate_bases(mode: BaseMode) -> Vec<BaseEquation> {
    let mut out: Vec<BaseEquation> = Vec::new();
    let mut push = |poles: Vec<FormalDatum>| {
        let base = make_base(poles);
        if !chi_feasible(&base) || catalog_galois_excluded(&base) {
            return;
        }
        if !out.iter().any(|b| b.poles == base.poles) {
            out.push(base);
        }
    };

    match mode {
        BaseMode::Logarithmic => {
            // finite-order pole multisets of size 0..=3, plus 1 or 2 generic
            // poles
            let orders: Vec<u64> = (2..=MAX_NU).collect();
            let mut finite_multisets: Vec<Vec<u64>> = vec![vec![]];
            for size in 1..=3usize {
                let mut level: Vec<Vec<u64>> = Vec::new();
                fn rec(
                    orders: &[u64],
                    size: usize,
                    start: usize,
                    acc: &mut Vec<u64>,
                    out: &mut Vec<Vec<u64>>,
                ) {
                    if acc.len() == size {
                        out.push(acc.clone());
                        return;
                    }
                    for i in start..orders.len() {
                        acc.push(orders[i]);
                        rec(orders, size, i, acc, out);
                        acc.pop();
                    }
                }
                rec(&orders, size, 0, &mut Vec::new(), &mut level);
                finite_multisets.extend(level);
            }
            for finite in &finite_multisets {
                for generics in 1..=2usize {
                    let mut poles: Vec<FormalDatum> = finite
                        .iter()
                        .map(|&nu| fd(HalfInt::ZERO, Exponent::rational(1, nu as i64)))
                        .collect();
                    for g in 0..generics {
                        let name = if generics == 1 {
                            "theta".to_string()
                        } else {
                            format!("theta{}", g + 1)
                        };
                        poles.push(fd(HalfInt::ZERO, Exponent::symbol(&name)));
                    }
                    push(poles);
                }
            }
        }
        BaseMode::Irregular => {
            // log-pole options (by orbifold order or generic) and irregular
            // κ in {1/2, 1, 3/2, 2}
            #[derive(Clone, Copy)]
            enum PoleKind {
                LogNu(u64),
                LogGeneric,
                Irr(i64), // twice kappa
            }
            let kinds: Vec<PoleKind> = (2..=MAX_NU)
                .map(PoleKind::LogNu)
                .chain([PoleKind::LogGeneric])
                .chain([1, 2, 3, 4].into_iter().map(PoleKind::Irr))
                .collect();
            // multisets of up to 3 pole kinds with at least one irregular
            let n = kinds.len();
            let mut stack: Vec<usize> = Vec::new();
            fn rec(
                kinds: &[PoleKind],
                n: usize,
                start: usize,
                stack: &mut Vec<usize>,
                emit: &mut dyn FnMut(&[usize]),
            ) {
                if !stack.is_empty() {
                    emit(stack);
                }
                if stack.len() == 3 {
                    return;
                }
                for i in start..n {
                    stack.push(i);
                    rec(kinds, n, i, stack, emit);
                    stack.pop();
                }
            }
            let mut candidates: Vec<Vec<usize>> = Vec::new();
            rec(&kinds, n, 0, &mut stack, &mut |s| candidates.push(s.to_vec()));
            for combo in candidates {
                let mut poles = Vec::new();
                let mut generic_names = 0usize;
                let generics_total = combo
                    .iter()
                    .filter(|&&i| {
                        matches!(kinds[i], PoleKind::LogGeneric)
                            || matches!(kinds[i], PoleKind::Irr(t) if t % 2 == 0)
                    })
                    .count();
                let mut any_irregular = false;
                for &i in &combo {
                    match kinds[i] {
                        PoleKind::LogNu(nu) => {
                            poles.push(fd(HalfInt::ZERO, Exponent::rational(1, nu as i64)));
                        }
                        PoleKind::LogGeneric => {
                            generic_names += 1;
                            let name = if generics_total == 1 {
                                "theta".to_string()
                            } else {
                                format!("theta{generic_names}")
                            };
                            poles.push(fd(HalfInt::ZERO, Exponent::symbol(&name)));
                        }
                        PoleKind::Irr(twice) => {
                            any_irregular = true;
                            if twice % 2 == 0 {
                                generic_names += 1;
                                let name = if generics_total == 1 {
                                    "theta".to_string()
                                } else {
                                    format!("theta{generic_names}")
                                };
                                poles.push(fd(
                                    HalfInt::from_twice(twice),
                                    Exponent::symbol(&name),
                                ));
                            } else {
                                poles.push(fd(HalfInt::from_twice(twice), Exponent::zero()));
                            }
                        }
                    }
                }
                if any_irregular {
                    push(poles);
                }
            }
        }
    }

    out.sort_by(|a, b| {
        let (pa, pb) = (&a.poles, &b.poles);
        pa.len().cmp(&pb.len()).then_with(|| {
            for (x, y) in pa.iter().zip(pb.iter()) {
                let c = pole_cmp(x, y);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    });
    out
}

/// The partitions allowed over one pole in scattered shape.
fn scattered_parts(pole: &FormalDatum, d: u32) -> Vec<Partition> {
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
        None => vec![Partition::trivial(d)],
        Some(nu) => {
            // all partitions with parts in {nu, 1}
            let mut out = Vec::new();
            let mut k = 0;
            while k * nu <= d {
                let mut parts = vec![nu; k as usize];
                parts.extend(std::iter::repeat(1).take((d - k * nu) as usize));
                out.push(Partition::new(parts).expect("nonempty"));
                k += 1;
            }
            out
        }
    }
}

fn cartesian<T: Clone>(choices: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![vec![]];
    for c in choices {
        let mut next = Vec::with_capacity(out.len() * c.len());
        for prefix in &out {
            for item in c {
                let mut row = prefix.clone();
                row.push(item.clone());
                next.push(row);
            }
        }
        out = next;
    }
    out
}

/// Replace the exponent of every finite-order logarithmic pole whose fiber
/// exploits no divisibility by a fresh generic parameter; rational
/// exponents untouched by divisibility behave generically, which is how
/// the classification subsumes them.
fn collapse_generic(base: &BaseEquation, passport: &Passport) -> BaseEquation {
    let mut poles = base.poles.clone();
    let mut fresh = 0usize;
    for (pole, fiber) in poles.iter_mut().zip(&passport.pole_fibers) {
        if !pole.kappa.is_zero() {
            continue;
        }
        if let OrbifoldOrder::Finite(nu) = orbifold_order(&pole.theta) {
            if nu > 1 && !fiber.parts().iter().any(|&m| (m as u64) % nu == 0) {
                pole.theta = Exponent::symbol(&format!("collapse{fresh}"));
                fresh += 1;
            }
        }
    }
    BaseEquation { genus0: base.genus0, poles: poles.clone(), catalog: assign_catalog(&poles) }
}

/// Rename generic parameters canonically after sorting: a single parameter
/// becomes `theta`, several become `theta1`, `theta2`, ... in pole order.
fn canonical_rename(
    poles: &mut Vec<FormalDatum>,
    fibers: &mut Vec<Partition>,
    target: &mut Vec<FormalDatum>,
) {
    // Sort pole/fiber pairs first.
    let mut pairs: Vec<(FormalDatum, Partition)> =
        poles.iter().cloned().zip(fibers.iter().cloned()).collect();
    pairs.sort_by(|a, b| pole_cmp(&a.0, &b.0).then_with(|| a.1.cmp(&b.1)));
    let mut names: Vec<String> = Vec::new();
    for (p, _) in &pairs {
        if let Exponent::Affine { coeffs, .. } = &p.theta {
            for n in coeffs.keys() {
                if !names.contains(n) {
                    names.push(n.clone());
                }
            }
        }
    }
    let rename: BTreeMap<String, String> = names
        .iter()
        .enumerate()
        .map(|(i, n)| {
            let new = if names.len() == 1 {
                "theta".to_string()
            } else {
                format!("theta{}", i + 1)
            };
            (n.clone(), new)
        })
        .collect();
    let apply = |e: &Exponent| -> Exponent {
        match e {
            Exponent::Rational(_) => e.clone(),
            Exponent::Affine { coeffs, shift } => Exponent::affine(
                coeffs
                    .iter()
                    .map(|(k, c)| (rename.get(k).cloned().unwrap_or_else(|| k.clone()), *c))
                    .collect(),
                shift.clone(),
            ),
        }
    };
    for (p, _) in pairs.iter_mut() {
        p.theta = apply(&p.theta);
    }
    for t in target.iter_mut() {
        t.theta = apply(&t.theta);
    }
    target.sort_by(pole_cmp);
    *poles = pairs.iter().map(|(p, _)| p.clone()).collect();
    *fibers = pairs.iter().map(|(_, f)| f.clone()).collect();
}

fn row_key(row: &ClassRow) -> String {
    let mut s = format!("{}|d{}|", row.base, row.degree);
    for f in &row.passport.pole_fibers {
        s.push_str(&f.to_string());
    }
    s.push_str(&format!("|B{}", row.b));
    s
}

/// Run the bounded search. Scattered and log modes restrict pole fibers to
/// scattered shapes; confluent mode allows arbitrary partitions and emits
/// only the strictly non-scattered rows. Free fibers are always simple:
/// their count is pinned by the genus-0 Riemann–Hurwitz count, and merging
/// free branching only lowers B, never helping admissibility.
pub fn search(mode: SearchMode, max_degree: u32) -> Result<Vec<ClassRow>, CoverError> {
    if max_degree > DEGREE_HARD_BOUND {
        return Err(CoverError::DegreeTooLarge(max_degree));
    }
    let bases = enumerate_bases(mode.base_mode());
    let mut rows: Vec<ClassRow> = Vec::new();
    let mut seen: Vec<String> = Vec::new();

    for base in &bases {
        let chi = chi_irr(base);
        // d ≤ 1/|χ| keeps d·|χ| ≤ 1
        let dmax = {
            let inv = Rat::one() / chi.abs();
            let fl: i64 = inv.floor().to_integer().try_into().unwrap_or(0);
            (fl.max(0) as u32).min(max_degree)
        };
        for d in 2..=dmax {
            let per_pole: Vec<Vec<Partition>> = base
                .poles
                .iter()
                .map(|p| match mode {
                    SearchMode::Confluent => partitions(d),
                    _ => scattered_parts(p, d),
                })
                .collect();
            for pole_fibers in cartesian(&per_pole) {
                let r_poles: u32 = pole_fibers.iter().map(Partition::ramification).sum();
                if 2 * d < 2 + r_poles {
                    continue;
                }
                let b = (2 * d - 2 - r_poles) as usize;
                let passport = Passport::with_simple_free(d, pole_fibers, b)?;
                let analysis = match analyze_cover(base, &passport) {
                    Ok(a) => a,
                    Err(CoverError::NonIntegralPoleCount(_)) => continue,
                    Err(e) => return Err(e),
                };
                debug_assert_eq!(analysis.genus, 0);
                if !analysis.admissible {
                    continue;
                }
                if mode == SearchMode::Confluent && is_scattered(base, &passport) {
                    continue;
                }
                if !realizable(&passport)? {
                    continue;
                }
                // Generic collapse, then canonical form.
                let collapsed = collapse_generic(base, &passport);
                let analysis = analyze_cover(&collapsed, &passport)?;
                debug_assert!(analysis.admissible);
                let mut poles = collapsed.poles.clone();
                let mut fibers = passport.pole_fibers.clone();
                let mut target = analysis.target.clone();
                canonical_rename(&mut poles, &mut fibers, &mut target);
                let canon_base = BaseEquation {
                    genus0: 0,
                    poles: poles.clone(),
                    catalog: assign_catalog(&poles),
                };
                let canon_passport = Passport::with_simple_free(d, fibers, b)?;
                let label = label_for(&target, analysis.t);
                let row = ClassRow {
                    galois_uncertain: canon_base.catalog.is_none(),
                    base: canon_base,
                    degree: d,
                    passport: canon_passport,
                    b,
                    target,
                    t: analysis.t,
                    genus: analysis.genus,
                    label,
                };
                let key = row_key(&row);
                if !seen.contains(&key) {
                    seen.push(key);
                    rows.push(row);
                }
            }
        }
    }

    rows.sort_by(|a, b| {
        let ka = row_key(a);
        let kb = row_key(b);
        a.base
            .poles
            .len()
            .cmp(&b.base.poles.len())
            .then_with(|| {
                for (x, y) in a.base.poles.iter().zip(&b.base.poles) {
                    let c = pole_cmp(x, y);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
            .then_with(|| a.degree.cmp(&b.degree))
            .then_with(|| ka.cmp(&kb))
    });
    Ok(rows)
}

/// Equation label from the target formal data: the Painlevé name for
/// deformation dimension 1, Gar^T(κ's) for higher rank.
pub fn label_for(target: &[FormalDatum], t: i64) -> Option<String> {
    let mut twice: Vec<i64> = target.iter().map(|p| p.kappa.twice()).collect();
    twice.sort_unstable();
    if t == 1 {
        let name = match twice.as_slice() {
            [0, 0, 0, 0] => "P_VI",
            [0, 0, 2] => "P_V",
            [0, 0, 1] => "P_III^D6",
            [0, 4] => "P_IV",
            [0, 3] => "P_II",
            [2, 2] => "P_III^D6",
            [1, 2] => "P_III^D7",
            [1, 1] => "P_III^D8",
            [6] => "P_II",
            [5] => "P_I",
            _ => return None,
        };
        return Some(name.to_string());
    }
    if t >= 2 {
        let ks: Vec<String> =
            twice.iter().map(|&tw| HalfInt::from_twice(tw).to_string()).collect();
        return Some(format!("Gar{}({})", t, ks.join(",")));
    }
    None
}

/// JSON value for one row, with rationals serialized as strings "p/q".
pub fn row_to_json(row: &ClassRow) -> serde_json::Value {
    use serde_json::{json, Value};
    let datum = |d: &FormalDatum| -> Value {
        json!({ "kappa": d.kappa.to_string(), "theta": d.theta.to_string() })
    };
    let poles: Vec<Value> =
        row.passport.pole_fibers.iter().map(|f| json!(f.parts().to_vec())).collect();
    json!({
        "base": row.base.poles.iter().map(datum).collect::<Vec<_>>(),
        "degree": row.degree,
        "passport": { "poles": poles, "free_simple": row.b },
        "target": row.target.iter().map(datum).collect::<Vec<_>>(),
        "T": row.t,
        "genus": row.genus,
        "label": row.label.clone().map(Value::from).unwrap_or(Value::Null),
        "galois_filter_uncertain": row.galois_uncertain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_literal(b: &BaseEquation) -> String {
        b.to_string()
    }

    #[test]
    fn irregular_bases_contain_the_catalog_entries() {
        let bases = enumerate_bases(BaseMode::Irregular);
        let lits: Vec<String> = bases.iter().map(base_literal).collect();
        for expect in [
            "(0,1/3)(1/2,0)",
            "(0,1/4)(1/2,0)",
            "(0,theta)(1/2,0)",
            "(0,1/2)(1,theta)",
            "(3/2,0)",
        ] {
            assert!(lits.iter().any(|l| l == expect), "{expect} not in {lits:?}");
        }
        // Weber (2,theta) has χ = -1: no degree ≥ 2 cover can work.
        assert!(!lits.iter().any(|l| l == "(2,theta)"));
    }

    #[test]
    fn logarithmic_bases_contain_hypergeometric_entries() {
        let bases = enumerate_bases(BaseMode::Logarithmic);
        let lits: Vec<String> = bases.iter().map(base_literal).collect();
        assert!(lits.iter().any(|l| l == "(0,1/3)(0,1/2)(0,theta)"), "{lits:?}");
        assert!(lits.iter().any(|l| l == "(0,1/2)(0,theta1)(0,theta2)"), "{lits:?}");
    }

    #[test]
    fn labels() {
        use crate::formal::Exponent as E;
        let t = |k: i64, e: E| FormalDatum::new(HalfInt::from_twice(k), e).unwrap();
        let g3 = vec![t(2, E::zero()), t(2, E::zero()), t(2, E::integer(1))];
        assert_eq!(label_for(&g3, 3).unwrap(), "Gar3(1,1,1)");
        let p2 = vec![t(6, E::integer(1))];
        assert_eq!(label_for(&p2, 1).unwrap(), "P_II");
        let d7 = vec![t(1, E::zero()), t(2, E::zero())];
        assert_eq!(label_for(&d7, 1).unwrap(), "P_III^D7");
    }
}
