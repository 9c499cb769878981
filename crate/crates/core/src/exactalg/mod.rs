//! Exact arbitrary-precision arithmetic over multivariate rational
//! functions: parsing, differentiation, substitution, Laurent expansion,
//! and reduction modulo one algebraic relation.
//!
//! All values are immutable after construction and safe to share between
//! threads.

mod algctx;
mod gcd;
mod laurent;
mod mpoly;
mod parse;
mod ratfunc;
mod vars;

pub use algctx::{
    equals_mod, laurent_coeffs_mod, pole_order_mod, reduce_mod, AlgebraicContext,
};
pub use gcd::{gcd, gcd_list};
pub use laurent::{laurent_coeffs, pole_order, recenter_at_zero, PointSpec};
pub use mpoly::{rat, rat_int, MPoly, Mono, Rat};
pub use parse::parse;
pub use ratfunc::RatFunc;
pub use vars::Vars;

use std::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Error {
    Parse { pos: usize, msg: String },
    UnknownSymbol(String),
    ZeroDenominator,
    DivisionByZero,
    SingularOnCurve,
    DegenerateRelation,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::UnknownSymbol(s) => write!(f, "unknown symbol: {s}"),
            Error::ZeroDenominator => write!(f, "denominator is identically zero"),
            Error::DivisionByZero => write!(f, "division by the zero function"),
            Error::SingularOnCurve => {
                write!(f, "denominator reduces to zero modulo the relation")
            }
            Error::DegenerateRelation => {
                write!(f, "relation has degree zero in its generator")
            }
        }
    }
}

impl std::error::Error for Error {}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use num_traits::Zero;

    use super::*;

    fn vx() -> Vars {
        Vars::new(["x"])
    }

    fn vxt() -> Vars {
        Vars::new(["x", "t1", "t2"])
    }

    fn p(s: &str, vars: &Vars) -> RatFunc {
        parse(s, vars).unwrap()
    }

    #[test]
    fn parse_cancels_gcd() {
        let vars = vx();
        assert_eq!(p("(x^2-1)/(x-1)", &vars), p("x+1", &vars));
    }

    #[test]
    fn parse_normalizes_denominator_monic() {
        let vars = vxt();
        let r = p("t2^2/(4*x^3)", &vars);
        // den renormalized monic: x^3, coefficient folded into num
        assert_eq!(format!("{}", r.den()), "x^3");
        assert_eq!(format!("{}", r.num()), "1/4*t2^2");
    }

    #[test]
    fn parse_zero_denominator_is_an_error() {
        let vars = vx();
        match parse("x/(x-x)", &vars) {
            Err(Error::Parse { msg, .. }) => assert!(msg.contains("zero")),
            other => panic!("expected zero-denominator error, got {other:?}"),
        }
    }

    #[test]
    fn parse_reports_position_and_unknown_symbols() {
        let vars = vx();
        assert!(matches!(parse("x + ", &vars), Err(Error::Parse { .. })));
        assert!(matches!(parse("x + y", &vars), Err(Error::UnknownSymbol(s)) if s == "y"));
    }

    #[test]
    fn parse_signed_exponents() {
        let vars = vx();
        assert_eq!(p("x^-2", &vars), p("1/x^2", &vars));
    }

    #[test]
    fn differentiate_simple() {
        let vars = vx();
        assert_eq!(p("x^2", &vars).derivative_named("x").unwrap(), p("2*x", &vars));
        assert_eq!(p("1/x", &vars).derivative_named("x").unwrap(), p("-1/x^2", &vars));
    }

    #[test]
    fn differentiate_two_evaluation_orders_agree() {
        // d/dx ((x^2+3t1x-3t2)^2/(36x)): quotient rule on the factored form
        // vs derivative of the expanded numerator.
        let vars = vxt();
        let quotient_form = p("(x^2+3*t1*x-3*t2)^2/(36*x)", &vars);
        let d1 = quotient_form.derivative_named("x").unwrap();

        let expanded = {
            let n = p("x^4+6*t1*x^3+(9*t1^2-6*t2)*x^2-18*t1*t2*x+9*t2^2", &vars);
            (&n / &p("36*x", &vars)).unwrap()
        };
        assert_eq!(expanded, quotient_form);
        let d2 = expanded.derivative_named("x").unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn substitute_simple() {
        let vars = vx();
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), p("x^2", &vars));
        assert_eq!(p("x+1", &vars).substitute(&b).unwrap(), p("x^2+1", &vars));
    }

    #[test]
    fn substitute_into_inverse_cube() {
        let vars = Vars::new(["z", "x"]);
        let mut b = BTreeMap::new();
        b.insert("z".to_string(), p("x^3", &vars));
        assert_eq!(p("1/z", &vars).substitute(&b).unwrap(), p("1/x^3", &vars));
    }

    #[test]
    fn substitute_common_denominator_oracle() {
        // (1/z - 2/(9 z^2)) at z = 4x^3/9, cross-checked against the value
        // recomputed over a single common denominator: (9z - 2)/(9 z^2).
        let vars = Vars::new(["z", "x"]);
        let f = p("1/z - 2/(9*z^2)", &vars);
        let g = p("(9*z-2)/(9*z^2)", &vars);
        let mut b = BTreeMap::new();
        b.insert("z".to_string(), p("4*x^3/9", &vars));
        let fv = f.substitute(&b).unwrap();
        let gv = g.substitute(&b).unwrap();
        assert_eq!(fv, gv);
        assert_eq!(fv, p("9/(4*x^3) - 9/(8*x^6)", &vars));
    }

    #[test]
    fn substitute_zero_denominator_detected() {
        let vars = vx();
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), RatFunc::zero(&vars));
        assert!(matches!(p("1/x", &vars).substitute(&b), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn laurent_one_over_x() {
        let vars = vx();
        let r = p("1/x", &vars);
        let c = laurent_coeffs(&r, "x", &PointSpec::origin(&r), -2, 3).unwrap();
        assert_eq!(c[0], RatFunc::zero(&vars));
        assert_eq!(c[1], RatFunc::one(&vars));
        assert!(c[2].is_zero());
    }

    #[test]
    fn laurent_degenerate_whittaker_coefficient() {
        // 1/x - 2/(9x^2): the order -2 coefficient is -2/9.
        let vars = vx();
        let r = p("1/x - 2/(9*x^2)", &vars);
        let c = laurent_coeffs(&r, "x", &PointSpec::origin(&r), -2, 1).unwrap();
        assert_eq!(c[0], p("-2/9", &vars));
    }

    #[test]
    fn laurent_at_symbolic_center() {
        let vars = vxt();
        let r = p("1/(x-t1)^2 + t2/(x-t1)", &vars);
        let center = PointSpec::Finite(p("t1", &vars));
        let c = laurent_coeffs(&r, "x", &center, -2, 2).unwrap();
        assert_eq!(c[0], RatFunc::one(&vars));
        assert_eq!(c[1], p("t2", &vars));
    }

    #[test]
    fn laurent_reconstruction_tail_order() {
        // Subtracting the returned terms raises the pole order.
        let vars = vx();
        let r = p("(x^3+2*x+5)/(x^2*(x-1))", &vars);
        let c = laurent_coeffs(&r, "x", &PointSpec::origin(&r), -2, 4).unwrap();
        let x = p("x", &vars);
        let mut partial = RatFunc::zero(&vars);
        for (i, ci) in c.iter().enumerate() {
            let e = i as i64 - 2;
            partial = &partial + &(ci * &x.pow(e).unwrap());
        }
        let tail = &r - &partial;
        // tail must vanish to order >= -2 + 4 = 2 at 0
        let tc = laurent_coeffs(&tail, "x", &PointSpec::origin(&r), -2, 4).unwrap();
        assert!(tc.iter().all(|c| c.is_zero()));
    }

    #[test]
    fn reduce_mod_power() {
        // ctx: q^3 - t; q^4 reduces to t*q
        let vars = Vars::new(["q", "t"]);
        let rel = p("q^3 - t", &vars);
        let ctx = AlgebraicContext::new("q", rel.num().clone()).unwrap();
        let r = reduce_mod(&p("q^4", &vars), &ctx).unwrap();
        assert_eq!(r, p("t*q", &vars));
        assert!(equals_mod(&p("q*q^2", &vars), &p("t", &vars), &ctx).unwrap());
        // idempotent
        assert_eq!(reduce_mod(&r, &ctx).unwrap(), r);
    }

    #[test]
    fn reduce_mod_denominator_singular() {
        let vars = Vars::new(["q", "t"]);
        let ctx = AlgebraicContext::new("q", p("q^2 - t", &vars).num().clone()).unwrap();
        let r = p("1/(q^2 - t)", &vars);
        assert!(matches!(reduce_mod(&r, &ctx), Err(Error::SingularOnCurve)));
    }

    #[test]
    fn theorem_relation_clears_exactly() {
        // G2 relation: (q1(3q1+2t1)/3)^3 = 2 t2^2, cleared of denominators.
        let vars = Vars::new(["q1", "t1", "t2"]);
        let lhs = p("(q1*(3*q1+2*t1)/3)^3", &vars);
        let rhs = p("2*t2^2", &vars);
        let cleared = {
            let d = &lhs - &rhs;
            d.num().clone()
        };
        let ctx = AlgebraicContext::new("q1", cleared).unwrap();
        assert!(equals_mod(&lhs, &rhs, &ctx).unwrap());
    }

    #[test]
    fn canonical_form_uniqueness_on_common_factors() {
        let vars = vxt();
        let r = p("(x-t1)*(x+t2)", &vars);
        let a = &p("x^2+1", &vars) * &r;
        let b = &p("x-5", &vars) * &r;
        let q1 = (&a / &b).unwrap();
        let q2 = (&p("x^2+1", &vars) / &p("x-5", &vars)).unwrap();
        assert_eq!(q1, q2);
    }

    #[test]
    fn values_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<MPoly>();
        assert_send_sync::<RatFunc>();
        assert_send_sync::<AlgebraicContext>();
    }

    #[test]
    fn display_rationals_as_p_over_q() {
        let vars = vx();
        assert_eq!(format!("{}", p("3/4", &vars)), "3/4");
        assert_eq!(format!("{}", RatFunc::zero(&vars)), "0");
        assert!(Rat::zero().is_zero());
    }
}
