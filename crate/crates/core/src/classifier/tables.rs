//! Static classification data: the expected logarithmic, scattered and
//! confluent cover tables, the Painlevé isomonodromy dictionary, the
//! algebraic Painlevé solutions, and the classical rank-2 list.

use crate::covers::{Partition, Passport};
use crate::formal::{parse_formal_data, BaseEquation, FormalDatum};

/// One expected classification row, stored with the printed representatives.
#[derive(Clone, Debug)]
pub struct ExpectedRow {
    pub base: &'static str,
    pub degree: u32,
    pub pole_fibers: &'static [&'static [u32]],
    pub free_simple: usize,
    pub target: &'static str,
    pub label: Option<&'static str>,
}

impl ExpectedRow {
    pub fn base_data(&self) -> Vec<FormalDatum> {
        parse_formal_data(self.base).expect("static base literal")
    }

    pub fn base_equation(&self) -> BaseEquation {
        BaseEquation::genus0_with(self.base_data(), None)
    }

    pub fn target_data(&self) -> Vec<FormalDatum> {
        parse_formal_data(self.target).expect("static target literal")
    }

    pub fn passport(&self) -> Passport {
        let fibers: Vec<Partition> = self
            .pole_fibers
            .iter()
            .map(|f| Partition::new(f.to_vec()).expect("static partition"))
            .collect();
        Passport::with_simple_free(self.degree, fibers, self.free_simple)
            .expect("static passport")
    }
}

/// Logarithmic classification: hypergeometric bases, 5 rows. The fiber
/// over each base pole is listed in the order of the base literal; targets
/// are the pulled-back formal data.
pub fn logarithmic_rows() -> Vec<ExpectedRow> {
    vec![
        ExpectedRow {
            base: "(0,1/2)(0,1/3)(0,theta)",
            degree: 6,
            pole_fibers: &[&[2, 2, 2], &[3, 3], &[1, 1, 1, 1, 1, 1]],
            free_simple: 3,
            target: "(0,theta)(0,theta)(0,theta)(0,theta)(0,theta)(0,theta)",
            label: Some("Gar3(0,0,0,0,0,0)"),
        },
        ExpectedRow {
            base: "(0,1/2)(0,1/3)(0,theta)",
            degree: 4,
            pole_fibers: &[&[2, 2], &[3, 1], &[1, 1, 1, 1]],
            free_simple: 2,
            target: "(0,1/3)(0,theta)(0,theta)(0,theta)(0,theta)",
            label: Some("Gar2(0,0,0,0,0)"),
        },
        ExpectedRow {
            base: "(0,1/2)(0,1/3)(0,theta)",
            degree: 3,
            pole_fibers: &[&[2, 1], &[3], &[1, 1, 1]],
            free_simple: 1,
            target: "(0,1/2)(0,theta)(0,theta)(0,theta)",
            label: Some("P_VI"),
        },
        ExpectedRow {
            base: "(0,1/2)(0,1/4)(0,theta)",
            degree: 4,
            pole_fibers: &[&[2, 2], &[4], &[1, 1, 1, 1]],
            free_simple: 1,
            target: "(0,theta)(0,theta)(0,theta)(0,theta)",
            label: Some("P_VI"),
        },
        ExpectedRow {
            base: "(0,1/2)(0,theta1)(0,theta2)",
            degree: 2,
            pole_fibers: &[&[2], &[1, 1], &[1, 1]],
            free_simple: 1,
            target: "(0,theta1)(0,theta1)(0,theta2)(0,theta2)",
            label: Some("P_VI"),
        },
    ]
}

/// Irregular classification with scattered cover: 7 rows over the
/// degenerate Kummer bases and the Airy equation.
pub fn scattered_rows() -> Vec<ExpectedRow> {
    vec![
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 6,
            pole_fibers: &[&[3, 3], &[2, 2, 2]],
            free_simple: 3,
            target: "(1,0)(1,0)(1,1)",
            label: Some("Gar3(1,1,1)"),
        },
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 4,
            pole_fibers: &[&[3, 1], &[2, 2]],
            free_simple: 2,
            target: "(0,1/3)(1,0)(1,1)",
            label: Some("Gar2(0,1,1)"),
        },
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 3,
            pole_fibers: &[&[3], &[2, 1]],
            free_simple: 1,
            target: "(1/2,0)(1,0)",
            label: Some("P_III^D7"),
        },
        ExpectedRow {
            base: "(0,1/4)(1/2,0)",
            degree: 4,
            pole_fibers: &[&[4], &[2, 2]],
            free_simple: 1,
            target: "(1,0)(1,1)",
            label: Some("P_III^D6"),
        },
        ExpectedRow {
            base: "(0,theta)(1/2,0)",
            degree: 2,
            pole_fibers: &[&[1, 1], &[2]],
            free_simple: 1,
            target: "(0,theta-1)(1,0)(0,theta)",
            label: Some("P_V"),
        },
        ExpectedRow {
            base: "(0,1/2)(1,theta)",
            degree: 2,
            pole_fibers: &[&[2], &[1, 1]],
            free_simple: 1,
            target: "(1,theta-1)(1,theta)",
            label: Some("P_III^D6"),
        },
        ExpectedRow {
            base: "(3/2,0)",
            degree: 2,
            pole_fibers: &[&[2]],
            free_simple: 1,
            target: "(3,0)",
            label: Some("P_II"),
        },
    ]
}

/// Irregular classification with confluent (non-scattered) cover: 3 rows.
pub fn confluent_rows() -> Vec<ExpectedRow> {
    vec![
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 6,
            pole_fibers: &[&[3, 3], &[4, 2]],
            free_simple: 2,
            target: "(1,0)(2,1)",
            label: Some("Gar2(1,2)"),
        },
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 6,
            pole_fibers: &[&[3, 3], &[6]],
            free_simple: 1,
            target: "(3,1)",
            label: Some("P_II"),
        },
        ExpectedRow {
            base: "(0,1/3)(1/2,0)",
            degree: 4,
            pole_fibers: &[&[3, 1], &[4]],
            free_simple: 1,
            target: "(0,1/3)(2,1)",
            label: Some("P_IV"),
        },
    ]
}

/// The Painlevé isomonodromy dictionary: formal data and the matching
/// equation with its parameter map.
pub fn painleve_dictionary() -> Vec<(&'static str, &'static str)> {
    vec![
        ("(0,theta0)(0,theta1)(0,thetat)(0,theta_inf)",
         "P_VI((theta_inf-1)^2/2, -theta0^2/2, theta1^2/2, (1-thetat^2)/2)"),
        ("(0,theta0)(1,theta1)(0,theta_inf)",
         "P_V(theta_inf^2/2, -(theta0+1)^2/2, theta1, -1/2)"),
        ("(0,theta0)(1/2,0)(0,theta_inf)",
         "P_V(theta_inf^2/2, -(theta0+1)^2/2, -2, 0) ~ P_III(-4(theta0-theta_inf-1), -4(theta0+theta_inf), 4, -4)"),
        ("(0,theta0)(2,theta_inf)", "P_IV(theta_inf, -2(theta0+1)^2)"),
        ("(0,theta0)(3/2,0)", "P_II(theta0-1/2)"),
        ("(1,theta0)(1,theta_inf)", "P_III(4 theta_inf, -4 theta0, 4, -4)"),
        ("(1,theta0)(1/2,0)", "P_III(-8, -4 theta0, 0, -4)"),
        ("(1/2,0)(1/2,0)", "P_III(4, -4, 0, 0)"),
        ("(3,theta_inf)", "P_II((1-theta_inf)/2)"),
        ("(5/2,0)", "P_I"),
    ]
}

/// Algebraic solutions of the irregular Painlevé equations: CLI id,
/// equation with parameters, solution, name, formal data, Galois group,
/// pull-back flag, apparent-pole flag.
pub struct PainleveSolutionRow {
    pub id: &'static str,
    pub equation: &'static str,
    pub solution: &'static str,
    pub name: &'static str,
    pub formal_data: &'static str,
    pub galois: &'static str,
    pub pullback: bool,
    pub apparent_pole: bool,
}

pub fn painleve_solution_rows() -> Vec<PainleveSolutionRow> {
    vec![
        PainleveSolutionRow {
            id: "pv-rat",
            equation: "P_V(theta^2/2, -theta^2/2, 0, -1/2)",
            solution: "q = -1",
            name: "P_V-rat",
            formal_data: "(0,theta-1)(1,0)(0,theta)",
            galois: "SL2",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "pv-lag",
            equation: "P_V(theta^2/2, -1/2, theta, -1/2)",
            solution: "q = t/theta + 1",
            name: "P_V-Lag",
            formal_data: "(0,0)(1,theta)(0,theta)",
            galois: "C_inf",
            pullback: false,
            apparent_pole: true,
        },
        PainleveSolutionRow {
            id: "pv-alg",
            equation: "P_V(theta^2/2, -1/8, -2, 0)",
            solution: "q = 2*sqrt(t)/theta + 1",
            name: "P_V-alg",
            formal_data: "(0,1/2)(1/2,0)(0,theta)",
            galois: "D_inf",
            pullback: false,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "piv-rat",
            equation: "P_IV(0, -2/9)",
            solution: "q = -2t/3",
            name: "P_IV-rat",
            formal_data: "(0,-2/3)(2,0)",
            galois: "SL2",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "piv-her",
            equation: "P_IV(0, -2)",
            solution: "q = -2t",
            name: "P_IV-Her",
            formal_data: "(0,0)(2,0)",
            galois: "C_inf",
            pullback: true,
            apparent_pole: true,
        },
        PainleveSolutionRow {
            id: "piii-d6",
            equation: "P_III(4 theta, -4 theta, 4, -4)",
            solution: "q = sqrt(t)",
            name: "P_III^D6-alg",
            formal_data: "(1,theta)(1,theta)",
            galois: "SL2",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "piii-d8",
            equation: "P_III(4, -4, 0, 0)",
            solution: "q = sqrt(t)",
            name: "P_III^D8-alg",
            formal_data: "(1/2,0)(1/2,0)",
            galois: "D_inf",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "piii-d7",
            equation: "P_III(-8, 0, 0, -4)",
            solution: "q = (-t/2)^(1/3)",
            name: "P_III^D7-alg",
            formal_data: "(1,0)(1/2,0)",
            galois: "SL2",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "p34",
            equation: "P_II(0)",
            solution: "q = 0",
            name: "P_34-rat",
            formal_data: "(0,1/2)(3/2,0)",
            galois: "D_inf",
            pullback: true,
            apparent_pole: false,
        },
        PainleveSolutionRow {
            id: "pii",
            equation: "P_II(0)",
            solution: "q = 0",
            name: "P_II-rat",
            formal_data: "(3,1)",
            galois: "SL2",
            pullback: true,
            apparent_pole: false,
        },
    ]
}

/// Classical algebraic solutions for rank 2 (deformations with diagonal or
/// dihedral Galois group), as formal-data literals with the family kind.
pub fn classical_rank2_list() -> Vec<(&'static str, &'static str)> {
    vec![
        ("(0,1/2)(0,1/2)(0,1/2)(1/2,0)", "infinite discrete family"),
        ("(0,1/2)(0,1/2)(0,theta1)(1,theta2)", "two-parameter family"),
        ("(0,1/2)(1/2,0)(0,theta1)(0,theta2)", "two-parameter family"),
        ("(0,0)(0,theta1)(0,theta2)(1,-theta1-theta2)", "two-parameter family"),
        ("(0,1/2)(0,1/2)(2,theta)", "one-parameter family"),
        ("(0,1/2)(1/2,0)(1,theta)", "one-parameter family"),
        ("(1/2,0)(1/2,0)(0,theta)", "one-parameter family"),
        ("(0,1/2)(3/2,0)(0,theta)", "one-parameter family"),
        ("(0,0)(0,theta)(2,-theta)", "one-parameter family"),
        ("(0,0)(1,theta)(1,-theta)", "one-parameter family"),
        ("(1/2,0)(3/2,0)", "sporadic"),
        ("(0,1/2)(5/2,0)", "sporadic"),
        ("(0,0)(3,0)", "sporadic"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covers::analyze_cover;
    use crate::formal::{gauge_equivalent, teich_dim};

    #[test]
    fn expected_rows_are_selfconsistent() {
        for row in logarithmic_rows()
            .iter()
            .chain(scattered_rows().iter())
            .chain(confluent_rows().iter())
        {
            let base = row.base_equation();
            let passport = row.passport();
            let analysis = analyze_cover(&base, &passport).unwrap();
            assert_eq!(analysis.genus, 0, "{row:?}");
            assert!(analysis.admissible, "{row:?}");
            assert_eq!(analysis.b, row.free_simple, "{row:?}");
            assert!(
                gauge_equivalent(&analysis.target, &row.target_data()),
                "target mismatch for {row:?}: got {:?}",
                analysis.target
            );
        }
    }

    #[test]
    fn classical_list_has_rank_two() {
        for (lit, _) in classical_rank2_list() {
            let data = parse_formal_data(lit).unwrap();
            assert_eq!(teich_dim(0, &data), 2, "{lit}");
        }
    }
}
