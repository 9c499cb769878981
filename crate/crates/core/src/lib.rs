//! Exact-arithmetic toolkit for rank-2 irregular Garnier systems: formal
//! invariants of scalar second-order equations, passport combinatorics of
//! ramified covers with the admissibility search, and exact verification of
//! the explicit algebraic Hamiltonian solutions and their pull-back
//! constructions.

pub mod exactalg;
pub mod formal;
pub mod covers;
pub mod odes;
pub mod classifier;
pub mod garnier;
