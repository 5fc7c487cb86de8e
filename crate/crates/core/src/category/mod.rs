//! Finite categories: derived categories `C_d`, idempotents' categories,
//! consolidated semigroups, path equations and division witnesses.

mod division;
mod finite;
mod path;

pub use division::{division_check, prop15_division, DivisionWitness};
pub use finite::{consolidate, derived_category, idempotents_category, Arrow, FiniteCategory};
pub use path::{
    check_knast, check_path_equation, check_path_equations, knast_equation, parse_path_equations,
    Edge, GraphSpec, PathEquation, PathTerm, PathVerdict, PathWitness, KNAST_TEXT,
};
