//! Finite semigroups and monoids: syntactic presentations, omega powers,
//! idempotents, local monoids, the idempotents' ideal, identity checking
//! and a brute-force division oracle.

mod division;
mod elements;
mod identity;
mod presentation;

pub use division::divides_bruteforce;
pub use elements::ElementSet;
pub use identity::{
    check_identity, witness_fails, Equation, IdentitySet, IdentityVerdict, IdentityWitness,
    OmegaTerm, BUILTIN_IDENTITY_SETS,
};
pub use presentation::SyntacticPresentation;

pub use crate::category::idempotents_category;
