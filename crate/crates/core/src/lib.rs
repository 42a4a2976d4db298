//! Finite loops, their isotopes and isomorphisms, and an exhaustive checker
//! for claims about weak inverse property loops.
//!
//! Maps compose left to right: `x(pq) = (xp)q`, so `p.then(&q)` applies `p`
//! first.

pub mod enumeration;
pub mod error;
pub mod harness;
pub mod io;
pub mod isomorphy;
pub mod isotopy;
pub mod loops;
pub mod perm;
pub mod properties;

pub use enumeration::{
    enumerate_loops, enumerate_loops_par, enumerate_up_to_isomorphism, enumerate_up_to_isomorphism_par, random_loop,
    EnumerationCursor, EnumerationMode, LoopStream,
};
pub use error::{Line, LoopError, Result};
pub use harness::{
    find_counterexample, replay, verify, verify_on, verify_sampled, ClaimStatus, ExhaustiveScope, SampleScope,
    VerificationReport, Witness,
};
pub use isomorphy::{are_isotopic, automorphisms, canonical_form, find_isomorphism, CanonicalForm};
pub use isotopy::{
    apply_isotopism, find_t_witnesses, is_isotopism, principal_isotope, t_conditions, weak_t21, IsotopismTriple,
    PrincipalIsotopeSpec, TConditionReport, TWitness,
};
pub use loops::{from_table, CayleyTable, FiniteLoop, Quasigroup, Structure};
pub use perm::Permutation;
pub use properties::{has_cip, has_wip, is_cip, is_wip, m_inverse_check, Property, PropertyReport, WipForm, WipMethod};
