//! Exact linear algebra over a [`Field`](crate::scalar::Field) and a toolkit
//! for finite-dimensional algebras: radicals, radical powers, Loewy length,
//! complete systems of idempotents and quivers.

mod algebra;
mod matrix;
mod quiver;
mod radical;

pub use algebra::{sparse, AlgebraPresentation, FULL_ASSOCIATIVITY_BOUND, SAMPLED_TRIPLES};
pub use matrix::{Matrix, SubspaceBasis};
pub use quiver::{Arrow, Quiver};
pub use radical::{
    check_radical, loewy_length, loewy_length_from_powers, peirce_blocks, product_span, quiver_from_radical,
    quiver_of_algebra, radical, radical_powers, radical_unchecked, semisimple_rank, trace_form,
    verify_complete_system, verify_complete_system_with_rank, CompleteSystemReport, RADICAL_CHECK_BOUND,
};
