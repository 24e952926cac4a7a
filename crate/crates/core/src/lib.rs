//! Descent algebras of finite Coxeter groups of types A, B and D, built
//! through the face semigroup algebra of the reflection arrangement.
//!
//! The crate enumerates faces and the intersection lattice, forms the
//! algebra of `W`-invariants of the face semigroup algebra and the descent
//! algebra, and computes complete systems of idempotents, quivers, radical
//! filtrations and Loewy lengths with exact rational arithmetic.
//!
//! All linear algebra is generic over [`scalar::Field`]; the aliases below
//! fix the scalar to the machine-word-backed [`Rational`].

pub mod arrangement;
pub mod coxeter;
pub mod descent;
pub mod error;
pub mod exactalg;
pub mod facealg;
pub mod quiverphi;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Field, Rational};

pub type RationalMatrix = exactalg::Matrix<Rational>;
pub type RationalSubspace = exactalg::SubspaceBasis<Rational>;
pub type RationalAlgebra = exactalg::AlgebraPresentation<Rational>;
