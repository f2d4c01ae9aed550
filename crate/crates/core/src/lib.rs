//! Finite-model toolkit for Bochvar algebras.
//!
//! The crate works with small algebras given by operation tables in the
//! signature `<and, or, not, J2, 0, 1>` (with `J2` optional) and provides:
//!
//! * generic finite-algebra machinery ([`algebra`]): products, subalgebras,
//!   homomorphism and isomorphism search, congruences;
//! * finite Boolean algebras, filters and unit meet-subsemilattices
//!   ([`boolean`]);
//! * semilattice direct systems, Płonka sums and decompositions ([`plonka`]);
//! * a term language with exhaustive identity checking ([`terms`]);
//! * the axiom catalogs and a classifier ([`axioms`]);
//! * the correspondence between Bochvar algebras and Bochvar systems
//!   ([`equivalence`]);
//! * structure theory of the generated variety ([`varieties`]);
//! * a reproducible corpus of small algebras ([`corpus`]) and JSON file
//!   formats ([`io`]).

pub mod algebra;
pub mod axioms;
pub mod boolean;
pub mod corpus;
pub mod equivalence;
pub mod fixtures;
pub mod io;
pub mod plonka;
pub mod terms;
pub mod varieties;

pub use algebra::{Congruence, Elem, FiniteAlgebra, Homomorphism};
pub use boolean::BooleanAlgebra;
pub use terms::{Identity, QuasiIdentity, Term};
