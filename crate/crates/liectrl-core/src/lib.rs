//! Dynamic Lie algebras of bilinear quantum control systems.
//!
//! The crate computes Lie closures of Pauli-string Hamiltonians in exact
//! arithmetic, centralisers and invariant bilinear forms, connectivity of the
//! coupling structure, and a catalog of irreducible simple subalgebras of
//! `su(N)`. The [`decide`] module combines these into a controllability verdict.

pub mod bilinear_form;
pub mod catalog;
pub mod closure;
pub mod decide;
pub mod fermion;
pub mod graph;
pub mod matrep;
pub mod pauli;
pub mod symmetry;
