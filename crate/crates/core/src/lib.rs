//! Exact computer algebra for equivariant birational maps between algebraic
//! tori and their Lie algebras, classical Cayley transforms, and the Picard
//! lattice of a degree-6 del Pezzo surface.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod catalog;
pub mod field;
pub mod group;
pub mod picard;
pub mod poly;
pub mod ratmap;
