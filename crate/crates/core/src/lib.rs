//! Positive definite integral ternary quadratic lattices.
//!
//! Forms are `f = ax² + by² + cz² + pyz + qzx + rxy` with integer coefficients.
//! Internally most routines work with the even matrix `A = 2·Gram`.

#![allow(clippy::needless_range_loop)]

pub mod correspondence;
pub mod error;
pub mod form;
pub mod genus;
pub mod linalg;
pub mod local;
pub mod par;
pub mod reduce;
pub mod sublattice;
pub mod vectors;
pub mod watson;

pub use error::{Error, Result};
pub use form::{Discriminant, GramMatrix, TernaryForm};
pub use reduce::{automorphisms, find_isometry, isometric, reduce};
pub use sublattice::{sublattices_of_index, Sublattice};
pub use vectors::{represents_integer, short_vectors};
