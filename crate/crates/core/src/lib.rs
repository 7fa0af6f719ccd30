//! Fractional and geometric fractional chromatic numbers of unit-distance
//! graphs in the Moser lattice.
//!
//! The crate covers exact lattice arithmetic ([`field`]), graph and
//! colouring machinery ([`udgraph`]), canonical forms ([`canon`]),
//! congruence constraints ([`congr`]), exact and floating-point linear
//! programming ([`lp`]), rational dual certificates ([`certify`]) and the
//! backtracking beam search ([`search`]).

pub mod canon;
pub mod certify;
pub mod congr;
pub mod error;
pub mod field;
pub mod io;
pub mod lp;
pub mod search;
pub mod udgraph;

pub use error::{Error, Result};
pub use field::{MoserPoint, QuadValue, Rational};
