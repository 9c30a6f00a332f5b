//! Binary linear codes with a fixed-point-free automorphism of order 3:
//! decomposition, involution constructions, canonical forms, permutation
//! automorphism groups and the cubic construction.

pub mod error;
pub mod canonical;
pub mod cubic;
pub mod gf2;
pub mod involutions;
pub mod paut;
pub mod permgroup;
pub mod registry;
pub mod regression;
pub mod sigma;

pub use error::{Error, Result};
pub use gf2::{Codeword, Gf2Matrix, LinearCode};
pub use permgroup::{PermGroup, Permutation};
