//! Lattice, code and module-orbit invariants that decide when the
//! automorphism group of `V_L^+` is larger than `H_L`.

pub mod catalog;
pub mod cli;
pub mod code;
pub mod construction_b;
pub mod error;
pub mod orbit;
pub mod report;
pub mod selftest;
pub mod lattice;

pub use error::{Error, ErrorKind, Result};
pub use lattice::{Coset, DiscriminantGroup, DualVector, Lattice};
pub use code::BinaryCode;
