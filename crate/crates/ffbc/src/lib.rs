//! Exact workbench for the Bost-Connes system of the rational function
//! field F_q(T) with its Carlitz module.
//!
//! The crate computes, with no floating point in the core path:
//! places and zeta functions of the projective line over F_q, the Carlitz
//! module and its torsion, characters of the torsion tower and the Galois
//! action on them, the dense Hecke *-algebra in its canonical basis, its
//! representations on l^2 of the monic ideals, and the KMS equilibrium
//! states of the natural time evolution, all over exact cyclotomic-rational
//! scalars in the variable u = q^(-beta).

pub mod characters;
pub mod error;
pub mod hecke;
pub mod parser;
pub mod carlitz;
pub mod ffpoly;
pub mod places_zeta;
pub(crate) mod qpoly;
pub mod repr;
pub mod scalar;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
