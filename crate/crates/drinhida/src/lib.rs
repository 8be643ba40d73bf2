//! Drinfeld module arithmetic over `F_q[T]` at desk scale: Carlitz polynomials,
//! rank-2 modules and their Frobenius/Verschiebung factorisation, Serre-Tate
//! lifting, the p-Hecke correspondence on coarse moduli points, truncated
//! Iwasawa algebras and ordinary projectors on operator towers.

pub mod arith;
pub mod cache;
pub mod carlitz;
pub mod drinfeld;
pub mod error;
pub mod hecke;
pub mod iwasawa;
pub mod projector;
mod par;
pub mod serre_tate;
pub mod skew;
pub mod suite;

pub use error::{Error, Result};
