//! Exact arithmetic: `F_q`, `A = F_q[T]`, the prime place, truncations, extensions, Artinian rings.

pub mod apoly;
pub mod artin;
pub mod ext;
pub mod ff;
pub mod local;
pub mod matrix;
pub mod nt;
pub mod place;
pub mod ring;

pub use apoly::{APoly, PolyRing};
pub use artin::{ArtinElem, ArtinRing};
pub use ext::{ext_field, FieldExt, FieldMap};
pub use ff::{Fe, FiniteField};
pub use local::{local_reduce, LocalElement, LocalRing};
pub use matrix::Matrix;
pub use place::{make_place, parse_place, PrimePlace};
pub use ring::{AAlgebra, Ring};
