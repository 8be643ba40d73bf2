//! Runtime-parameterised commutative rings.
//!
//! A ring value is a cheap handle (an `Arc` inside) and elements are plain
//! data; every operation goes through the handle. Two handles compare equal
//! when they describe the same ring.

use std::fmt::Debug;
use std::hash::Hash;

use super::apoly::APoly;
use super::ff::Fe;

pub trait Ring: Clone + Debug + PartialEq + Send + Sync {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Inverse of a unit, `None` otherwise.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// The twisting endomorphism `a -> a^q` used by the skew polynomial ring.
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;
    /// Canonical text form of an element.
    fn fmt_elem(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.inv(a).is_some()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Signed power; negative exponents need a unit.
    fn pow_signed(&self, a: &Self::Elem, e: i64) -> Option<Self::Elem> {
        if e >= 0 {
            Some(self.pow(a, e as u64))
        } else {
            self.inv(a).map(|b| self.pow(&b, e.unsigned_abs()))
        }
    }

    /// Image of an integer.
    fn from_int(&self, n: i64) -> Self::Elem {
        let one = self.one();
        let mut acc = self.zero();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &one);
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }
}

/// A ring receiving the structure map from `A = F_q[T]`.
pub trait AAlgebra: Ring {
    /// The base constant field size.
    fn q(&self) -> u64;
    /// Image of a constant of `F_q`.
    fn from_fq(&self, c: Fe) -> Self::Elem;
    /// Image of `T`.
    fn gamma(&self) -> Self::Elem;

    /// Image of a polynomial in `T`, by Horner's rule.
    fn from_apoly(&self, a: &APoly) -> Self::Elem {
        let g = self.gamma();
        let mut acc = self.zero();
        for c in a.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, &g), &self.from_fq(*c));
        }
        acc
    }
}
