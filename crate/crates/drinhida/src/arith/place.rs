//! The prime `p = (varpi)` of `A = F_q[T]`.

use std::fmt;
use std::sync::Arc;

use super::apoly::{APoly, PolyRing};
use super::ring::Ring;
use crate::error::{Error, Result};

/// A monic irreducible `varpi` of degree `d` over `F_q`.
#[derive(Clone)]
pub struct PrimePlace {
    inner: Arc<PlaceInner>,
}

struct PlaceInner {
    a: PolyRing,
    varpi: APoly,
    d: usize,
}

impl PartialEq for PrimePlace {
    fn eq(&self, other: &Self) -> bool {
        self.inner.a == other.inner.a && self.inner.varpi == other.inner.varpi
    }
}

impl Eq for PrimePlace {}

impl fmt::Debug for PrimePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrimePlace(q={}, varpi={})", self.q(), self.varpi_text())
    }
}

impl PrimePlace {
    pub fn q(&self) -> u64 {
        self.inner.a.fq().size()
    }

    pub fn varpi(&self) -> &APoly {
        &self.inner.varpi
    }

    pub fn d(&self) -> usize {
        self.inner.d
    }

    /// The ring `A`.
    pub fn a(&self) -> &PolyRing {
        &self.inner.a
    }

    /// `q^d`, the size of the residue field.
    pub fn residue_size(&self) -> u64 {
        self.q().pow(self.d() as u32)
    }

    pub fn varpi_text(&self) -> String {
        self.inner.a.format(&self.inner.varpi)
    }

    /// `varpi^n`.
    pub fn varpi_pow(&self, n: usize) -> APoly {
        self.inner.a.pow(&self.inner.varpi, n as u64)
    }

    /// The `varpi`-adic valuation of a nonzero polynomial (`None` for zero).
    pub fn valuation(&self, a: &APoly) -> Option<usize> {
        if a.is_zero() {
            return None;
        }
        let mut v = 0;
        let mut x = a.clone();
        loop {
            let (qt, r) = self.inner.a.divrem(&x, &self.inner.varpi).expect("nonzero");
            if !r.is_zero() {
                return Some(v);
            }
            x = qt;
            v += 1;
        }
    }
}

/// Validates `varpi` as a prime of `F_q[T]`.
pub fn make_place(a: &PolyRing, varpi: APoly) -> Result<PrimePlace> {
    if !varpi.is_monic() {
        return Err(Error::NotMonic { poly: a.format(&varpi) });
    }
    let d = varpi.degree().unwrap_or(0);
    if let Some(factor) = a.proper_factor(&varpi) {
        return Err(Error::Reducible { poly: a.format(&varpi), factor: a.format(&factor) });
    }
    Ok(PrimePlace { inner: Arc::new(PlaceInner { a: a.clone(), varpi, d }) })
}

/// Parses `q` and the text of `varpi` into a validated place.
pub fn parse_place(q: u64, varpi: &str) -> Result<PrimePlace> {
    let a = PolyRing::over_q(q)?;
    let v = a.parse(varpi)?;
    make_place(&a, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(parse_place(3, "T").unwrap().d(), 1);
        assert_eq!(parse_place(2, "T^2+T+1").unwrap().d(), 2);
        assert_eq!(parse_place(3, "T^2+1").unwrap().d(), 2);
    }

    #[test]
    fn rejects_with_factor() {
        match parse_place(3, "T^2+2") {
            Err(Error::Reducible { factor, .. }) => assert!(factor == "T+1" || factor == "T+2"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_place(3, "2*T+1"), Err(Error::NotMonic { .. })));
        assert!(matches!(parse_place(3, "1"), Err(Error::Reducible { .. })));
    }

    #[test]
    fn minus_one_is_a_nonsquare_mod_three() {
        let squares: Vec<i64> = (0..3).map(|x| x * x % 3).collect();
        assert!(!squares.contains(&2));
    }
}
