//! Truncations `A/p^n` of the completion `A_p`.

use std::fmt;

use super::apoly::APoly;
use super::ff::Fe;
use super::place::PrimePlace;
use super::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};

/// The finite ring `A/varpi^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalRing {
    place: PrimePlace,
    n: usize,
    modulus: APoly,
}

impl LocalRing {
    pub fn new(place: &PrimePlace, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("precision must be at least 1".into()));
        }
        Ok(LocalRing { place: place.clone(), n, modulus: place.varpi_pow(n) })
    }

    pub fn place(&self) -> &PrimePlace {
        &self.place
    }

    pub fn precision(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &APoly {
        &self.modulus
    }

    pub fn reduce(&self, a: &APoly) -> APoly {
        self.place.a().rem(a, &self.modulus).expect("nonzero modulus")
    }

    /// The valuation of an element, `n` for zero.
    pub fn valuation(&self, a: &APoly) -> usize {
        self.place.valuation(a).unwrap_or(self.n).min(self.n)
    }

    /// All elements, in encoding order.
    pub fn elements(&self) -> Vec<APoly> {
        APoly::all_below(self.place.a().fq(), self.n * self.place.d())
    }

    /// The Teichmuller representative of `a mod varpi`.
    pub fn teichmuller(&self, a: &APoly) -> APoly {
        let qd = self.place.residue_size();
        let mut x = self.reduce(a);
        for _ in 0..self.n + 1 {
            x = self.pow(&x, qd);
        }
        x
    }

    /// Exact quotient `a / varpi^k` for `a` of valuation at least `k`.
    pub fn divide_by_varpi_pow(&self, a: &APoly, k: usize) -> Option<APoly> {
        let (qt, r) = self.place.a().divrem(a, &self.place.varpi_pow(k)).ok()?;
        r.is_zero().then_some(qt)
    }

    /// Pivot valuations of a Smith form of the row span; the span has
    /// `q^{d * sum(n - v)}` elements.
    pub fn smith_valuations(&self, rows: &[Vec<APoly>]) -> Vec<usize> {
        let mut m: Vec<Vec<APoly>> = rows.iter().map(|r| r.iter().map(|x| self.reduce(x)).collect()).collect();
        let cols = m.first().map_or(0, |r| r.len());
        let mut out = Vec::new();
        let mut live_rows: Vec<usize> = (0..m.len()).collect();
        let mut live_cols: Vec<usize> = (0..cols).collect();
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for &r in &live_rows {
                for &c in &live_cols {
                    let v = self.valuation(&m[r][c]);
                    if v < self.n && best.is_none_or(|b| v < b.0) {
                        best = Some((v, r, c));
                    }
                }
            }
            let Some((v, pr, pc)) = best else { break };
            let unit = self.divide_by_varpi_pow(&m[pr][pc], v).expect("valuation");
            let uinv = self.inv(&unit).expect("unit");
            for &r in &live_rows {
                if r == pr || m[r][pc].is_zero() {
                    continue;
                }
                let f = self.mul(&self.divide_by_varpi_pow(&m[r][pc], v).expect("minimal valuation"), &uinv);
                for &c in &live_cols {
                    let x = self.sub(&m[r][c], &self.mul(&f, &m[pr][c]));
                    m[r][c] = x;
                }
            }
            // column operations clear the pivot row without changing the span size
            for &c in &live_cols {
                if c != pc {
                    m[pr][c] = APoly::zero();
                }
            }
            live_rows.retain(|&r| r != pr);
            live_cols.retain(|&c| c != pc);
            out.push(v);
        }
        out.sort();
        out
    }

    pub fn format_full(&self, a: &APoly) -> String {
        let v = self.place.varpi_text();
        if self.n == 1 {
            format!("{} mod ({v})", self.place.a().format(a))
        } else {
            format!("{} mod ({v})^{}", self.place.a().format(a), self.n)
        }
    }
}

impl Ring for LocalRing {
    type Elem = APoly;

    fn zero(&self) -> APoly {
        APoly::zero()
    }

    fn one(&self) -> APoly {
        self.reduce(&APoly::one())
    }

    fn add(&self, a: &APoly, b: &APoly) -> APoly {
        self.place.a().add(a, b)
    }

    fn neg(&self, a: &APoly) -> APoly {
        self.place.a().neg(a)
    }

    fn mul(&self, a: &APoly, b: &APoly) -> APoly {
        self.reduce(&self.place.a().mul(a, b))
    }

    fn inv(&self, a: &APoly) -> Option<APoly> {
        let (g, s, _) = self.place.a().xgcd(a, &self.modulus);
        (g == APoly::one()).then(|| self.reduce(&s))
    }

    fn frobenius(&self, a: &APoly) -> APoly {
        self.reduce(&self.place.a().frobenius(a))
    }

    fn fmt_elem(&self, a: &APoly) -> String {
        self.place.a().format(a)
    }
}

impl AAlgebra for LocalRing {
    fn q(&self) -> u64 {
        self.place.q()
    }

    fn from_fq(&self, c: Fe) -> APoly {
        APoly::constant(c)
    }

    fn gamma(&self) -> APoly {
        self.reduce(&APoly::t())
    }
}

/// A value of `A_p` known modulo `varpi^precision`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalElement {
    place: PrimePlace,
    precision: usize,
    value: APoly,
}

impl fmt::Debug for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LocalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = LocalRing::new(&self.place, self.precision).expect("precision >= 1");
        write!(f, "{}", ring.format_full(&self.value))
    }
}

/// Reduces `a` modulo `varpi^n`.
pub fn local_reduce(a: &APoly, place: &PrimePlace, n: usize) -> Result<LocalElement> {
    let ring = LocalRing::new(place, n)?;
    Ok(LocalElement { place: place.clone(), precision: n, value: ring.reduce(a) })
}

impl LocalElement {
    pub fn value(&self) -> &APoly {
        &self.value
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn place(&self) -> &PrimePlace {
        &self.place
    }

    /// Lowers the precision; never raises it.
    pub fn truncate(&self, n: usize) -> Result<LocalElement> {
        if n > self.precision {
            return Err(Error::Precondition(format!("cannot raise precision {} to {n}", self.precision)));
        }
        local_reduce(&self.value, &self.place, n)
    }

    fn common(&self, other: &LocalElement) -> Result<(LocalRing, APoly, APoly)> {
        if self.place != other.place {
            return Err(Error::RingMismatch);
        }
        let n = self.precision.min(other.precision);
        let ring = LocalRing::new(&self.place, n)?;
        Ok((ring.clone(), ring.reduce(&self.value), ring.reduce(&other.value)))
    }

    pub fn add(&self, other: &LocalElement) -> Result<LocalElement> {
        let (r, a, b) = self.common(other)?;
        Ok(LocalElement { place: self.place.clone(), precision: r.precision(), value: r.add(&a, &b) })
    }

    pub fn sub(&self, other: &LocalElement) -> Result<LocalElement> {
        let (r, a, b) = self.common(other)?;
        Ok(LocalElement { place: self.place.clone(), precision: r.precision(), value: r.sub(&a, &b) })
    }

    pub fn mul(&self, other: &LocalElement) -> Result<LocalElement> {
        let (r, a, b) = self.common(other)?;
        Ok(LocalElement { place: self.place.clone(), precision: r.precision(), value: r.mul(&a, &b) })
    }

    /// Parses `expr mod (varpi)^n` or `expr mod (varpi)`.
    pub fn parse(place: &PrimePlace, s: &str) -> Result<LocalElement> {
        let (lhs, rhs) = s.split_once(" mod ").ok_or_else(|| Error::Parse(format!("missing ' mod ' in '{s}'")))?;
        let rhs = rhs.trim();
        let inner_end = rhs.rfind(')').ok_or_else(|| Error::Parse(format!("malformed modulus '{rhs}'")))?;
        let inner = rhs
            .strip_prefix('(')
            .map(|r| &r[..inner_end - 1])
            .ok_or_else(|| Error::Parse(format!("malformed modulus '{rhs}'")))?;
        let a = place.a();
        if a.parse(inner)? != *place.varpi() {
            return Err(Error::Parse(format!("modulus '{inner}' is not the place {}", place.varpi_text())));
        }
        let tail = &rhs[inner_end + 1..];
        let n = if tail.is_empty() {
            1
        } else {
            tail.strip_prefix('^')
                .and_then(|t| t.parse::<usize>().ok())
                .ok_or_else(|| Error::Parse(format!("malformed exponent '{tail}'")))?
        };
        let value = a.parse(lhs)?;
        let ring = LocalRing::new(place, n)?;
        if ring.reduce(&value) != value {
            return Err(Error::Parse(format!("'{lhs}' is not reduced modulo varpi^{n}")));
        }
        Ok(LocalElement { place: place.clone(), precision: n, value })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::place::parse_place;

    #[test]
    fn reduce_examples() {
        let p = parse_place(3, "T").unwrap();
        let a = p.a();
        assert!(local_reduce(&a.parse("T^3").unwrap(), &p, 2).unwrap().value().is_zero());
        assert_eq!(local_reduce(&a.parse("T^3+T").unwrap(), &p, 2).unwrap().value(), &APoly::t());
        let p2 = parse_place(3, "T^2+1").unwrap();
        let r = local_reduce(&p2.a().parse("T^2+T+2").unwrap(), &p2, 1).unwrap();
        assert_eq!(r.to_string(), "T+1 mod (T^2+1)");
    }

    #[test]
    fn precision_is_minimum() {
        let p = parse_place(3, "T").unwrap();
        let x = local_reduce(&p.a().parse("T+1").unwrap(), &p, 3).unwrap();
        let y = local_reduce(&p.a().parse("T+2").unwrap(), &p, 2).unwrap();
        assert_eq!(x.mul(&y).unwrap().precision(), 2);
        assert!(x.truncate(4).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let p = parse_place(3, "T^2+1").unwrap();
        let x = local_reduce(&p.a().parse("T^3+2*T+1").unwrap(), &p, 2).unwrap();
        assert_eq!(x.to_string(), "T^3+2*T+1 mod (T^2+1)^2");
        assert_eq!(LocalElement::parse(&p, &x.to_string()).unwrap(), x);
    }

    #[test]
    fn units_and_teichmuller() {
        let p = parse_place(3, "T").unwrap();
        let r = LocalRing::new(&p, 3).unwrap();
        let u = p.a().parse("T^2+T+2").unwrap();
        let v = r.inv(&u).unwrap();
        assert_eq!(r.mul(&u, &v), APoly::one());
        assert!(r.inv(&APoly::t()).is_none());
        let t = r.teichmuller(&u);
        assert_eq!(r.pow(&t, 3), t);
        assert_eq!(r.reduce(&p.a().sub(&t, &u)).coeff(0), Fe::ZERO);
    }
}
