//! Polynomials over `F_q`, the ring `A = F_q[T]`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ff::{parse_monomial, Fe, FiniteField};
use super::nt;
use super::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};

/// A polynomial in `T`, coefficients low degree first, never with trailing zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct APoly(Vec<Fe>);

impl APoly {
    pub fn new(mut coeffs: Vec<Fe>) -> Self {
        while coeffs.last() == Some(&Fe::ZERO) {
            coeffs.pop();
        }
        APoly(coeffs)
    }

    pub fn zero() -> Self {
        APoly(Vec::new())
    }

    pub fn constant(c: Fe) -> Self {
        APoly::new(vec![c])
    }

    pub fn one() -> Self {
        APoly(vec![Fe::ONE])
    }

    /// `T^n`.
    pub fn monomial(c: Fe, n: usize) -> Self {
        let mut v = vec![Fe::ZERO; n + 1];
        v[n] = c;
        APoly::new(v)
    }

    pub fn t() -> Self {
        APoly::monomial(Fe::ONE, 1)
    }

    pub fn coeffs(&self) -> &[Fe] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fe {
        self.0.last().copied().unwrap_or(Fe::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fe::ONE
    }

    /// Enumerates all polynomials of degree `< n`, in encoding order.
    pub fn all_below(fq: &FiniteField, n: usize) -> Vec<APoly> {
        let total = nt::checked_pow(fq.size(), n as u32).expect("small enumeration");
        (0..total)
            .map(|mut idx| {
                let mut v = Vec::with_capacity(n);
                for _ in 0..n {
                    v.push(Fe(idx % fq.size()));
                    idx /= fq.size();
                }
                APoly::new(v)
            })
            .collect()
    }

    /// All monic polynomials of exact degree `n`.
    pub fn monic_of_degree(fq: &FiniteField, n: usize) -> Vec<APoly> {
        APoly::all_below(fq, n)
            .into_iter()
            .map(|a| {
                let mut v = a.0;
                v.resize(n, Fe::ZERO);
                v.push(Fe::ONE);
                APoly(v)
            })
            .collect()
    }
}

/// The ring `A = F_q[T]` itself, with `gamma(T) = T`.
#[derive(Clone, Debug)]
pub struct PolyRing {
    fq: Arc<FiniteField>,
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        self.fq == other.fq
    }
}

impl PolyRing {
    pub fn new(fq: Arc<FiniteField>) -> Self {
        PolyRing { fq }
    }

    /// `A` over the field with `q` elements.
    pub fn over_q(q: u64) -> Result<Self> {
        Ok(PolyRing::new(Arc::new(fq_field(q)?)))
    }

    pub fn fq(&self) -> &Arc<FiniteField> {
        &self.fq
    }

    pub fn scale(&self, a: &APoly, c: Fe) -> APoly {
        APoly::new(a.0.iter().map(|x| self.fq.mul(*x, c)).collect())
    }

    pub fn shift(&self, a: &APoly, n: usize) -> APoly {
        if a.is_zero() {
            return APoly::zero();
        }
        let mut v = vec![Fe::ZERO; n];
        v.extend_from_slice(&a.0);
        APoly(v)
    }

    /// Euclidean division; `b` must be nonzero.
    pub fn divrem(&self, a: &APoly, b: &APoly) -> Result<(APoly, APoly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = self.fq.inv(b.leading()).expect("nonzero leading coefficient");
        let mut r = a.0.clone();
        let mut quot = vec![Fe::ZERO; a.0.len().saturating_sub(db)];
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1;
            let c = self.fq.mul(r[k], lead_inv);
            quot[k - db] = c;
            for (i, bc) in b.0.iter().enumerate() {
                let idx = k - db + i;
                r[idx] = self.fq.sub(r[idx], self.fq.mul(c, *bc));
            }
            while r.last() == Some(&Fe::ZERO) {
                r.pop();
            }
        }
        Ok((APoly::new(quot), APoly::new(r)))
    }

    pub fn rem(&self, a: &APoly, b: &APoly) -> Result<APoly> {
        Ok(self.divrem(a, b)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, a: &APoly, b: &APoly) -> APoly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.rem(&x, &y).expect("nonzero divisor");
            x = y;
            y = r;
        }
        self.monic(&x)
    }

    /// Extended gcd: `(g, s, t)` with `s a + t b = g`, `g` monic.
    pub fn xgcd(&self, a: &APoly, b: &APoly) -> (APoly, APoly, APoly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (APoly::one(), APoly::zero());
        let (mut t0, mut t1) = (APoly::zero(), APoly::one());
        while !r1.is_zero() {
            let (qt, r) = self.divrem(&r0, &r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = self.sub(&s0, &self.mul(&qt, &s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = self.sub(&t0, &self.mul(&qt, &t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let li = self.fq.inv(r0.leading()).expect("nonzero");
        (self.scale(&r0, li), self.scale(&s0, li), self.scale(&t0, li))
    }

    pub fn monic(&self, a: &APoly) -> APoly {
        if a.is_zero() {
            return APoly::zero();
        }
        let li = self.fq.inv(a.leading()).expect("nonzero");
        self.scale(a, li)
    }

    fn powmod(&self, a: &APoly, mut e: u64, m: &APoly) -> APoly {
        let mut base = self.rem(a, m).expect("nonzero modulus");
        let mut acc = self.rem(&APoly::one(), m).expect("nonzero modulus");
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &base), m).expect("nonzero modulus");
            }
            base = self.rem(&self.mul(&base, &base), m).expect("nonzero modulus");
            e >>= 1;
        }
        acc
    }

    /// A proper monic factor of `f` if `f` is reducible, `None` when irreducible.
    /// Constants are treated as reducible with factor 1.
    pub fn proper_factor(&self, f: &APoly) -> Option<APoly> {
        let n = match f.degree() {
            None | Some(0) => return Some(APoly::one()),
            Some(n) => n,
        };
        if n == 1 {
            return None;
        }
        let q = self.fq.size();
        let x = APoly::t();
        let mut h = x.clone();
        for i in 1..=n / 2 {
            h = self.powmod(&h, q, f);
            let g = self.gcd(f, &self.sub(&h, &x));
            if g.degree().unwrap_or(0) > 0 {
                if g.degree() < f.degree() {
                    return Some(g);
                }
                for k in 1..=i {
                    for cand in APoly::monic_of_degree(&self.fq, k) {
                        if self.rem(f, &cand).expect("monic").is_zero() {
                            return Some(cand);
                        }
                    }
                }
                return Some(g);
            }
        }
        None
    }

    pub fn is_irreducible(&self, f: &APoly) -> bool {
        self.proper_factor(f).is_none()
    }

    /// Text form such as `T^2+2*T+1`; composite coefficients are parenthesised.
    pub fn format(&self, a: &APoly) -> String {
        let mut terms = Vec::new();
        for (i, c) in a.0.iter().enumerate().rev() {
            if *c == Fe::ZERO {
                continue;
            }
            let cs = self.fq.format(*c);
            let cs = if cs.contains('+') || cs.contains('z') { format!("({cs})") } else { cs };
            let t = match (i, cs.as_str()) {
                (0, _) => cs.clone(),
                (1, "1") => "T".to_string(),
                (1, _) => format!("{cs}*T"),
                (_, "1") => format!("T^{i}"),
                _ => format!("{cs}*T^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses the grammar emitted by [`PolyRing::format`]; `-` is also accepted.
    pub fn parse(&self, s: &str) -> Result<APoly> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut acc = APoly::zero();
        for (neg, term) in split_terms(&s)? {
            let (c, power) = if let Some(rest) = term.strip_prefix('(') {
                let close = rest.find(')').ok_or_else(|| Error::Parse(format!("unbalanced '{term}'")))?;
                let c = self.fq.parse(&rest[..close])?;
                let tail = &rest[close + 1..];
                let power = if tail.is_empty() {
                    0
                } else {
                    let tail = tail.strip_prefix('*').ok_or_else(|| Error::Parse(format!("malformed '{term}'")))?;
                    let (one, p) = parse_monomial(tail, 'T')?;
                    if one != 1 || !tail.starts_with('T') {
                        return Err(Error::Parse(format!("malformed '{term}'")));
                    }
                    p
                };
                (c, power)
            } else if !term.contains('T') {
                (self.fq.parse(term)?, 0)
            } else {
                let (c, p) = parse_monomial(term, 'T')?;
                (self.fq.from_int(c), p)
            };
            let c = if neg { self.fq.neg(c) } else { c };
            acc = self.add(&acc, &APoly::monomial(c, power));
        }
        Ok(acc)
    }
}

/// Splits at top-level `+`/`-`, returning (negated, term) pairs.
fn split_terms(s: &str) -> Result<Vec<(bool, &str)>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    let mut neg = false;
    let bytes = s.as_bytes();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 => {
                // a sign directly after '*' or '^' belongs to the term
                if i > 0 && matches!(bytes[i - 1], b'*' | b'^') {
                    continue;
                }
                if i > start {
                    out.push((neg, &s[start..i]));
                } else if i > 0 {
                    return Err(Error::Parse(format!("empty term in '{s}'")));
                }
                neg = ch == '-';
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in '{s}'")));
        }
    }
    if depth != 0 || start >= s.len() {
        return Err(Error::Parse(format!("malformed polynomial '{s}'")));
    }
    out.push((neg, &s[start..]));
    Ok(out)
}

/// The constant field `F_q` for a prime power `q`.
pub fn fq_field(q: u64) -> Result<FiniteField> {
    let (p, e) = nt::prime_power(q).ok_or_else(|| Error::InvalidParameter(format!("q = {q} is not a prime power")))?;
    FiniteField::new(p, e)
}

impl Ring for PolyRing {
    type Elem = APoly;

    fn zero(&self) -> APoly {
        APoly::zero()
    }

    fn one(&self) -> APoly {
        APoly::one()
    }

    fn add(&self, a: &APoly, b: &APoly) -> APoly {
        let n = a.0.len().max(b.0.len());
        APoly::new((0..n).map(|i| self.fq.add(a.coeff(i), b.coeff(i))).collect())
    }

    fn neg(&self, a: &APoly) -> APoly {
        APoly::new(a.0.iter().map(|c| self.fq.neg(*c)).collect())
    }

    fn mul(&self, a: &APoly, b: &APoly) -> APoly {
        if a.is_zero() || b.is_zero() {
            return APoly::zero();
        }
        let mut v = vec![Fe::ZERO; a.0.len() + b.0.len() - 1];
        for (i, x) in a.0.iter().enumerate() {
            if *x == Fe::ZERO {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                v[i + j] = self.fq.add(v[i + j], self.fq.mul(*x, *y));
            }
        }
        APoly::new(v)
    }

    fn inv(&self, a: &APoly) -> Option<APoly> {
        if a.degree() == Some(0) {
            self.fq.inv(a.0[0]).map(APoly::constant)
        } else {
            None
        }
    }

    fn frobenius(&self, a: &APoly) -> APoly {
        let q = self.fq.size() as usize;
        let mut v = vec![Fe::ZERO; a.degree().map_or(0, |d| d * q + 1)];
        for (i, c) in a.0.iter().enumerate() {
            v[i * q] = *c;
        }
        APoly::new(v)
    }

    fn fmt_elem(&self, a: &APoly) -> String {
        self.format(a)
    }
}

impl AAlgebra for PolyRing {
    fn q(&self) -> u64 {
        self.fq.size()
    }

    fn from_fq(&self, c: Fe) -> APoly {
        APoly::constant(c)
    }

    fn gamma(&self) -> APoly {
        APoly::t()
    }
}
