//! Finite fields `F_{p^n}` in a polynomial basis over `F_p`.
//!
//! An element is encoded as the integer whose base-`p` digits are its
//! coordinates in the basis `1, z, ..., z^{n-1}`, where `z` is the class of `x`
//! modulo the defining polynomial. The defining polynomial is the first monic
//! irreducible one in the order of its encoded lower coefficients, so every
//! field is built deterministically. Small fields also carry log/exp tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::nt;
use crate::error::{Error, Result};

/// Encoded field element.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fe(pub u64);

impl Fe {
    pub const ZERO: Fe = Fe(0);
    pub const ONE: Fe = Fe(1);
}

const TABLE_LIMIT: u64 = 1 << 16;
const SIZE_LIMIT: u64 = 1 << 42;

#[derive(Clone)]
struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    size: u64,
    /// Coefficients of the defining polynomial, low degree first, monic.
    modulus: Vec<u64>,
    primitive: Fe,
    tables: Option<Tables>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.p, self.degree, self.modulus)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl FiniteField {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        Self::new(p, 1)
    }

    /// The field with `p^degree` elements.
    pub fn new(p: u64, degree: u32) -> Result<Self> {
        if !nt::is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if degree == 0 {
            return Err(Error::InvalidParameter("field degree must be positive".into()));
        }
        let size = nt::checked_pow(p, degree)
            .filter(|s| *s <= SIZE_LIMIT)
            .ok_or_else(|| Error::InvalidParameter(format!("field {p}^{degree} is too large")))?;
        let modulus = first_irreducible(p, degree as usize);
        let mut field = FiniteField { p, degree, size, modulus, primitive: Fe::ONE, tables: None };
        field.primitive = field.find_primitive();
        if size <= TABLE_LIMIT {
            field.build_tables();
        }
        Ok(field)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> Fe {
        self.primitive
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        (0..self.size).map(Fe)
    }

    /// The generator `z` of the polynomial basis.
    pub fn generator(&self) -> Fe {
        if self.degree == 1 {
            self.from_int(-(self.modulus[0] as i64))
        } else {
            Fe(self.p)
        }
    }

    pub fn digits(&self, a: Fe) -> Vec<u64> {
        let mut v = Vec::with_capacity(self.degree as usize);
        let mut x = a.0;
        for _ in 0..self.degree {
            v.push(x % self.p);
            x /= self.p;
        }
        v
    }

    pub fn from_digits(&self, d: &[u64]) -> Fe {
        let mut x = 0u64;
        for c in d.iter().take(self.degree as usize).rev() {
            x = x * self.p + c % self.p;
        }
        Fe(x)
    }

    pub fn from_int(&self, n: i64) -> Fe {
        Fe(n.rem_euclid(self.p as i64) as u64)
    }

    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return Fe(a.0 ^ b.0);
        }
        if self.degree == 1 {
            return Fe((a.0 + b.0) % self.p);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % self.p + y % self.p) % self.p) * place;
            x /= self.p;
            y /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        if self.degree == 1 {
            return Fe((self.p - a.0) % self.p);
        }
        let mut x = a.0;
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        Fe(out)
    }

    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            return Fe::ZERO;
        }
        if let Some(t) = &self.tables {
            let s = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % (self.size - 1);
            return Fe(t.exp[s as usize] as u64);
        }
        if self.degree == 1 {
            return Fe(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64);
        }
        self.mul_slow(a, b)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let n = self.degree as usize;
        let p = self.p;
        let da = self.digits(a);
        let db = self.digits(b);
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, x) in da.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, m) in self.modulus.iter().take(n).enumerate() {
                let idx = k - n + i;
                prod[idx] = (prod[idx] + c * (p - m % p)) % p;
            }
            prod[k] = 0;
        }
        self.from_digits(&prod[..n])
    }

    pub fn pow(&self, a: Fe, e: u64) -> Fe {
        if a.0 == 0 {
            return if e == 0 { Fe::ONE } else { Fe::ZERO };
        }
        if let Some(t) = &self.tables {
            let s = ((t.log[a.0 as usize] as u128 * e as u128) % (self.size - 1) as u128) as usize;
            return Fe(t.exp[s] as u64);
        }
        let mut base = a;
        let mut acc = Fe::ONE;
        let mut e = e % (self.size - 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_slow_or_prime(acc, base);
            }
            base = self.mul_slow_or_prime(base, base);
            e >>= 1;
        }
        acc
    }

    fn mul_slow_or_prime(&self, a: Fe, b: Fe) -> Fe {
        if a.0 == 0 || b.0 == 0 {
            Fe::ZERO
        } else if self.degree == 1 {
            Fe(((a.0 as u128 * b.0 as u128) % self.p as u128) as u64)
        } else {
            self.mul_slow(a, b)
        }
    }

    pub fn inv(&self, a: Fe) -> Option<Fe> {
        if a.0 == 0 {
            return None;
        }
        if let Some(t) = &self.tables {
            let l = t.log[a.0 as usize] as u64;
            let s = (self.size - 1 - l) % (self.size - 1);
            return Some(Fe(t.exp[s as usize] as u64));
        }
        Some(self.pow(a, self.size - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: Fe) -> u64 {
        let mut ord = self.size - 1;
        for (r, _) in nt::factor(self.size - 1) {
            while ord % r == 0 && self.pow(a, ord / r) == Fe::ONE {
                ord /= r;
            }
        }
        ord
    }

    fn find_primitive(&self) -> Fe {
        if self.size == 2 {
            return Fe::ONE;
        }
        let factors = nt::factor(self.size - 1);
        for x in 2..self.size {
            let a = Fe(x);
            if factors.iter().all(|(r, _)| self.pow(a, (self.size - 1) / r) != Fe::ONE) {
                return a;
            }
        }
        Fe::ONE
    }

    fn build_tables(&mut self) {
        let n = (self.size - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![0u32; self.size as usize];
        let mut x = Fe::ONE;
        for (i, slot) in exp.iter_mut().enumerate() {
            *slot = x.0 as u32;
            log[x.0 as usize] = i as u32;
            x = self.mul_slow_or_prime(x, self.primitive);
        }
        self.tables = Some(Tables { exp, log });
    }

    /// True when `a` lies in the subfield with `p^k` elements.
    pub fn in_subfield(&self, a: Fe, k: u32) -> bool {
        let mut x = a;
        for _ in 0..k {
            x = self.pow(x, self.p);
        }
        x == a
    }

    /// Images of all elements of `sub` under a field embedding `sub -> self`.
    /// The embedding sends the basis generator of `sub` to the root of its
    /// defining polynomial that is the smallest power of a fixed generator.
    pub fn embedding_from(&self, sub: &FiniteField) -> Result<Vec<Fe>> {
        if sub.p != self.p || self.degree % sub.degree != 0 {
            return Err(Error::InvalidParameter(format!(
                "no embedding of F_{}^{} into F_{}^{}",
                sub.p, sub.degree, self.p, self.degree
            )));
        }
        if sub.degree == 1 {
            return Ok(sub.elements().collect());
        }
        let beta = self.pow(self.primitive, (self.size - 1) / (sub.size - 1));
        let mut root = None;
        let mut x = Fe::ONE;
        for _ in 0..sub.size - 1 {
            let mut val = Fe::ZERO;
            for c in sub.modulus.iter().rev() {
                val = self.add(self.mul(val, x), Fe(*c));
            }
            if val == Fe::ZERO {
                root = Some(x);
                break;
            }
            x = self.mul(x, beta);
        }
        let root = root.ok_or_else(|| Error::NoRoot(format!("{:?}", sub.modulus)))?;
        let mut powers = vec![Fe::ONE];
        for _ in 1..sub.degree {
            let last = *powers.last().expect("nonempty");
            powers.push(self.mul(last, root));
        }
        Ok(sub
            .elements()
            .map(|a| {
                let mut acc = Fe::ZERO;
                for (d, pw) in sub.digits(a).iter().zip(&powers) {
                    acc = self.add(acc, self.mul(Fe(*d), *pw));
                }
                acc
            })
            .collect())
    }

    /// Text form: an integer in a prime field, else a polynomial in `z`.
    pub fn format(&self, a: Fe) -> String {
        if self.degree == 1 {
            return a.0.to_string();
        }
        let d = self.digits(a);
        let mut terms = Vec::new();
        for (i, c) in d.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let t = match (i, *c) {
                (0, c) => c.to_string(),
                (1, 1) => "z".to_string(),
                (1, c) => format!("{c}*z"),
                (i, 1) => format!("z^{i}"),
                (i, c) => format!("{c}*z^{i}"),
            };
            terms.push(t);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// Parses the output of [`FiniteField::format`].
    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(&s).to_string();
        if s.is_empty() {
            return Err(Error::Parse("empty field element".into()));
        }
        let mut acc = vec![0u64; self.degree as usize];
        for term in s.split('+') {
            let (coef, power) = parse_monomial(term, 'z')?;
            if power >= self.degree as usize && self.degree > 1 {
                return Err(Error::Parse(format!("power z^{power} out of range in '{s}'")));
            }
            if self.degree == 1 && power > 0 {
                return Err(Error::Parse(format!("prime field element '{s}' mentions z")));
            }
            acc[power] = (acc[power] + coef.rem_euclid(self.p as i64) as u64) % self.p;
        }
        Ok(self.from_digits(&acc))
    }
}

/// Parses `c`, `c*v`, `v`, `v^e`, `c*v^e` into (coefficient, exponent).
pub(crate) fn parse_monomial(term: &str, var: char) -> Result<(i64, usize)> {
    let bad = || Error::Parse(format!("malformed term '{term}'"));
    if term.is_empty() {
        return Err(bad());
    }
    let (coef_part, var_part) = match term.find(var) {
        None => (term, None),
        Some(pos) => {
            let c = term[..pos].trim_end_matches('*');
            (c, Some(&term[pos + var.len_utf8()..]))
        }
    };
    let coef = if coef_part.is_empty() {
        1
    } else if coef_part == "-" {
        -1
    } else {
        coef_part.parse::<i64>().map_err(|_| bad())?
    };
    let power = match var_part {
        None => 0,
        Some("") => 1,
        Some(rest) => rest.strip_prefix('^').ok_or_else(bad)?.parse::<usize>().map_err(|_| bad())?,
    };
    Ok((coef, power))
}

fn first_irreducible(p: u64, n: usize) -> Vec<u64> {
    let total = nt::checked_pow(p, n as u32).expect("size checked");
    for idx in 0..total {
        let mut f = Vec::with_capacity(n + 1);
        let mut x = idx;
        for _ in 0..n {
            f.push(x % p);
            x /= p;
        }
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials of every degree exist")
}

/// Dense polynomials over a prime field, used only to find defining polynomials.
mod fp_poly {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let m = trim(m.to_vec());
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm && !a.is_empty() {
            let k = a.len() - 1;
            let c = a[k] * lead_inv % p;
            for i in 0..=dm {
                let idx = k - dm + i;
                a[idx] = (a[idx] + p * p - c * m[i] % p) % p;
            }
            a = trim(a);
        }
        a
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        rem(&prod, m, p)
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Ben-Or test: no factor of degree `<= n/2`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 0..n / 2 {
            let mut acc = vec![1u64];
            let mut base = h.clone();
            let mut e = p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mulmod(&acc, &base, f, p);
                }
                base = mulmod(&base, &base, f, p);
                e >>= 1;
            }
            h = acc;
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(f, &trim(diff), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_elements_use_i_squared_minus_one() {
        let f = FiniteField::new(3, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
        let i = f.generator();
        assert_eq!(f.mul(i, i), f.from_int(-1));
        assert_eq!(f.format(i), "z");
        assert_eq!(f.parse("2*z+1").unwrap(), f.add(f.mul(Fe(2), i), Fe::ONE));
    }

    #[test]
    fn field_axioms_small() {
        for (p, n) in [(2, 1), (2, 2), (3, 1), (3, 2), (5, 1), (2, 3)] {
            let f = FiniteField::new(p, n).unwrap();
            for a in f.elements() {
                assert_eq!(f.pow(a, f.size()), a);
                if a != Fe::ZERO {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Fe::ONE);
                }
                for b in f.elements() {
                    assert_eq!(f.mul(a, b), f.mul_slow_or_prime(a, b));
                    assert_eq!(f.sub(f.add(a, b), b), a);
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = FiniteField::new(3, 16).unwrap();
        assert!(f.tables.is_none());
        let g = f.primitive();
        assert_eq!(f.order(g), f.size() - 1);
        let sub = FiniteField::new(3, 2).unwrap();
        let emb = f.embedding_from(&sub).unwrap();
        for a in sub.elements() {
            for b in sub.elements() {
                let (ea, eb) = (emb[a.0 as usize], emb[b.0 as usize]);
                assert_eq!(emb[sub.mul(a, b).0 as usize], f.mul(ea, eb));
                assert_eq!(emb[sub.add(a, b).0 as usize], f.add(ea, eb));
            }
        }
    }

    #[test]
    fn format_parse_roundtrip() {
        let f = FiniteField::new(2, 4).unwrap();
        for a in f.elements() {
            assert_eq!(f.parse(&f.format(a)).unwrap(), a);
        }
    }
}
