//! The twisted polynomial ring `R{tau}` with `tau a = a^q tau`.

use std::fmt;

use crate::arith::ext::{inv_mod_p, FieldExt};
use crate::arith::ff::Fe;
use crate::arith::ring::Ring;
use crate::error::{Error, Result};

/// `sum c_i tau^i`, stored without trailing zeros.
#[derive(Clone, PartialEq)]
pub struct SkewPoly<R: Ring> {
    ring: R,
    coeffs: Vec<R::Elem>,
}

impl<R: Ring> fmt::Debug for SkewPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format())
    }
}

impl<R: Ring> SkewPoly<R> {
    pub fn new(ring: &R, mut coeffs: Vec<R::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        SkewPoly { ring: ring.clone(), coeffs }
    }

    pub fn zero(ring: &R) -> Self {
        SkewPoly { ring: ring.clone(), coeffs: Vec::new() }
    }

    pub fn constant(ring: &R, c: R::Elem) -> Self {
        SkewPoly::new(ring, vec![c])
    }

    pub fn one(ring: &R) -> Self {
        SkewPoly::constant(ring, ring.one())
    }

    /// `tau^k`.
    pub fn tau_pow(ring: &R, k: usize) -> Self {
        let mut v = vec![ring.zero(); k + 1];
        v[k] = ring.one();
        SkewPoly { ring: ring.clone(), coeffs: v }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> R::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    /// The tau-degree, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> R::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == self.ring.one()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.coeffs.len().max(other.coeffs.len());
        Ok(SkewPoly::new(&self.ring, (0..n).map(|i| self.ring.add(&self.coeff(i), &other.coeff(i))).collect()))
    }

    pub fn neg(&self) -> Self {
        SkewPoly::new(&self.ring, self.coeffs.iter().map(|c| self.ring.neg(c)).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Left multiplication by a scalar, `c * u`.
    pub fn scale(&self, c: &R::Elem) -> Self {
        SkewPoly::new(&self.ring, self.coeffs.iter().map(|x| self.ring.mul(c, x)).collect())
    }

    /// Composition of additive maps: `(self * other)(x) = self(other(x))`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(SkewPoly::zero(&self.ring));
        }
        let r = &self.ring;
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        let mut twisted: Vec<R::Elem> = other.coeffs.clone();
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                twisted = twisted.iter().map(|b| r.frobenius(b)).collect();
            }
            if r.is_zero(a) {
                continue;
            }
            for (j, b) in twisted.iter().enumerate() {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Ok(SkewPoly::new(r, out))
    }

    /// `sum c_i x^{q^i}`.
    pub fn eval(&self, x: &R::Elem) -> R::Elem {
        let r = &self.ring;
        let mut acc = r.zero();
        let mut xp = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xp = r.frobenius(&xp);
            }
            acc = r.add(&acc, &r.mul(c, &xp));
        }
        acc
    }

    /// Right division `self = quot * v + rem` with `deg rem < deg v`.
    pub fn right_divide(&self, v: &Self) -> Result<(Self, Self)> {
        self.check(v)?;
        let r = &self.ring;
        let n = v.degree().ok_or(Error::DivisionByZero)?;
        let lead = v.leading();
        if r.inv(&lead).is_none() {
            return Err(Error::NonUnitLeading(r.fmt_elem(&lead)));
        }
        // inverse of lead^{q^k}, for k = 0, 1, ...
        let mut lead_pows = vec![lead];
        let mut rem = self.clone();
        let mut quot = vec![r.zero(); self.coeffs.len().saturating_sub(n)];
        while let Some(du) = rem.degree() {
            if du < n {
                break;
            }
            let k = du - n;
            while lead_pows.len() <= k {
                let last = lead_pows.last().expect("nonempty").clone();
                lead_pows.push(r.frobenius(&last));
            }
            let c = r.mul(&rem.leading(), &r.inv(&lead_pows[k]).expect("unit"));
            quot[k] = r.add(&quot[k], &c);
            let mut term = vec![r.zero(); k + 1];
            term[k] = c;
            let sub = SkewPoly::new(r, term).mul(v)?;
            let mut next = rem.sub(&sub)?;
            // the leading term cancels exactly; drop it in case of nilpotent noise
            if next.coeffs.len() > du {
                next.coeffs.truncate(du);
                next = SkewPoly::new(r, next.coeffs);
            }
            rem = next;
        }
        Ok((SkewPoly::new(r, quot), rem))
    }

    pub fn map<S: Ring>(&self, ring: &S, f: impl Fn(&R::Elem) -> S::Elem) -> SkewPoly<S> {
        SkewPoly::new(ring, self.coeffs.iter().map(f).collect())
    }

    /// Text form `c0 + c1*t + c2*t^2`, with `t` standing for tau.
    pub fn format(&self) -> String {
        let r = &self.ring;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if r.is_zero(c) {
                continue;
            }
            let cs = r.fmt_elem(c);
            let cs = if cs.contains('+') || cs.contains(' ') { format!("({cs})") } else { cs };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (1, "1") => "t".to_string(),
                (1, _) => format!("{cs}*t"),
                (_, "1") => format!("t^{i}"),
                _ => format!("{cs}*t^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

pub fn skew_mul<R: Ring>(u: &SkewPoly<R>, v: &SkewPoly<R>) -> Result<SkewPoly<R>> {
    u.mul(v)
}

pub fn right_divide<R: Ring>(u: &SkewPoly<R>, v: &SkewPoly<R>) -> Result<(SkewPoly<R>, SkewPoly<R>)> {
    u.right_divide(v)
}

/// Parses the text form over a finite field.
pub fn parse_skew(ext: &FieldExt, s: &str) -> Result<SkewPoly<FieldExt>> {
    let s = s.trim();
    if s == "0" {
        return Ok(SkewPoly::zero(ext));
    }
    let mut coeffs: Vec<Fe> = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' if depth == 0 => {
                pieces.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(s[start..].trim());
    for piece in pieces {
        if piece.is_empty() {
            return Err(Error::Parse(format!("empty term in '{s}'")));
        }
        let (coef, power) = match piece.rfind('t') {
            Some(pos) if !piece[pos..].contains(')') => {
                let head = piece[..pos].trim_end_matches('*');
                let tail = &piece[pos + 1..];
                let power = if tail.is_empty() {
                    1
                } else {
                    tail.strip_prefix('^')
                        .and_then(|t| t.parse::<usize>().ok())
                        .ok_or_else(|| Error::Parse(format!("malformed term '{piece}'")))?
                };
                let c = if head.is_empty() { Fe::ONE } else { ext.parse(head)? };
                (c, power)
            }
            _ => (ext.parse(piece)?, 0),
        };
        if coeffs.len() <= power {
            coeffs.resize(power + 1, Fe::ZERO);
        }
        coeffs[power] = ext.add(&coeffs[power], &coef);
    }
    Ok(SkewPoly::new(ext, coeffs))
}

/// The points of `ker u` in a finite field.
#[derive(Clone, Debug)]
pub struct KernelPoints {
    /// A basis over `F_q`.
    pub fq_basis: Vec<Fe>,
    /// Dimension over `F_p`.
    pub fp_dim: usize,
    /// Number of points.
    pub count: u64,
    /// All points in encoding order, when there are at most `2^16` of them.
    pub points: Option<Vec<Fe>>,
}

const POINT_LIST_LIMIT: u64 = 1 << 16;

/// Kernel of the additive map `x -> u(x)` on the field of `u`'s coefficients.
pub fn kernel_points(u: &SkewPoly<FieldExt>) -> Result<KernelPoints> {
    if u.is_zero() {
        return Err(Error::Precondition("kernel of the zero polynomial".into()));
    }
    let ext = u.ring();
    let f = ext.field();
    let p = f.characteristic();
    let n = f.degree() as usize;
    // column i is the image of the i-th basis vector
    let images: Vec<Vec<u64>> = (0..n).map(|i| f.digits(u.eval(&Fe(p.pow(i as u32))))).collect();
    let rows: Vec<Vec<u64>> = (0..n).map(|r| (0..n).map(|c| images[c][r]).collect()).collect();
    let null = fp_nullspace(&rows, p, n);
    let basis: Vec<Fe> = null.iter().map(|v| f.from_digits(v)).collect();
    let count = p.pow(basis.len() as u32);
    let points = (count <= POINT_LIST_LIMIT).then(|| {
        let mut pts = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut acc = Fe::ZERO;
            let mut x = idx;
            for b in &basis {
                acc = ext.add(&acc, &ext.mul(&ext.from_int((x % p) as i64), b));
                x /= p;
            }
            pts.push(acc);
        }
        pts.sort();
        pts
    });
    Ok(KernelPoints { fq_basis: ext.fq_basis(&basis), fp_dim: basis.len(), count, points })
}

/// Null space of an `F_p` matrix given by rows with `cols` columns.
pub(crate) fn fp_nullspace(rows: &[Vec<u64>], p: u64, cols: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&r| m[r][c] % p != 0) else { continue };
        m.swap(rank, piv);
        let inv = inv_mod_p(m[rank][c], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for k in 0..cols {
                    m[r][k] = (m[r][k] + p * p - f * m[rank][k] % p) % p;
                }
            }
        }
        pivots.push(c);
        rank += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; cols];
            v[fc] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = (p - m[r][fc] % p) % p;
            }
            v
        })
        .collect()
}

/// Monic right divisors `u` of `phi_varpi` of tau-degree `deg` with `u phi(T) = phi'(T) u`.
pub fn stable_right_divisors(
    phi_t: &SkewPoly<FieldExt>,
    phi_varpi: &SkewPoly<FieldExt>,
    deg: usize,
) -> Result<Vec<SkewPoly<FieldExt>>> {
    let ext = phi_t.ring();
    if deg == 0 {
        return Ok(vec![SkewPoly::one(ext)]);
    }
    let q = ext.place().q();
    if deg > 2 || ext.size() > q.pow(4) {
        return Err(Error::Precondition(format!(
            "divisor enumeration is limited to degree <= 2 over fields of at most q^4 elements (degree {deg}, field size {})",
            ext.size()
        )));
    }
    let k = ext.size();
    let total = k.pow(deg as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut c = Vec::with_capacity(deg + 1);
        let mut x = idx;
        for _ in 0..deg {
            c.push(Fe(x % k));
            x /= k;
        }
        c.push(Fe::ONE);
        let u = SkewPoly::new(ext, c);
        if !phi_varpi.right_divide(&u)?.1.is_zero() {
            continue;
        }
        if u.mul(phi_t)?.right_divide(&u)?.1.is_zero() {
            out.push(u);
        }
    }
    out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ext::ext_field;
    use crate::arith::place::parse_place;

    fn f(q: u64, v: &str, m: usize) -> FieldExt {
        ext_field(&parse_place(q, v).unwrap(), m, true).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let k = f(3, "T", 1);
        let c = Fe(2);
        let tau = SkewPoly::tau_pow(&k, 1);
        assert_eq!(tau.mul(&SkewPoly::constant(&k, c)).unwrap().coeffs(), &[Fe(0), k.frobenius(&c)]);
        let u = parse_skew(&k, "1 + t").unwrap();
        let v = parse_skew(&k, "t + t^2").unwrap();
        assert_eq!(u.mul(&v).unwrap().format(), "t + 2*t^2 + t^3");
        assert_eq!(u.mul(&SkewPoly::one(&k)).unwrap(), u);
    }

    #[test]
    fn twist_is_visible_over_nine_elements() {
        let k = f(3, "T", 2);
        let i = k.field().generator();
        let tau = SkewPoly::tau_pow(&k, 1);
        let prod = tau.mul(&SkewPoly::constant(&k, i)).unwrap();
        assert_eq!(prod.coeff(1), k.neg(&i));
    }

    #[test]
    fn division_examples() {
        let k = f(3, "T", 1);
        let t2 = SkewPoly::tau_pow(&k, 2);
        let t1 = SkewPoly::tau_pow(&k, 1);
        let (qt, r) = t2.right_divide(&t1).unwrap();
        assert_eq!((qt, r.is_zero()), (t1.clone(), true));
        let u = parse_skew(&k, "t + t^2").unwrap();
        let v = parse_skew(&k, "1 + t").unwrap();
        let (qt, r) = u.right_divide(&v).unwrap();
        assert_eq!(qt.mul(&v).unwrap().add(&r).unwrap(), u);
        assert!(r.degree().is_none_or(|d| d < 1));
        let (qt, r) = u.right_divide(&u).unwrap();
        assert_eq!((qt, r.is_zero()), (SkewPoly::one(&k), true));
    }

    #[test]
    fn kernel_examples() {
        let k9 = f(3, "T", 2);
        let ker = kernel_points(&SkewPoly::tau_pow(&k9, 1)).unwrap();
        assert_eq!(ker.points.unwrap(), vec![Fe::ZERO]);
        let ker = kernel_points(&parse_skew(&k9, "1 + t").unwrap()).unwrap();
        let i = k9.field().generator();
        let mut expect = vec![Fe::ZERO, i, k9.neg(&i)];
        expect.sort();
        assert_eq!(ker.points.unwrap(), expect);
        assert_eq!(ker.fq_basis.len(), 1);
        assert_eq!(kernel_points(&SkewPoly::tau_pow(&k9, 2)).unwrap().count, 1);
    }

    #[test]
    fn stable_divisor_examples() {
        let k9 = f(3, "T", 2);
        let t2 = SkewPoly::tau_pow(&k9, 2);
        let divs = stable_right_divisors(&t2, &t2, 1).unwrap();
        assert_eq!(divs, vec![SkewPoly::tau_pow(&k9, 1)]);
        let phi = parse_skew(&k9, "t + t^2").unwrap();
        let divs: Vec<String> = stable_right_divisors(&phi, &phi, 1).unwrap().iter().map(|u| u.format()).collect();
        assert_eq!(divs, vec!["t", "1 + t"]);
        assert_eq!(stable_right_divisors(&phi, &phi, 0).unwrap(), vec![SkewPoly::one(&k9)]);
    }

    #[test]
    fn text_roundtrip() {
        let k = f(2, "T^2+T+1", 2);
        let u = SkewPoly::new(&k, vec![Fe(5), Fe(0), Fe(1), Fe(14)]);
        assert_eq!(parse_skew(&k, &u.format()).unwrap(), u);
    }
}
