//! Finite extensions `F_{q^{dm}}` of the residue field, with a structure map from `A`.

use std::fmt;
use std::sync::Arc;

use super::apoly::APoly;
use super::ff::{Fe, FiniteField};
use super::place::PrimePlace;
use super::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};

/// The field with `q^{dm}` elements together with `gamma(T)`.
#[derive(Clone)]
pub struct FieldExt {
    inner: Arc<ExtInner>,
}

struct ExtInner {
    place: PrimePlace,
    m: usize,
    field: FiniteField,
    fq_embed: Vec<Fe>,
    gamma: Fe,
    char_p: bool,
}

impl fmt::Debug for FieldExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FieldExt(q={}, varpi={}, m={}, gamma={})",
            self.place().q(),
            self.place().varpi_text(),
            self.inner.m,
            self.format(self.inner.gamma)
        )
    }
}

impl PartialEq for FieldExt {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.field == other.inner.field
                && self.inner.gamma == other.inner.gamma
                && self.inner.fq_embed == other.inner.fq_embed
                && self.inner.place == other.inner.place)
    }
}

/// A field embedding given by its table on the source.
#[derive(Clone, Debug)]
pub struct FieldMap {
    table: Vec<Fe>,
}

impl FieldMap {
    pub fn apply(&self, a: Fe) -> Fe {
        self.table[a.0 as usize]
    }
}

/// Builds `F_{q^{dm}}`; with `char_p` the image of `T` is a root of `varpi`.
pub fn ext_field(place: &PrimePlace, m: usize, char_p: bool) -> Result<FieldExt> {
    if m == 0 {
        return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
    }
    let fq = place.a().fq();
    let p = fq.characteristic();
    let e = fq.degree() as usize;
    let field = FiniteField::new(p, (e * place.d() * m) as u32)?;
    let fq_embed = field.embedding_from(fq)?;
    let gamma = if char_p {
        let residue = FiniteField::new(p, (e * place.d()) as u32)?;
        let emb = field.embedding_from(&residue)?;
        let mut roots: Vec<Fe> = residue
            .elements()
            .map(|x| emb[x.0 as usize])
            .filter(|x| eval_in(&field, &fq_embed, place.varpi(), *x) == Fe::ZERO)
            .collect();
        roots.sort();
        *roots.first().ok_or_else(|| Error::NoRoot(place.varpi_text()))?
    } else {
        field
            .elements()
            .find(|x| eval_in(&field, &fq_embed, place.varpi(), *x) != Fe::ZERO)
            .ok_or_else(|| Error::InvalidParameter("every element is a root".into()))?
    };
    Ok(FieldExt { inner: Arc::new(ExtInner { place: place.clone(), m, field, fq_embed, gamma, char_p }) })
}

fn eval_in(field: &FiniteField, fq_embed: &[Fe], a: &APoly, x: Fe) -> Fe {
    let mut acc = Fe::ZERO;
    for c in a.coeffs().iter().rev() {
        acc = field.add(field.mul(acc, x), fq_embed[c.0 as usize]);
    }
    acc
}

impl FieldExt {
    pub fn place(&self) -> &PrimePlace {
        &self.inner.place
    }

    pub fn m(&self) -> usize {
        self.inner.m
    }

    pub fn field(&self) -> &FiniteField {
        &self.inner.field
    }

    pub fn size(&self) -> u64 {
        self.inner.field.size()
    }

    pub fn is_char_p(&self) -> bool {
        self.inner.char_p
    }

    /// `[F_{q^{dm}} : F_q]`.
    pub fn degree_over_fq(&self) -> usize {
        self.inner.m * self.inner.place.d()
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        self.inner.field.elements()
    }

    pub fn embed_fq(&self, c: Fe) -> Fe {
        self.inner.fq_embed[c.0 as usize]
    }

    /// The images of all of `F_q`.
    pub fn fq_elements(&self) -> Vec<Fe> {
        self.inner.fq_embed.clone()
    }

    pub fn eval(&self, a: &APoly) -> Fe {
        eval_in(&self.inner.field, &self.inner.fq_embed, a, self.inner.gamma)
    }

    pub fn format(&self, a: Fe) -> String {
        self.inner.field.format(a)
    }

    pub fn parse(&self, s: &str) -> Result<Fe> {
        self.inner.field.parse(s)
    }

    /// `a^{q^k}`.
    pub fn frobenius_pow(&self, a: Fe, k: usize) -> Fe {
        let mut x = a;
        for _ in 0..k {
            x = self.frobenius(&x);
        }
        x
    }

    /// Degree-`e` extension with compatible structure maps, and the embedding of `self` into it.
    pub fn extend(&self, e: usize) -> Result<(FieldExt, FieldMap)> {
        let fq = self.place().a().fq();
        let p = fq.characteristic();
        let big = FiniteField::new(p, (fq.degree() as usize * self.degree_over_fq() * e) as u32)?;
        let table = big.embedding_from(&self.inner.field)?;
        let map = FieldMap { table };
        let fq_embed = self.inner.fq_embed.iter().map(|x| map.apply(*x)).collect();
        let gamma = map.apply(self.inner.gamma);
        let inner = ExtInner {
            place: self.inner.place.clone(),
            m: self.inner.m * e,
            field: big,
            fq_embed,
            gamma,
            char_p: self.inner.char_p,
        };
        Ok((FieldExt { inner: Arc::new(inner) }, map))
    }

    /// The `F_q`-subspace spanned by `vectors`, as a basis extracted greedily.
    pub fn fq_basis(&self, vectors: &[Fe]) -> Vec<Fe> {
        let f = &self.inner.field;
        let fq = self.place().a().fq();
        let fq_basis: Vec<Fe> = (0..fq.degree()).map(|i| self.embed_fq(Fe(fq.characteristic().pow(i)))).collect();
        let mut span: Vec<Vec<u64>> = Vec::new();
        let mut out = Vec::new();
        for v in vectors {
            let candidates: Vec<Vec<u64>> = fq_basis.iter().map(|w| f.digits(f.mul(*w, *v))).collect();
            let mut trial = span.clone();
            trial.extend(candidates.iter().cloned());
            if fp_rank(&trial, f.characteristic()) > fp_rank(&span, f.characteristic()) {
                span = trial;
                out.push(*v);
            }
        }
        out
    }
}

/// Rank over `F_p` of a list of coordinate vectors.
pub fn fp_rank(rows: &[Vec<u64>], p: u64) -> usize {
    fp_row_reduce(rows, p).len()
}

/// Row-reduced nonzero rows over `F_p`.
pub fn fp_row_reduce(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
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
        rank += 1;
    }
    m.truncate(rank);
    m
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
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

impl Ring for FieldExt {
    type Elem = Fe;

    fn zero(&self) -> Fe {
        Fe::ZERO
    }

    fn one(&self) -> Fe {
        Fe::ONE
    }

    fn add(&self, a: &Fe, b: &Fe) -> Fe {
        self.inner.field.add(*a, *b)
    }

    fn neg(&self, a: &Fe) -> Fe {
        self.inner.field.neg(*a)
    }

    fn mul(&self, a: &Fe, b: &Fe) -> Fe {
        self.inner.field.mul(*a, *b)
    }

    fn inv(&self, a: &Fe) -> Option<Fe> {
        self.inner.field.inv(*a)
    }

    fn frobenius(&self, a: &Fe) -> Fe {
        self.inner.field.pow(*a, self.inner.place.q())
    }

    fn fmt_elem(&self, a: &Fe) -> String {
        self.format(*a)
    }

    fn pow(&self, a: &Fe, e: u64) -> Fe {
        self.inner.field.pow(*a, e)
    }

    fn from_int(&self, n: i64) -> Fe {
        self.inner.field.from_int(n)
    }
}

impl AAlgebra for FieldExt {
    fn q(&self) -> u64 {
        self.inner.place.q()
    }

    fn from_fq(&self, c: Fe) -> Fe {
        self.embed_fq(c)
    }

    fn gamma(&self) -> Fe {
        self.inner.gamma
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::place::parse_place;

    #[test]
    fn examples() {
        let p = parse_place(3, "T").unwrap();
        let f3 = ext_field(&p, 1, true).unwrap();
        assert_eq!((f3.size(), f3.gamma()), (3, Fe::ZERO));
        let f9 = ext_field(&p, 2, true).unwrap();
        assert_eq!((f9.size(), f9.gamma()), (9, Fe::ZERO));
        let p4 = parse_place(2, "T^2+T+1").unwrap();
        let f4 = ext_field(&p4, 1, true).unwrap();
        let t = f4.gamma();
        assert_eq!(f4.format(t), "z");
        assert_eq!(f4.mul(&t, &t), f4.add(&t, &Fe::ONE));
        assert_eq!(f4.eval(p4.varpi()), Fe::ZERO);
    }

    #[test]
    fn q_four_places() {
        let p = parse_place(4, "T^2+T+(z)").unwrap();
        let f = ext_field(&p, 1, true).unwrap();
        assert_eq!(f.size(), 16);
        assert_eq!(f.eval(p.varpi()), Fe::ZERO);
        for c in f.fq_elements() {
            assert_eq!(f.pow(&c, 4), c);
        }
        let away = ext_field(&p, 1, false).unwrap();
        assert_ne!(away.eval(p.varpi()), Fe::ZERO);
    }

    #[test]
    fn extension_is_compatible() {
        let p = parse_place(2, "T^2+T+1").unwrap();
        let f4 = ext_field(&p, 1, true).unwrap();
        let (f64_, map) = f4.extend(3).unwrap();
        assert_eq!(f64_.size(), 64);
        assert_eq!(f64_.gamma(), map.apply(f4.gamma()));
        assert_eq!(f64_.eval(p.varpi()), Fe::ZERO);
    }
}
