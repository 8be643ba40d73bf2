//! Monogenic Artinian test rings `k'[eps]/(eps^n)` with `eps` the image of `varpi`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::ext::FieldExt;
use super::ff::Fe;
use super::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};

/// Coefficients of `1, eps, ..., eps^{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ArtinElem(pub Vec<Fe>);

#[derive(Clone, Debug)]
pub struct ArtinRing {
    inner: Arc<ArtinInner>,
}

#[derive(Debug)]
struct ArtinInner {
    residue: FieldExt,
    n: usize,
    t_image: ArtinElem,
}

impl PartialEq for ArtinRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.residue == other.inner.residue && self.inner.n == other.inner.n)
    }
}

impl ArtinRing {
    /// `residue[eps]/(eps^n)`; `T` maps to the unique lift `t` of `gamma` with `varpi(t) = eps`.
    pub fn new(residue: &FieldExt, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("nilpotency order must be at least 1".into()));
        }
        if !residue.is_char_p() {
            return Err(Error::NotCharacteristicP(residue.format(residue.eval(residue.place().varpi()))));
        }
        let mut ring = ArtinRing {
            inner: Arc::new(ArtinInner { residue: residue.clone(), n, t_image: ArtinElem(vec![Fe::ZERO; n]) }),
        };
        let t = ring.hensel_lift()?;
        Arc::get_mut(&mut ring.inner).expect("unique").t_image = t;
        Ok(ring)
    }

    fn hensel_lift(&self) -> Result<ArtinElem> {
        let res = &self.inner.residue;
        let varpi = res.place().varpi();
        let a = res.place().a();
        let deriv = {
            let c: Vec<Fe> = varpi
                .coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| a.fq().mul(*c, a.fq().from_int(i as i64)))
                .collect();
            super::apoly::APoly::new(c)
        };
        let eps = self.eps();
        let mut t = self.constant(res.gamma());
        for _ in 0..self.inner.n + 1 {
            let f = self.sub(&self.eval_poly(varpi, &t), &eps);
            let df = self.eval_poly(&deriv, &t);
            let inv = self.inv(&df).ok_or_else(|| Error::InvalidParameter("varpi is inseparable".into()))?;
            t = self.sub(&t, &self.mul(&f, &inv));
        }
        Ok(t)
    }

    fn eval_poly(&self, a: &super::apoly::APoly, x: &ArtinElem) -> ArtinElem {
        let mut acc = self.zero();
        for c in a.coeffs().iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.constant(self.inner.residue.embed_fq(*c)));
        }
        acc
    }

    pub fn residue(&self) -> &FieldExt {
        &self.inner.residue
    }

    pub fn nilpotency(&self) -> usize {
        self.inner.n
    }

    pub fn constant(&self, c: Fe) -> ArtinElem {
        let mut v = vec![Fe::ZERO; self.inner.n];
        v[0] = c;
        ArtinElem(v)
    }

    /// The local parameter.
    pub fn eps(&self) -> ArtinElem {
        self.eps_pow(1)
    }

    pub fn eps_pow(&self, k: usize) -> ArtinElem {
        let mut v = vec![Fe::ZERO; self.inner.n];
        if k < self.inner.n {
            v[k] = Fe::ONE;
        }
        ArtinElem(v)
    }

    pub fn from_coeffs(&self, c: &[Fe]) -> ArtinElem {
        let mut v = vec![Fe::ZERO; self.inner.n];
        for (i, x) in c.iter().take(self.inner.n).enumerate() {
            v[i] = *x;
        }
        ArtinElem(v)
    }

    /// Reduction modulo the maximal ideal.
    pub fn residue_of(&self, a: &ArtinElem) -> Fe {
        a.0[0]
    }

    pub fn in_maximal_ideal(&self, a: &ArtinElem) -> bool {
        a.0[0] == Fe::ZERO
    }

    /// All elements of the maximal ideal, in encoding order.
    pub fn maximal_ideal(&self) -> Vec<ArtinElem> {
        let k = self.inner.residue.size();
        let count = k.pow(self.inner.n as u32 - 1);
        (0..count)
            .map(|mut idx| {
                let mut v = vec![Fe::ZERO; self.inner.n];
                for slot in v.iter_mut().skip(1) {
                    *slot = Fe(idx % k);
                    idx /= k;
                }
                ArtinElem(v)
            })
            .collect()
    }

    pub fn size(&self) -> u64 {
        self.inner.residue.size().pow(self.inner.n as u32)
    }
}

impl Ring for ArtinRing {
    type Elem = ArtinElem;

    fn zero(&self) -> ArtinElem {
        ArtinElem(vec![Fe::ZERO; self.inner.n])
    }

    fn one(&self) -> ArtinElem {
        self.constant(Fe::ONE)
    }

    fn add(&self, a: &ArtinElem, b: &ArtinElem) -> ArtinElem {
        let f = &self.inner.residue;
        ArtinElem(a.0.iter().zip(&b.0).map(|(x, y)| f.add(x, y)).collect())
    }

    fn neg(&self, a: &ArtinElem) -> ArtinElem {
        let f = &self.inner.residue;
        ArtinElem(a.0.iter().map(|x| f.neg(x)).collect())
    }

    fn mul(&self, a: &ArtinElem, b: &ArtinElem) -> ArtinElem {
        let f = &self.inner.residue;
        let n = self.inner.n;
        let mut v = vec![Fe::ZERO; n];
        for i in 0..n {
            if a.0[i] == Fe::ZERO {
                continue;
            }
            for j in 0..n - i {
                v[i + j] = f.add(&v[i + j], &f.mul(&a.0[i], &b.0[j]));
            }
        }
        ArtinElem(v)
    }

    fn inv(&self, a: &ArtinElem) -> Option<ArtinElem> {
        let f = &self.inner.residue;
        let a0 = f.inv(&a.0[0])?;
        let n = self.inner.n;
        let mut b = vec![Fe::ZERO; n];
        b[0] = a0;
        for k in 1..n {
            let mut s = Fe::ZERO;
            for i in 1..=k {
                s = f.add(&s, &f.mul(&a.0[i], &b[k - i]));
            }
            b[k] = f.neg(&f.mul(&s, &a0));
        }
        Some(ArtinElem(b))
    }

    fn frobenius(&self, a: &ArtinElem) -> ArtinElem {
        let f = &self.inner.residue;
        let q = f.place().q() as usize;
        let mut v = vec![Fe::ZERO; self.inner.n];
        for (i, c) in a.0.iter().enumerate() {
            if i * q < self.inner.n {
                v[i * q] = f.frobenius(c);
            }
        }
        ArtinElem(v)
    }

    fn fmt_elem(&self, a: &ArtinElem) -> String {
        let f = &self.inner.residue;
        let mut terms = Vec::new();
        for (i, c) in a.0.iter().enumerate() {
            if *c == Fe::ZERO {
                continue;
            }
            let cs = f.format(*c);
            let cs = if cs.contains('+') { format!("({cs})") } else { cs };
            terms.push(match (i, cs.as_str()) {
                (0, _) => cs,
                (1, "1") => "eps".to_string(),
                (1, _) => format!("{cs}*eps"),
                (_, "1") => format!("eps^{i}"),
                _ => format!("{cs}*eps^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

impl AAlgebra for ArtinRing {
    fn q(&self) -> u64 {
        self.inner.residue.place().q()
    }

    fn from_fq(&self, c: Fe) -> ArtinElem {
        self.constant(self.inner.residue.embed_fq(c))
    }

    fn gamma(&self) -> ArtinElem {
        self.inner.t_image.clone()
    }
}
