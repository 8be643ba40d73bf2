//! The Carlitz module: `[M](X)` and the trace along `X -> [varpi](X)`.

use serde::Serialize;

use crate::arith::apoly::APoly;
use crate::arith::artin::{ArtinElem, ArtinRing};
use crate::arith::place::PrimePlace;
use crate::arith::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};
use crate::skew::SkewPoly;

/// `[M](X)` with coefficients in `base`, by Horner's rule on the `T`-digits of `M`.
pub fn carlitz_eval<R: AAlgebra>(m: &APoly, base: &R) -> SkewPoly<R> {
    let phi_t = SkewPoly::new(base, vec![base.gamma(), base.one()]);
    let mut acc = SkewPoly::zero(base);
    for c in m.coeffs().iter().rev() {
        acc = phi_t
            .mul(&acc)
            .and_then(|x| x.add(&SkewPoly::constant(base, base.from_fq(*c))))
            .expect("same ring");
    }
    acc
}

/// Shape of the coefficients of `[varpi](X)` over `A`.
#[derive(Clone, Debug, Serialize)]
pub struct CarlitzProfile {
    pub q: u64,
    pub varpi: String,
    pub linear: String,
    pub leading: String,
    /// The coefficients of `X^{q^i}`, `0 < i < d`, reduced modulo `varpi`.
    pub middle_mod_varpi: Vec<String>,
}

pub const PROFILE_LABEL: &str = "carlitz-coefficient-profile";

/// Computes `[varpi](X)` over `A` and checks linear = varpi, leading = 1,
/// and that the remaining coefficients vanish modulo `varpi`.
pub fn carlitz_coefficient_profile(place: &PrimePlace) -> Result<CarlitzProfile> {
    let a = place.a();
    let poly = carlitz_eval(place.varpi(), a);
    let d = place.d();
    let linear = poly.coeff(0);
    let leading = poly.coeff(d);
    if poly.degree() != Some(d) {
        return Err(Error::check(PROFILE_LABEL, format!("tau-degree {:?} differs from d = {d}", poly.degree())));
    }
    if linear != *place.varpi() {
        return Err(Error::check(PROFILE_LABEL, format!("linear coefficient {} is not varpi", a.format(&linear))));
    }
    if leading != APoly::one() {
        return Err(Error::check(PROFILE_LABEL, format!("leading coefficient {} is not 1", a.format(&leading))));
    }
    let mut middle = Vec::new();
    for i in 1..d {
        let c = poly.coeff(i);
        let r = a.rem(&c, place.varpi())?;
        if !r.is_zero() {
            return Err(Error::check(
                PROFILE_LABEL,
                format!("coefficient of X^(q^{i}) is {} which is {} mod varpi", a.format(&c), a.format(&r)),
            ));
        }
        middle.push(a.format(&r));
    }
    Ok(CarlitzProfile {
        q: place.q(),
        varpi: place.varpi_text(),
        linear: a.format(&linear),
        leading: a.format(&leading),
        middle_mod_varpi: middle,
    })
}

/// Polynomials in `X` over an Artinian ring, truncated at degree `N`.
#[derive(Clone, Debug)]
pub struct TruncSeriesRing {
    coeff: ArtinRing,
    order: usize,
}

impl TruncSeriesRing {
    pub fn new(coeff: &ArtinRing, order: usize) -> Self {
        TruncSeriesRing { coeff: coeff.clone(), order }
    }

    pub fn coeff_ring(&self) -> &ArtinRing {
        &self.coeff
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn monomial(&self, k: usize) -> Vec<ArtinElem> {
        let mut v = vec![self.coeff.zero(); self.order];
        if k < self.order {
            v[k] = self.coeff.one();
        }
        v
    }

    pub fn mul(&self, a: &[ArtinElem], b: &[ArtinElem]) -> Vec<ArtinElem> {
        let r = &self.coeff;
        let mut v = vec![r.zero(); self.order];
        for (i, x) in a.iter().enumerate() {
            if r.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(self.order - i) {
                v[i + j] = r.add(&v[i + j], &r.mul(x, y));
            }
        }
        v
    }
}

/// The traces of the basis `1, X, ..., X^{q^d-1}` of the ring as a module over
/// its image under `X -> [varpi](X)`; each trace is a polynomial in `Y = [varpi](X)`.
#[derive(Clone, Debug, Serialize)]
pub struct TraceReport {
    pub q: u64,
    pub varpi: String,
    pub truncation: usize,
    pub nilpotency: usize,
    pub rank: usize,
    /// `traces[j]` is the trace of `X^j`, as coefficients of `Y^0, Y^1, ...`.
    pub traces: Vec<Vec<String>>,
    pub in_varpi_ideal: bool,
    pub generates_unit_ideal: bool,
}

pub const TRACE_LABEL: &str = "carlitz-trace-divisibility";

/// Traces as raw coefficient lists, `traces[j][k]` = coefficient of `Y^k` in `tr(X^j)`.
pub fn carlitz_traces(place: &PrimePlace, ring: &TruncSeriesRing) -> Result<Vec<Vec<ArtinElem>>> {
    let r = ring.coeff_ring();
    if r.nilpotency() < 2 {
        return Err(Error::Precondition("coefficient nilpotency must be at least 2".into()));
    }
    let qd = place.residue_size() as usize;
    if ring.order() < qd * qd {
        return Err(Error::Precondition(format!(
            "truncation {} is below q^(2d) = {}: the basis is not free at this depth",
            ring.order(),
            qd * qd
        )));
    }
    let f = carlitz_eval(place.varpi(), r);
    let q = place.q() as usize;
    // f = sum_i c_i X^{q^i}; the reduction rule X^{q^d} = Y - sum_{i<d} c_i X^{q^i}
    let lower: Vec<(usize, ArtinElem)> =
        (0..place.d()).map(|i| (q.pow(i as u32), f.coeff(i))).filter(|(_, c)| !r.is_zero(c)).collect();
    if f.coeff(place.d()) != r.one() {
        return Err(Error::check(TRACE_LABEL, "[varpi](X) is not monic in X"));
    }
    let mut traces = Vec::with_capacity(qd);
    for j in 0..qd {
        let b = ring.monomial(j);
        let mut tr: Vec<ArtinElem> = Vec::new();
        for k in 0..qd {
            let prod = ring.mul(&b, &ring.monomial(k));
            let reduced = reduce(r, &prod, qd, &lower);
            for (deg_y, c) in reduced[k].iter().enumerate() {
                if tr.len() <= deg_y {
                    tr.resize(deg_y + 1, r.zero());
                }
                tr[deg_y] = r.add(&tr[deg_y], c);
            }
        }
        while tr.last().is_some_and(|c| r.is_zero(c)) {
            tr.pop();
        }
        traces.push(tr);
    }
    Ok(traces)
}

/// Writes an `X`-polynomial as `sum_{l < q^d} a_l(Y) X^l`.
fn reduce(r: &ArtinRing, x: &[ArtinElem], qd: usize, lower: &[(usize, ArtinElem)]) -> Vec<Vec<ArtinElem>> {
    let mut coef: Vec<Vec<ArtinElem>> = x.iter().map(|c| vec![c.clone()]).collect();
    for k in (qd..coef.len()).rev() {
        let c = std::mem::take(&mut coef[k]);
        if c.iter().all(|e| r.is_zero(e)) {
            continue;
        }
        let base = k - qd;
        // c * Y * X^base
        let mut shifted = vec![r.zero()];
        shifted.extend(c.iter().cloned());
        add_into(r, &mut coef[base], &shifted);
        for (pw, ci) in lower {
            let term: Vec<ArtinElem> = c.iter().map(|e| r.neg(&r.mul(e, ci))).collect();
            add_into(r, &mut coef[base + pw], &term);
        }
    }
    coef.truncate(qd);
    coef
}

fn add_into(r: &ArtinRing, acc: &mut Vec<ArtinElem>, x: &[ArtinElem]) {
    if acc.len() < x.len() {
        acc.resize(x.len(), r.zero());
    }
    for (a, b) in acc.iter_mut().zip(x) {
        *a = r.add(a, b);
    }
}

/// Checks that every basis trace lies in `varpi` times the ring and that the
/// traces divided by `varpi` generate the unit ideal.
pub fn trace_of_carlitz_pullback(place: &PrimePlace, ring: &TruncSeriesRing) -> Result<TraceReport> {
    let r = ring.coeff_ring();
    let traces = carlitz_traces(place, ring)?;
    let in_ideal = traces.iter().all(|t| t.iter().all(|c| r.in_maximal_ideal(c)));
    // (tr / varpi) mod the maximal ideal, at Y = 0, is the eps^1 coefficient of the constant term
    let generates = traces.iter().any(|t| t.first().is_some_and(|c| c.0[1] != crate::arith::ff::Fe::ZERO));
    let report = TraceReport {
        q: place.q(),
        varpi: place.varpi_text(),
        truncation: ring.order(),
        nilpotency: r.nilpotency(),
        rank: traces.len(),
        traces: traces.iter().map(|t| t.iter().map(|c| r.fmt_elem(c)).collect()).collect(),
        in_varpi_ideal: in_ideal,
        generates_unit_ideal: generates,
    };
    if !in_ideal {
        return Err(Error::check(TRACE_LABEL, format!("a trace is not divisible by varpi: {:?}", report.traces)));
    }
    if !generates {
        return Err(Error::check(TRACE_LABEL, format!("traces / varpi do not generate: {:?}", report.traces)));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::apoly::PolyRing;
    use crate::arith::ext::ext_field;
    use crate::arith::place::parse_place;

    #[test]
    fn symbolic_examples() {
        let a = PolyRing::over_q(3).unwrap();
        assert_eq!(carlitz_eval(&APoly::one(), &a).format(), "1");
        assert_eq!(carlitz_eval(&APoly::t(), &a).format(), "T + t");
        let t2 = carlitz_eval(&a.parse("T^2").unwrap(), &a);
        assert_eq!(t2.coeff(0), a.parse("T^2").unwrap());
        assert_eq!(t2.coeff(1), a.parse("T^3+T").unwrap());
        assert_eq!(t2.coeff(2), APoly::one());
    }

    #[test]
    fn profile_examples() {
        let p = carlitz_coefficient_profile(&parse_place(3, "T").unwrap()).unwrap();
        assert_eq!((p.linear.as_str(), p.leading.as_str(), p.middle_mod_varpi.len()), ("T", "1", 0));
        let p = carlitz_coefficient_profile(&parse_place(2, "T^2+T+1").unwrap()).unwrap();
        assert_eq!(p.linear, "T^2+T+1");
        assert_eq!(p.middle_mod_varpi, vec!["0"]);
        assert!(carlitz_coefficient_profile(&parse_place(3, "T^2+1").unwrap()).is_ok());
    }

    #[test]
    fn trace_example_three() {
        let place = parse_place(3, "T").unwrap();
        let k = ext_field(&place, 1, true).unwrap();
        let r = ArtinRing::new(&k, 2).unwrap();
        let ring = TruncSeriesRing::new(&r, 10);
        let tr = carlitz_traces(&place, &ring).unwrap();
        assert!(tr[0].is_empty());
        assert!(tr[1].is_empty());
        assert_eq!(tr[2], vec![r.eps()]);
        assert_eq!(r.from_int(-2), r.one());
        let rep = trace_of_carlitz_pullback(&place, &ring).unwrap();
        assert_eq!(rep.rank, 3);
        assert!(trace_of_carlitz_pullback(&place, &TruncSeriesRing::new(&r, 5)).is_err());
    }
}
