//! Rank-2 Drinfeld modules `phi(T) = gamma + g tau + Delta tau^2`.

use serde::{Deserialize, Serialize};

use crate::arith::apoly::APoly;
use crate::arith::ext::{FieldExt, FieldMap};
use crate::arith::ff::Fe;
use crate::arith::ring::{AAlgebra, Ring};
use crate::error::{Error, Result};
use crate::skew::{kernel_points, SkewPoly};

#[derive(Clone, Debug, PartialEq)]
pub struct DrinfeldModule<R: AAlgebra> {
    ring: R,
    g: R::Elem,
    delta: R::Elem,
}

impl<R: AAlgebra> DrinfeldModule<R> {
    /// The module with `gamma(T)` taken from the structure map of `ring`.
    pub fn new(ring: &R, g: R::Elem, delta: R::Elem) -> Result<Self> {
        if !ring.is_unit(&delta) {
            return Err(Error::InvalidParameter(format!("Delta = {} is not a unit", ring.fmt_elem(&delta))));
        }
        Ok(DrinfeldModule { ring: ring.clone(), g, delta })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn gamma(&self) -> R::Elem {
        self.ring.gamma()
    }

    pub fn g(&self) -> &R::Elem {
        &self.g
    }

    pub fn delta(&self) -> &R::Elem {
        &self.delta
    }

    pub fn phi_t(&self) -> SkewPoly<R> {
        SkewPoly::new(&self.ring, vec![self.gamma(), self.g.clone(), self.delta.clone()])
    }

    /// `phi(a)`, by Horner's rule on the `T`-digits of `a`.
    pub fn phi_eval(&self, a: &APoly) -> SkewPoly<R> {
        let r = &self.ring;
        let phi_t = self.phi_t();
        let mut acc = SkewPoly::zero(r);
        for c in a.coeffs().iter().rev() {
            acc = phi_t.mul(&acc).and_then(|x| x.add(&SkewPoly::constant(r, r.from_fq(*c)))).expect("same ring");
        }
        acc
    }

    /// `g^{q+1} / Delta`.
    pub fn j_invariant(&self) -> R::Elem {
        let r = &self.ring;
        let q = r.q();
        r.mul(&r.pow(&self.g, q + 1), &r.inv(&self.delta).expect("unit"))
    }

    /// The module conjugated by `x -> c x`: `(c^{q-1} g, c^{q^2-1} Delta)`.
    pub fn rescale(&self, c: &R::Elem) -> Result<Self> {
        let r = &self.ring;
        let q = r.q();
        if !r.is_unit(c) {
            return Err(Error::InvalidParameter("rescaling by a non-unit".into()));
        }
        DrinfeldModule::new(r, r.mul(&r.pow(c, q - 1), &self.g), r.mul(&r.pow(c, q * q - 1), &self.delta))
    }
}

/// How a finite subgroup scheme sits in `E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubgroupKind {
    Connected,
    Etale,
    Mixed,
}

/// An `A`-stable subgroup scheme given by its monic kernel polynomial.
#[derive(Clone, Debug)]
pub struct SubgroupScheme {
    pub u: SkewPoly<FieldExt>,
    pub order: u64,
    pub kind: SubgroupKind,
}

impl SubgroupScheme {
    /// Validates `u` as monic and `A`-stable in `parent`.
    pub fn new(parent: &DrinfeldModule<FieldExt>, u: SkewPoly<FieldExt>) -> Result<Self> {
        if !u.is_monic() {
            return Err(Error::InvalidParameter(format!("kernel polynomial {} is not monic", u.format())));
        }
        let rem = u.mul(&parent.phi_t())?.right_divide(&u)?.1;
        if !rem.is_zero() {
            return Err(Error::NotStable(format!("u = {} leaves remainder {}", u.format(), rem.format())));
        }
        let deg = u.degree().expect("monic");
        let k = u.ring();
        let c0 = u.coeff(0);
        let kind = if !k.is_zero(&c0) {
            SubgroupKind::Etale
        } else if u == SkewPoly::tau_pow(k, deg) {
            SubgroupKind::Connected
        } else {
            SubgroupKind::Mixed
        };
        Ok(SubgroupScheme { order: k.q().pow(deg as u32), u, kind })
    }
}

/// `u: source -> target` with `phi_target(T) u = u phi_source(T)`.
#[derive(Clone, Debug)]
pub struct Isogeny {
    pub source: DrinfeldModule<FieldExt>,
    pub target: DrinfeldModule<FieldExt>,
    pub u: SkewPoly<FieldExt>,
}

impl Isogeny {
    pub fn verify(&self) -> Result<bool> {
        Ok(self.u.mul(&self.source.phi_t())? == self.target.phi_t().mul(&self.u)?)
    }

    /// The Lie coefficient `c_0(u)`.
    pub fn lie(&self) -> Fe {
        self.u.coeff(0)
    }
}

/// `V = a_0 + ... + a_d tau^d` with `V tau^d = phi(varpi)`.
#[derive(Clone, Debug)]
pub struct Verschiebung {
    pub v: SkewPoly<FieldExt>,
}

impl Verschiebung {
    pub fn coeffs(&self) -> Vec<Fe> {
        let d = self.v.ring().place().d();
        (0..=d).map(|i| self.v.coeff(i)).collect()
    }

    pub fn hasse(&self) -> Fe {
        self.v.coeff(0)
    }
}

pub const VANISHING_LABEL: &str = "frobenius-factorization-vanishing";

fn require_char_p(e: &DrinfeldModule<FieldExt>) -> Result<()> {
    let k = e.ring();
    let val = k.eval(k.place().varpi());
    if k.is_char_p() && val == Fe::ZERO {
        Ok(())
    } else {
        Err(Error::NotCharacteristicP(k.format(val)))
    }
}

impl DrinfeldModule<FieldExt> {
    /// The module with every coefficient raised to `q^d`.
    pub fn frobenius_twist(&self) -> Self {
        let k = self.ring();
        let d = k.place().d();
        DrinfeldModule {
            ring: k.clone(),
            g: k.frobenius_pow(self.g, d),
            delta: k.frobenius_pow(self.delta, d),
        }
    }

    pub fn base_change(&self, ext: &FieldExt, map: &FieldMap) -> Self {
        DrinfeldModule { ring: ext.clone(), g: map.apply(self.g), delta: map.apply(self.delta) }
    }

    pub fn record(&self) -> Result<ModuleRecord> {
        let k = self.ring();
        let hasse = hasse_invariant(self)?;
        Ok(ModuleRecord {
            gamma_t: k.format(self.gamma()),
            g: k.format(self.g),
            delta: k.format(self.delta),
            j: k.format(self.j_invariant()),
            hasse: k.format(hasse),
            ordinary: hasse != Fe::ZERO,
        })
    }
}

/// The JSON record of a module.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleRecord {
    pub gamma_t: String,
    pub g: String,
    pub delta: String,
    pub j: String,
    pub hasse: String,
    pub ordinary: bool,
}

/// `phi(varpi) = V tau^d`; checks the vanishing of the coefficients below `tau^d`.
pub fn frobenius_verschiebung(e: &DrinfeldModule<FieldExt>) -> Result<(Isogeny, Verschiebung)> {
    require_char_p(e)?;
    let k = e.ring();
    let d = k.place().d();
    let phi_varpi = e.phi_eval(k.place().varpi());
    for i in 0..d {
        if phi_varpi.coeff(i) != Fe::ZERO {
            return Err(Error::check(
                VANISHING_LABEL,
                format!("coefficient of tau^{i} in phi(varpi) is {}", k.format(phi_varpi.coeff(i))),
            ));
        }
    }
    let v = SkewPoly::new(k, (d..=2 * d).map(|i| phi_varpi.coeff(i)).collect());
    let f = SkewPoly::tau_pow(k, d);
    if v.mul(&f)? != phi_varpi {
        return Err(Error::check(VANISHING_LABEL, "V tau^d does not recover phi(varpi)"));
    }
    let iso = Isogeny { source: e.clone(), target: e.frobenius_twist(), u: f };
    if !iso.verify()? {
        return Err(Error::check(VANISHING_LABEL, "tau^d does not intertwine E and its twist"));
    }
    Ok((iso, Verschiebung { v }))
}

/// `a_0`, the Hasse invariant.
pub fn hasse_invariant(e: &DrinfeldModule<FieldExt>) -> Result<Fe> {
    Ok(frobenius_verschiebung(e)?.1.hasse())
}

pub fn is_ordinary(e: &DrinfeldModule<FieldExt>) -> Result<bool> {
    Ok(hasse_invariant(e)? != Fe::ZERO)
}

/// The group `E[p^n]` over a finite field.
#[derive(Clone, Debug, Serialize)]
pub struct TorsionReport {
    pub n: usize,
    pub field_size: u64,
    pub count: u64,
    /// Points in encoding order when the list is small.
    pub points: Option<Vec<String>>,
    pub ordinary: bool,
    /// `q^{dn}` for ordinary modules, 1 otherwise.
    pub expected: u64,
    pub points_missing: bool,
    /// A generator of the group as a cyclic `A/p^n`-module, when the group is complete.
    pub cyclic_generator: Option<String>,
}

/// `E[p^n]` over `ext`, reached from the base field of `e` by `map`.
pub fn torsion_points_in(e: &DrinfeldModule<FieldExt>, n: usize, ext: &FieldExt, map: &FieldMap) -> Result<TorsionReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("torsion depth must be at least 1".into()));
    }
    let ordinary = is_ordinary(e)?;
    let place = e.ring().place().clone();
    let big = e.base_change(ext, map);
    let varpi_n = place.varpi_pow(n);
    let phi_n = big.phi_eval(&varpi_n);
    let ker = kernel_points(&phi_n)?;
    let expected = if ordinary { place.residue_size().pow(n as u32) } else { 1 };
    let cyclic_generator = if ordinary && ker.count == expected {
        let residues = APoly::all_below(place.a().fq(), place.d() * n);
        let images: Vec<SkewPoly<FieldExt>> = residues.iter().map(|a| big.phi_eval(a)).collect();
        ker.points.as_ref().and_then(|pts| {
            pts.iter().copied().find(|x| {
                let mut orbit: Vec<Fe> = images.iter().map(|u| u.eval(x)).collect();
                orbit.sort();
                orbit.dedup();
                orbit.len() as u64 == expected
            })
        })
    } else {
        None
    };
    Ok(TorsionReport {
        n,
        field_size: ext.size(),
        count: ker.count,
        points: ker.points.as_ref().map(|p| p.iter().map(|x| ext.format(*x)).collect()),
        ordinary,
        expected,
        points_missing: ker.count < expected,
        cyclic_generator: cyclic_generator.map(|x| ext.format(x)),
    })
}

/// `E[p^n]` over the degree-`k` extension of the base field of `e`.
pub fn torsion_points(e: &DrinfeldModule<FieldExt>, n: usize, k: usize) -> Result<TorsionReport> {
    let (ext, map) = e.ring().extend(k)?;
    torsion_points_in(e, n, &ext, &map)
}

/// `H^can_n = ker tau^{dn}` for ordinary `e`.
pub fn canonical_subgroup(e: &DrinfeldModule<FieldExt>, n: usize) -> Result<SubgroupScheme> {
    if !is_ordinary(e)? {
        return Err(Error::Supersingular);
    }
    let k = e.ring();
    let d = k.place().d();
    let u = SkewPoly::tau_pow(k, d * n);
    let phi_n = e.phi_eval(&k.place().varpi_pow(n));
    if !phi_n.right_divide(&u)?.1.is_zero() {
        return Err(Error::NotStable("tau^{dn} does not divide phi(varpi^n)".into()));
    }
    SubgroupScheme::new(e, u)
}

/// `E -> E/H` normalised by the monic kernel polynomial.
pub fn quotient_by_kernel(e: &DrinfeldModule<FieldExt>, h: &SubgroupScheme) -> Result<Isogeny> {
    let k = e.ring();
    let (target, rem) = h.u.mul(&e.phi_t())?.right_divide(&h.u)?;
    if !rem.is_zero() {
        return Err(Error::NotStable(format!("u phi(T) mod u = {}", rem.format())));
    }
    if target.degree() != Some(2) || target.coeff(0) != e.gamma() {
        return Err(Error::NotStable(format!("quotient {} is not a rank-2 module", target.format())));
    }
    let module = DrinfeldModule::new(k, target.coeff(1), target.coeff(2))?;
    let iso = Isogeny { source: e.clone(), target: module, u: h.u.clone() };
    debug_assert!(iso.verify().unwrap_or(false));
    Ok(iso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ext::ext_field;
    use crate::arith::place::parse_place;
    use crate::skew::parse_skew;

    fn field(q: u64, v: &str, m: usize) -> FieldExt {
        ext_field(&parse_place(q, v).unwrap(), m, true).unwrap()
    }

    #[test]
    fn phi_examples() {
        let k = field(3, "T", 1);
        let e = DrinfeldModule::new(&k, Fe(1), Fe(1)).unwrap();
        assert_eq!(e.phi_eval(&APoly::one()), SkewPoly::one(&k));
        assert_eq!(e.phi_eval(&APoly::t()).format(), "t + t^2");
        let k4 = field(2, "T^2+T+1", 1);
        for g in k4.elements() {
            for dl in k4.elements().skip(1) {
                let e = DrinfeldModule::new(&k4, g, dl).unwrap();
                let pv = e.phi_eval(k4.place().varpi());
                assert_eq!((pv.coeff(0), pv.coeff(1)), (Fe::ZERO, Fe::ZERO));
            }
        }
    }

    #[test]
    fn frobenius_verschiebung_examples() {
        let k = field(3, "T", 2);
        let (g, dl) = (Fe(5), Fe(7));
        let e = DrinfeldModule::new(&k, g, dl).unwrap();
        let (f, v) = frobenius_verschiebung(&e).unwrap();
        assert_eq!(f.u, SkewPoly::tau_pow(&k, 1));
        assert_eq!(v.v, SkewPoly::new(&k, vec![g, dl]));
        let ss = DrinfeldModule::new(&k, Fe(0), Fe(1)).unwrap();
        let (_, v) = frobenius_verschiebung(&ss).unwrap();
        assert_eq!((v.v.clone(), v.hasse()), (SkewPoly::tau_pow(&k, 1), Fe::ZERO));
        let k4 = field(2, "T^2+T+1", 1);
        let e = DrinfeldModule::new(&k4, Fe(2), Fe(3)).unwrap();
        let (f, v) = frobenius_verschiebung(&e).unwrap();
        assert_eq!(v.v.degree(), Some(2));
        assert_eq!(v.v.mul(&f.u).unwrap(), e.phi_eval(k4.place().varpi()));
    }

    #[test]
    fn away_from_p_is_rejected() {
        let place = parse_place(3, "T").unwrap();
        let k = ext_field(&place, 1, false).unwrap();
        let e = DrinfeldModule::new(&k, Fe(1), Fe(1)).unwrap();
        assert!(matches!(frobenius_verschiebung(&e), Err(Error::NotCharacteristicP(_))));
    }

    #[test]
    fn hasse_rescaling_law() {
        let k = field(2, "T^2+T+1", 2);
        let e = DrinfeldModule::new(&k, Fe(3), Fe(9)).unwrap();
        let qd = k.place().residue_size();
        for c in k.elements().skip(1) {
            let lhs = hasse_invariant(&e.rescale(&c).unwrap()).unwrap();
            // sigma_c is the coordinate change x -> c^{-1} x
            assert_eq!(lhs, k.mul(&k.pow(&c, qd - 1), &hasse_invariant(&e).unwrap()));
            assert_eq!(e.rescale(&c).unwrap().j_invariant(), e.j_invariant());
        }
        let k3 = field(3, "T", 1);
        assert_eq!(hasse_invariant(&DrinfeldModule::new(&k3, Fe(1), Fe(1)).unwrap()).unwrap(), Fe(1));
    }

    #[test]
    fn torsion_examples() {
        let k9 = field(3, "T", 2);
        let e = DrinfeldModule::new(&k9, Fe(1), Fe(1)).unwrap();
        let (ext, map) = k9.extend(1).unwrap();
        let t = torsion_points_in(&e, 1, &ext, &map).unwrap();
        assert_eq!((t.count, t.points_missing), (3, false));
        assert!(t.cyclic_generator.is_some());
        let ss = DrinfeldModule::new(&k9, Fe(0), Fe(1)).unwrap();
        assert_eq!(torsion_points(&ss, 1, 2).unwrap().count, 1);
        let k3 = field(3, "T", 1);
        let e3 = DrinfeldModule::new(&k3, Fe(1), Fe(1)).unwrap();
        let t = torsion_points(&e3, 1, 1).unwrap();
        assert_eq!((t.count, t.points_missing), (1, true));
    }

    #[test]
    fn canonical_and_quotients() {
        let k3 = field(3, "T", 1);
        let e = DrinfeldModule::new(&k3, Fe(1), Fe(1)).unwrap();
        let h1 = canonical_subgroup(&e, 1).unwrap();
        assert_eq!((h1.kind, h1.order), (SubgroupKind::Connected, 3));
        let h2 = canonical_subgroup(&e, 2).unwrap();
        assert_eq!((h2.u.clone(), h2.order), (SkewPoly::tau_pow(&k3, 2), 9));
        let ss = DrinfeldModule::new(&k3, Fe(0), Fe(1)).unwrap();
        assert!(matches!(canonical_subgroup(&ss, 1), Err(Error::Supersingular)));
        let et = SubgroupScheme::new(&e, parse_skew(&k3, "1 + t").unwrap()).unwrap();
        assert_eq!(et.kind, SubgroupKind::Etale);
        let iso = quotient_by_kernel(&e, &et).unwrap();
        assert_eq!(iso.target.phi_t().format(), "t + t^2");
        let f = quotient_by_kernel(&e, &h1).unwrap();
        assert_eq!(f.target, e.frobenius_twist());
        let k9 = field(3, "T", 2);
        let e9 = DrinfeldModule::new(&k9, Fe(4), Fe(5)).unwrap();
        let pv = e9.phi_eval(k9.place().varpi());
        let monic = pv.scale(&k9.inv(&pv.leading()).unwrap());
        let full = SubgroupScheme::new(&e9, monic).unwrap();
        let iso = quotient_by_kernel(&e9, &full).unwrap();
        assert_eq!(iso.target.j_invariant(), e9.j_invariant());
    }
}
