//! Lifting torsion points to Artinian deformations and reading off `phi_{E,R}`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::apoly::APoly;
use crate::arith::artin::{ArtinElem, ArtinRing};
use crate::arith::ext::FieldExt;
use crate::arith::ff::Fe;
use crate::arith::ring::Ring;
use crate::drinfeld::{is_ordinary, DrinfeldModule};
use crate::error::{Error, Result};
use crate::skew::kernel_points;

/// Largest torsion depth handled.
pub const MAX_DEPTH: usize = 2;
/// Largest ring handled, `9^4`.
pub const MAX_RING_SIZE: u64 = 6561;
const EXHAUSTIVE_LIMIT: usize = 4096;
const SAMPLES: usize = 256;

pub const TRIVIALIZATION: &str =
    "dual datum trivialised by the generator 1; connected torsion identified with the maximal ideal";

/// An ordinary module `E0` over a finite field with a deformation `E` over `R`.
#[derive(Clone, Debug)]
pub struct DeformationDatum {
    e0: DrinfeldModule<FieldExt>,
    e: DrinfeldModule<ArtinRing>,
    n: usize,
}

impl DeformationDatum {
    pub fn new(e0: DrinfeldModule<FieldExt>, e: DrinfeldModule<ArtinRing>, n: usize) -> Result<Self> {
        let r = e.ring();
        if n == 0 || n > MAX_DEPTH {
            return Err(Error::Precondition(format!("torsion depth {n} outside 1..={MAX_DEPTH}")));
        }
        if n + 1 < r.nilpotency() {
            return Err(Error::Precondition(format!(
                "varpi^{} is nonzero in a ring with eps^{} = 0",
                n + 1,
                r.nilpotency()
            )));
        }
        if r.size() > MAX_RING_SIZE {
            return Err(Error::Precondition(format!("ring of size {} exceeds {MAX_RING_SIZE}", r.size())));
        }
        if r.residue() != e0.ring() {
            return Err(Error::RingMismatch);
        }
        if r.residue_of(e.g()) != *e0.g() || r.residue_of(e.delta()) != *e0.delta() {
            return Err(Error::InvalidParameter("E does not reduce to E0".into()));
        }
        if !is_ordinary(&e0)? {
            return Err(Error::Supersingular);
        }
        Ok(DeformationDatum { e0, e, n })
    }

    /// `E0 (x) R`, the coefficients lifted as constants.
    pub fn constant_lift(e0: DrinfeldModule<FieldExt>, ring: &ArtinRing, n: usize) -> Result<Self> {
        let e = DrinfeldModule::new(ring, ring.constant(*e0.g()), ring.constant(*e0.delta()))?;
        DeformationDatum::new(e0, e, n)
    }

    pub fn special_fibre(&self) -> &DrinfeldModule<FieldExt> {
        &self.e0
    }

    pub fn deformation(&self) -> &DrinfeldModule<ArtinRing> {
        &self.e
    }

    pub fn ring(&self) -> &ArtinRing {
        self.e.ring()
    }

    pub fn depth(&self) -> usize {
        self.n
    }

    /// `E0[p^n]` over the residue field, in encoding order.
    pub fn torsion(&self) -> Result<Vec<Fe>> {
        let k = self.e0.ring();
        let ker = kernel_points(&self.e0.phi_eval(&k.place().varpi_pow(self.n)))?;
        ker.points.ok_or_else(|| Error::Precondition("too many torsion points to list".into()))
    }
}

/// `phi_E(varpi^n)` evaluated at the lift `x + perturbation` of `x`.
pub fn phi_er(datum: &DeformationDatum, x: Fe, perturbation: Option<&ArtinElem>) -> Result<ArtinElem> {
    let k = datum.e0.ring();
    let r = datum.ring();
    let varpi_n = k.place().varpi_pow(datum.n);
    if datum.e0.phi_eval(&varpi_n).eval(&x) != Fe::ZERO {
        return Err(Error::InvalidParameter(format!("{} is not killed by varpi^{}", k.format(x), datum.n)));
    }
    let mut lift = r.constant(x);
    if let Some(p) = perturbation {
        if !r.in_maximal_ideal(p) {
            return Err(Error::InvalidParameter("perturbation is not in the maximal ideal".into()));
        }
        lift = r.add(&lift, p);
    }
    Ok(datum.e.phi_eval(&varpi_n).eval(&lift))
}

#[derive(Clone, Debug, Serialize)]
pub struct PointValue {
    pub x: String,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub q: u64,
    pub varpi: String,
    pub residue_size: u64,
    pub nilpotency: usize,
    pub depth: usize,
    pub trivialization: &'static str,
    pub values: Vec<PointValue>,
    pub perturbations: usize,
    pub exhaustive: bool,
    pub in_maximal_ideal: bool,
    pub additive: bool,
    pub linear: bool,
    pub violations: Vec<String>,
    pub passed: bool,
}

/// Checks that `phi_{E,R}` ignores the choice of lift, lands in the maximal ideal,
/// and is additive and `A`-linear on `E0[p^n]`.
pub fn lift_independence_check(datum: &DeformationDatum) -> Result<LiftReport> {
    let r = datum.ring();
    let k = datum.e0.ring();
    let points = datum.torsion()?;
    let mut perturbations = r.maximal_ideal();
    let exhaustive = perturbations.len() <= EXHAUSTIVE_LIMIT;
    if !exhaustive {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5e77e);
        perturbations.shuffle(&mut rng);
        perturbations.truncate(SAMPLES);
        perturbations.insert(0, r.zero());
    }

    let per_point: Vec<Result<(ArtinElem, Vec<String>)>> = std::thread::scope(|s| {
        let handles: Vec<_> = points
            .iter()
            .map(|&x| {
                let perturbations = &perturbations;
                s.spawn(move || -> Result<(ArtinElem, Vec<String>)> {
                    let base = phi_er(datum, x, None)?;
                    let mut bad = Vec::new();
                    for p in perturbations {
                        let v = phi_er(datum, x, Some(p))?;
                        if v != base {
                            bad.push(format!(
                                "x = {}, lift shift {}: {} != {}",
                                k.format(x),
                                r.fmt_elem(p),
                                r.fmt_elem(&v),
                                r.fmt_elem(&base)
                            ));
                        }
                    }
                    Ok((base, bad))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });

    let mut values = Vec::with_capacity(points.len());
    let mut violations = Vec::new();
    for res in per_point {
        let (v, bad) = res?;
        values.push(v);
        violations.extend(bad);
    }
    let in_ideal = values.iter().all(|v| r.in_maximal_ideal(v));
    if !in_ideal {
        violations.push("a value lies outside the maximal ideal".into());
    }

    let index = |x: Fe| points.binary_search(&x).ok();
    let mut additive = true;
    for (i, &x) in points.iter().enumerate() {
        for (j, &y) in points.iter().enumerate() {
            let Some(s) = index(k.add(&x, &y)) else {
                additive = false;
                continue;
            };
            if values[s] != r.add(&values[i], &values[j]) {
                additive = false;
                violations.push(format!("additivity fails at {} + {}", k.format(x), k.format(y)));
            }
        }
    }

    let mut linear = true;
    for a in [APoly::one(), APoly::t()] {
        let act0 = datum.e0.phi_eval(&a);
        let act = datum.e.phi_eval(&a);
        for (i, &x) in points.iter().enumerate() {
            let Some(ax) = index(act0.eval(&x)) else {
                linear = false;
                continue;
            };
            if values[ax] != act.eval(&values[i]) {
                linear = false;
                violations.push(format!("A-linearity fails for a = {} at {}", k.place().a().format(&a), k.format(x)));
            }
        }
    }

    Ok(LiftReport {
        q: k.place().q(),
        varpi: k.place().varpi_text(),
        residue_size: k.size(),
        nilpotency: r.nilpotency(),
        depth: datum.n,
        trivialization: TRIVIALIZATION,
        values: points
            .iter()
            .zip(&values)
            .map(|(x, v)| PointValue { x: k.format(*x), value: r.fmt_elem(v) })
            .collect(),
        perturbations: perturbations.len(),
        exhaustive,
        in_maximal_ideal: in_ideal,
        additive,
        linear,
        passed: violations.is_empty(),
        violations,
    })
}
