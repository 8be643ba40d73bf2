//! The acceptance battery: eleven checks over small places, shared by the CLI and the tests.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::apoly::{APoly, PolyRing};
use crate::arith::artin::ArtinRing;
use crate::arith::ext::ext_field;
use crate::arith::ff::Fe;
use crate::arith::matrix::{self, Matrix};
use crate::arith::place::{make_place, parse_place, PrimePlace};
use crate::arith::ring::Ring;
use crate::carlitz::{carlitz_coefficient_profile, carlitz_traces, trace_of_carlitz_pullback, TruncSeriesRing};
use crate::drinfeld::{frobenius_verschiebung, hasse_invariant, torsion_points, DrinfeldModule};
use crate::error::Result;
use crate::hecke::{build_correspondence, enumerate_moduli, operator_matrix, structure_check, Correspondence, HeckeOp, Locus};
use crate::iwasawa::{
    determining_set, duality_twist, filtration, filtration_step, iota, max_index, specialize, IwasawaRing, WeightChar,
    MAX_LEVEL,
};
use crate::projector::{
    check_projector, control_check, exactness_check, hecke_tower, local_finiteness_check, random_tower,
    tower_projector,
};
use crate::serre_tate::{lift_independence_check, DeformationDatum};

/// Time budget for the whole battery.
pub const SUITE_BUDGET: Duration = Duration::from_secs(120);
pub const HECKE_WEIGHTS: [i64; 5] = [-2, 0, 2, 3, 5];
pub const IWASAWA_WEIGHTS: std::ops::RangeInclusive<i64> = -3..=6;

/// A place together with the largest extension degree to enumerate over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScopePlace {
    pub q: u64,
    pub varpi: String,
    pub max_m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Scope {
    pub places: Vec<ScopePlace>,
}

impl Default for Scope {
    /// `(3, T)` up to degree 3 and `(2, T^2+T+1)` up to degree 2.
    fn default() -> Self {
        Scope {
            places: vec![
                ScopePlace { q: 3, varpi: "T".into(), max_m: 3 },
                ScopePlace { q: 2, varpi: "T^2+T+1".into(), max_m: 2 },
            ],
        }
    }
}

impl Scope {
    pub fn single(q: u64, varpi: &str, max_m: usize) -> Self {
        Scope { places: vec![ScopePlace { q, varpi: varpi.into(), max_m }] }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: usize,
    pub label: &'static str,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Outcome of one criterion before timing: `Ok(detail)` or `Err(reason)`.
type Outcome = std::result::Result<String, String>;

fn fail(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn timed(id: usize, label: &'static str, f: impl FnOnce() -> Outcome) -> CheckReport {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match out {
        Ok(detail) => CheckReport { id, label, passed: true, detail, elapsed },
        Err(detail) => CheckReport { id, label, passed: false, detail, elapsed },
    }
}

/// Monic irreducible polynomials of degree `1..=max_deg` over `F_q`, as places.
pub fn places_up_to(q: u64, max_deg: usize) -> Result<Vec<PrimePlace>> {
    let a = PolyRing::over_q(q)?;
    let mut out = Vec::new();
    for deg in 1..=max_deg {
        for f in APoly::monic_of_degree(a.fq(), deg) {
            if a.is_irreducible(&f) {
                out.push(make_place(&a, f)?);
            }
        }
    }
    Ok(out)
}

/// All `(g, Delta)` with `Delta != 0` over the residue field of `place`.
fn all_modules(place: &PrimePlace) -> Result<Vec<DrinfeldModule<crate::arith::ext::FieldExt>>> {
    let k = ext_field(place, 1, true)?;
    let mut out = Vec::new();
    for g in k.elements() {
        for delta in k.elements().filter(|x| *x != Fe::ZERO) {
            out.push(DrinfeldModule::new(&k, g, delta)?);
        }
    }
    Ok(out)
}

pub fn carlitz_profiles() -> Outcome {
    let mut count = 0;
    for q in [2, 3, 4] {
        for place in lift(places_up_to(q, 3))? {
            lift(carlitz_coefficient_profile(&place))?;
            count += 1;
        }
    }
    Ok(format!("{count} places"))
}

pub fn frobenius_factorization() -> Outcome {
    let mut count = 0;
    for q in [2, 3] {
        for place in lift(places_up_to(q, 2))? {
            let d = place.d();
            for e in lift(all_modules(&place))? {
                let pv = e.phi_eval(place.varpi());
                fail((0..d).all(|i| pv.coeff(i) == Fe::ZERO), || {
                    format!("q = {q}, varpi = {}: low coefficients of {} do not vanish", place.varpi_text(), pv.format())
                })?;
                let (f, v) = lift(frobenius_verschiebung(&e))?;
                fail(lift(v.v.mul(&f.u))? == pv, || format!("V F differs from phi(varpi) = {}", pv.format()))?;
                count += 1;
            }
        }
    }
    Ok(format!("{count} modules"))
}

pub fn torsion_dichotomy() -> Outcome {
    let (mut ordinary, mut supersingular) = (0, 0);
    for q in [2, 3] {
        for place in lift(places_up_to(q, 2))? {
            let qd = place.residue_size();
            let split = (qd - 1) as usize;
            for e in lift(all_modules(&place))? {
                let a0 = lift(hasse_invariant(&e))?;
                let t = lift(torsion_points(&e, 1, split))?;
                let expected = if a0 != Fe::ZERO { qd } else { 1 };
                fail(t.count == expected, || {
                    format!(
                        "q = {q}, varpi = {}, g = {}, Delta = {}: {} points, expected {expected}",
                        place.varpi_text(),
                        e.ring().format(*e.g()),
                        e.ring().format(*e.delta()),
                        t.count
                    )
                })?;
                if a0 != Fe::ZERO {
                    ordinary += 1;
                } else {
                    supersingular += 1;
                }
            }
        }
    }
    Ok(format!("{ordinary} ordinary, {supersingular} supersingular"))
}

pub fn trace_divisibility() -> Outcome {
    let mut out = Vec::new();
    for (q, v) in [(3, "T"), (2, "T^2+T+1")] {
        let place = lift(parse_place(q, v))?;
        let k = lift(ext_field(&place, 1, true))?;
        let r = lift(ArtinRing::new(&k, 2))?;
        let n = (place.residue_size() * place.residue_size() + 1) as usize;
        let ring = TruncSeriesRing::new(&r, n);
        let rep = lift(trace_of_carlitz_pullback(&place, &ring))?;
        if q == 3 {
            // -2 varpi, with varpi = eps in the coefficient ring
            let minus_two_varpi = r.mul(&r.from_int(-2), &r.eps());
            let traces = lift(carlitz_traces(&place, &ring))?;
            fail(traces[2] == vec![minus_two_varpi], || format!("trace of X^2 is {:?}", rep.traces[2]))?;
        }
        out.push(format!("({q}, {v}) rank {}", rep.rank));
    }
    Ok(out.join(", "))
}

pub fn serre_tate_nine() -> Outcome {
    let place = lift(parse_place(3, "T"))?;
    let k = lift(ext_field(&place, 2, true))?;
    let r = lift(ArtinRing::new(&k, 2))?;
    let e0 = lift(DrinfeldModule::new(&k, Fe::ONE, Fe::ONE))?;
    let datum = lift(DeformationDatum::constant_lift(e0, &r, 1))?;
    let rep = lift(lift_independence_check(&datum))?;
    fail(rep.passed && rep.exhaustive, || format!("violations: {:?}", rep.violations))?;
    fail(rep.values.len() == 3, || format!("{} torsion points", rep.values.len()))?;
    for x in lift(datum.torsion())? {
        let want = r.mul(&r.eps(), &r.constant(x));
        let got = lift(crate::serre_tate::phi_er(&datum, x, None))?;
        fail(got == want, || format!("value at {} is {}", k.format(x), r.fmt_elem(&got)))?;
    }
    Ok(format!("3 points x {} lifts, phi(x) = eps x", rep.perturbations))
}

/// Correspondences for every place in scope and every degree up to its maximum.
pub fn correspondences(scope: &Scope) -> Result<Vec<Correspondence>> {
    let mut out = Vec::new();
    for sp in &scope.places {
        let place = parse_place(sp.q, &sp.varpi)?;
        for m in 1..=sp.max_m {
            out.push(build_correspondence(&enumerate_moduli(&place, m)?)?);
        }
    }
    Ok(out)
}

fn corr_name(c: &Correspondence) -> String {
    format!("({}, {}, m = {})", c.space.place().q(), c.space.place().varpi_text(), c.space.field().m())
}

pub fn hecke_structure(corrs: &[Correspondence]) -> Outcome {
    let mut points = 0;
    for c in corrs {
        let rep = lift(structure_check(c))?;
        fail(rep.passed, || format!("{}: {:?}", corr_name(c), rep.failures))?;
        points += c.space.points().len();
    }
    Ok(format!("{} spaces, {points} points", corrs.len()))
}

pub fn u_ordinarity(corrs: &[Correspondence]) -> Outcome {
    let mut count = 0;
    for c in corrs {
        for k in HECKE_WEIGHTS {
            let u = lift(operator_matrix(c, k, HeckeOp::U, Locus::Ordinary))?;
            let det = lift(u.determinant())?;
            fail(det != Fe::ZERO, || format!("{} k = {k}: U is singular", corr_name(c)))?;
            let e = lift(crate::projector::ordinary_projector(&u.field, &u.matrix))?.e;
            fail(e == matrix::identity(&u.field, u.matrix.rows()), || {
                format!("{} k = {k}: e(U) is not the identity", corr_name(c))
            })?;
            count += 1;
        }
    }
    Ok(format!("{count} matrices"))
}

pub fn iwasawa_algebra(scope: &Scope) -> Outcome {
    for s in 1..=4 {
        for r in 0..=max_index(s).min(12) {
            let st = lift(filtration_step(s, r))?;
            fail(st.decreasing && st.killed_by_maximal_ideal, || format!("filtration fails at s = {s}, r = {r}"))?;
        }
    }
    let j2 = lift(filtration(3, 2))?;
    let j3 = lift(filtration(3, 5))?;
    let dim = lift(j2.quotient_basis(&j3))?.len();
    fail(dim == 11, || format!("J2/J3 has dimension {dim}"))?;

    let mut rng = ChaCha8Rng::seed_from_u64(0x1a7b);
    let mut sizes = Vec::new();
    for sp in &scope.places {
        let place = lift(parse_place(sp.q, &sp.varpi))?;
        for m in 1..=MAX_LEVEL {
            let ring = lift(IwasawaRing::new(&place, m))?;
            for _ in 0..100 {
                let x = ring.random(&mut rng);
                let f = iota(&ring, &x);
                for k in IWASAWA_WEIGHTS {
                    fail(specialize(&ring, &x, WeightChar::Algebraic(k)) == *f.at(k), || {
                        format!("({}, {}, m = {m}) specialize differs from iota at k = {k}", sp.q, sp.varpi)
                    })?;
                }
            }
            let ds = determining_set(&ring);
            fail(ds.determines, || format!("({}, {}, m = {m}) no determining set", sp.q, sp.varpi))?;
            sizes.push(ds.weights.len().to_string());
        }
    }
    Ok(format!("J2/J3 dim 11, determining set sizes [{}]", sizes.join(", ")))
}

pub fn projector_towers(corrs: &[Correspondence]) -> Outcome {
    // worked example over A/p^2
    let place = lift(parse_place(3, "T"))?;
    let a = place.a();
    let r = lift(crate::arith::local::LocalRing::new(&place, 2))?;
    let p = |s: &str| a.parse(s).expect("literal");
    let t = lift(Matrix::from_rows(vec![vec![p("1"), p("1")], vec![p("0"), p("T")]]))?;
    let (proj, chk) = lift(check_projector(&r, &t))?;
    let want = lift(Matrix::from_rows(vec![vec![p("1"), p("1+T")], vec![p("0"), p("0")]]))?;
    fail(proj.e == want && chk.passed(), || "worked example".to_string())?;

    let mut hecke = 0;
    for c in corrs {
        let top_m = c.space.field().m();
        for bottom in (1..=top_m).filter(|b| top_m % b == 0) {
            for (op, locus) in [(HeckeOp::U, Locus::Ordinary), (HeckeOp::F, Locus::Ordinary), (HeckeOp::T, Locus::All)] {
                let tower = lift(hecke_tower(c, bottom, op, locus))?;
                let (es, rep) = lift(tower_projector(&tower))?;
                fail(rep.passed, || format!("{} bottom {bottom} {op:?}: {:?}", corr_name(c), rep))?;
                if op == HeckeOp::U {
                    for (lvl, e) in tower.levels().iter().zip(&es) {
                        fail(*e == matrix::identity(&lvl.ring, e.rows()), || {
                            format!("{} bottom {bottom}: e(U) is not the identity", corr_name(c))
                        })?;
                    }
                }
                let fin = lift(local_finiteness_check(&tower))?;
                fail(fin.iter().all(|l| l.stable), || format!("{} bottom {bottom} {op:?}: unstable kernel", corr_name(c)))?;
                hecke += 1;
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x70e4);
    for i in 0..100 {
        let tower = lift(random_tower(&mut rng, 3, "T", 3))?;
        let (_, rep) = lift(tower_projector(&tower))?;
        fail(rep.passed, || format!("random tower {i}: {rep:?}"))?;
        fail(lift(exactness_check(&tower))?, || format!("random tower {i}: exactness"))?;
    }

    let ring = lift(IwasawaRing::new(&place, 2))?;
    let s = |x: &str| ring.scalar(&p(x));
    let mut ops = vec![
        lift(Matrix::from_rows(vec![vec![lift(ring.dirac(&p("1+T")))?]]))?,
        lift(Matrix::from_rows(vec![vec![s("1"), s("1")], vec![s("0"), s("T")]]))?,
        lift(Matrix::from_rows(vec![vec![s("T"), s("1")], vec![s("0"), s("0")]]))?,
    ];
    for _ in 0..10 {
        ops.push(Matrix::from_fn(2, 2, |_, _| ring.random(&mut rng)));
    }
    for (i, t) in ops.iter().enumerate() {
        for k in IWASAWA_WEIGHTS {
            let rep = lift(control_check(&ring, t, WeightChar::Algebraic(k)))?;
            fail(rep.equal, || format!("control fails for operator {i} at k = {k}: {:?}", rep.defect))?;
        }
    }
    Ok(format!("worked example, {hecke} Hecke towers, 100 random towers, {} control operators", ops.len()))
}

pub fn duality_twist_check(scope: &Scope) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd0a1);
    for sp in &scope.places {
        let place = lift(parse_place(sp.q, &sp.varpi))?;
        for m in 1..=MAX_LEVEL {
            let ring = lift(IwasawaRing::new(&place, m))?;
            for _ in 0..50 {
                let x = ring.random(&mut rng);
                let d = duality_twist(&ring, &x);
                fail(duality_twist(&ring, &d) == x, || format!("({}, {}, m = {m}): twist is not an involution", sp.q, sp.varpi))?;
                for k in IWASAWA_WEIGHTS {
                    let lhs = specialize(&ring, &d, WeightChar::Algebraic(k));
                    let rhs = specialize(&ring, &x, WeightChar::Algebraic(2 - k));
                    fail(lhs == rhs, || format!("({}, {}, m = {m}): twist fails at k = {k}", sp.q, sp.varpi))?;
                }
            }
        }
    }
    Ok(format!("{} places, levels 1..={MAX_LEVEL}, 50 elements each", scope.places.len()))
}

/// Runs all eleven checks. Place-dependent checks use `scope`; the exhaustive ones
/// use their own fixed ranges.
pub fn run_suite(scope: &Scope) -> Vec<CheckReport> {
    let start = Instant::now();
    let mut reports = vec![
        timed(1, crate::carlitz::PROFILE_LABEL, carlitz_profiles),
        timed(2, crate::drinfeld::VANISHING_LABEL, frobenius_factorization),
        timed(3, "torsion-dichotomy", torsion_dichotomy),
        timed(4, crate::carlitz::TRACE_LABEL, trace_divisibility),
        timed(5, "serre-tate-lift-independence", serre_tate_nine),
    ];
    let mut corrs = Vec::new();
    reports.push(timed(6, crate::hecke::STRUCTURE_LABEL, || {
        corrs = lift(correspondences(scope))?;
        hecke_structure(&corrs)
    }));
    reports.push(timed(7, "u-ordinarity", || u_ordinarity(&corrs)));
    reports.push(timed(8, "iwasawa-algebra", || iwasawa_algebra(scope)));
    reports.push(timed(9, crate::projector::PROJECTOR_LABEL, || projector_towers(&corrs)));
    reports.push(timed(10, "duality-weight-twist", || duality_twist_check(scope)));
    let all = reports.iter().all(|r| r.passed);
    let total = start.elapsed();
    reports.push(timed(11, "end-to-end", || {
        fail(all, || "an earlier check failed".into())?;
        fail(total < SUITE_BUDGET, || format!("battery exceeded {}s", SUITE_BUDGET.as_secs()))?;
        Ok(format!("{} checks", 10))
    }));
    reports
}

/// The pass/fail table; timings only when asked, so the default output is reproducible.
pub fn format_table(reports: &[CheckReport], timings: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed { "PASS" } else { "FAIL" };
        let time = if timings { format!(" [{:.3}s]", r.elapsed.as_secs_f64()) } else { String::new() };
        out.push_str(&format!("{:>2} {status} {}{time}: {}\n", r.id, r.label, r.detail));
    }
    out
}
