//! Derived values recomputed by brute force and frozen.

use std::collections::BTreeSet;

use drinhida::arith::apoly::APoly;
use drinhida::arith::artin::ArtinRing;
use drinhida::arith::ext::{ext_field, FieldExt};
use drinhida::arith::ff::Fe;
use drinhida::arith::local::LocalRing;
use drinhida::arith::place::parse_place;
use drinhida::arith::ring::Ring;
use drinhida::carlitz::{carlitz_traces, TruncSeriesRing};
use drinhida::drinfeld::{hasse_invariant, torsion_points, DrinfeldModule};
use drinhida::hecke::{enumerate_moduli, operator_matrix, build_correspondence, HeckeOp, Locus};
use drinhida::iwasawa::{determining_set, specialize, IwasawaRing, WeightChar};
use drinhida::serre_tate::{phi_er, DeformationDatum};

fn field(q: u64, v: &str, m: usize) -> FieldExt {
    ext_field(&parse_place(q, v).unwrap(), m, true).unwrap()
}

/// Roots of `phi(varpi)` found by evaluating at every element of the extension.
fn brute_torsion(e: &DrinfeldModule<FieldExt>, degree: usize) -> u64 {
    let (big, map) = e.ring().extend(degree).unwrap();
    let phi = e.base_change(&big, &map).phi_eval(e.ring().place().varpi());
    big.elements().filter(|x| phi.eval(x) == Fe::ZERO).count() as u64
}

#[test]
fn torsion_counts_match_exhaustive_search() {
    for (q, v, split) in [(3, "T", 2), (2, "T^2+T+1", 3), (2, "T", 1), (3, "T+1", 2)] {
        let k = field(q, v, 1);
        for g in k.elements() {
            for delta in k.elements().skip(1) {
                let e = DrinfeldModule::new(&k, g, delta).unwrap();
                assert_eq!(torsion_points(&e, 1, split).unwrap().count, brute_torsion(&e, split), "q = {q}, varpi = {v}");
            }
        }
    }
}

#[test]
fn ordinarity_from_the_tau_d_coefficient() {
    // phi(varpi) = V tau^d, so the coefficient of tau^d in phi(varpi) is the Hasse invariant
    for (q, v, m) in [(3, "T", 2), (2, "T^2+T+1", 2)] {
        let k = field(q, v, m);
        let d = k.place().d();
        let space = enumerate_moduli(k.place(), m).unwrap();
        let mut ordinary = 0;
        for p in space.points() {
            let a0 = p.rep.phi_eval(k.place().varpi()).coeff(d);
            assert_eq!(a0, hasse_invariant(&p.rep).unwrap());
            assert_eq!(a0 != Fe::ZERO, p.ordinary);
            ordinary += usize::from(p.ordinary);
        }
        let frozen = if q == 3 { (8, 9) } else { (15, 16) };
        assert_eq!((ordinary, space.points().len()), frozen, "q = {q}");
    }
}

#[test]
fn hecke_frozen_values() {
    let c = build_correspondence(&enumerate_moduli(&parse_place(3, "T").unwrap(), 1).unwrap()).unwrap();
    let g = c.record();
    assert_eq!(g.nodes.iter().map(|n| n.j.as_str()).collect::<Vec<_>>(), ["0", "1", "2"]);
    assert_eq!(g.edges.len(), 5);
    let u = operator_matrix(&c, 2, HeckeOp::U, Locus::Ordinary).unwrap();
    assert_eq!(u.index, [Fe(1), Fe(2)]);
    // over F_3 the etale quotient of (1, 1/j) is itself, with Lie coefficient 1
    assert_eq!(u.matrix.to_rows(), [[Fe(1), Fe(0)], [Fe(0), Fe(1)]]);
}

#[test]
fn trace_of_x_squared_by_hand() {
    // over F_3[eps]/eps^2 with Y = eps X + X^3 and basis 1, X, X^2:
    // X^2 * X = Y - eps X and X^2 * X^2 = X Y - eps X^2, so tr(X^2) = -2 eps
    let place = parse_place(3, "T").unwrap();
    let k = field(3, "T", 1);
    let r = ArtinRing::new(&k, 2).unwrap();
    let traces = carlitz_traces(&place, &TruncSeriesRing::new(&r, 10)).unwrap();
    let minus_two_eps = r.mul(&r.from_int(-2), &r.eps());
    assert_eq!(traces[2], vec![minus_two_eps.clone()]);
    assert_eq!(minus_two_eps, r.eps());
}

#[test]
fn serre_tate_values_by_direct_expansion() {
    let k = field(3, "T", 2);
    let r = ArtinRing::new(&k, 2).unwrap();
    let e0 = DrinfeldModule::new(&k, Fe::ONE, Fe::ONE).unwrap();
    let datum = DeformationDatum::constant_lift(e0, &r, 1).unwrap();
    // [T](x) = eps x + x^3 + x^9 on every lift x + eps y
    for x in datum.torsion().unwrap() {
        for y in k.elements() {
            let lift = r.add(&r.constant(x), &r.mul(&r.eps(), &r.constant(y)));
            let direct = r.add(&r.add(&r.mul(&r.eps(), &lift), &r.pow(&lift, 3)), &r.pow(&lift, 9));
            let shift = r.mul(&r.eps(), &r.constant(y));
            assert_eq!(phi_er(&datum, x, Some(&shift)).unwrap(), direct);
            assert_eq!(direct, r.mul(&r.eps(), &r.constant(x)));
        }
    }
}

#[test]
fn specialization_of_group_likes() {
    for m in 1..=3 {
        let place = parse_place(3, "T").unwrap();
        let ring = IwasawaRing::new(&place, m).unwrap();
        let l = LocalRing::new(&place, m).unwrap();
        for t in l.elements().into_iter().filter(|t| l.is_unit(t)) {
            let x = ring.dirac(&t).unwrap();
            for k in -3..=6 {
                assert_eq!(specialize(&ring, &x, WeightChar::Algebraic(k)), l.pow_signed(&t, k).unwrap());
            }
        }
    }
}

/// Size of the `A/varpi^m`-span of `gens` by closure.
fn span_size(l: &LocalRing, gens: &[Vec<APoly>]) -> usize {
    let scalars = l.elements();
    let mut span: BTreeSet<Vec<APoly>> = BTreeSet::new();
    span.insert(vec![APoly::zero(); gens.first().map_or(0, Vec::len)]);
    for g in gens {
        let current: Vec<Vec<APoly>> = span.iter().cloned().collect();
        for v in current {
            for c in &scalars {
                span.insert(v.iter().zip(g).map(|(a, b)| l.add(a, &l.mul(c, b))).collect());
            }
        }
    }
    span.len()
}

#[test]
fn determining_sets_by_closure() {
    let place = parse_place(3, "T").unwrap();
    let mut sizes = Vec::new();
    for m in 1..=3 {
        let ds = determining_set(&IwasawaRing::new(&place, m).unwrap());
        sizes.push((ds.weights.len(), ds.span_log));
    }
    assert_eq!(sizes, [(2, 2), (4, 6), (6, 12)]);
    // closure is only affordable at the first two levels
    for m in 1..=2 {
        let ring = IwasawaRing::new(&place, m).unwrap();
        let l = LocalRing::new(&place, m).unwrap();
        let ds = determining_set(&ring);
        let units: Vec<APoly> = l.elements().into_iter().filter(|t| l.is_unit(t)).collect();
        let eval = |ks: &[i64]| -> Vec<Vec<APoly>> {
            units.iter().map(|t| ks.iter().map(|&k| l.pow_signed(t, k).unwrap()).collect()).collect()
        };
        let all: Vec<i64> = (0..ds.period as i64).collect();
        let full = span_size(&l, &eval(&all));
        assert_eq!(full, 3usize.pow(ds.span_log as u32), "m = {m}");
        assert_eq!(span_size(&l, &eval(&ds.weights)), full, "m = {m}");
    }
}
