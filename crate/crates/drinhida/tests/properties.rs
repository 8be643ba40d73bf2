//! Invariants checked on random inputs.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use drinhida::arith::apoly::{APoly, PolyRing};
use drinhida::arith::ext::{ext_field, FieldExt};
use drinhida::arith::ff::Fe;
use drinhida::arith::local::LocalRing;
use drinhida::arith::matrix::{self, Matrix};
use drinhida::arith::place::parse_place;
use drinhida::arith::ring::Ring;
use drinhida::carlitz::carlitz_eval;
use drinhida::drinfeld::{hasse_invariant, DrinfeldModule};
use drinhida::iwasawa::{duality_twist, filtration_step, iota_eval, max_index, specialize, IwasawaRing, WeightChar};
use drinhida::projector::check_projector;
use drinhida::skew::SkewPoly;

fn nine() -> FieldExt {
    ext_field(&parse_place(3, "T").unwrap(), 2, true).unwrap()
}

fn skew(k: &FieldExt, c: &[u64]) -> SkewPoly<FieldExt> {
    SkewPoly::new(k, c.iter().map(|x| Fe(x % k.size())).collect())
}

fn apoly(q: u64, c: &[u64]) -> APoly {
    APoly::new(c.iter().map(|x| Fe(x % q)).collect())
}

fn iwasawa(level: usize) -> IwasawaRing {
    IwasawaRing::new(&parse_place(3, "T").unwrap(), level).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skew_multiplication_is_associative(
        a in prop::collection::vec(0u64..9, 0..5),
        b in prop::collection::vec(0u64..9, 0..5),
        c in prop::collection::vec(0u64..9, 0..5),
    ) {
        let k = nine();
        let (a, b, c) = (skew(&k, &a), skew(&k, &b), skew(&k, &c));
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn skew_evaluation_composes(
        a in prop::collection::vec(0u64..9, 0..4),
        b in prop::collection::vec(0u64..9, 0..4),
        x in 0u64..9,
    ) {
        let k = nine();
        let (a, b) = (skew(&k, &a), skew(&k, &b));
        prop_assert_eq!(a.mul(&b).unwrap().eval(&Fe(x)), a.eval(&b.eval(&Fe(x))));
    }

    #[test]
    fn right_division_reconstructs(
        a in prop::collection::vec(0u64..9, 0..7),
        mut b in prop::collection::vec(0u64..9, 1..4),
    ) {
        let k = nine();
        *b.last_mut().unwrap() = 1 + b.last().unwrap() % 8;
        let (a, b) = (skew(&k, &a), skew(&k, &b));
        let (quot, rem) = a.right_divide(&b).unwrap();
        prop_assert!(rem.degree().map_or(true, |r| r < b.degree().unwrap()));
        prop_assert_eq!(quot.mul(&b).unwrap().add(&rem).unwrap(), a);
    }

    #[test]
    fn carlitz_is_multiplicative(a in prop::collection::vec(0u64..3, 0..4), b in prop::collection::vec(0u64..3, 0..4)) {
        let ring = PolyRing::over_q(3).unwrap();
        let (a, b) = (apoly(3, &a), apoly(3, &b));
        let ab = ring.mul(&a, &b);
        prop_assert_eq!(carlitz_eval(&ab, &ring), carlitz_eval(&a, &ring).mul(&carlitz_eval(&b, &ring)).unwrap());
    }

    #[test]
    fn drinfeld_action_is_a_ring_map(
        g in 0u64..9, delta in 1u64..9,
        a in prop::collection::vec(0u64..3, 0..3),
        b in prop::collection::vec(0u64..3, 0..3),
    ) {
        let k = nine();
        let e = DrinfeldModule::new(&k, Fe(g), Fe(delta)).unwrap();
        let ring = k.place().a().clone();
        let (a, b) = (apoly(3, &a), apoly(3, &b));
        prop_assert_eq!(e.phi_eval(&ring.mul(&a, &b)), e.phi_eval(&a).mul(&e.phi_eval(&b)).unwrap());
        prop_assert_eq!(e.phi_eval(&ring.add(&a, &b)), e.phi_eval(&a).add(&e.phi_eval(&b)).unwrap());
    }

    #[test]
    fn hasse_rescales_by_units(g in 0u64..9, delta in 1u64..9, c in 1u64..9) {
        let k = nine();
        let e = DrinfeldModule::new(&k, Fe(g), Fe(delta)).unwrap();
        let c = Fe(c);
        let scaled = e.rescale(&c).unwrap();
        let qd = k.place().residue_size();
        prop_assert_eq!(hasse_invariant(&scaled).unwrap(), k.mul(&k.pow(&c, qd - 1), &hasse_invariant(&e).unwrap()));
        prop_assert_eq!(scaled.j_invariant(), e.j_invariant());
    }

    #[test]
    fn specialization_is_a_ring_map(seed in any::<u64>(), level in 1usize..=3, k in -3i64..=6) {
        let r = iwasawa(level);
        let l = r.coefficients();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (r.random(&mut rng), r.random(&mut rng));
        let w = WeightChar::Algebraic(k);
        let (sx, sy) = (specialize(&r, &x, w), specialize(&r, &y, w));
        prop_assert_eq!(specialize(&r, &r.mul(&x, &y), w), l.mul(&sx, &sy));
        prop_assert_eq!(specialize(&r, &r.add(&x, &y), w), l.add(&sx, &sy));
        prop_assert_eq!(specialize(&r, &r.one(), w), l.one());
        prop_assert_eq!(iota_eval(&r, &x, k), sx);
    }

    #[test]
    fn reduction_commutes_with_everything(seed in any::<u64>(), k in -3i64..=6) {
        let (top, bottom) = (iwasawa(3), iwasawa(2));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (top.random(&mut rng), top.random(&mut rng));
        let red = |z: &drinhida::iwasawa::IwasawaElement| top.reduce_to(z, &bottom).unwrap();
        prop_assert_eq!(red(&top.mul(&x, &y)), bottom.mul(&red(&x), &red(&y)));
        let w = WeightChar::Algebraic(k);
        prop_assert_eq!(bottom.coefficients().reduce(&specialize(&top, &x, w)), specialize(&bottom, &red(&x), w));
        prop_assert_eq!(red(&duality_twist(&top, &x)), duality_twist(&bottom, &red(&x)));
    }

    #[test]
    fn twist_is_an_involution_shifting_weights(seed in any::<u64>(), level in 1usize..=3, k in -3i64..=6) {
        let r = iwasawa(level);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = r.random(&mut rng);
        let d = duality_twist(&r, &x);
        prop_assert_eq!(duality_twist(&r, &d), x.clone());
        prop_assert_eq!(specialize(&r, &d, WeightChar::Algebraic(k)), specialize(&r, &x, WeightChar::Algebraic(2 - k)));
    }

    #[test]
    fn projector_is_idempotent(entries in prop::collection::vec(prop::collection::vec(0u64..3, 0..3), 1..=16)) {
        let place = parse_place(3, "T").unwrap();
        let ring = LocalRing::new(&place, 2).unwrap();
        let n = (entries.len() as f64).sqrt().floor() as usize;
        let t = Matrix::from_fn(n, n, |i, j| ring.reduce(&apoly(3, &entries[i * n + j])));
        let (p, check) = check_projector(&ring, &t).unwrap();
        prop_assert!(check.passed());
        prop_assert_eq!(matrix::mul(&ring, &p.e, &p.e).unwrap(), p.e.clone());
    }

    #[test]
    fn filtration_quotients_are_killed(s in 1usize..=4, r in 0usize..=14) {
        prop_assume!(r <= max_index(s));
        let st = filtration_step(s, r).unwrap();
        prop_assert!(st.decreasing && st.killed_by_maximal_ideal);
    }
}
