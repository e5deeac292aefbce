use gw_core::oracle::{apply_good, classify_small, is_good_matrix, random_good_matrix, RingMatrix, DEFAULT_CLASSIFY_CAP};
use gw_core::presentation::{EnumerationOptions, GwRing, Presentation};
use gw_core::smith::{smith_normal_form, solve_left, IntMatrix};
use gw_core::{Execution, Family, RingSpec};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec_strategy() -> impl Strategy<Value = RingSpec> {
    (prop_oneof![Just(Family::Z2k), Just(Family::Trunc2)], 1u32..=12).prop_map(|(f, n)| RingSpec::new(f, n).unwrap())
}

proptest! {
    #[test]
    fn maximal_ideal_is_an_ideal(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>(), r in any::<u64>()) {
        let (a, b, r) = (spec.reduce(a & !1), spec.reduce(b & !1), spec.reduce(r));
        prop_assert!(!spec.is_unit(spec.add(a, b)));
        prop_assert!(!spec.is_unit(spec.mul(r, a)));
        prop_assert!(!spec.is_unit(spec.neg(a)));
    }

    #[test]
    fn residue_is_a_ring_map(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>()) {
        let (a, b) = (spec.reduce(a), spec.reduce(b));
        prop_assert_eq!(spec.residue(spec.add(a, b)), spec.residue(a) ^ spec.residue(b));
        prop_assert_eq!(spec.residue(spec.mul(a, b)), spec.residue(a) & spec.residue(b));
    }

    #[test]
    fn units_invert(spec in spec_strategy(), a in any::<u64>()) {
        let a = spec.reduce(a | 1);
        prop_assert_eq!(spec.mul(a, spec.inv_unit(a)), 1);
    }

    #[test]
    fn ring_axioms(spec in spec_strategy(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let (a, b, c) = (spec.reduce(a), spec.reduce(b), spec.reduce(c));
        prop_assert_eq!(spec.mul(a, spec.add(b, c)), spec.add(spec.mul(a, b), spec.mul(a, c)));
        prop_assert_eq!(spec.mul(a, spec.mul(b, c)), spec.mul(spec.mul(a, b), c));
        prop_assert_eq!(spec.mul(a, b), spec.mul(b, a));
        prop_assert_eq!(spec.add(a, spec.neg(a)), 0);
    }

    #[test]
    fn element_text_round_trips(spec in spec_strategy(), a in any::<u64>()) {
        let a = spec.reduce(a);
        prop_assert_eq!(spec.parse_element(&spec.format(a)).unwrap().repr(), a);
    }

    #[test]
    fn smith_certificate(rows in prop::collection::vec(prop::collection::vec(-30i64..30, 4), 1..5)) {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = IntMatrix::from_i64_rows(&refs);
        let snf = smith_normal_form(&m);
        prop_assert!(snf.verify(&m).is_ok());
        let one = BigInt::from(1);
        let (du, dv) = (snf.u.determinant(), snf.v.determinant());
        prop_assert_eq!(du.magnitude(), one.magnitude());
        prop_assert_eq!(dv.magnitude(), one.magnitude());
        // every row of M solves x M = row
        for r in m.to_rows() {
            prop_assert!(solve_left(&m, &r).is_some());
        }
    }
}

fn rings() -> Vec<GwRing> {
    ["z2k:1", "z2k:2", "z2k:3", "z2k:4", "trunc2:2", "trunc2:3", "trunc2:4", "trunc2:5", "trunc2:6"]
        .iter()
        .map(|s| GwRing::compute(RingSpec::parse(s).unwrap(), &EnumerationOptions::default()).unwrap())
        .collect()
}

#[test]
fn relation_invariants() {
    for r in rings() {
        let p = r.presentation();
        let mut seen = std::collections::BTreeSet::new();
        for v in p.relations() {
            assert_eq!(v.coordinate_sum(), 0, "{}", r.spec());
            assert!(!v.is_zero());
            let first = v.coords().iter().find(|&&x| x != 0).unwrap();
            assert!(*first > 0);
            assert!(seen.insert(v.clone()));
        }
    }
}

#[test]
fn hyperbolic_relation_and_rank() {
    for r in rings() {
        let g = r.gw();
        let c = g.classes();
        assert_eq!(g.free_rank(), 1, "{}", r.spec());
        let hyp = g.add(&g.symbol(0), &g.symbol(c.minus_one())).unwrap();
        for a in 0..c.num_classes() {
            assert_eq!(g.add(&g.symbol(a), &g.symbol(c.negate(a))).unwrap(), hyp);
            assert_eq!(g.rank(&g.symbol(a)).unwrap(), BigInt::from(1));
            assert_eq!(g.rank(&g.pfister1(a)).unwrap(), BigInt::from(0));
        }
        let chain = g.invariant_factors();
        assert!(chain.windows(2).all(|w| &w[1] % &w[0] == BigInt::from(0)));
    }
}

#[test]
fn truncated_rings_are_square_zero() {
    for r in rings().iter().filter(|r| r.spec().family() == Family::Trunc2) {
        let g = r.gw();
        let c = g.classes();
        for a in 0..c.num_classes() {
            for b in 0..c.num_classes() {
                assert!(g.pfister2(a, b).unwrap().is_zero(), "{}", r.spec());
            }
        }
    }
}

#[test]
fn presentation_paths_agree() {
    for spec in [RingSpec::z2k(4), RingSpec::trunc2(5)] {
        let seq = EnumerationOptions {
            exec: Execution::Sequential,
            ..Default::default()
        };
        let par = EnumerationOptions::default();
        let a = Presentation::build(spec, &seq).unwrap();
        let b = Presentation::build(spec, &par).unwrap();
        assert_eq!(a.relations(), b.relations());
        assert_eq!(a.provenance(), b.provenance());
    }
}

fn same_lattice(k: usize, a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> bool {
    let inside = |rows: &[Vec<BigInt>], v: &Vec<BigInt>| {
        v.iter().all(|x| x == &BigInt::from(0)) || (!rows.is_empty() && solve_left(&IntMatrix::from_rows(k, rows), v).is_some())
    };
    a.iter().all(|v| inside(b, v)) && b.iter().all(|v| inside(a, v))
}

#[test]
fn representative_tuples_generate_the_same_lattice() {
    for spec in [RingSpec::z2k(2), RingSpec::z2k(3)] {
        let full = GwRing::compute(spec, &EnumerationOptions::default()).unwrap();
        let reps_only = EnumerationOptions {
            cap: 1,
            ..Default::default()
        };
        let reduced = GwRing::compute(spec, &reps_only).unwrap();
        assert!(reduced.sampled().is_some());
        let k = full.gw().classes().num_classes();
        assert!(same_lattice(k, full.gw().relations(), reduced.gw().relations()), "{spec}");
    }
}

#[test]
fn good_matrix_formula_matches_product() {
    for spec in [RingSpec::z2k(2), RingSpec::z2k(3), RingSpec::z2k(4), RingSpec::trunc2(3), RingSpec::trunc2(4)] {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.parameter() as u64);
        for _ in 0..10_000 {
            let n = rng.gen_range(1..=4);
            let d: Vec<u64> = (0..n).map(|_| spec.reduce(rng.gen::<u64>() | 1)).collect();
            let p = random_good_matrix(spec, &d, &mut rng);
            let dm = RingMatrix::diagonal(spec, &d);
            let cert = is_good_matrix(&p, &dm).unwrap().expect("generated matrix is good");
            let literal = p.congruence(&dm).unwrap().diagonal_entries();
            assert_eq!(apply_good(spec, &p, &cert, &d), literal);
        }
    }
}

#[test]
fn classification_is_move_invariant() {
    for (spec, n) in [(RingSpec::z2k(2), 3), (RingSpec::z2k(3), 2), (RingSpec::trunc2(2), 3)] {
        assert!(classify_small(spec, n, DEFAULT_CLASSIFY_CAP).unwrap().check_invariance());
    }
}
