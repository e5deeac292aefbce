//! Independent brute-force computations checked against the library.

use std::collections::{BTreeSet, HashMap};

use gw_core::oracle::{
    classify_small, congruent_bfs, diagonalize, factor_into_good, is_good_matrix, odd_relation_matrix_default,
    orthogonal_group, verify_factorization, RingMatrix, SymMatrix, Verdict, DEFAULT_CLASSIFY_CAP, DEFAULT_VISITED_CAP,
};
use gw_core::presentation::{enumerate_even_relations, EnumerationOptions, GwRing};
use gw_core::smith::{smith_normal_form, IntMatrix};
use gw_core::{RingSpec, SquareClassGroup};
use num_bigint::BigInt;

/// Plain arithmetic on `F2[x]/(x^n)` as bit vectors, independent of the
/// library's carry-less multiply.
fn poly_mul(a: u64, b: u64, n: u32) -> u64 {
    let mut out = 0;
    for i in 0..n {
        if a >> i & 1 == 1 {
            for j in 0..n - i {
                if b >> j & 1 == 1 {
                    out ^= 1 << (i + j);
                }
            }
        }
    }
    out
}

fn naive_class_count(spec: RingSpec) -> usize {
    let n = spec.parameter();
    let size = 1u64 << n;
    let mul = |a: u64, b: u64| match spec.family() {
        gw_core::Family::Z2k => (a * b) % size,
        gw_core::Family::Trunc2 => poly_mul(a, b, n),
    };
    let units: Vec<u64> = (0..size).filter(|u| u & 1 == 1).collect();
    let squares: BTreeSet<u64> = units.iter().map(|&u| mul(u, u)).collect();
    let mut seen = BTreeSet::new();
    let mut classes = 0;
    for &u in &units {
        if seen.contains(&u) {
            continue;
        }
        classes += 1;
        for &s in &squares {
            seen.insert(mul(u, s));
        }
    }
    classes
}

#[test]
fn square_class_counts_match_naive() {
    for n in 1..=8 {
        for spec in [RingSpec::z2k(n), RingSpec::trunc2(n)] {
            assert_eq!(SquareClassGroup::compute(spec).num_classes(), naive_class_count(spec), "{spec}");
        }
    }
}

#[test]
fn truncated_even_example() {
    // a = b = 1, m = x: n = x, a + n^2 b = 1 + x^2 = b + m^2 a.
    let n = 3;
    let x = 0b010u64;
    let nn = poly_mul(x, x, n);
    assert_eq!(1 ^ nn, 0b101);
    let spec = RingSpec::trunc2(3);
    let classes = SquareClassGroup::compute(spec);
    // 1 + x^2 = (1 + x)^2, so the resulting class vector is zero and is
    // filtered out of the presentation.
    assert_eq!(poly_mul(0b011, 0b011, n), 0b101);
    assert_eq!(classes.class_of(0b101), 0);
    let fam = enumerate_even_relations(&classes, &EnumerationOptions::default()).unwrap();
    assert!(fam.relations.keys().all(|v| !v.is_zero()));
    // The forms are nonetheless congruent, with an explicit witness.
    let a = SymMatrix::diagonal(spec, &[1, 1]).unwrap();
    let b = SymMatrix::diagonal(spec, &[0b101, 0b101]).unwrap();
    match congruent_bfs(&a, &b, DEFAULT_VISITED_CAP).unwrap() {
        Verdict::Congruent { witness, .. } => assert_eq!(a.transform(&witness).unwrap(), b),
        v => panic!("{v:?}"),
    }
}

fn all_matrices(spec: RingSpec, n: usize) -> Vec<RingMatrix> {
    let size = spec.size();
    let cells = n * n;
    let total = size.pow(cells as u32);
    (0..total)
        .map(|mut idx| {
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            let x = idx % size;
                            idx /= size;
                            x
                        })
                        .collect()
                })
                .collect();
            RingMatrix::from_rows(spec, &rows).unwrap()
        })
        .collect()
}

/// Orbits under the full group `GL_n(R)`, compared with the classification
/// that only uses generator moves.
fn full_group_partition_matches(spec: RingSpec, n: usize) {
    let gl: Vec<RingMatrix> = all_matrices(spec, n).into_iter().filter(|m| m.is_invertible()).collect();
    let cls = classify_small(spec, n, DEFAULT_CLASSIFY_CAP).unwrap();
    let sym: Vec<SymMatrix> = all_matrices(spec, n)
        .into_iter()
        .filter(|m| m.is_symmetric())
        .map(|m| SymMatrix::new(m).unwrap())
        .filter(|m| m.is_unimodular())
        .collect();
    let mut orbit_id: HashMap<SymMatrix, usize> = HashMap::new();
    let mut orbits = 0;
    for m in &sym {
        if orbit_id.contains_key(m) {
            continue;
        }
        for p in &gl {
            orbit_id.insert(m.transform(p).unwrap(), orbits);
        }
        orbits += 1;
    }
    assert_eq!(orbits, cls.num_classes(), "{spec} n = {n}");
    for a in &sym {
        for b in &sym {
            assert_eq!(orbit_id[a] == orbit_id[b], cls.class_of(a) == cls.class_of(b));
        }
    }
}

#[test]
fn generator_moves_reach_full_orbits() {
    full_group_partition_matches(RingSpec::z2k(1), 2);
    full_group_partition_matches(RingSpec::z2k(1), 3);
    full_group_partition_matches(RingSpec::z2k(2), 2);
    full_group_partition_matches(RingSpec::trunc2(2), 2);
    full_group_partition_matches(RingSpec::z2k(3), 2);
}

#[test]
fn congruence_examples_against_full_group() {
    let s = RingSpec::z2k(2);
    let gl: Vec<RingMatrix> = all_matrices(s, 2).into_iter().filter(|m| m.is_invertible()).collect();
    let id = RingMatrix::identity(s, 2);
    let target = RingMatrix::diagonal(s, &[3, 3]);
    assert!(gl.iter().all(|p| p.congruence(&id).unwrap() != target));
    let a = SymMatrix::diagonal(s, &[1, 1]).unwrap();
    let b = SymMatrix::diagonal(s, &[3, 3]).unwrap();
    assert!(matches!(congruent_bfs(&a, &b, DEFAULT_VISITED_CAP).unwrap(), Verdict::NotCongruent { .. }));
}

#[test]
fn f2_rank_two_classes() {
    let s = RingSpec::z2k(1);
    let c = classify_small(s, 2, DEFAULT_CLASSIFY_CAP).unwrap();
    assert_eq!(c.num_classes(), 2);
    let reps = c.representatives();
    let has_unit_diag = |m: &SymMatrix| (0..2).any(|i| m.get(i, i) == 1);
    assert_eq!(reps.iter().filter(|m| has_unit_diag(m)).count(), 1);
    let c1 = classify_small(RingSpec::z2k(2), 1, DEFAULT_CLASSIFY_CAP).unwrap();
    assert_eq!(c1.num_classes(), 2);
}

#[test]
fn orthogonal_groups_by_bits() {
    // Rows as bitmasks; P P^T = I iff rows are orthonormal over F2.
    for (n, expected) in [(2u32, 2usize), (3, 6), (4, 48)] {
        let mut count = 0;
        let rows = 1u32 << n;
        let mut stack = vec![Vec::<u32>::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n as usize {
                count += 1;
                continue;
            }
            for r in 0..rows {
                let ok = (r.count_ones() % 2 == 1) && prefix.iter().all(|&q| (q & r).count_ones() % 2 == 0);
                if ok {
                    let mut next = prefix.clone();
                    next.push(r);
                    stack.push(next);
                }
            }
        }
        assert_eq!(count, expected);
        assert_eq!(orthogonal_group(n as usize).unwrap().order(), expected);
    }
}

#[test]
fn good_matrix_examples_by_hand() {
    let s = RingSpec::z2k(3);
    // [[1, 2], [-2, 1]] diag(1, 1) [[1, -2], [2, 1]] over the integers:
    // [[5, 0], [0, 5]], reduced mod 8.
    let p = [[1i64, 2], [-2, 1]];
    let mut prod = [[0i64; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            prod[i][j] = (0..2).map(|k| p[i][k] * p[j][k]).sum::<i64>().rem_euclid(8);
        }
    }
    assert_eq!(prod, [[5, 0], [0, 5]]);
    let pm = RingMatrix::from_signed(s, &[&[1, 2], &[-2, 1]]).unwrap();
    let cert = is_good_matrix(&pm, &RingMatrix::identity(s, 2)).unwrap().unwrap();
    assert_eq!(cert.resulting_diagonal, vec![5, 5]);
    // p21 p11 d1 + p12 p22 d2 = -2 + 2 = 0
    assert_eq!((-2 + 2i64).rem_euclid(8), 0);
    let bad = RingMatrix::from_signed(s, &[&[1, 2], &[2, 1]]).unwrap();
    assert!(is_good_matrix(&bad, &RingMatrix::identity(s, 2)).unwrap().is_none());

    let p = pm.mul(&RingMatrix::diagonal(s, &[1, 3])).unwrap();
    let d = RingMatrix::identity(s, 2);
    let f = factor_into_good(&p, &d).unwrap();
    verify_factorization(&p, &d, &f).unwrap();
}

#[test]
fn odd_matrix_on_all_ones() {
    let w = odd_relation_matrix_default(RingSpec::z2k(3), [1, 1, 1, 1]).unwrap();
    // u = v = w = 1 + 1 + 1, t = 27 mod 8
    assert_eq!((w.u, w.v, w.w, w.t), (3, 3, 3, 27 % 8));
    let w4 = odd_relation_matrix_default(RingSpec::z2k(2), [1, 1, 1, 1]).unwrap();
    assert_eq!(w4.diagonal(), [3, 3, 3, 3]);
}

#[test]
fn diagonalize_small() {
    let s = RingSpec::z2k(2);
    let a = SymMatrix::new(RingMatrix::from_rows(s, &[vec![1, 1], vec![1, 2]]).unwrap()).unwrap();
    let d = diagonalize(&a).unwrap().unwrap();
    assert!(congruent_bfs(&a, &d.diagonal, DEFAULT_VISITED_CAP).unwrap().is_congruent());
}

/// Invariant factors from gcds of all k x k minors.
fn determinantal_divisors(rows: &[Vec<i64>]) -> Vec<i64> {
    fn det(m: &[Vec<i64>]) -> i64 {
        match m.len() {
            1 => m[0][0],
            n => (0..n)
                .map(|c| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != c).map(|(_, &x)| x).collect()).collect();
                    (if c % 2 == 0 { 1 } else { -1 }) * m[0][c] * det(&minor)
                })
                .sum(),
        }
    }
    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (0..n).flat_map(|last| subsets(last, k - 1).into_iter().map(move |mut s| {
            s.push(last);
            s
        })).collect()
    }
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let (r, c) = (rows.len(), rows[0].len());
    let mut out = Vec::new();
    let mut prev = 1;
    for k in 1..=r.min(c) {
        let mut g = 0;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let m: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| rows[i][j]).collect()).collect();
                g = gcd(g, det(&m));
            }
        }
        if g == 0 {
            break;
        }
        out.push(g / prev);
        prev = g;
    }
    out
}

#[test]
fn smith_matches_determinantal_divisors() {
    let cases: Vec<Vec<Vec<i64>>> = vec![
        vec![vec![2, 0], vec![0, 3]],
        vec![vec![4, -4]],
        vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]],
        vec![vec![2, -2, 0, 0], vec![0, 4, -4, 0], vec![1, 1, -1, -1]],
    ];
    for rows in cases {
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let snf = smith_normal_form(&IntMatrix::from_i64_rows(&refs));
        let nonzero: Vec<BigInt> = snf.diagonal().into_iter().filter(|d| d != &BigInt::from(0)).collect();
        let expected: Vec<BigInt> = determinantal_divisors(&rows).into_iter().map(BigInt::from).collect();
        assert_eq!(nonzero, expected, "{rows:?}");
    }
}

#[test]
fn witt_of_f2() {
    let r = GwRing::compute(RingSpec::trunc2(1), &EnumerationOptions::default()).unwrap();
    assert_eq!(r.witt().describe(), "Z/2");
    let z2 = GwRing::compute(RingSpec::z2k(1), &EnumerationOptions::default()).unwrap();
    assert_eq!(z2.witt().describe(), "Z/2");
}
