//! The explicit 4x4 congruence behind the odd relations.

use std::sync::OnceLock;

use crate::error::{GwError, Result};
use crate::presentation::odd_terms;
use crate::ring::RingSpec;
use crate::square_classes::SquareClassGroup;

use super::matrix::RingMatrix;
use super::orthogonal::{permutation_matrix, phi};

/// `P` with `P diag(a, b, c, d) P^T = diag(t, u, v, w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddRelationWitness {
    pub p: RingMatrix,
    pub t: u64,
    pub u: u64,
    pub v: u64,
    pub w: u64,
}

impl OddRelationWitness {
    pub fn diagonal(&self) -> [u64; 4] {
        [self.t, self.u, self.v, self.w]
    }
}

/// Builds the matrix for units `a, b, c, d` and parameters `p, q, r`, and
/// checks the identity exactly.
pub fn odd_relation_matrix(spec: RingSpec, abcd: [u64; 4], pqr: [u64; 3]) -> Result<OddRelationWitness> {
    let s = spec;
    for x in abcd.iter().chain(pqr.iter()) {
        if !s.is_unit(*x) {
            return Err(GwError::NonUnit(s.format(*x)));
        }
    }
    let [a, b, c, d] = abcd.map(|x| s.reduce(x));
    let [p, q, r] = pqr.map(|x| s.reduce(x));
    let i = |x: u64| s.inv_unit(x);
    let m = |xs: &[u64]| xs.iter().fold(1, |acc, &x| s.mul(acc, x));
    let (a2, b2, r2, d2) = (s.square(a), s.square(b), s.square(r), s.square(d));
    let (p2, q2) = (s.square(p), s.square(q));

    // Rows of P^T.
    let pt = [
        [
            s.sub(m(&[i(r2), a, c, i(b), i(d)]), r2),
            s.neg(m(&[r, d, i(p), i(a)])),
            p,
            s.neg(m(&[q, r, i(p), b, i(a), i(d)])),
        ],
        [
            s.neg(s.add(
                s.add(m(&[p, i(q), i(r2), a2, c, i(b2), i(d)]), m(&[i(p), i(q), a, c, i(b2)])),
                m(&[q, r2, i(p)]),
            )),
            0,
            q,
            m(&[r, i(d)]),
        ],
        [
            s.neg(s.add(
                s.add(m(&[p2, i(q), i(r), a2, i(b), i(d)]), m(&[q, a, i(r), i(d)])),
                m(&[r, a, i(q), i(b)]),
            )),
            m(&[q, r2, i(p), b, d, i(a), i(c)]),
            0,
            s.neg(m(&[i(p), i(d)])),
        ],
        [
            s.add(
                s.add(m(&[p, r, a, i(d)]), m(&[i(p), i(r), a, c, i(b), i(d)])),
                m(&[q2, r, i(p), b, i(d)]),
            ),
            1,
            r,
            0,
        ],
    ];
    let pmat = RingMatrix::from_rows(spec, &pt.iter().map(|r| r.to_vec()).collect::<Vec<_>>())?.transpose();

    let u = m(&[r2, d2, i(p2), i(a2), s.add(s.add(a, m(&[p2, i(r2), a2, i(d)])), m(&[q2, r2, b2, i(c)]))]);
    let v = s.add(s.add(m(&[p2, a]), m(&[q2, b])), m(&[r2, d]));
    let w = m(&[
        r2,
        i(p2),
        i(a2),
        i(d2),
        s.add(s.add(m(&[p2, a2, b]), m(&[a2, c, i(r2)])), m(&[q2, a, b2])),
    ]);
    let t = m(&[p2, i(q2), i(s.square(r2)), a2, a, c, i(b2), i(b), i(d), u, v, w]);

    if pmat.residue() != phi(RingSpec::z2k(1)) {
        return Err(GwError::Internal(format!("odd relation matrix {pmat} does not reduce to Phi")));
    }
    let image = pmat.congruence(&RingMatrix::diagonal(spec, &[a, b, c, d]))?;
    if image != RingMatrix::diagonal(spec, &[t, u, v, w]) {
        return Err(GwError::Internal(format!(
            "odd relation identity fails at (a,b,c,d) = ({}, {}, {}, {}), (p,q,r) = ({}, {}, {}): got {image}",
            s.format(a),
            s.format(b),
            s.format(c),
            s.format(d),
            s.format(p),
            s.format(q),
            s.format(r)
        )));
    }
    Ok(OddRelationWitness { p: pmat, t, u, v, w })
}

/// The matrix with `p = 1/a, q = 1/b, r = 1`.
pub fn odd_relation_matrix_default(spec: RingSpec, abcd: [u64; 4]) -> Result<OddRelationWitness> {
    let [a, b, _, _] = abcd;
    if !spec.is_unit(a) || !spec.is_unit(b) {
        return Err(GwError::NonUnit(format!("{} or {}", spec.format(a), spec.format(b))));
    }
    odd_relation_matrix(spec, abcd, [spec.inv_unit(a), spec.inv_unit(b), 1])
}

/// With default parameters, the diagonal `(t, u, v, w)` lies in the square
/// classes of the odd relation's right-hand side `(abcd uvw, u, v, w)`.
pub fn check_default_classes(classes: &SquareClassGroup, abcd: [u64; 4]) -> Result<OddRelationWitness> {
    let spec = classes.spec();
    let wit = odd_relation_matrix_default(spec, abcd)?;
    let terms = odd_terms(&spec, abcd[0], abcd[1], abcd[2], abcd[3])?;
    let [u, v, w, t] = terms.rhs;
    let ok = [(wit.t, t), (wit.u, u), (wit.v, v), (wit.w, w)]
        .iter()
        .all(|&(x, y)| classes.class_of(x) == classes.class_of(y));
    if !ok {
        return Err(GwError::Internal(format!(
            "square classes of the odd relation matrix disagree with the relation at {:?}",
            abcd.map(|x| spec.format(x))
        )));
    }
    Ok(wit)
}

/// An explicit congruence `W diag(a, b, c, d) W^T = diag(u, v, w, abcd uvw)`
/// built from the default matrix, a square-root rescaling and a cyclic
/// permutation.
pub fn odd_relation_congruence(classes: &SquareClassGroup, abcd: [u64; 4]) -> Result<RingMatrix> {
    let spec = classes.spec();
    let wit = check_default_classes(classes, abcd)?;
    let terms = odd_terms(&spec, abcd[0], abcd[1], abcd[2], abcd[3])?;
    let [u, v, w, t] = terms.rhs;
    let target = [t, u, v, w];
    let mut scale = Vec::with_capacity(4);
    for (got, want) in wit.diagonal().iter().zip(target) {
        let ratio = spec.mul(want, spec.inv_unit(*got));
        let root = spec
            .units_raw()
            .find(|&x| spec.square(x) == ratio)
            .ok_or_else(|| GwError::Internal("square class ratio has no square root".into()))?;
        scale.push(root);
    }
    let perm = permutation_matrix(spec, &[1, 2, 3, 0]);
    let full = perm.mul(&RingMatrix::diagonal(spec, &scale))?.mul(&wit.p)?;
    let lhs = RingMatrix::diagonal(spec, &terms.lhs);
    if full.congruence(&lhs)? != RingMatrix::diagonal(spec, &terms.rhs) {
        return Err(GwError::Internal("assembled odd relation congruence is wrong".into()));
    }
    Ok(full)
}

/// Transcription self-test: the identity and the four class equalities on
/// a fixed set of small cases. Cached after the first call.
pub fn lemma_self_test() -> Result<()> {
    static RESULT: OnceLock<Result<()>> = OnceLock::new();
    RESULT
        .get_or_init(|| {
            for spec in [RingSpec::z2k(3), RingSpec::z2k(4), RingSpec::trunc2(4)] {
                let classes = SquareClassGroup::compute(spec);
                let units: Vec<u64> = spec.units_raw().take(4).collect();
                for &a in &units {
                    for &b in &units {
                        check_default_classes(&classes, [a, b, units[1], units[2]])?;
                        odd_relation_matrix(spec, [a, b, units[3], units[1]], [b, units[2], a])?;
                    }
                }
            }
            Ok(())
        })
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_test_passes() {
        lemma_self_test().unwrap();
    }

    #[test]
    fn all_ones_over_z8() {
        let w = odd_relation_matrix_default(RingSpec::z2k(3), [1, 1, 1, 1]).unwrap();
        assert_eq!(w.diagonal(), [3, 3, 3, 3]);
    }

    #[test]
    fn explicit_congruences() {
        for spec in [RingSpec::z2k(2), RingSpec::z2k(3), RingSpec::trunc2(3)] {
            let classes = SquareClassGroup::compute(spec);
            let units: Vec<u64> = spec.units_raw().collect();
            for &a in &units {
                let m1 = spec.neg(1);
                odd_relation_congruence(&classes, [1, a, m1, m1]).unwrap();
            }
        }
    }
}
