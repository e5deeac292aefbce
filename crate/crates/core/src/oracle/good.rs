//! Good matrices relative to a diagonal form, and factorization of a
//! congruence between diagonal forms into good steps.

use rand::Rng;

use crate::error::{GwError, Result};
use crate::ring::RingSpec;

use super::matrix::RingMatrix;

/// Evidence that `P` is good relative to `D`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoodMatrixCertificate {
    /// `(k, l, p_kl, p_lk)` with `k < l`, or `None` when `P` is diagonal.
    pub off_pair: Option<(usize, usize, u64, u64)>,
    /// The diagonal of `P D P^T`.
    pub resulting_diagonal: Vec<u64>,
}

fn check_diag(d: &RingMatrix) -> Result<Vec<u64>> {
    if !d.is_diagonal() {
        return Err(GwError::Precondition(format!("{d} is not diagonal")));
    }
    let entries = d.diagonal_entries();
    if let Some(&x) = entries.iter().find(|&&x| !d.spec().is_unit(x)) {
        return Err(GwError::Precondition(format!("diagonal entry {} is not a unit", d.spec().format(x))));
    }
    Ok(entries)
}

fn compatible(p: &RingMatrix, d: &RingMatrix) -> Result<()> {
    if p.spec() != d.spec() {
        return Err(GwError::SpecMismatch {
            left: p.spec(),
            right: d.spec(),
        });
    }
    if p.dim() != d.dim() {
        return Err(GwError::Dimension(format!("P is {0}x{0}, D is {1}x{1}", p.dim(), d.dim())));
    }
    Ok(())
}

/// Diagonal predicted by the good-matrix formula, without multiplying out.
pub fn apply_good(spec: RingSpec, p: &RingMatrix, cert: &GoodMatrixCertificate, d: &[u64]) -> Vec<u64> {
    let sq = |x: u64| spec.square(x);
    let mut out: Vec<u64> = (0..d.len()).map(|i| spec.mul(sq(p.get(i, i)), d[i])).collect();
    if let Some((k, l, pkl, plk)) = cert.off_pair {
        out[k] = spec.add(out[k], spec.mul(sq(pkl), d[l]));
        out[l] = spec.add(out[l], spec.mul(sq(plk), d[k]));
    }
    out
}

/// Returns a certificate iff `P` is good relative to the diagonal unit
/// form `D`.
pub fn is_good_matrix(p: &RingMatrix, d: &RingMatrix) -> Result<Option<GoodMatrixCertificate>> {
    compatible(p, d)?;
    let dd = check_diag(d)?;
    if !p.is_invertible() {
        return Err(GwError::Precondition(format!("{p} is not invertible")));
    }
    if !p.is_diagonal_mod_max() {
        return Ok(None);
    }
    let n = p.dim();
    let mut pair: Option<(usize, usize)> = None;
    for i in 0..n {
        for j in 0..n {
            if i == j || p.get(i, j) == 0 {
                continue;
            }
            let key = (i.min(j), i.max(j));
            match pair {
                None => pair = Some(key),
                Some(existing) if existing == key => {}
                Some(_) => return Ok(None),
            }
        }
    }
    let image = p.congruence(d)?;
    if !image.is_diagonal() {
        return Ok(None);
    }
    let spec = p.spec();
    let off_pair = pair.map(|(k, l)| (k, l, p.get(k, l), p.get(l, k)));
    if let Some((k, l, pkl, plk)) = off_pair {
        let lhs = spec.add(
            spec.mul(spec.mul(plk, p.get(k, k)), dd[k]),
            spec.mul(spec.mul(pkl, p.get(l, l)), dd[l]),
        );
        if lhs != 0 {
            return Err(GwError::Internal("diagonal image but pair condition fails".into()));
        }
    }
    let cert = GoodMatrixCertificate {
        off_pair,
        resulting_diagonal: image.diagonal_entries(),
    };
    if apply_good(spec, p, &cert, &dd) != cert.resulting_diagonal {
        return Err(GwError::Internal(format!("good-matrix formula disagrees with P D P^T for {p}")));
    }
    Ok(Some(cert))
}

pub(crate) fn random_unit<R: Rng>(spec: RingSpec, rng: &mut R) -> u64 {
    spec.reduce(rng.gen::<u64>() | 1)
}

fn random_non_unit<R: Rng>(spec: RingSpec, rng: &mut R) -> u64 {
    spec.reduce(rng.gen::<u64>() & !1)
}

/// A random matrix that is good relative to `diag(d)`, touching the pair
/// `(k, l)` with probability 3/4.
pub fn random_good_matrix<R: Rng>(spec: RingSpec, d: &[u64], rng: &mut R) -> RingMatrix {
    let n = d.len();
    let mut p = RingMatrix::zeros(spec, n);
    for i in 0..n {
        p.set(i, i, random_unit(spec, rng));
    }
    if n >= 2 && rng.gen_range(0..4) != 0 {
        let k = rng.gen_range(0..n);
        let mut l = rng.gen_range(0..n - 1);
        if l >= k {
            l += 1;
        }
        let pkl = random_non_unit(spec, rng);
        // p_lk p_kk d_k + p_kl p_ll d_l = 0
        let num = spec.mul(spec.mul(pkl, p.get(l, l)), d[l]);
        let plk = spec.neg(spec.mul(num, spec.inv_unit(spec.mul(p.get(k, k), d[k]))));
        p.set(k, l, pkl);
        p.set(l, k, plk);
    }
    p
}

/// Factors `P` as `P_k ... P_1` where each `P_{i+1}` is good relative to
/// `P_i ... P_1 D P_1^T ... P_i^T`. The returned list is `[P_1, ..., P_k]`.
///
/// Requires `D` and `P D P^T` diagonal with unit entries and `P` invertible
/// and diagonal modulo the maximal ideal.
pub fn factor_into_good(p: &RingMatrix, d: &RingMatrix) -> Result<Vec<RingMatrix>> {
    compatible(p, d)?;
    check_diag(d)?;
    if !p.is_invertible() {
        return Err(GwError::Precondition(format!("P = {p} is not invertible")));
    }
    if !p.is_diagonal_mod_max() {
        return Err(GwError::Precondition(format!("P = {p} is not diagonal modulo the maximal ideal")));
    }
    let image = p.congruence(d)?;
    if !image.is_diagonal() {
        return Err(GwError::Precondition(format!("P D P^T = {image} is not diagonal")));
    }
    check_diag(&image)?;
    let factors = factor_rec(p, d)?;
    let mut prod = RingMatrix::identity(p.spec(), p.dim());
    for f in &factors {
        prod = f.mul_unchecked(&prod);
    }
    if &prod != p {
        return Err(GwError::Internal("factor product differs from P".into()));
    }
    Ok(factors)
}

fn factor_rec(p: &RingMatrix, d: &RingMatrix) -> Result<Vec<RingMatrix>> {
    if is_good_matrix(p, d)?.is_some() {
        return Ok(vec![p.clone()]);
    }
    let s = p.spec();
    let size = p.dim();
    let last = size - 1;
    let x = p.get(last, last);
    let v: Vec<u64> = (0..last).map(|j| p.get(last, j)).collect();

    match v.iter().rposition(|&e| e != 0) {
        None => {
            // Bottom row is (0, x). Then U = 0 as well since P D P^T is
            // diagonal, so P = diag(P', x).
            if (0..last).any(|i| p.get(i, last) != 0) {
                return Err(GwError::Internal("zero bottom row with nonzero last column".into()));
            }
            let sub = |m: &RingMatrix| {
                let rows: Vec<Vec<u64>> = (0..last).map(|i| (0..last).map(|j| m.get(i, j)).collect()).collect();
                RingMatrix::from_rows(s, &rows)
            };
            let mut out = Vec::new();
            for f in factor_rec(&sub(p)?, &sub(d)?)? {
                let mut g = RingMatrix::identity(s, size);
                for i in 0..last {
                    for j in 0..last {
                        g.set(i, j, f.get(i, j));
                    }
                }
                out.push(g);
            }
            if x != 1 {
                let mut g = RingMatrix::identity(s, size);
                g.set(last, last, x);
                out.push(g);
            }
            Ok(out)
        }
        Some(k) => {
            let vk = v[k];
            let (dk, dn) = (d.get(k, k), d.get(last, last));
            let sv = s.neg(s.mul(s.mul(vk, dk), s.inv_unit(s.mul(x, dn))));

            let mut e = RingMatrix::identity(s, size);
            e.set(k, last, sv);
            e.set(last, k, vk);
            e.set(last, last, x);

            // Q' = (x P' - v_k U e_k^T) (x I - s v_k e_k e_k^T)^{-1}; the
            // second factor is diagonal with a unit at (k, k).
            let corner = s.sub(x, s.mul(sv, vk));
            if !s.is_unit(corner) {
                return Err(GwError::Internal("x - s v_k is not a unit".into()));
            }
            let x_inv = s.inv_unit(x);
            let corner_inv = s.inv_unit(corner);
            let mut q = RingMatrix::zeros(s, size);
            for i in 0..last {
                for j in 0..last {
                    let mut t = s.mul(x, p.get(i, j));
                    if j == k {
                        t = s.sub(t, s.mul(vk, p.get(i, last)));
                    }
                    q.set(i, j, s.mul(t, if j == k { corner_inv } else { x_inv }));
                }
            }
            // last column: (U - s Q' e_k) / x
            for i in 0..last {
                let t = s.sub(p.get(i, last), s.mul(sv, q.get(i, k)));
                q.set(i, last, s.mul(t, x_inv));
            }
            for (j, &vj) in v.iter().enumerate().take(last) {
                q.set(last, j, if j == k { 0 } else { vj });
            }
            q.set(last, last, 1);

            if q.mul_unchecked(&e) != *p {
                return Err(GwError::Internal("Q E differs from P".into()));
            }
            if !q.is_diagonal_mod_max() {
                return Err(GwError::Internal("Q is not diagonal modulo the maximal ideal".into()));
            }
            let d1 = e.congruence(d)?;
            if is_good_matrix(&e, d)?.is_none() {
                return Err(GwError::Internal("elementary factor is not good".into()));
            }
            let mut out = vec![e];
            out.extend(factor_rec(&q, &d1)?);
            Ok(out)
        }
    }
}

/// Checks that `factors` multiply to `P` and that each one is good
/// relative to the running diagonal. Returns the final diagonal.
pub fn verify_factorization(p: &RingMatrix, d: &RingMatrix, factors: &[RingMatrix]) -> Result<Vec<u64>> {
    let mut running = d.clone();
    let mut prod = RingMatrix::identity(p.spec(), p.dim());
    for (i, f) in factors.iter().enumerate() {
        let cert = is_good_matrix(f, &running)?
            .ok_or_else(|| GwError::Internal(format!("factor {} = {f} is not good relative to {running}", i + 1)))?;
        running = RingMatrix::diagonal(p.spec(), &cert.resulting_diagonal);
        prod = f.mul(&prod)?;
    }
    if &prod != p {
        return Err(GwError::Internal(format!("factor product {prod} differs from P = {p}")));
    }
    Ok(running.diagonal_entries())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn examples() {
        let s = RingSpec::z2k(3);
        let d = RingMatrix::identity(s, 2);
        let p = RingMatrix::from_signed(s, &[&[1, 2], &[-2, 1]]).unwrap();
        let cert = is_good_matrix(&p, &d).unwrap().unwrap();
        assert_eq!(cert.resulting_diagonal, vec![5, 5]);
        assert_eq!(cert.off_pair, Some((0, 1, 2, 6)));
        let bad = RingMatrix::from_signed(s, &[&[1, 2], &[2, 1]]).unwrap();
        assert_eq!(is_good_matrix(&bad, &d).unwrap(), None);
        let id = RingMatrix::identity(s, 3);
        let cert = is_good_matrix(&id, &RingMatrix::diagonal(s, &[1, 3, 5])).unwrap().unwrap();
        assert_eq!(cert.resulting_diagonal, vec![1, 3, 5]);
        assert_eq!(cert.off_pair, None);
    }

    #[test]
    fn factor_examples() {
        let s = RingSpec::z2k(3);
        let d = RingMatrix::identity(s, 2);
        let p = RingMatrix::from_signed(s, &[&[1, 2], &[-2, 1]])
            .unwrap()
            .mul(&RingMatrix::diagonal(s, &[1, 3]))
            .unwrap();
        let f = factor_into_good(&p, &d).unwrap();
        verify_factorization(&p, &d, &f).unwrap();
        let id = RingMatrix::identity(s, 3);
        assert_eq!(factor_into_good(&id, &id).unwrap(), vec![id.clone()]);
    }

    #[test]
    fn random_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in [RingSpec::z2k(3), RingSpec::trunc2(4)] {
            for _ in 0..100 {
                let n = rng.gen_range(2..=4);
                let d0: Vec<u64> = (0..n).map(|_| random_unit(spec, &mut rng)).collect();
                let d = RingMatrix::diagonal(spec, &d0);
                let mut running = d0.clone();
                let mut p = RingMatrix::identity(spec, n);
                for _ in 0..rng.gen_range(1..6) {
                    let g = random_good_matrix(spec, &running, &mut rng);
                    let cert = is_good_matrix(&g, &RingMatrix::diagonal(spec, &running)).unwrap().unwrap();
                    running = cert.resulting_diagonal;
                    p = g.mul(&p).unwrap();
                }
                let f = factor_into_good(&p, &d).unwrap();
                assert_eq!(verify_factorization(&p, &d, &f).unwrap(), running);
            }
        }
    }
}
