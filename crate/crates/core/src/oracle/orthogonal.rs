//! Orthogonal groups `O_n(F2)` by exhaustive enumeration.

use crate::error::{GwError, Result};
use crate::ring::RingSpec;

use super::matrix::RingMatrix;

fn f2() -> RingSpec {
    RingSpec::z2k(1)
}

/// The 4x4 matrix with zero diagonal and ones elsewhere.
pub fn phi(spec: RingSpec) -> RingMatrix {
    let mut m = RingMatrix::zeros(spec, 4);
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                m.set(i, j, 1);
            }
        }
    }
    m
}

pub fn permutation_matrix(spec: RingSpec, perm: &[usize]) -> RingMatrix {
    let mut m = RingMatrix::zeros(spec, perm.len());
    for (i, &j) in perm.iter().enumerate() {
        m.set(i, j, 1);
    }
    m
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

#[derive(Debug, Clone)]
pub struct OrthogonalGroup {
    pub n: usize,
    /// `|GL_n(F2)|`, counted on the way.
    pub gl_order: usize,
    pub matrices: Vec<RingMatrix>,
    pub permutation_count: usize,
    /// For `n = 4`: the group is `permutations x {I, Phi}`, `Phi^2 = I` and
    /// `Phi` commutes with every permutation matrix.
    pub phi_checks: Option<PhiChecks>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PhiChecks {
    pub decomposes: bool,
    pub involution: bool,
    pub commutes: bool,
}

impl PhiChecks {
    pub fn all(&self) -> bool {
        self.decomposes && self.involution && self.commutes
    }
}

impl OrthogonalGroup {
    pub fn order(&self) -> usize {
        self.matrices.len()
    }

    pub fn contains(&self, m: &RingMatrix) -> bool {
        let r = m.residue();
        self.matrices.contains(&r)
    }
}

/// Enumerates `GL_n(F2)` and keeps the `P` with `P P^T = I`.
pub fn orthogonal_group(n: usize) -> Result<OrthogonalGroup> {
    if !(2..=4).contains(&n) {
        return Err(GwError::Dimension(format!("orthogonal groups are enumerated for n in 2..=4, got {n}")));
    }
    let s = f2();
    let id = RingMatrix::identity(s, n);
    let mut gl_order = 0;
    let mut matrices = Vec::new();
    for bits in 0u32..(1 << (n * n)) {
        let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| ((bits >> (i * n + j)) & 1) as u64).collect()).collect();
        let p = RingMatrix::from_rows(s, &rows)?;
        if !p.is_invertible() {
            continue;
        }
        gl_order += 1;
        if p.mul_unchecked(&p.transpose()) == id {
            matrices.push(p);
        }
    }
    let perms: Vec<RingMatrix> = permutations(n).iter().map(|p| permutation_matrix(s, p)).collect();
    let permutation_count = matrices.iter().filter(|m| perms.contains(m)).count();

    let phi_checks = (n == 4).then(|| {
        let f = phi(s);
        let mut expected: Vec<RingMatrix> = perms.clone();
        expected.extend(perms.iter().map(|p| p.mul_unchecked(&f)));
        let decomposes = expected.len() == matrices.len() && expected.iter().all(|m| matrices.contains(m));
        PhiChecks {
            decomposes,
            involution: f.mul_unchecked(&f) == id,
            commutes: perms.iter().all(|p| p.mul_unchecked(&f) == f.mul_unchecked(p)),
        }
    });

    Ok(OrthogonalGroup {
        n,
        gl_order,
        matrices,
        permutation_count,
        phi_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let orders: Vec<(usize, usize)> = (2..=4)
            .map(|n| {
                let g = orthogonal_group(n).unwrap();
                (g.order(), g.gl_order)
            })
            .collect();
        assert_eq!(orders, vec![(2, 6), (6, 168), (48, 20160)]);
        assert!(orthogonal_group(4).unwrap().phi_checks.unwrap().all());
        assert!(orthogonal_group(1).is_err());
        assert!(orthogonal_group(5).is_err());
    }

    #[test]
    fn small_groups_are_permutations() {
        for n in 2..=3 {
            let g = orthogonal_group(n).unwrap();
            assert_eq!(g.permutation_count, g.order());
        }
    }
}
