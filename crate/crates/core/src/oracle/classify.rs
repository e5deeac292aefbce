//! Complete congruence classification of small unimodular forms.

use crate::error::{GwError, Result};
use crate::ring::RingSpec;

use super::congruence::{generator_moves, key_bits, State};
use super::matrix::{RingMatrix, SymMatrix};

/// Default bound on the number of symmetric matrices enumerated.
pub const DEFAULT_CLASSIFY_CAP: u64 = 1 << 22;

/// Congruence classes of all unimodular symmetric `n x n` matrices.
#[derive(Debug, Clone)]
pub struct Classification {
    spec: RingSpec,
    n: usize,
    bits: u32,
    /// Class id per packed matrix, `u32::MAX` for non-unimodular ones.
    class_of: Vec<u32>,
    num_classes: usize,
    unimodular: usize,
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    let mut root = x;
    while parent[root as usize] != root {
        root = parent[root as usize];
    }
    while parent[x as usize] != root {
        let next = parent[x as usize];
        parent[x as usize] = root;
        x = next;
    }
    root
}

/// Union-find over every symmetric matrix, joining each unimodular one
/// with its images under the generator moves.
pub fn classify_small(spec: RingSpec, n: usize, cap: u64) -> Result<Classification> {
    if n == 0 || n > 4 {
        return Err(GwError::Dimension(format!("form dimension must be 1..=4, got {n}")));
    }
    let bits = key_bits(spec, n)?;
    let entries = (n * (n + 1) / 2) as u32;
    let total_bits = bits * entries;
    if total_bits >= 64 || (1u64 << total_bits) > cap {
        return Err(GwError::CapExceeded {
            needed: 1u128 << total_bits.min(127),
            cap: cap as u128,
        });
    }
    let total = 1usize << total_bits;
    let moves = generator_moves(spec, n);
    let mut parent: Vec<u32> = (0..total as u32).collect();
    let mut is_unimodular = vec![false; total];
    for (key, unimodular) in is_unimodular.iter_mut().enumerate() {
        let st = State::from_key(key as u128, n, bits);
        if !st.to_sym(spec, n).is_unimodular() {
            continue;
        }
        *unimodular = true;
        for &mv in &moves {
            let other = st.apply(spec, n, mv).key(n, bits) as u32;
            let (ra, rb) = (find(&mut parent, key as u32), find(&mut parent, other));
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
    }
    let mut id_of_root = vec![u32::MAX; total];
    let mut class_of = vec![u32::MAX; total];
    let mut num_classes = 0u32;
    for key in 0..total {
        if !is_unimodular[key] {
            continue;
        }
        let r = find(&mut parent, key as u32) as usize;
        if id_of_root[r] == u32::MAX {
            id_of_root[r] = num_classes;
            num_classes += 1;
        }
        class_of[key] = id_of_root[r];
    }
    Ok(Classification {
        spec,
        n,
        bits,
        class_of,
        num_classes: num_classes as usize,
        unimodular: is_unimodular.iter().filter(|&&u| u).count(),
    })
}

impl Classification {
    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn num_unimodular(&self) -> usize {
        self.unimodular
    }

    pub fn num_matrices(&self) -> usize {
        self.class_of.len()
    }

    /// Class id of a unimodular form, `None` otherwise.
    pub fn class_of(&self, m: &SymMatrix) -> Option<usize> {
        if m.spec() != self.spec || m.dim() != self.n {
            return None;
        }
        let key = State::from_sym(m).key(self.n, self.bits) as usize;
        let c = self.class_of[key];
        (c != u32::MAX).then_some(c as usize)
    }

    pub fn class_of_diagonal(&self, d: &[u64]) -> Option<usize> {
        SymMatrix::diagonal(self.spec, d).ok().and_then(|m| self.class_of(&m))
    }

    /// One matrix per class, the first in packed order.
    pub fn representatives(&self) -> Vec<SymMatrix> {
        let mut out: Vec<Option<SymMatrix>> = vec![None; self.num_classes];
        for (key, &c) in self.class_of.iter().enumerate() {
            if c != u32::MAX && out[c as usize].is_none() {
                out[c as usize] = Some(State::from_key(key as u128, self.n, self.bits).to_sym(self.spec, self.n));
            }
        }
        out.into_iter().map(|m| m.expect("every class has a member")).collect()
    }

    /// Checks that no single generator move changes a class id.
    pub fn check_invariance(&self) -> bool {
        let moves = generator_moves(self.spec, self.n);
        self.class_of.iter().enumerate().all(|(key, &c)| {
            if c == u32::MAX {
                return true;
            }
            let st = State::from_key(key as u128, self.n, self.bits);
            moves
                .iter()
                .all(|&mv| self.class_of[st.apply(self.spec, self.n, mv).key(self.n, self.bits) as usize] == c)
        })
    }

    pub fn matrix_of_key(&self, key: usize) -> RingMatrix {
        State::from_key(key as u128, self.n, self.bits).to_sym(self.spec, self.n).matrix().clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_rank_two() {
        let c = classify_small(RingSpec::z2k(1), 2, DEFAULT_CLASSIFY_CAP).unwrap();
        assert_eq!(c.num_matrices(), 8);
        assert_eq!(c.num_unimodular(), 4);
        assert_eq!(c.num_classes(), 2);
        let h = SymMatrix::new(RingMatrix::from_rows(RingSpec::z2k(1), &[vec![0, 1], vec![1, 0]]).unwrap()).unwrap();
        assert_ne!(c.class_of(&h), c.class_of_diagonal(&[1, 1]));
        assert!(c.check_invariance());
    }

    #[test]
    fn z4_small_ranks() {
        let s = RingSpec::z2k(2);
        let c1 = classify_small(s, 1, DEFAULT_CLASSIFY_CAP).unwrap();
        assert_ne!(c1.class_of_diagonal(&[1]), c1.class_of_diagonal(&[3]));
        let c2 = classify_small(s, 2, DEFAULT_CLASSIFY_CAP).unwrap();
        assert_ne!(c2.class_of_diagonal(&[1, 1]), c2.class_of_diagonal(&[3, 3]));
        assert!(c2.check_invariance());
        assert!(classify_small(RingSpec::z2k(4), 4, DEFAULT_CLASSIFY_CAP).is_err());
    }
}
