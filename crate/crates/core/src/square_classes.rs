//! The group of square classes `R^x / R^x2`.

use crate::error::{GwError, Result};
use crate::ring::{Family, RingElement, RingSpec};

/// Square classes of a ring, as an elementary abelian 2-group.
///
/// Class `0` is always the class of `1`. Representatives are the smallest
/// canonical encodings in each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareClassGroup {
    spec: RingSpec,
    reps: Vec<u64>,
    /// Indexed by `unit >> 1`.
    class_of: Vec<u32>,
    mul_table: Vec<u32>,
}

impl SquareClassGroup {
    /// Computes the square classes by enumerating all squares of units.
    pub fn compute(spec: RingSpec) -> Self {
        let units = spec.num_units() as usize;
        let mut is_square = vec![false; units];
        for u in spec.units_raw() {
            is_square[(spec.square(u) >> 1) as usize] = true;
        }
        let squares: Vec<u64> = spec.units_raw().filter(|&u| is_square[(u >> 1) as usize]).collect();

        const UNASSIGNED: u32 = u32::MAX;
        let mut class_of = vec![UNASSIGNED; units];
        let mut reps = Vec::new();
        for u in spec.units_raw() {
            if class_of[(u >> 1) as usize] != UNASSIGNED {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(u);
            for &s in &squares {
                let slot = &mut class_of[(spec.mul(u, s) >> 1) as usize];
                debug_assert!(*slot == UNASSIGNED || *slot == c);
                *slot = c;
            }
        }

        let k = reps.len();
        let mut mul_table = vec![0u32; k * k];
        for i in 0..k {
            for j in 0..k {
                mul_table[i * k + j] = class_of[(spec.mul(reps[i], reps[j]) >> 1) as usize];
            }
        }
        SquareClassGroup {
            spec,
            reps,
            class_of,
            mul_table,
        }
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn num_classes(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    pub fn rep(&self, class: usize) -> u64 {
        self.reps[class]
    }

    /// Class index of a unit encoding. The argument must be a unit.
    #[inline]
    pub fn class_of(&self, unit: u64) -> usize {
        debug_assert!(self.spec.is_unit(unit));
        self.class_of[(unit >> 1) as usize] as usize
    }

    /// Raw lookup table keyed by `unit >> 1`.
    pub fn class_table(&self) -> &[u32] {
        &self.class_of
    }

    pub fn class_of_element(&self, e: &RingElement) -> Result<usize> {
        if e.spec() != self.spec {
            return Err(GwError::SpecMismatch {
                left: e.spec(),
                right: self.spec,
            });
        }
        if !e.is_unit() {
            return Err(GwError::NonUnit(e.to_string()));
        }
        Ok(self.class_of(e.repr()))
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul_table[a * self.reps.len() + b] as usize
    }

    /// Class of `-1`.
    pub fn minus_one(&self) -> usize {
        self.class_of(self.spec.neg(1))
    }

    /// Class of the additive inverse of the representative of `class`.
    pub fn negate(&self, class: usize) -> usize {
        self.class_of(self.spec.neg(self.reps[class]))
    }

    pub fn format_class(&self, class: usize) -> String {
        self.spec.format(self.reps[class])
    }

    /// Looks up the class of a unit given in element text form.
    pub fn find_class(&self, text: &str) -> Result<usize> {
        let e = self.spec.parse_element(text)?;
        self.class_of_element(&e)
    }

    /// The subgroup generated by `gens`, as a membership vector.
    pub fn span(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.num_classes()];
        inside[0] = true;
        for &g in gens {
            self.extend_span(&mut inside, g);
        }
        inside
    }

    fn extend_span(&self, inside: &mut [bool], g: usize) {
        let current: Vec<usize> = (0..inside.len()).filter(|&c| inside[c]).collect();
        for c in current {
            inside[self.mul(c, g)] = true;
        }
    }

    /// An F2-basis of the group, as class indices.
    ///
    /// For `F2[x]/(x^n)` the classes of `1 + x^(2l+1)` are tried first, so
    /// the canonical basis is returned whenever it is one.
    pub fn f2_basis(&self) -> Vec<usize> {
        let k = self.num_classes();
        let mut candidates = Vec::new();
        if self.spec.family() == Family::Trunc2 {
            let n = self.spec.parameter();
            candidates.extend(
                (0..)
                    .map(|l| 2 * l + 1)
                    .take_while(|&e| e < n)
                    .map(|e| self.class_of(1 | (1u64 << e))),
            );
        }
        candidates.extend(1..k);

        let mut inside = vec![false; k];
        inside[0] = true;
        let mut basis = Vec::new();
        for c in candidates {
            if inside.iter().all(|&b| b) {
                break;
            }
            if !inside[c] {
                self.extend_span(&mut inside, c);
                basis.push(c);
            }
        }
        assert!(inside.iter().all(|&b| b), "basis does not span");
        assert_eq!(1usize << basis.len(), k, "square classes are not elementary abelian");
        basis
    }

    /// The map on square classes induced by the canonical surjection onto
    /// `target`.
    pub fn projection(&self, target: &SquareClassGroup) -> Result<ClassProjection> {
        if !self.spec.surjects_onto(&target.spec) {
            return Err(GwError::IncompatibleSpecs {
                source_spec: self.spec,
                target_spec: target.spec,
            });
        }
        let map: Vec<usize> = self
            .reps
            .iter()
            .map(|&r| target.class_of(target.spec.reduce(r)))
            .collect();
        for u in self.spec.units_raw() {
            if map[self.class_of(u)] != target.class_of(target.spec.reduce(u)) {
                return Err(GwError::Internal(format!(
                    "class projection {} -> {} does not commute at {}",
                    self.spec,
                    target.spec,
                    self.spec.format(u)
                )));
            }
        }
        let mut hit = vec![false; target.num_classes()];
        for &m in &map {
            hit[m] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(GwError::Internal("class projection is not surjective".into()));
        }
        let kernel = (0..map.len()).filter(|&c| map[c] == 0).collect();
        Ok(ClassProjection { map, kernel })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassProjection {
    pub map: Vec<usize>,
    pub kernel: Vec<usize>,
}

impl ClassProjection {
    pub fn is_bijective(&self) -> bool {
        self.kernel.len() == 1
    }
}

pub fn compute_square_classes(spec: RingSpec) -> SquareClassGroup {
    SquareClassGroup::compute(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_invariants(g: &SquareClassGroup) {
        let spec = g.spec();
        let k = g.num_classes();
        assert_eq!(g.rep(0), 1);
        assert_eq!(g.class_of(1), 0);
        let squares: std::collections::BTreeSet<u64> = spec.units_raw().map(|u| spec.square(u)).collect();
        assert_eq!(k as u64 * squares.len() as u64, spec.num_units());
        for u in spec.units_raw() {
            assert_eq!(g.class_of(spec.square(u)), 0);
            for v in spec.units_raw() {
                assert_eq!(g.class_of(spec.mul(u, v)), g.mul(g.class_of(u), g.class_of(v)));
            }
            // u / rep is a square
            let q = spec.mul(u, spec.inv_unit(g.rep(g.class_of(u))));
            assert!(squares.contains(&q));
        }
        for c in 0..k {
            assert_eq!(g.mul(c, c), 0);
            assert!(spec.units_raw().any(|u| g.class_of(u) == c));
            // representative is the minimum of its class
            assert_eq!(spec.units_raw().find(|&u| g.class_of(u) == c), Some(g.rep(c)));
        }
    }

    #[test]
    fn small_cyclic_rings() {
        let z4 = SquareClassGroup::compute(RingSpec::z2k(2));
        assert_eq!(z4.reps(), &[1, 3]);
        let z8 = SquareClassGroup::compute(RingSpec::z2k(3));
        assert_eq!(z8.reps(), &[1, 3, 5, 7]);
        assert_eq!(SquareClassGroup::compute(RingSpec::z2k(4)).num_classes(), 4);
        let counts: Vec<usize> = (1..=5)
            .map(|n| SquareClassGroup::compute(RingSpec::z2k(n)).num_classes())
            .collect();
        assert_eq!(counts, vec![1, 2, 4, 4, 4]);
    }

    #[test]
    fn invariants_hold() {
        for n in 1..=7 {
            check_invariants(&SquareClassGroup::compute(RingSpec::z2k(n)));
            check_invariants(&SquareClassGroup::compute(RingSpec::trunc2(n)));
        }
    }

    #[test]
    fn truncated_counts() {
        for n in 1..=10 {
            let g = SquareClassGroup::compute(RingSpec::trunc2(n));
            assert_eq!(g.num_classes(), 1 << (n / 2), "n = {n}");
        }
    }

    #[test]
    fn canonical_truncated_basis() {
        let g = SquareClassGroup::compute(RingSpec::trunc2(6));
        let basis = g.f2_basis();
        let expected: Vec<usize> = [0b11u64, 0b1001, 0b100001].iter().map(|&u| g.class_of(u)).collect();
        assert_eq!(basis, expected);
        for n in 1..=10u32 {
            let g = SquareClassGroup::compute(RingSpec::trunc2(n));
            let basis = g.f2_basis();
            let canonical: Vec<usize> = (0..)
                .map(|l| 2 * l + 1)
                .take_while(|&e| e < n)
                .map(|e| g.class_of(1 | 1u64 << e))
                .collect();
            assert_eq!(basis, canonical, "n = {n}");
        }
    }

    #[test]
    fn trivial_and_cyclic_bases() {
        assert!(SquareClassGroup::compute(RingSpec::trunc2(1)).f2_basis().is_empty());
        assert!(SquareClassGroup::compute(RingSpec::z2k(1)).f2_basis().is_empty());
        let z8 = SquareClassGroup::compute(RingSpec::z2k(3));
        let basis = z8.f2_basis();
        assert_eq!(basis.iter().map(|&c| z8.rep(c)).collect::<Vec<_>>(), vec![3, 5]);
        assert_eq!(z8.mul(z8.class_of(3), z8.class_of(5)), z8.class_of(7));
    }

    #[test]
    fn projections() {
        let g = |spec| SquareClassGroup::compute(spec);
        let p = g(RingSpec::z2k(4)).projection(&g(RingSpec::z2k(3))).unwrap();
        assert!(p.is_bijective());

        let src = g(RingSpec::trunc2(4));
        let p = src.projection(&g(RingSpec::trunc2(3))).unwrap();
        assert_eq!(p.kernel, vec![0, src.class_of(0b1001)]);

        let p = g(RingSpec::trunc2(3)).projection(&g(RingSpec::trunc2(2))).unwrap();
        assert!(p.is_bijective());

        assert!(matches!(
            g(RingSpec::z2k(3)).projection(&g(RingSpec::z2k(4))),
            Err(GwError::IncompatibleSpecs { .. })
        ));
        assert!(g(RingSpec::z2k(3)).projection(&g(RingSpec::trunc2(2))).is_err());
    }

    #[test]
    fn projection_kernel_exactness() {
        for n in 1..=8 {
            let p = g_trunc(n + 1).projection(&g_trunc(n)).unwrap();
            assert_eq!(p.kernel.len(), if n % 2 == 1 { 2 } else { 1 }, "n = {n}");
        }
    }

    fn g_trunc(n: u32) -> SquareClassGroup {
        SquareClassGroup::compute(RingSpec::trunc2(n))
    }
}
