//! Finitely presented abelian groups on square-class generators, and the
//! ring structure induced by `<a><b> = <ab>`.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{GwError, Result};
use crate::smith::{cokernel, row_lattice_basis, smith_normal_form, solve_left_with, IntMatrix, SmithForm};
use crate::square_classes::SquareClassGroup;

/// Combinations tried when looking for a basis made of `<1>` and Pfister
/// forms before falling back to the raw Smith basis.
const MAX_BASIS_ATTEMPTS: usize = 20_000;

/// An element to try as a basis vector, given in class coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCandidate {
    pub label: String,
    pub vector: Vec<BigInt>,
}

/// The candidates `<1>`, then `<<b>>` for an F2-basis `b` of the square
/// classes, then `<<c>>` for the remaining classes.
pub fn default_candidates(classes: &SquareClassGroup) -> Vec<BasisCandidate> {
    let k = classes.num_classes();
    let unit = |c: usize| {
        let mut v = vec![BigInt::zero(); k];
        v[c] = BigInt::one();
        v
    };
    let pfister = |c: usize| {
        let mut v = unit(0);
        v[c] -= 1;
        BasisCandidate {
            label: format!("<<{}>>", classes.format_class(c)),
            vector: v,
        }
    };
    let mut out = vec![BasisCandidate {
        label: "<1>".into(),
        vector: unit(0),
    }];
    let basis = classes.f2_basis();
    out.extend(basis.iter().map(|&c| pfister(c)));
    out.extend((1..k).filter(|c| !basis.contains(c)).map(pfister));
    out
}

/// `Z^classes / relations`, with coordinates in a reduced basis.
#[derive(Clone)]
pub struct AbelianGroupInfo {
    classes: Arc<SquareClassGroup>,
    relations: Vec<Vec<BigInt>>,
    relation_matrix: IntMatrix,
    certificate: SmithForm,
    orders: Vec<BigInt>,
    labels: Vec<String>,
    basis_preimages: Vec<Vec<BigInt>>,
    generator_coords: Vec<Vec<BigInt>>,
    oriented: bool,
    is_ring: bool,
    fingerprint: u64,
}

/// An element of an [`AbelianGroupInfo`] in its reduced basis. Torsion
/// coordinates lie in `[0, order)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GwElement {
    coords: Vec<BigInt>,
    group: u64,
}

impl GwElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|x| x.is_zero())
    }
}

impl fmt::Display for GwElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

fn order_of(y: &[BigInt], orders: &[BigInt]) -> BigInt {
    let mut acc = BigInt::one();
    for (x, d) in y.iter().zip(orders) {
        if d.is_zero() {
            if !x.is_zero() {
                return BigInt::zero();
            }
            continue;
        }
        let o = d / x.gcd(d);
        acc = acc.lcm(&o);
    }
    acc
}

fn reduce_mod(mut y: Vec<BigInt>, orders: &[BigInt]) -> Vec<BigInt> {
    for (x, d) in y.iter_mut().zip(orders) {
        if !d.is_zero() {
            *x = x.mod_floor(d);
        }
    }
    y
}

fn unit_vec(n: usize, i: usize) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n];
    v[i] = BigInt::one();
    v
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    idx: Vec<usize>,
    n: usize,
    first: bool,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            idx: (0..k).collect(),
            n,
            first: true,
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}

impl AbelianGroupInfo {
    /// Builds `Z^classes / span(rows)` with the default basis candidates.
    pub fn from_relations(classes: Arc<SquareClassGroup>, rows: &[Vec<BigInt>]) -> Result<Self> {
        let cands = default_candidates(&classes);
        Self::with_candidates(classes, rows, &cands)
    }

    pub fn with_candidates(
        classes: Arc<SquareClassGroup>,
        rows: &[Vec<BigInt>],
        candidates: &[BasisCandidate],
    ) -> Result<Self> {
        let k = classes.num_classes();
        if rows.iter().any(|r| r.len() != k) {
            return Err(GwError::Dimension("relation length differs from class count".into()));
        }
        let relations = row_lattice_basis(k, rows);
        let relation_matrix = IntMatrix::from_rows(k, &relations);
        let certificate = smith_normal_form(&relation_matrix);
        let diag = certificate.diagonal();
        let rank = certificate.rank();

        // Smith coordinates y = x V, keeping only non-trivial positions.
        let nontrivial: Vec<usize> = (0..k).filter(|&i| i >= rank || !diag[i].is_one()).collect();
        let snf_orders: Vec<BigInt> =
            nontrivial.iter().map(|&i| if i >= rank { BigInt::zero() } else { diag[i].clone() }).collect();
        let r = nontrivial.len();
        let to_snf = |x: &[BigInt]| -> Vec<BigInt> {
            let y = certificate.v.left_apply(x);
            reduce_mod(nontrivial.iter().map(|&i| y[i].clone()).collect(), &snf_orders)
        };

        let free = snf_orders.iter().filter(|d| d.is_zero()).count();
        let torsion_size: BigInt = snf_orders.iter().filter(|d| !d.is_zero()).product();
        let relation_rows: Vec<Vec<BigInt>> = (0..r)
            .filter(|&i| !snf_orders[i].is_zero())
            .map(|i| {
                let mut v = vec![BigInt::zero(); r];
                v[i] = snf_orders[i].clone();
                v
            })
            .collect();

        let cand_snf: Vec<Vec<BigInt>> = candidates.iter().map(|c| to_snf(&c.vector)).collect();
        let cand_order: Vec<BigInt> = cand_snf.iter().map(|y| order_of(y, &snf_orders)).collect();

        let is_basis = |choice: &[usize]| -> bool {
            let infinite = choice.iter().filter(|&&c| cand_order[c].is_zero()).count();
            if infinite != free {
                return false;
            }
            let prod: BigInt = choice.iter().filter(|&&c| !cand_order[c].is_zero()).map(|&c| &cand_order[c]).product();
            if prod != torsion_size {
                return false;
            }
            let mut gens: Vec<Vec<BigInt>> = choice.iter().map(|&c| cand_snf[c].clone()).collect();
            gens.extend(relation_rows.iter().cloned());
            let (tors, free_rank) = cokernel(r, &gens);
            tors.is_empty() && free_rank == 0
        };

        let found = Combinations::new(candidates.len(), r).take(MAX_BASIS_ATTEMPTS).find(|c| is_basis(c));

        let (chosen, chosen_snf, oriented): (Vec<BasisCandidate>, Vec<Vec<BigInt>>, bool) = match found {
            Some(choice) => {
                let mut choice = choice;
                // free generators first, then torsion by decreasing order
                choice.sort_by(|&a, &b| {
                    let (oa, ob) = (&cand_order[a], &cand_order[b]);
                    match (oa.is_zero(), ob.is_zero()) {
                        (true, true) => a.cmp(&b),
                        (true, false) => std::cmp::Ordering::Less,
                        (false, true) => std::cmp::Ordering::Greater,
                        (false, false) => ob.cmp(oa).then(a.cmp(&b)),
                    }
                });
                (
                    choice.iter().map(|&c| candidates[c].clone()).collect(),
                    choice.iter().map(|&c| cand_snf[c].clone()).collect(),
                    true,
                )
            }
            None => {
                let mut order: Vec<usize> = (0..r).collect();
                order.sort_by(|&a, &b| match (snf_orders[a].is_zero(), snf_orders[b].is_zero()) {
                    (true, true) => a.cmp(&b),
                    (true, false) => std::cmp::Ordering::Less,
                    (false, true) => std::cmp::Ordering::Greater,
                    (false, false) => snf_orders[b].cmp(&snf_orders[a]).then(a.cmp(&b)),
                });
                let chosen = order
                    .iter()
                    .enumerate()
                    .map(|(pos, &i)| BasisCandidate {
                        label: format!("e{}", pos + 1),
                        vector: certificate.v_inv.row(nontrivial[i]).to_vec(),
                    })
                    .collect();
                let snf = order.iter().map(|&i| unit_vec(r, i)).collect();
                (chosen, snf, false)
            }
        };

        let orders: Vec<BigInt> = chosen_snf.iter().map(|y| order_of(y, &snf_orders)).collect();

        // Coordinates of each Smith basis vector in the chosen basis.
        let mut stacked = chosen_snf.clone();
        stacked.extend(relation_rows.iter().cloned());
        let stacked_snf = smith_normal_form(&IntMatrix::from_rows(r, &stacked));
        let mut change = Vec::with_capacity(r);
        for i in 0..r {
            let x = solve_left_with(&stacked_snf, &unit_vec(r, i))
                .ok_or_else(|| GwError::Internal("chosen basis does not generate".into()))?;
            change.push(x[..r].to_vec());
        }
        let change = IntMatrix::from_rows(r, &change);

        let generator_coords: Vec<Vec<BigInt>> = (0..k)
            .map(|j| reduce_mod(change.left_apply(&to_snf(&unit_vec(k, j))), &orders))
            .collect();

        let labels: Vec<String> = chosen.iter().map(|c| c.label.clone()).collect();
        let basis_preimages: Vec<Vec<BigInt>> = chosen.into_iter().map(|c| c.vector).collect();

        let mut hasher = DefaultHasher::new();
        classes.spec().hash(&mut hasher);
        relations.hash(&mut hasher);
        orders.hash(&mut hasher);
        basis_preimages.hash(&mut hasher);
        let fingerprint = hasher.finish();

        let info = AbelianGroupInfo {
            classes,
            relations,
            relation_matrix,
            certificate,
            orders,
            labels,
            basis_preimages,
            generator_coords,
            oriented,
            is_ring: false,
            fingerprint,
        };
        info.check_basis_round_trip()?;
        Ok(info)
    }

    /// Each chosen basis vector must reduce to the corresponding unit vector.
    fn check_basis_round_trip(&self) -> Result<()> {
        for (i, pre) in self.basis_preimages.iter().enumerate() {
            let e = self.reduce(pre);
            if e.coords != reduce_mod(unit_vec(self.orders.len(), i), &self.orders) {
                return Err(GwError::Internal(format!("basis vector {} does not reduce to itself", self.labels[i])));
            }
        }
        Ok(())
    }

    pub(crate) fn mark_ring(mut self) -> Self {
        self.is_ring = true;
        self
    }

    pub fn classes(&self) -> &SquareClassGroup {
        &self.classes
    }

    pub fn classes_arc(&self) -> Arc<SquareClassGroup> {
        Arc::clone(&self.classes)
    }

    /// Lattice basis of the relations, in class coordinates.
    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    /// The relation matrix and its Smith certificate.
    pub fn certificate(&self) -> (&IntMatrix, &SmithForm) {
        (&self.relation_matrix, &self.certificate)
    }

    /// Order of each reduced basis element; `0` marks a free generator.
    pub fn orders(&self) -> &[BigInt] {
        &self.orders
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn basis_preimages(&self) -> &[Vec<BigInt>] {
        &self.basis_preimages
    }

    pub fn num_basis(&self) -> usize {
        self.orders.len()
    }

    pub fn free_rank(&self) -> usize {
        self.orders.iter().filter(|d| d.is_zero()).count()
    }

    /// Torsion orders in basis order.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.orders.iter().filter(|d| !d.is_zero()).cloned().collect()
    }

    /// Invariant factors `d1 | d2 | ...`, all at least 2.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.certificate.torsion()
    }

    /// Whether the basis consists of `<1>` and Pfister-type candidates.
    pub fn is_oriented(&self) -> bool {
        self.oriented
    }

    pub fn is_ring(&self) -> bool {
        self.is_ring
    }

    pub fn generator_coords(&self, class: usize) -> &[BigInt] {
        &self.generator_coords[class]
    }

    pub fn element(&self, coords: Vec<BigInt>) -> Result<GwElement> {
        if coords.len() != self.num_basis() {
            return Err(GwError::Dimension(format!("expected {} coordinates, got {}", self.num_basis(), coords.len())));
        }
        Ok(GwElement {
            coords: reduce_mod(coords, &self.orders),
            group: self.fingerprint,
        })
    }

    pub fn zero(&self) -> GwElement {
        GwElement {
            coords: vec![BigInt::zero(); self.num_basis()],
            group: self.fingerprint,
        }
    }

    pub fn basis_element(&self, i: usize) -> GwElement {
        GwElement {
            coords: reduce_mod(unit_vec(self.num_basis(), i), &self.orders),
            group: self.fingerprint,
        }
    }

    /// Image of a class-coordinate vector `sum x_c <c>`.
    pub fn reduce(&self, x: &[BigInt]) -> GwElement {
        let mut acc = vec![BigInt::zero(); self.num_basis()];
        for (xc, gc) in x.iter().zip(&self.generator_coords) {
            if xc.is_zero() {
                continue;
            }
            for (a, g) in acc.iter_mut().zip(gc) {
                *a += xc * g;
            }
        }
        GwElement {
            coords: reduce_mod(acc, &self.orders),
            group: self.fingerprint,
        }
    }

    pub fn reduce_i64(&self, x: &[i64]) -> GwElement {
        let big: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        self.reduce(&big)
    }

    /// The symbol `<c>`.
    pub fn symbol(&self, class: usize) -> GwElement {
        self.reduce(&unit_vec(self.classes.num_classes(), class))
    }

    /// `<<c>> = <1> - <c>`.
    pub fn pfister1(&self, class: usize) -> GwElement {
        let mut v = unit_vec(self.classes.num_classes(), 0);
        v[class] -= 1;
        self.reduce(&v)
    }

    /// `<<a, b>> = <<a>> <<b>>`.
    pub fn pfister2(&self, a: usize, b: usize) -> Result<GwElement> {
        self.mul(&self.pfister1(a), &self.pfister1(b))
    }

    fn check(&self, x: &GwElement) -> Result<()> {
        if x.group != self.fingerprint {
            return Err(GwError::BasisMismatch);
        }
        Ok(())
    }

    /// A class-coordinate vector mapping to `x`.
    pub fn lift(&self, x: &GwElement) -> Result<Vec<BigInt>> {
        self.check(x)?;
        let mut out = vec![BigInt::zero(); self.classes.num_classes()];
        for (c, pre) in x.coords.iter().zip(&self.basis_preimages) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(pre) {
                *o += c * p;
            }
        }
        Ok(out)
    }

    /// Rank homomorphism: the coordinate sum of any lift. Well defined
    /// because every relation has coordinate sum zero.
    pub fn rank(&self, x: &GwElement) -> Result<BigInt> {
        Ok(self.lift(x)?.iter().sum())
    }

    pub fn add(&self, x: &GwElement, y: &GwElement) -> Result<GwElement> {
        self.check(x)?;
        self.check(y)?;
        self.element(x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, x: &GwElement, y: &GwElement) -> Result<GwElement> {
        self.check(x)?;
        self.check(y)?;
        self.element(x.coords.iter().zip(&y.coords).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &BigInt, x: &GwElement) -> Result<GwElement> {
        self.check(x)?;
        self.element(x.coords.iter().map(|a| k * a).collect())
    }

    /// Product induced by `<a><b> = <ab>`.
    pub fn mul(&self, x: &GwElement, y: &GwElement) -> Result<GwElement> {
        if !self.is_ring {
            return Err(GwError::Precondition("relations do not generate an ideal; no ring structure".into()));
        }
        let (lx, ly) = (self.lift(x)?, self.lift(y)?);
        let k = self.classes.num_classes();
        let mut prod = vec![BigInt::zero(); k];
        for (a, xa) in lx.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in ly.iter().enumerate() {
                if !yb.is_zero() {
                    prod[self.classes.mul(a, b)] += xa * yb;
                }
            }
        }
        Ok(self.reduce(&prod))
    }

    /// Products of all pairs of basis elements.
    pub fn structure_table(&self) -> Result<Vec<Vec<GwElement>>> {
        let n = self.num_basis();
        (0..n)
            .map(|i| (0..n).map(|j| self.mul(&self.basis_element(i), &self.basis_element(j))).collect())
            .collect()
    }

    /// Quotient by the subgroup generated by `elems`.
    pub fn quotient_by_elements(&self, elems: &[GwElement]) -> Result<AbelianGroupInfo> {
        let mut rows = self.relations.clone();
        for e in elems {
            rows.push(self.lift(e)?);
        }
        let q = AbelianGroupInfo::from_relations(self.classes_arc(), &rows)?;
        // The quotient stays a ring iff the new generators span an ideal.
        let closed = self.is_ring
            && elems.iter().all(|e| {
                (0..self.classes.num_classes()).all(|c| {
                    self.mul(&self.symbol(c), e)
                        .and_then(|p| self.lift(&p))
                        .map(|v| q.reduce(&v).is_zero())
                        .unwrap_or(false)
                })
            });
        Ok(if closed { q.mark_ring() } else { q })
    }

    /// Group text such as `Z ⊕ Z/4 ⊕ Z/2`, in basis order.
    pub fn describe(&self) -> String {
        let parts: Vec<String> = self
            .orders
            .iter()
            .map(|d| if d.is_zero() { "Z".to_string() } else { format!("Z/{d}") })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.orders.is_empty()
    }
}

impl fmt::Debug for AbelianGroupInfo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AbelianGroupInfo")
            .field("ring", &self.classes.spec().to_string())
            .field("group", &self.describe())
            .field("labels", &self.labels)
            .field("oriented", &self.oriented)
            .finish()
    }
}

/// Whether `x` has a negative free coordinate. Used only for display.
pub fn has_negative(x: &GwElement) -> bool {
    x.coords.iter().any(|c| c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn combinations_are_lexicographic() {
        let all: Vec<Vec<usize>> = Combinations::new(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
    }

    #[test]
    fn z4_by_hand() {
        let classes = Arc::new(SquareClassGroup::compute(RingSpec::z2k(2)));
        let g = AbelianGroupInfo::from_relations(classes, &[big(&[4, -4])]).unwrap();
        assert_eq!(g.describe(), "Z ⊕ Z/4");
        assert_eq!(g.labels(), &["<1>", "<<3>>"]);
        assert_eq!(g.generator_coords(0), big(&[1, 0]).as_slice());
        assert_eq!(g.generator_coords(1), big(&[1, 3]).as_slice());
        assert!(g.is_oriented());
    }

    #[test]
    fn raw_basis_fallback() {
        let classes = Arc::new(SquareClassGroup::compute(RingSpec::z2k(2)));
        let g = AbelianGroupInfo::with_candidates(classes, &[big(&[4, -4])], &[]).unwrap();
        assert!(!g.is_oriented());
        assert_eq!(g.free_rank(), 1);
        assert_eq!(g.torsion(), big(&[4]));
        for c in 0..2 {
            let v = unit_vec(2, c);
            let e = g.reduce(&v);
            let back = g.lift(&e).unwrap();
            assert_eq!(g.reduce(&back), e);
        }
    }
}
