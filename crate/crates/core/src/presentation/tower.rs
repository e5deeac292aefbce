//! Maps `GW(R) -> GW(R')` induced by the canonical surjections, and their
//! kernels.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{GwError, Result};
use crate::ring::{Family, RingSpec};
use crate::smith::{cokernel, left_kernel, row_lattice_basis, solve_left, IntMatrix};

use super::group::{AbelianGroupInfo, GwElement};
use super::{EnumerationOptions, GwRing};

/// The induced map on reduced coordinates and what is known about its
/// kernel.
#[derive(Debug, Clone)]
pub struct InducedMap {
    pub source: RingSpec,
    pub target: RingSpec,
    /// Row `i` is the image of source basis element `i`.
    pub matrix: Vec<Vec<BigInt>>,
    pub surjective: bool,
    pub kernel_torsion: Vec<BigInt>,
    pub kernel_free_rank: usize,
    /// Nonzero, distinct elements `<a><<x>>` with `x = 1` in the target.
    pub kernel_generators: Vec<GwElement>,
    /// Whether the kernel equals the span of `kernel_generators`.
    pub kernel_matches_generators: bool,
}

impl InducedMap {
    pub fn kernel_is_trivial(&self) -> bool {
        self.kernel_torsion.is_empty() && self.kernel_free_rank == 0
    }

    pub fn is_isomorphism(&self) -> bool {
        self.surjective && self.kernel_is_trivial()
    }

    pub fn describe_kernel(&self) -> String {
        let mut parts: Vec<String> = vec!["Z".to_string(); self.kernel_free_rank];
        parts.extend(self.kernel_torsion.iter().rev().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" ⊕ ")
        }
    }
}

fn order_rows(g: &AbelianGroupInfo) -> Vec<Vec<BigInt>> {
    let n = g.num_basis();
    g.orders()
        .iter()
        .enumerate()
        .filter(|(_, d)| !d.is_zero())
        .map(|(i, d)| {
            let mut v = vec![BigInt::zero(); n];
            v[i] = d.clone();
            v
        })
        .collect()
}

fn in_span(rows: &[Vec<BigInt>], cols: usize, y: &[BigInt]) -> bool {
    if y.iter().all(|x| x.is_zero()) {
        return true;
    }
    if rows.is_empty() {
        return false;
    }
    solve_left(&IntMatrix::from_rows(cols, rows), y).is_some()
}

/// The map `source -> target` induced on the groups by reducing units.
pub fn induced_map(source: &AbelianGroupInfo, target: &AbelianGroupInfo) -> Result<InducedMap> {
    let (sc, tc) = (source.classes(), target.classes());
    let proj = sc.projection(tc)?;
    let push = |x: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); tc.num_classes()];
        for (c, v) in x.iter().enumerate() {
            out[proj.map[c]] += v;
        }
        out
    };

    for rel in source.relations() {
        if !target.reduce(&push(rel)).is_zero() {
            return Err(GwError::Internal(format!(
                "relation of {} does not vanish in {}",
                sc.spec(),
                tc.spec()
            )));
        }
    }

    let (rs, rt) = (source.num_basis(), target.num_basis());
    let matrix: Vec<Vec<BigInt>> = source
        .basis_preimages()
        .iter()
        .map(|pre| target.reduce(&push(pre)).coords().to_vec())
        .collect();
    let ds = order_rows(source);
    let dt = order_rows(target);

    let mut image = matrix.clone();
    image.extend(dt.iter().cloned());
    let (ct, cf) = cokernel(rt, &image);
    let surjective = ct.is_empty() && cf == 0;

    // Kernel: y with y * matrix in span(dt), taken modulo ds.
    let mut kernel_rows: Vec<Vec<BigInt>> = if image.is_empty() {
        Vec::new()
    } else {
        left_kernel(&IntMatrix::from_rows(rt, &image)).into_iter().map(|k| k[..rs].to_vec()).collect()
    };
    if rt == 0 {
        kernel_rows = (0..rs)
            .map(|i| {
                let mut v = vec![BigInt::zero(); rs];
                v[i] = BigInt::from(1);
                v
            })
            .collect();
    }
    kernel_rows.extend(ds.iter().cloned());
    let kernel_basis = row_lattice_basis(rs, &kernel_rows);

    let (kernel_torsion, kernel_free_rank) = if kernel_basis.is_empty() {
        (Vec::new(), 0)
    } else {
        let kb = IntMatrix::from_rows(rs, &kernel_basis);
        let coords: Vec<Vec<BigInt>> = ds
            .iter()
            .map(|d| solve_left(&kb, d).ok_or_else(|| GwError::Internal("order relation outside kernel".into())))
            .collect::<Result<_>>()?;
        cokernel(kernel_basis.len(), &coords)
    };

    // Generators <a><<x>> = <a> - <ax> for x in the kernel on classes.
    let mut generators: Vec<GwElement> = Vec::new();
    for a in 0..sc.num_classes() {
        for &x in &proj.kernel {
            let mut v = vec![BigInt::zero(); sc.num_classes()];
            v[a] += 1;
            v[sc.mul(a, x)] -= 1;
            let e = source.reduce(&v);
            if !e.is_zero() && !generators.contains(&e) {
                generators.push(e);
            }
        }
    }
    let mut gen_rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    gen_rows.extend(ds.iter().cloned());
    let kernel_matches_generators = kernel_basis.iter().all(|k| in_span(&gen_rows, rs, k))
        && gen_rows.iter().all(|g| in_span(&kernel_basis, rs, g));

    Ok(InducedMap {
        source: sc.spec(),
        target: tc.spec(),
        matrix,
        surjective,
        kernel_torsion,
        kernel_free_rank,
        kernel_generators: generators,
        kernel_matches_generators,
    })
}

/// One step `n + 1 -> n` of a tower of projections.
#[derive(Debug, Clone)]
pub struct TowerStep {
    pub source: RingSpec,
    pub target: RingSpec,
    pub source_group: String,
    pub target_group: String,
    pub map: InducedMap,
    pub sampled: bool,
}

/// Checks every projection between consecutive parameters in
/// `n_from..=n_to`.
pub fn tower_check(family: Family, n_from: u32, n_to: u32, opts: &EnumerationOptions) -> Result<Vec<TowerStep>> {
    if n_from == 0 || n_from >= n_to {
        return Err(GwError::Precondition(format!("need 1 <= from < to, got {n_from}..{n_to}")));
    }
    let rings: Vec<GwRing> = (n_from..=n_to)
        .map(|n| RingSpec::new(family, n).and_then(|s| GwRing::compute(s, opts)))
        .collect::<Result<_>>()?;
    rings
        .windows(2)
        .map(|w| {
            let (lo, hi) = (&w[0], &w[1]);
            Ok(TowerStep {
                source: hi.spec(),
                target: lo.spec(),
                source_group: hi.gw().describe(),
                target_group: lo.gw().describe(),
                map: induced_map(hi.gw(), lo.gw())?,
                sampled: hi.sampled().is_some() || lo.sampled().is_some(),
            })
        })
        .collect()
}
