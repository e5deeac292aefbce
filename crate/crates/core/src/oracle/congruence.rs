//! Congruence of small symmetric matrices by orbit search.

use rustc_hash::FxHashMap;

use crate::error::{GwError, Result};
use crate::ring::{Family, RingSpec};

use super::matrix::{RingMatrix, SymMatrix, MAX_FORM_DIM};

/// Default bound on the number of states visited by [`congruent_bfs`].
pub const DEFAULT_VISITED_CAP: usize = 50_000_000;

/// A generator of `GL_n(R)` acting by `A -> P A P^T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Move {
    /// `P = I + t E_ij`.
    Transvection { i: usize, j: usize, t: u64 },
    /// Row and column `i` scaled by a unit.
    Scale { i: usize, u: u64 },
    /// Rows and columns `i` and `j` swapped.
    Swap { i: usize, j: usize },
}

impl Move {
    pub fn matrix(&self, spec: RingSpec, n: usize) -> RingMatrix {
        let mut p = RingMatrix::identity(spec, n);
        match *self {
            Move::Transvection { i, j, t } => p.set(i, j, t),
            Move::Scale { i, u } => p.set(i, i, u),
            Move::Swap { i, j } => {
                p.set(i, i, 0);
                p.set(j, j, 0);
                p.set(i, j, 1);
                p.set(j, i, 1);
            }
        }
        p
    }
}

/// Transvections by an additive generating set of `R` (products of these
/// give every `I + t E_ij`), scalings by every unit other than `1`, and
/// transpositions.
pub fn generator_moves(spec: RingSpec, n: usize) -> Vec<Move> {
    let additive: Vec<u64> = match spec.family() {
        Family::Z2k => vec![1],
        Family::Trunc2 => (0..spec.parameter()).map(|e| 1u64 << e).collect(),
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.extend(additive.iter().map(|&t| Move::Transvection { i, j, t }));
            }
        }
    }
    for i in 0..n {
        out.extend(spec.units_raw().filter(|&u| u != 1).map(|u| Move::Scale { i, u }));
    }
    for i in 0..n {
        for j in i + 1..n {
            out.push(Move::Swap { i, j });
        }
    }
    out
}

/// Dense symmetric state used by the searches.
#[derive(Clone, Copy, PartialEq, Eq)]
pub(crate) struct State {
    pub(crate) a: [u64; MAX_FORM_DIM * MAX_FORM_DIM],
}

const W: usize = MAX_FORM_DIM;

impl State {
    pub(crate) fn from_sym(m: &SymMatrix) -> Self {
        let mut a = [0; W * W];
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                a[i * W + j] = m.get(i, j);
            }
        }
        State { a }
    }

    pub(crate) fn to_sym(self, spec: RingSpec, n: usize) -> SymMatrix {
        let rows: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| self.a[i * W + j]).collect()).collect();
        SymMatrix::new(RingMatrix::from_rows(spec, &rows).expect("square")).expect("symmetric")
    }

    /// Packs the upper triangle, `bits` per entry.
    #[inline]
    pub(crate) fn key(&self, n: usize, bits: u32) -> u128 {
        let mut k = 0u128;
        let mut shift = 0;
        for i in 0..n {
            for j in i..n {
                k |= (self.a[i * W + j] as u128) << shift;
                shift += bits;
            }
        }
        k
    }

    pub(crate) fn from_key(key: u128, n: usize, bits: u32) -> Self {
        let mut a = [0; W * W];
        let mask = (1u128 << bits) - 1;
        let mut shift = 0;
        for i in 0..n {
            for j in i..n {
                let x = ((key >> shift) & mask) as u64;
                a[i * W + j] = x;
                a[j * W + i] = x;
                shift += bits;
            }
        }
        State { a }
    }

    #[inline]
    pub(crate) fn apply(&self, spec: RingSpec, n: usize, mv: Move) -> State {
        let mut a = self.a;
        match mv {
            Move::Transvection { i, j, t } => {
                for k in 0..n {
                    a[i * W + k] = spec.add(a[i * W + k], spec.mul(t, a[j * W + k]));
                }
                for k in 0..n {
                    a[k * W + i] = spec.add(a[k * W + i], spec.mul(t, a[k * W + j]));
                }
            }
            Move::Scale { i, u } => {
                for k in 0..n {
                    a[i * W + k] = spec.mul(u, a[i * W + k]);
                }
                for k in 0..n {
                    a[k * W + i] = spec.mul(u, a[k * W + i]);
                }
            }
            Move::Swap { i, j } => {
                for k in 0..n {
                    a.swap(i * W + k, j * W + k);
                }
                for k in 0..n {
                    a.swap(k * W + i, k * W + j);
                }
            }
        }
        State { a }
    }
}

pub(crate) fn key_bits(spec: RingSpec, n: usize) -> Result<u32> {
    let bits = spec.parameter();
    if bits as usize * n * (n + 1) / 2 > 128 {
        return Err(GwError::Precondition(format!("{spec} is too large for packed {n}x{n} states")));
    }
    Ok(bits)
}

/// Outcome of an orbit search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// `witness * A * witness^T = B`.
    Congruent { witness: RingMatrix, visited: usize },
    /// The whole orbit of `A` was closed without meeting `B`.
    NotCongruent { orbit_size: usize },
    CapExceeded { visited: usize },
}

impl Verdict {
    pub fn is_congruent(&self) -> bool {
        matches!(self, Verdict::Congruent { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Congruent { .. } => "congruent",
            Verdict::NotCongruent { .. } => "not_congruent",
            Verdict::CapExceeded { .. } => "cap_exceeded",
        }
    }
}

fn check_pair(a: &SymMatrix, b: &SymMatrix) -> Result<()> {
    if a.spec() != b.spec() {
        return Err(GwError::SpecMismatch {
            left: a.spec(),
            right: b.spec(),
        });
    }
    if a.dim() != b.dim() {
        return Err(GwError::Dimension(format!("forms of rank {} and {}", a.dim(), b.dim())));
    }
    for m in [a, b] {
        if !m.is_unimodular() {
            return Err(GwError::Precondition(format!("{m} is not unimodular")));
        }
    }
    Ok(())
}

/// Breadth-first search over the congruence orbit of `a` for `b`.
pub fn congruent_bfs(a: &SymMatrix, b: &SymMatrix, visited_cap: usize) -> Result<Verdict> {
    check_pair(a, b)?;
    let (spec, n) = (a.spec(), a.dim());
    let bits = key_bits(spec, n)?;
    let moves = generator_moves(spec, n);
    let start = State::from_sym(a);
    let goal = State::from_sym(b).key(n, bits);

    // (key, parent index, move index) in discovery order.
    let mut nodes: Vec<(u128, u32, u16)> = vec![(start.key(n, bits), u32::MAX, u16::MAX)];
    let mut seen: FxHashMap<u128, u32> = FxHashMap::default();
    seen.insert(nodes[0].0, 0);
    let mut head = 0usize;
    let mut found = (nodes[0].0 == goal).then_some(0usize);

    while found.is_none() && head < nodes.len() {
        let state = State::from_key(nodes[head].0, n, bits);
        for (mi, &mv) in moves.iter().enumerate() {
            let next = state.apply(spec, n, mv);
            let key = next.key(n, bits);
            if seen.contains_key(&key) {
                continue;
            }
            if nodes.len() >= visited_cap {
                return Ok(Verdict::CapExceeded { visited: nodes.len() });
            }
            seen.insert(key, nodes.len() as u32);
            nodes.push((key, head as u32, mi as u16));
            if key == goal {
                found = Some(nodes.len() - 1);
                break;
            }
        }
        head += 1;
    }

    let Some(mut idx) = found else {
        return Ok(Verdict::NotCongruent { orbit_size: nodes.len() });
    };
    let mut path = Vec::new();
    while nodes[idx].1 != u32::MAX {
        path.push(moves[nodes[idx].2 as usize]);
        idx = nodes[idx].1 as usize;
    }
    let mut witness = RingMatrix::identity(spec, n);
    for mv in path.iter().rev() {
        witness = mv.matrix(spec, n).mul_unchecked(&witness);
    }
    if a.transform(&witness)? != *b {
        return Err(GwError::Internal("search witness does not transform A into B".into()));
    }
    Ok(Verdict::Congruent {
        witness,
        visited: nodes.len(),
    })
}

/// The full orbit of `a` as packed keys, or `None` past the cap. Also
/// checks that the orbit is closed under every move.
pub fn orbit(a: &SymMatrix, visited_cap: usize) -> Result<Option<Vec<u128>>> {
    let (spec, n) = (a.spec(), a.dim());
    let bits = key_bits(spec, n)?;
    let moves = generator_moves(spec, n);
    let mut keys = vec![State::from_sym(a).key(n, bits)];
    let mut seen: rustc_hash::FxHashSet<u128> = keys.iter().copied().collect();
    let mut head = 0;
    while head < keys.len() {
        let s = State::from_key(keys[head], n, bits);
        for &mv in &moves {
            let k = s.apply(spec, n, mv).key(n, bits);
            if seen.insert(k) {
                if keys.len() >= visited_cap {
                    return Ok(None);
                }
                keys.push(k);
            }
        }
        head += 1;
    }
    for &k in &keys {
        let s = State::from_key(k, n, bits);
        if moves.iter().any(|&mv| !seen.contains(&s.apply(spec, n, mv).key(n, bits))) {
            return Err(GwError::Internal("orbit is not closed under the generator moves".into()));
        }
    }
    Ok(Some(keys))
}

/// Result of [`diagonalize`]: `transform * A * transform^T = diagonal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonalization {
    pub diagonal: SymMatrix,
    pub transform: RingMatrix,
}

/// Diagonalizes by repeatedly pivoting on a unit diagonal entry. Returns
/// `None` when at some stage no remaining diagonal entry is a unit.
pub fn diagonalize(a: &SymMatrix) -> Result<Option<Diagonalization>> {
    if !a.is_unimodular() {
        return Err(GwError::Precondition(format!("{a} is not unimodular")));
    }
    let (spec, n) = (a.spec(), a.dim());
    let mut cur = a.matrix().clone();
    let mut transform = RingMatrix::identity(spec, n);
    let step = |mv: Move, cur: &mut RingMatrix, transform: &mut RingMatrix| {
        let p = mv.matrix(spec, n);
        *cur = p.congruence(cur).expect("same shape");
        *transform = p.mul_unchecked(transform);
    };
    for i in 0..n {
        let Some(piv) = (i..n).find(|&j| spec.is_unit(cur.get(j, j))) else {
            return Ok(None);
        };
        if piv != i {
            step(Move::Swap { i, j: piv }, &mut cur, &mut transform);
        }
        let inv = spec.inv_unit(cur.get(i, i));
        for r in i + 1..n {
            let t = spec.neg(spec.mul(cur.get(r, i), inv));
            if t != 0 {
                step(Move::Transvection { i: r, j: i, t }, &mut cur, &mut transform);
            }
        }
    }
    let diagonal = SymMatrix::new(cur)?;
    debug_assert!(diagonal.is_diagonal());
    Ok(Some(Diagonalization { diagonal, transform }))
}
