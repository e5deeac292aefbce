//! Small square matrices over the rings in scope.

use std::fmt;

use crate::error::{GwError, Result};
use crate::ring::RingSpec;

/// Largest dimension handled by the symmetric-form oracles.
pub const MAX_FORM_DIM: usize = 4;

/// A square matrix with entries stored as canonical encodings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingMatrix {
    spec: RingSpec,
    n: usize,
    m: Vec<u64>,
}

impl RingMatrix {
    pub fn zeros(spec: RingSpec, n: usize) -> Self {
        RingMatrix {
            spec,
            n,
            m: vec![0; n * n],
        }
    }

    pub fn identity(spec: RingSpec, n: usize) -> Self {
        let mut out = Self::zeros(spec, n);
        for i in 0..n {
            out.m[i * n + i] = 1;
        }
        out
    }

    pub fn diagonal(spec: RingSpec, d: &[u64]) -> Self {
        let mut out = Self::zeros(spec, d.len());
        for (i, &x) in d.iter().enumerate() {
            out.set(i, i, x);
        }
        out
    }

    /// Builds a matrix from rows of raw values, reducing each into the ring.
    pub fn from_rows(spec: RingSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(GwError::Dimension("matrix rows must form a square".into()));
        }
        Ok(RingMatrix {
            spec,
            n,
            m: rows.iter().flatten().map(|&x| spec.reduce(x)).collect(),
        })
    }

    /// Builds a matrix from signed integers (for `Z/2^n` literals like `-2`).
    pub fn from_signed(spec: RingSpec, rows: &[&[i64]]) -> Result<Self> {
        let rows: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| if x < 0 { spec.neg((-x) as u64 & spec.mask()) } else { x as u64 }).collect())
            .collect();
        Self::from_rows(spec, &rows)
    }

    pub fn spec(&self) -> RingSpec {
        self.spec
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.m[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.m[i * self.n + j] = self.spec.reduce(x);
    }

    pub fn entries(&self) -> &[u64] {
        &self.m
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        self.m.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    /// Rows in element text form.
    pub fn to_text_rows(&self) -> Vec<Vec<String>> {
        self.to_rows()
            .iter()
            .map(|r| r.iter().map(|&x| self.spec.format(x)).collect())
            .collect()
    }

    fn check_compatible(&self, other: &RingMatrix) -> Result<()> {
        if self.spec != other.spec {
            return Err(GwError::SpecMismatch {
                left: self.spec,
                right: other.spec,
            });
        }
        if self.n != other.n {
            return Err(GwError::Dimension(format!("{}x{} vs {}x{}", self.n, self.n, other.n, other.n)));
        }
        Ok(())
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &RingMatrix) -> RingMatrix {
        let (s, n) = (self.spec, self.n);
        let mut out = Self::zeros(s, n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0;
                for k in 0..n {
                    acc = s.add(acc, s.mul(self.get(i, k), other.get(k, j)));
                }
                out.m[i * n + j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.m[j * self.n + i] = self.get(i, j);
            }
        }
        out
    }

    /// `self * a * self^T`.
    pub fn congruence(&self, a: &RingMatrix) -> Result<RingMatrix> {
        self.check_compatible(a)?;
        Ok(self.mul_unchecked(a).mul_unchecked(&self.transpose()))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| i == j || self.get(i, j) == 0))
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn diagonal_entries(&self) -> Vec<u64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Diagonal entries are units and off-diagonal entries are not.
    pub fn is_diagonal_mod_max(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.spec.is_unit(self.get(i, j)) == (i == j)))
    }

    pub fn determinant(&self) -> u64 {
        let s = self.spec;
        // Gaussian elimination would need division; cofactor expansion is
        // fine at these sizes.
        fn det(s: RingSpec, m: &[u64], n: usize) -> u64 {
            match n {
                0 => 1,
                1 => m[0],
                2 => s.sub(s.mul(m[0], m[3]), s.mul(m[1], m[2])),
                _ => {
                    let mut acc = 0;
                    let mut minor = Vec::with_capacity((n - 1) * (n - 1));
                    for c in 0..n {
                        minor.clear();
                        for r in 1..n {
                            for k in (0..n).filter(|&k| k != c) {
                                minor.push(m[r * n + k]);
                            }
                        }
                        let term = s.mul(m[c], det(s, &minor, n - 1));
                        acc = if c % 2 == 0 { s.add(acc, term) } else { s.sub(acc, term) };
                    }
                    acc
                }
            }
        }
        det(s, &self.m, self.n)
    }

    pub fn is_invertible(&self) -> bool {
        self.spec.is_unit(self.determinant())
    }

    /// Inverse by Gauss-Jordan elimination with unit pivots.
    pub fn inverse(&self) -> Result<RingMatrix> {
        let (s, n) = (self.spec, self.n);
        let mut a = self.clone();
        let mut inv = Self::identity(s, n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| s.is_unit(a.get(r, col)))
                .ok_or_else(|| GwError::NonUnit(format!("determinant of {self}")))?;
            a.swap_rows(col, pivot);
            inv.swap_rows(col, pivot);
            let p = s.inv_unit(a.get(col, col));
            a.scale_row(col, p);
            inv.scale_row(col, p);
            for r in 0..n {
                let f = a.get(r, col);
                if r != col && f != 0 {
                    let f = s.neg(f);
                    a.add_row(r, col, f);
                    inv.add_row(r, col, f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        for k in 0..self.n {
            self.m.swap(i * self.n + k, j * self.n + k);
        }
    }

    fn scale_row(&mut self, i: usize, f: u64) {
        for k in 0..self.n {
            self.m[i * self.n + k] = self.spec.mul(self.m[i * self.n + k], f);
        }
    }

    /// `row_dst += f * row_src`.
    fn add_row(&mut self, dst: usize, src: usize, f: u64) {
        for k in 0..self.n {
            let t = self.spec.mul(f, self.m[src * self.n + k]);
            self.m[dst * self.n + k] = self.spec.add(self.m[dst * self.n + k], t);
        }
    }

    /// Entrywise residue in `F2`.
    pub fn residue(&self) -> RingMatrix {
        RingMatrix {
            spec: RingSpec::z2k(1),
            n: self.n,
            m: self.m.iter().map(|&x| self.spec.residue(x) as u64).collect(),
        }
    }
}

impl fmt::Display for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_text_rows().iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// A symmetric matrix of dimension `1..=4`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymMatrix(RingMatrix);

impl SymMatrix {
    pub fn new(m: RingMatrix) -> Result<Self> {
        if m.dim() == 0 || m.dim() > MAX_FORM_DIM {
            return Err(GwError::Dimension(format!("form dimension must be 1..={MAX_FORM_DIM}, got {}", m.dim())));
        }
        if !m.is_symmetric() {
            return Err(GwError::Precondition(format!("{m} is not symmetric")));
        }
        Ok(SymMatrix(m))
    }

    pub fn diagonal(spec: RingSpec, d: &[u64]) -> Result<Self> {
        Self::new(RingMatrix::diagonal(spec, d))
    }

    pub fn matrix(&self) -> &RingMatrix {
        &self.0
    }

    pub fn spec(&self) -> RingSpec {
        self.0.spec()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.0.get(i, j)
    }

    pub fn is_unimodular(&self) -> bool {
        self.0.is_invertible()
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.is_diagonal()
    }

    /// `P * self * P^T`.
    pub fn transform(&self, p: &RingMatrix) -> Result<SymMatrix> {
        Ok(SymMatrix(p.congruence(&self.0)?))
    }
}

impl fmt::Display for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}
