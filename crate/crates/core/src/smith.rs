//! Exact integer matrices and Smith normal form.
//!
//! All arithmetic is over `BigInt`. The reduction tracks the unimodular
//! transforms on both sides, so every result carries a certificate
//! `U * M * V = S` that can be re-checked independently.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, x) in r.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        Self::from_rows(cols, &big)
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn left_apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(x.len(), self.rows);
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += xi * &self[(i, j)];
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self.data[i * self.cols + j]);
            self.data[i * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `U * M * V = S` with `S` diagonal and `S[0][0] | S[1][1] | ...`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.nrows().min(self.s.ncols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|d| !d.is_zero()).count()
    }

    /// Invariant factors `>= 2` of the cokernel `Z^cols / rowspace(M)`.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal()
            .into_iter()
            .filter(|d| !d.is_zero() && !d.is_one())
            .collect()
    }

    /// Free rank of the cokernel `Z^cols / rowspace(M)`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.s.ncols() - self.rank()
    }

    /// Re-checks the certificate against `m`.
    pub fn verify(&self, m: &IntMatrix) -> Result<(), String> {
        if self.u.mul(m).mul(&self.v) != self.s {
            return Err("U*M*V != S".into());
        }
        if !self.s.is_diagonal() {
            return Err("S is not diagonal".into());
        }
        let d = self.diagonal();
        for w in d.windows(2) {
            let divides = if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (&w[1] % &w[0]).is_zero()
            };
            if !divides {
                return Err(format!("divisibility fails: {} does not divide {}", w[0], w[1]));
            }
        }
        if d.iter().any(|x| x.is_negative()) {
            return Err("negative diagonal entry".into());
        }
        for (name, x) in [("U", &self.u), ("V", &self.v)] {
            if !x.determinant().abs().is_one() {
                return Err(format!("det({name}) is not a unit"));
            }
        }
        if self.v.mul(&self.v_inv) != IntMatrix::identity(self.v.nrows()) {
            return Err("V * V^-1 != I".into());
        }
        Ok(())
    }
}

/// Smith normal form with transforms.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (r, c) = (m.nrows(), m.ncols());
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);

    // Column operations are mirrored on V and, inverted, on V^-1.
    let add_col = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst: usize, src: usize, q: &BigInt| {
        a.add_col(dst, src, q);
        v.add_col(dst, src, q);
        vi.add_row(src, dst, &-q);
    };
    let swap_col = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, x: usize, y: usize| {
        a.swap_cols(x, y);
        v.swap_cols(x, y);
        vi.swap_rows(x, y);
    };

    for t in 0..r.min(c) {
        loop {
            // pivot: smallest nonzero magnitude in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &a[(i, j)];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < a[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(a, u, v, v_inv);
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            swap_col(&mut a, &mut v, &mut v_inv, t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -a[(i, t)].div_floor(&a[(t, t)]);
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -a[(t, j)].div_floor(&a[(t, t)]);
                add_col(&mut a, &mut v, &mut v_inv, j, t, &q);
                clean &= a[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // divisibility of the trailing block by the pivot
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&a[(i, j)] % &a[(t, t)]).is_zero()));
            match offender {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }
    finish(a, u, v, v_inv)
}

fn finish(s: IntMatrix, u: IntMatrix, v: IntMatrix, v_inv: IntMatrix) -> SmithForm {
    SmithForm { u, s, v, v_inv }
}

/// A basis of the lattice spanned by `rows`, in row echelon form with
/// positive pivots and entries above each pivot reduced.
pub fn row_lattice_basis(cols: usize, rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut work: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut pivot = 0;
    for col in 0..cols {
        loop {
            let best = (pivot..work.len())
                .filter(|&i| !work[i][col].is_zero())
                .min_by(|&x, &y| work[x][col].abs().cmp(&work[y][col].abs()));
            let Some(b) = best else { break };
            work.swap(pivot, b);
            let mut done = true;
            for i in pivot + 1..work.len() {
                if work[i][col].is_zero() {
                    continue;
                }
                let q = work[i][col].div_floor(&work[pivot][col]);
                let (head, tail) = work.split_at_mut(i);
                let p = &head[pivot];
                for (x, y) in tail[0].iter_mut().zip(p) {
                    *x -= &q * y;
                }
                done &= tail[0][col].is_zero();
            }
            if done {
                if work[pivot][col].is_negative() {
                    for x in work[pivot].iter_mut() {
                        *x = -std::mem::take(x);
                    }
                }
                for i in 0..pivot {
                    let q = work[i][col].div_floor(&work[pivot][col]);
                    if q.is_zero() {
                        continue;
                    }
                    let (head, tail) = work.split_at_mut(pivot);
                    for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                        *x -= &q * y;
                    }
                }
                pivot += 1;
                break;
            }
        }
        work.retain(|r| r.iter().any(|x| !x.is_zero()));
        if pivot >= work.len() {
            break;
        }
    }
    work.truncate(pivot);
    work
}

/// Solves `x * M = y` over the integers.
pub fn solve_left(m: &IntMatrix, y: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_left_with(&smith_normal_form(m), y)
}

/// Like [`solve_left`], reusing a precomputed Smith form of `M`.
pub fn solve_left_with(snf: &SmithForm, y: &[BigInt]) -> Option<Vec<BigInt>> {
    let z = snf.v.left_apply(y);
    let d = snf.diagonal();
    let mut w = vec![BigInt::zero(); snf.u.nrows()];
    for (j, zj) in z.iter().enumerate() {
        match d.get(j) {
            Some(dj) if !dj.is_zero() => {
                let (q, rem) = zj.div_rem(dj);
                if !rem.is_zero() {
                    return None;
                }
                w[j] = q;
            }
            _ => {
                if !zj.is_zero() {
                    return None;
                }
            }
        }
    }
    Some(snf.u.left_apply(&w))
}

/// A basis of `{ x : x * M = 0 }`.
pub fn left_kernel(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    (snf.rank()..m.nrows()).map(|i| snf.u.row(i).to_vec()).collect()
}

/// Invariant factors `>= 2` and free rank of `Z^cols / span(rows)`.
pub fn cokernel(cols: usize, rows: &[Vec<BigInt>]) -> (Vec<BigInt>, usize) {
    let basis = row_lattice_basis(cols, rows);
    let snf = smith_normal_form(&IntMatrix::from_rows(cols, &basis));
    (snf.torsion(), snf.cokernel_free_rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn single_relation_row() {
        let m = IntMatrix::from_i64_rows(&[&[4, -4]]);
        let snf = smith_normal_form(&m);
        snf.verify(&m).unwrap();
        assert_eq!(snf.torsion(), big(&[4]));
        assert_eq!(snf.cokernel_free_rank(), 1);
    }

    #[test]
    fn zero_matrix() {
        let m = IntMatrix::zeros(1, 1);
        let snf = smith_normal_form(&m);
        snf.verify(&m).unwrap();
        assert!(snf.torsion().is_empty());
        assert_eq!(snf.cokernel_free_rank(), 1);
    }

    #[test]
    fn coprime_factors_merge() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m);
        snf.verify(&m).unwrap();
        assert_eq!(snf.diagonal(), big(&[1, 6]));
    }

    #[test]
    fn divisibility_fix_up() {
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 0], &[0, 4, 0], &[0, 0, 6]]);
        let snf = smith_normal_form(&m);
        snf.verify(&m).unwrap();
        assert_eq!(snf.diagonal(), big(&[2, 2, 12]));
    }

    #[test]
    fn bareiss_determinant() {
        let m = IntMatrix::from_i64_rows(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2*(3*-2 - 4*5) - (-1)*(1*-2 - 0) = -52 - 2
        assert_eq!(m.determinant(), BigInt::from(-54));
        let sing = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.determinant().is_zero());
        let perm = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(perm.determinant(), BigInt::from(-1));
    }

    #[test]
    fn lattice_basis_and_solve() {
        let rows = vec![big(&[4, -4, 0]), big(&[2, 0, -2]), big(&[6, -4, -2]), big(&[0, 0, 0])];
        let basis = row_lattice_basis(3, &rows);
        assert_eq!(basis.len(), 2);
        for r in &rows {
            assert!(solve_left(&IntMatrix::from_rows(3, &basis), r).is_some());
        }
        for b in &basis {
            assert!(solve_left(&IntMatrix::from_rows(3, &rows), b).is_some());
        }
        assert!(solve_left(&IntMatrix::from_rows(3, &basis), &big(&[1, 0, -1])).is_none());
        let (tors, free) = cokernel(3, &rows);
        assert_eq!(tors, big(&[2, 4]));
        assert_eq!(free, 1);
    }

    #[test]
    fn kernel_rows_annihilate() {
        let m = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4], &[3, 1]]);
        let k = left_kernel(&m);
        assert_eq!(k.len(), 1);
        assert!(m.left_apply(&k[0]).iter().all(|x| x.is_zero()));
    }
}
