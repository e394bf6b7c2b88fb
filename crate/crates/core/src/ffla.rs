//! Exact dense linear algebra over prime fields F_q.
//!
//! Everything downstream (Hom/Ext dimensions, automorphism counts, subobject
//! enumeration, homotopy quotients) reduces to the routines in this module.
//! Matrices are small and dense; elimination is plain Gauss-Jordan.

use crate::{HallError, Result};

/// A verified prime field order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldOrder(u64);

impl FieldOrder {
    pub fn new(q: u64) -> Result<Self> {
        if is_prime(q) {
            Ok(FieldOrder(q))
        } else {
            Err(HallError::NotPrime(q))
        }
    }

    pub fn get(self) -> u64 {
        self.0
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b % self.0) % self.0
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn neg(self, a: u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    /// Multiplicative inverse via Fermat's little theorem.
    pub fn inv(self, a: u64) -> u64 {
        assert!(a % self.0 != 0, "inverse of zero in F_{}", self.0);
        self.pow(a, self.0 - 2)
    }

    pub fn pow(self, mut base: u64, mut e: u64) -> u64 {
        base %= self.0;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        acc
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over F_q. A `rows x cols` matrix represents a
/// linear map F_q^cols -> F_q^rows acting on column vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u64>>, q: FieldOrder) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            for &x in row {
                entries.push(x % q.get());
            }
        }
        Matrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: u64) {
        self.entries[r * self.cols + c] = x;
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn mul(&self, other: &Matrix, q: FieldOrder) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = q.add(out.get(i, j), q.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix, q: FieldOrder) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| q.add(a, b))
            .collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Matrix, q: FieldOrder) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| q.sub(a, b))
            .collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self, q: FieldOrder) -> Matrix {
        let entries = self.entries.iter().map(|&a| q.neg(a)).collect();
        Matrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Apply to a column vector.
    pub fn apply(&self, v: &[u64], q: FieldOrder) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0;
                for j in 0..self.cols {
                    acc = q.add(acc, q.mul(self.get(i, j), v[j]));
                }
                acc
            })
            .collect()
    }

    /// Stack `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Matrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    /// Place `self` and `other` side by side (same row count).
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        let mut out = Matrix::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j));
            }
        }
        out
    }
}

/// Reduced row echelon form together with the rank.
pub fn rref(m: &Matrix, q: FieldOrder) -> (Matrix, usize) {
    let mut a = m.clone();
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row >= a.rows {
            break;
        }
        let Some(src) = (pivot_row..a.rows).find(|&r| a.get(r, col) != 0) else {
            continue;
        };
        if src != pivot_row {
            for j in 0..a.cols {
                let (x, y) = (a.get(pivot_row, j), a.get(src, j));
                a.set(pivot_row, j, y);
                a.set(src, j, x);
            }
        }
        let inv = q.inv(a.get(pivot_row, col));
        for j in 0..a.cols {
            a.set(pivot_row, j, q.mul(inv, a.get(pivot_row, j)));
        }
        for r in 0..a.rows {
            if r == pivot_row {
                continue;
            }
            let f = a.get(r, col);
            if f == 0 {
                continue;
            }
            for j in 0..a.cols {
                let v = q.sub(a.get(r, j), q.mul(f, a.get(pivot_row, j)));
                a.set(r, j, v);
            }
        }
        pivot_row += 1;
    }
    (a, pivot_row)
}

pub fn rank(m: &Matrix, q: FieldOrder) -> usize {
    rref(m, q).1
}

/// Pivot columns of the RREF of `m`.
pub fn pivot_columns(m: &Matrix, q: FieldOrder) -> Vec<usize> {
    let (r, rank) = rref(m, q);
    let mut pivots = Vec::with_capacity(rank);
    for row in 0..rank {
        if let Some(col) = (0..r.cols).find(|&c| r.get(row, c) != 0) {
            pivots.push(col);
        }
    }
    pivots
}

/// Basis of the right null space, returned as the columns of a
/// `cols(m) x nullity` matrix. `m * kernel_basis(m) = 0` exactly.
pub fn kernel_basis(m: &Matrix, q: FieldOrder) -> Matrix {
    let (r, rank) = rref(m, q);
    let n = m.cols;
    let mut pivot_of_col = vec![None; n];
    for row in 0..rank {
        if let Some(col) = (0..n).find(|&c| r.get(row, c) != 0) {
            pivot_of_col[col] = Some(row);
        }
    }
    let free: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
    let mut basis = Matrix::zero(n, free.len());
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, 1);
        for c in 0..n {
            if let Some(row) = pivot_of_col[c] {
                basis.set(c, k, q.neg(r.get(row, fc)));
            }
        }
    }
    basis
}

/// Solve `m x = b` for a single solution, if any.
pub fn solve(m: &Matrix, b: &[u64], q: FieldOrder) -> Option<Vec<u64>> {
    assert_eq!(b.len(), m.rows);
    let mut bm = Matrix::zero(m.rows, 1);
    for (i, &x) in b.iter().enumerate() {
        bm.set(i, 0, x % q.get());
    }
    let aug = m.hstack(&bm);
    let (r, _) = rref(&aug, q);
    let mut x = vec![0u64; m.cols];
    for row in 0..r.rows {
        let Some(lead) = (0..r.cols).find(|&c| r.get(row, c) != 0) else {
            continue;
        };
        if lead == m.cols {
            return None; // inconsistent row [0 ... 0 | 1]
        }
        x[lead] = r.get(row, m.cols);
    }
    Some(x)
}

pub fn is_invertible(m: &Matrix, q: FieldOrder) -> bool {
    m.rows == m.cols && rank(m, q) == m.rows
}

/// Inverse of a square matrix, if it exists, via Gauss-Jordan on [M | I].
pub fn inverse(m: &Matrix, q: FieldOrder) -> Option<Matrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let aug = m.hstack(&Matrix::identity(n));
    let (r, rank) = rref(&aug, q);
    if rank < n || (0..n).any(|i| r.get(i, i) != 1) {
        return None;
    }
    let mut inv = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, r.get(i, n + j));
        }
    }
    Some(inv)
}

/// |GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i).
pub fn gl_order(n: usize, q: FieldOrder) -> u128 {
    let qn = (q.get() as u128).pow(n as u32);
    let mut acc = 1u128;
    let mut qi = 1u128;
    for _ in 0..n {
        acc *= qn - qi;
        qi *= q.get() as u128;
    }
    acc
}

/// All `rows x cols` matrices over F_q in lexicographic entry order
/// (first entry most significant). Refuses if the count exceeds `budget`.
pub fn enumerate_matrices(
    rows: usize,
    cols: usize,
    q: FieldOrder,
    budget: u128,
) -> Result<Vec<Matrix>> {
    let count = checked_power(q.get(), rows * cols, budget)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = Matrix::zero(rows, cols);
    loop {
        out.push(cur.clone());
        // increment entries as base-q digits, last entry least significant
        let mut i = rows * cols;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur.entries[i] += 1;
            if cur.entries[i] < q.get() {
                break;
            }
            cur.entries[i] = 0;
        }
    }
}

/// All column vectors of F_q^n, lexicographic.
pub fn enumerate_vectors(n: usize, q: FieldOrder, budget: u128) -> Result<Vec<Vec<u64>>> {
    Ok(enumerate_matrices(n, 1, q, budget)?
        .into_iter()
        .map(|m| m.entries)
        .collect())
}

/// q^e, refusing when it exceeds the budget.
pub fn checked_power(q: u64, e: usize, budget: u128) -> Result<u128> {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc
            .checked_mul(q as u128)
            .filter(|&v| v <= budget)
            .ok_or(HallError::BudgetExceeded { needed: u128::MAX, budget })?;
    }
    if acc > budget {
        return Err(HallError::BudgetExceeded { needed: acc, budget });
    }
    Ok(acc)
}

/// All k-dimensional subspaces of F_q^n, each given by its canonical basis:
/// a full-rank `k x n` matrix in RREF whose rows span the subspace.
pub fn enumerate_subspaces(k: usize, n: usize, q: FieldOrder) -> Vec<Matrix> {
    let mut out = Vec::new();
    let mut pivots = Vec::new();
    choose_pivots(0, k, n, &mut pivots, q, &mut out);
    out
}

fn choose_pivots(
    start: usize,
    remaining: usize,
    n: usize,
    pivots: &mut Vec<usize>,
    q: FieldOrder,
    out: &mut Vec<Matrix>,
) {
    if remaining == 0 {
        fill_free_entries(pivots, n, q, out);
        return;
    }
    for p in start..=n.saturating_sub(remaining) {
        pivots.push(p);
        choose_pivots(p + 1, remaining - 1, n, pivots, q, out);
        pivots.pop();
    }
}

fn fill_free_entries(pivots: &[usize], n: usize, q: FieldOrder, out: &mut Vec<Matrix>) {
    let k = pivots.len();
    // free positions: (i, j) with j > pivots[i] and j not itself a pivot column
    let free: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| {
            (pivots[i] + 1..n)
                .filter(|j| !pivots.contains(j))
                .map(move |j| (i, j))
        })
        .collect();
    let total = (q.get() as u128).pow(free.len() as u32);
    let mut vals = vec![0u64; free.len()];
    for _ in 0..total {
        let mut m = Matrix::zero(k, n);
        for i in 0..k {
            m.set(i, pivots[i], 1);
        }
        for (idx, &(i, j)) in free.iter().enumerate() {
            m.set(i, j, vals[idx]);
        }
        out.push(m);
        for v in vals.iter_mut() {
            *v += 1;
            if *v < q.get() {
                break;
            }
            *v = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> FieldOrder {
        FieldOrder::new(q).unwrap()
    }

    #[test]
    fn field_order_rejects_composites() {
        assert!(FieldOrder::new(4).is_err());
        assert!(FieldOrder::new(1).is_err());
        assert!(FieldOrder::new(2).is_ok());
        assert!(FieldOrder::new(7).is_ok());
    }

    #[test]
    fn rref_identity_cases() {
        let q = f(2);
        let (r, rank) = rref(&Matrix::identity(2), q);
        assert_eq!(r, Matrix::identity(2));
        assert_eq!(rank, 2);

        let m = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]], q);
        let (r, rank) = rref(&m, q);
        assert_eq!(r, Matrix::from_rows(vec![vec![1, 1], vec![0, 0]], q));
        assert_eq!(rank, 1);

        let q3 = f(3);
        let m = Matrix::from_rows(vec![vec![0, 1], vec![1, 0]], q3);
        let (r, rank) = rref(&m, q3);
        assert_eq!(r, Matrix::identity(2));
        assert_eq!(rank, 2);
    }

    #[test]
    fn kernel_examples() {
        let q = f(2);
        assert_eq!(kernel_basis(&Matrix::zero(2, 2), q).cols(), 2);
        assert_eq!(kernel_basis(&Matrix::identity(2), q).cols(), 0);

        // [[1,1]] over F_2: kernel spanned by (1,1); cross-check by brute force
        let m = Matrix::from_rows(vec![vec![1, 1]], q);
        let k = kernel_basis(&m, q);
        assert_eq!(k.cols(), 1);
        assert_eq!((k.get(0, 0), k.get(1, 0)), (1, 1));
        let null: Vec<Vec<u64>> = enumerate_vectors(2, q, 1 << 20)
            .unwrap()
            .into_iter()
            .filter(|v| m.apply(v, q).iter().all(|&x| x == 0))
            .collect();
        assert_eq!(null.len(), 2); // zero and (1,1)
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(0, f(2)), 1);
        assert_eq!(gl_order(0, f(5)), 1);
        assert_eq!(gl_order(1, f(3)), 2);
        // derived by enumerating all 16 binary 2x2 matrices
        let invertible = enumerate_matrices(2, 2, f(2), 1 << 20)
            .unwrap()
            .into_iter()
            .filter(|m| is_invertible(m, f(2)))
            .count();
        assert_eq!(invertible, 6);
        assert_eq!(gl_order(2, f(2)), 6);
    }

    #[test]
    fn enumerate_matrices_counts_and_budget() {
        assert_eq!(enumerate_matrices(0, 3, f(2), 1 << 20).unwrap().len(), 1);
        assert_eq!(enumerate_matrices(1, 1, f(2), 1 << 20).unwrap().len(), 2);
        assert_eq!(enumerate_matrices(2, 2, f(2), 1 << 20).unwrap().len(), 16);
        assert!(matches!(
            enumerate_matrices(4, 4, f(3), 100),
            Err(HallError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rref_idempotent_and_rank_nullity_exhaustive() {
        for &qv in &[2u64, 3] {
            let q = f(qv);
            for rows in 0..=3 {
                for cols in 0..=3 {
                    for m in enumerate_matrices(rows, cols, q, 1 << 24).unwrap() {
                        let (r1, rank1) = rref(&m, q);
                        let (r2, rank2) = rref(&r1, q);
                        assert_eq!(r1, r2);
                        assert_eq!(rank1, rank2);
                        let k = kernel_basis(&m, q);
                        assert_eq!(rank1 + k.cols(), cols);
                        if k.cols() > 0 {
                            assert!(m.mul(&k, q).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn subspace_counts_gaussian_binomials() {
        // [n choose k]_q for small cases
        assert_eq!(enumerate_subspaces(1, 2, f(2)).len(), 3);
        assert_eq!(enumerate_subspaces(1, 2, f(3)).len(), 4);
        assert_eq!(enumerate_subspaces(1, 3, f(2)).len(), 7);
        assert_eq!(enumerate_subspaces(2, 3, f(2)).len(), 7);
        assert_eq!(enumerate_subspaces(0, 3, f(2)).len(), 1);
        assert_eq!(enumerate_subspaces(3, 3, f(2)).len(), 1);
        for m in enumerate_subspaces(2, 4, f(3)) {
            assert_eq!(rank(&m, f(3)), 2);
        }
    }

    #[test]
    fn solve_finds_solutions() {
        let q = f(3);
        let m = Matrix::from_rows(vec![vec![1, 2], vec![0, 1]], q);
        let x = solve(&m, &[2, 1], q).unwrap();
        assert_eq!(m.apply(&x, q), vec![2, 1]);
        let singular = Matrix::from_rows(vec![vec![1, 1], vec![1, 1]], q);
        assert!(solve(&singular, &[1, 2], q).is_none());
    }
}
