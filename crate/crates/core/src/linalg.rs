//! Exact dense linear algebra over a prime field `F_p`.
//!
//! Matrices are stored row-major with entries reduced into `[0, p)`. The
//! modulus is a runtime value (`p < 2^16`), so every product of two entries
//! fits in a `u32` and dot products can be accumulated in a `u64` before a
//! single reduction.

use std::fmt;

use crate::error::{Error, Result};

/// Largest modulus accepted; products of two residues must fit in a `u32`.
pub const MAX_MODULUS: u32 = 1 << 16;

/// A prime field `F_p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u32,
}

impl Field {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 || p >= MAX_MODULUS || !is_prime(p) {
            return Err(Error::InvalidField(p));
        }
        Ok(Field { p })
    }

    /// The two-element field, the default throughout.
    pub fn f2() -> Self {
        Field { p: 2 }
    }

    #[inline]
    pub fn modulus(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    /// Multiplicative inverse of a nonzero residue.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(a != 0 && a < self.p);
        // Fermat: a^(p-2)
        let mut result = 1u64;
        let mut base = a as u64;
        let mut e = self.p - 2;
        let p = self.p as u64;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        result as u32
    }

    /// Reduce an arbitrary integer into `[0, p)`.
    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A dense matrix over `F_p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpMatrix<{}>{}x{} ", self.field.p, self.rows, self.cols)?;
        f.debug_list().entries(self.row_iter()).finish()
    }
}

/// Result of a reduced row echelon computation.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl FpMatrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        FpMatrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Build from rows of (already reduced or not) integers. All rows must
    /// have length `cols`.
    pub fn from_rows(field: Field, rows: usize, cols: usize, entries: &[Vec<i64>]) -> Result<Self> {
        if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch(format!(
                "expected a {rows}x{cols} matrix, got {} rows of lengths {:?}",
                entries.len(),
                entries.iter().map(Vec::len).collect::<Vec<_>>()
            )));
        }
        let data = entries
            .iter()
            .flat_map(|r| r.iter().map(|&v| field.reduce(v)))
            .collect();
        Ok(FpMatrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Build from a flat row-major buffer of residues.
    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer does not match shape");
        debug_assert!(data.iter().all(|&v| v < field.p));
        FpMatrix {
            field,
            rows,
            cols,
            data,
        }
    }

    /// A single column vector.
    pub fn column(field: Field, v: &[u32]) -> Self {
        Self::from_vec(field, v.len(), 1, v.to_vec())
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        debug_assert!(v < self.field.p);
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[u32]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn data(&self) -> &[u32] {
        &self.data
    }

    /// Rows as signed integers, the JSON representation.
    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.row_iter()
            .map(|r| r.iter().map(|&v| v as i64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows)
                .all(|r| (0..self.cols).all(|c| self.get(r, c) == u32::from(r == c)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(
            self.cols, other.rows,
            "cannot multiply {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        debug_assert_eq!(self.field, other.field);
        let p = self.field.p as u64;
        let mut acc = vec![0u64; other.cols];
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot += a * b as u64;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = (v % p) as u32;
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.field.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Self::from_vec(f, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.shape(), other.shape());
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Self::from_vec(f, self.rows, self.cols, data)
    }

    pub fn scale(&self, s: u32) -> FpMatrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Self::from_vec(f, self.rows, self.cols, data)
    }

    /// Select the given rows and columns (in the given order).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> FpMatrix {
        let mut out = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> FpMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> FpMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Horizontal concatenation. All blocks need the same row count;
    /// `rows` is used when the list is empty.
    pub fn hstack(field: Field, rows: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            for r in 0..rows {
                out.data[r * cols + off..r * cols + off + b.cols].copy_from_slice(b.row(r));
            }
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation. All blocks need the same column count.
    pub fn vstack(field: Field, cols: usize, blocks: &[&FpMatrix]) -> FpMatrix {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Self::from_vec(field, rows, cols, data)
    }

    /// Block matrix from a grid of blocks (row-major list of block rows).
    pub fn block(field: Field, blocks: &[Vec<&FpMatrix>]) -> FpMatrix {
        let rows: Vec<FpMatrix> = blocks
            .iter()
            .map(|brow| {
                let h = brow.first().map_or(0, |b| b.rows);
                Self::hstack(field, h, brow)
            })
            .collect();
        let cols = rows.first().map_or(0, |r| r.cols);
        Self::vstack(field, cols, &rows.iter().collect::<Vec<_>>())
    }

    pub fn block_diag(field: Field, blocks: &[&FpMatrix]) -> FpMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                out.data[(r0 + r) * cols + c0..(r0 + r) * cols + c0 + b.cols]
                    .copy_from_slice(b.row(r));
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Reduced row echelon form with pivot columns, scanning columns left
    /// to right and choosing the first nonzero row as pivot.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        let cols = m.cols;
        for c in 0..cols {
            if prow == m.rows {
                break;
            }
            let Some(sel) = (prow..m.rows).find(|&r| m.data[r * cols + c] != 0) else {
                continue;
            };
            if sel != prow {
                for j in 0..cols {
                    m.data.swap(sel * cols + j, prow * cols + j);
                }
            }
            let inv = f.inv(m.data[prow * cols + c]);
            if inv != 1 {
                for j in c..cols {
                    let v = m.data[prow * cols + j];
                    m.data[prow * cols + j] = f.mul(v, inv);
                }
            }
            let pivot_row: Vec<u32> = m.data[prow * cols..(prow + 1) * cols].to_vec();
            for r in 0..m.rows {
                if r == prow {
                    continue;
                }
                let factor = m.data[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let neg = f.neg(factor);
                let row = &mut m.data[r * cols..(r + 1) * cols];
                for j in c..cols {
                    if pivot_row[j] != 0 {
                        row[j] = f.add(row[j], f.mul(neg, pivot_row[j]));
                    }
                }
            }
            pivots.push(c);
            prow += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            self.transpose().rref().rank()
        } else {
            self.rref().rank()
        }
    }

    /// Basis of the null space as columns, together with the free columns.
    ///
    /// Basis vector `k` has a 1 in free coordinate `free[k]` and zeros in all
    /// other free coordinates, so coordinates of any kernel vector in this
    /// basis are read off at the free positions.
    pub fn kernel_with_free(&self) -> (FpMatrix, Vec<usize>) {
        let f = self.field;
        let rr = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &rr.pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut basis = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            basis.set(fc, k, 1);
            for (r, &pc) in rr.pivots.iter().enumerate() {
                let v = rr.matrix.get(r, fc);
                if v != 0 {
                    basis.set(pc, k, f.neg(v));
                }
            }
        }
        (basis, free)
    }

    pub fn kernel_basis(&self) -> FpMatrix {
        self.kernel_with_free().0
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Columns of `self` at the pivot positions; a basis of the column space.
    pub fn image_basis(&self) -> FpMatrix {
        let rr = self.rref();
        self.select_cols(&rr.pivots)
    }

    /// Solve `self * X = rhs`. Free variables are set to zero.
    pub fn solve(&self, rhs: &FpMatrix) -> Option<FpMatrix> {
        assert_eq!(self.rows, rhs.rows, "solve: row mismatch");
        let aug = Self::hstack(self.field, self.rows, &[self, rhs]);
        let rr = aug.rref();
        if rr.pivots.iter().any(|&c| c >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(self.field, self.cols, rhs.cols);
        for (r, &pc) in rr.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, rr.matrix.get(r, self.cols + j));
            }
        }
        Some(x)
    }

    pub fn invert(&self) -> Option<FpMatrix> {
        if self.rows != self.cols {
            return None;
        }
        if self.rows == 0 {
            return Some(self.clone());
        }
        let id = Self::identity(self.field, self.rows);
        let aug = Self::hstack(self.field, self.rows, &[self, &id]);
        let rr = aug.rref();
        if rr.pivots.len() < self.rows || rr.pivots[self.rows - 1] >= self.cols {
            return None;
        }
        let cols: Vec<usize> = (self.cols..2 * self.cols).collect();
        let rows: Vec<usize> = (0..self.rows).collect();
        Some(rr.matrix.select(&rows, &cols))
    }
}

/// Incrementally built row echelon basis of a subspace of `F_p^n`, used for
/// span-membership tests and complement selection.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    len: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(field: Field, len: usize) -> Self {
        Echelon {
            field,
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row).skip(pc) {
                if r != 0 {
                    *x = f.add(*x, f.mul(neg, r));
                }
            }
        }
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Add `v` to the span. Returns `true` if it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        if self.rows.len() == self.len {
            return false;
        }
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(pc) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.field.inv(w[pc]);
        for x in w.iter_mut().skip(pc) {
            *x = self.field.mul(*x, inv);
        }
        self.rows.push(w);
        self.pivots.push(pc);
        true
    }
}
