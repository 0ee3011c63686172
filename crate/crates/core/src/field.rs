//! Exact linear algebra over a prime field `F_p`.
//!
//! Every degreewise computation in the crate bottoms out here: slices of
//! graded modules are small dense matrices, so plain Gauss-Jordan elimination
//! with `u32` residues is all that is needed.

use std::fmt;

use crate::error::{Error, Result};

/// Default characteristic.
pub const DEFAULT_PRIME: u32 = 32003;

/// A residue in `[0, p)`.
pub type FieldElement = u32;

/// The prime field `F_p` for an odd prime `p < 2^31`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u32,
    /// `floor(2^64 / p)`, for Barrett reduction.
    inv_p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::new(DEFAULT_PRIME).expect("default prime is valid")
    }
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if p < 3 || p >= (1 << 31) || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p, inv_p: u64::MAX / p as u64 })
    }

    /// `x mod p` for `x < 2^63`.
    #[inline]
    fn reduce(&self, x: u64) -> u32 {
        let q = ((x as u128 * self.inv_p as u128) >> 64) as u64;
        let mut r = x - q * self.p as u64;
        while r >= self.p as u64 {
            r -= self.p as u64;
        }
        r as u32
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary signed integer into `[0, p)`.
    #[inline]
    pub fn from_i64(&self, x: i64) -> FieldElement {
        x.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, for display.
    pub fn to_signed(&self, x: FieldElement) -> i64 {
        let x = x as i64;
        let p = self.p as i64;
        if x > p / 2 {
            x - p
        } else {
            x
        }
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.reduce(a as u64 * b as u64)
    }

    /// `a - c*b`, the elimination step.
    #[inline]
    pub fn sub_mul(&self, a: FieldElement, c: FieldElement, b: FieldElement) -> FieldElement {
        self.sub(a, self.mul(c, b))
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self, a: FieldElement) -> FieldElement {
        assert!(a != 0, "inverse of zero in F_{}", self.p);
        let (mut r0, mut r1) = (self.p as i64, a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        self.from_i64(s0)
    }

    /// `row[k] -= c * pivot_row[k]` for all `k`.
    #[inline]
    pub fn axpy_neg(&self, row: &mut [FieldElement], c: FieldElement, pivot_row: &[FieldElement]) {
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        let nc = (p - c as u64) as u64;
        for (x, &y) in row.iter_mut().zip(pivot_row) {
            if y != 0 {
                *x = self.reduce(*x as u64 + nc * y as u64);
            }
        }
    }

    #[inline]
    pub fn scale(&self, row: &mut [FieldElement], c: FieldElement) {
        for x in row.iter_mut() {
            *x = self.mul(*x, c);
        }
    }
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n as u64 {
        if n as u64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarMatrix {}x{} over F_{} [", self.rows, self.cols, self.field.p)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<i64> = self.row(r).iter().map(|&x| self.field.to_signed(x)).collect();
            write!(f, "{row:?}")?;
        }
        write!(f, "]")
    }
}

impl ScalarMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        ScalarMatrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_data(field: PrimeField, rows: usize, cols: usize, data: Vec<FieldElement>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix dimensions do not match entry count");
        debug_assert!(data.iter().all(|&x| x < field.p));
        ScalarMatrix { field, rows, cols, data }
    }

    /// Builds a matrix from signed integer rows. All rows must have `cols` entries.
    pub fn from_rows(field: PrimeField, cols: usize, rows: &[Vec<i64>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        ScalarMatrix { field, rows: rows.len(), cols, data }
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: PrimeField, rows: usize, columns: &[Vec<FieldElement>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, &x) in c.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
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
    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn transpose(&self) -> ScalarMatrix {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn mul(&self, other: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let neg = f.neg(a);
                f.axpy_neg(out_row, neg, other.row(k));
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|r| {
                let mut acc = 0u64;
                for (a, b) in self.row(r).iter().zip(v) {
                    acc = f.reduce(acc + *a as u64 * *b as u64) as u64;
                }
                acc as u32
            })
            .collect()
    }

    /// Restriction to the given row and column index lists.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> ScalarMatrix {
        let mut out = Self::zeros(self.field, rows.len(), cols.len());
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    /// Reduced row echelon form and pivot columns. The pivot for each column
    /// is the smallest remaining row index with a nonzero entry.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if pr != r {
                for k in 0..m.cols {
                    m.data.swap(pr * m.cols + k, r * m.cols + k);
                }
            }
            let inv = f.inv(m.get(r, c));
            f.scale(&mut m.data[r * m.cols..(r + 1) * m.cols], inv);
            let pivot_row = m.row(r).to_vec();
            for i in 0..m.rows {
                if i != r {
                    let x = m.get(i, c);
                    if x != 0 {
                        let cols = m.cols;
                        f.axpy_neg(&mut m.data[i * cols..(i + 1) * cols], x, &pivot_row);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            e.insert(self.row(r).to_vec());
        }
        e.rank()
    }

    /// Columns form a basis of the right kernel. One basis vector per free
    /// column `j`: a 1 in position `j`, minus the rref entries in pivot positions.
    pub fn kernel_basis(&self) -> ScalarMatrix {
        let mut e = Echelon::new(self.field, self.cols);
        for r in 0..self.rows {
            if e.is_full() {
                break;
            }
            e.insert(self.row(r).to_vec());
        }
        e.kernel_basis()
    }

    /// One solution of `self * x = b` with free variables set to zero.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows, "right-hand side length must equal row count");
        let mut aug = Self::zeros(self.field, self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols].copy_from_slice(self.row(r));
            aug.data[r * (self.cols + 1) + self.cols] = b[r];
        }
        let (rr, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = rr.get(i, self.cols);
        }
        Some(x)
    }
}

/// Incrementally built row space in semi-echelon form.
///
/// Rows are inserted one at a time; each stored row has a leading 1 at its
/// pivot and zeros at the pivots of all earlier rows, so one forward pass in
/// insertion order reduces any vector. Rows may carry a tracking vector that
/// records their expression in some external coordinates.
#[derive(Debug, Clone)]
pub struct Echelon {
    field: PrimeField,
    width: usize,
    rows: Vec<Vec<FieldElement>>,
    pivots: Vec<usize>,
    tracks: Vec<Vec<FieldElement>>,
    track_len: usize,
}

impl Echelon {
    pub fn new(field: PrimeField, width: usize) -> Self {
        Self::with_tracking(field, width, 0)
    }

    pub fn with_tracking(field: PrimeField, width: usize, track_len: usize) -> Self {
        Echelon { field, width, rows: Vec::new(), pivots: Vec::new(), tracks: Vec::new(), track_len }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `v` in place and returns the accumulated tracking combination.
    fn reduce_tracked(&self, v: &mut [FieldElement]) -> Vec<FieldElement> {
        let f = self.field;
        let mut acc = vec![0; self.track_len];
        for (k, row) in self.rows.iter().enumerate() {
            let c = v[self.pivots[k]];
            if c != 0 {
                f.axpy_neg(v, c, row);
                if self.track_len > 0 {
                    // v = c*row + rest, so the expression gains +c*track
                    let neg = f.neg(c);
                    f.axpy_neg(&mut acc, neg, &self.tracks[k]);
                }
            }
        }
        acc
    }

    pub fn reduce(&self, v: &mut [FieldElement]) {
        let f = self.field;
        for (k, row) in self.rows.iter().enumerate() {
            let c = v[self.pivots[k]];
            if c != 0 {
                f.axpy_neg(v, c, row);
            }
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<FieldElement>) -> bool {
        let track = vec![0; self.track_len];
        self.insert_tracked(v, track)
    }

    /// Inserts `v` whose expression in external coordinates is `track`.
    pub fn insert_tracked(&mut self, mut v: Vec<FieldElement>, track: Vec<FieldElement>) -> bool {
        debug_assert_eq!(v.len(), self.width);
        if self.rows.len() == self.width {
            return false;
        }
        let f = self.field;
        let mut t = track;
        let sub = self.reduce_tracked(&mut v);
        for (x, y) in t.iter_mut().zip(sub) {
            *x = f.sub(*x, y);
        }
        let Some(p) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(v[p]);
        f.scale(&mut v, inv);
        f.scale(&mut t, inv);
        self.rows.push(v);
        self.pivots.push(p);
        self.tracks.push(t);
        true
    }

    /// Tracking coordinates of `v`, or `None` if `v` is outside the span.
    pub fn express(&self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let mut w = v.to_vec();
        let acc = self.reduce_tracked(&mut w);
        if w.iter().all(|&x| x == 0) {
            Some(acc)
        } else {
            None
        }
    }

    /// Keeps only the first `n` tracking coordinates.
    pub fn truncate_tracking(&mut self, n: usize) {
        assert!(n <= self.track_len);
        self.track_len = n;
        for t in &mut self.tracks {
            t.truncate(n);
        }
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Columns spanning the vectors orthogonal to every stored row, in the
    /// same normal form as [`ScalarMatrix::kernel_basis`]: one per non-pivot
    /// column, with a 1 there and support otherwise on the pivots.
    pub fn kernel_basis(&self) -> ScalarMatrix {
        let f = self.field;
        let n = self.rows.len();
        let mut rows = self.rows.clone();
        // Back-substitute so each row vanishes at every other pivot.
        for k in (0..n).rev() {
            let (head, tail) = rows.split_at_mut(k + 1);
            let row = &mut head[k];
            for (l, later) in tail.iter().enumerate() {
                let c = row[self.pivots[k + 1 + l]];
                if c != 0 {
                    f.axpy_neg(row, c, later);
                }
            }
        }
        let mut is_pivot = vec![false; self.width];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.width).filter(|&c| !is_pivot[c]).collect();
        let mut out = ScalarMatrix::zeros(f, self.width, free.len());
        for (j, &fc) in free.iter().enumerate() {
            out.set(fc, j, 1);
            for (row, &pc) in rows.iter().zip(&self.pivots) {
                let x = row[fc];
                if x != 0 {
                    out.set(pc, j, f.neg(x));
                }
            }
        }
        out
    }

    /// The `k`-th stored row, normalized at its pivot.
    pub fn row(&self, k: usize) -> &[FieldElement] {
        &self.rows[k]
    }
}
