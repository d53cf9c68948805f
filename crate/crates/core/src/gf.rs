//! Dense linear algebra over a prime field.

use std::fmt;

use crate::field::{Field, PrimeField};

/// Row-major dense matrix with entries reduced modulo `p`.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Elimination on columns `0..limit` of a row-major buffer whose entries
/// may be unreduced. Row updates accumulate in 64 bits and are folded back
/// mod `p` only when the next update could overflow. With `full`, rows above
/// each pivot are cleared as well (Gauss–Jordan); otherwise only rows below.
/// Pivot rows end up normalized and on top; returns the pivot columns.
fn eliminate(field: PrimeField, a: &mut [u64], rows: usize, cols: usize, limit: usize, full: bool) -> Vec<usize> {
    let p = field.modulus() as u64;
    let budget = ((u64::MAX - p) / ((p - 1) * (p - 1)).max(1)).max(1);
    let mut pending = 0u64;
    let mut pivots = Vec::new();
    let mut prow = 0;
    for col in 0..limit {
        if prow == rows {
            break;
        }
        if pending == budget {
            a.iter_mut().for_each(|v| *v %= p);
            pending = 0;
        }
        let Some(found) = (prow..rows).find(|&r| a[r * cols + col] % p != 0) else {
            continue;
        };
        if found != prow {
            for j in col..cols {
                a.swap(found * cols + j, prow * cols + j);
            }
        }
        let inv = field.inv((a[prow * cols + col] % p) as u32).expect("nonzero pivot") as u64;
        for v in &mut a[prow * cols + col..(prow + 1) * cols] {
            *v = (*v % p) * inv % p;
        }
        // pivot rows of Macaulay matrices are sparse
        let nz: Vec<(usize, u64)> = a[prow * cols + col..(prow + 1) * cols]
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(|(j, &v)| (col + j, v))
            .collect();
        let first = if full { 0 } else { prow + 1 };
        for r in (first..rows).filter(|&r| r != prow) {
            let other = &mut a[r * cols..(r + 1) * cols];
            let factor = other[col] % p;
            if factor == 0 {
                other[col] = 0;
                continue;
            }
            let neg = p - factor;
            for &(j, pv) in &nz {
                other[j] += neg * pv;
            }
        }
        pending += 1;
        pivots.push(col);
        prow += 1;
    }
    pivots
}

/// Result of [`ExactMatrix::rref`]: the reduced matrix and its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: ExactMatrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl ExactMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    /// Build from signed integers, reducing each entry.
    pub fn from_i64(field: PrimeField, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(field, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, field.from_i64(v));
            }
        }
        m
    }

    pub fn from_fn(field: PrimeField, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> u32) -> Self {
        let mut m = Self::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                let v = f(i, j);
                m.set(i, j, field.reduce(v as u64));
            }
        }
        m
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        debug_assert!(v < self.field.modulus());
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [u32] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Keep the listed columns, in the listed order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            let src = self.row(i);
            let dst = out.row_mut(i);
            for (d, &c) in dst.iter_mut().zip(cols) {
                *d = src[c];
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(self.field, rows.len(), self.cols);
        for (k, &r) in rows.iter().enumerate() {
            out.row_mut(k).copy_from_slice(self.row(r));
        }
        out
    }

    pub fn is_zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(|&v| v == 0)
    }

    /// Reduced row echelon form by Gauss–Jordan elimination.
    ///
    /// Columns are processed left to right; the pivot is the first row (at or
    /// below the current pivot row) with a nonzero entry in the column.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, pivots }
    }

    /// In-place RREF; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.field.modulus() as u64;
        let mut a: Vec<u64> = self.data.iter().map(|&v| v as u64).collect();
        let pivots = eliminate(self.field, &mut a, self.rows, self.cols, self.cols, true);
        for (d, v) in self.data.iter_mut().zip(&a) {
            *d = (*v % p) as u32;
        }
        pivots
    }

    /// Rows spanning the part of the row space that vanishes on the first
    /// `block` columns, restricted to the remaining columns. Uses forward
    /// elimination on the block only.
    pub fn eliminate_block(&self, block: usize) -> ExactMatrix {
        assert!(block <= self.cols);
        let p = self.field.modulus() as u64;
        let mut a: Vec<u64> = self.data.iter().map(|&v| v as u64).collect();
        let rank = eliminate(self.field, &mut a, self.rows, self.cols, block, false).len();
        let width = self.cols - block;
        let mut out = ExactMatrix::zeros(self.field, self.rows - rank, width);
        for (i, r) in (rank..self.rows).enumerate() {
            for j in 0..width {
                out.data[i * width + j] = (a[r * self.cols + block + j] % p) as u32;
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Columns of `block` that do not increase the running rank when scanned
    /// left to right. Deleting them keeps the rank of the block submatrix.
    pub fn dependent_columns(&self, block: &[usize]) -> Vec<usize> {
        let sub = self.select_columns(block);
        let pivots = sub.rref().pivots;
        let mut keep = vec![false; block.len()];
        for p in pivots {
            keep[p] = true;
        }
        block
            .iter()
            .zip(keep)
            .filter(|(_, k)| !k)
            .map(|(&c, _)| c)
            .collect()
    }

    /// Greedy maximal set of linearly independent rows, scanned top to bottom.
    pub fn independent_rows(&self) -> Vec<usize> {
        self.transpose().rref().pivots
    }

    /// Whether the square matrix is singular, by elimination mod `p`.
    pub fn is_singular(&self) -> bool {
        assert_eq!(self.rows, self.cols, "square matrix required");
        self.rank() < self.rows
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, rhs.rows);
        let f = self.field;
        let mut out = ExactMatrix::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = f.add(out.get(i, j), f.mul(a, rhs.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} mod {}", self.rows, self.cols, self.field.modulus())?;
        for i in 0..self.rows {
            let row: Vec<i64> = self.row(i).iter().map(|&v| self.field.signed(v)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}
