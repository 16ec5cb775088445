//! Exact dense integer matrix products: schoolbook and recursive Strassen.

use rayon::join;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub const STRASSEN_CUTOFF: usize = 64;

/// Square row-major matrix of `i64`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Parameter("matrix rows must form a square".into()));
        }
        Ok(Self {
            dim,
            data: rows.concat(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.dim + j] = x;
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Grows or shrinks to `dim`, keeping the overlapping top-left block.
    pub fn resized(&self, dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        let keep = dim.min(self.dim);
        for i in 0..keep {
            out.data[i * dim..i * dim + keep]
                .copy_from_slice(&self.data[i * self.dim..i * self.dim + keep]);
        }
        out
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn clear_row_and_col(&mut self, i: usize) {
        let d = self.dim;
        self.data[i * d..(i + 1) * d].fill(0);
        for r in 0..d {
            self.data[r * d + i] = 0;
        }
    }
}

fn check_dims(a: &DenseMatrix, b: &DenseMatrix) -> Result<()> {
    if a.dim != b.dim {
        return Err(Error::Parameter(format!(
            "dimension mismatch: {} vs {}",
            a.dim, b.dim
        )));
    }
    Ok(())
}

pub fn naive_multiply(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    check_dims(a, b)?;
    let n = a.dim;
    let mut c = DenseMatrix::zeros(n);
    if n == 0 {
        return Ok(c);
    }
    c.data
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| naive_row(&a.data[i * n..(i + 1) * n], &b.data, n, row));
    Ok(c)
}

#[inline]
fn naive_row(arow: &[i64], b: &[i64], n: usize, out: &mut [i64]) {
    for (k, &x) in arow.iter().enumerate() {
        if x == 0 {
            continue;
        }
        let brow = &b[k * n..(k + 1) * n];
        for (o, &y) in out.iter_mut().zip(brow) {
            *o += x * y;
        }
    }
}

pub fn strassen_multiply(a: &DenseMatrix, b: &DenseMatrix) -> Result<DenseMatrix> {
    strassen_multiply_with_cutoff(a, b, STRASSEN_CUTOFF)
}

/// Strassen recursion down to blocks of side `cutoff` (at least 1), then the
/// schoolbook product. Inputs are zero-padded to a power of two.
pub fn strassen_multiply_with_cutoff(
    a: &DenseMatrix,
    b: &DenseMatrix,
    cutoff: usize,
) -> Result<DenseMatrix> {
    check_dims(a, b)?;
    let n = a.dim;
    let cutoff = cutoff.max(1);
    if n <= cutoff {
        return naive_multiply(a, b);
    }
    let p = n.next_power_of_two();
    let pa = if p == n { a.clone() } else { a.resized(p) };
    let pb = if p == n { b.clone() } else { b.resized(p) };
    let c = strassen_rec(&pa.data, &pb.data, p, cutoff);
    let full = DenseMatrix { dim: p, data: c };
    Ok(if p == n { full } else { full.resized(n) })
}

fn quadrants(m: &[i64], n: usize) -> [Vec<i64>; 4] {
    let h = n / 2;
    let mut q = [
        Vec::with_capacity(h * h),
        Vec::with_capacity(h * h),
        Vec::with_capacity(h * h),
        Vec::with_capacity(h * h),
    ];
    for i in 0..n {
        let row = &m[i * n..(i + 1) * n];
        let base = if i < h { 0 } else { 2 };
        q[base].extend_from_slice(&row[..h]);
        q[base + 1].extend_from_slice(&row[h..]);
    }
    q
}

fn add(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a + b).collect()
}

fn sub(x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(a, b)| a - b).collect()
}

fn strassen_rec(a: &[i64], b: &[i64], n: usize, cutoff: usize) -> Vec<i64> {
    if n <= cutoff {
        let mut out = vec![0; n * n];
        for i in 0..n {
            naive_row(&a[i * n..(i + 1) * n], b, n, &mut out[i * n..(i + 1) * n]);
        }
        return out;
    }
    let h = n / 2;
    let [a11, a12, a21, a22] = quadrants(a, n);
    let [b11, b12, b21, b22] = quadrants(b, n);
    let rec = |x: Vec<i64>, y: Vec<i64>| strassen_rec(&x, &y, h, cutoff);

    let ((m1, m2), ((m3, m4), (m5, (m6, m7)))) = join(
        || {
            join(
                || rec(add(&a11, &a22), add(&b11, &b22)),
                || rec(add(&a21, &a22), b11.clone()),
            )
        },
        || {
            join(
                || {
                    join(
                        || rec(a11.clone(), sub(&b12, &b22)),
                        || rec(a22.clone(), sub(&b21, &b11)),
                    )
                },
                || {
                    join(
                        || rec(add(&a11, &a12), b22.clone()),
                        || {
                            join(
                                || rec(sub(&a21, &a11), add(&b11, &b12)),
                                || rec(sub(&a12, &a22), add(&b21, &b22)),
                            )
                        },
                    )
                },
            )
        },
    );

    let mut c = vec![0; n * n];
    c.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let (top, r) = (i < h, i % h);
        for j in 0..h {
            let q = r * h + j;
            if top {
                row[j] = m1[q] + m4[q] - m5[q] + m7[q];
                row[h + j] = m3[q] + m5[q];
            } else {
                row[j] = m2[q] + m4[q];
                row[h + j] = m1[q] - m2[q] + m3[q] + m6[q];
            }
        }
    });
    c
}

/// Sum of the diagonal of `A·A·A`.
pub fn cube_diagonal_sum(a: &DenseMatrix) -> i64 {
    let sq = strassen_multiply(a, a).expect("same matrix");
    strassen_multiply(&sq, a).expect("same dimension").trace()
}
