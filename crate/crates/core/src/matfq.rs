//! Dense matrices over `F_{2^r}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::gf2r::{FieldDescriptor, FieldElement};

/// Row-major dense matrix whose entries all live in one field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixFq {
    field: FieldDescriptor,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl MatrixFq {
    pub fn zeros(field: FieldDescriptor, rows: usize, cols: usize) -> Self {
        MatrixFq { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: FieldDescriptor, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from raw element bits in row-major order.
    pub fn from_bits(field: FieldDescriptor, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&b| b >= field.order()) {
            return Err(Error::ElementOutOfRange { bits: bad, q: field.order() });
        }
        Ok(MatrixFq { field, rows, cols, data })
    }

    pub fn from_rows(field: FieldDescriptor, rows: &[&[u32]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_bits(field, rows.len(), cols, rows.concat())
    }

    pub(crate) fn from_raw(field: FieldDescriptor, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        MatrixFq { field, rows, cols, data }
    }

    pub fn field(&self) -> &FieldDescriptor {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Raw entry bits in row-major order.
    pub fn bits(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get_bits(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set_bits(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self.get_bits(i, j))
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) -> Result<()> {
        if *v.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        self.set_bits(i, j, v.bits());
        Ok(())
    }

    pub fn transpose(&self) -> MatrixFq {
        let mut t = MatrixFq::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set_bits(j, i, self.get_bits(i, j));
            }
        }
        t
    }

    /// The `rows x cols` block starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> MatrixFq {
        let mut b = MatrixFq::zeros(self.field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                b.set_bits(i, j, self.get_bits(r0 + i, c0 + j));
            }
        }
        b
    }

    pub(crate) fn put_block(&mut self, r0: usize, c0: usize, b: &MatrixFq) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set_bits(r0 + i, c0 + j, b.get_bits(i, j));
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&b| b == 0)
    }

    pub fn add(&self, other: &MatrixFq) -> Result<MatrixFq> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(MatrixFq::from_raw(self.field, self.rows, self.cols, data))
    }

    pub fn mul(&self, other: &MatrixFq) -> Result<MatrixFq> {
        mat_mul(self, other)
    }

    /// Product without field/dimension checks.
    pub(crate) fn mul_unchecked(&self, other: &MatrixFq) -> MatrixFq {
        let f = &self.field;
        let mut out = vec![0u32; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d ^= f.mul_bits(a, b);
                }
            }
        }
        MatrixFq::from_raw(self.field, self.rows, other.cols, out)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn inverse(&self) -> Result<MatrixFq> {
        mat_inv(self)
    }

    pub fn trace(&self) -> Result<FieldElement> {
        mat_trace(self)
    }

    pub(crate) fn trace_bits_unchecked(&self) -> u32 {
        (0..self.rows).fold(0, |acc, i| acc ^ self.get_bits(i, i))
    }

    /// Rank over `F_q`.
    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut m = self.data.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| m[r * cols + c] != 0) else {
                continue;
            };
            for j in 0..cols {
                m.swap(rank * cols + j, p * cols + j);
            }
            let inv = f.inv_bits(m[rank * cols + c]).expect("nonzero pivot");
            for j in 0..cols {
                m[rank * cols + j] = f.mul_bits(m[rank * cols + j], inv);
            }
            for r in 0..rows {
                let factor = m[r * cols + c];
                if r != rank && factor != 0 {
                    for j in 0..cols {
                        m[r * cols + j] ^= f.mul_bits(factor, m[rank * cols + j]);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

impl fmt::Debug for MatrixFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixFq[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get_bits(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul(a: &MatrixFq, b: &MatrixFq) -> Result<MatrixFq> {
    if a.field != b.field {
        return Err(Error::FieldMismatch);
    }
    if a.cols != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.mul_unchecked(b))
}

/// Gauss-Jordan inversion; a zero pivot column means the matrix is singular.
pub fn mat_inv(a: &MatrixFq) -> Result<MatrixFq> {
    a.require_square()?;
    let n = a.rows;
    let f = a.field;
    let w = 2 * n;
    let mut m = vec![0u32; n * w];
    for i in 0..n {
        m[i * w..i * w + n].copy_from_slice(&a.data[i * n..(i + 1) * n]);
        m[i * w + n + i] = 1;
    }
    for c in 0..n {
        let p = (c..n).find(|&r| m[r * w + c] != 0).ok_or(Error::Singular)?;
        if p != c {
            for j in 0..w {
                m.swap(c * w + j, p * w + j);
            }
        }
        let inv = f.inv_bits(m[c * w + c]).ok_or(Error::Singular)?;
        for j in 0..w {
            m[c * w + j] = f.mul_bits(m[c * w + j], inv);
        }
        for r in 0..n {
            let factor = m[r * w + c];
            if r != c && factor != 0 {
                for j in 0..w {
                    m[r * w + j] ^= f.mul_bits(factor, m[c * w + j]);
                }
            }
        }
    }
    let data = (0..n).flat_map(|i| m[i * w + n..(i + 1) * w].to_vec()).collect();
    Ok(MatrixFq::from_raw(f, n, n, data))
}

pub fn mat_trace(a: &MatrixFq) -> Result<FieldElement> {
    a.require_square()?;
    Ok(a.field.elem(a.trace_bits_unchecked()))
}

/// Zero diagonal and symmetric off-diagonal part (antisymmetry in
/// characteristic 2).
pub fn is_alternating(a: &MatrixFq) -> Result<bool> {
    a.require_square()?;
    let n = a.rows;
    for i in 0..n {
        if a.get_bits(i, i) != 0 {
            return Ok(false);
        }
        for j in i + 1..n {
            if a.get_bits(i, j) != a.get_bits(j, i) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
