//! JSON wire shapes: complex numbers as `[re, im]`, matrices row-major.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::linalg::{c64, CMatrix, CVector, C64};

pub type Pair = [f64; 2];

pub fn pair(z: C64) -> Pair {
    [z.re, z.im]
}

pub fn unpair(p: Pair) -> C64 {
    c64(p[0], p[1])
}

pub fn pairs(v: &[C64]) -> Vec<Pair> {
    v.iter().copied().map(pair).collect()
}

pub fn unpairs(v: &[Pair]) -> Vec<C64> {
    v.iter().copied().map(unpair).collect()
}

pub fn vector_pairs(v: &CVector) -> Vec<Pair> {
    v.iter().copied().map(pair).collect()
}

pub fn vector_from_pairs(v: &[Pair]) -> CVector {
    CVector::from_iterator(v.len(), v.iter().copied().map(unpair))
}

/// Row-major dense complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Pair>,
}

impl MatrixRecord {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let (rows, cols) = m.shape();
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(pair(m[(i, j)]));
            }
        }
        MatrixRecord { rows, cols, data }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.data.len() != self.rows * self.cols {
            return Err(LabError::Schema(format!(
                "matrix record holds {} entries for shape {}x{}",
                self.data.len(),
                self.rows,
                self.cols
            )));
        }
        Ok(CMatrix::from_row_iterator(
            self.rows,
            self.cols,
            self.data.iter().copied().map(unpair),
        ))
    }
}
