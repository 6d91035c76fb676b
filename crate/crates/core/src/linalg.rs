//! Small dense complex helpers shared by the frame, subspace and operator code.
//!
//! All loops run in a fixed order so that results are bitwise reproducible for
//! a given input, independent of thread scheduling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `⟨x, y⟩ = Σ x_i · conj(y_i)`, linear in the first slot.
pub fn inner(x: &CVector, y: &CVector) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y.iter()).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &CVector) -> f64 {
    x.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|a| a.norm()).fold(0.0, f64::max)
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// Columns are visited in input order; a column is dropped when its residual
/// after projection falls below `rank_tol · max_column_norm`. Returns the
/// accepted orthonormal columns as a `rows × k` matrix.
pub fn orthonormal_columns(cols: &[CVector], rows: usize, rank_tol: f64) -> CMatrix {
    let scale = cols.iter().map(norm).fold(0.0, f64::max);
    let mut basis: Vec<CVector> = Vec::new();
    if scale == 0.0 {
        return CMatrix::zeros(rows, 0);
    }
    for col in cols {
        debug_assert_eq!(col.len(), rows);
        let mut v = col.clone();
        for _pass in 0..2 {
            for q in &basis {
                let c = inner(&v, q);
                v.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let nv = norm(&v);
        if nv > rank_tol * scale {
            v.unscale_mut(nv);
            basis.push(v);
        }
    }
    if basis.is_empty() {
        return CMatrix::zeros(rows, 0);
    }
    CMatrix::from_columns(&basis)
}

fn to_faer(m: &CMatrix) -> faer::Mat<C64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn svd_into(m: &CMatrix, vectors: bool) -> (Vec<f64>, Option<(CMatrix, CMatrix)>) {
    use faer::dyn_stack::{MemBuffer, MemStack};
    use faer::linalg::svd::{svd, svd_scratch, ComputeSvdVectors};

    let (r, c) = m.shape();
    let k = r.min(c);
    let a = to_faer(m);
    let mut s = faer::diag::Diag::<C64>::zeros(k);
    let mut u = faer::Mat::<C64>::zeros(r, k);
    let mut v = faer::Mat::<C64>::zeros(c, k);
    let compute = if vectors { ComputeSvdVectors::Thin } else { ComputeSvdVectors::No };
    let par = faer::Par::Seq;
    let mut buf = MemBuffer::new(svd_scratch::<C64>(r, c, compute, compute, par, Default::default()));
    let (uo, vo) = if vectors { (Some(u.as_mut()), Some(v.as_mut())) } else { (None, None) };
    svd(a.as_ref(), s.as_mut(), uo, vo, par, MemStack::new(&mut buf), Default::default())
        .expect("svd converges on finite input");
    let sv = s.column_vector().iter().map(|x| x.re).collect();
    let uv = vectors.then(|| {
        (
            CMatrix::from_fn(r, k, |i, j| u[(i, j)]),
            CMatrix::from_fn(c, k, |i, j| v[(i, j)]),
        )
    });
    (sv, uv)
}

/// Singular values and left/right singular vectors (thin) of a small
/// matrix, sorted by decreasing singular value. Empty inputs produce empty
/// outputs.
pub fn sorted_svd(m: &CMatrix) -> (Vec<f64>, CMatrix, CMatrix) {
    let (r, c) = m.shape();
    if r.min(c) == 0 {
        return (Vec::new(), CMatrix::zeros(r, 0), CMatrix::zeros(c, 0));
    }
    let (sv, uv) = svd_into(m, true);
    let (u, v) = uv.expect("vectors requested");
    (sv, u, v)
}

/// Largest singular value (spectral norm); zero for empty matrices.
pub fn spectral_norm(m: &CMatrix) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    svd_into(m, false).0.into_iter().fold(0.0, f64::max)
}
