//! Independent oracles: closed-form point evaluation of frame functions and
//! dense shift/projection matrices built from scratch.
#![allow(dead_code)]

use hardy_lab::linalg::{CMatrix, C64};
use nalgebra::DMatrix;

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `B(z)` for the given zeros.
pub fn blaschke_at(zeros: &[C64], z: C64) -> C64 {
    zeros.iter().fold(one(), |acc, w| acc * (z - w) / (one() - w.conj() * z))
}

/// Values `e_1(z), …, e_l(z)` of the Takenaka–Malmquist functions.
pub fn tm_at(zeros: &[C64], z: C64) -> Vec<C64> {
    let mut prefix = one();
    let mut out = Vec::with_capacity(zeros.len());
    for w in zeros {
        out.push(prefix * (1.0 - w.norm_sqr()).sqrt() / (one() - w.conj() * z));
        prefix *= (z - w) / (one() - w.conj() * z);
    }
    out
}

/// Value at `z` of the function with Wold coordinates `coords`
/// (index `(n·l + j)·m + s`), one entry per fiber.
pub fn eval_wold(zeros: &[C64], m: usize, coords: &[C64], z: C64) -> Vec<C64> {
    let l = zeros.len();
    let e = tm_at(zeros, z);
    let b = blaschke_at(zeros, z);
    let mut out = vec![C64::new(0.0, 0.0); m];
    let mut bn = one();
    for chunk in coords.chunks(l * m) {
        for j in 0..l {
            for s in 0..m {
                out[s] += chunk[j * m + s] * bn * e[j];
            }
        }
        bn *= b;
    }
    out
}

/// Sample points on three circles inside the disk.
pub fn sample_points() -> Vec<C64> {
    let mut pts = Vec::new();
    for &r in &[0.3, 0.6, 0.85] {
        for k in 0..12 {
            pts.push(C64::from_polar(r, 2.0 * std::f64::consts::PI * (k as f64 + 0.5 * r) / 12.0));
        }
    }
    pts
}

/// Lower bound for the H² norm of a function from its values:
/// `|f(z)| ≤ ‖f‖ / √(1 − |z|²)`.
pub fn norm_lower_bound(values: &[(C64, Vec<C64>)]) -> f64 {
    values
        .iter()
        .map(|(z, v)| v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt() * (1.0 - z.norm_sqr()).sqrt())
        .fold(0.0, f64::max)
}

/// Dense block left shift on `blocks` blocks of length `bl`.
pub fn left_shift(bl: usize, blocks: usize) -> CMatrix {
    let d = bl * blocks;
    let mut s = DMatrix::zeros(d, d);
    for i in bl..d {
        s[(i - bl, i)] = one();
    }
    s
}

/// Orthogonal projector onto the column span of `a`, via QR.
pub fn projector(a: &CMatrix) -> CMatrix {
    if a.ncols() == 0 {
        return DMatrix::zeros(a.nrows(), a.nrows());
    }
    let q = a.clone().qr().q();
    &q * q.adjoint()
}

/// Frobenius norm, an upper bound for the operator norm.
pub fn frob(a: &CMatrix) -> f64 {
    a.norm()
}
