//! Finite model of `H²(𝔻, ℂᵐ)`.
//!
//! Functions have two representations: Taylor coefficients ([`H2Element`])
//! and coordinates in a Wold frame ([`WoldVector`]). A [`WoldFrame`] built on
//! a Blaschke product `B` with `B(0) = 0` is the orthonormal family
//! `Bⁿ e_j E_s` (`n < N`, `e_j` the Takenaka–Malmquist basis of `K_B`,
//! `E_s` the standard basis of `ℂᵐ`). In these coordinates multiplication by
//! `B` and its adjoint are block shifts.
//!
//! Coordinates are laid out as `(n·l + j)·m + s` with zero-based `j` and `s`,
//! so block `n` is the contiguous range `[n·l·m, (n+1)·l·m)`.

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blaschke::{series_mul, BlaschkeProduct};
use crate::codec::{pair, unpair, vector_from_pairs, vector_pairs, Pair};
use crate::error::{LabError, Result};
use crate::linalg::{inner as cinner, norm as cnorm, CMatrix, CVector, C64};

pub const DEFAULT_BLOCKS: usize = 8;
pub const DEFAULT_TAYLOR_DEGREE: usize = 200;

/// A function in `H²(𝔻, ℂᵐ)` by its Taylor coefficients through degree `D`.
#[derive(Debug, Clone, PartialEq)]
pub struct H2Element {
    coeffs: CMatrix,
}

impl H2Element {
    pub fn new(coeffs: CMatrix) -> Self {
        H2Element { coeffs }
    }

    pub fn zeros(m: usize, d: usize) -> Self {
        H2Element {
            coeffs: CMatrix::zeros(m, d + 1),
        }
    }

    /// The constant function `E_s`.
    pub fn constant(m: usize, d: usize, s: usize) -> Self {
        let mut e = Self::zeros(m, d);
        e.coeffs[(s, 0)] = C64::new(1.0, 0.0);
        e
    }

    /// `series ⊗ E_s`.
    pub fn from_scalar(series: &[C64], m: usize, d: usize, s: usize) -> Self {
        let mut e = Self::zeros(m, d);
        for (k, c) in series.iter().enumerate().take(d + 1) {
            e.coeffs[(s, k)] = *c;
        }
        e
    }

    pub fn m(&self) -> usize {
        self.coeffs.nrows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.ncols() - 1
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    fn check_shape(&self, other: &H2Element) -> Result<()> {
        if self.m() != other.m() {
            return Err(LabError::DimensionMismatch {
                expected: self.m(),
                actual: other.m(),
            });
        }
        if self.degree() != other.degree() {
            return Err(LabError::DimensionMismatch {
                expected: self.degree(),
                actual: other.degree(),
            });
        }
        Ok(())
    }

    pub fn inner(&self, other: &H2Element) -> Result<C64> {
        self.check_shape(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| a * b.conj())
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scale(&self, a: C64) -> H2Element {
        H2Element {
            coeffs: &self.coeffs * a,
        }
    }

    pub fn sub(&self, other: &H2Element) -> Result<H2Element> {
        self.check_shape(other)?;
        Ok(H2Element {
            coeffs: &self.coeffs - &other.coeffs,
        })
    }

    /// Pointwise product with a scalar series, truncated at this degree.
    pub fn times_scalar(&self, series: &[C64]) -> H2Element {
        let d = self.degree();
        let mut out = CMatrix::zeros(self.m(), d + 1);
        for s in 0..self.m() {
            let row: Vec<C64> = self.coeffs.row(s).iter().copied().collect();
            for (k, c) in series_mul(&row, series, d).into_iter().enumerate() {
                out[(s, k)] = c;
            }
        }
        H2Element { coeffs: out }
    }
}

#[derive(Serialize, Deserialize)]
struct H2Record {
    m: usize,
    #[serde(rename = "D")]
    d: usize,
    rows: Vec<Vec<Pair>>,
}

impl Serialize for H2Element {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = (0..self.m())
            .map(|s| self.coeffs.row(s).iter().copied().map(pair).collect())
            .collect();
        H2Record {
            m: self.m(),
            d: self.degree(),
            rows,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for H2Element {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rec = H2Record::deserialize(de)?;
        if rec.rows.len() != rec.m || rec.rows.iter().any(|r| r.len() != rec.d + 1) {
            return Err(D::Error::custom("H2 element rows do not match m and D"));
        }
        let coeffs = CMatrix::from_fn(rec.m, rec.d + 1, |s, k| unpair(rec.rows[s][k]));
        Ok(H2Element { coeffs })
    }
}

/// Takenaka–Malmquist basis of the model space `K_B` in Taylor form.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBasis {
    pub b: BlaschkeProduct,
    pub taylor_degree: usize,
    /// Row `j` holds the Taylor coefficients of `e_{j+1}`.
    pub tm_coeffs: CMatrix,
}

/// `e_k(z) = √(1−|w_k|²)/(1 − w̄_k z) · ∏_{i<k} (z − wᵢ)/(1 − w̄ᵢ z)`.
pub fn tm_basis(b: &BlaschkeProduct, d: usize) -> Result<ModelBasis> {
    let l = b.degree();
    if l == 0 {
        return Err(LabError::InvalidBlaschke("model space of a constant is trivial".into()));
    }
    if d < l {
        return Err(LabError::Parameter(format!("Taylor degree {d} below model dimension {l}")));
    }
    let mut rows = CMatrix::zeros(l, d + 1);
    let mut prefix = vec![C64::new(0.0, 0.0); d + 1];
    prefix[0] = C64::new(1.0, 0.0);
    for (k, w) in b.zeros().iter().enumerate() {
        let wc = w.conj();
        let scale = (1.0 - w.norm_sqr()).sqrt();
        let mut kernel = vec![C64::new(0.0, 0.0); d + 1];
        let mut pow = C64::new(scale, 0.0);
        for c in kernel.iter_mut() {
            *c = pow;
            pow *= wc;
        }
        for (i, c) in series_mul(&prefix, &kernel, d).into_iter().enumerate() {
            rows[(k, i)] = c;
        }
        let factor = BlaschkeProduct::new(vec![*w])?.taylor(d);
        prefix = series_mul(&prefix, &factor, d);
    }
    Ok(ModelBasis {
        b: b.clone(),
        taylor_degree: d,
        tm_coeffs: rows,
    })
}

/// Identifies a frame for serialization and comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDescriptor {
    pub zeros: BlaschkeProduct,
    pub m: usize,
    pub blocks: usize,
    pub taylor_degree: usize,
}

impl FrameDescriptor {
    pub fn build(&self) -> Result<Arc<WoldFrame>> {
        WoldFrame::build(&self.zeros, self.m, self.blocks, self.taylor_degree)
    }
}

/// Orthonormal frame `{Bⁿ e_j E_s : n < N}` of `V_N = ⊕_{n<N} Bⁿ(K_B ⊗ ℂᵐ)`.
#[derive(Debug)]
pub struct WoldFrame {
    b: BlaschkeProduct,
    m: usize,
    blocks: usize,
    basis: ModelBasis,
    rows: OnceLock<CMatrix>,
}

pub type Frame = Arc<WoldFrame>;

impl WoldFrame {
    /// Frames require `B(0) = 0`; a fiber of dimension 0 is allowed and gives
    /// the zero space.
    pub fn build(b: &BlaschkeProduct, m: usize, blocks: usize, d: usize) -> Result<Frame> {
        if b.degree() == 0 || !b.vanishes_at_origin() {
            return Err(LabError::StandingAssumption(
                "frame symbol must vanish at the origin".into(),
            ));
        }
        if blocks == 0 {
            return Err(LabError::Parameter("a frame needs at least one block".into()));
        }
        let basis = tm_basis(b, d)?;
        Ok(Arc::new(WoldFrame {
            b: b.clone(),
            m,
            blocks,
            basis,
            rows: OnceLock::new(),
        }))
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.b
    }

    pub fn basis(&self) -> &ModelBasis {
        &self.basis
    }

    pub fn l(&self) -> usize {
        self.b.degree()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    pub fn taylor_degree(&self) -> usize {
        self.basis.taylor_degree
    }

    pub fn block_len(&self) -> usize {
        self.l() * self.m
    }

    pub fn dim(&self) -> usize {
        self.blocks * self.block_len()
    }

    pub fn index(&self, n: usize, j: usize, s: usize) -> usize {
        debug_assert!(n < self.blocks && j < self.l() && s < self.m);
        (n * self.l() + j) * self.m + s
    }

    pub fn position(&self, idx: usize) -> (usize, usize, usize) {
        let s = idx % self.m;
        let nj = idx / self.m;
        (nj / self.l(), nj % self.l(), s)
    }

    pub fn descriptor(&self) -> FrameDescriptor {
        FrameDescriptor {
            zeros: self.b.clone(),
            m: self.m,
            blocks: self.blocks,
            taylor_degree: self.taylor_degree(),
        }
    }

    pub fn same_as(self: &Arc<Self>, other: &Arc<Self>) -> bool {
        Arc::ptr_eq(self, other)
            || (self.m == other.m
                && self.blocks == other.blocks
                && self.taylor_degree() == other.taylor_degree()
                && self.b == other.b)
    }

    pub fn ensure_same(self: &Arc<Self>, other: &Arc<Self>) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(LabError::FrameMismatch(format!(
                "frame (m={}, N={}) vs (m={}, N={})",
                self.m, self.blocks, other.m, other.blocks
            )))
        }
    }

    pub fn with_blocks(&self, blocks: usize) -> Result<Frame> {
        WoldFrame::build(&self.b, self.m, blocks, self.taylor_degree())
    }

    pub fn with_fiber(&self, m: usize) -> Result<Frame> {
        WoldFrame::build(&self.b, m, self.blocks, self.taylor_degree())
    }

    /// Scalar Taylor rows of `Bⁿ e_j`, row `n·l + j`. Built on first use.
    pub fn taylor_rows(&self) -> &CMatrix {
        self.rows.get_or_init(|| {
            let l = self.l();
            let d = self.taylor_degree();
            let bt = self.b.taylor(d);
            let mut rows = CMatrix::zeros(self.blocks * l, d + 1);
            let mut bn = vec![C64::new(0.0, 0.0); d + 1];
            bn[0] = C64::new(1.0, 0.0);
            for n in 0..self.blocks {
                for j in 0..l {
                    let ej: Vec<C64> = self.basis.tm_coeffs.row(j).iter().copied().collect();
                    for (k, c) in series_mul(&bn, &ej, d).into_iter().enumerate() {
                        rows[(n * l + j, k)] = c;
                    }
                }
                bn = series_mul(&bn, &bt, d);
            }
            rows
        })
    }

    /// The frame function `Bⁿ e_j E_s`.
    pub fn function(&self, n: usize, j: usize, s: usize) -> H2Element {
        let row: Vec<C64> = self.taylor_rows().row(n * self.l() + j).iter().copied().collect();
        H2Element::from_scalar(&row, self.m, self.taylor_degree(), s)
    }

    /// Gram matrix of the scalar frame rows; identity up to Taylor truncation.
    pub fn scalar_gram(&self) -> CMatrix {
        let r = self.taylor_rows();
        r * r.adjoint()
    }
}

/// Coordinates of a function in a [`WoldFrame`].
#[derive(Debug, Clone)]
pub struct WoldVector {
    pub frame: Frame,
    pub coords: CVector,
}

impl PartialEq for WoldVector {
    fn eq(&self, other: &Self) -> bool {
        self.frame.same_as(&other.frame) && self.coords == other.coords
    }
}

impl WoldVector {
    pub fn new(frame: Frame, coords: CVector) -> Result<Self> {
        if coords.len() != frame.dim() {
            return Err(LabError::DimensionMismatch {
                expected: frame.dim(),
                actual: coords.len(),
            });
        }
        Ok(WoldVector { frame, coords })
    }

    pub fn zeros(frame: &Frame) -> Self {
        WoldVector {
            coords: CVector::zeros(frame.dim()),
            frame: frame.clone(),
        }
    }

    pub fn unit(frame: &Frame, n: usize, j: usize, s: usize) -> Self {
        let mut v = Self::zeros(frame);
        v.coords[frame.index(n, j, s)] = C64::new(1.0, 0.0);
        v
    }

    pub fn norm(&self) -> f64 {
        cnorm(&self.coords)
    }

    pub fn inner(&self, other: &WoldVector) -> Result<C64> {
        self.frame.ensure_same(&other.frame)?;
        Ok(cinner(&self.coords, &other.coords))
    }

    /// Largest modulus among coordinates with model index `j ≠ 0`.
    pub fn off_first_model_index(&self) -> f64 {
        (0..self.coords.len())
            .filter(|&i| self.frame.position(i).1 != 0)
            .map(|i| self.coords[i].norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct WoldRecord {
    frame: FrameDescriptor,
    coords: Vec<Pair>,
}

impl Serialize for WoldVector {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        WoldRecord {
            frame: self.frame.descriptor(),
            coords: vector_pairs(&self.coords),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for WoldVector {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rec = WoldRecord::deserialize(de)?;
        let frame = rec.frame.build().map_err(D::Error::custom)?;
        WoldVector::new(frame, vector_from_pairs(&rec.coords)).map_err(D::Error::custom)
    }
}

/// Frame coordinates of `f` and the norm of the part the frame misses.
pub fn to_wold(f: &H2Element, frame: &Frame) -> Result<(WoldVector, f64)> {
    if f.m() != frame.m() {
        return Err(LabError::DimensionMismatch {
            expected: frame.m(),
            actual: f.m(),
        });
    }
    if f.degree() != frame.taylor_degree() {
        return Err(LabError::DimensionMismatch {
            expected: frame.taylor_degree(),
            actual: f.degree(),
        });
    }
    let rows = frame.taylor_rows();
    let prod = f.coeffs() * rows.adjoint();
    let mut coords = CVector::zeros(frame.dim());
    for (i, c) in coords.iter_mut().enumerate() {
        let (n, j, s) = frame.position(i);
        *c = prod[(s, n * frame.l() + j)];
    }
    let v = WoldVector::new(frame.clone(), coords)?;
    let residual = f.sub(&from_wold(&v))?.norm();
    Ok((v, residual))
}

pub fn from_wold(v: &WoldVector) -> H2Element {
    let frame = &v.frame;
    let l = frame.l();
    let mut c = CMatrix::zeros(frame.m(), frame.blocks() * l);
    for (i, x) in v.coords.iter().enumerate() {
        let (n, j, s) = frame.position(i);
        c[(s, n * l + j)] = *x;
    }
    H2Element::new(c * frame.taylor_rows())
}

/// Frame over `ℂ^{p+m}` from frames over `ℂᵖ` and `ℂᵐ` on the same symbol,
/// block count and Taylor degree. Fibers `0..p` come first.
pub fn concat_frames(fp: &Frame, fm: &Frame) -> Result<Frame> {
    if fp.blaschke() != fm.blaschke()
        || fp.blocks() != fm.blocks()
        || fp.taylor_degree() != fm.taylor_degree()
    {
        return Err(LabError::FrameMismatch(
            "concatenated frames need the same symbol, blocks and Taylor degree".into(),
        ));
    }
    if fp.m() == 0 {
        return Ok(fm.clone());
    }
    if fm.m() == 0 {
        return Ok(fp.clone());
    }
    fm.with_fiber(fp.m() + fm.m())
}

/// Interleave coordinate vectors with fiber sizes `sizes` into the joined
/// fiber layout. Every part must have `blocks·l·size` entries.
pub fn join_fibers(parts: &[&CVector], sizes: &[usize], blocks: usize, l: usize) -> CVector {
    let total: usize = sizes.iter().sum();
    let mut out = CVector::zeros(blocks * l * total);
    for nj in 0..blocks * l {
        let mut offset = 0;
        for (part, &sz) in parts.iter().zip(sizes) {
            for s in 0..sz {
                out[nj * total + offset + s] = part[nj * sz + s];
            }
            offset += sz;
        }
    }
    out
}

/// Inverse of [`join_fibers`].
pub fn split_fibers(v: &CVector, sizes: &[usize], blocks: usize, l: usize) -> Vec<CVector> {
    let total: usize = sizes.iter().sum();
    let mut parts: Vec<CVector> = sizes.iter().map(|&sz| CVector::zeros(blocks * l * sz)).collect();
    for nj in 0..blocks * l {
        let mut offset = 0;
        for (part, &sz) in parts.iter_mut().zip(sizes) {
            for s in 0..sz {
                part[nj * sz + s] = v[nj * total + offset + s];
            }
            offset += sz;
        }
    }
    parts
}

/// Zero-pad or truncate coordinates to `to_blocks` blocks.
pub fn resize_blocks(v: &CVector, block_len: usize, to_blocks: usize) -> CVector {
    let mut out = CVector::zeros(to_blocks * block_len);
    let n = v.len().min(out.len());
    out.rows_mut(0, n).copy_from(&v.rows(0, n));
    out
}

/// Column-wise [`resize_blocks`].
pub fn resize_blocks_mat(m: &CMatrix, block_len: usize, to_blocks: usize) -> CMatrix {
    let mut out = CMatrix::zeros(to_blocks * block_len, m.ncols());
    let n = m.nrows().min(out.nrows());
    out.rows_mut(0, n).copy_from(&m.rows(0, n));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, max_abs};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn b_half() -> BlaschkeProduct {
        BlaschkeProduct::new(vec![c64(0.0, 0.0), c64(0.5, 0.0)]).unwrap()
    }

    #[test]
    fn tm_basis_examples() {
        let mb = tm_basis(&BlaschkeProduct::monomial(1), 5).unwrap();
        assert_eq!(mb.tm_coeffs.nrows(), 1);
        assert_eq!(mb.tm_coeffs[(0, 0)], c64(1.0, 0.0));
        assert!(mb.tm_coeffs.iter().skip(1).all(|c| *c == c64(0.0, 0.0)));

        let mb = tm_basis(&BlaschkeProduct::monomial(2), 5).unwrap();
        assert_eq!(mb.tm_coeffs[(0, 0)], c64(1.0, 0.0));
        assert_eq!(mb.tm_coeffs[(1, 1)], c64(1.0, 0.0));
        assert_eq!(mb.tm_coeffs.iter().filter(|c| **c != c64(0.0, 0.0)).count(), 2);
    }

    #[test]
    fn tm_second_function_matches_gram_schmidt() {
        let d = 120;
        let mb = tm_basis(&b_half(), d).unwrap();
        // oracle: Gram–Schmidt on the kernels 1 and 1/(1 − z/2)
        let k0: Vec<C64> = (0..=d).map(|k| c64(if k == 0 { 1.0 } else { 0.0 }, 0.0)).collect();
        let k1: Vec<C64> = (0..=d).map(|k| c64(0.5f64.powi(k as i32), 0.0)).collect();
        let proj: C64 = k1.iter().zip(&k0).map(|(a, b)| a * b.conj()).sum();
        let mut g: Vec<C64> = k1.iter().zip(&k0).map(|(a, b)| a - proj * b).collect();
        let n = g.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        g.iter_mut().for_each(|c| *c /= n);
        for k in 0..=d {
            assert!((mb.tm_coeffs[(1, k)] - g[k]).norm() < 1e-10, "k = {k}");
        }
        let r3 = 3f64.sqrt();
        let expected = [0.0, r3 / 2.0, r3 / 4.0, r3 / 8.0];
        for (k, e) in expected.iter().enumerate() {
            assert!((mb.tm_coeffs[(1, k)] - c64(*e, 0.0)).norm() < 1e-12);
        }
        assert_eq!(mb.tm_coeffs[(0, 0)], c64(1.0, 0.0));
    }

    #[test]
    fn frame_dimensions() {
        let f = WoldFrame::build(&BlaschkeProduct::monomial(1), 1, 4, 10).unwrap();
        assert_eq!(f.dim(), 4);
        for n in 0..4 {
            let g = f.function(n, 0, 0);
            assert_eq!(g.coeffs()[(0, n)], c64(1.0, 0.0));
            assert!((g.norm() - 1.0).abs() == 0.0);
        }
        let f = WoldFrame::build(&BlaschkeProduct::monomial(2), 2, 3, 10).unwrap();
        assert_eq!(f.dim(), 12);
        let f = WoldFrame::build(&b_half(), 1, 2, 200).unwrap();
        assert_eq!(f.dim(), 4);
        let gram = f.scalar_gram();
        assert!(max_abs(&(gram - CMatrix::identity(4, 4))) < 1e-10);
    }

    #[test]
    fn frame_requires_vanishing_symbol() {
        let b = BlaschkeProduct::new(vec![c64(0.5, 0.0)]).unwrap();
        assert!(matches!(
            WoldFrame::build(&b, 1, 2, 20),
            Err(LabError::StandingAssumption(_))
        ));
    }

    #[test]
    fn to_wold_examples() {
        let f = WoldFrame::build(&BlaschkeProduct::monomial(1), 1, 4, 10).unwrap();
        let one = H2Element::constant(1, 10, 0);
        let (v, r) = to_wold(&one, &f).unwrap();
        assert_eq!(v.coords.as_slice(), &[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(r, 0.0);
        let mut z3 = vec![c64(0.0, 0.0); 4];
        z3[3] = c64(1.0, 0.0);
        let (v, _) = to_wold(&H2Element::from_scalar(&z3, 1, 10, 0), &f).unwrap();
        assert_eq!(v.coords[3], c64(1.0, 0.0));
        assert!(v.coords.iter().take(3).all(|c| c.norm() == 0.0));

        let fb = WoldFrame::build(&b_half(), 1, 3, 200).unwrap();
        let e2: Vec<C64> = fb.basis().tm_coeffs.row(1).iter().copied().collect();
        let be2 = series_mul(&b_half().taylor(200), &e2, 200);
        let (v, r) = to_wold(&H2Element::from_scalar(&be2, 1, 200, 0), &fb).unwrap();
        for i in 0..fb.dim() {
            let want = if i == fb.index(1, 1, 0) { 1.0 } else { 0.0 };
            assert!((v.coords[i] - c64(want, 0.0)).norm() < 1e-10);
        }
        assert!(r < 1e-10);
    }

    #[test]
    fn from_wold_examples() {
        let f = WoldFrame::build(&b_half(), 2, 3, 60).unwrap();
        let e = from_wold(&WoldVector::unit(&f, 0, 0, 1));
        assert_eq!(e, H2Element::constant(2, 60, 1));
        assert!(from_wold(&WoldVector::zeros(&f)).norm() == 0.0);
    }

    #[test]
    fn h2_inner_examples() {
        let one = H2Element::constant(1, 3, 0);
        let z = H2Element::from_scalar(&[c64(0.0, 0.0), c64(1.0, 0.0)], 1, 3, 0);
        assert_eq!(one.inner(&z).unwrap(), c64(0.0, 0.0));
        let e1 = H2Element::constant(2, 3, 0);
        let e2 = H2Element::constant(2, 3, 1);
        assert_eq!(e1.inner(&e2).unwrap(), c64(0.0, 0.0));
        assert!(one.inner(&e1).is_err());
        let a = c64(0.3, -1.2);
        let f = H2Element::from_scalar(&[c64(1.0, 2.0), c64(-0.5, 0.1)], 1, 3, 0);
        assert!((f.scale(a).norm() - a.norm() * f.norm()).abs() < 1e-14);
    }

    #[test]
    fn concat_examples() {
        let fp = WoldFrame::build(&BlaschkeProduct::monomial(1), 1, 2, 10).unwrap();
        let fm = WoldFrame::build(&BlaschkeProduct::monomial(1), 1, 2, 10).unwrap();
        let f = concat_frames(&fp, &fm).unwrap();
        assert_eq!(f.dim(), 4);
        let f0 = fp.with_fiber(0).unwrap();
        assert_eq!(f0.dim(), 0);
        assert!(concat_frames(&f0, &fm).unwrap().same_as(&fm));

        let a = CVector::from_vec(vec![c64(1.0, 0.0), c64(2.0, 0.0)]);
        let b = CVector::from_vec(vec![c64(3.0, 0.0), c64(4.0, 0.0)]);
        let j = join_fibers(&[&a, &CVector::zeros(2)], &[1, 1], 2, 1);
        let k = join_fibers(&[&CVector::zeros(2), &b], &[1, 1], 2, 1);
        assert_eq!(crate::linalg::inner(&j, &k), c64(0.0, 0.0));
        let both = join_fibers(&[&a, &b], &[1, 1], 2, 1);
        let parts = split_fibers(&both, &[1, 1], 2, 1);
        assert_eq!(parts[0], a);
        assert_eq!(parts[1], b);
        let other = WoldFrame::build(&BlaschkeProduct::monomial(2), 1, 2, 10).unwrap();
        assert!(concat_frames(&fp, &other).is_err());
    }

    #[test]
    fn serialization_round_trip() {
        let f = WoldFrame::build(&b_half(), 2, 2, 30).unwrap();
        let v = WoldVector::new(f.clone(), CVector::from_fn(f.dim(), |i, _| c64(i as f64, -0.5))).unwrap();
        let back: WoldVector = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
        let h = from_wold(&v);
        let back: H2Element = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        assert_eq!(back, h);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn round_trip_is_tight(seed in any::<u64>()) {
            let f = WoldFrame::build(&b_half(), 2, 3, 200).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let coords = CVector::from_fn(f.dim(), |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            let v = WoldVector::new(f.clone(), coords).unwrap();
            let h = from_wold(&v);
            let (w, res) = to_wold(&h, &f).unwrap();
            prop_assert!(cnorm(&(&w.coords - &v.coords)) <= 1e-10 * v.norm());
            prop_assert!(res <= 1e-10 * v.norm());
            prop_assert!((h.norm() - v.norm()).abs() <= 1e-10 * v.norm());
        }

        #[test]
        fn composed_series_sits_on_first_model_index(seed in any::<u64>()) {
            let b = b_half();
            let f = WoldFrame::build(&b, 2, 4, 200).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let blocks: Vec<CVector> = (0..4).map(|_| CVector::from_vec(vec![c64(rng.random_range(-1.0..1.0), 0.0)])).collect();
            let c = crate::blaschke::compose_power_series(&blocks, &b, 200).unwrap();
            let row: Vec<C64> = c.row(0).iter().copied().collect();
            let (v, _) = to_wold(&H2Element::from_scalar(&row, 2, 200, 1), &f).unwrap();
            prop_assert!(v.off_first_model_index() <= 1e-10);
            for n in 0..4 {
                prop_assert!((v.coords[f.index(n, 0, 1)] - blocks[n][0]).norm() <= 1e-10);
            }
        }
    }
}
