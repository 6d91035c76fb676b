//! Operator matrices on Wold frames: block shifts, multipliers, rank-one
//! bundles and finite-rank perturbations of the backward shift.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::blaschke::{series_mul, BlaschkeProduct};
use crate::codec::MatrixRecord;
use crate::error::{LabError, Result};
use crate::hardy::{tm_basis, to_wold, Frame, FrameDescriptor, H2Element, WoldVector};
use crate::linalg::{norm, CMatrix, CVector, C64};
use crate::linspace::{complement, Subspace};

/// Whether a matrix is the exact restriction of the full-space operator to
/// the frame, or a compression that loses mass past the last block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Exactness {
    Exact,
    TruncationLeaky,
}

impl Exactness {
    fn flip(self) -> Self {
        match self {
            Exactness::Exact => Exactness::TruncationLeaky,
            Exactness::TruncationLeaky => Exactness::Exact,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub frame_in: Frame,
    pub frame_out: Frame,
    pub mat: CMatrix,
    pub exactness: Exactness,
    /// Per-column norm of what the output frame could not represent.
    pub column_residuals: Vec<f64>,
}

impl OperatorMatrix {
    pub fn new(frame_in: &Frame, frame_out: &Frame, mat: CMatrix, exactness: Exactness) -> Result<Self> {
        if mat.shape() != (frame_out.dim(), frame_in.dim()) {
            return Err(LabError::DimensionMismatch {
                expected: frame_out.dim() * frame_in.dim(),
                actual: mat.nrows() * mat.ncols(),
            });
        }
        Ok(OperatorMatrix {
            column_residuals: vec![0.0; mat.ncols()],
            frame_in: frame_in.clone(),
            frame_out: frame_out.clone(),
            mat,
            exactness,
        })
    }

    /// Adjoint matrix. Compressions of operators whose adjoints keep the
    /// frame's span invariant (shifts and multipliers) have exact adjoints,
    /// and the other way round, so the flag flips.
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            frame_in: self.frame_out.clone(),
            frame_out: self.frame_in.clone(),
            mat: self.mat.adjoint(),
            exactness: self.exactness.flip(),
            column_residuals: vec![0.0; self.frame_out.dim()],
        }
    }

    pub fn apply(&self, v: &WoldVector) -> Result<WoldVector> {
        self.frame_in.ensure_same(&v.frame)?;
        Ok(WoldVector {
            frame: self.frame_out.clone(),
            coords: &self.mat * &v.coords,
        })
    }

    pub fn is_endomorphism(&self) -> bool {
        self.frame_in.same_as(&self.frame_out)
    }

    /// `self · other`.
    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.frame_in.ensure_same(&other.frame_out)?;
        let exactness = if self.exactness == Exactness::Exact && other.exactness == Exactness::Exact {
            Exactness::Exact
        } else {
            Exactness::TruncationLeaky
        };
        OperatorMatrix::new(&other.frame_in, &self.frame_out, &self.mat * &other.mat, exactness)
    }
}

/// Coordinates moved one block up; the top block is dropped.
pub fn forward_shift(v: &CVector, block_len: usize) -> CVector {
    let n = v.len();
    let mut out = CVector::zeros(n);
    if block_len < n {
        out.rows_mut(block_len, n - block_len).copy_from(&v.rows(0, n - block_len));
    }
    out
}

/// Coordinates moved one block down; block 0 is dropped.
pub fn backward_shift(v: &CVector, block_len: usize) -> CVector {
    let n = v.len();
    let mut out = CVector::zeros(n);
    if block_len < n {
        out.rows_mut(0, n - block_len).copy_from(&v.rows(block_len, n - block_len));
    }
    out
}

pub fn forward_shift_mat(m: &CMatrix, block_len: usize) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, m.ncols());
    if block_len < n {
        out.rows_mut(block_len, n - block_len).copy_from(&m.rows(0, n - block_len));
    }
    out
}

pub fn backward_shift_mat(m: &CMatrix, block_len: usize) -> CMatrix {
    let n = m.nrows();
    let mut out = CMatrix::zeros(n, m.ncols());
    if block_len < n {
        out.rows_mut(0, n - block_len).copy_from(&m.rows(block_len, n - block_len));
    }
    out
}

/// `T_Φ = T_B ⊗ I` on the frame. Block `N−1` leaves the truncation.
pub fn toeplitz_forward(frame: &Frame) -> OperatorMatrix {
    let d = frame.dim();
    let bl = frame.block_len();
    let mut mat = CMatrix::zeros(d, d);
    for i in 0..d.saturating_sub(bl) {
        mat[(i + bl, i)] = C64::new(1.0, 0.0);
    }
    let mut op = OperatorMatrix::new(frame, frame, mat, Exactness::TruncationLeaky).expect("square");
    for i in d.saturating_sub(bl)..d {
        op.column_residuals[i] = 1.0;
    }
    op
}

/// `T*_Φ` on the frame: the exact block left shift.
pub fn toeplitz_adjoint(frame: &Frame) -> OperatorMatrix {
    let d = frame.dim();
    let bl = frame.block_len();
    let mut mat = CMatrix::zeros(d, d);
    for i in bl..d {
        mat[(i - bl, i)] = C64::new(1.0, 0.0);
    }
    OperatorMatrix::new(frame, frame, mat, Exactness::Exact).expect("square")
}

/// Scalar symbol of a multiplication operator `C ⊗ I`.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    Blaschke(BlaschkeProduct),
    Taylor(Vec<C64>),
}

impl Symbol {
    fn series(&self, d: usize) -> Result<Vec<C64>> {
        match self {
            Symbol::Blaschke(b) => {
                if b.degree() > d {
                    return Err(LabError::SymbolTooLong {
                        degree: b.degree(),
                        taylor_degree: d,
                    });
                }
                Ok(b.taylor(d))
            }
            Symbol::Taylor(c) => {
                let degree = c.iter().rposition(|x| *x != C64::new(0.0, 0.0)).unwrap_or(0);
                if degree > d {
                    return Err(LabError::SymbolTooLong {
                        degree,
                        taylor_degree: d,
                    });
                }
                let mut s = c.clone();
                s.resize(d + 1, C64::new(0.0, 0.0));
                Ok(s)
            }
        }
    }
}

/// Compression of multiplication by `C` to the frame, built column by
/// column from Taylor products. Column residuals record what left the frame.
pub fn multiplier_matrix(symbol: &Symbol, frame: &Frame) -> Result<OperatorMatrix> {
    let d = frame.taylor_degree();
    let c = symbol.series(d)?;
    let dim = frame.dim();
    let mut mat = CMatrix::zeros(dim, dim);
    let mut residuals = vec![0.0; dim];
    for idx in 0..dim {
        let (n, j, s) = frame.position(idx);
        let g = frame.function(n, j, s);
        let (v, r) = to_wold(&g.times_scalar(&c), frame)?;
        mat.set_column(idx, &v.coords);
        residuals[idx] = r;
    }
    let mut op = OperatorMatrix::new(frame, frame, mat, Exactness::TruncationLeaky)?;
    op.column_residuals = residuals;
    Ok(op)
}

/// `x ↦ ⟨x, U⟩ V`.
pub fn rank_one(v: &WoldVector, u: &WoldVector) -> Result<OperatorMatrix> {
    v.frame.ensure_same(&u.frame)?;
    OperatorMatrix::new(&u.frame, &v.frame, &v.coords * u.coords.adjoint(), Exactness::Exact)
}

/// `T*_Φ − Σ Vᵢ ⊗ Uᵢ`; `pairs` holds `(Vᵢ, Uᵢ)`.
pub fn perturbed_backward(frame: &Frame, pairs: &[(WoldVector, WoldVector)]) -> Result<OperatorMatrix> {
    let mut op = toeplitz_adjoint(frame);
    for (v, u) in pairs {
        frame.ensure_same(&v.frame)?;
        frame.ensure_same(&u.frame)?;
        op.mat -= &v.coords * u.coords.adjoint();
    }
    Ok(op)
}

/// `‖(I − P_S) T P_S‖` for an endomorphism `T`.
pub fn invariance_residual(t: &OperatorMatrix, s: &Subspace) -> Result<f64> {
    s.frame().ensure_same(&t.frame_in)?;
    s.frame().ensure_same(&t.frame_out)?;
    Ok(s.invariance_residual_with(|q| &t.mat * q))
}

/// `V_N ∩ (B′ H² ⊗ ℂᵐ)`: the frame's span minus the projection of
/// `K_{B′} ⊗ ℂᵐ`. `B′` need not vanish at the origin.
pub fn range_of_multiplier(bp: &BlaschkeProduct, frame: &Frame) -> Result<Subspace> {
    if bp.degree() == 0 {
        return Ok(Subspace::full(frame));
    }
    let d = frame.taylor_degree();
    if bp.degree() > d {
        return Err(LabError::SymbolTooLong {
            degree: bp.degree(),
            taylor_degree: d,
        });
    }
    let mb = tm_basis(bp, d)?;
    let mut cols = Vec::with_capacity(bp.degree() * frame.m());
    for j in 0..bp.degree() {
        let row: Vec<C64> = mb.tm_coeffs.row(j).iter().copied().collect();
        for s in 0..frame.m() {
            let (v, _) = to_wold(&H2Element::from_scalar(&row, frame.m(), d, s), frame)?;
            cols.push(v.coords);
        }
    }
    let model_part = Subspace::span_coords(frame, &cols, crate::linspace::DEFAULT_RANK_TOL);
    Ok(complement(&model_part))
}

/// `‖((T P_M)ᴴ)ⁿ h‖` for `n = 1..=nmax`.
pub fn c0_decay(t: &OperatorMatrix, m: &Subspace, h: &WoldVector, nmax: usize) -> Result<Vec<f64>> {
    m.frame().ensure_same(&t.frame_in)?;
    m.frame().ensure_same(&t.frame_out)?;
    m.frame().ensure_same(&h.frame)?;
    let th = t.mat.adjoint();
    let mut x = h.coords.clone();
    let mut out = Vec::with_capacity(nmax);
    for _ in 0..nmax {
        x = m.project_coords(&(&th * &x));
        out.push(norm(&x));
    }
    Ok(out)
}

/// Multiplication `f ↦ f·φ^k` on scalar Taylor data, used for tests and
/// the model-membership computation.
pub fn times_power(series: &[C64], b: &BlaschkeProduct, k: usize, d: usize) -> Vec<C64> {
    let bt = b.taylor(d);
    let mut out = series.to_vec();
    out.resize(d + 1, C64::new(0.0, 0.0));
    for _ in 0..k {
        out = series_mul(&out, &bt, d);
    }
    out
}

#[derive(Serialize, Deserialize)]
struct OperatorRecord {
    frame_in: FrameDescriptor,
    frame_out: FrameDescriptor,
    matrix: MatrixRecord,
    exactness: Exactness,
    column_residuals: Vec<f64>,
}

impl Serialize for OperatorMatrix {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorRecord {
            frame_in: self.frame_in.descriptor(),
            frame_out: self.frame_out.descriptor(),
            matrix: MatrixRecord::from_matrix(&self.mat),
            exactness: self.exactness,
            column_residuals: self.column_residuals.clone(),
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for OperatorMatrix {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rec = OperatorRecord::deserialize(de)?;
        let fi = rec.frame_in.build().map_err(D::Error::custom)?;
        let fo = rec.frame_out.build().map_err(D::Error::custom)?;
        let mat = rec.matrix.to_matrix().map_err(D::Error::custom)?;
        let mut op = OperatorMatrix::new(&fi, &fo, mat, rec.exactness).map_err(D::Error::custom)?;
        if rec.column_residuals.len() != op.mat.ncols() {
            return Err(D::Error::custom("column residual count does not match the matrix"));
        }
        op.column_residuals = rec.column_residuals;
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hardy::WoldFrame;
    use crate::linalg::{c64, frobenius, max_abs};
    use crate::linspace::orthonormalize;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zframe(n: usize) -> Frame {
        WoldFrame::build(&BlaschkeProduct::monomial(1), 1, n, 40).unwrap()
    }

    fn random_vec(rng: &mut ChaCha8Rng, d: usize) -> CVector {
        CVector::from_fn(d, |_, _| c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
    }

    fn b2() -> BlaschkeProduct {
        BlaschkeProduct::new(vec![c64(0.0, 0.0), c64(0.5, -0.3), c64(-0.2, 0.6)]).unwrap()
    }

    #[test]
    fn forward_shift_examples() {
        let f = zframe(3);
        let t = toeplitz_forward(&f);
        let e = |n| WoldVector::unit(&f, n, 0, 0);
        assert_eq!(t.apply(&e(0)).unwrap(), e(1));
        assert_eq!(t.apply(&e(1)).unwrap(), e(2));
        assert_eq!(t.apply(&e(2)).unwrap().norm(), 0.0);
        assert_eq!(t.exactness, Exactness::TruncationLeaky);
        let ts = toeplitz_adjoint(&f);
        let tt = &ts.mat * &t.mat;
        for i in 0..2 {
            assert_eq!(tt[(i, i)], c64(1.0, 0.0));
        }
    }

    #[test]
    fn backward_shift_examples() {
        let f = zframe(3);
        let t = toeplitz_adjoint(&f);
        let e = |n| WoldVector::unit(&f, n, 0, 0);
        assert_eq!(t.apply(&e(2)).unwrap(), e(1));
        assert_eq!(t.apply(&e(1)).unwrap(), e(0));
        assert_eq!(t.apply(&e(0)).unwrap().norm(), 0.0);
        let mut p = CMatrix::identity(3, 3);
        for _ in 0..3 {
            p = &t.mat * p;
        }
        assert!(p.iter().all(|x| *x == c64(0.0, 0.0)));
        let fb = WoldFrame::build(&b2(), 2, 4, 60).unwrap();
        let fw = toeplitz_forward(&fb);
        let bw = toeplitz_adjoint(&fb);
        assert_eq!(fw.mat.adjoint(), bw.mat);
        for col in bw.mat.column_iter() {
            let nz: Vec<_> = col.iter().filter(|x| **x != c64(0.0, 0.0)).collect();
            assert!(nz.len() <= 1 && nz.iter().all(|x| **x == c64(1.0, 0.0)));
        }
        let pk = CMatrix::identity(fb.dim(), fb.dim()) - &fw.mat * &bw.mat;
        for i in 0..fb.dim() {
            let want = if i < fb.block_len() { 1.0 } else { 0.0 };
            assert_eq!(pk[(i, i)], c64(want, 0.0));
        }
    }

    #[test]
    fn fast_shifts_match_matrices() {
        let f = WoldFrame::build(&b2(), 2, 4, 60).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_vec(&mut rng, f.dim());
        assert_eq!(forward_shift(&v, f.block_len()), &toeplitz_forward(&f).mat * &v);
        assert_eq!(backward_shift(&v, f.block_len()), &toeplitz_adjoint(&f).mat * &v);
    }

    #[test]
    fn multiplier_examples() {
        let f = WoldFrame::build(&b2(), 1, 4, 200).unwrap();
        let id = multiplier_matrix(&Symbol::Taylor(vec![c64(1.0, 0.0)]), &f).unwrap();
        assert!(max_abs(&(&id.mat - CMatrix::identity(f.dim(), f.dim()))) < 1e-10);

        let mb = multiplier_matrix(&Symbol::Blaschke(b2()), &f).unwrap();
        let fw = toeplitz_forward(&f);
        let keep = f.dim() - f.block_len();
        assert!(max_abs(&(mb.mat.columns(0, keep) - fw.mat.columns(0, keep))) < 1e-10);

        let f2 = WoldFrame::build(&BlaschkeProduct::monomial(2), 1, 2, 10).unwrap();
        let mz = multiplier_matrix(&Symbol::Taylor(vec![c64(0.0, 0.0), c64(1.0, 0.0)]), &f2).unwrap();
        // coordinates: 0 ↔ 1, 1 ↔ z, 2 ↔ z², 3 ↔ z³
        for (from, to) in [(0, 1), (1, 2), (2, 3)] {
            assert_eq!(mz.mat[(to, from)], c64(1.0, 0.0));
        }
        assert!(mz.column_residuals[3] > 0.5);

        let too_long = Symbol::Taylor(vec![c64(1.0, 0.0); 12]);
        assert!(matches!(multiplier_matrix(&too_long, &f2), Err(LabError::SymbolTooLong { .. })));
    }

    #[test]
    fn rank_one_examples() {
        let f = zframe(3);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = WoldVector::new(f.clone(), random_vec(&mut rng, 3)).unwrap();
        let v = WoldVector::new(f.clone(), random_vec(&mut rng, 3)).unwrap();
        let r = rank_one(&v, &u).unwrap();
        let ru = r.apply(&u).unwrap();
        assert!(norm(&(&ru.coords - &v.coords * c64(u.norm().powi(2), 0.0))) < 1e-12);
        let mut x = random_vec(&mut rng, 3);
        x -= &u.coords * (crate::linalg::inner(&x, &u.coords) / c64(u.norm().powi(2), 0.0));
        assert!(norm(&(&r.mat * x)) < 1e-12);
        assert!((r.mat.trace() - v.inner(&u).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn perturbed_backward_examples() {
        let f = zframe(2);
        assert_eq!(perturbed_backward(&f, &[]).unwrap().mat, toeplitz_adjoint(&f).mat);
        let one = WoldVector::unit(&f, 0, 0, 0);
        let z = WoldVector::unit(&f, 1, 0, 0);
        let t = perturbed_backward(&f, &[(one.clone(), one.clone())]).unwrap();
        // hand computation: 1 ↦ 0 − ⟨1,1⟩·1 = −1, z ↦ 1 − ⟨z,1⟩·1 = 1
        assert_eq!(t.apply(&one).unwrap().coords.as_slice(), &[c64(-1.0, 0.0), c64(0.0, 0.0)]);
        assert_eq!(t.apply(&z).unwrap().coords.as_slice(), &[c64(1.0, 0.0), c64(0.0, 0.0)]);

        let f4 = zframe(4);
        let m = orthonormalize(&f4, &[WoldVector::unit(&f4, 0, 0, 0), WoldVector::unit(&f4, 1, 0, 0)], 1e-10).unwrap();
        let u = WoldVector::unit(&f4, 3, 0, 0);
        let v = WoldVector::unit(&f4, 2, 0, 0);
        let t = perturbed_backward(&f4, &[(v, u)]).unwrap();
        let plain = toeplitz_adjoint(&f4);
        assert!(frobenius(&(&t.mat * m.onb() - &plain.mat * m.onb())) == 0.0);
    }

    #[test]
    fn perturbed_backward_matches_larger_frame() {
        let b = b2();
        let f = WoldFrame::build(&b, 2, 4, 120).unwrap();
        let big = f.with_blocks(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut pairs = Vec::new();
        let mut big_pairs = Vec::new();
        for _ in 0..2 {
            let v = random_vec(&mut rng, f.dim());
            let u = random_vec(&mut rng, f.dim());
            let vb = crate::hardy::resize_blocks(&v, f.block_len(), 6);
            let ub = crate::hardy::resize_blocks(&u, f.block_len(), 6);
            pairs.push((WoldVector::new(f.clone(), v).unwrap(), WoldVector::new(f.clone(), u).unwrap()));
            big_pairs.push((WoldVector::new(big.clone(), vb).unwrap(), WoldVector::new(big.clone(), ub).unwrap()));
        }
        let small = perturbed_backward(&f, &pairs).unwrap();
        let large = perturbed_backward(&big, &big_pairs).unwrap();
        let d = f.dim();
        assert!(max_abs(&(large.mat.view((0, 0), (d, d)) - &small.mat)) <= 1e-12);
        assert!(max_abs(&large.mat.view((d, 0), (big.dim() - d, d)).into_owned()) <= 1e-12);
    }

    #[test]
    fn range_of_multiplier_examples() {
        let f = zframe(4);
        let r = range_of_multiplier(&BlaschkeProduct::monomial(1), &f).unwrap();
        assert_eq!(r.dim(), 3);
        assert!(r.contains_coords(&WoldVector::unit(&f, 1, 0, 0).coords, 1e-12));
        let half = BlaschkeProduct::new(vec![c64(0.5, 0.0)]).unwrap();
        let r = range_of_multiplier(&half, &f).unwrap();
        // (z − ½) spans a direction of V_4 ∩ (z−½)H²
        let v = CVector::from_vec(vec![c64(-0.5, 0.0), c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]);
        assert!(r.contains_coords(&v, 1e-10));
        assert_eq!(r.dim(), 3);
    }

    #[test]
    fn c0_decay_examples() {
        let f = WoldFrame::build(&b2(), 1, 4, 60).unwrap();
        let t = toeplitz_forward(&f);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let h = WoldVector::new(f.clone(), random_vec(&mut rng, f.dim())).unwrap();
        let prof = c0_decay(&t, &Subspace::zero(&f), &h, 5).unwrap();
        assert!(prof.iter().all(|x| *x == 0.0));
        let prof = c0_decay(&t, &Subspace::full(&f), &h, 4).unwrap();
        assert_eq!(prof[3], 0.0);
    }

    #[test]
    fn operator_serialization_round_trip() {
        let f = WoldFrame::build(&b2(), 1, 2, 30).unwrap();
        let t = multiplier_matrix(&Symbol::Taylor(vec![c64(0.0, 0.0), c64(1.0, 0.0)]), &f).unwrap();
        let back: OperatorMatrix = serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back.mat, t.mat);
        assert_eq!(back.exactness, t.exactness);
        assert_eq!(back.column_residuals, t.column_residuals);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn adjoint_is_involutive(seed in any::<u64>()) {
            let f = WoldFrame::build(&b2(), 1, 3, 60).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = WoldVector::new(f.clone(), random_vec(&mut rng, f.dim())).unwrap();
            let v = WoldVector::new(f.clone(), random_vec(&mut rng, f.dim())).unwrap();
            let t = perturbed_backward(&f, &[(v, u)]).unwrap();
            let tt = t.adjoint().adjoint();
            prop_assert_eq!(&tt.mat, &t.mat);
            prop_assert_eq!(tt.exactness, t.exactness);
        }

        #[test]
        fn c0_profile_is_non_increasing(seed in any::<u64>(), k in 1usize..6) {
            let f = WoldFrame::build(&b2(), 1, 4, 60).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cols: Vec<CVector> = (0..k).map(|_| random_vec(&mut rng, f.dim())).collect();
            let m = Subspace::span_coords(&f, &cols, 1e-10);
            let h = WoldVector::new(f.clone(), random_vec(&mut rng, f.dim())).unwrap();
            let prof = c0_decay(&toeplitz_forward(&f), &m, &h, 400).unwrap();
            for w in prof.windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12) + 1e-300);
            }
            prop_assert!(*prof.last().unwrap() <= 1e-10 * h.norm());
        }
    }
}
