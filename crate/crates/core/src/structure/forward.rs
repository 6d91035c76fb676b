//! Invariant subspaces of finite-rank perturbations of the forward shift.
//!
//! A subspace `M` of the frame stands for `M ⊕ (span of the blocks past the
//! frame)`. The forward shift keeps the tail inside itself, so the truncated
//! forward check on the frame is exact and `M^⊥` is the complement of `M`
//! inside the frame.

use super::{decompose_with, orthogonal_difference, projected_span, DecompositionResult, SecondPart};
use crate::error::{LabError, Result};
use crate::hardy::{resize_blocks, to_wold, Frame, WoldFrame, WoldVector};
use crate::linalg::{norm, CMatrix, CVector};
use crate::linspace::{complement, CoSubspace, Subspace};
use crate::toeplitz::{backward_shift_mat, forward_shift_mat};

#[derive(Debug, Clone)]
pub struct ForwardResult {
    /// Decomposition of `M^⊥` under the adjoint perturbation.
    pub dual: DecompositionResult,
    /// `N = K^⊥` in the model space.
    pub n_space: CoSubspace,
    /// `‖(I − P_M)(T_Φ − Σ Vᵢ ⊗ Uᵢ) P_M‖`.
    pub forward_residual: f64,
    /// Forward invariance of `N`, measured as the backward invariance of `K`.
    pub n_invariance: f64,
    /// Worst of reconstruction and isometry of `K → M^⊥`.
    pub unitary_residual: f64,
}

impl ForwardResult {
    pub fn p(&self) -> usize {
        self.dual.p()
    }

    pub fn g(&self) -> &CMatrix {
        self.dual.g()
    }
}

/// Decompose `M^⊥` for `M` invariant under `T_Φ − Σ Vᵢ ⊗ Uᵢ`.
pub fn forward_thm37(m: &Subspace, us: &[WoldVector], vs: &[WoldVector], tol: f64) -> Result<ForwardResult> {
    if us.len() != vs.len() {
        return Err(LabError::DimensionMismatch {
            expected: us.len(),
            actual: vs.len(),
        });
    }
    let frame = m.frame();
    for v in us.iter().chain(vs) {
        frame.ensure_same(&v.frame)?;
    }
    let bl = frame.block_len();
    let forward_residual = m.invariance_residual_with(|q| {
        let mut out = forward_shift_mat(q, bl);
        for (u, v) in us.iter().zip(vs) {
            out -= &v.coords * (u.coords.adjoint() * q);
        }
        out
    });
    if forward_residual > tol {
        return Err(LabError::hypothesis("forward_invariance", forward_residual, tol));
    }
    let perp = complement(m);
    let w = projected_span(&perp, vs, m.rank_tol())?;
    let g = w.onb().clone();
    let q2 = orthogonal_difference(perp.onb(), &g);
    let mut dual = decompose_with(&perp, g, &q2, SecondPart::Free, m.rank_tol())?;
    dual.checks.hypothesis_residual = dual.checks.hypothesis_residual.max(forward_residual);
    let kf = dual.model_frame.clone();
    let n_space = CoSubspace::of(&dual.k);
    let n_invariance = dual.k.invariance_residual_with(|q| backward_shift_mat(q, kf.block_len()));
    let unitary_residual = dual.checks.reconstruction.max(dual.checks.isometry);
    Ok(ForwardResult {
        dual,
        n_space,
        forward_residual,
        n_invariance,
        unitary_residual,
    })
}

/// Result of testing `F ∈ M` through the model space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelMembership {
    pub member: bool,
    /// `‖P_K t‖ / ‖t‖` for the assembled tuple `t`.
    pub distance: f64,
}

/// Columns of the multiplication operator `f ↦ f·Fᵢ` from the scalar
/// frame into `frame`.
fn multiplication_columns(fi: &WoldVector, scalar: &Frame) -> Result<CMatrix> {
    let frame = &fi.frame;
    let fe = crate::hardy::from_wold(fi);
    let mut cols = CMatrix::zeros(frame.dim(), scalar.dim());
    for idx in 0..scalar.dim() {
        let (n, j, _) = scalar.position(idx);
        let e = scalar.function(n, j, 0);
        let series: Vec<_> = e.coeffs().row(0).iter().copied().collect();
        let (v, _) = to_wold(&fe.times_scalar(&series), frame)?;
        cols.set_column(idx, &v.coords);
    }
    Ok(cols)
}

/// Decide `F ∈ M` from `(T*_{F₁}F, …, T*_{F_p}F, F) ∈ N`.
pub fn membership_via_model(f: &WoldVector, fs: &[WoldVector], n_space: &CoSubspace, tol: f64) -> Result<ModelMembership> {
    let frame = &f.frame;
    for fi in fs {
        frame.ensure_same(&fi.frame)?;
    }
    let kf = n_space.annihilator.frame().clone();
    let p = fs.len();
    if kf.m() != p + frame.m() || kf.l() != frame.l() || kf.blocks() < frame.blocks() {
        return Err(LabError::FrameMismatch("model frame does not fit the tuple".into()));
    }
    let scalar = WoldFrame::build(frame.blaschke(), 1, frame.blocks(), frame.taylor_degree())?;
    let mut first = CVector::zeros(frame.blocks() * frame.l() * p);
    for (i, fi) in fs.iter().enumerate() {
        let t = multiplication_columns(fi, &scalar)?;
        let coeffs = t.adjoint() * &f.coords;
        for (k, c) in coeffs.iter().enumerate() {
            first[k * p + i] = *c;
        }
    }
    let nk = kf.blocks();
    let l = frame.l();
    let first = resize_blocks(&first, l * p, nk);
    let second = resize_blocks(&f.coords, frame.block_len(), nk);
    let tuple = crate::hardy::join_fibers(&[&first, &second], &[p, frame.m()], nk, l);
    if norm(&tuple) == 0.0 {
        return Ok(ModelMembership {
            member: true,
            distance: 0.0,
        });
    }
    let distance = n_space.distance(&tuple);
    Ok(ModelMembership {
        member: distance <= tol,
        distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blaschke::BlaschkeProduct;
    use crate::linalg::c64;
    use crate::structure::ACCEPTANCE_TOL;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z_frame(blocks: usize) -> Frame {
        WoldFrame::build(&BlaschkeProduct::monomial(1), 1, blocks, 40).unwrap()
    }

    fn shifted_tail(f: &Frame, from: usize) -> Subspace {
        let cols: Vec<CVector> = (from..f.blocks()).map(|n| WoldVector::unit(f, n, 0, 0).coords).collect();
        Subspace::span_coords(f, &cols, 1e-10)
    }

    #[test]
    fn perturbation_vanishing_on_m_is_plain_shift_invariance() {
        let f = z_frame(6);
        let m = shifted_tail(&f, 1);
        let v = WoldVector::unit(&f, 2, 0, 0);
        let u = WoldVector::unit(&f, 0, 0, 0);
        let res = forward_thm37(&m, &[u], &[v], 1e-10).unwrap();
        assert_eq!(res.p(), 0);
        assert_eq!(res.dual.k.dim(), 1);
        assert!(res.n_invariance < 1e-14);
        assert!(res.unitary_residual < 1e-14);
    }

    #[test]
    fn not_forward_invariant_is_rejected() {
        let f = z_frame(6);
        let m = Subspace::span_coords(&f, &[WoldVector::unit(&f, 1, 0, 0).coords], 1e-10);
        let err = forward_thm37(&m, &[], &[], 1e-10).unwrap_err();
        assert!(err.is_hypothesis());
    }

    #[test]
    fn membership_hand_cases() {
        let f = z_frame(6);
        let m = shifted_tail(&f, 1);
        // T − 1 ⊗ 1 keeps z·H² and fixes nothing outside it
        let one = WoldVector::unit(&f, 0, 0, 0);
        let res = forward_thm37(&m, &[one.clone()], &[one.clone()], 1e-10).unwrap();
        assert_eq!(res.p(), 1);
        let fs: Vec<WoldVector> = res.g().column_iter().map(|c| WoldVector::new(f.clone(), c.into_owned()).unwrap()).collect();
        let z2 = WoldVector::unit(&f, 2, 0, 0);
        assert!(membership_via_model(&z2, &fs, &res.n_space, 1e-8).unwrap().member);
        assert!(!membership_via_model(&fs[0], &fs, &res.n_space, 1e-8).unwrap().member);
        let zero = WoldVector::zeros(&f);
        assert!(membership_via_model(&zero, &fs, &res.n_space, 1e-8).unwrap().member);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn membership_agrees_with_projection(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zeros = vec![c64(0.0, 0.0), c64(rng.random_range(-0.4..0.4), rng.random_range(-0.4..0.4))];
            let b = BlaschkeProduct::new(zeros).unwrap();
            let f = WoldFrame::build(&b, 2, 5, 160).unwrap();
            let bl = f.block_len();
            // M^⊥ is a backward-invariant closure of a low seed, so M is shift invariant
            let mut seed_v = CVector::zeros(f.dim());
            for i in 0..2 * bl {
                seed_v[i] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
            let perp = crate::linspace::krylov_closure_with(&f, &[&|v: &CVector| crate::toeplitz::backward_shift(v, bl)], &[seed_v], 1e-10);
            let m = complement(&perp);
            let mut vv = WoldVector::zeros(&f);
            vv.coords[0] = c64(1.0, 0.0);
            let uu = vv.clone();
            let res = forward_thm37(&m, &[uu], &[vv], 1e-9);
            let Ok(res) = res else { return Ok(()); };
            prop_assert!(res.unitary_residual < ACCEPTANCE_TOL);
            prop_assert!(res.n_invariance < ACCEPTANCE_TOL);
            let fs: Vec<WoldVector> = res.g().column_iter().map(|c| WoldVector::new(f.clone(), c.into_owned()).unwrap()).collect();
            for k in 0..6 {
                let mut probe = WoldVector::zeros(&f);
                for i in 0..f.dim() {
                    probe.coords[i] = c64(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
                if k % 2 == 0 {
                    probe.coords = m.project_coords(&probe.coords);
                }
                let by_projection = m.distance(&probe.coords) <= 1e-8 * probe.norm();
                let via = membership_via_model(&probe, &fs, &res.n_space, 1e-8).unwrap();
                prop_assert_eq!(by_projection, via.member, "distance {}", via.distance);
            }
        }
    }
}
