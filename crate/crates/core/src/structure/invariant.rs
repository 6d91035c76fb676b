//! Invariant subspaces of finite-rank perturbations of the backward shift.

use serde::{Deserialize, Serialize};

use super::{decompose_with, gram_defect, orthogonal_difference, projected_span, DecompositionResult, ModelMap, SecondPart};
use crate::error::{LabError, Result};
use crate::hardy::{Frame, WoldVector};
use crate::linalg::{norm, spectral_norm, CMatrix, C64};
use crate::linspace::Subspace;
use crate::toeplitz::{backward_shift_mat, invariance_residual, perturbed_backward};

fn check_pairs(m: &Subspace, us: &[WoldVector], vs: &[WoldVector]) -> Result<()> {
    if us.len() != vs.len() {
        return Err(LabError::DimensionMismatch {
            expected: us.len(),
            actual: vs.len(),
        });
    }
    for v in us.iter().chain(vs) {
        m.frame().ensure_same(&v.frame)?;
    }
    Ok(())
}

/// Decompose `M`, invariant under `T*_Φ − Σ Vᵢ ⊗ Uᵢ`, as `M = [G, I]K`.
pub fn decompose_thm32(m: &Subspace, us: &[WoldVector], vs: &[WoldVector], tol: f64) -> Result<DecompositionResult> {
    check_pairs(m, us, vs)?;
    let frame = m.frame();
    let pairs: Vec<(WoldVector, WoldVector)> = vs.iter().cloned().zip(us.iter().cloned()).collect();
    let t = perturbed_backward(frame, &pairs)?;
    let residual = invariance_residual(&t, m)?;
    if residual > tol {
        return Err(LabError::hypothesis("perturbed_invariance", residual, tol));
    }
    let w = projected_span(m, us, m.rank_tol())?;
    let g = w.onb().clone();
    let q2 = orthogonal_difference(m.onb(), &g);
    let mut res = decompose_with(m, g, &q2, SecondPart::Free, m.rank_tol())?;
    res.checks.hypothesis_residual = res.checks.hypothesis_residual.max(residual);
    Ok(res)
}

/// Outcome of re-deriving the canonical conditions from scratch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalReport {
    /// `max ‖P_W Lₙ − G Aₙ‖`.
    pub wandering_part: f64,
    /// `max ‖P_{K_Φ} P_{M⊖W} Lₙ − n-th second-part block‖`.
    pub remainder_part: f64,
    pub parseval_gap: f64,
    /// `wandering_part` after moving one `A₀` entry by `1e-3`.
    pub perturbed_wandering_part: f64,
    /// The perturbation broke the wandering condition, so `A` is pinned.
    pub pinned: bool,
    pub pass: bool,
}

/// Replay the recursion on the full coordinate space of `M` and compare
/// every step with the stored decomposition.
pub fn verify_canonical_conditions(res: &DecompositionResult, m: &Subspace, tol: f64) -> CanonicalReport {
    let frame = m.frame();
    let bl = frame.block_len();
    let (l, mm) = (frame.l(), frame.m());
    let g = res.g();
    let p = g.ncols();
    let qm = m.onb();
    let p_rest = qm * qm.adjoint() - g * g.adjoint();
    let fm = res.model_frame.m();
    let x = &res.model_columns;

    let mut wandering: f64 = 0.0;
    let mut wandering_bumped: f64 = 0.0;
    let mut remainder: f64 = 0.0;
    let mut lcur = qm.clone();
    for n in 0..res.checks.steps {
        let pw = g * (g.adjoint() * &lcur);
        let a = CMatrix::from_fn(p, qm.ncols(), |s, c| x[((n * l) * fm + s, c)]);
        wandering = wandering.max(spectral_norm(&(&pw - g * &a)));
        if n == 0 && p > 0 && qm.ncols() > 0 {
            let mut bumped = a.clone();
            bumped[(0, 0)] += C64::new(1e-3, 0.0);
            wandering_bumped = spectral_norm(&(&pw - g * &bumped));
        }
        let rest = &p_rest * &lcur;
        let shifted = backward_shift_mat(&rest, bl);
        match &res.map.second {
            SecondPart::Free => {
                let stored = CMatrix::from_fn(bl, qm.ncols(), |r, c| {
                    let (jj, s) = (r / mm, r % mm);
                    x[((n * l + jj) * fm + p + s, c)]
                });
                remainder = remainder.max(spectral_norm(&(rest.rows(0, bl).into_owned() - stored)));
                lcur = shifted;
            }
            SecondPart::Defect { j } => {
                let alpha = j.adjoint() * &shifted;
                let stored = CMatrix::from_fn(j.ncols(), qm.ncols(), |i, c| x[((n * l) * fm + p + i, c)]);
                remainder = remainder.max(spectral_norm(&(&alpha - stored)));
                remainder = remainder.max(spectral_norm(&rest.rows(0, bl).into_owned()));
                lcur = &shifted - j * alpha;
            }
        }
    }
    let parseval_gap = (0..qm.ncols())
        .map(|c| {
            let nf = norm(&qm.column(c).into_owned());
            let nx = norm(&x.column(c).into_owned());
            (nf * nf - nx * nx).abs()
        })
        .fold(0.0, f64::max);
    let pinned = p == 0 || qm.ncols() == 0 || wandering_bumped > tol;
    CanonicalReport {
        wandering_part: wandering,
        remainder_part: remainder,
        parseval_gap,
        perturbed_wandering_part: wandering_bumped,
        pinned,
        pass: wandering <= tol && remainder <= tol && parseval_gap <= tol && pinned,
    }
}

fn g_matrix(frame: &Frame, gs: &[WoldVector]) -> Result<CMatrix> {
    let mut g = CMatrix::zeros(frame.dim(), gs.len());
    for (i, v) in gs.iter().enumerate() {
        frame.ensure_same(&v.frame)?;
        g.set_column(i, &v.coords);
    }
    Ok(g)
}

/// `M = [G, I]K` truncated to `frame`, after checking that nothing of the
/// image falls past the frame's last block.
pub fn synthesize_invariant(frame: &Frame, gs: &[WoldVector], k: &Subspace, tol: f64) -> Result<Subspace> {
    let map = ModelMap {
        frame: frame.clone(),
        g: g_matrix(frame, gs)?,
        second: SecondPart::Free,
    };
    let image = synthesis_image(&map, k, tol)?;
    Subspace::span_columns(frame, &image, k.rank_tol())
}

/// Image of `K`'s basis under the model map, with the checks every converse
/// needs: the layout matches, and the image fits inside the frame.
pub(crate) fn synthesis_image(map: &ModelMap, k: &Subspace, tol: f64) -> Result<CMatrix> {
    let kf = k.frame();
    let [p, q] = map.fibers();
    if kf.m() != p + q || kf.l() != map.frame.l() || kf.blaschke() != map.frame.blaschke() {
        return Err(LabError::FrameMismatch(format!(
            "model frame fiber {} does not match {} + {}",
            kf.m(),
            p,
            q
        )));
    }
    let image = map.image(kf, k.onb());
    let d = map.frame.dim();
    let leak = if image.nrows() > d {
        spectral_norm(&image.rows(d, image.nrows() - d).into_owned())
    } else {
        0.0
    };
    if leak > tol {
        return Err(LabError::hypothesis("unitary", leak, tol));
    }
    Ok(image.rows(0, d).into_owned())
}

/// Check the hypotheses of the converse for `(G, K)` and `M`, then return
/// `‖(I − P_M)(T*_Φ − Σ T*_Φ Gᵢ ⊗ Gᵢ) P_M‖`.
pub fn check_thm36_converse(gs: &[WoldVector], k: &Subspace, m: &Subspace, tol: f64) -> Result<f64> {
    let frame = m.frame();
    let g = g_matrix(frame, gs)?;
    let orth = gram_defect(&g);
    if orth > tol {
        return Err(LabError::hypothesis("orthonormal_g", orth, tol));
    }
    let g_out = if g.ncols() > 0 { spectral_norm(&m.reject_mat(&g)) } else { 0.0 };
    if g_out > tol {
        return Err(LabError::hypothesis("g_in_m", g_out, tol));
    }
    let map = ModelMap {
        frame: frame.clone(),
        g: g.clone(),
        second: SecondPart::Free,
    };
    let kf = k.frame().clone();
    let support = map.support_violation(&kf, k.onb());
    if support > tol {
        return Err(LabError::hypothesis("first_model_index_support", support, tol));
    }
    let kinv = k.invariance_residual_with(|q| backward_shift_mat(q, kf.block_len()));
    if kinv > tol {
        return Err(LabError::hypothesis("k_invariance", kinv, tol));
    }
    let image = synthesis_image(&map, k, tol)?;
    let iso = gram_defect(&image);
    if iso > tol {
        return Err(LabError::hypothesis("unitary", iso, tol));
    }
    let outside = if image.ncols() > 0 { spectral_norm(&m.reject_mat(&image)) } else { 0.0 };
    if outside > tol || image.ncols() != m.dim() {
        return Err(LabError::hypothesis("unitary", outside.max(if image.ncols() != m.dim() { 1.0 } else { 0.0 }), tol));
    }
    let bl = frame.block_len();
    let qm = m.onb();
    let sg = backward_shift_mat(&g, bl);
    let op = backward_shift_mat(qm, bl) - &sg * (g.adjoint() * qm);
    Ok(if m.is_zero() { 0.0 } else { spectral_norm(&m.reject_mat(&op)) })
}
