//! Almost invariant subspaces: defect spaces and the link to finite-rank
//! perturbations.

use super::{range_basis, DecompositionResult, DefectReport};
use crate::error::Result;
use crate::hardy::WoldVector;
use crate::linalg::{spectral_norm, CMatrix};
use crate::linspace::Subspace;
use crate::structure::invariant::{decompose_thm32, synthesize_invariant};
use crate::toeplitz::{forward_shift, toeplitz_adjoint, OperatorMatrix};

/// Minimal `F ⟂ M` with `T M ⊆ M ⊕ F`: the range of `(I − P_M) T P_M`.
pub fn almost_defect(t: &OperatorMatrix, m: &Subspace, rank_tol: f64) -> Result<DefectReport> {
    m.frame().ensure_same(&t.frame_in)?;
    m.frame().ensure_same(&t.frame_out)?;
    let escape = m.reject_mat(&(&t.mat * m.onb()));
    let (basis, singular_values) = range_basis(&escape, rank_tol);
    let residual = if escape.ncols() == 0 {
        0.0
    } else {
        spectral_norm(&(&escape - &basis * (basis.adjoint() * &escape)))
    };
    Ok(DefectReport {
        defect: basis.ncols(),
        basis,
        singular_values,
        residual,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub defect: usize,
    /// Invariance residual of `T − Σ vᵢ ⊗ uᵢ` for the supplied pairs.
    pub given_pairs_residual: Option<f64>,
    /// If the supplied pairs leave `M` invariant, the defect is at most `k`.
    pub pairs_bound_defect: bool,
    /// Invariance residual of `T − Σ fᵢ ⊗ T* fᵢ` over the defect basis.
    pub defect_pairs_residual: f64,
    /// Invariance residual of `T` itself.
    pub plain_residual: f64,
    /// `defect = 0` exactly when `T` leaves `M` invariant.
    pub zero_defect_iff_invariant: bool,
    pub pass: bool,
}

/// Check both directions of the correspondence between almost invariance
/// with defect at most `k` and invariance under a rank-`k` perturbation.
/// `pairs` holds `(vᵢ, uᵢ)` for `T − Σ vᵢ ⊗ uᵢ`.
pub fn almost_equiv_check(
    t: &OperatorMatrix,
    m: &Subspace,
    pairs: &[(WoldVector, WoldVector)],
    k: usize,
    tol: f64,
) -> Result<EquivalenceReport> {
    let rep = almost_defect(t, m, m.rank_tol())?;
    let qm = m.onb();
    let tq = &t.mat * qm;
    let plain_residual = if m.is_zero() { 0.0 } else { spectral_norm(&m.reject_mat(&tq)) };
    let given_pairs_residual = if pairs.is_empty() {
        None
    } else {
        let mut op = tq.clone();
        for (v, u) in pairs {
            m.frame().ensure_same(&v.frame)?;
            m.frame().ensure_same(&u.frame)?;
            op -= &v.coords * (u.coords.adjoint() * qm);
        }
        Some(if m.is_zero() { 0.0 } else { spectral_norm(&m.reject_mat(&op)) })
    };
    let pairs_bound_defect = match given_pairs_residual {
        Some(r) if r <= tol => rep.defect <= k,
        Some(_) => true,
        None => plain_residual > tol || rep.defect == 0,
    };
    let f = &rep.basis;
    let corrected: CMatrix = &tq - f * (f.adjoint() * &tq);
    let defect_pairs_residual = if m.is_zero() { 0.0 } else { spectral_norm(&m.reject_mat(&corrected)) };
    let zero_defect_iff_invariant = (rep.defect == 0) == (plain_residual <= tol);
    Ok(EquivalenceReport {
        defect: rep.defect,
        given_pairs_residual,
        pairs_bound_defect,
        defect_pairs_residual,
        plain_residual,
        zero_defect_iff_invariant,
        pass: pairs_bound_defect && defect_pairs_residual <= tol && zero_defect_iff_invariant,
    })
}

#[derive(Debug, Clone)]
pub struct AlmostDecomposition {
    pub defect: DefectReport,
    pub decomposition: DecompositionResult,
    /// Defect of the subspace rebuilt from `(G, K)`; at most `p`.
    pub converse_defect: usize,
}

/// Decompose an almost backward-invariant `M` through the perturbation
/// `T*_Φ − Σ Fᵢ ⊗ T_Φ Fᵢ` over its defect basis.
pub fn almost_decompose_thm310(m: &Subspace, tol: f64) -> Result<AlmostDecomposition> {
    let frame = m.frame();
    let t = toeplitz_adjoint(frame);
    let defect = almost_defect(&t, m, m.rank_tol())?;
    let bl = frame.block_len();
    let vs: Vec<WoldVector> = defect
        .basis
        .column_iter()
        .map(|c| WoldVector {
            frame: frame.clone(),
            coords: c.into_owned(),
        })
        .collect();
    let us: Vec<WoldVector> = vs
        .iter()
        .map(|v| WoldVector {
            frame: frame.clone(),
            coords: forward_shift(&v.coords, bl),
        })
        .collect();
    let decomposition = decompose_thm32(m, &us, &vs, tol)?;
    let gs: Vec<WoldVector> = decomposition
        .g()
        .column_iter()
        .map(|c| WoldVector {
            frame: frame.clone(),
            coords: c.into_owned(),
        })
        .collect();
    let rebuilt = synthesize_invariant(frame, &gs, &decomposition.k, tol)?;
    let converse_defect = almost_defect(&t, &rebuilt, m.rank_tol())?.defect;
    Ok(AlmostDecomposition {
        defect,
        decomposition,
        converse_defect,
    })
}
