//! Nearly invariant subspaces for the pair `(B, B′)`, with and without a
//! finite defect.

use serde::{Deserialize, Serialize};

use super::{
    decompose_with, gram_defect, SUBSPACE_ANGLE_TOL, orthogonal_difference, range_basis, remainder_block_zero, DecompositionResult,
    ModelMap, SecondPart,
};
use crate::blaschke::BlaschkeProduct;
use crate::error::{LabError, Result};
use crate::hardy::{split_fibers, Frame, WoldFrame};
use crate::linalg::{norm, spectral_norm, CMatrix};
use crate::linspace::{intersect, ominus, subspace_gap, Subspace, DEFAULT_INTERSECT_EPS};
use crate::structure::invariant::synthesis_image;
use crate::toeplitz::{backward_shift_mat, range_of_multiplier};

fn ensure_symbol(frame: &Frame, b: &BlaschkeProduct) -> Result<()> {
    if frame.blaschke() != b {
        return Err(LabError::FrameMismatch("frame is built on a different symbol".into()));
    }
    Ok(())
}

fn ensure_pair(b: &BlaschkeProduct, bp: &BlaschkeProduct) -> Result<()> {
    if !b.divides(bp) {
        return Err(LabError::hypothesis("divisibility", 1.0, 0.0));
    }
    if !b.vanishes_at_origin() {
        return Err(LabError::hypothesis("vanishing_at_origin", b.eval(crate::linalg::c64(0.0, 0.0)).norm(), 0.0));
    }
    Ok(())
}

/// `X = M ∩ B′H²` and `W = M ⊖ X`.
pub fn wandering_space(m: &Subspace, bp: &BlaschkeProduct) -> Result<(Subspace, Subspace)> {
    let range = range_of_multiplier(bp, m.frame())?;
    let x = intersect(m, &range, DEFAULT_INTERSECT_EPS)?;
    let w = ominus(m, &x, DEFAULT_INTERSECT_EPS)?;
    Ok((x, w))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WanderingBound {
    pub dim: usize,
    pub bound: usize,
}

impl WanderingBound {
    pub fn holds(&self) -> bool {
        self.dim <= self.bound
    }
}

pub fn wandering_bound_lemma39(m: &Subspace, bp: &BlaschkeProduct) -> Result<WanderingBound> {
    let (_, w) = wandering_space(m, bp)?;
    Ok(WanderingBound {
        dim: w.dim(),
        bound: bp.degree() * m.frame().m(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NearlyCheck {
    /// `‖(I − P_M) T*_B P_{M ∩ B′H²}‖`.
    pub residual: f64,
    pub nearly_invariant: bool,
}

pub fn nearly_check(m: &Subspace, b: &BlaschkeProduct, bp: &BlaschkeProduct, tol: f64) -> Result<NearlyCheck> {
    ensure_symbol(m.frame(), b)?;
    let (x, _) = wandering_space(m, bp)?;
    let residual = escape_norm(m, &x);
    Ok(NearlyCheck {
        residual,
        nearly_invariant: residual <= tol,
    })
}

fn escape(m: &Subspace, x: &Subspace) -> CMatrix {
    m.reject_mat(&backward_shift_mat(x.onb(), m.frame().block_len()))
}

fn escape_norm(m: &Subspace, x: &Subspace) -> f64 {
    if x.is_zero() {
        0.0
    } else {
        spectral_norm(&escape(m, x))
    }
}

/// Orthonormal basis columns in the frame with fiber `p` holding the `R`
/// parts of the model columns.
fn first_parts(res: &DecompositionResult, frame: &Frame) -> CMatrix {
    let mf = &res.model_frame;
    let sizes = res.map.fibers();
    let mut out = CMatrix::zeros(frame.dim(), res.model_columns.ncols());
    for (c, col) in res.model_columns.column_iter().enumerate() {
        let parts = split_fibers(&col.into_owned(), &sizes, mf.blocks(), mf.l());
        out.set_column(c, &parts[0]);
    }
    out
}

#[derive(Debug, Clone)]
pub struct NearlyDecomposition {
    pub decomposition: DecompositionResult,
    /// `N ⊆ H²(ℂᵖ)`, spanned by the `R` parts.
    pub n_sub: Subspace,
    /// Largest norm of an `H` part; the model forces it to vanish.
    pub h_part: f64,
    /// Backward invariance of `N`.
    pub n_invariance: f64,
    /// Worst of reconstruction from `G·R` alone and isometry of `R ↦ G R`.
    pub unitary_residual: f64,
    pub nearly_residual: f64,
}

impl NearlyDecomposition {
    pub fn p(&self) -> usize {
        self.decomposition.p()
    }

    pub fn g(&self) -> &CMatrix {
        self.decomposition.g()
    }
}

/// Decompose a nearly `T*_{B,B′}`-invariant `M` as `M = G N`.
pub fn nearly_decompose_thm313(m: &Subspace, b: &BlaschkeProduct, bp: &BlaschkeProduct, tol: f64) -> Result<NearlyDecomposition> {
    let frame = m.frame().clone();
    ensure_symbol(&frame, b)?;
    ensure_pair(b, bp)?;
    let (x, w) = wandering_space(m, bp)?;
    let nearly_residual = escape_norm(m, &x);
    if nearly_residual > tol {
        return Err(LabError::hypothesis("nearly_invariance", nearly_residual, tol));
    }
    let g = w.onb().clone();
    let q2 = orthogonal_difference(m.onb(), &g);
    let mut decomposition = decompose_with(m, g.clone(), &q2, SecondPart::Free, m.rank_tol())?;
    decomposition.checks.hypothesis_residual = decomposition.checks.hypothesis_residual.max(nearly_residual);
    let p = g.ncols();
    let h_part = (0..decomposition.model_columns.ncols())
        .map(|c| norm(&decomposition.parts(c).1))
        .fold(0.0, f64::max);
    let nk = decomposition.model_frame.blocks();
    let nframe = WoldFrame::build(b, p, nk, frame.taylor_degree())?;
    let r_cols = first_parts(&decomposition, &nframe);
    let n_sub = Subspace::span_columns(&nframe, &r_cols, m.rank_tol())?;
    let n_invariance = n_sub.invariance_residual_with(|q| backward_shift_mat(q, nframe.block_len()));
    let map = ModelMap {
        frame: frame.clone(),
        g,
        second: SecondPart::Defect {
            j: CMatrix::zeros(frame.dim(), 0),
        },
    };
    let image = map.image(&nframe, &r_cols);
    let target = crate::hardy::resize_blocks_mat(m.onb(), frame.block_len(), map.image_blocks(nk));
    let unitary_residual = spectral_norm(&(&image - target)).max(gram_defect(&r_cols));
    Ok(NearlyDecomposition {
        decomposition,
        n_sub,
        h_part,
        n_invariance,
        unitary_residual,
        nearly_residual,
    })
}

/// `M = G N` truncated to `frame`; `N` must be supported on the first model
/// index, and nothing may spill past the frame.
pub fn synthesize_nearly(frame: &Frame, g: &CMatrix, n_sub: &Subspace, tol: f64) -> Result<Subspace> {
    let map = ModelMap {
        frame: frame.clone(),
        g: g.clone(),
        second: SecondPart::Defect {
            j: CMatrix::zeros(frame.dim(), 0),
        },
    };
    let support = map.support_violation(n_sub.frame(), n_sub.onb());
    if support > tol {
        return Err(LabError::hypothesis("first_model_index_support", support, tol));
    }
    let image = synthesis_image(&map, n_sub, tol)?;
    Subspace::span_columns(frame, &image, n_sub.rank_tol())
}

/// `M = {G R + B Σ hᵢ Jᵢ : (R, h) ∈ K}` truncated to `frame`.
pub fn synthesize_defect(frame: &Frame, g: &CMatrix, js: &CMatrix, k: &Subspace, tol: f64) -> Result<Subspace> {
    let map = ModelMap {
        frame: frame.clone(),
        g: g.clone(),
        second: SecondPart::Defect { j: js.clone() },
    };
    let support = map.support_violation(k.frame(), k.onb());
    if support > tol {
        return Err(LabError::hypothesis("first_model_index_support", support, tol));
    }
    let image = synthesis_image(&map, k, tol)?;
    Subspace::span_columns(frame, &image, k.rank_tol())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectCase {
    /// `M ⊄ B′H²`: `F = G R + B Σ hᵢ Jᵢ`.
    WithWandering,
    /// `M ⊆ B′H²`: `F = B Σ hᵢ Jᵢ`.
    DefectOnly,
}

#[derive(Debug, Clone)]
pub struct NearlyDefectDecomposition {
    pub case: DefectCase,
    pub decomposition: DecompositionResult,
    /// Orthonormal defect vectors `Jᵢ` as columns.
    pub js: CMatrix,
    pub defect_singular_values: Vec<f64>,
    /// Block-0 part of the remainder, which `B | B′` forces to vanish.
    pub remainder_block_zero: f64,
}

impl NearlyDefectDecomposition {
    pub fn p(&self) -> usize {
        self.decomposition.p()
    }

    pub fn defect(&self) -> usize {
        self.js.ncols()
    }
}

/// Decompose a nearly `T*_{B,B′}`-invariant `M` with finite defect as
/// `M = {G R + B Σ hᵢ Jᵢ}`.
pub fn nearly_defect_decompose(
    m: &Subspace,
    b: &BlaschkeProduct,
    bp: &BlaschkeProduct,
    tol: f64,
) -> Result<NearlyDefectDecomposition> {
    let frame = m.frame().clone();
    ensure_symbol(&frame, b)?;
    ensure_pair(b, bp)?;
    if m.is_zero() {
        return Err(LabError::hypothesis("nonzero_subspace", 0.0, 0.0));
    }
    let (x, w) = wandering_space(m, bp)?;
    let (js, defect_singular_values) = if x.is_zero() {
        (CMatrix::zeros(frame.dim(), 0), Vec::new())
    } else {
        range_basis(&escape(m, &x), m.rank_tol())
    };
    let g = w.onb().clone();
    let q2 = orthogonal_difference(m.onb(), &g);
    let block_zero = remainder_block_zero(m, &q2);
    let case = if g.ncols() > 0 {
        DefectCase::WithWandering
    } else {
        DefectCase::DefectOnly
    };
    let decomposition = decompose_with(m, g, &q2, SecondPart::Defect { j: js.clone() }, m.rank_tol())?;
    if decomposition.checks.hypothesis_residual > tol {
        return Err(LabError::hypothesis("finite_defect", decomposition.checks.hypothesis_residual, tol));
    }
    Ok(NearlyDefectDecomposition {
        case,
        decomposition,
        js,
        defect_singular_values,
        remainder_block_zero: block_zero,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DefectConverseReport {
    /// `‖(I − P_{M + span J}) T*_B P_{M ∩ B′H²}‖`.
    pub residual: f64,
    /// Defect computed from the synthesized subspace.
    pub defect: usize,
    /// Number of supplied defect vectors.
    pub n: usize,
    pub m_dim: usize,
    pub pass: bool,
}

/// Check the hypotheses of the converse for `(G, K, J)` and report whether
/// the synthesized `M` is nearly invariant with defect at most `n`.
pub fn nearly_defect_converse(
    gs: &CMatrix,
    k: &Subspace,
    js: &CMatrix,
    b: &BlaschkeProduct,
    bp: &BlaschkeProduct,
    frame: &Frame,
    tol: f64,
) -> Result<DefectConverseReport> {
    ensure_symbol(frame, b)?;
    ensure_pair(b, bp)?;
    let orth = gram_defect(gs).max(gram_defect(js));
    if orth > tol {
        return Err(LabError::hypothesis("orthonormal_vectors", orth, tol));
    }
    let map = ModelMap {
        frame: frame.clone(),
        g: gs.clone(),
        second: SecondPart::Defect { j: js.clone() },
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
    let m = Subspace::span_columns(frame, &image, k.rank_tol())?;
    let (x, w) = wandering_space(&m, bp)?;
    let g_space = Subspace::span_columns(frame, gs, k.rank_tol())?;
    let wandering_gap = subspace_gap(&g_space, &w)?;
    if wandering_gap > SUBSPACE_ANGLE_TOL {
        return Err(LabError::hypothesis("wandering_basis", wandering_gap, SUBSPACE_ANGLE_TOL));
    }
    let mut cols: Vec<_> = m.onb().column_iter().map(|c| c.into_owned()).collect();
    cols.extend(js.column_iter().map(|c| c.into_owned()));
    let enlarged = Subspace::span_coords(frame, &cols, k.rank_tol());
    let residual = escape_norm(&enlarged, &x);
    let defect = if x.is_zero() {
        0
    } else {
        range_basis(&escape(&m, &x), m.rank_tol()).0.ncols()
    };
    let n = js.ncols();
    Ok(DefectConverseReport {
        residual,
        defect,
        n,
        m_dim: m.dim(),
        pass: residual <= tol && defect <= n,
    })
}
