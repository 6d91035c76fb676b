//! Constructive decompositions and verifiers for invariant, almost invariant
//! and nearly invariant subspaces.
//!
//! Every decomposition runs the same recursion in Wold coordinates:
//! starting from an orthonormal basis of `M`, the iterate `L` is split into
//! its wandering part `G·Aₙ`, a block-0 remainder, and (for the finite-defect
//! case) a component along the defect vectors, then shifted back one block.
//! The recursion is contractive but in general not nilpotent, so it runs
//! until the iterate is negligible and the model space `K` lives in a frame
//! with as many blocks as steps taken.

mod almost;
mod forward;
mod invariant;
mod nearly;

pub use almost::{almost_decompose_thm310, almost_defect, almost_equiv_check, AlmostDecomposition, EquivalenceReport};
pub use forward::{forward_thm37, membership_via_model, ForwardResult, ModelMembership};
pub use invariant::{
    check_thm36_converse, decompose_thm32, synthesize_invariant, verify_canonical_conditions, CanonicalReport,
};
pub use nearly::{
    nearly_check, nearly_decompose_thm313, nearly_defect_converse, nearly_defect_decompose, synthesize_defect, synthesize_nearly,
    wandering_bound_lemma39, wandering_space, DefectCase, DefectConverseReport, NearlyCheck, NearlyDecomposition,
    NearlyDefectDecomposition, WanderingBound,
};

use serde::{Deserialize, Serialize};

use crate::codec::MatrixRecord;
use crate::error::{LabError, Result};
use crate::hardy::{Frame, FrameDescriptor, WoldFrame, WoldVector};
use crate::linalg::{norm, sorted_svd, spectral_norm, CMatrix};
use crate::linspace::Subspace;
use crate::toeplitz::backward_shift_mat;

/// Float-noise level used when building objects.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Algorithmic residue allowed in internal consistency checks.
pub const VERIFICATION_TOL: f64 = 1e-10;
/// Pass/fail threshold for theorem-level checks.
pub const ACCEPTANCE_TOL: f64 = 1e-8;
/// The recursion stops once every iterate is this small relative to `‖F‖`.
pub const TAIL_TOL: f64 = 1e-14;
pub const MAX_STEPS: usize = 50_000;
/// Largest principal angle at which two subspaces count as equal.
pub const SUBSPACE_ANGLE_TOL: f64 = 1e-6;

/// How the second component of the model space enters the synthesis map.
#[derive(Debug, Clone)]
pub enum SecondPart {
    /// `(R, H) ↦ G R + H` with `H ∈ H²(ℂᵐ)`.
    Free,
    /// `(R, h₁..hₙ) ↦ G R + B Σ hᵢ Jᵢ`.
    Defect { j: CMatrix },
}

impl SecondPart {
    fn fiber(&self, m: usize) -> usize {
        match self {
            SecondPart::Free => m,
            SecondPart::Defect { j } => j.ncols(),
        }
    }
}

/// The linear map from model coordinates to `H²(ℂᵐ)` coordinates.
#[derive(Debug, Clone)]
pub struct ModelMap {
    pub frame: Frame,
    pub g: CMatrix,
    pub second: SecondPart,
}

impl ModelMap {
    pub fn p(&self) -> usize {
        self.g.ncols()
    }

    pub fn fibers(&self) -> [usize; 2] {
        [self.p(), self.second.fiber(self.frame.m())]
    }

    pub fn model_frame(&self, blocks: usize) -> Result<Frame> {
        let f = &self.frame;
        WoldFrame::build(f.blaschke(), self.p() + self.second.fiber(f.m()), blocks.max(1), f.taylor_degree())
    }

    /// Blocks needed to hold the image of a model with `model_blocks` blocks.
    pub fn image_blocks(&self, model_blocks: usize) -> usize {
        model_blocks + self.frame.blocks() + 1
    }

    /// Images of model columns, in a frame with [`Self::image_blocks`]
    /// blocks. Coordinates off the first model index in the `R` and `h`
    /// parts are ignored; callers check support separately.
    pub fn image(&self, model_frame: &Frame, cols: &CMatrix) -> CMatrix {
        let f = &self.frame;
        let bl = f.block_len();
        let d = f.dim();
        let (l, m) = (f.l(), f.m());
        let p = self.p();
        let fm = model_frame.m();
        let nk = model_frame.blocks();
        let rows = self.image_blocks(nk) * bl;
        let mut out = CMatrix::zeros(rows, cols.ncols());
        let gather = |n: usize, lo: usize, hi: usize| -> CMatrix {
            CMatrix::from_fn(hi - lo, cols.ncols(), |s, c| cols[((n * l) * fm + lo + s, c)])
        };
        for n in 0..nk {
            if p > 0 {
                let a = gather(n, 0, p);
                let ga = &self.g * a;
                let mut view = out.rows_mut(n * bl, d);
                view += ga;
            }
            match &self.second {
                SecondPart::Free => {
                    for jj in 0..l {
                        for s in 0..m {
                            let src = (n * l + jj) * fm + p + s;
                            let dst = n * bl + jj * m + s;
                            for c in 0..cols.ncols() {
                                out[(dst, c)] += cols[(src, c)];
                            }
                        }
                    }
                }
                SecondPart::Defect { j } => {
                    if j.ncols() > 0 {
                        let alpha = gather(n, p, p + j.ncols());
                        let ja = j * alpha;
                        let mut view = out.rows_mut((n + 1) * bl, d);
                        view += ja;
                    }
                }
            }
        }
        out
    }

    /// Largest model coordinate that must vanish for membership in
    /// `{(R̃∘B, ·)}` (free case) or `{(R̃∘B, h̃∘B)}` (defect case).
    pub fn support_violation(&self, model_frame: &Frame, cols: &CMatrix) -> f64 {
        let p = self.p();
        let constrained = match self.second {
            SecondPart::Free => p,
            SecondPart::Defect { .. } => model_frame.m(),
        };
        let mut worst: f64 = 0.0;
        for i in 0..cols.nrows() {
            let (_, j, s) = model_frame.position(i);
            if j != 0 && s < constrained {
                for c in 0..cols.ncols() {
                    worst = worst.max(cols[(i, c)].norm());
                }
            }
        }
        worst
    }
}

/// Per-element output of a decomposition.
#[derive(Debug, Clone)]
pub struct ElementDecomposition {
    /// `Aₙ` as columns, `p × steps`.
    pub a: CMatrix,
    /// `‖Lₙ‖` for `n = 0..=steps`.
    pub iterate_norms: Vec<f64>,
    /// `‖F − synthesis(R, second part)‖`.
    pub residual: f64,
}

/// Residuals of a decomposition, all absolute for unit-norm elements.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct DecompositionChecks {
    pub reconstruction: f64,
    pub parseval_gap: f64,
    pub k_invariance: f64,
    pub support: f64,
    pub isometry: f64,
    /// `max ‖L_N‖` over elements, at the frame's block count `N`.
    pub tail_at_frame_blocks: f64,
    /// `max ‖L‖` at the step where the recursion stopped.
    pub terminal_tail: f64,
    pub steps: usize,
    /// How far the shifted iterate leaves `M` (the invariance hypothesis).
    pub hypothesis_residual: f64,
}

#[derive(Debug, Clone)]
pub struct DecompositionResult {
    pub map: ModelMap,
    pub m_space: Subspace,
    pub model_frame: Frame,
    /// Model coordinates of each basis element of `M`, one column each.
    pub model_columns: CMatrix,
    pub k: Subspace,
    pub elements: Vec<ElementDecomposition>,
    pub checks: DecompositionChecks,
}

impl DecompositionResult {
    pub fn p(&self) -> usize {
        self.map.p()
    }

    pub fn g(&self) -> &CMatrix {
        &self.map.g
    }

    /// Coordinates of the first (`R`) and second model parts of element `i`.
    pub fn parts(&self, i: usize) -> (crate::linalg::CVector, crate::linalg::CVector) {
        let col = self.model_columns.column(i).into_owned();
        let mut v = crate::hardy::split_fibers(&col, &self.map.fibers(), self.model_frame.blocks(), self.model_frame.l());
        let second = v.pop().expect("two parts");
        (v.pop().expect("two parts"), second)
    }

    pub fn record(&self, seed: Option<u64>) -> DecompositionRecord {
        DecompositionRecord {
            seed,
            frame: self.map.frame.descriptor(),
            p: self.p(),
            g: MatrixRecord::from_matrix(&self.map.g),
            defect_vectors: match &self.map.second {
                SecondPart::Free => None,
                SecondPart::Defect { j } => Some(MatrixRecord::from_matrix(j)),
            },
            model_frame: self.model_frame.descriptor(),
            k: self.k.clone(),
            elements: self
                .elements
                .iter()
                .map(|e| ElementRecord {
                    a: MatrixRecord::from_matrix(&e.a),
                    iterate_norms: e.iterate_norms.clone(),
                    residual: e.residual,
                })
                .collect(),
            checks: self.checks,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementRecord {
    pub a: MatrixRecord,
    pub iterate_norms: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub seed: Option<u64>,
    pub frame: FrameDescriptor,
    pub p: usize,
    pub g: MatrixRecord,
    pub defect_vectors: Option<MatrixRecord>,
    pub model_frame: FrameDescriptor,
    pub k: Subspace,
    pub elements: Vec<ElementRecord>,
    pub checks: DecompositionChecks,
}

/// Minimal subspace absorbing what an operator pushes out of `M`.
#[derive(Debug, Clone)]
pub struct DefectReport {
    pub defect: usize,
    /// Orthonormal columns spanning the defect space.
    pub basis: CMatrix,
    /// Singular values of the escaping part, largest first; the first
    /// `defect` of them exceed the rank threshold.
    pub singular_values: Vec<f64>,
    pub residual: f64,
}

impl DefectReport {
    /// Residual after dropping basis vector `i`; equals its singular value.
    pub fn residual_without(&self, i: usize) -> f64 {
        self.singular_values[i]
    }

    pub fn record(&self, frame: &Frame, seed: Option<u64>) -> DefectRecord {
        DefectRecord {
            seed,
            frame: frame.descriptor(),
            defect: self.defect,
            basis: MatrixRecord::from_matrix(&self.basis),
            singular_values: self.singular_values.clone(),
            residual: self.residual,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DefectRecord {
    pub seed: Option<u64>,
    pub frame: FrameDescriptor,
    pub defect: usize,
    pub basis: MatrixRecord,
    pub singular_values: Vec<f64>,
    pub residual: f64,
}

/// Orthonormal basis of the range of `e` from its left singular vectors
/// above `rank_tol`, with the full singular value list.
pub(crate) fn range_basis(e: &CMatrix, rank_tol: f64) -> (CMatrix, Vec<f64>) {
    let (sv, u, _) = sorted_svd(e);
    let k = sv.iter().take_while(|&&s| s > rank_tol).count();
    (u.columns(0, k).into_owned(), sv)
}

/// Orthonormal basis of `P_S span(vs)`. A projection at round-off level
/// relative to its source vector is treated as zero.
pub(crate) fn projected_span(space: &Subspace, vs: &[WoldVector], rank_tol: f64) -> Result<Subspace> {
    let frame = space.frame();
    let mut cols = Vec::with_capacity(vs.len());
    for v in vs {
        frame.ensure_same(&v.frame)?;
        let pv = space.project_coords(&v.coords);
        if norm(&pv) > rank_tol * v.norm() {
            cols.push(pv);
        }
    }
    Ok(Subspace::span_coords(frame, &cols, rank_tol))
}

/// Orthonormal basis of `span(Q) ⊖ span(G)` for `span(G) ⊆ span(Q)`.
pub(crate) fn orthogonal_difference(q: &CMatrix, g: &CMatrix) -> CMatrix {
    let z = q - g * (g.adjoint() * q);
    let (sv, u, _) = sorted_svd(&z);
    let k = sv.iter().take_while(|&&s| s > 0.5).count();
    u.columns(0, k).into_owned()
}

pub(crate) fn gram_defect(x: &CMatrix) -> f64 {
    if x.ncols() == 0 {
        return 0.0;
    }
    spectral_norm(&(x.adjoint() * x - CMatrix::identity(x.ncols(), x.ncols())))
}

pub(crate) fn column_norms(m: &CMatrix) -> Vec<f64> {
    m.column_iter().map(|c| norm(&c.into_owned())).collect()
}

struct Recursion {
    a: Vec<CMatrix>,
    h0: Vec<CMatrix>,
    alpha: Vec<CMatrix>,
    norms: Vec<Vec<f64>>,
    steps: usize,
    leak: f64,
}

/// `L₀ = F`, `Aₙ = Gᴴ Lₙ`, `x = P₂ Lₙ`, `hₙ = block₀(x)`, `y = S* x`,
/// `αₙ₊₁ = Jᴴ y`, `Lₙ₊₁ = y − J αₙ₊₁`, run on all basis columns of `M` at
/// once in `M`-coordinates. Runs at least `min_steps` steps and then until
/// every iterate is below [`TAIL_TOL`].
fn run_recursion(frame: &Frame, qm: &CMatrix, g: &CMatrix, q2: &CMatrix, j: &CMatrix, min_steps: usize) -> Result<Recursion> {
    let r = qm.ncols();
    let bl = frame.block_len();
    let x = q2 * (q2.adjoint() * qm);
    let h0 = x.rows(0, bl).into_owned();
    let y = backward_shift_mat(&x, bl);
    let alpha = j.adjoint() * &y;
    let ynext = &y - j * &alpha;
    let t = qm.adjoint() * &ynext;
    let leak = spectral_norm(&(&ynext - qm * &t));
    let ga = g.adjoint() * qm;

    let mut c = CMatrix::identity(r, r);
    let mut out = Recursion {
        a: Vec::new(),
        h0: Vec::new(),
        alpha: Vec::new(),
        norms: vec![Vec::new(); r],
        steps: 0,
        leak,
    };
    loop {
        let cn = column_norms(&c);
        for (list, v) in out.norms.iter_mut().zip(&cn) {
            list.push(*v);
        }
        let worst = cn.iter().cloned().fold(0.0, f64::max);
        if out.steps >= min_steps && worst <= TAIL_TOL {
            break;
        }
        if out.steps >= MAX_STEPS {
            return Err(LabError::NonConvergence {
                steps: MAX_STEPS,
                target: TAIL_TOL,
                last: worst,
            });
        }
        out.a.push(&ga * &c);
        out.h0.push(&h0 * &c);
        out.alpha.push(&alpha * &c);
        c = &t * &c;
        out.steps += 1;
    }
    Ok(out)
}

/// Run the recursion for `M` with wandering basis `g` and remainder
/// projection `q2`, then assemble and check the model.
pub(crate) fn decompose_with(
    m_space: &Subspace,
    g: CMatrix,
    q2: &CMatrix,
    second: SecondPart,
    rank_tol: f64,
) -> Result<DecompositionResult> {
    let frame = m_space.frame().clone();
    let qm = m_space.onb();
    let empty = CMatrix::zeros(frame.dim(), 0);
    let j = match &second {
        SecondPart::Free => &empty,
        SecondPart::Defect { j } => j,
    };
    let rec = run_recursion(&frame, qm, &g, q2, j, frame.blocks())?;
    let map = ModelMap { frame: frame.clone(), g, second };
    let model_frame = map.model_frame(rec.steps)?;
    let p = map.p();
    let (l, m) = (frame.l(), frame.m());
    let fm = model_frame.m();
    let r = qm.ncols();

    let mut x = CMatrix::zeros(model_frame.dim(), r);
    for n in 0..rec.steps {
        for s in 0..p {
            for c in 0..r {
                x[((n * l) * fm + s, c)] = rec.a[n][(s, c)];
            }
        }
        match &map.second {
            SecondPart::Free => {
                for jj in 0..l {
                    for s in 0..m {
                        for c in 0..r {
                            x[((n * l + jj) * fm + p + s, c)] = rec.h0[n][(jj * m + s, c)];
                        }
                    }
                }
            }
            SecondPart::Defect { j } => {
                for i in 0..j.ncols() {
                    for c in 0..r {
                        x[((n * l) * fm + p + i, c)] = rec.alpha[n][(i, c)];
                    }
                }
            }
        }
    }

    let image = map.image(&model_frame, &x);
    let target = crate::hardy::resize_blocks_mat(qm, frame.block_len(), map.image_blocks(rec.steps));
    let diff = &image - &target;
    let residuals = column_norms(&diff);

    let k = Subspace::span_columns(&model_frame, &x, rank_tol)?;
    let k_invariance = k.invariance_residual_with(|q| backward_shift_mat(q, model_frame.block_len()));
    let support = map.support_violation(&model_frame, &x);
    let isometry = gram_defect(&x);
    let parseval_gap = column_norms(&x)
        .iter()
        .map(|nx| (1.0 - nx * nx).abs())
        .fold(0.0, f64::max);
    let n_blocks = frame.blocks();
    let tail_at_frame_blocks = rec.norms.iter().map(|v| v[n_blocks]).fold(0.0, f64::max);
    let terminal_tail = rec.norms.iter().map(|v| *v.last().unwrap()).fold(0.0, f64::max);

    let elements = (0..r)
        .map(|c| ElementDecomposition {
            a: CMatrix::from_fn(p, rec.steps, |s, n| rec.a[n][(s, c)]),
            iterate_norms: rec.norms[c].clone(),
            residual: residuals[c],
        })
        .collect();

    let checks = DecompositionChecks {
        reconstruction: residuals.iter().cloned().fold(0.0, f64::max),
        parseval_gap,
        k_invariance,
        support,
        isometry,
        tail_at_frame_blocks,
        terminal_tail,
        steps: rec.steps,
        hypothesis_residual: rec.leak,
    };
    Ok(DecompositionResult {
        map,
        m_space: m_space.clone(),
        model_frame,
        model_columns: x,
        k,
        elements,
        checks,
    })
}

/// Largest block-0 remainder `‖P_{K_B} P₂ Lₙ‖` over the recursion; zero
/// when the remainder lies in `B H²`.
pub(crate) fn remainder_block_zero(m_space: &Subspace, q2: &CMatrix) -> f64 {
    let bl = m_space.frame().block_len();
    let x = q2 * (q2.adjoint() * m_space.onb());
    spectral_norm(&x.rows(0, bl).into_owned())
}
