//! Subspaces of a Wold frame held as orthonormal column bases.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::codec::MatrixRecord;
use crate::error::{LabError, Result};
use crate::hardy::{Frame, FrameDescriptor, WoldVector};
use crate::linalg::{norm, orthonormal_columns, sorted_svd, spectral_norm, CMatrix, CVector, C64};

pub const DEFAULT_RANK_TOL: f64 = 1e-10;
pub const DEFAULT_INTERSECT_EPS: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Subspace {
    frame: Frame,
    onb: CMatrix,
    rank_tol: f64,
}

impl Subspace {
    pub fn zero(frame: &Frame) -> Self {
        Subspace {
            frame: frame.clone(),
            onb: CMatrix::zeros(frame.dim(), 0),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    pub fn full(frame: &Frame) -> Self {
        Subspace {
            frame: frame.clone(),
            onb: CMatrix::identity(frame.dim(), frame.dim()),
            rank_tol: DEFAULT_RANK_TOL,
        }
    }

    /// Wrap columns that are already orthonormal.
    pub fn from_onb(frame: &Frame, onb: CMatrix, rank_tol: f64) -> Result<Self> {
        if onb.nrows() != frame.dim() {
            return Err(LabError::DimensionMismatch {
                expected: frame.dim(),
                actual: onb.nrows(),
            });
        }
        Ok(Subspace {
            frame: frame.clone(),
            onb,
            rank_tol,
        })
    }

    /// Orthonormal basis of the span of the columns of `m`.
    pub fn span_columns(frame: &Frame, m: &CMatrix, rank_tol: f64) -> Result<Self> {
        if m.nrows() != frame.dim() {
            return Err(LabError::DimensionMismatch {
                expected: frame.dim(),
                actual: m.nrows(),
            });
        }
        let cols: Vec<CVector> = m.column_iter().map(|c| c.into_owned()).collect();
        Ok(Self::span_coords(frame, &cols, rank_tol))
    }

    pub fn span_coords(frame: &Frame, cols: &[CVector], rank_tol: f64) -> Self {
        Subspace {
            frame: frame.clone(),
            onb: orthonormal_columns(cols, frame.dim(), rank_tol),
            rank_tol,
        }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn onb(&self) -> &CMatrix {
        &self.onb
    }

    pub fn rank_tol(&self) -> f64 {
        self.rank_tol
    }

    pub fn dim(&self) -> usize {
        self.onb.ncols()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis_vectors(&self) -> Vec<WoldVector> {
        self.onb
            .column_iter()
            .map(|c| WoldVector {
                frame: self.frame.clone(),
                coords: c.into_owned(),
            })
            .collect()
    }

    pub fn project_coords(&self, v: &CVector) -> CVector {
        &self.onb * (self.onb.adjoint() * v)
    }

    pub fn project_mat(&self, m: &CMatrix) -> CMatrix {
        &self.onb * (self.onb.adjoint() * m)
    }

    /// `(I − P) m`.
    pub fn reject_mat(&self, m: &CMatrix) -> CMatrix {
        m - self.project_mat(m)
    }

    pub fn projector(&self) -> CMatrix {
        &self.onb * self.onb.adjoint()
    }

    /// Relative distance of `v` from the subspace.
    pub fn distance(&self, v: &CVector) -> f64 {
        let nv = norm(v);
        if nv == 0.0 {
            return 0.0;
        }
        norm(&(v - self.project_coords(v))) / nv
    }

    pub fn contains_coords(&self, v: &CVector, tol: f64) -> bool {
        self.distance(v) <= tol
    }

    fn ensure_frame(&self, frame: &Frame) -> Result<()> {
        self.frame.ensure_same(frame)
    }

    /// Spectral norm of `(I − P)·op(Q)` where `op` acts column-wise.
    pub fn invariance_residual_with(&self, op: impl Fn(&CMatrix) -> CMatrix) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        spectral_norm(&self.reject_mat(&op(&self.onb)))
    }

    /// The same subspace seen in a frame with a different block count
    /// (zero-padded or truncated).
    pub fn resized(&self, frame: &Frame) -> Result<Self> {
        if frame.block_len() != self.frame.block_len() {
            return Err(LabError::FrameMismatch("block length differs".into()));
        }
        let onb = crate::hardy::resize_blocks_mat(&self.onb, frame.block_len(), frame.blocks());
        Ok(Subspace {
            frame: frame.clone(),
            onb,
            rank_tol: self.rank_tol,
        })
    }
}

fn common_frame(vectors: &[WoldVector]) -> Result<Option<Frame>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    for v in &vectors[1..] {
        first.frame.ensure_same(&v.frame)?;
    }
    Ok(Some(first.frame.clone()))
}

/// Orthonormal basis of the span, visiting vectors in order. An empty list
/// needs `frame` to know where the zero subspace lives.
pub fn orthonormalize(frame: &Frame, vectors: &[WoldVector], rank_tol: f64) -> Result<Subspace> {
    if let Some(f) = common_frame(vectors)? {
        frame.ensure_same(&f)?;
    }
    let cols: Vec<CVector> = vectors.iter().map(|v| v.coords.clone()).collect();
    Ok(Subspace::span_coords(frame, &cols, rank_tol))
}

pub fn project(s: &Subspace, v: &WoldVector) -> Result<WoldVector> {
    s.ensure_frame(&v.frame)?;
    Ok(WoldVector {
        frame: v.frame.clone(),
        coords: s.project_coords(&v.coords),
    })
}

/// Frame orthocomplement, by pivoted Gram–Schmidt on the standard basis.
pub fn complement(s: &Subspace) -> Subspace {
    let d = s.frame.dim();
    let need = d - s.dim();
    let mut basis: Vec<CVector> = s.onb.column_iter().map(|c| c.into_owned()).collect();
    // squared residual of each standard basis vector against the current basis
    let mut resid: Vec<f64> = (0..d)
        .map(|i| 1.0 - s.onb.row(i).iter().map(|x| x.norm_sqr()).sum::<f64>())
        .collect();
    let mut out = Vec::with_capacity(need);
    for _ in 0..need {
        let (i, _) = resid
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, &r)| if r > acc.1 { (i, r) } else { acc });
        let mut v = CVector::zeros(d);
        v[i] = C64::new(1.0, 0.0);
        for _pass in 0..2 {
            for q in &basis {
                let c = crate::linalg::inner(&v, q);
                v.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let nv = norm(&v);
        v.unscale_mut(nv);
        for (k, r) in resid.iter_mut().enumerate() {
            *r -= v[k].norm_sqr();
        }
        resid[i] = f64::NEG_INFINITY;
        basis.push(v.clone());
        out.push(v);
    }
    let onb = if out.is_empty() {
        CMatrix::zeros(d, 0)
    } else {
        CMatrix::from_columns(&out)
    };
    Subspace {
        frame: s.frame.clone(),
        onb,
        rank_tol: s.rank_tol,
    }
}

/// Principal-angle intersection: directions whose cosine is at least
/// `1 − eps`.
pub fn intersect(s1: &Subspace, s2: &Subspace, eps: f64) -> Result<Subspace> {
    s1.ensure_frame(&s2.frame)?;
    if s1.is_zero() || s2.is_zero() {
        return Ok(Subspace::zero(&s1.frame));
    }
    let (sv, u, _) = sorted_svd(&(s1.onb.adjoint() * &s2.onb));
    let keep = sv.iter().take_while(|&&x| x >= 1.0 - eps).count();
    let onb = &s1.onb * u.columns(0, keep);
    let cols: Vec<CVector> = onb.column_iter().map(|c| c.into_owned()).collect();
    Ok(Subspace {
        frame: s1.frame.clone(),
        onb: orthonormal_columns(&cols, s1.frame.dim(), s1.rank_tol),
        rank_tol: s1.rank_tol,
    })
}

/// `M ⊖ S = M ∩ S^⊥`.
pub fn ominus(m: &Subspace, s: &Subspace, eps: f64) -> Result<Subspace> {
    m.ensure_frame(&s.frame)?;
    intersect(m, &complement(s), eps)
}

/// Smallest subspace containing `seeds` and invariant under every operator
/// in `ops`. Operators act on coordinate vectors of `frame`.
pub fn krylov_closure_with(
    frame: &Frame,
    ops: &[&dyn Fn(&CVector) -> CVector],
    seeds: &[CVector],
    rank_tol: f64,
) -> Subspace {
    let d = frame.dim();
    let scale = seeds.iter().map(norm).fold(0.0, f64::max);
    let mut basis: Vec<CVector> = Vec::new();
    let push = |basis: &mut Vec<CVector>, mut v: CVector, threshold: f64| {
        for _pass in 0..2 {
            for q in basis.iter() {
                let c = crate::linalg::inner(&v, q);
                v.axpy(-c, q, C64::new(1.0, 0.0));
            }
        }
        let nv = norm(&v);
        if nv > threshold && basis.len() < d {
            v.unscale_mut(nv);
            basis.push(v);
        }
    };
    if scale > 0.0 {
        for s in seeds {
            push(&mut basis, s.clone(), rank_tol * scale);
        }
    }
    let mut next = 0;
    while next < basis.len() {
        let b = basis[next].clone();
        for op in ops {
            push(&mut basis, op(&b), rank_tol);
        }
        next += 1;
    }
    let onb = if basis.is_empty() {
        CMatrix::zeros(d, 0)
    } else {
        CMatrix::from_columns(&basis)
    };
    Subspace {
        frame: frame.clone(),
        onb,
        rank_tol,
    }
}

pub fn krylov_closure(
    ops: &[crate::toeplitz::OperatorMatrix],
    seeds: &[WoldVector],
    frame: &Frame,
    rank_tol: f64,
) -> Result<Subspace> {
    for op in ops {
        frame.ensure_same(&op.frame_in)?;
        frame.ensure_same(&op.frame_out)?;
    }
    for s in seeds {
        frame.ensure_same(&s.frame)?;
    }
    let closures: Vec<Box<dyn Fn(&CVector) -> CVector + '_>> = ops
        .iter()
        .map(|op| Box::new(move |v: &CVector| &op.mat * v) as Box<dyn Fn(&CVector) -> CVector>)
        .collect();
    let refs: Vec<&dyn Fn(&CVector) -> CVector> = closures.iter().map(|b| b.as_ref()).collect();
    let seeds: Vec<CVector> = seeds.iter().map(|s| s.coords.clone()).collect();
    Ok(krylov_closure_with(frame, &refs, &seeds, rank_tol))
}

pub fn principal_angles(s1: &Subspace, s2: &Subspace) -> Result<Vec<f64>> {
    s1.ensure_frame(&s2.frame)?;
    let (sv, _, _) = sorted_svd(&(s1.onb.adjoint() * &s2.onb));
    Ok(sv.into_iter().map(|x| x.clamp(0.0, 1.0).acos()).collect())
}

/// Largest principal angle between subspaces of equal dimension, or π/2
/// when dimensions differ.
pub fn subspace_gap(s1: &Subspace, s2: &Subspace) -> Result<f64> {
    if s1.dim() != s2.dim() {
        return Ok(std::f64::consts::FRAC_PI_2);
    }
    s1.ensure_frame(&s2.frame)?;
    if s1.is_zero() {
        return Ok(0.0);
    }
    // sine form: accurate for nearly equal subspaces, unlike acos of cosines
    Ok(spectral_norm(&s1.reject_mat(&s2.onb)).min(1.0).asin())
}

/// Orthogonal complement of a subspace `K`, held implicitly through `K`.
/// Used where the ambient frame is too large for an explicit basis.
#[derive(Debug, Clone)]
pub struct CoSubspace {
    pub annihilator: Subspace,
}

impl CoSubspace {
    pub fn of(k: &Subspace) -> Self {
        CoSubspace {
            annihilator: k.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.annihilator.frame().dim() - self.annihilator.dim()
    }

    /// Relative size of the component of `v` along the annihilator.
    pub fn distance(&self, v: &CVector) -> f64 {
        let nv = norm(v);
        if nv == 0.0 {
            return 0.0;
        }
        norm(&(self.annihilator.onb().adjoint() * v)) / nv
    }

    pub fn contains_coords(&self, v: &CVector, tol: f64) -> bool {
        self.distance(v) <= tol
    }

    /// `‖P_K T P_{K^⊥}‖` for the operator `T` whose adjoint acts as
    /// `adjoint_op`; this equals `‖(I − P_K) T* P_K‖`.
    pub fn invariance_residual_via_adjoint(&self, adjoint_op: impl Fn(&CMatrix) -> CMatrix) -> f64 {
        self.annihilator.invariance_residual_with(adjoint_op)
    }

    pub fn to_subspace(&self) -> Subspace {
        complement(&self.annihilator)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRecord {
    frame: FrameDescriptor,
    onb: MatrixRecord,
    rank_tol: f64,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        SubspaceRecord {
            frame: self.frame.descriptor(),
            onb: MatrixRecord::from_matrix(&self.onb),
            rank_tol: self.rank_tol,
        }
        .serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let rec = SubspaceRecord::deserialize(de)?;
        let frame = rec.frame.build().map_err(D::Error::custom)?;
        let onb = rec.onb.to_matrix().map_err(D::Error::custom)?;
        Subspace::from_onb(&frame, onb, rec.rank_tol).map_err(D::Error::custom)
    }
}
