use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{ParamRanges, Params, Payload, Scenario, TheoremId, SCHEMA_VERSION};
use crate::blaschke::BlaschkeProduct;
use crate::codec::MatrixRecord;
use crate::error::{LabError, Result};
use crate::hardy::{Frame, WoldFrame, WoldVector};
use crate::linalg::{c64, norm, orthonormal_columns, CMatrix, CVector, C64};
use crate::linspace::{complement, krylov_closure_with, Subspace, DEFAULT_RANK_TOL};
use crate::structure::{synthesize_defect, synthesize_invariant, synthesize_nearly, CONSTRUCTION_TOL};
use crate::toeplitz::{backward_shift, forward_shift};

fn uniform_c64(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0))
}

/// A point drawn uniformly from the closed disk of radius `radius`.
pub fn random_zero(rng: &mut ChaCha8Rng, radius: f64) -> C64 {
    loop {
        let w = uniform_c64(rng) * radius;
        if w.norm() <= radius {
            return w;
        }
    }
}

/// Unit vector with uniform components on the first `support_blocks`
/// blocks of `frame`.
pub fn random_unit(rng: &mut ChaCha8Rng, frame: &Frame, support_blocks: usize) -> WoldVector {
    let mut v = WoldVector::zeros(frame);
    let top = support_blocks.min(frame.blocks()) * frame.block_len();
    loop {
        for i in 0..top {
            v.coords[i] = uniform_c64(rng);
        }
        let n = v.norm();
        if n > 0.0 {
            v.coords.unscale_mut(n);
            return v;
        }
    }
}

/// Unit vector supported on model index `j = 0` of the first
/// `support_blocks` blocks, in the fibers `fibers`.
fn random_first_index(rng: &mut ChaCha8Rng, frame: &Frame, support_blocks: usize, fibers: std::ops::Range<usize>) -> CVector {
    let mut v = CVector::zeros(frame.dim());
    loop {
        for n in 0..support_blocks.min(frame.blocks()) {
            for s in fibers.clone() {
                v[frame.index(n, 0, s)] = uniform_c64(rng);
            }
        }
        let nv = norm(&v);
        if nv > 0.0 {
            return v.unscale(nv);
        }
    }
}

/// `count` orthonormal vectors of `ℂ^dim` from a random draw.
fn random_orthonormal(rng: &mut ChaCha8Rng, dim: usize, count: usize) -> CMatrix {
    loop {
        let cols: Vec<CVector> = (0..dim).map(|_| CVector::from_fn(dim, |_, _| uniform_c64(rng))).collect();
        let q = orthonormal_columns(&cols, dim, DEFAULT_RANK_TOL);
        if q.ncols() >= count {
            return q.columns(0, count).into_owned();
        }
    }
}

fn random_blaschke(rng: &mut ChaCha8Rng, l: usize, radius: f64, exact: bool) -> Result<BlaschkeProduct> {
    if exact {
        return Ok(BlaschkeProduct::monomial(l));
    }
    let mut zeros = vec![c64(0.0, 0.0)];
    zeros.extend((1..l).map(|_| random_zero(rng, radius)));
    BlaschkeProduct::new(zeros)
}

fn draw(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    if hi <= lo {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

fn vectors(frame: &Frame, cols: &CMatrix) -> Vec<WoldVector> {
    cols.column_iter()
        .map(|c| WoldVector {
            frame: frame.clone(),
            coords: c.into_owned(),
        })
        .collect()
}

/// Frame vectors equal to `cols` (vectors of `ℂ^{lm}`) placed at block
/// `blocks[i]`.
fn block_vectors(frame: &Frame, cols: &CMatrix, blocks: &[usize]) -> CMatrix {
    let bl = frame.block_len();
    let mut out = CMatrix::zeros(frame.dim(), cols.ncols());
    for (i, &b) in blocks.iter().enumerate() {
        out.view_mut((b * bl, i), (bl, 1)).copy_from(&cols.column(i));
    }
    out
}

struct Ctx {
    rng: ChaCha8Rng,
    params: Params,
    frame: Frame,
    b: BlaschkeProduct,
    radius: f64,
}

fn perturbation_op<'a>(pairs: &'a [(WoldVector, WoldVector)], bl: usize) -> impl Fn(&CVector) -> CVector + 'a {
    move |x: &CVector| {
        let mut y = backward_shift(x, bl);
        for (v, u) in pairs {
            let c = u.coords.dotc(x);
            y.axpy(-c, &v.coords, c64(1.0, 0.0));
        }
        y
    }
}

/// `M` as the closure of 1–2 low seeds under `T*_Φ − Σ Vᵢ ⊗ Uᵢ`, with
/// pairs supported on the first few blocks. With `compressed` the `Vᵢ` are
/// orthonormal and `Uᵢ = T_Φ Vᵢ`, so the operator is `(I − Σ Vᵢ ⊗ Vᵢ) T*_Φ`;
/// otherwise the pairs are independent draws, whose closure usually absorbs
/// the `Vᵢ` and ends up `T*_Φ`-invariant.
fn krylov_instance(ctx: &mut Ctx, payload: &mut Payload, allow_orthogonal: bool, compressed: bool) {
    let f = ctx.frame.clone();
    let depth = draw(&mut ctx.rng, 1, 3.min(f.blocks()));
    let k = ctx.params.k;
    let bl = f.block_len();
    let (us, vs): (Vec<WoldVector>, Vec<WoldVector>) = if compressed {
        let k = k.min(depth * bl);
        let q = random_orthonormal(&mut ctx.rng, depth * bl, k);
        let vs = vectors(&f, &q.resize_vertically(f.dim(), c64(0.0, 0.0)));
        let us = vs
            .iter()
            .map(|v| WoldVector {
                frame: f.clone(),
                coords: forward_shift(&v.coords, bl),
            })
            .collect();
        ctx.params.k = k;
        (us, vs)
    } else {
        (
            (0..k).map(|_| random_unit(&mut ctx.rng, &f, depth)).collect(),
            (0..k).map(|_| random_unit(&mut ctx.rng, &f, depth)).collect(),
        )
    };
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let seeds: Vec<CVector> = (0..nseeds).map(|_| random_unit(&mut ctx.rng, &f, depth).coords).collect();
    if allow_orthogonal && ctx.rng.random_bool(0.25) {
        let shift = |x: &CVector| backward_shift(x, bl);
        let m = krylov_closure_with(&f, &[&shift], &seeds, DEFAULT_RANK_TOL);
        let us = us
            .into_iter()
            .map(|u| WoldVector {
                coords: &u.coords - m.project_coords(&u.coords),
                frame: u.frame,
            })
            .collect();
        payload.us = us;
        payload.vs = vs;
        payload.m_space = Some(m);
        return;
    }
    let pairs: Vec<(WoldVector, WoldVector)> = vs.iter().cloned().zip(us.iter().cloned()).collect();
    let op = perturbation_op(&pairs, bl);
    payload.m_space = Some(krylov_closure_with(&f, &[&op], &seeds, DEFAULT_RANK_TOL));
    payload.us = us;
    payload.vs = vs;
}

fn gen_thm36(ctx: &mut Ctx, payload: &mut Payload) -> Result<()> {
    let f = ctx.frame.clone();
    let (l, m, n) = (f.l(), f.m(), f.blocks());
    let lm = l * m;
    let p = draw(&mut ctx.rng, 1.min(ctx.params.k), ctx.params.k.min(lm));
    let e = random_orthonormal(&mut ctx.rng, lm, p);
    let lifts: Vec<usize> = (0..p).map(|_| draw(&mut ctx.rng, 0, 2.min(n - 1))).collect();
    let g = block_vectors(&f, &e, &lifts);
    let max_lift = lifts.iter().copied().max().unwrap_or(0);
    let kf = WoldFrame::build(&ctx.b, p + m, n - max_lift, f.taylor_degree())?;
    let mut seeds = Vec::new();
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let depth = draw(&mut ctx.rng, 1, 3.min(kf.blocks()));
    for _ in 0..nseeds {
        let mut s = if p > 0 {
            random_first_index(&mut ctx.rng, &kf, depth, 0..p)
        } else {
            CVector::zeros(kf.dim())
        };
        for blk in 0..depth {
            let h = CVector::from_fn(lm, |_, _| uniform_c64(&mut ctx.rng));
            let h = &h - &e * (e.adjoint() * &h);
            for jj in 0..l {
                for sm in 0..m {
                    s[kf.index(blk, jj, p + sm)] = h[jj * m + sm];
                }
            }
        }
        seeds.push(s);
    }
    for i in 0..p {
        seeds.push(WoldVector::unit(&kf, 0, 0, i).coords);
    }
    let bl = kf.block_len();
    let shift = |x: &CVector| backward_shift(x, bl);
    let k = krylov_closure_with(&kf, &[&shift], &seeds, DEFAULT_RANK_TOL);
    let gs = vectors(&f, &g);
    payload.m_space = Some(synthesize_invariant(&f, &gs, &k, CONSTRUCTION_TOL)?);
    payload.g = Some(MatrixRecord::from_matrix(&g));
    payload.k_space = Some(k);
    ctx.params.k = p;
    Ok(())
}

fn gen_thm37(ctx: &mut Ctx, payload: &mut Payload) {
    let f = ctx.frame.clone();
    let room = f.blocks() - ctx.params.guard;
    let depth = draw(&mut ctx.rng, 1, 3.min(room));
    let k = ctx.params.k;
    let us: Vec<WoldVector> = (0..k).map(|_| random_unit(&mut ctx.rng, &f, depth)).collect();
    let vs: Vec<WoldVector> = (0..k).map(|_| random_unit(&mut ctx.rng, &f, depth)).collect();
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let seeds: Vec<CVector> = (0..nseeds).map(|_| random_unit(&mut ctx.rng, &f, depth).coords).collect();
    // M^⊥ is closed under the adjoint perturbation T*_Φ − Σ Uᵢ ⊗ Vᵢ
    let swapped: Vec<(WoldVector, WoldVector)> = us.iter().cloned().zip(vs.iter().cloned()).collect();
    let op = perturbation_op(&swapped, f.block_len());
    let perp = krylov_closure_with(&f, &[&op], &seeds, DEFAULT_RANK_TOL);
    let m = complement(&perp);
    let mut probes = Vec::with_capacity(20);
    for i in 0..20 {
        let mut v = random_unit(&mut ctx.rng, &f, f.blocks());
        if i % 2 == 0 {
            v.coords = m.project_coords(&v.coords);
        }
        probes.push(v);
    }
    payload.m_space = Some(m);
    payload.us = us;
    payload.vs = vs;
    payload.probes = probes;
}

fn random_subspace(ctx: &mut Ctx) -> Subspace {
    let f = ctx.frame.clone();
    let r = draw(&mut ctx.rng, 1, f.dim().saturating_sub(1).max(1));
    let cols: Vec<CVector> = (0..r).map(|_| random_unit(&mut ctx.rng, &f, f.blocks()).coords).collect();
    Subspace::span_coords(&f, &cols, DEFAULT_RANK_TOL)
}

fn gen_lemma39(ctx: &mut Ctx, payload: &mut Payload) -> Result<()> {
    let deg = draw(&mut ctx.rng, 1, ctx.params.lp.max(1));
    let radius = ctx.radius;
    let zeros: Vec<C64> = (0..deg).map(|_| random_zero(&mut ctx.rng, radius)).collect();
    payload.bp = Some(BlaschkeProduct::new(zeros)?);
    ctx.params.lp = deg;
    payload.m_space = Some(if ctx.rng.random_bool(1.0 / 3.0) {
        Subspace::full(&ctx.frame)
    } else {
        random_subspace(ctx)
    });
    Ok(())
}

fn gen_thm313(ctx: &mut Ctx, payload: &mut Payload) -> Result<()> {
    let f = ctx.frame.clone();
    let (l, m, n) = (f.l(), f.m(), f.blocks());
    let lm = l * m;
    let p = draw(&mut ctx.rng, 1, ctx.params.k.max(1).min(lm));
    let g = block_vectors(&f, &random_orthonormal(&mut ctx.rng, lm, p), &vec![0; p]);
    let nf = WoldFrame::build(&ctx.b, p, n, f.taylor_degree())?;
    let depth = draw(&mut ctx.rng, 1, 3.min(n));
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let mut seeds: Vec<CVector> = (0..nseeds).map(|_| random_first_index(&mut ctx.rng, &nf, depth, 0..p)).collect();
    for s in 0..p {
        seeds.push(WoldVector::unit(&nf, 0, 0, s).coords);
    }
    let bl = nf.block_len();
    let shift = |x: &CVector| backward_shift(x, bl);
    let n_sub = krylov_closure_with(&nf, &[&shift], &seeds, DEFAULT_RANK_TOL);
    let extra = ctx.params.lp.saturating_sub(l);
    let bp = if extra > 0 && ctx.rng.random_bool(0.5) {
        let deg = draw(&mut ctx.rng, 1, extra);
        let radius = ctx.radius;
        let c = BlaschkeProduct::new((0..deg).map(|_| random_zero(&mut ctx.rng, radius)).collect())?;
        ctx.b.times(&c)
    } else {
        ctx.b.clone()
    };
    ctx.params.lp = bp.degree();
    ctx.params.k = p;
    payload.m_space = Some(synthesize_nearly(&f, &g, &n_sub, CONSTRUCTION_TOL)?);
    payload.g = Some(MatrixRecord::from_matrix(&g));
    payload.k_space = Some(n_sub);
    payload.bp = Some(bp);
    Ok(())
}

fn gen_defect(ctx: &mut Ctx, payload: &mut Payload, n_max: usize) -> Result<()> {
    let f = ctx.frame.clone();
    let (l, m, blocks) = (f.l(), f.m(), f.blocks());
    let lm = l * m;
    let n = draw(&mut ctx.rng, 1, n_max.min(lm));
    let p = if lm > n && ctx.rng.random_bool(0.5) {
        draw(&mut ctx.rng, 1, (lm - n).min(3))
    } else {
        0
    };
    let q = random_orthonormal(&mut ctx.rng, lm, p + n);
    let g = block_vectors(&f, &q.columns(0, p).into_owned(), &vec![0; p]);
    let js = block_vectors(&f, &q.columns(p, n).into_owned(), &vec![0; n]);
    let kf = WoldFrame::build(&ctx.b, p + n, blocks - 1, f.taylor_degree())?;
    let depth = draw(&mut ctx.rng, 1, 3.min(kf.blocks()));
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let mut seeds: Vec<CVector> = (0..nseeds).map(|_| random_first_index(&mut ctx.rng, &kf, depth, 0..p + n)).collect();
    for s in 0..p {
        seeds.push(WoldVector::unit(&kf, 0, 0, s).coords);
    }
    let bl = kf.block_len();
    let shift = |x: &CVector| backward_shift(x, bl);
    let k = krylov_closure_with(&kf, &[&shift], &seeds, DEFAULT_RANK_TOL);
    payload.m_space = Some(synthesize_defect(&f, &g, &js, &k, CONSTRUCTION_TOL)?);
    payload.g = Some(MatrixRecord::from_matrix(&g));
    payload.js = Some(MatrixRecord::from_matrix(&js));
    payload.k_space = Some(k);
    payload.bp = Some(ctx.b.clone());
    ctx.params.lp = l;
    ctx.params.k = n;
    Ok(())
}

/// Direct construction: `M` is the closure of 1–2 low seeds under
/// `(I − J ⊗ J) T*_Φ`, so `T*_Φ M ⊆ M + span J`.
fn gen_thm42(ctx: &mut Ctx, payload: &mut Payload) {
    let f = ctx.frame.clone();
    let depth = draw(&mut ctx.rng, 1, 3.min(f.blocks()));
    let j = random_unit(&mut ctx.rng, &f, depth);
    let nseeds = draw(&mut ctx.rng, 1, 2);
    let seeds: Vec<CVector> = (0..nseeds).map(|_| random_unit(&mut ctx.rng, &f, depth).coords).collect();
    let pairs = [(j.clone(), j)];
    let bl = f.block_len();
    let shift = |x: &CVector| {
        let y = backward_shift(x, bl);
        let c = pairs[0].0.coords.dotc(&y);
        &y - &pairs[0].0.coords * c
    };
    payload.m_space = Some(krylov_closure_with(&f, &[&shift], &seeds, DEFAULT_RANK_TOL));
    payload.bp = Some(ctx.b.clone());
    ctx.params.lp = f.l();
    ctx.params.k = 1;
}

fn gen_c0decay(ctx: &mut Ctx, payload: &mut Payload) {
    payload.m_space = Some(random_subspace(ctx));
    let f = ctx.frame.clone();
    payload.h = Some(random_unit(&mut ctx.rng, &f, f.blocks()));
}

/// Deterministic scenario for `theorem` from `seed`, with every random
/// parameter drawn inside `ranges`.
pub fn generate(seed: u64, theorem: TheoremId, ranges: &ParamRanges) -> Result<Scenario> {
    ranges.validate()?;
    let min_blocks = match theorem {
        TheoremId::Thm36 | TheoremId::Thm37 => ranges.guard.max(1) + 1,
        _ => 2,
    };
    if ranges.blocks < min_blocks {
        return Err(LabError::Parameter(format!("{theorem} needs at least {min_blocks} blocks")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = draw(&mut rng, 1, ranges.l);
    let m = draw(&mut rng, 1, ranges.m);
    let blocks = draw(&mut rng, min_blocks.max(ranges.blocks.div_ceil(2)), ranges.blocks);
    let k = draw(&mut rng, 1.min(ranges.k), ranges.k);
    let b = random_blaschke(&mut rng, l, ranges.max_zero_modulus, ranges.exact)?;
    let frame = WoldFrame::build(&b, m, blocks, ranges.taylor_degree)?;
    let params = Params {
        l,
        lp: ranges.lp,
        m,
        k,
        blocks,
        taylor_degree: ranges.taylor_degree,
        guard: ranges.guard,
        tol: ranges.tol,
    };
    let mut ctx = Ctx {
        rng,
        params,
        frame,
        b,
        radius: ranges.max_zero_modulus,
    };
    let mut payload = Payload::default();
    match theorem {
        TheoremId::Thm32 => {
            let compressed = ctx.rng.random_bool(0.5);
            krylov_instance(&mut ctx, &mut payload, true, compressed)
        }
        TheoremId::Thm310 => krylov_instance(&mut ctx, &mut payload, false, true),
        TheoremId::Lemma36 => {
            if ctx.rng.random_bool(0.3) {
                let f = ctx.frame.clone();
                let bl = f.block_len();
                let depth = draw(&mut ctx.rng, 1, f.blocks());
                let seed_v = random_unit(&mut ctx.rng, &f, depth).coords;
                let shift = |x: &CVector| backward_shift(x, bl);
                payload.m_space = Some(krylov_closure_with(&f, &[&shift], &[seed_v], DEFAULT_RANK_TOL));
            } else {
                krylov_instance(&mut ctx, &mut payload, false, true);
            }
        }
        TheoremId::Thm36 => gen_thm36(&mut ctx, &mut payload)?,
        TheoremId::Thm37 => gen_thm37(&mut ctx, &mut payload),
        TheoremId::Lemma39 => gen_lemma39(&mut ctx, &mut payload)?,
        TheoremId::Thm313 => gen_thm313(&mut ctx, &mut payload)?,
        TheoremId::Thm42 => gen_thm42(&mut ctx, &mut payload),
        TheoremId::Thm44 => gen_defect(&mut ctx, &mut payload, 1)?,
        TheoremId::Thm45 => gen_defect(&mut ctx, &mut payload, ranges.k.clamp(1, 3))?,
        TheoremId::C0decay => gen_c0decay(&mut ctx, &mut payload),
    }
    payload.b = Some(ctx.b.clone());
    payload.frame = Some(ctx.frame.descriptor());
    Ok(Scenario {
        schema_version: SCHEMA_VERSION,
        id: format!("{theorem}-{seed}"),
        seed,
        theorem,
        params: ctx.params,
        payload,
    })
}
