use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CMatrix, CVector};
use hardy_lab::linspace::{krylov_closure_with, subspace_gap, DEFAULT_RANK_TOL};
use hardy_lab::structure::{
    nearly_check, nearly_decompose_thm313, synthesize_nearly, wandering_bound_lemma39, ACCEPTANCE_TOL,
};
use hardy_lab::toeplitz::backward_shift;

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(-0.35, 0.2)])?;
    let bp = b.times(&BlaschkeProduct::new(vec![zero_at(0.5, 0.0)])?);
    let frame = WoldFrame::build(&b, 2, 6, 200)?;

    // G: one unit vector in block 0. N: a backward-invariant subspace of H²(ℂ)
    // living on the first model index.
    let mut g = CMatrix::zeros(frame.dim(), 1);
    g[(frame.index(0, 1, 0), 0)] = c64(0.6, 0.0);
    g[(frame.index(0, 0, 1), 0)] = c64(0.0, 0.8);
    let nf = WoldFrame::build(&b, 1, 6, 200)?;
    let bl = nf.block_len();
    let shift = |x: &CVector| backward_shift(x, bl);
    let seeds = [
        WoldVector::unit(&nf, 0, 0, 0).coords,
        CVector::from_fn(nf.dim(), |i, _| match nf.position(i) {
            (n, 0, _) if n < 3 => c64(0.4, -0.1 * n as f64),
            _ => c64(0.0, 0.0),
        }),
    ];
    let n_sub = krylov_closure_with(&nf, &[&shift], &seeds, DEFAULT_RANK_TOL);
    let m = synthesize_nearly(&frame, &g, &n_sub, ACCEPTANCE_TOL)?;
    println!("dim N = {}, dim M = {}", n_sub.dim(), m.dim());

    let check = nearly_check(&m, &b, &bp, ACCEPTANCE_TOL)?;
    println!("nearly invariant: {} (residual {:.2e})", check.nearly_invariant, check.residual);
    let bound = wandering_bound_lemma39(&m, &bp)?;
    println!("wandering dim {} <= {}: {}", bound.dim, bound.bound, bound.holds());

    let dec = nearly_decompose_thm313(&m, &b, &bp, ACCEPTANCE_TOL)?;
    println!("p = {}, H part {:.2e}, unitary residual {:.2e}", dec.p(), dec.h_part, dec.unitary_residual);
    let rebuilt = synthesize_nearly(&frame, dec.g(), &dec.n_sub, ACCEPTANCE_TOL)?;
    println!("gap to the rebuilt subspace {:.2e}", subspace_gap(&m, &rebuilt)?);
    Ok(())
}
