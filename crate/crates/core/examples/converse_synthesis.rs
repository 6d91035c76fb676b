use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure, subspace_gap, DEFAULT_RANK_TOL};
use hardy_lab::structure::{check_thm36_converse, decompose_thm32, synthesize_invariant, ACCEPTANCE_TOL};
use hardy_lab::toeplitz::{forward_shift, perturbed_backward};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(-0.2, 0.3)])?;
    let frame = WoldFrame::build(&b, 1, 6, 200)?;
    let bl = frame.block_len();

    let mut v = CVector::zeros(frame.dim());
    v[1] = c64(1.0, 0.0);
    let v = WoldVector::new(frame.clone(), v)?;
    let u = WoldVector::new(frame.clone(), forward_shift(&v.coords, bl))?;
    let mut seed = CVector::zeros(frame.dim());
    seed[0] = c64(0.5, 0.5);
    seed[3] = c64(0.5, -0.5);
    let seed = WoldVector::new(frame.clone(), seed)?;
    let t = perturbed_backward(&frame, &[(v.clone(), u.clone())])?;
    let m = krylov_closure(&[t], &[seed], &frame, DEFAULT_RANK_TOL)?;

    let res = decompose_thm32(&m, &[u], &[v], ACCEPTANCE_TOL)?;
    let gs: Vec<WoldVector> = res
        .g()
        .column_iter()
        .map(|c| WoldVector::new(frame.clone(), c.into_owned()))
        .collect::<Result<_, _>>()?;
    println!("dim M = {}, p = {}, dim K = {}", m.dim(), res.p(), res.k.dim());

    // Rebuild M from (G, K) alone.
    let rebuilt = synthesize_invariant(&frame, &gs, &res.k, ACCEPTANCE_TOL)?;
    println!("gap between M and the rebuilt subspace: {:.2e}", subspace_gap(&m, &rebuilt)?);
    let residual = check_thm36_converse(&gs, &res.k, &rebuilt, ACCEPTANCE_TOL)?;
    println!("converse invariance residual: {residual:.2e}");
    Ok(())
}
