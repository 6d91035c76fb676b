use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure, DEFAULT_RANK_TOL};
use hardy_lab::structure::{forward_thm37, membership_via_model, ACCEPTANCE_TOL};
use hardy_lab::toeplitz::{backward_shift, perturbed_backward};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(0.3, 0.3)])?;
    let frame = WoldFrame::build(&b, 1, 6, 200)?;
    let bl = frame.block_len();

    // M invariant under S − V ⊗ U with U = S* V, built as the orthogonal
    // complement of a closure under the adjoint S* − U ⊗ V.
    let mut v = CVector::zeros(frame.dim());
    v[2] = c64(0.8, 0.0);
    v[3] = c64(0.0, 0.6);
    let v = WoldVector::new(frame.clone(), v)?;
    let u = WoldVector::new(frame.clone(), backward_shift(&v.coords, bl))?;
    let seed = WoldVector::new(frame.clone(), CVector::from_fn(frame.dim(), |i, _| c64(0.5f64.powi(i as i32), 0.0)))?;
    let adjoint = perturbed_backward(&frame, &[(u.clone(), v.clone())])?;
    let perp = krylov_closure(&[adjoint], &[seed], &frame, DEFAULT_RANK_TOL)?;
    let m = hardy_lab::linspace::complement(&perp);
    println!("dim M = {}, dim M^⊥ = {}", m.dim(), perp.dim());

    let res = forward_thm37(&m, &[u], &[v], ACCEPTANCE_TOL)?;
    println!("forward residual {:.2e}", res.forward_residual);
    println!("p = {}, dim N = {}", res.p(), res.n_space.dim());
    println!("N invariance {:.2e}, unitary residual {:.2e}", res.n_invariance, res.unitary_residual);

    // Membership through the model space agrees with projection onto M.
    let fs: Vec<WoldVector> = res
        .g()
        .column_iter()
        .map(|c| WoldVector::new(frame.clone(), c.into_owned()))
        .collect::<Result<_, _>>()?;
    for (name, probe) in [("inside", m.basis_vectors()[0].clone()), ("outside", perp.basis_vectors()[0].clone())] {
        let via = membership_via_model(&probe, &fs, &res.n_space, ACCEPTANCE_TOL)?;
        println!("{name}: model says {}, projection distance {:.2e}", via.member, m.distance(&probe.coords));
    }
    Ok(())
}
