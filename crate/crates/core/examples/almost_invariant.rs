use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure, DEFAULT_RANK_TOL};
use hardy_lab::structure::{almost_decompose_thm310, almost_defect, almost_equiv_check, ACCEPTANCE_TOL};
use hardy_lab::toeplitz::{forward_shift, perturbed_backward, toeplitz_adjoint};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0)])?;
    let frame = WoldFrame::build(&b, 2, 8, 200)?;
    let bl = frame.block_len();

    let pairs: Vec<(WoldVector, WoldVector)> = [1usize, 4]
        .iter()
        .map(|&i| {
            let v = WoldVector::unit(&frame, i / bl, 0, i % bl);
            let u = WoldVector::new(frame.clone(), forward_shift(&v.coords, bl)).unwrap();
            (v, u)
        })
        .collect();
    let seed = WoldVector::new(
        frame.clone(),
        CVector::from_fn(frame.dim(), |i, _| if i < 3 * bl { c64(1.0 / (1.0 + i as f64), 0.2) } else { c64(0.0, 0.0) }),
    )?;
    let t = perturbed_backward(&frame, &pairs)?;
    let m = krylov_closure(&[t], &[seed], &frame, DEFAULT_RANK_TOL)?;

    let sstar = toeplitz_adjoint(&frame);
    let defect = almost_defect(&sstar, &m, DEFAULT_RANK_TOL)?;
    println!("dim M = {}, defect = {}, largest singular value {:.3e}", m.dim(), defect.defect, defect.singular_values.first().copied().unwrap_or(0.0));

    let eq = almost_equiv_check(&sstar, &m, &pairs, pairs.len(), ACCEPTANCE_TOL)?;
    println!("given pairs residual {:.2e}, defect pairs residual {:.2e}", eq.given_pairs_residual.unwrap_or(0.0), eq.defect_pairs_residual);
    println!("equivalence holds: {}", eq.pass);

    let dec = almost_decompose_thm310(&m, ACCEPTANCE_TOL)?;
    let c = &dec.decomposition.checks;
    println!("p = {}, reconstruction {:.2e}, rebuilt defect {}", dec.decomposition.p(), c.reconstruction, dec.converse_defect);
    Ok(())
}
