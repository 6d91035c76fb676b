use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure, DEFAULT_RANK_TOL};
use hardy_lab::toeplitz::{c0_decay, perturbed_backward, toeplitz_forward};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(0.6, 0.1)])?;
    let frame = WoldFrame::build(&b, 1, 6, 200)?;
    let v = WoldVector::unit(&frame, 0, 1, 0);
    let u = WoldVector::unit(&frame, 1, 0, 0);
    let seed = WoldVector::new(frame.clone(), CVector::from_fn(frame.dim(), |i, _| c64(0.7f64.powi(i as i32), 0.0)))?;
    let m = krylov_closure(&[perturbed_backward(&frame, &[(v, u)])?], &[seed], &frame, DEFAULT_RANK_TOL)?;

    let h = WoldVector::new(frame.clone(), CVector::from_element(frame.dim(), c64(1.0, 0.0)).normalize())?;
    let profile = c0_decay(&toeplitz_forward(&frame), &m, &h, 40)?;
    for (n, x) in profile.iter().enumerate().step_by(5) {
        println!("n = {:>2}  ‖(P_M S*)ⁿ h‖ = {x:.3e}", n + 1);
    }
    Ok(())
}
