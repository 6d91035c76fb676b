use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{WoldFrame, WoldVector};
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure, DEFAULT_RANK_TOL};
use hardy_lab::structure::{decompose_thm32, verify_canonical_conditions, ACCEPTANCE_TOL};
use hardy_lab::toeplitz::{forward_shift, perturbed_backward};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(0.4, 0.1)])?;
    let frame = WoldFrame::build(&b, 2, 8, 200)?;
    let bl = frame.block_len();

    // V on the first two blocks, U = S V.
    let mut v = CVector::zeros(frame.dim());
    v[0] = c64(0.6, 0.0);
    v[3] = c64(0.0, 0.8);
    let v = WoldVector::new(frame.clone(), v)?;
    let u = WoldVector::new(frame.clone(), forward_shift(&v.coords, bl))?;

    let seed: CVector = CVector::from_fn(frame.dim(), |i, _| {
        if i < 3 * bl {
            c64((0.7 * i as f64).sin(), (1.3 * i as f64).cos())
        } else {
            c64(0.0, 0.0)
        }
    });
    let seed = WoldVector::new(frame.clone(), seed.normalize())?;

    let t = perturbed_backward(&frame, &[(v.clone(), u.clone())])?;
    let m = krylov_closure(&[t], &[seed], &frame, DEFAULT_RANK_TOL)?;
    println!("dim M = {}", m.dim());

    let res = decompose_thm32(&m, &[u], &[v], ACCEPTANCE_TOL)?;
    let c = &res.checks;
    println!("p = {}, dim K = {}", res.p(), res.k.dim());
    println!("reconstruction {:.2e}, parseval {:.2e}, isometry {:.2e}", c.reconstruction, c.parseval_gap, c.isometry);
    println!("K invariance {:.2e}, support {:.2e}", c.k_invariance, c.support);
    println!("tail at N {:.2e}, stopped after {} steps with tail {:.2e}", c.tail_at_frame_blocks, c.steps, c.terminal_tail);

    let canon = verify_canonical_conditions(&res, &m, ACCEPTANCE_TOL);
    println!("canonical conditions hold: {}, representation pinned: {}", canon.pass, canon.pinned);
    Ok(())
}
