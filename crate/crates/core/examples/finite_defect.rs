use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::WoldFrame;
use hardy_lab::linalg::{c64, CVector};
use hardy_lab::linspace::{krylov_closure_with, DEFAULT_RANK_TOL};
use hardy_lab::structure::{nearly_defect_converse, nearly_defect_decompose, ACCEPTANCE_TOL};
use hardy_lab::toeplitz::backward_shift;

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(0.2, -0.4)])?;
    let frame = WoldFrame::build(&b, 1, 7, 200)?;
    let bl = frame.block_len();

    // Closure under (I − J ⊗ J) S*, so S* M ⊆ M + span J.
    let j = CVector::from_fn(frame.dim(), |i, _| if i < 2 * bl { c64(0.3 + 0.1 * i as f64, -0.2) } else { c64(0.0, 0.0) }).normalize();
    let step = |x: &CVector| {
        let y = backward_shift(x, bl);
        let c = j.dotc(&y);
        &y - &j * c
    };
    let seed = CVector::from_fn(frame.dim(), |i, _| if i < 3 * bl { c64((i as f64).cos(), 0.1) } else { c64(0.0, 0.0) });
    let m = krylov_closure_with(&frame, &[&step], &[seed], DEFAULT_RANK_TOL);

    let dec = nearly_defect_decompose(&m, &b, &b, ACCEPTANCE_TOL)?;
    let c = &dec.decomposition.checks;
    println!("dim M = {}, case {:?}, p = {}, defect = {}", m.dim(), dec.case, dec.p(), dec.defect());
    println!("reconstruction {:.2e}, remainder block 0 {:.2e}", c.reconstruction, dec.remainder_block_zero);

    let back = nearly_defect_converse(dec.decomposition.g(), &dec.decomposition.k, &dec.js, &b, &b, &frame, ACCEPTANCE_TOL)?;
    println!("converse: residual {:.2e}, defect {} <= {}: {}", back.residual, back.defect, back.n, back.pass);
    Ok(())
}
