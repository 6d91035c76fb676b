use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::{from_wold, to_wold, WoldFrame, WoldVector};
use hardy_lab::linalg::c64;
use hardy_lab::toeplitz::{toeplitz_adjoint, toeplitz_forward};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.0, 0.0), zero_at(0.5, -0.3)])?;
    let frame = WoldFrame::build(&b, 2, 6, 200)?;
    println!("l = {}, m = {}, blocks = {}, dim = {}", frame.l(), frame.m(), frame.blocks(), frame.dim());

    let mut v = WoldVector::unit(&frame, 1, 0, 1);
    v.coords[frame.index(0, 1, 0)] = c64(0.5, -0.5);
    let f = from_wold(&v);
    let (back, missed) = to_wold(&f, &frame)?;
    println!("round trip error {:.2e}, missed mass {missed:.2e}", (&back.coords - &v.coords).norm());

    let s = toeplitz_forward(&frame);
    let sstar = toeplitz_adjoint(&frame);
    let shifted = s.apply(&v)?;
    let again = sstar.apply(&shifted)?;
    println!("‖S* S v − v‖ = {:.2e}", (&again.coords - &v.coords).norm());
    println!("block 0 after S*: {:.2e}", sstar.apply(&v)?.coords.rows(0, frame.block_len()).norm());
    Ok(())
}
