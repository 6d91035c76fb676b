use hardy_lab::blaschke::{zero_at, BlaschkeProduct};
use hardy_lab::hardy::tm_basis;
use hardy_lab::linalg::{c64, max_abs, CMatrix};

fn main() -> hardy_lab::error::Result<()> {
    let b = BlaschkeProduct::new(vec![zero_at(0.3, 0.2), zero_at(-0.4, 0.0)])?;
    let bp = b.times(&BlaschkeProduct::new(vec![zero_at(0.0, 0.5)])?);
    println!("degree {} / {}, B divides B': {}", b.degree(), bp.degree(), b.divides(&bp));

    let z = c64(0.1, -0.6);
    println!("B(z) = {:.6}, |B| on the circle = {:.12}", b.eval(z), b.eval(c64(0.0, 1.0)).norm());

    let basis = tm_basis(&b, 200)?;
    let e = &basis.tm_coeffs;
    let gram: CMatrix = e * e.adjoint();
    let id = CMatrix::identity(b.degree(), b.degree());
    println!("orthonormality of the model basis: {:.2e}", max_abs(&(gram - id)));
    Ok(())
}
