//! Poisson bivectors on the anticotangent chart, their Hamiltonian fields and
//! BV Laplacians.

use qmanifold::brackets::{bv_laplacian, schouten, schouten_vf, AnticotangentChart};
use qmanifold::modular::{local_rep, solve_exactness};
use qmanifold::{Chart, Result};

fn main() -> Result<()> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let t = AnticotangentChart::new(&base)?;

    // linear Poisson structure of [e1, e2] = e2
    let p = &(&t.x(1) * &t.x_star(1)) * &t.x_star(0);
    println!("P       = {p}");
    println!("[[P,P]] = {}", schouten(&t, &p, &p)?);
    let qp = schouten_vf(&t, &p)?;
    println!("Q_P     = {qp}");
    let lap = bv_laplacian(&t, &p, None)?;
    println!("Delta P = {lap}");
    println!("phi(Q_P) = {}", local_rep(&qp)?);
    let v = solve_exactness(&lap, &qp, 6)?;
    println!("exact within 6? {}", serde_json::to_string(&v.record(6)).unwrap());

    // a quadratic bivector
    let p = &(&(&t.x(0) * &t.x(1)) * &t.x_star(1)) * &t.x_star(0);
    println!("P       = {p}");
    println!("Delta P = {}", bv_laplacian(&t, &p, None)?);
    Ok(())
}
