//! Arithmetic in a truncated super polynomial algebra.

use qmanifold::algebra::rat;
use qmanifold::{Chart, GradedElem, Result};

fn main() -> Result<()> {
    let ch = Chart::from_names(&["x", "y"], &["s", "t"], 6)?;
    let c = |n: &str| GradedElem::coord(&ch, n);
    let (x, y, s, t) = (c("x")?, c("y")?, c("s")?, c("t")?);

    println!("s*t = {}", &s * &t);
    println!("t*s = {}", &t * &s);
    println!("s*s = {}", &s * &s);

    let f = &(&x * &s) + &(&y.pow(2) * &t);
    println!("f = {f}, parity {:?}", f.parity());
    println!("d/ds f = {}", f.partial("s")?);
    println!("d/dy f = {}", f.partial("y")?);

    let u = &GradedElem::one(&ch) + &(&x + &(&s * &t));
    let inv = u.inverse()?;
    println!("1/({u}) = {inv}");
    println!("check: {}", &u * &inv);
    println!("log({u}) = {}", u.log_unit()?);

    let half = f.scale(&rat(1, 2));
    println!("f/2 = {half}");
    Ok(())
}
