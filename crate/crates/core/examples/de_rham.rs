//! The de Rham field on the antitangent chart, contractions and Lie derivatives.

use qmanifold::constructions::Antitangent;
use qmanifold::modular::local_rep;
use qmanifold::{Chart, GradedElem, Parity, Result, VectorField};

fn main() -> Result<()> {
    let base = Chart::from_names(&["x", "y"], &["t"], 6)?;
    let tb = Antitangent::new(&base)?;
    println!("chart: {:?}", tb.chart().coords().iter().map(|c| c.name.as_str()).collect::<Vec<_>>());

    let d = tb.de_rham();
    println!("d = {d}");
    println!("phi(d) = {}", local_rep(&d)?);

    let f = tb.lift(&(&GradedElem::coord(&base, "x")? * &GradedElem::coord(&base, "y")?))?;
    println!("d(xy) = {}", d.apply(&f)?);

    let x = GradedElem::coord(&base, "x")?;
    let t = GradedElem::coord(&base, "t")?;
    let q = VectorField::from_named(&base, Parity::Odd, &[("x", &x * &t)])?;
    println!("Q = {q}");
    println!("i_Q = {}", tb.interior(&q)?);
    let l = tb.lie_derivative_lift(&q)?;
    println!("L_Q = {l}");
    println!("phi(Q) = {}, phi(L_Q) = {}", local_rep(&q)?, local_rep(&l)?);
    Ok(())
}
