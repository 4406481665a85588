//! Relative modular classes: along the anchor, along an inclusion, and for products.

use qmanifold::constructions::{anchor, product, Antitangent};
use qmanifold::modular::{inclusion_rep, local_rep, relative_rep, supertrace_odd, Submanifold};
use qmanifold::{BerezinVolume, Chart, GradedElem, Parity, Result, VectorField};

fn main() -> Result<()> {
    let base = Chart::from_names(&["x"], &["t"], 6)?;
    let x = GradedElem::coord(&base, "x")?;
    let t = GradedElem::coord(&base, "t")?;
    let q = VectorField::from_named(&base, Parity::Odd, &[("x", &x * &t)])?;

    let tb = Antitangent::new(&base)?;
    let a = anchor(&q)?;
    let rel = relative_rep(
        &a,
        &q,
        &tb.de_rham(),
        &BerezinVolume::coordinate(&base),
        &BerezinVolume::coordinate(tb.chart()),
    )?;
    println!("anchor: relative {rel}, phi(Q) {}", local_rep(&q)?);

    let ch = Chart::from_names(&["y"], &["s"], 6)?;
    let y = GradedElem::coord(&ch, "y")?;
    let s = GradedElem::coord(&ch, "s")?;
    let qm = VectorField::from_named(&ch, Parity::Odd, &[("y", &y * &s)])?;
    let sub = Submanifold::new(&ch, &["s"], &["y"])?;
    let rep = inclusion_rep(&qm, &sub)?;
    println!("inclusion of y = 0: {rep}, supertrace {}", supertrace_odd(&sub.odd_matrix(&qm)?));

    let p = product(&q, &qm)?;
    println!("product field {}", p.field);
    let split = &p.pull_first(&local_rep(&q)?)? + &p.pull_second(&local_rep(&qm)?)?;
    println!("phi(product) = {}, sum of factors = {split}", local_rep(&p.field)?);
    Ok(())
}
