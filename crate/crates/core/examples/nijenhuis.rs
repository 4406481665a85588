//! Nijenhuis operators give homological fields `d_N` on the antitangent chart.

use qmanifold::constructions::{nijenhuis_field, trace_differential};
use qmanifold::modular::local_rep;
use qmanifold::{Chart, GradedElem, Result};

fn main() -> Result<()> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let x1 = GradedElem::coord(&base, "x1")?;
    let x2 = GradedElem::coord(&base, "x2")?;
    let zero = GradedElem::zero(&base);

    let n = vec![vec![x1.pow(2), zero.clone()], vec![zero, &x2 + &x2.pow(2)]];
    let q = nijenhuis_field(&base, &n)?;
    println!("d_N       = {q}");
    println!("phi       = {}", local_rep(&q)?);
    println!("d(tr N)   = {}", trace_differential(&base, &n)?);

    let bad = vec![vec![GradedElem::zero(&base), x1.clone()], vec![x2, GradedElem::zero(&base)]];
    match nijenhuis_field(&base, &bad) {
        Ok(_) => println!("unexpected: accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
