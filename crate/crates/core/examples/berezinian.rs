//! Berezinians of block supermatrices and of coordinate changes.

use qmanifold::algebra::int;
use qmanifold::berezin::{berezinian, jacobian, pullback_volume};
use qmanifold::{BerezinVolume, Chart, ChartMorphism, GradedElem, Result, SuperMatrix};

fn main() -> Result<()> {
    let ch = Chart::from_names(&["x"], &["s", "t"], 6)?;
    let c = |n: &str| GradedElem::coord(&ch, n);
    let (x, s, t) = (c("x")?, c("s")?, c("t")?);
    let one = GradedElem::one(&ch);

    let m = SuperMatrix::new(
        &ch,
        vec![vec![&one + &x]],
        vec![vec![s.clone()]],
        vec![vec![t.clone()]],
        vec![vec![one.scale(&int(2))]],
    )?;
    println!("Ber M = {}", berezinian(&m)?);

    // x ↦ x + s*t, s ↦ s, t ↦ (1 + x) t
    let psi = ChartMorphism::from_named(
        &ch,
        &ch,
        &[("x", &x + &(&s * &t)), ("s", s.clone()), ("t", &(&one + &x) * &t)],
    )?;
    let j = jacobian(&psi)?;
    println!("Ber J(psi) = {}", j.berezinian()?);

    let rho = BerezinVolume::exp(x.clone())?;
    println!("rho      = {rho}");
    println!("psi* rho = {}", pullback_volume(&psi, &rho)?);
    Ok(())
}
