//! Conjugating the de Rham differential by `exp(i_Q)` gives `d + L_Q`.

use qmanifold::constructions::{lie_algebroid, structure, AlgebroidData, Antitangent};
use qmanifold::{GradedElem, Result};

fn main() -> Result<()> {
    let q = lie_algebroid(&AlgebroidData::lie_algebra(&["xi1", "xi2"], &structure(&[(0, 1, 1, 1)]), 6)?)?;
    let tb = Antitangent::new(q.chart())?;
    let sum = tb.de_rham().try_add(&tb.lie_derivative_lift(&q)?)?;
    println!("d + L_Q = {sum}");
    for i in 0..tb.chart().dim() {
        let f = GradedElem::coord_at(tb.chart(), i);
        let lhs = tb.mqk_conjugate(&q, &f)?;
        let rhs = sum.apply(&f)?;
        println!("{:>5}: {lhs}  {}", tb.chart().name(i), if lhs == rhs { "ok" } else { "MISMATCH" });
    }
    Ok(())
}
