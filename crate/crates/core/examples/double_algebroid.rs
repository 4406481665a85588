//! The double of a Lie algebroid: two commuting homological fields on the
//! antitangent of its parity-shifted total space.

use qmanifold::constructions::{bi_weight, double_from_algebroid, double_modular_rep, AlgebroidData};
use qmanifold::modular::local_rep;
use qmanifold::{Chart, Coord, GradedElem, Result};

fn main() -> Result<()> {
    let base = Chart::from_names(&["x"], &[], 6)?;
    let x = GradedElem::coord(&base, "x")?;
    let mut data = AlgebroidData::new(&base, vec![Coord::odd("e1"), Coord::odd("e2")])?;
    data.set("x", &["e1"], x)?;
    data.set("e2", &["e2", "e1"], GradedElem::one(&base))?;

    let d = double_from_algebroid(&data)?;
    println!("Q01 = {}  weight {:?}", d.q01(), bi_weight(d.q01()));
    println!("Q10 = {}  weight {:?}", d.q10(), bi_weight(d.q10()));
    println!("[Q01, Q10] zero: {}", d.q01().bracket(d.q10())?.is_zero());
    println!("phi(Q01) = {}", local_rep(d.q01())?);
    println!("phi(Q01 + Q10) = {}", double_modular_rep(&d)?);
    Ok(())
}
