//! Modular classes of small Lie algebras, viewed as algebroids over a point.

use qmanifold::constructions::{lie_algebroid, structure, AlgebroidData};
use qmanifold::modular::{local_rep, solve_exactness};
use qmanifold::Result;

fn report(name: &str, data: &AlgebroidData) -> Result<()> {
    let q = lie_algebroid(data)?;
    let phi = local_rep(&q)?;
    let verdict = solve_exactness(&phi, &q, 4)?;
    println!("{name}");
    println!("  Q   = {q}");
    println!("  phi = {phi}");
    println!("  {}", serde_json::to_string(&verdict.record(4)).unwrap());
    Ok(())
}

fn main() -> Result<()> {
    // [e_a, e_b] = c^c_{ab} e_c, entries (a, b, c, c^c_{ab})
    report("abelian", &AlgebroidData::lie_algebra(&["xi1", "xi2"], &[], 6)?)?;
    report(
        "[e1, e2] = e2",
        &AlgebroidData::lie_algebra(&["xi1", "xi2"], &structure(&[(0, 1, 1, 1)]), 6)?,
    )?;
    report(
        "heisenberg",
        &AlgebroidData::lie_algebra(&["xi1", "xi2", "xi3"], &structure(&[(0, 1, 2, 1)]), 6)?,
    )?;
    report(
        "sl2",
        &AlgebroidData::lie_algebra(
            &["h", "e", "f"],
            &structure(&[(0, 1, 1, 2), (0, 2, 2, -2), (1, 2, 0, 1)]),
            6,
        )?,
    )?;
    Ok(())
}
