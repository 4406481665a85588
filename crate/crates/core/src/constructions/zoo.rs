use crate::algebra::{Chart, GradedElem, Parity};
use crate::brackets::{schouten_vf, AnticotangentChart};
use crate::constructions::algebroid::{lie_algebroid, structure, AlgebroidData};
use crate::constructions::cotangent::{anticotangent_lift, cotangent_lift};
use crate::constructions::nijenhuis::nijenhuis_field;
use crate::constructions::tangent::Antitangent;
use crate::error::Result;
use crate::geometry::VectorField;

/// A named homological field with its known modular behaviour.
#[derive(Clone, Debug)]
pub struct ZooEntry {
    pub name: &'static str,
    pub field: VectorField,
    /// `Some(true)` when the class is known to vanish, `Some(false)` when the
    /// representative is known not to be exact.
    pub unimodular: Option<bool>,
}

fn entry(name: &'static str, field: VectorField, unimodular: Option<bool>) -> ZooEntry {
    ZooEntry { name, field, unimodular }
}

fn drift() -> Result<VectorField> {
    let base = Chart::from_names(&["x"], &["t"], 6)?;
    let x = GradedElem::coord(&base, "x")?;
    let t = GradedElem::coord(&base, "t")?;
    VectorField::from_named(&base, Parity::Odd, &[("x", &x * &t)])
}

fn nonabelian() -> Result<VectorField> {
    lie_algebroid(&AlgebroidData::lie_algebra(&["xi1", "xi2"], &structure(&[(0, 1, 1, 1)]), 6)?)
}

/// Lie-Poisson bivector of `[e1, e2] = e2` on the dual, as `Q_P = ⟦P, •⟧`.
fn linear_poisson() -> Result<VectorField> {
    let base = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let t = AnticotangentChart::new(&base)?;
    let p = &(&t.x(1) * &t.x_star(1)) * &t.x_star(0);
    schouten_vf(&t, &p)
}

/// Every entry is homological.
pub fn zoo() -> Result<Vec<ZooEntry>> {
    let line = Chart::from_names(&["x"], &[], 6)?;
    let super_line = Chart::from_names(&["x"], &["t"], 6)?;
    let plane = Chart::from_names(&["x1", "x2"], &[], 6)?;
    let x1 = GradedElem::coord(&plane, "x1")?;
    let x2 = GradedElem::coord(&plane, "x2")?;
    let zero = GradedElem::zero(&plane);
    let diag = vec![vec![x1, zero.clone()], vec![zero, x2]];
    let drift_field = drift()?;
    let drift_tangent = Antitangent::new(drift_field.chart())?;
    let heisenberg = AlgebroidData::lie_algebra(&["xi1", "xi2", "xi3"], &structure(&[(0, 1, 2, 1)]), 6)?;
    Ok(vec![
        entry("de_rham_line", Antitangent::new(&line)?.de_rham(), Some(true)),
        entry("de_rham_super_line", Antitangent::new(&super_line)?.de_rham(), Some(true)),
        entry("trivial", VectorField::zero(&super_line, Parity::Odd), Some(true)),
        entry("abelian_2d", lie_algebroid(&AlgebroidData::lie_algebra(&["xi1", "xi2"], &[], 6)?)?, Some(true)),
        entry("nonabelian_2d", nonabelian()?, Some(false)),
        entry("heisenberg", lie_algebroid(&heisenberg)?, Some(true)),
        entry("drift", drift_field.clone(), Some(false)),
        entry("drift_lie_lift", drift_tangent.lie_derivative_lift(&drift_field)?, Some(true)),
        entry("nonabelian_cotangent_lift", cotangent_lift(&nonabelian()?)?, Some(true)),
        entry("nonabelian_anticotangent_lift", anticotangent_lift(&nonabelian()?)?, None),
        entry("nijenhuis_diag", nijenhuis_field(&plane, &diag)?, None),
        entry("linear_poisson", linear_poisson()?, None),
    ])
}
