use crate::algebra::{rat, Chart, GradedElem, Parity};
use crate::constructions::tangent::Antitangent;
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};

/// `Q = dx^b N_b^a ∂/∂x^a + ½ dx^a dx^b (∂N_a^c/∂x^b − ∂N_b^c/∂x^a) ∂/∂dx^c`
/// on the antitangent chart, with `n[b][a] = N_b^a`. Fails unless `N` is Nijenhuis.
pub fn nijenhuis_field(base: &Chart, n: &[Vec<GradedElem>]) -> Result<VectorField> {
    let q = nijenhuis_field_unchecked(base, n)?;
    if !is_homological(&q) {
        return Err(Error::NotHomological);
    }
    Ok(q)
}

/// The same field without the homological check.
pub fn nijenhuis_field_unchecked(base: &Chart, n: &[Vec<GradedElem>]) -> Result<VectorField> {
    if base.coords().iter().any(|c| c.parity.is_odd()) {
        return Err(Error::InvalidChart("Nijenhuis fields are built over a purely even base".into()));
    }
    let dim = base.dim();
    if n.len() != dim || n.iter().any(|r| r.len() != dim) {
        return Err(Error::Dimension(format!("N must be {dim}x{dim}")));
    }
    for e in n.iter().flatten() {
        e.chart().ensure_same(base, "tensor entry")?;
        if !e.has_parity(Parity::Even) {
            return Err(Error::ParityMismatch("tensor entries must be even".into()));
        }
    }
    let t = Antitangent::new(base)?;
    let lifted: Vec<Vec<GradedElem>> = n
        .iter()
        .map(|r| r.iter().map(|e| t.lift(e)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let mut comps = vec![GradedElem::zero(t.chart()); 2 * dim];
    for a in 0..dim {
        let mut acc = GradedElem::zero(t.chart());
        for (b, row) in lifted.iter().enumerate() {
            acc = &acc + &(&t.dx(b) * &row[a]);
        }
        comps[a] = acc;
    }
    let half = rat(1, 2);
    for c in 0..dim {
        let mut acc = GradedElem::zero(t.chart());
        for a in 0..dim {
            for b in 0..dim {
                let inner = &lifted[a][c].left_partial(b) - &lifted[b][c].left_partial(a);
                if inner.is_zero() {
                    continue;
                }
                acc = &acc + &(&(&t.dx(a) * &t.dx(b)) * &inner);
            }
        }
        comps[dim + c] = acc.scale(&half);
    }
    VectorField::new(t.chart(), Parity::Odd, comps)
}

/// `d tr N = dx^a ∂_a N_b^b`, on the antitangent chart.
pub fn trace_differential(base: &Chart, n: &[Vec<GradedElem>]) -> Result<GradedElem> {
    let t = Antitangent::new(base)?;
    let mut tr = GradedElem::zero(base);
    for (b, row) in n.iter().enumerate() {
        tr = &tr + &row[b];
    }
    t.de_rham().apply(&t.lift(&tr)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::local_rep;

    fn x(base: &Chart, n: &str) -> GradedElem {
        GradedElem::coord(base, n).unwrap()
    }

    #[test]
    fn identity_tensor() {
        let base = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
        let one = GradedElem::one(&base);
        let zero = GradedElem::zero(&base);
        let n = vec![vec![one.clone(), zero.clone()], vec![zero, one]];
        let q = nijenhuis_field(&base, &n).unwrap();
        assert_eq!(q.to_string(), "dx1 * d/dx1 + dx2 * d/dx2");
        assert!(local_rep(&q).unwrap().is_zero());
    }

    #[test]
    fn scalar_multiple_of_identity() {
        let base = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
        let f = x(&base, "x1");
        let zero = GradedElem::zero(&base);
        let n = vec![vec![f.clone(), zero.clone()], vec![zero, f]];
        let q = nijenhuis_field(&base, &n).unwrap();
        let phi = local_rep(&q).unwrap();
        assert_eq!(phi, trace_differential(&base, &n).unwrap());
        assert_eq!(phi.to_string(), "2*dx1");
    }

    #[test]
    fn non_nijenhuis_rejected() {
        let base = Chart::from_names(&["x1", "x2"], &[], 6).unwrap();
        let zero = GradedElem::zero(&base);
        let n = vec![vec![zero.clone(), x(&base, "x1")], vec![x(&base, "x2"), zero]];
        assert_eq!(nijenhuis_field(&base, &n), Err(Error::NotHomological));
    }
}
