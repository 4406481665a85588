use crate::algebra::{Chart, GradedElem};
use crate::brackets::{hamiltonian_vf_even, hamiltonian_vf_odd, AnticotangentChart, CotangentChart};
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};

pub fn cotangent(base: &Chart) -> Result<CotangentChart> {
    CotangentChart::new(base)
}

pub fn anticotangent(base: &Chart) -> Result<AnticotangentChart> {
    AnticotangentChart::new(base)
}

fn require_homological(q: &VectorField) -> Result<()> {
    if is_homological(q) {
        Ok(())
    } else {
        Err(Error::NotHomological)
    }
}

/// The symbol `Q^a p_a` on the cotangent chart.
pub fn even_symbol(t: &CotangentChart, q: &VectorField) -> Result<GradedElem> {
    q.chart().ensure_same(t.base(), "symbol")?;
    let mut s = GradedElem::zero(t.chart());
    for a in 0..t.base_dim() {
        s = &s + &(&t.lift(q.component(a))? * &t.p(a));
    }
    Ok(s)
}

/// The odd symbol `Q^a x*_a` on the anticotangent chart.
pub fn odd_symbol(t: &AnticotangentChart, q: &VectorField) -> Result<GradedElem> {
    q.chart().ensure_same(t.base(), "symbol")?;
    let mut s = GradedElem::zero(t.chart());
    for a in 0..t.base_dim() {
        s = &s + &(&t.lift(q.component(a))? * &t.x_star(a));
    }
    Ok(s)
}

/// `Q^a ∂/∂x^a − (−1)^{ã} ∂Q^b/∂x^a p_b ∂/∂p_a`.
pub fn cotangent_lift_closed_form(t: &CotangentChart, q: &VectorField) -> Result<VectorField> {
    let n = t.base_dim();
    let mut comps = vec![GradedElem::zero(t.chart()); 2 * n];
    let lifted: Vec<GradedElem> = (0..n).map(|a| t.lift(q.component(a))).collect::<Result<_>>()?;
    for a in 0..n {
        comps[a] = lifted[a].clone();
        let mut acc = GradedElem::zero(t.chart());
        for (b, qb) in lifted.iter().enumerate() {
            acc = &acc + &(&qb.left_partial(a) * &t.p(b));
        }
        comps[n + a] = if t.chart().parity(a).is_odd() { acc } else { -acc };
    }
    VectorField::new(t.chart(), q.parity(), comps)
}

/// `Q^a ∂/∂x^a + (−1)^{ã+1} ∂Q^b/∂x^a x*_b ∂/∂x*_a`.
pub fn anticotangent_lift_closed_form(t: &AnticotangentChart, q: &VectorField) -> Result<VectorField> {
    let n = t.base_dim();
    let mut comps = vec![GradedElem::zero(t.chart()); 2 * n];
    let lifted: Vec<GradedElem> = (0..n).map(|a| t.lift(q.component(a))).collect::<Result<_>>()?;
    for a in 0..n {
        comps[a] = lifted[a].clone();
        let mut acc = GradedElem::zero(t.chart());
        for (b, qb) in lifted.iter().enumerate() {
            acc = &acc + &(&qb.left_partial(a) * &t.x_star(b));
        }
        comps[n + a] = if t.chart().parity(a).is_odd() { acc } else { -acc };
    }
    VectorField::new(t.chart(), q.parity(), comps)
}

/// `{Q^a p_a, •}` on `T*M`, cross-checked against the closed form.
pub fn cotangent_lift(q: &VectorField) -> Result<VectorField> {
    require_homological(q)?;
    let t = CotangentChart::new(q.chart())?;
    let lift = hamiltonian_vf_even(&t, &even_symbol(&t, q)?)?;
    let closed = cotangent_lift_closed_form(&t, q)?;
    if lift.is_zero() {
        return Ok(closed);
    }
    if lift != closed {
        return Err(Error::InvalidStructure("cotangent lift disagrees with its closed form".into()));
    }
    Ok(lift)
}

/// `⟦Q^a x*_a, •⟧` on `ΠT*M`, cross-checked against the closed form.
pub fn anticotangent_lift(q: &VectorField) -> Result<VectorField> {
    require_homological(q)?;
    let t = AnticotangentChart::new(q.chart())?;
    let closed = anticotangent_lift_closed_form(&t, q)?;
    let symbol = odd_symbol(&t, q)?;
    if symbol.is_zero() {
        return Ok(closed);
    }
    let lift = hamiltonian_vf_odd(&t, &symbol)?;
    if lift != closed {
        return Err(Error::InvalidStructure("anticotangent lift disagrees with its closed form".into()));
    }
    Ok(lift)
}
