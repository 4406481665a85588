use std::collections::BTreeMap;

use crate::algebra::{rat, Chart, Coord, GradedElem, Parity};
use crate::constructions::algebroid::{bi_weight, lie_algebroid, AlgebroidData};
use crate::constructions::tangent::Antitangent;
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};
use crate::modular::local_rep;

/// A pair of commuting homological fields of bi-weights `(0,1)` and `(1,0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleStructure {
    chart: Chart,
    q01: VectorField,
    q10: VectorField,
}

fn weight_ok(q: &VectorField, want: (i64, i64)) -> bool {
    q.is_zero() || bi_weight(q) == Some(want)
}

impl DoubleStructure {
    pub fn new(q01: VectorField, q10: VectorField) -> Result<Self> {
        q01.chart().ensure_same(q10.chart(), "double structure")?;
        for q in [&q01, &q10] {
            if !is_homological(q) {
                return Err(Error::NotHomological);
            }
        }
        if !weight_ok(&q01, (0, 1)) {
            return Err(Error::InvalidStructure("Q(0,1) is not of bi-weight (0,1)".into()));
        }
        if !weight_ok(&q10, (1, 0)) {
            return Err(Error::InvalidStructure("Q(1,0) is not of bi-weight (1,0)".into()));
        }
        if !q01.bracket(&q10)?.is_zero() {
            return Err(Error::NotCommuting("[Q(0,1), Q(1,0)] ≠ 0".into()));
        }
        Ok(DoubleStructure {
            chart: q01.chart().clone(),
            q01,
            q10,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn q01(&self) -> &VectorField {
        &self.q01
    }

    pub fn q10(&self) -> &VectorField {
        &self.q10
    }

    /// `Q(0,1) + Q(1,0)`, homological since the two commute.
    pub fn total(&self) -> VectorField {
        self.q01.try_add(&self.q10).expect("fields share a chart")
    }
}

/// `φ` of the sum of the two fields.
pub fn double_modular_rep(d: &DoubleStructure) -> Result<GradedElem> {
    local_rep(&d.total())
}

/// `(ΠTΠA, L_{d_A}, d)` for Lie algebroid data, on the chart `(x, ξ, dx, dξ)`.
pub fn double_from_algebroid(data: &AlgebroidData) -> Result<DoubleStructure> {
    let d_a = lie_algebroid(data)?;
    let t = Antitangent::new(data.chart())?;
    let d = t.de_rham();
    let l = t.lie_derivative_lift(&d_a)?;
    if l != lie_derivative_display(data, &t)? {
        return Err(Error::InvalidStructure("L_{d_A} disagrees with its coordinate expansion".into()));
    }
    DoubleStructure::new(l, d)
}

/// The coordinate expansion of `L_{d_A}`:
///
/// ```text
/// ξ^αQ_α^a ∂_a + ½ξ^αξ^βQ^γ_{βα} ∂_γ
///   + ((−1)^{α̃} ξ^α dx^b ∂_bQ_α^a − dξ^αQ_α^a) ∂/∂dx^a
///   − (dξ^αξ^βQ^γ_{βα} + (−1)^{α̃+β̃} ½ ξ^αξ^β dx^b ∂_bQ^γ_{βα}) ∂/∂dξ^γ
/// ```
fn lie_derivative_display(data: &AlgebroidData, t: &Antitangent) -> Result<VectorField> {
    let chart = t.chart();
    let n = data.base_dim();
    let r = data.fibre_dim();
    let total = n + r;
    let lift = |f: &GradedElem| f.embed(chart);
    let xi = |a: usize| GradedElem::coord_at(chart, n + a);
    let dxi = |a: usize| GradedElem::coord_at(chart, total + n + a);
    let dx = |b: usize| GradedElem::coord_at(chart, total + b);
    // α̃ is the bundle parity, one less than that of ξ^α
    let bundle = |a: usize| data.chart().parity(n + a).flip();
    let d_x = |f: &GradedElem| -> Result<GradedElem> {
        let mut acc = GradedElem::zero(chart);
        for b in 0..n {
            acc = &acc + &(&dx(b) * &lift(&f.left_partial(b))?);
        }
        Ok(acc)
    };
    let mut comps = vec![GradedElem::zero(chart); 2 * total];
    for alpha in 0..r {
        for a in 0..n {
            let Some(q) = data.component(a, &[alpha]) else { continue };
            let q_l = lift(q)?;
            comps[a] = &comps[a] + &(&xi(alpha) * &q_l);
            let mut first = &xi(alpha) * &d_x(q)?;
            if bundle(alpha).is_odd() {
                first = -first;
            }
            comps[total + a] = &(&comps[total + a] + &first) - &(&dxi(alpha) * &q_l);
        }
        for beta in 0..r {
            for gamma in 0..r {
                let Some(q) = data.component(n + gamma, &[beta, alpha]) else { continue };
                let q_l = lift(q)?;
                let pair = &xi(alpha) * &xi(beta);
                comps[n + gamma] = &comps[n + gamma] + &(&pair * &q_l).scale(&rat(1, 2));
                let mut second = (&pair * &d_x(q)?).scale(&rat(1, 2));
                if (bundle(alpha) + bundle(beta)).is_odd() {
                    second = -second;
                }
                let first = &(&dxi(alpha) * &xi(beta)) * &q_l;
                comps[total + n + gamma] = &comps[total + n + gamma] - &(&first + &second);
            }
        }
    }
    VectorField::new(chart, Parity::Odd, comps)
}

/// Which of the two fields a structure function belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Side {
    /// `Q(0,1)`
    A,
    /// `Q(1,0)`
    B,
}

impl Side {
    fn weight(self) -> (i64, i64) {
        match self {
            Side::A => (0, 1),
            Side::B => (1, 0),
        }
    }
}

/// Generic coordinate data for a double structure on `(x, ξ, θ, z)`.
///
/// A term is a target coordinate, a list of fibre coordinates in product order
/// and a structure function of `x`; it contributes
/// `c · (factors) · value ∂/∂target` with `c = ½` when two factors come from
/// the same family (`ξξ` or `θθ`). Such pairs are filled in both orders by
/// graded symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleData {
    base: Chart,
    chart: Chart,
    terms: BTreeMap<(Side, usize, Vec<usize>), GradedElem>,
}

impl DoubleData {
    pub fn new(base: &Chart, xi: Vec<Coord>, theta: Vec<Coord>, z: Vec<Coord>) -> Result<Self> {
        let coords: Vec<Coord> = base
            .coords()
            .iter()
            .map(|c| c.clone().with_weight((0, 0)))
            .chain(xi.into_iter().map(|c| c.with_weight((0, 1))))
            .chain(theta.into_iter().map(|c| c.with_weight((1, 0))))
            .chain(z.into_iter().map(|c| c.with_weight((1, 1))))
            .collect();
        Ok(DoubleData {
            base: base.clone(),
            chart: Chart::new(coords, base.truncation())?,
            terms: BTreeMap::new(),
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    fn weight(&self, i: usize) -> (i64, i64) {
        let (p, q) = self.chart.coords()[i].weight.unwrap_or((0, 0));
        (p as i64, q as i64)
    }

    fn same_family_pair(&self, factors: &[usize]) -> Option<(usize, usize)> {
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let w = self.weight(factors[i]);
                if w == self.weight(factors[j]) && (w == (0, 1) || w == (1, 0)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `factors` are fibre coordinate names in product order.
    pub fn set(&mut self, side: Side, target: &str, factors: &[&str], value: GradedElem) -> Result<()> {
        value.chart().ensure_same(&self.base, "structure function")?;
        let t = self.chart.index_of(target)?;
        let mut idx = Vec::with_capacity(factors.len());
        for f in factors {
            let i = self.chart.index_of(f)?;
            if i < self.base.dim() {
                return Err(Error::InvalidStructure(format!("`{f}` is not a fibre coordinate")));
            }
            idx.push(i);
        }
        let mut w = (-self.weight(t).0, -self.weight(t).1);
        for &i in &idx {
            w = (w.0 + self.weight(i).0, w.1 + self.weight(i).1);
        }
        if w != side.weight() {
            return Err(Error::InvalidStructure(format!(
                "term for `{target}` has bi-weight {w:?}, expected {:?}",
                side.weight()
            )));
        }
        let factor_parity = idx.iter().fold(Parity::Even, |p, &i| p + self.chart.parity(i));
        let want = self.chart.parity(t) + Parity::Odd + factor_parity;
        if !value.has_parity(want) {
            return Err(Error::ParityMismatch(format!("structure function for `{target}` must be {want}")));
        }
        self.insert(side, t, idx.clone(), value.clone());
        if let Some((i, j)) = self.same_family_pair(&idx) {
            let (pi, pj) = (self.chart.parity(idx[i]), self.chart.parity(idx[j]));
            let mut swapped = idx.clone();
            swapped.swap(i, j);
            // the factors in between move past both ends
            let between = idx[i + 1..j].iter().fold(Parity::Even, |p, &k| p + self.chart.parity(k));
            let sign = pi * pj + (pi + pj) * between;
            if idx[i] == idx[j] && pi.is_odd() {
                self.terms.remove(&(side, t, idx));
            } else {
                self.insert(side, t, swapped, if sign.is_odd() { -&value } else { value });
            }
        }
        Ok(())
    }

    fn insert(&mut self, side: Side, t: usize, idx: Vec<usize>, value: GradedElem) {
        if value.is_zero() {
            self.terms.remove(&(side, t, idx));
        } else {
            self.terms.insert((side, t, idx), value);
        }
    }

    fn assemble(&self, side: Side) -> Result<VectorField> {
        let mut comps = vec![GradedElem::zero(&self.chart); self.chart.dim()];
        for ((s, t, idx), value) in &self.terms {
            if *s != side {
                continue;
            }
            let mut term = idx.iter().fold(GradedElem::one(&self.chart), |acc, &i| {
                &acc * &GradedElem::coord_at(&self.chart, i)
            });
            term = &term * &value.embed(&self.chart)?;
            if self.same_family_pair(idx).is_some() {
                term = term.scale(&rat(1, 2));
            }
            comps[*t] = &comps[*t] + &term;
        }
        VectorField::new(&self.chart, Parity::Odd, comps)
    }

    /// `(Q(0,1), Q(1,0))`, unchecked.
    pub fn fields(&self) -> Result<(VectorField, VectorField)> {
        Ok((self.assemble(Side::A)?, self.assemble(Side::B)?))
    }

    /// Validated structure.
    pub fn structure(&self) -> Result<DoubleStructure> {
        let (a, b) = self.fields()?;
        DoubleStructure::new(a, b)
    }

    /// The displayed representative
    /// `ξ^α((−1)^{ã(α̃+1)} ∂_aQ_α^a + Q^β_{αβ} + (Q_α)_i^i + (Q_α)_μ^μ) + θ^i(…)`.
    pub fn formula(&self) -> Result<GradedElem> {
        let n = self.base.dim();
        let mut acc = GradedElem::zero(&self.chart);
        for ((_, t, idx), value) in &self.terms {
            match idx.as_slice() {
                [f] if *t < n => {
                    let mut d = &GradedElem::coord_at(&self.chart, *f) * &value.left_partial(*t).embed(&self.chart)?;
                    if (self.chart.parity(*t) * self.chart.parity(*f)).is_odd() {
                        d = -d;
                    }
                    acc = &acc + &d;
                }
                [first, other] if first == t => {
                    acc = &acc + &(&GradedElem::coord_at(&self.chart, *other) * &value.embed(&self.chart)?);
                }
                _ => {}
            }
        }
        Ok(acc)
    }
}
