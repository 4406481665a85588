use std::collections::BTreeMap;

use crate::algebra::{int, rat, Chart, Coord, GradedElem, Parity, Rational};
use crate::berezin::coordinate_divergence;
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};
use crate::modular::local_rep;

/// Structure functions of an L∞-algebroid on `ΠA` with coordinates `(x^a, ξ^α)`.
///
/// A component `Q^t_{α_n…α_1}(x)` contributes
/// `(1/n!) ξ^{α_1}…ξ^{α_n} Q^t_{α_n…α_1} ∂/∂t`; lower indices are stored in the
/// written order `[α_n, …, α_1]`. Setting one ordering fills every other
/// ordering by graded symmetry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebroidData {
    base: Chart,
    chart: Chart,
    components: BTreeMap<(usize, Vec<usize>), GradedElem>,
}

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

impl AlgebroidData {
    /// `fibre` lists the `ξ` coordinates with their own (shifted) parities.
    /// Base coordinates get weight `(0,0)` and fibre coordinates `(0,1)`.
    pub fn new(base: &Chart, fibre: Vec<Coord>) -> Result<Self> {
        let coords: Vec<Coord> = base
            .coords()
            .iter()
            .map(|c| c.clone().with_weight(c.weight.unwrap_or((0, 0))))
            .chain(fibre.into_iter().map(|c| c.with_weight((0, 1))))
            .collect();
        let chart = Chart::new(coords, base.truncation())?;
        Ok(AlgebroidData {
            base: base.clone(),
            chart,
            components: BTreeMap::new(),
        })
    }

    /// A Lie algebra `[e_a, e_b] = c^c_{ab} e_c` as an algebroid over a point,
    /// with odd generators `ξ^a` named by `names`. Entries are `(a, b, c, c^c_{ab})`;
    /// listing `(b, a, c, −k)` as well is allowed and redundant.
    pub fn lie_algebra(names: &[&str], structure: &[(usize, usize, usize, Rational)], truncation: u32) -> Result<Self> {
        let fibre = names.iter().map(|n| Coord::odd(*n)).collect();
        let mut data = AlgebroidData::new(&Chart::point(truncation), fibre)?;
        let pt = data.base.clone();
        for (a, b, c, k) in structure {
            let (a, b, c) = (*a, *b, *c);
            if a == b {
                continue;
            }
            let t = data.fibre_index(c);
            // Q^c_{ba} = c^c_{ab}, so ½ξ^aξ^bQ^c_{ba} reproduces the bracket
            data.set_index(t, &[b, a], GradedElem::constant(&pt, k.clone()))?;
        }
        Ok(data)
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    /// The total chart `(x, ξ)` of `ΠA`.
    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn fibre_dim(&self) -> usize {
        self.chart.dim() - self.base.dim()
    }

    pub fn fibre_index(&self, alpha: usize) -> usize {
        self.base.dim() + alpha
    }

    fn xi_parity(&self, alpha: usize) -> Parity {
        self.chart.parity(self.fibre_index(alpha))
    }

    pub fn component(&self, target: usize, lower: &[usize]) -> Option<&GradedElem> {
        self.components.get(&(target, lower.to_vec()))
    }

    /// Nonzero stored components, every ordering included.
    pub fn components(&self) -> impl Iterator<Item = (&(usize, Vec<usize>), &GradedElem)> {
        self.components.iter()
    }

    /// Set `Q^target_{lower}` by coordinate names; `lower` is `[α_n, …, α_1]` by fibre name.
    pub fn set(&mut self, target: &str, lower: &[&str], value: GradedElem) -> Result<()> {
        let t = self.chart.index_of(target)?;
        let mut idx = Vec::with_capacity(lower.len());
        for n in lower {
            let i = self.chart.index_of(n)?;
            if i < self.base.dim() {
                return Err(Error::InvalidStructure(format!("`{n}` is not a fibre coordinate")));
            }
            idx.push(i - self.base.dim());
        }
        self.set_index(t, &idx, value)
    }

    /// Set by indices: `target` indexes the total chart, `lower` the fibre.
    pub fn set_index(&mut self, target: usize, lower: &[usize], value: GradedElem) -> Result<()> {
        value.chart().ensure_same(&self.base, "structure function")?;
        if target >= self.chart.dim() || lower.iter().any(|&a| a >= self.fibre_dim()) {
            return Err(Error::Dimension("structure index out of range".into()));
        }
        // ξ^{α_1}…ξ^{α_n} Q has to be odd relative to ∂/∂t
        let xi_parity = lower.iter().fold(Parity::Even, |p, &a| p + self.xi_parity(a));
        let want = self.chart.parity(target) + Parity::Odd + xi_parity;
        if !value.has_parity(want) {
            return Err(Error::ParityMismatch(format!(
                "component for `{}` with {} lower indices must be {want}",
                self.chart.name(target),
                lower.len()
            )));
        }
        // product order ξ^{α_1}…ξ^{α_n} is the reverse of the stored order
        let product: Vec<usize> = lower.iter().rev().copied().collect();
        for (perm, sign) in orderings(&product, |a| self.xi_parity(a)) {
            let key: Vec<usize> = perm.iter().rev().copied().collect();
            if sign == 0 || value.is_zero() {
                self.components.remove(&(target, key));
            } else {
                let v = if sign < 0 { -&value } else { value.clone() };
                self.components.insert((target, key), v);
            }
        }
        Ok(())
    }

    /// The assembled field `d_A`, not checked for `d_A² = 0`.
    pub fn assemble(&self) -> Result<VectorField> {
        let mut comps = vec![GradedElem::zero(&self.chart); self.chart.dim()];
        for ((t, lower), value) in &self.components {
            let mut term = value.embed(&self.chart)?;
            for &a in lower {
                // lower = [α_n…α_1]; prepend ξ^{α_n}, …, ξ^{α_1} in turn
                term = &GradedElem::coord_at(&self.chart, self.fibre_index(a)) * &term;
            }
            let term = term.scale(&rat(1, factorial(lower.len())));
            comps[*t] = &comps[*t] + &term;
        }
        VectorField::new(&self.chart, Parity::Odd, comps)
    }

    fn xi_product(&self, product_order: &[usize]) -> GradedElem {
        product_order.iter().fold(GradedElem::one(&self.chart), |acc, &a| {
            &acc * &GradedElem::coord_at(&self.chart, self.fibre_index(a))
        })
    }

    /// The displayed L∞ representative
    /// `Σ (−1)^ε/n! ξ^{α_1}…ξ^{α_n} ∂_a Q^a_{α_n…α_1} + Σ 1/(n−1)! ξ^{α_2}…ξ^{α_n} Q^β_{α_n…α_2 β}`
    /// with `ε = ã(α̃_1 + … + α̃_n + n)`, `α̃` the parity of the bundle coordinate
    /// (so `α̃ + 1` is that of `ξ^α`).
    pub fn l_infinity_formula(&self) -> Result<GradedElem> {
        let mut acc = GradedElem::zero(&self.chart);
        for ((t, lower), value) in &self.components {
            let n = lower.len();
            let product: Vec<usize> = lower.iter().rev().copied().collect();
            if *t < self.base.dim() {
                let pa = self.chart.parity(*t);
                let eps = lower.iter().fold(Parity::Even, |p, &a| p + self.xi_parity(a).flip())
                    + if n % 2 == 1 { Parity::Odd } else { Parity::Even };
                let d = value.left_partial(*t).embed(&self.chart)?;
                let mut term = (&self.xi_product(&product) * &d).scale(&rat(1, factorial(n)));
                if (pa * eps).is_odd() {
                    term = -term;
                }
                acc = &acc + &term;
            } else if n >= 1 && lower[n - 1] == *t - self.base.dim() {
                // Q^β_{α_n…α_2 β}: the last written index is the target
                let rest = &product[1..];
                let term = (&self.xi_product(rest) * &value.embed(&self.chart)?).scale(&rat(1, factorial(n - 1)));
                acc = &acc + &term;
            }
        }
        Ok(acc)
    }

    /// Only anchor (`n = 1`, base target) and bracket (`n = 2`, fibre target) components.
    pub fn is_lie_type(&self) -> bool {
        self.components.keys().all(|(t, lower)| {
            if *t < self.base.dim() {
                lower.len() == 1
            } else {
                lower.len() == 2
            }
        })
    }

    /// `ξ^α((−1)^{ã(α̃+1)} ∂Q_α^a/∂x^a + Q^β_{αβ})`.
    pub fn lie_formula(&self) -> Result<GradedElem> {
        let mut acc = GradedElem::zero(&self.chart);
        for alpha in 0..self.fibre_dim() {
            let xi = GradedElem::coord_at(&self.chart, self.fibre_index(alpha));
            let mut inner = GradedElem::zero(&self.chart);
            for a in 0..self.base.dim() {
                if let Some(q) = self.component(a, &[alpha]) {
                    let d = q.left_partial(a).embed(&self.chart)?;
                    // α̃ + 1 is the parity of ξ^α
                    let flip = self.chart.parity(a).is_odd() && self.xi_parity(alpha).is_odd();
                    inner = if flip { &inner - &d } else { &inner + &d };
                }
            }
            for beta in 0..self.fibre_dim() {
                if let Some(q) = self.component(self.fibre_index(beta), &[alpha, beta]) {
                    inner = &inner + &q.embed(&self.chart)?;
                }
            }
            acc = &acc + &(&xi * &inner);
        }
        Ok(acc)
    }
}

/// Every distinct ordering of `items` together with the Koszul sign relating
/// the ξ-product in that order to the product in the given order; 0 when the
/// product vanishes (a repeated odd factor).
fn orderings(items: &[usize], parity: impl Fn(usize) -> Parity) -> Vec<(Vec<usize>, i64)> {
    let repeated_odd = items
        .iter()
        .enumerate()
        .any(|(i, a)| parity(*a).is_odd() && items[..i].contains(a));
    let mut out: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut positions: Vec<usize> = (0..items.len()).collect();
    loop {
        let perm: Vec<usize> = positions.iter().map(|&p| items[p]).collect();
        if !out.iter().any(|(p, _)| *p == perm) {
            // sign of sorting `positions` back, counting odd/odd transpositions
            let mut sign = 1;
            for i in 0..positions.len() {
                for j in i + 1..positions.len() {
                    if positions[i] > positions[j]
                        && parity(items[positions[i]]).is_odd()
                        && parity(items[positions[j]]).is_odd()
                    {
                        sign = -sign;
                    }
                }
            }
            out.push((perm, if repeated_odd { 0 } else { sign }));
        }
        if !next_permutation(&mut positions) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// `d_A` for Lie-algebroid data; checks the axioms (`d_A² = 0`) and the
/// displayed representative.
pub fn lie_algebroid(data: &AlgebroidData) -> Result<VectorField> {
    if !data.is_lie_type() {
        return Err(Error::InvalidStructure(
            "Lie algebroid data may only have anchor and bracket components".into(),
        ));
    }
    let q = data.assemble()?;
    if !is_homological(&q) {
        return Err(Error::NotHomological);
    }
    if local_rep(&q)? != data.lie_formula()? {
        return Err(Error::InvalidStructure("local representative disagrees with the Lie algebroid formula".into()));
    }
    Ok(q)
}

/// `d_A` for general L∞ data; checks `d_A² = 0`.
pub fn l_infinity_algebroid(data: &AlgebroidData) -> Result<VectorField> {
    let q = data.assemble()?;
    if !is_homological(&q) {
        return Err(Error::NotHomological);
    }
    Ok(q)
}

/// `φ_{d_A}`, cross-checked against the displayed L∞ formula.
pub fn l_infinity_local_rep(data: &AlgebroidData) -> Result<GradedElem> {
    let q = l_infinity_algebroid(data)?;
    let phi = local_rep(&q)?;
    if phi != data.l_infinity_formula()? {
        return Err(Error::InvalidStructure("local representative disagrees with the L-infinity formula".into()));
    }
    Ok(phi)
}

/// Bi-weight of a field with respect to the chart's coordinate weights
/// (unweighted coordinates count as `(0,0)`); `None` if not homogeneous.
/// The zero field reports `Some((0,0))`.
pub fn bi_weight(x: &VectorField) -> Option<(i64, i64)> {
    let chart = x.chart();
    let w = |i: usize| {
        let (p, q) = chart.coords()[i].weight.unwrap_or((0, 0));
        (p as i64, q as i64)
    };
    let mut found: Option<(i64, i64)> = None;
    for (t, comp) in x.components().iter().enumerate() {
        for (m, _) in comp.terms() {
            let mut acc = (-w(t).0, -w(t).1);
            for (i, &e) in m.exps().iter().enumerate() {
                acc.0 += w(i).0 * e as i64;
                acc.1 += w(i).1 * e as i64;
            }
            match found {
                None => found = Some(acc),
                Some(f) if f != acc => return None,
                _ => {}
            }
        }
    }
    Some(found.unwrap_or((0, 0)))
}

/// Mehta's Q-algebroid: `d_A + Ξ` for a Lie algebroid `d_A` (weight 1 in the
/// fibre) and a commuting homological `Ξ` of weight 0.
pub fn q_algebroid_sum(d_a: &VectorField, xi: &VectorField) -> Result<VectorField> {
    for q in [d_a, xi] {
        if !is_homological(q) {
            return Err(Error::NotHomological);
        }
    }
    if !d_a.is_zero() && bi_weight(d_a).map(|w| w.1) != Some(1) {
        return Err(Error::InvalidStructure("d_A must have fibre weight 1".into()));
    }
    if !xi.is_zero() && bi_weight(xi).map(|w| w.1) != Some(0) {
        return Err(Error::InvalidStructure("Ξ must have fibre weight 0".into()));
    }
    if !d_a.bracket(xi)?.is_zero() {
        return Err(Error::NotCommuting("[d_A, Ξ] ≠ 0".into()));
    }
    d_a.try_add(xi)
}

/// The displayed Q-algebroid representative
/// `(∂_aQ^a + Q_α^α) + ξ^α((−1)^{ã(α̃+1)} ∂_aQ_α^a + Q^β_{αβ})`,
/// reading `Q^a`, `Q_α^γ` from `xi_data` and the rest from `algebroid`.
pub fn q_algebroid_formula(algebroid: &AlgebroidData, xi_data: &AlgebroidData) -> Result<GradedElem> {
    algebroid.chart().ensure_same(xi_data.chart(), "Q-algebroid data")?;
    let chart = algebroid.chart();
    let mut acc = algebroid.lie_formula()?;
    for a in 0..xi_data.base_dim() {
        if let Some(q) = xi_data.component(a, &[]) {
            acc = &acc + &q.left_partial(a).embed(chart)?;
        }
    }
    for alpha in 0..xi_data.fibre_dim() {
        if let Some(q) = xi_data.component(xi_data.fibre_index(alpha), &[alpha]) {
            acc = &acc + &q.embed(chart)?;
        }
    }
    Ok(acc)
}

/// Plain coordinate divergence of assembled data, homological or not.
pub fn assembled_divergence(data: &AlgebroidData) -> Result<GradedElem> {
    Ok(coordinate_divergence(&data.assemble()?))
}

/// Structure constants as exact integers, for the common integral case.
pub fn structure(entries: &[(usize, usize, usize, i64)]) -> Vec<(usize, usize, usize, Rational)> {
    entries.iter().map(|&(a, b, c, k)| (a, b, c, int(k))).collect()
}
