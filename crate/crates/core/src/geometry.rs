//! Vector fields as graded derivations, the super Lie bracket, homological
//! checks and Q-morphism checks.

use std::fmt;

use crate::algebra::{Chart, ChartMorphism, GradedElem, Parity, Rational};
use crate::error::{Error, Result};

/// A homogeneous vector field `X = X^a ∂/∂x^a` of declared parity.
///
/// Component `X^a` has parity `X̃ + ã` (or is zero).
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    chart: Chart,
    parity: Parity,
    components: Vec<GradedElem>,
}

impl VectorField {
    pub fn new(chart: &Chart, parity: Parity, components: Vec<GradedElem>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Dimension(format!(
                "vector field needs {} components, got {}",
                chart.dim(),
                components.len()
            )));
        }
        for (a, comp) in components.iter().enumerate() {
            comp.chart().ensure_same(chart, "vector field component")?;
            if !comp.has_parity(parity + chart.parity(a)) {
                return Err(Error::ParityMismatch(format!(
                    "component along `{}` of a {} field must be {}",
                    chart.name(a),
                    parity,
                    parity + chart.parity(a)
                )));
            }
        }
        Ok(VectorField {
            chart: chart.clone(),
            parity,
            components,
        })
    }

    pub fn zero(chart: &Chart, parity: Parity) -> Self {
        VectorField {
            chart: chart.clone(),
            parity,
            components: vec![GradedElem::zero(chart); chart.dim()],
        }
    }

    /// Coordinate vector field `∂/∂x^a`.
    pub fn basis(chart: &Chart, index: usize) -> Self {
        let mut components = vec![GradedElem::zero(chart); chart.dim()];
        components[index] = GradedElem::one(chart);
        VectorField {
            chart: chart.clone(),
            parity: chart.parity(index),
            components,
        }
    }

    /// Field from `(coordinate name, component)` pairs; other components vanish.
    pub fn from_named(chart: &Chart, parity: Parity, named: &[(&str, GradedElem)]) -> Result<Self> {
        let mut components = vec![GradedElem::zero(chart); chart.dim()];
        for (name, comp) in named {
            let a = chart.index_of(name)?;
            components[a] = &components[a] + comp;
        }
        VectorField::new(chart, parity, components)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn components(&self) -> &[GradedElem] {
        &self.components
    }

    pub fn component(&self, index: usize) -> &GradedElem {
        &self.components[index]
    }

    pub fn component_named(&self, name: &str) -> Result<&GradedElem> {
        Ok(&self.components[self.chart.index_of(name)?])
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(GradedElem::is_zero)
    }

    /// `X(f) = Σ_a X^a ∂_a f`.
    pub fn apply(&self, f: &GradedElem) -> Result<GradedElem> {
        self.chart.ensure_same(f.chart(), "apply")?;
        Ok(self.apply_unchecked(f))
    }

    pub(crate) fn apply_unchecked(&self, f: &GradedElem) -> GradedElem {
        let mut out = GradedElem::zero(&self.chart);
        for (a, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let d = f.left_partial(a);
            if !d.is_zero() {
                out = &out + &(comp * &d);
            }
        }
        out
    }

    /// Super commutator `[X,Y]^a = X(Y^a) − (−1)^{X̃Ỹ} Y(X^a)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        self.chart.ensure_same(&other.chart, "bracket")?;
        let sign = self.parity.koszul(other.parity);
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(xa, ya)| {
                let xy = self.apply_unchecked(ya);
                let yx = other.apply_unchecked(xa);
                if sign < 0 {
                    &xy + &yx
                } else {
                    &xy - &yx
                }
            })
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            parity: self.parity + other.parity,
            components,
        })
    }

    pub fn try_add(&self, other: &VectorField) -> Result<VectorField> {
        self.chart.ensure_same(&other.chart, "field sum")?;
        if self.parity != other.parity && !self.is_zero() && !other.is_zero() {
            return Err(Error::Inhomogeneous(
                "sum of an even and an odd field; use MixedField".into(),
            ));
        }
        let parity = if self.is_zero() { other.parity } else { self.parity };
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a + b)
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            parity,
            components,
        })
    }

    pub fn try_sub(&self, other: &VectorField) -> Result<VectorField> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        self.scale(&crate::algebra::int(-1))
    }

    pub fn scale(&self, q: &Rational) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            parity: self.parity,
            components: self.components.iter().map(|c| c.scale(q)).collect(),
        }
    }

    /// `f·X` for homogeneous `f`.
    pub fn mul_left(&self, f: &GradedElem) -> Result<VectorField> {
        self.chart.ensure_same(f.chart(), "f*X")?;
        let fp = f.homogeneous_parity("multiplier")?;
        Ok(VectorField {
            chart: self.chart.clone(),
            parity: self.parity + fp,
            components: self.components.iter().map(|c| f * c).collect(),
        })
    }

    /// Extend to a chart containing this one (by coordinate name); new components vanish.
    pub fn embed(&self, target: &Chart) -> Result<VectorField> {
        let mut components = vec![GradedElem::zero(target); target.dim()];
        for (a, comp) in self.components.iter().enumerate() {
            let b = target.index_of(self.chart.name(a))?;
            components[b] = comp.embed(target)?;
        }
        VectorField::new(target, self.parity, components)
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (a, comp) in self.components.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            let name = self.chart.name(a);
            if comp.num_terms() > 1 {
                if !first {
                    f.write_str(" + ")?;
                }
                write!(f, "({comp}) * d/d{name}")?;
            } else {
                let text = comp.to_string();
                match (first, text.strip_prefix('-')) {
                    (false, Some(rest)) => write!(f, " - {rest} * d/d{name}")?,
                    (false, None) => write!(f, " + {text} * d/d{name}")?,
                    (true, _) => write!(f, "{text} * d/d{name}")?,
                }
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField[{}]({})", self.parity, self)
    }
}

/// A possibly inhomogeneous vector field, stored as its even and odd parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedField {
    pub even: VectorField,
    pub odd: VectorField,
}

impl MixedField {
    /// Splits arbitrary components into their even and odd parts.
    pub fn from_components(chart: &Chart, components: Vec<GradedElem>) -> Result<Self> {
        if components.len() != chart.dim() {
            return Err(Error::Dimension("component count".into()));
        }
        let mut even = Vec::with_capacity(chart.dim());
        let mut odd = Vec::with_capacity(chart.dim());
        for (a, c) in components.iter().enumerate() {
            c.chart().ensure_same(chart, "vector field component")?;
            // an even field has components of parity ã
            even.push(c.part(chart.parity(a)));
            odd.push(c.part(chart.parity(a).flip()));
        }
        Ok(MixedField {
            even: VectorField::new(chart, Parity::Even, even)?,
            odd: VectorField::new(chart, Parity::Odd, odd)?,
        })
    }

    pub fn from_field(x: &VectorField) -> Self {
        let zero = VectorField::zero(x.chart(), x.parity().flip());
        match x.parity() {
            Parity::Even => MixedField {
                even: x.clone(),
                odd: zero,
            },
            Parity::Odd => MixedField {
                even: zero,
                odd: x.clone(),
            },
        }
    }

    pub fn chart(&self) -> &Chart {
        self.even.chart()
    }

    /// The homogeneous field when one part vanishes.
    pub fn homogeneous(&self) -> Option<&VectorField> {
        match (self.even.is_zero(), self.odd.is_zero()) {
            (_, true) => Some(&self.even),
            (true, false) => Some(&self.odd),
            (false, false) => None,
        }
    }

    pub fn components(&self) -> Vec<GradedElem> {
        self.even
            .components()
            .iter()
            .zip(self.odd.components())
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn apply(&self, f: &GradedElem) -> Result<GradedElem> {
        Ok(&self.even.apply(f)? + &self.odd.apply(f)?)
    }

    /// Bilinear extension of the super commutator.
    pub fn bracket(&self, other: &MixedField) -> Result<MixedField> {
        let ee = self.even.bracket(&other.even)?;
        let oo = self.odd.bracket(&other.odd)?;
        let eo = self.even.bracket(&other.odd)?;
        let oe = self.odd.bracket(&other.even)?;
        Ok(MixedField {
            even: ee.try_add(&oo)?,
            odd: eo.try_add(&oe)?,
        })
    }

    pub fn try_add(&self, other: &MixedField) -> Result<MixedField> {
        Ok(MixedField {
            even: self.even.try_add(&other.even)?,
            odd: self.odd.try_add(&other.odd)?,
        })
    }
}

impl fmt::Display for MixedField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        let chart = self.chart();
        let mut first = true;
        for (a, comp) in comps.iter().enumerate() {
            if comp.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if comp.num_terms() > 1 {
                write!(f, "({}) * d/d{}", comp, chart.name(a))?;
            } else {
                write!(f, "{} * d/d{}", comp, chart.name(a))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// `Q` is odd and `Q(Q^b) = 0` for every coordinate `b`.
pub fn is_homological(q: &VectorField) -> bool {
    if q.is_zero() {
        return true;
    }
    q.parity().is_odd() && q.components().iter().all(|qb| q.apply_unchecked(qb).is_zero())
}

/// `Q₁(ψ*y^α) = ψ*(Q₂ y^α)` for every target coordinate.
pub fn is_q_morphism(psi: &ChartMorphism, q1: &VectorField, q2: &VectorField) -> Result<bool> {
    psi.source().ensure_same(q1.chart(), "source field")?;
    psi.target().ensure_same(q2.chart(), "target field")?;
    for (alpha, image) in psi.images().iter().enumerate() {
        let lhs = q1.apply_unchecked(image);
        let rhs = q2.component(alpha).substitute(psi)?;
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}
