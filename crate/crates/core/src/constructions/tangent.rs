use crate::algebra::{rat, Chart, ChartMorphism, GradedElem, Parity};
use crate::brackets::fibred_chart;
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};

/// The antitangent chart `(x^a, dx^a)` over a base chart, `dx^a` of parity `ã + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antitangent {
    base: Chart,
    chart: Chart,
}

impl Antitangent {
    /// Differentials are named `d<name>`. A weighted base coordinate of
    /// bi-weight `(p, q)` gives a differential of bi-weight `(p + 1, q)`.
    pub fn new(base: &Chart) -> Result<Self> {
        let chart = fibred_chart(base, Parity::Odd, |n| format!("d{n}"))?;
        let n = base.dim();
        let chart = if base.coords().iter().any(|c| c.weight.is_some()) {
            let mut coords = chart.coords().to_vec();
            for a in 0..n {
                if let Some((p, q)) = base.coords()[a].weight {
                    coords[n + a] = coords[n + a].clone().with_weight((p + 1, q));
                }
            }
            Chart::new(coords, base.truncation())?
        } else {
            chart
        };
        Ok(Antitangent {
            base: base.clone(),
            chart,
        })
    }

    pub fn base(&self) -> &Chart {
        &self.base
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn x(&self, a: usize) -> GradedElem {
        GradedElem::coord_at(&self.chart, a)
    }

    pub fn dx(&self, a: usize) -> GradedElem {
        GradedElem::coord_at(&self.chart, self.dim() + a)
    }

    pub fn lift(&self, f: &GradedElem) -> Result<GradedElem> {
        f.chart().ensure_same(&self.base, "base function")?;
        f.embed(&self.chart)
    }

    /// `d = dx^a ∂/∂x^a`.
    pub fn de_rham(&self) -> VectorField {
        let n = self.dim();
        let mut comps = vec![GradedElem::zero(&self.chart); 2 * n];
        for (a, c) in comps.iter_mut().take(n).enumerate() {
            *c = self.dx(a);
        }
        VectorField::new(&self.chart, Parity::Odd, comps).expect("de Rham field is well formed")
    }

    /// `i_X = (−1)^{X̃} X^a ∂/∂dx^a`.
    pub fn interior(&self, x: &VectorField) -> Result<VectorField> {
        x.chart().ensure_same(&self.base, "interior product")?;
        let n = self.dim();
        let mut comps = vec![GradedElem::zero(&self.chart); 2 * n];
        for a in 0..n {
            let c = self.lift(x.component(a))?;
            comps[n + a] = if x.parity().is_odd() { -c } else { c };
        }
        VectorField::new(&self.chart, x.parity().flip(), comps)
    }

    /// `X^a ∂/∂x^a + (−1)^{X̃} dx^b ∂X^a/∂x^b ∂/∂dx^a`.
    pub fn lie_derivative_closed_form(&self, x: &VectorField) -> Result<VectorField> {
        x.chart().ensure_same(&self.base, "Lie derivative")?;
        let n = self.dim();
        let mut comps = vec![GradedElem::zero(&self.chart); 2 * n];
        for a in 0..n {
            let xa = self.lift(x.component(a))?;
            let mut acc = GradedElem::zero(&self.chart);
            for b in 0..n {
                acc = &acc + &(&self.dx(b) * &xa.left_partial(b));
            }
            comps[n + a] = if x.parity().is_odd() { -acc } else { acc };
            comps[a] = xa;
        }
        VectorField::new(&self.chart, x.parity(), comps)
    }

    /// `L_X = [d, i_X]`, cross-checked against the closed form.
    pub fn lie_derivative_lift(&self, x: &VectorField) -> Result<VectorField> {
        let lifted = self.de_rham().bracket(&self.interior(x)?)?;
        if lifted != self.lie_derivative_closed_form(x)? {
            return Err(Error::InvalidStructure(
                "[d, i_X] disagrees with the closed-form Lie derivative".into(),
            ));
        }
        Ok(lifted)
    }

    /// The anchor `a_Q : M → ΠTM`, `x^a ↦ x^a`, `dx^b ↦ Q^b`.
    pub fn anchor(&self, q: &VectorField) -> Result<ChartMorphism> {
        q.chart().ensure_same(&self.base, "anchor")?;
        if !is_homological(q) {
            return Err(Error::NotHomological);
        }
        let n = self.dim();
        let images = (0..2 * n)
            .map(|i| {
                if i < n {
                    GradedElem::coord_at(&self.base, i)
                } else {
                    q.component(i - n).clone()
                }
            })
            .collect();
        ChartMorphism::new(&self.base, &self.chart, images)
    }

    /// `e^{−i_Q} d e^{i_Q} f`.
    pub fn mqk_conjugate(&self, q: &VectorField, f: &GradedElem) -> Result<GradedElem> {
        if !is_homological(q) {
            return Err(Error::NotHomological);
        }
        f.chart().ensure_same(&self.chart, "MQK")?;
        let iq = self.interior(q)?;
        let neg = iq.neg();
        let d = self.de_rham();
        let up = exp_action(&iq, f)?;
        exp_action(&neg, &d.apply(&up)?)
    }
}

/// `e^X f = Σ X^k f / k!` for a field that strictly lowers some degree; the
/// series is cut when a term vanishes.
pub(crate) fn exp_action(x: &VectorField, f: &GradedElem) -> Result<GradedElem> {
    let chart = f.chart();
    let limit = chart.dim() as u32 + chart.truncation() + 2;
    let mut term = f.clone();
    let mut acc = f.clone();
    for k in 1..=limit {
        term = x.apply(&term)?.scale(&rat(1, k as i64));
        if term.is_zero() {
            return Ok(acc);
        }
        acc = &acc + &term;
    }
    Err(Error::TruncationExceeded("exponential series did not terminate".into()))
}

pub fn antitangent(base: &Chart) -> Result<Chart> {
    Ok(Antitangent::new(base)?.chart)
}

pub fn de_rham(base: &Chart) -> Result<VectorField> {
    Ok(Antitangent::new(base)?.de_rham())
}

pub fn interior(x: &VectorField) -> Result<VectorField> {
    Antitangent::new(x.chart())?.interior(x)
}

pub fn lie_derivative_lift(q: &VectorField) -> Result<VectorField> {
    Antitangent::new(q.chart())?.lie_derivative_lift(q)
}

pub fn anchor(q: &VectorField) -> Result<ChartMorphism> {
    Antitangent::new(q.chart())?.anchor(q)
}

/// `f` lives on the antitangent chart of `Q`'s base.
pub fn mqk_conjugate(q: &VectorField, f: &GradedElem) -> Result<GradedElem> {
    Antitangent::new(q.chart())?.mqk_conjugate(q, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::int;
    use crate::geometry::is_q_morphism;
    use crate::modular::local_rep;

    #[test]
    fn antitangent_parities() {
        let t = Antitangent::new(&Chart::from_names(&["x"], &[], 6).unwrap()).unwrap();
        assert_eq!(t.chart().name(1), "dx");
        assert_eq!(t.chart().parity(1), Parity::Odd);
        let t = Antitangent::new(&Chart::from_names(&[], &["t"], 6).unwrap()).unwrap();
        assert_eq!(t.chart().parity(1), Parity::Even);
        let t = Antitangent::new(&Chart::from_names(&["x"], &["t"], 6).unwrap()).unwrap();
        assert_eq!(t.chart().superdim(), (2, 2));
    }

    #[test]
    fn de_rham_examples() {
        let base = Chart::from_names(&["x"], &[], 6).unwrap();
        let t = Antitangent::new(&base).unwrap();
        let d = t.de_rham();
        assert_eq!(d.to_string(), "dx * d/dx");
        assert!(is_homological(&d));
        let x2 = t.x(0).pow(2);
        assert_eq!(d.apply(&x2).unwrap(), (&t.x(0) * &t.dx(0)).scale(&int(2)));
        assert!(local_rep(&d).unwrap().is_zero());
    }

    #[test]
    fn interior_examples() {
        let base = Chart::from_names(&["x"], &[], 6).unwrap();
        let t = Antitangent::new(&base).unwrap();
        let ix = t.interior(&VectorField::basis(&base, 0)).unwrap();
        assert_eq!(ix.component(1), &GradedElem::one(t.chart()));
        assert!(ix.apply(&t.x(0)).unwrap().is_zero());
        assert_eq!(ix.apply(&t.dx(0)).unwrap(), GradedElem::one(t.chart()));
    }

    #[test]
    fn lie_lift_examples() {
        let base = Chart::from_names(&["x"], &["t"], 6).unwrap();
        let t = Antitangent::new(&base).unwrap();
        let x = GradedElem::coord(&base, "x").unwrap();
        let th = GradedElem::coord(&base, "t").unwrap();
        let q = VectorField::from_named(&base, Parity::Odd, &[("x", &x * &th)]).unwrap();
        assert!(is_homological(&q));
        let l = t.lie_derivative_lift(&q).unwrap();
        assert!(is_homological(&l));
        assert!(local_rep(&l).unwrap().is_zero());
        assert!(t.de_rham().bracket(&l).unwrap().is_zero());
        let zero = VectorField::zero(&base, Parity::Odd);
        assert!(t.lie_derivative_lift(&zero).unwrap().is_zero());
        // even fields too
        let e = VectorField::from_named(&base, Parity::Even, &[("x", x.pow(2)), ("t", &x * &th)]).unwrap();
        t.lie_derivative_lift(&e).unwrap();
    }

    #[test]
    fn anchor_examples() {
        let base = Chart::from_names(&[], &["xi1", "xi2"], 6).unwrap();
        let xi = |n| GradedElem::coord(&base, n).unwrap();
        let q = VectorField::from_named(&base, Parity::Odd, &[("xi2", &xi("xi1") * &xi("xi2"))]).unwrap();
        let t = Antitangent::new(&base).unwrap();
        let a = t.anchor(&q).unwrap();
        assert!(is_q_morphism(&a, &q, &t.de_rham()).unwrap());
        let zero = VectorField::zero(&base, Parity::Odd);
        let a0 = t.anchor(&zero).unwrap();
        assert!(a0.image(2).is_zero());
        assert!(is_q_morphism(&a0, &zero, &t.de_rham()).unwrap());
    }

    #[test]
    fn mqk_examples() {
        let base = Chart::from_names(&["x"], &["t"], 6).unwrap();
        let t = Antitangent::new(&base).unwrap();
        let x = GradedElem::coord(&base, "x").unwrap();
        let th = GradedElem::coord(&base, "t").unwrap();
        let q = VectorField::from_named(&base, Parity::Odd, &[("x", &x * &th)]).unwrap();
        let lq = t.lie_derivative_lift(&q).unwrap();
        let sum = t.de_rham().try_add(&lq).unwrap();
        let f = t.x(0);
        assert_eq!(t.mqk_conjugate(&q, &f).unwrap(), sum.apply(&f).unwrap());
        assert_eq!(sum.apply(&f).unwrap(), &t.dx(0) + &t.lift(&(&x * &th)).unwrap());
        let g = &(&t.x(0) * &t.dx(1)) * &t.dx(0);
        assert_eq!(t.mqk_conjugate(&q, &g).unwrap(), sum.apply(&g).unwrap());
        let zero = VectorField::zero(&base, Parity::Odd);
        assert_eq!(t.mqk_conjugate(&zero, &g).unwrap(), t.de_rham().apply(&g).unwrap());
    }
}
