//! Canonical Poisson and Schouten brackets, Hamiltonian vector fields and the
//! BV-Laplacian.

use crate::algebra::{rat, Chart, Coord, GradedElem, Parity};
use crate::berezin::BerezinVolume;
use crate::error::{Error, Result};
use crate::geometry::VectorField;

/// Build `(x^a, y_a)` where the fibre names come from `name` and fibre parity
/// is `ã + shift`. Collisions with existing names get a `_2`, `_3`, … suffix.
pub(crate) fn fibred_chart(base: &Chart, shift: Parity, name: impl Fn(&str) -> String) -> Result<Chart> {
    let mut coords: Vec<Coord> = base.coords().to_vec();
    for c in base.coords() {
        let stem = name(&c.name);
        let mut candidate = stem.clone();
        let mut k = 2;
        while coords.iter().any(|o| o.name == candidate) {
            candidate = format!("{stem}_{k}");
            k += 1;
        }
        coords.push(Coord::new(candidate, c.parity + shift));
    }
    Chart::new(coords, base.truncation())
}

/// Cotangent chart `(x^a, p_a)` with `p_a` of parity `ã`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotangentChart {
    base: Chart,
    chart: Chart,
}

/// Anticotangent chart `(x^a, x*_a)` with `x*_a` of parity `ã + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnticotangentChart {
    base: Chart,
    chart: Chart,
}

macro_rules! fibred_accessors {
    ($t:ty) => {
        impl $t {
            pub fn base(&self) -> &Chart {
                &self.base
            }

            /// The full chart, base coordinates first.
            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn base_dim(&self) -> usize {
                self.base.dim()
            }

            /// Index of the fibre coordinate paired with base coordinate `a`.
            pub fn fibre_index(&self, a: usize) -> usize {
                self.base.dim() + a
            }

            pub fn x(&self, a: usize) -> GradedElem {
                GradedElem::coord_at(&self.chart, a)
            }

            pub fn fibre(&self, a: usize) -> GradedElem {
                GradedElem::coord_at(&self.chart, self.fibre_index(a))
            }

            /// Pull a base function up to the total chart.
            pub fn lift(&self, f: &GradedElem) -> Result<GradedElem> {
                f.chart().ensure_same(&self.base, "base function")?;
                f.embed(&self.chart)
            }

            fn check(&self, f: &GradedElem) -> Result<()> {
                f.chart().ensure_same(&self.chart, stringify!($t))
            }
        }
    };
}

fibred_accessors!(CotangentChart);
fibred_accessors!(AnticotangentChart);

impl CotangentChart {
    /// Fibre coordinates are named `p<name>`.
    pub fn new(base: &Chart) -> Result<Self> {
        Ok(CotangentChart {
            base: base.clone(),
            chart: fibred_chart(base, Parity::Even, |n| format!("p{n}"))?,
        })
    }

    pub fn p(&self, a: usize) -> GradedElem {
        self.fibre(a)
    }
}

impl AnticotangentChart {
    /// Fibre coordinates are named `<name>_star`.
    pub fn new(base: &Chart) -> Result<Self> {
        Ok(AnticotangentChart {
            base: base.clone(),
            chart: fibred_chart(base, Parity::Odd, |n| format!("{n}_star"))?,
        })
    }

    pub fn x_star(&self, a: usize) -> GradedElem {
        self.fibre(a)
    }
}

fn split(f: &GradedElem) -> [(Parity, GradedElem); 2] {
    [(Parity::Even, f.even_part()), (Parity::Odd, f.odd_part())]
}

fn signed(acc: GradedElem, term: GradedElem, negative: bool) -> GradedElem {
    if negative {
        &acc - &term
    } else {
        &acc + &term
    }
}

/// `{F,G} = (−1)^{ã(F̃+1)} ∂F/∂p_a ∂G/∂x^a − (−1)^{ãF̃} ∂F/∂x^a ∂G/∂p_a`,
/// extended bilinearly over the parity parts of `F`.
pub fn poisson(t: &CotangentChart, f: &GradedElem, g: &GradedElem) -> Result<GradedElem> {
    t.check(f)?;
    t.check(g)?;
    let mut out = GradedElem::zero(t.chart());
    for (pf, fp) in split(f) {
        if fp.is_zero() {
            continue;
        }
        for a in 0..t.base_dim() {
            let pa = t.chart().parity(a);
            let pi = t.fibre_index(a);
            let first = &fp.left_partial(pi) * &g.left_partial(a);
            out = signed(out, first, pa.is_odd() && pf.is_even());
            let second = &fp.left_partial(a) * &g.left_partial(pi);
            out = signed(out, second, !(pa.is_odd() && pf.is_odd()));
        }
    }
    Ok(out)
}

/// `⟦F,G⟧ = (−1)^{(ã+1)(F̃+1)} ∂F/∂x*_a ∂G/∂x^a − (−1)^{ã(F̃+1)} ∂F/∂x^a ∂G/∂x*_a`,
/// extended bilinearly over the parity parts of `F`.
pub fn schouten(t: &AnticotangentChart, f: &GradedElem, g: &GradedElem) -> Result<GradedElem> {
    t.check(f)?;
    t.check(g)?;
    let mut out = GradedElem::zero(t.chart());
    for (pf, fp) in split(f) {
        if fp.is_zero() {
            continue;
        }
        for a in 0..t.base_dim() {
            let pa = t.chart().parity(a);
            let si = t.fibre_index(a);
            let first = &fp.left_partial(si) * &g.left_partial(a);
            out = signed(out, first, pa.is_even() && pf.is_even());
            let second = &fp.left_partial(a) * &g.left_partial(si);
            out = signed(out, second, !(pa.is_odd() && pf.is_even()));
        }
    }
    Ok(out)
}

/// The derivation `F ↦ {S,F}` for homogeneous `S`.
pub fn hamiltonian_vf_even(t: &CotangentChart, s: &GradedElem) -> Result<VectorField> {
    t.check(s)?;
    let ps = s.homogeneous_parity("Hamiltonian")?;
    let n = t.base_dim();
    let mut comps = vec![GradedElem::zero(t.chart()); 2 * n];
    for a in 0..n {
        let pa = t.chart().parity(a);
        let pi = t.fibre_index(a);
        let dp = s.left_partial(pi);
        comps[a] = if pa.is_odd() && ps.is_even() { -dp } else { dp };
        let dx = s.left_partial(a);
        comps[pi] = if pa.is_odd() && ps.is_odd() { dx } else { -dx };
    }
    VectorField::new(t.chart(), ps, comps)
}

/// The derivation `F ↦ ⟦P,F⟧` for homogeneous `P` of either parity.
pub fn schouten_vf(t: &AnticotangentChart, p: &GradedElem) -> Result<VectorField> {
    t.check(p)?;
    let pp = p.homogeneous_parity("Schouten Hamiltonian")?;
    let n = t.base_dim();
    let mut comps = vec![GradedElem::zero(t.chart()); 2 * n];
    for a in 0..n {
        let pa = t.chart().parity(a);
        let si = t.fibre_index(a);
        let ds = p.left_partial(si);
        comps[a] = if pa.is_even() && pp.is_even() { -ds } else { ds };
        let dx = p.left_partial(a);
        comps[si] = if pa.is_odd() && pp.is_even() { dx } else { -dx };
    }
    VectorField::new(t.chart(), pp.flip(), comps)
}

/// `Q_P = ⟦P, •⟧ = (−1)^{ã+1}(∂P/∂x*_a ∂/∂x^a + ∂P/∂x^a ∂/∂x*_a)` for even `P`.
pub fn hamiltonian_vf_odd(t: &AnticotangentChart, p: &GradedElem) -> Result<VectorField> {
    t.check(p)?;
    if !p.has_parity(Parity::Even) {
        return Err(Error::ParityMismatch(
            "odd Hamiltonian vector fields need an even P; use the even lift for odd symbols".into(),
        ));
    }
    schouten_vf(t, p)
}

/// `Δ_ρP = (−1)^{ã+1} ∂/∂x^a(∂P/∂x*_a) + ⟦P, g/2⟧`, coordinate volume by default.
pub fn bv_laplacian(t: &AnticotangentChart, p: &GradedElem, volume: Option<&BerezinVolume>) -> Result<GradedElem> {
    t.check(p)?;
    let mut out = GradedElem::zero(t.chart());
    for a in 0..t.base_dim() {
        let term = p.left_partial(t.fibre_index(a)).left_partial(a);
        out = signed(out, term, t.chart().parity(a).is_even());
    }
    if let Some(rho) = volume {
        rho.chart().ensure_same(t.chart(), "BV volume")?;
        let half = rho.log_density().scale(&rat(1, 2));
        out = &out + &schouten(t, p, &half)?;
    }
    Ok(out)
}

/// First-order quantum master equation `ΔP = ⟦P, P₁⟧`, the formal unit `i`
/// being absorbed into `P₁`. Requires `⟦P,P⟧ = 0`.
pub fn first_order_qme_check(
    t: &AnticotangentChart,
    p: &GradedElem,
    p1: &GradedElem,
    volume: Option<&BerezinVolume>,
) -> Result<bool> {
    t.check(p)?;
    t.check(p1)?;
    if !p.has_parity(Parity::Even) || !p1.has_parity(Parity::Even) {
        return Err(Error::ParityMismatch("P and P1 must be even".into()));
    }
    if !schouten(t, p, p)?.is_zero() {
        return Err(Error::MasterEquation);
    }
    Ok(bv_laplacian(t, p, volume)? == schouten(t, p, p1)?)
}
