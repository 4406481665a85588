//! Modular classes: local representatives, divergence representatives,
//! closedness, bounded exactness decisions, relative and inclusion classes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{monomials, Chart, ChartMorphism, Coord, GradedElem, Parity};
use crate::berezin::{coordinate_divergence, divergence, BerezinVolume};
use crate::error::{Error, Result};
use crate::geometry::{is_homological, is_q_morphism, VectorField};
use crate::linsolve::Echelon;

fn require_homological(q: &VectorField) -> Result<()> {
    if is_homological(q) {
        Ok(())
    } else {
        Err(Error::NotHomological)
    }
}

/// `φ_Q = Σ_a ∂Q^a/∂x^a`, the divergence for the coordinate volume.
pub fn local_rep(q: &VectorField) -> Result<GradedElem> {
    require_homological(q)?;
    Ok(coordinate_divergence(q))
}

/// `Div_ρ Q`, a representative of the modular class of `Q`.
pub fn modular_rep(q: &VectorField, rho: &BerezinVolume) -> Result<GradedElem> {
    require_homological(q)?;
    let rep = divergence(q, rho)?;
    if !q.apply(&rep)?.is_zero() {
        return Err(Error::InvalidStructure("divergence of a homological field is not closed".into()));
    }
    Ok(rep)
}

pub fn is_closed(f: &GradedElem, q: &VectorField) -> Result<bool> {
    Ok(q.apply(f)?.is_zero())
}

/// Outcome of a bounded search for `g` with `Q(g) = f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactnessVerdict {
    Exact(GradedElem),
    /// No witness of even degree `≤ bound`; `complete` when the search space
    /// is the whole (finite-dimensional) function space.
    NoWitnessUpToDegree { bound: u32, complete: bool },
}

/// Machine-readable form of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictRecord {
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub bound: u32,
    pub complete: bool,
}

impl ExactnessVerdict {
    pub fn is_exact(&self) -> bool {
        matches!(self, ExactnessVerdict::Exact(_))
    }

    pub fn witness(&self) -> Option<&GradedElem> {
        match self {
            ExactnessVerdict::Exact(w) => Some(w),
            _ => None,
        }
    }

    /// `bound` is the degree bound the query was run with.
    pub fn record(&self, bound: u32) -> VerdictRecord {
        match self {
            ExactnessVerdict::Exact(w) => VerdictRecord {
                status: "exact".into(),
                witness: Some(w.to_string()),
                bound,
                complete: true,
            },
            ExactnessVerdict::NoWitnessUpToDegree { bound, complete } => VerdictRecord {
                status: "no-witness".into(),
                witness: None,
                bound: *bound,
                complete: *complete,
            },
        }
    }
}

/// Decide whether the closed element `f` is `Q`-exact, searching over
/// witnesses of even degree at most `degree_bound` (capped by the truncation).
pub fn solve_exactness(f: &GradedElem, q: &VectorField, degree_bound: u32) -> Result<ExactnessVerdict> {
    q.chart().ensure_same(f.chart(), "exactness")?;
    let pf = f.homogeneous_parity("exactness target")?;
    if !is_closed(f, q)? {
        return Err(Error::NotClosed);
    }
    let chart = q.chart();
    if f.is_zero() {
        return Ok(ExactnessVerdict::Exact(GradedElem::zero(chart)));
    }
    let bound = degree_bound.min(chart.truncation());
    let target_parity = pf + q.parity();
    let basis: Vec<_> = monomials(chart.dim(), chart.odd_mask(), bound, u32::MAX)
        .into_iter()
        .filter(|m| m.parity_bit() == target_parity.bit())
        .collect();
    let mut echelon = Echelon::new();
    for (i, m) in basis.iter().enumerate() {
        let g = GradedElem::from_terms(chart, [(m.exps().to_vec(), crate::algebra::int(1))]);
        let image = q.apply_unchecked(&g);
        let vector: BTreeMap<_, _> = image.terms().map(|(k, v)| (k.clone(), v.clone())).collect();
        if !vector.is_empty() {
            echelon.insert(i, vector);
        }
    }
    let target: BTreeMap<_, _> = f.terms().map(|(k, v)| (k.clone(), v.clone())).collect();
    match echelon.solve(target) {
        Some(combo) => {
            let witness = GradedElem::from_terms(
                chart,
                combo.into_iter().map(|(i, c)| (basis[i].exps().to_vec(), c)),
            );
            debug_assert_eq!(&q.apply_unchecked(&witness), f);
            Ok(ExactnessVerdict::Exact(witness))
        }
        None => Ok(ExactnessVerdict::NoWitnessUpToDegree {
            bound,
            complete: !chart.has_even_coords(),
        }),
    }
}

/// Equality of the classes of two closed elements.
pub fn classes_equal(f1: &GradedElem, f2: &GradedElem, q: &VectorField, bound: u32) -> Result<ExactnessVerdict> {
    f1.chart().ensure_same(f2.chart(), "classes_equal")?;
    solve_exactness(&(f1 - f2), q, bound)
}

/// `Div_{ρ₁}Q₁ − ψ*(Div_{ρ₂}Q₂)` for a Q-morphism `ψ`.
pub fn relative_rep(
    psi: &ChartMorphism,
    q1: &VectorField,
    q2: &VectorField,
    rho1: &BerezinVolume,
    rho2: &BerezinVolume,
) -> Result<GradedElem> {
    if !is_q_morphism(psi, q1, q2)? {
        return Err(Error::NotQMorphism("ψ* Q₂ ≠ Q₁ ψ*".into()));
    }
    let upstairs = divergence(q1, rho1)?;
    let downstairs = divergence(q2, rho2)?.substitute(psi)?;
    Ok(&upstairs - &downstairs)
}

/// Adapted coordinates `(x, y)` on an ambient chart with the sub-supermanifold `{y = 0}`.
#[derive(Clone, Debug)]
pub struct Submanifold {
    ambient: Chart,
    boundary: Chart,
    boundary_idx: Vec<usize>,
    interior_idx: Vec<usize>,
    inclusion: ChartMorphism,
}

impl Submanifold {
    pub fn new(ambient: &Chart, boundary: &[&str], interior: &[&str]) -> Result<Self> {
        let boundary_idx = boundary.iter().map(|n| ambient.index_of(n)).collect::<Result<Vec<_>>>()?;
        let interior_idx = interior.iter().map(|n| ambient.index_of(n)).collect::<Result<Vec<_>>>()?;
        let mut all: Vec<usize> = boundary_idx.iter().chain(&interior_idx).copied().collect();
        all.sort_unstable();
        all.dedup();
        if all.len() != ambient.dim() || all.len() != boundary.len() + interior.len() {
            return Err(Error::InvalidChart("boundary and interior coordinates must partition the chart".into()));
        }
        let coords: Vec<Coord> = boundary_idx.iter().map(|&i| ambient.coords()[i].clone()).collect();
        let sub = Chart::new(coords, ambient.truncation())?;
        let images = (0..ambient.dim())
            .map(|i| match boundary_idx.iter().position(|&b| b == i) {
                Some(k) => GradedElem::coord_at(&sub, k),
                None => GradedElem::zero(&sub),
            })
            .collect();
        let inclusion = ChartMorphism::new(&sub, ambient, images)?;
        Ok(Submanifold {
            ambient: ambient.clone(),
            boundary: sub,
            boundary_idx,
            interior_idx,
            inclusion,
        })
    }

    pub fn ambient(&self) -> &Chart {
        &self.ambient
    }

    pub fn chart(&self) -> &Chart {
        &self.boundary
    }

    /// The inclusion `j`, as the pullback `x ↦ x, y ↦ 0`.
    pub fn inclusion(&self) -> &ChartMorphism {
        &self.inclusion
    }

    pub fn restrict(&self, f: &GradedElem) -> Result<GradedElem> {
        f.substitute(&self.inclusion)
    }

    /// `Q_N`, the restriction of a field tangent to `{y = 0}`.
    pub fn restrict_field(&self, q: &VectorField) -> Result<VectorField> {
        q.chart().ensure_same(&self.ambient, "restrict field")?;
        for &i in &self.interior_idx {
            if !self.restrict(q.component(i))?.is_zero() {
                return Err(Error::InvalidStructure(format!(
                    "field is not tangent to the submanifold: component along `{}` does not vanish at y = 0",
                    self.ambient.name(i)
                )));
            }
        }
        let comps = self
            .boundary_idx
            .iter()
            .map(|&i| self.restrict(q.component(i)))
            .collect::<Result<Vec<_>>>()?;
        VectorField::new(&self.boundary, q.parity(), comps)
    }

    /// `𝔸_β^α = ∂Q^α/∂y^β |_{y=0}`, rows indexed by `β`.
    pub fn odd_matrix(&self, q: &VectorField) -> Result<OddMatrix> {
        self.restrict_field(q)?;
        let entries = self
            .interior_idx
            .iter()
            .map(|&beta| {
                self.interior_idx
                    .iter()
                    .map(|&alpha| self.restrict(&q.component(alpha).left_partial(beta)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let parities = self.interior_idx.iter().map(|&i| self.ambient.parity(i)).collect();
        OddMatrix::new(&self.boundary, parities, entries)
    }
}

/// `φ_j = −Σ_α ∂Q_M^α/∂y^α |_{y=0}`, over the boundary chart.
pub fn inclusion_rep(q_m: &VectorField, sub: &Submanifold) -> Result<GradedElem> {
    require_homological(q_m)?;
    let q_n = sub.restrict_field(q_m)?;
    require_homological(&q_n)?;
    let mut acc = GradedElem::zero(sub.chart());
    for &alpha in &sub.interior_idx {
        acc = &acc - &sub.restrict(&q_m.component(alpha).left_partial(alpha))?;
    }
    Ok(acc)
}

/// A square matrix `𝔸_β^α` of odd total parity: entry parity `α̃ + β̃ + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OddMatrix {
    chart: Chart,
    parities: Vec<Parity>,
    entries: Vec<Vec<GradedElem>>,
}

impl OddMatrix {
    pub fn new(chart: &Chart, parities: Vec<Parity>, entries: Vec<Vec<GradedElem>>) -> Result<Self> {
        let n = parities.len();
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension(format!("odd matrix must be {n}x{n}")));
        }
        for (b, row) in entries.iter().enumerate() {
            for (a, e) in row.iter().enumerate() {
                e.chart().ensure_same(chart, "odd matrix entry")?;
                let want = parities[a] + parities[b] + Parity::Odd;
                if !e.has_parity(want) {
                    return Err(Error::ParityMismatch(format!("entry ({b},{a}) must be {want}")));
                }
            }
        }
        Ok(OddMatrix {
            chart: chart.clone(),
            parities,
            entries,
        })
    }

    pub fn zero(chart: &Chart, parities: Vec<Parity>) -> Self {
        let n = parities.len();
        OddMatrix {
            chart: chart.clone(),
            parities,
            entries: vec![vec![GradedElem::zero(chart); n]; n],
        }
    }

    pub fn entry(&self, beta: usize, alpha: usize) -> &GradedElem {
        &self.entries[beta][alpha]
    }

    pub fn size(&self) -> usize {
        self.parities.len()
    }
}

/// `Σ_α 𝔸_α^α`; with this normalisation `inclusion_rep = −supertrace_odd(𝔸)`.
pub fn supertrace_odd(m: &OddMatrix) -> GradedElem {
    let mut acc = GradedElem::zero(&m.chart);
    for i in 0..m.size() {
        acc = &acc + &m.entries[i][i];
    }
    acc
}
