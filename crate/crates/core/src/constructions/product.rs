use crate::algebra::{Chart, ChartMorphism, Coord, GradedElem};
use crate::error::{Error, Result};
use crate::geometry::{is_homological, VectorField};

/// A Q-manifold product `(M₁ × M₂, Q₁ + Q₂)`.
#[derive(Clone, Debug)]
pub struct Product {
    pub chart: Chart,
    pub field: VectorField,
    /// Coordinates of the second factor that were renamed, as `(old, new)`.
    pub renamed: Vec<(String, String)>,
    first: ChartMorphism,
    second: ChartMorphism,
}

impl Product {
    /// Pullback along the projection to the first factor.
    pub fn first(&self) -> &ChartMorphism {
        &self.first
    }

    /// Pullback along the projection to the second factor.
    pub fn second(&self) -> &ChartMorphism {
        &self.second
    }

    /// Pull a function on a factor back to the product.
    pub fn pull_first(&self, f: &GradedElem) -> Result<GradedElem> {
        f.substitute(&self.first)
    }

    pub fn pull_second(&self, f: &GradedElem) -> Result<GradedElem> {
        f.substitute(&self.second)
    }
}

fn projection(product: &Chart, factor: &Chart, offset: usize) -> Result<ChartMorphism> {
    let images = (0..factor.dim())
        .map(|i| GradedElem::coord_at(product, offset + i))
        .collect();
    ChartMorphism::new(product, factor, images)
}

/// Push a field on a factor forward to the product, given the projection.
fn push(q: &VectorField, proj: &ChartMorphism, offset: usize) -> Result<VectorField> {
    let chart = proj.source();
    let mut comps = vec![GradedElem::zero(chart); chart.dim()];
    for (a, c) in q.components().iter().enumerate() {
        comps[offset + a] = c.substitute(proj)?;
    }
    VectorField::new(chart, q.parity(), comps)
}

/// Second-factor names colliding with the first get `_2`, `_3`, … suffixes.
pub fn product(q1: &VectorField, q2: &VectorField) -> Result<Product> {
    for q in [q1, q2] {
        if !is_homological(q) {
            return Err(Error::NotHomological);
        }
    }
    let (m1, m2) = (q1.chart(), q2.chart());
    let mut coords: Vec<Coord> = m1.coords().to_vec();
    let mut renamed = Vec::new();
    for c in m2.coords() {
        let mut name = c.name.clone();
        let mut k = 2;
        while coords.iter().any(|o| o.name == name) || (name != c.name && m2.index_of(&name).is_ok()) {
            name = format!("{}_{k}", c.name);
            k += 1;
        }
        if name != c.name {
            renamed.push((c.name.clone(), name.clone()));
        }
        let mut nc = c.clone();
        nc.name = name;
        coords.push(nc);
    }
    let chart = Chart::new(coords, m1.truncation().max(m2.truncation()))?;
    let first = projection(&chart, m1, 0)?;
    let second = projection(&chart, m2, m1.dim())?;
    let a = push(q1, &first, 0)?;
    let b = push(q2, &second, m1.dim())?;
    let field = a.try_add(&b)?;
    Ok(Product {
        chart,
        field,
        renamed,
        first,
        second,
    })
}
