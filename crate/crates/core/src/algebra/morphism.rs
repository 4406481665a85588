use std::fmt;

use super::{Chart, GradedElem};
use crate::error::{Error, Result};

/// A pullback rule `ψ*`: each target coordinate is sent to an element over the source chart.
#[derive(Clone, PartialEq, Eq)]
pub struct ChartMorphism {
    source: Chart,
    target: Chart,
    images: Vec<GradedElem>,
}

impl ChartMorphism {
    /// Images are indexed by target coordinate and must match its parity.
    pub fn new(source: &Chart, target: &Chart, images: Vec<GradedElem>) -> Result<Self> {
        if images.len() != target.dim() {
            return Err(Error::Dimension(format!(
                "morphism needs {} images, got {}",
                target.dim(),
                images.len()
            )));
        }
        for (i, img) in images.iter().enumerate() {
            img.chart().ensure_same(source, "morphism image")?;
            if !img.has_parity(target.parity(i)) {
                return Err(Error::ParityMismatch(format!(
                    "image of `{}` is not {}",
                    target.name(i),
                    target.parity(i)
                )));
            }
        }
        Ok(ChartMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
        })
    }

    pub fn identity(chart: &Chart) -> Self {
        let images = (0..chart.dim())
            .map(|i| GradedElem::coord_at(chart, i))
            .collect();
        ChartMorphism {
            source: chart.clone(),
            target: chart.clone(),
            images,
        }
    }

    /// Builds a morphism from `(target coordinate name, image)` pairs; unnamed
    /// coordinates map to the source coordinate of the same name, or to zero.
    pub fn from_named(source: &Chart, target: &Chart, named: &[(&str, GradedElem)]) -> Result<Self> {
        let mut images = Vec::with_capacity(target.dim());
        for c in target.coords() {
            let img = match named.iter().find(|(n, _)| *n == c.name) {
                Some((_, e)) => e.clone(),
                None => match source.index_of(&c.name) {
                    Ok(j) => GradedElem::coord_at(source, j),
                    Err(_) => GradedElem::zero(source),
                },
            };
            images.push(img);
        }
        for (n, _) in named {
            target.index_of(n)?;
        }
        ChartMorphism::new(source, target, images)
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn images(&self) -> &[GradedElem] {
        &self.images
    }

    pub fn image(&self, index: usize) -> &GradedElem {
        &self.images[index]
    }

    /// `self ∘ other` as pullbacks: `(self ∘ other)* = other* ∘ self*`.
    pub fn compose(&self, other: &ChartMorphism) -> Result<ChartMorphism> {
        other.target.ensure_same(&self.source, "compose")?;
        let images = self
            .images
            .iter()
            .map(|img| img.substitute(other))
            .collect::<Result<Vec<_>>>()?;
        ChartMorphism::new(&other.source, &self.target, images)
    }
}

impl fmt::Debug for ChartMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, e)| format!("{} -> {}", self.target.name(i), e))
            .collect();
        write!(f, "ChartMorphism {{ {} }}", parts.join(", "))
    }
}
