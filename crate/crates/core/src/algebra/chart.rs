use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::Parity;
use crate::error::{Error, Result};

/// Default even truncation order for new charts.
pub const DEFAULT_TRUNCATION: u32 = 8;

/// Charts are limited to this many coordinates so odd subsets fit a `u64` mask.
pub const MAX_COORDS: usize = 64;

/// One coordinate of a chart.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coord {
    pub name: String,
    pub parity: Parity,
    /// Optional bi-weight, bookkeeping only.
    pub weight: Option<(u32, u32)>,
}

impl Coord {
    pub fn new(name: impl Into<String>, parity: Parity) -> Self {
        Coord {
            name: name.into(),
            parity,
            weight: None,
        }
    }

    pub fn even(name: impl Into<String>) -> Self {
        Coord::new(name, Parity::Even)
    }

    pub fn odd(name: impl Into<String>) -> Self {
        Coord::new(name, Parity::Odd)
    }

    pub fn with_weight(mut self, weight: (u32, u32)) -> Self {
        self.weight = Some(weight);
        self
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct ChartData {
    coords: Vec<Coord>,
    truncation: u32,
    odd_mask: u64,
}

/// An ordered coordinate system together with the even truncation order.
///
/// Charts are cheap to clone and compare structurally: two charts with the
/// same coordinates (names, parities, weights) and truncation are the same chart.
#[derive(Clone)]
pub struct Chart(Arc<ChartData>);

impl Hash for Chart {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Chart {}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, c) in self.0.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} {}", c.parity, c.name)?;
        }
        write!(f, "}} truncation {}", self.0.truncation)
    }
}

impl Chart {
    pub fn new(coords: Vec<Coord>, truncation: u32) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidChart("truncation must be at least 1".into()));
        }
        if coords.len() > MAX_COORDS {
            return Err(Error::InvalidChart(format!(
                "at most {MAX_COORDS} coordinates are supported"
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            if c.name.is_empty() {
                return Err(Error::InvalidChart("empty coordinate name".into()));
            }
            if coords[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::DuplicateCoordinate(c.name.clone()));
            }
        }
        let odd_mask = coords
            .iter()
            .enumerate()
            .filter(|(_, c)| c.parity.is_odd())
            .fold(0u64, |m, (i, _)| m | (1 << i));
        Ok(Chart(Arc::new(ChartData {
            coords,
            truncation,
            odd_mask,
        })))
    }

    /// Chart with the default truncation order.
    pub fn with_coords(coords: Vec<Coord>) -> Result<Self> {
        Chart::new(coords, DEFAULT_TRUNCATION)
    }

    /// Convenience: `n` even coordinates followed by `m` odd ones.
    pub fn from_names(even: &[&str], odd: &[&str], truncation: u32) -> Result<Self> {
        let coords = even
            .iter()
            .map(|n| Coord::even(*n))
            .chain(odd.iter().map(|n| Coord::odd(*n)))
            .collect();
        Chart::new(coords, truncation)
    }

    /// The zero-dimensional chart (a point).
    pub fn point(truncation: u32) -> Self {
        Chart::new(Vec::new(), truncation).expect("empty chart is valid")
    }

    pub fn coords(&self) -> &[Coord] {
        &self.0.coords
    }

    pub fn dim(&self) -> usize {
        self.0.coords.len()
    }

    /// `(even, odd)` dimension.
    pub fn superdim(&self) -> (usize, usize) {
        let odd = self.0.odd_mask.count_ones() as usize;
        (self.dim() - odd, odd)
    }

    pub fn truncation(&self) -> u32 {
        self.0.truncation
    }

    pub fn odd_mask(&self) -> u64 {
        self.0.odd_mask
    }

    pub fn parity(&self, index: usize) -> Parity {
        self.0.coords[index].parity
    }

    pub fn name(&self, index: usize) -> &str {
        &self.0.coords[index].name
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .coords
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCoordinate(name.to_string()))
    }

    pub fn has_even_coords(&self) -> bool {
        self.0.coords.iter().any(|c| c.parity.is_even())
    }

    /// Same coordinates, new truncation order.
    pub fn with_truncation(&self, truncation: u32) -> Result<Self> {
        Chart::new(self.0.coords.clone(), truncation)
    }

    pub fn ensure_same(&self, other: &Chart, what: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ChartMismatch(format!("{what}: {self} vs {other}")))
        }
    }
}
