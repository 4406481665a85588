pub mod algebra;
pub mod berezin;
pub mod brackets;
pub mod constructions;
pub mod dsl;
pub mod error;
pub mod geometry;
mod linsolve;
pub mod modular;
pub mod verify;

pub use algebra::{Chart, ChartMorphism, Coord, GradedElem, Parity, Rational};
pub use berezin::{BerezinVolume, SuperMatrix};
pub use error::{Error, Result};
pub use geometry::{MixedField, VectorField};
