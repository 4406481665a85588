//! The coefficient ring: truncated power series in the even coordinates
//! tensored with the exterior algebra on the odd ones, over exact rationals.

mod chart;
mod elem;
mod monomial;
mod morphism;
mod parity;

pub use chart::{Chart, Coord, DEFAULT_TRUNCATION, MAX_COORDS};
pub use elem::GradedElem;
pub use monomial::{monomials, Monomial};
pub use morphism::ChartMorphism;
pub use parity::Parity;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Exact rational scalars.
pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q` or an integer.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn is_one(q: &Rational) -> bool {
    q.is_one()
}

pub(crate) fn abs(q: &Rational) -> Rational {
    q.abs()
}
