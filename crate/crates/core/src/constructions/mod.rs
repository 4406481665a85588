//! Standard Q-manifolds and the lifts between them.

mod algebroid;
mod cotangent;
mod double;
mod nijenhuis;
mod product;
mod tangent;
mod zoo;

pub use algebroid::{
    assembled_divergence, bi_weight, l_infinity_algebroid, l_infinity_local_rep, lie_algebroid, q_algebroid_formula,
    q_algebroid_sum, structure, AlgebroidData,
};
pub use cotangent::{
    anticotangent, anticotangent_lift, anticotangent_lift_closed_form, cotangent, cotangent_lift,
    cotangent_lift_closed_form, even_symbol, odd_symbol,
};
pub use double::{double_from_algebroid, double_modular_rep, DoubleData, DoubleStructure, Side};
pub use nijenhuis::{nijenhuis_field, nijenhuis_field_unchecked, trace_differential};
pub use product::{product, Product};
pub use tangent::{anchor, antitangent, de_rham, interior, lie_derivative_lift, mqk_conjugate, Antitangent};
pub use zoo::{zoo, ZooEntry};
