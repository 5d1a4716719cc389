//! Experiments: basic cycles and their products on trees, generation
//! degrees of families, and polynomial growth of Betti numbers.

mod cycles;
mod generation;
mod poly;

pub use cycles::{h_cycle, product_cycle, star_cycle, BasicCycle, BasicKind, Parked, Parking};
pub use generation::{
    generation_degree_check, degree_bound, product_candidates, tree_generator_report,
    verify_tree_generators, DegreeVerdict, GenerationReport, TreeGeneratorReport,
};
pub use poly::{dimension_polynomial_check, fit_points, PolyFit};
