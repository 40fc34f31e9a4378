//! Census, emptiness tables, degree fitting, fibre constancy, the
//! witness-certified stratification poset and products of censuses.

mod census;
mod fibers;
mod fit;
mod poset;
mod product;

pub use census::{
    census, census_with_model, claimed_table_e4, classify, classify_chains, compare_tables, lattices_by_hodge,
    render_table, universal_checks, Census, Classification, EmptinessTable, TableDiff, UniversalChecks,
};
pub use fibers::{fiber_constancy, fiber_degrees, FiberDegree, FiberGroup, FiberReport};
pub use fit::{degree_fit, DegreeFit, Rational, DEFAULT_SAMPLES};
pub use poset::{
    build_poset, build_poset_from, EdgeCertificate, Layer, NotFoundEntry, PointWitness, PosetNode, PosetOptions,
    PosetReport, ORDER_SCOPE,
};
pub use product::{product_census, ProductCensus};
