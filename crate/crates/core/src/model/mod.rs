//! Domain types shared by every algorithm: metrics, datasets with group
//! structure, weighted sets, fairness specifications, assignments and
//! constraint matrices.

mod assignment;
mod dataset;
mod fairness;
mod metric;
mod weighted;

pub use assignment::{clustering_cost, constraint_matrix_of, Assignment, ConstraintMatrix};
pub use dataset::{build_equivalence_classes, Dataset, EquivalenceClasses};
pub use fairness::{
    fairness_check, matrix_violations, parse_ratio, ratio_f64, FairnessSpec, Violation,
    ViolationKind,
};
pub use metric::{Center, Metric, Objective, TRIANGLE_SLACK};
pub use weighted::{WeightedPoint, WeightedSet};
