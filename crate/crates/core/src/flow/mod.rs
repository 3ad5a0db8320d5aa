//! Integral min-cost flow and the flow-shaped assignment problems built on
//! it: per-class transport, lower-bounded, capacitated and chromatic
//! assignment, plus the cost rounding used when restoring assignments.

mod assign;
mod network;

pub use assign::{
    capacitated_assign, chromatic_assign, class_transport, cost_rounding, lower_bounded_assign,
    nearest_assignment, CostRounding, Transport,
};
pub use network::{min_cost_flow, Arc, FlowNetwork, FlowResult};
