//! Reductions between packing variants and generators of hard instances.

mod extended;
mod hardness;
mod mcc;
mod sapp;

pub use extended::{
    plan_extended_to_full, reduce_extended_to_full, reduce_extended_to_full_capped, ExtendedInstance, ExtendedTrace,
    FullPlan, Triple, MAX_FULL_VERTICES,
};
pub use hardness::{generate_from_hamiltonian, generate_from_path_partition};
pub use mcc::{generate_mcc_extended, plan_mcc_to_full, reduce_mcc_to_full, MccInput, MccTrace};
pub use sapp::{reduce_sapp_to_alpp, solve_sapp, Backend, SappTrace};

use crate::graph::Instance;

/// A generated instance with a readable name for every vertex.
#[derive(Clone, Debug)]
pub struct Generated {
    pub instance: Instance,
    pub names: Vec<String>,
}
