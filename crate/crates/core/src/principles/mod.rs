//! Minimum and maximum principles: Cartan discs, Lelong-class lower bounds, capacity,
//! and the three-circle estimates.

mod capacity;
mod cartan;
mod constants;
mod lelong_class;
mod min_modulus;
mod sup;
mod three_circle;

pub use cartan::{cartan_cover, cartan_groups, check_lemniscate_cover, verify_lemniscate_cover, CartanGroup, LemniscateCheck};
pub use constants::{h_constant, moebius_inclusion_radius, nu_constant, rho_constant};
pub use min_modulus::min_modulus_1d;
pub use sup::{circle_sup, sphere_sup, SUP_NODES, SUP_NODES_1D};
pub use lelong_class::{corollary43_harness, theorem42_harness, Corollary43Params, Theorem42Params, NUMERIC_SCAN_DEPTH};
pub use capacity::{capacity_1d, corollary44_check, CapacityEstimate, CapacityMethod, PlaneSet, MAX_FEKETE_POINTS};
pub use three_circle::{
    corollary64_harness, essential_lower_bound, lelong_bound_check, three_circle_eta0, three_circle_max_check,
    three_circle_min_harness, LelongBound, ThreeCircleParams, COROLLARY64_SIGMA,
};
