//! Invariant geometry of the unit ball of C^n.

mod green;
mod harness;
mod moebius;

pub use green::{
    boundary_mean, green_oracle, green_potential, green_value, invariant_theta, jensen_ps_residual, kappa_constant,
    poisson_szego, poisson_szego_integral, GreenPotential, GreenPotentialSpec, InvariantTheta,
};
pub(crate) use green::adaptive_simpson;
pub use harness::{
    estimate_c_n, lemma51_harness, prop52_harness, theorem53_harness, CnEstimate, Lemma51Params, Theorem53Params,
};
pub use moebius::{bergman_distance, invariant_distance, moebius_apply, pseudo_ball_hull, MoebiusMap};
pub(crate) use harness::{resolve_c_n, run_lemma, unit_ball_mass};
