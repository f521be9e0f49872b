//! Constructions with certified constants and the scalar analysis behind them.

pub mod analytic;
pub mod certificate;
pub mod lattice;
pub mod perturbed;
pub mod removed;
pub mod separated;

pub use analytic::{beta_gap_holds, g, lemma_p_k_1_bound, omega_increasing_check, solve_beta, BetaSolution};
pub use certificate::{flags, oracle_certificate, FrameCertificate, Method, Param};
pub use lattice::{complement_certificate, complement_certificate_with, prop_basis, prop_basis_mod, BasisWitness, ComplementRule};
pub use perturbed::{construct_thm_main, delta_range_thm_main, thm_main_bounds, DeltaRange};
pub use removed::{construct_thm_main_2, delta_range_thm_main_2, thm_main_2_bounds};
pub use separated::{certify_thm_main_3, certify_thm_main_3_corollary, separation_factor, separation_margin, u_threshold, wrap_int};
