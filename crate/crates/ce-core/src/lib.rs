//! Concentratable-entanglement toolkit: exact pure-state computation plus the
//! four statistical estimators built on local measurement data (randomized
//! local unitaries and local SIC-POVMs), with matching budget planners.
//!
//! The crate is `no_std`-compatible (`--no-default-features --features libm`);
//! file formats and the CLI live in the companion `ce-lab` crate.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod ensemble;
pub mod error;
pub mod estimator;
pub mod mat;
pub mod planner;
pub mod sic;
pub mod sim;
pub mod state;

pub use error::{Error, Result};
pub use estimator::{
    coincidence_stat, lrm_mean_estimate, lrm_mom_estimate, lrm_variance, median,
    moments_oracle, sic_mom_k2_estimate, sic_mom_kopt_estimate, sic_variance,
    squared_prob_estimates, EstimateResult, MomentProvenance, MomentSource, MomentSummary,
};
pub use planner::{batch_count, hoeffding_samples, k_opt, mom_plan, plan, BudgetPlan, Strategy};
pub use sim::{
    dilated_sic_distribution, lrm_distribution, sic_distribution, simulate_lrm, simulate_sic,
    simulate_sic_dilated, substream, LrmRecord, LrmSettings, SicRecord,
};
pub use state::{
    ce_to_concurrence, exact_ce, exact_ce_via_projectors, mixed_lower_bound, reduced_purity,
    ConcurrenceValue, PureState, SubsetPurities, SubsetSpec, TwoCopyOperators, TWO_COPY_CAP,
};
pub use ensemble::{
    clifford_table, design_check, sample_haar_u2, twirl_check, EnsembleKind, LocalUnitary,
    SingleQubitUnitary, TwirlMode,
};
pub use sic::{sic_constants, SicConstants};
