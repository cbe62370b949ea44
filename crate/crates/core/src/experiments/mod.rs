//! Monte Carlo harness, estimators and simulation-versus-theory checks.

pub mod estimators;
pub mod growth;
pub mod mc;
pub mod suites;
pub mod verify;

pub use estimators::{
    estranged_expectation_mc, fixed_subset_kfacet_probability_mc, kfacet_expectation_mc, kfacet_profile_mc,
    pair_facet_probability_mc, reduced_kfacet_probability_mc, Caps, RunConfig,
};
pub use growth::{facet_growth_table, write_growth_csv, GrowthRow, GrowthTarget};
pub use mc::{default_workers, mc_run, mc_run_multi, MCEstimate, Welford};
pub use suites::{run_suite, Suite, SuiteBudget};
pub use verify::{
    verify_blaschke, verify_dot_density, verify_kfacet_triangulation, verify_logconcave_moment, verify_lp_limit,
    verify_simplex_volume, verify_truncated_bound, BlaschkeDistribution, LogconcaveFamily, VerificationReport,
};
