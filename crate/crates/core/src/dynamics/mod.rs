//! The `N`-particle jump process generated by `D_N`: rates, stationary measures,
//! simulation, the semigroup and its resolvent approximation, the positive
//! maximum principle, and the link between consecutive levels.

pub mod link;
pub mod measure;
pub mod pmp;
pub mod rates;
pub mod semigroup;
pub mod simulate;

pub use link::{intertwining_check, link_action, IntertwiningReport};
pub use measure::{
    norm_limit_check, orthogonality_check, stationary_measure, BalanceCheck, BalanceMethod,
    MeasureTable, NormLimitReport, OrthogonalityReport, Sector, TailEstimate,
};
pub use pmp::{pmp_test, PmpReport};
pub use rates::{rates, total_rate, Rate, RateTable};
pub use semigroup::{
    dn_monomial_matrix, resolvent_approx_check, semigroup_apply, semigroup_apply_phi,
    semigroup_property_check, PhiBasis, ResolventReport, SemigroupReport,
};
pub use simulate::{
    compare_with_stationary, sector_start, simulate, simulate_occupation, total_variation,
    FrontierPolicy, Occupation, SimulationComparison, SimulationConfig, Trajectory,
};
