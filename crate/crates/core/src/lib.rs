//! Exact dimension tables for bundle-valued Dolbeault cohomology of compact
//! complex manifolds, and their behaviour under blow-ups, blow-downs, and
//! projective bundles.

pub mod engine;
pub mod error;
pub mod models;
pub mod scenario;
pub mod suite;
pub mod tables;

pub use engine::{
    blow_down, blow_up, borel_e2_dimension, coker_identity_check, hochschild_blowup_check,
    invariance_report, lift_rank_profile, projective_bundle, relative_cohomology, relative_pair,
    tower_evaluate, BlowUpSpec, CellCheck, InvarianceReport, RelativeCohomologyVector,
    RestrictionRankProfile, TowerStep,
};
pub use error::{Error, Result};
pub use models::{
    abelian_variety_table, binomial, curve_table, custom_table, point_table,
    projective_space_table, AbelianTwist, CurveBundleKind, CurveBundleSpec, ProjectiveTwistSpec,
};
pub use scenario::{
    execute, parse_scenario, render_report, OutputFormat, Report, Scenario, Status,
};
pub use tables::{CohomologyTable, HochschildVector};
