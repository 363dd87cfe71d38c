//! Experiment orchestration: run configs, data recipes, the experiment registry and report writers.

mod config;
mod experiments;
mod manifest;
mod recipes;
mod registry;
mod schema;
mod sweep;

pub use config::{NormSpace, NormSpec, RunConfig};
pub use experiments::{
    collect_outcomes, experiments, run_experiment, BesovBench, Context, DispersionExperiment, Experiment,
    NamedVerdict, Outcome, SingleRun, SweepExperiment, BALANCE_TOL, INDEX_COLUMNS, VERDICTS_FILE,
};
pub use manifest::{config_hash, Manifest, MemberStatus, SCHEMA_VERSION};
pub use recipes::{bulk_field, planar_field, recipes, shell_field, BulkOnly, DataRecipe, IllPrepared, PlanarOnly, RandomData};
pub use registry::Registry;
pub use schema::{output_schemas, OutputSchema, MANIFEST_FIELDS, VERDICT_FIELDS};
pub use sweep::{
    magnetic_id, member_dt, run_member, run_sweep, sweep_grid, velocity_id, write_sweep, MemberValues,
    QuantitySummary, RateReport, RateRow, D0_FROZEN, D_NORM_ID, SWEEP_COLUMNS, ZERO_FLOOR,
};
