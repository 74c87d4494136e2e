//! Independent recomputation of every closed form from the metric itself, and
//! the reports that compare the two.

mod generic;
mod golden;
mod report;
mod verify;

pub use generic::{christoffels_generic, laplace_beltrami, sample, OracleSample};
pub use golden::{check_golden, is_structural, oracle_values, parse_golden, pin_golden, GoldenEntry, OracleValues};
pub use report::{
    Adjudication, AdjudicationSummary, Candidate, DiscrepancyReport, Record, Tolerance, ToleranceTable, Verdict,
    ADJUDICATED,
};
pub use verify::{verify_fixture, verify_fixture_with, VerifyOptions, DEFAULT_STEP};
