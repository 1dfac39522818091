//! Extremal search over digital sets and theorem sweeps.

pub mod classify;
pub mod enumerate;
pub mod report;
pub mod search;
pub mod verify;

pub use classify::{classify_structure, IntervalVariant, Purpose, StructureClass};
pub use enumerate::{enumerate, shard_range, EnumerationPlan, Reduction};
pub use report::{
    Claim, MinTrack, Observed, SweepTally, VerificationReport, Witness, WitnessStat, REPORT_SCHEMA,
};
pub use search::{
    exhaustive_plan, min_c1, min_c2, search, search_shard, SearchMode, SearchOutcome,
    SearchPartial, Statistic, DEFAULT_BUDGET,
};
pub use verify::{plan_theorem, verify_theorem, Params, SweepPlan, TheoremId};
