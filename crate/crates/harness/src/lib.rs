//! Front end for the k-monotonicity testers: named testers, experiment matrices,
//! Wilson-interval statistics and the acceptance suite behind `kmt lemma-check`.

pub mod acceptance;
pub mod experiment;
pub mod stats;
pub mod testers;

pub use experiment::{
    read_records, run_experiment, write_plot_data, write_records, CellConfig, CellSummary, ExperimentConfig,
    ExperimentOutput, ExperimentRecord, GridPoint, ParamGrid,
};
pub use acceptance::{parse_criterion, run_all, run_criterion, CriterionReport, CRITERIA};
pub use stats::{wilson_interval, Rate};
pub use testers::{TesterArgs, TesterId};
