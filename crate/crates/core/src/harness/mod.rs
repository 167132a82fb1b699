//! Corpus, problem files, timed experiments and reports.

pub mod corpus;
mod experiment;
mod problem_file;
mod report;

pub use experiment::{order_string, run_experiment, sort_records, ExperimentRecord, Status};
pub use problem_file::{parse_problem, write_problem};
pub use report::{
    correlation_analysis, emit_csv, emit_report_csv, format_sig, parse_csv, records_to_csv, CorrelationPoint,
    CorrelationReport, Substitution, CENSORED_CELLS, CENSORED_TIME_MS, CENSORING_RULES, CSV_HEADER, TIME_LIMIT_MS,
};
