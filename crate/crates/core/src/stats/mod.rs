//! Paired cross-dataset comparison of two methods.

mod report;
mod wilcoxon;

pub use report::{compare_report, DatasetRow, Frontier, MethodSummary, Report, TestRow, ALPHA, METRICS};
pub use wilcoxon::{
    average_ranks, exact_p, normal_p, signed_rank_test, wilcoxon_signed_rank, PairedResults, WilcoxonResult,
    EXACT_MAX_N,
};
